//! Graphviz export. Compact edges are undirected and carry the palette
//! color plus the crossing ray as seen from their lower endpoint; infinite
//! and truncated slots become half-edges to small phantom nodes.

use std::fmt::Write;

use num_rational::BigRational;

use mgraph_core::coloring::{global_coloring, Coloring, ColoringOutcome};
use mgraph_core::{MGraph, Scalar, SlotTarget};

use crate::doc::{rat_to_string, AnyGraph};

fn edge_color(coloring: Option<&Coloring>, v: mgraph_core::VertexId, slot: usize) -> usize {
    coloring.and_then(|c| c.color(v, slot)).unwrap_or(slot)
}

fn render<S: Scalar>(g: &MGraph<S>, ray_label: impl Fn(&[S]) -> String) -> String {
    let coloring = match global_coloring(g) {
        Ok(ColoringOutcome::Proper(c)) => Some(c),
        _ => None,
    };
    let mut out = String::new();
    out.push_str("graph mgraph {\n");
    out.push_str("  node [shape=circle fontsize=10];\n");
    for v in g.vertex_ids() {
        let _ = writeln!(out, "  v{} [label=\"{}\"];", v.0, v.0);
    }
    let mut phantom = 0usize;
    for v in g.vertex_ids() {
        let rec = g.vertex(v);
        for (slot, (&via, &target)) in rec.basis().iter().zip(rec.targets()).enumerate() {
            let label = format!(
                "c{} {}",
                edge_color(coloring.as_ref(), v, slot),
                ray_label(g.roots().get(via).ray().dir())
            );
            match target {
                SlotTarget::Vertex(w) => {
                    if v.0 < w.0 {
                        let _ = writeln!(out, "  v{} -- v{} [label=\"{label}\"];", v.0, w.0);
                    }
                }
                SlotTarget::Infinite => {
                    let _ = writeln!(
                        out,
                        "  p{phantom} [shape=point width=0.05];\n  v{} -- p{phantom} [style=dashed label=\"{label}\"];",
                        v.0
                    );
                    phantom += 1;
                }
                SlotTarget::Truncated => {
                    let _ = writeln!(
                        out,
                        "  p{phantom} [shape=point width=0.05];\n  v{} -- p{phantom} [style=dotted];",
                        v.0
                    );
                    phantom += 1;
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

fn float_coords(dir: &[f64]) -> String {
    let parts: Vec<String> = dir.iter().map(|x| format!("{x:.3}")).collect();
    format!("({})", parts.join(","))
}

fn rational_coords(dir: &[BigRational]) -> String {
    let parts: Vec<String> = dir.iter().map(rat_to_string).collect();
    format!("({})", parts.join(","))
}

pub fn to_dot(g: &AnyGraph) -> String {
    match g {
        AnyGraph::Rational(g) => render(g, rational_coords),
        AnyGraph::Float(g) => render(g, float_coords),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mgraph_core::generators::{build_rank2, Rank2};

    #[test]
    fn hexagon_dot_has_undirected_edges_and_no_phantoms() {
        let g = build_rank2(Rank2::Polygon { m: 3 }).unwrap();
        let dot = to_dot(&AnyGraph::Float(g));
        assert!(dot.starts_with("graph mgraph {"));
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert!(!dot.contains("style=dashed"));
    }

    #[test]
    fn segment_dot_draws_two_half_edges() {
        let g = build_rank2(Rank2::Segment { k: 2 }).unwrap();
        let dot = to_dot(&AnyGraph::Float(g));
        assert_eq!(dot.matches("style=dashed").count(), 2);
    }
}
