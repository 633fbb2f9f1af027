//! JSON documents for graphs, paths, certificates, reports, colorings and
//! fans. Documents are written compactly with fields in a fixed order and
//! collections sorted by id, so equal objects serialize to equal bytes;
//! rational coordinates are `"p/q"` strings and round-trip exactly.

use std::fs;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use mgraph_core::braid::{BraidMove, Certificate};
use mgraph_core::coloring::Coloring;
use mgraph_core::dual::{SliceAnalysis, SliceFan};
use mgraph_core::graph::{Check, Report, RootSpec, VertexSpec};
use mgraph_core::{Error, MGraph, Path, Result, RootId, Scalar, SlotTarget, VertexId};

/// One coordinate: a `"p/q"` string in rational documents, a JSON number
/// in float documents.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coord {
    Rat(String),
    Num(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RootDoc {
    pub id: u32,
    pub coords: Vec<Coord>,
    pub invertible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg: Option<u32>,
}

/// A slot seen from one vertex: the wall crossed and where it leads.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SlotDoc {
    Edge { via: u32, to: u32 },
    Infinite { via: u32, infinite: bool },
    Truncated { via: u32, truncated: bool },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VertexDoc {
    pub id: u32,
    pub interior: bool,
    pub basis: Vec<u32>,
    pub slots: Vec<SlotDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphDocument {
    pub dim: usize,
    pub backend: String,
    pub base: u32,
    pub roots: Vec<RootDoc>,
    pub vertices: Vec<VertexDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PathDoc {
    pub start: u32,
    pub roots: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MoveDoc {
    pub pos: usize,
    pub replacement: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateDoc {
    pub source: PathDoc,
    pub target: PathDoc,
    pub moves: Vec<MoveDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportDoc {
    pub windowed: bool,
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ColorDoc {
    pub vertex: u32,
    pub slot: usize,
    pub color: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ColoringDoc {
    pub palette: usize,
    pub colors: Vec<ColorDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WallDoc {
    pub functional: Vec<Coord>,
    pub neighbor: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChamberDoc {
    pub corners: Vec<Vec<Coord>>,
    pub walls: Vec<WallDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FanDoc {
    pub chambers: Vec<ChamberDoc>,
}

/// A graph under either scalar backend.
#[derive(Debug, Clone)]
pub enum AnyGraph {
    Rational(MGraph<BigRational>),
    Float(MGraph<f64>),
}

/// Serializes compactly with a trailing newline; all stdout payloads go
/// through here so repeated runs emit identical bytes.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn rat_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_from_str(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num.trim())
        .map_err(|_| Error::Parse(format!("bad rational numerator {num:?}")))?;
    let d = BigInt::from_str(den.trim())
        .map_err(|_| Error::Parse(format!("bad rational denominator {den:?}")))?;
    if d == BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

fn slot_doc(via: RootId, target: SlotTarget) -> SlotDoc {
    match target {
        SlotTarget::Vertex(w) => SlotDoc::Edge { via: via.0, to: w.0 },
        SlotTarget::Infinite => SlotDoc::Infinite {
            via: via.0,
            infinite: true,
        },
        SlotTarget::Truncated => SlotDoc::Truncated {
            via: via.0,
            truncated: true,
        },
    }
}

fn document_from<S: Scalar>(
    g: &MGraph<S>,
    backend: &str,
    coord: impl Fn(&S) -> Coord,
) -> GraphDocument {
    let roots = g
        .roots()
        .iter()
        .map(|(id, e)| RootDoc {
            id: id.0,
            coords: e.ray().dir().iter().map(&coord).collect(),
            invertible: e.invertible(),
            neg: e.neg().map(|n| n.0),
        })
        .collect();
    let vertices = g
        .vertex_ids()
        .map(|v| {
            let rec = g.vertex(v);
            VertexDoc {
                id: v.0,
                interior: rec.interior(),
                basis: rec.basis().iter().map(|r| r.0).collect(),
                slots: rec
                    .basis()
                    .iter()
                    .zip(rec.targets())
                    .map(|(&via, &t)| slot_doc(via, t))
                    .collect(),
            }
        })
        .collect();
    GraphDocument {
        dim: g.dim(),
        backend: backend.into(),
        base: g.base().0,
        roots,
        vertices,
    }
}

pub fn document_from_rational(g: &MGraph<BigRational>) -> GraphDocument {
    document_from(g, "rational", |x| Coord::Rat(rat_to_string(x)))
}

pub fn document_from_float(g: &MGraph<f64>) -> GraphDocument {
    document_from(g, "float", |x| Coord::Num(*x))
}

pub fn document_from_any(g: &AnyGraph) -> GraphDocument {
    match g {
        AnyGraph::Rational(g) => document_from_rational(g),
        AnyGraph::Float(g) => document_from_float(g),
    }
}

fn coord_rational(c: &Coord) -> Result<BigRational> {
    match c {
        Coord::Rat(s) => rat_from_str(s),
        Coord::Num(_) => Err(Error::Parse(
            "rational document contains a bare number coordinate".into(),
        )),
    }
}

fn coord_float(c: &Coord) -> Result<f64> {
    match c {
        Coord::Num(x) => Ok(*x),
        Coord::Rat(s) => Err(Error::Parse(format!(
            "float document contains a rational coordinate {s:?}"
        ))),
    }
}

fn specs_from_document<S: Scalar>(
    doc: &GraphDocument,
    coord: impl Fn(&Coord) -> Result<S>,
) -> Result<MGraph<S>> {
    let mut roots = Vec::with_capacity(doc.roots.len());
    for (i, r) in doc.roots.iter().enumerate() {
        if r.id as usize != i {
            return Err(Error::Parse(format!(
                "root ids must be dense and sorted, found {} at position {i}",
                r.id
            )));
        }
        roots.push(RootSpec {
            coords: r.coords.iter().map(&coord).collect::<Result<_>>()?,
            invertible: r.invertible,
            neg: r.neg.map(RootId),
        });
    }
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.id as usize != i {
            return Err(Error::Parse(format!(
                "vertex ids must be dense and sorted, found {} at position {i}",
                v.id
            )));
        }
        if v.basis.len() != v.slots.len() {
            return Err(Error::Parse(format!(
                "vertex {} has {} basis roots but {} slots",
                v.id,
                v.basis.len(),
                v.slots.len()
            )));
        }
        let mut targets = Vec::with_capacity(v.slots.len());
        for (slot, (s, &b)) in v.slots.iter().zip(&v.basis).enumerate() {
            let (via, target) = match s {
                SlotDoc::Edge { via, to } => (*via, SlotTarget::Vertex(VertexId(*to))),
                SlotDoc::Infinite { via, infinite } => {
                    if !infinite {
                        return Err(Error::Parse("slot with \"infinite\": false".into()));
                    }
                    (*via, SlotTarget::Infinite)
                }
                SlotDoc::Truncated { via, truncated } => {
                    if !truncated {
                        return Err(Error::Parse("slot with \"truncated\": false".into()));
                    }
                    (*via, SlotTarget::Truncated)
                }
            };
            if via != b {
                return Err(Error::Parse(format!(
                    "vertex {} slot {slot}: basis root {} disagrees with via {}",
                    v.id, b, via
                )));
            }
            targets.push(target);
        }
        vertices.push(VertexSpec {
            basis: v.basis.iter().map(|&b| RootId(b)).collect(),
            targets,
        });
    }
    // The vertex's stored interior flag is recomputed from the slots on
    // assembly; a mismatch means the document was edited inconsistently.
    let g = MGraph::assemble(doc.dim, roots, vertices, VertexId(doc.base))?;
    for (dv, v) in doc.vertices.iter().zip(g.vertex_ids()) {
        if dv.interior != g.interior(v) {
            return Err(Error::Parse(format!(
                "vertex {} marked interior={} but its slots say otherwise",
                dv.id, dv.interior
            )));
        }
    }
    Ok(g)
}

pub fn graph_from_document(doc: &GraphDocument) -> Result<AnyGraph> {
    match doc.backend.as_str() {
        "rational" => Ok(AnyGraph::Rational(specs_from_document(
            doc,
            coord_rational,
        )?)),
        "float" => Ok(AnyGraph::Float(specs_from_document(doc, coord_float)?)),
        other => Err(Error::Parse(format!("unknown backend {other:?}"))),
    }
}

pub fn parse_graph(json: &str) -> Result<AnyGraph> {
    let doc: GraphDocument =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("bad graph JSON: {e}")))?;
    graph_from_document(&doc)
}

pub fn build_from_file(path: &str) -> Result<AnyGraph> {
    let json =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    parse_graph(&json)
}

pub fn path_to_doc(p: &Path) -> PathDoc {
    PathDoc {
        start: p.start().0,
        roots: p.roots().iter().map(|r| r.0).collect(),
    }
}

pub fn path_from_doc<S: Scalar>(g: &MGraph<S>, doc: &PathDoc) -> Result<Path> {
    let roots: Vec<RootId> = doc.roots.iter().map(|&r| RootId(r)).collect();
    Path::from_roots(g, VertexId(doc.start), &roots)
}

pub fn certificate_to_doc(c: &Certificate) -> CertificateDoc {
    CertificateDoc {
        source: path_to_doc(&c.source),
        target: path_to_doc(&c.target),
        moves: c
            .moves
            .iter()
            .map(|m| MoveDoc {
                pos: m.pos,
                replacement: m.replacement.iter().map(|r| r.0).collect(),
            })
            .collect(),
    }
}

pub fn certificate_from_doc<S: Scalar>(g: &MGraph<S>, doc: &CertificateDoc) -> Result<Certificate> {
    Ok(Certificate {
        source: path_from_doc(g, &doc.source)?,
        target: path_from_doc(g, &doc.target)?,
        moves: doc
            .moves
            .iter()
            .map(|m| BraidMove {
                pos: m.pos,
                replacement: m.replacement.iter().map(|&r| RootId(r)).collect(),
            })
            .collect(),
    })
}

fn check_to_doc(c: &Check) -> CheckDoc {
    CheckDoc {
        name: c.name.into(),
        passed: c.passed,
        witnesses: c.witnesses.clone(),
    }
}

pub fn report_to_doc(r: &Report) -> ReportDoc {
    ReportDoc {
        windowed: r.windowed,
        passed: r.all_passed(),
        checks: r.checks.iter().map(check_to_doc).collect(),
    }
}

pub fn coloring_to_doc(c: &Coloring) -> ColoringDoc {
    ColoringDoc {
        palette: c.palette,
        colors: c
            .colors
            .iter()
            .map(|(&(v, slot), &color)| ColorDoc {
                vertex: v.0,
                slot,
                color,
            })
            .collect(),
    }
}

pub fn fan_to_doc(fan: &SliceFan<BigRational>, analysis: &SliceAnalysis<BigRational>) -> FanDoc {
    FanDoc {
        chambers: fan
            .chambers
            .iter()
            .zip(&analysis.chambers)
            .map(|(ch, walls)| ChamberDoc {
                corners: ch
                    .corners
                    .iter()
                    .map(|(x, y)| vec![Coord::Rat(rat_to_string(x)), Coord::Rat(rat_to_string(y))])
                    .collect(),
                walls: walls
                    .iter()
                    .map(|w| WallDoc {
                        functional: w
                            .functional
                            .iter()
                            .map(|x| Coord::Rat(rat_to_string(x)))
                            .collect(),
                        neighbor: w.neighbor,
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Parses `"c1,c2,…"` into a functional under the graph's backend.
pub fn parse_functional(g: &AnyGraph, text: &str) -> Result<AnyFunctional> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match g {
        AnyGraph::Rational(_) => Ok(AnyFunctional::Rational(
            parts.iter().map(|p| rat_from_str(p)).collect::<Result<_>>()?,
        )),
        AnyGraph::Float(_) => {
            let mut out = Vec::with_capacity(parts.len());
            for p in &parts {
                out.push(
                    f64::from_str(p)
                        .map_err(|_| Error::Parse(format!("bad float coordinate {p:?}")))?,
                );
            }
            Ok(AnyFunctional::Float(out))
        }
    }
}

#[derive(Debug, Clone)]
pub enum AnyFunctional {
    Rational(Vec<BigRational>),
    Float(Vec<f64>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use mgraph_core::generators::{build_weyl, CartanMatrix};

    #[test]
    fn rational_documents_round_trip_bit_exactly() {
        let g = build_weyl(&CartanMatrix::type_b(2).unwrap(), 8).unwrap();
        let doc = document_from_rational(&g);
        let json = to_json_line(&doc);
        let back = parse_graph(&json).unwrap();
        let AnyGraph::Rational(back) = back else {
            panic!("backend changed");
        };
        assert_eq!(to_json_line(&document_from_rational(&back)), json);
    }

    #[test]
    fn rational_strings_parse_both_forms() {
        assert_eq!(rat_from_str("3").unwrap(), rat_from_str("6/2").unwrap());
        assert_eq!(rat_from_str("-1/2").unwrap(), -rat_from_str("1/2").unwrap());
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("x").is_err());
    }

    #[test]
    fn backend_and_coordinate_kind_must_agree() {
        let g = build_weyl(&CartanMatrix::type_a(2).unwrap(), 6).unwrap();
        let mut doc = document_from_rational(&g);
        doc.roots[0].coords[0] = Coord::Num(0.5);
        assert!(matches!(graph_from_document(&doc), Err(Error::Parse(_))));
        doc.backend = "decimal".into();
        assert!(matches!(graph_from_document(&doc), Err(Error::Parse(_))));
    }

    #[test]
    fn edited_interior_flags_are_caught() {
        let g = build_weyl(&CartanMatrix::type_a(2).unwrap(), 6).unwrap();
        let mut doc = document_from_rational(&g);
        doc.vertices[0].interior = false;
        assert!(matches!(graph_from_document(&doc), Err(Error::Parse(_))));
    }
}
