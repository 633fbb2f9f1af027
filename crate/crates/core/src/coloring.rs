//! Edge colorings transported along the quotient correspondence.
//!
//! Crossing an edge with root ray `l` identifies the remaining walls of
//! the two endpoint vertices through the quotient space `V / l`: walls
//! with the same projected ray correspond. Propagating the base vertex's
//! slot numbering through these bijections yields a global proper edge
//! coloring when every closed walk transports trivially; the holonomy of
//! a cycle measures the failure.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{MGraph, Path, SlotTarget, VertexId};
use crate::scalar::{complement_frame, quotient_ray, Scalar};

/// A proper edge coloring by base slot indices: `colors[(v, slot)]` is the
/// palette color of the edge leaving `v` through `slot`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub palette: usize,
    pub colors: BTreeMap<(VertexId, usize), usize>,
}

impl Coloring {
    pub fn color(&self, v: VertexId, slot: usize) -> Option<usize> {
        self.colors.get(&(v, slot)).copied()
    }
}

/// Result of attempting a global coloring.
#[derive(Debug, Clone)]
pub enum ColoringOutcome {
    Proper(Coloring),
    /// A closed walk whose transported numbering disagrees with itself.
    Inconsistent { cycle: Vec<VertexId> },
}

fn slot_correspondence<S: Scalar>(
    g: &MGraph<S>,
    v: VertexId,
    slot: usize,
) -> Result<Vec<usize>> {
    let SlotTarget::Vertex(w) = g.vertex(v).targets()[slot] else {
        return Err(Error::Parse(format!(
            "slot {slot} of vertex {v} is not a compact edge"
        )));
    };
    let lost = g.vertex(v).basis()[slot];
    let gained = g
        .roots()
        .get(lost)
        .neg()
        .expect("compact edges carry invertible roots");
    let reverse = g
        .vertex(w)
        .basis()
        .iter()
        .position(|&r| r == gained)
        .expect("reverse slot exists");

    let dim = g.dim();
    let mut map = alloc::vec![usize::MAX; dim];
    map[slot] = reverse;
    if dim == 1 {
        return Ok(map);
    }

    let modulus = g.roots().get(lost).ray().clone();
    let frame = complement_frame(modulus.dir());
    let mut w_keys: BTreeMap<S::Key, usize> = BTreeMap::new();
    for j in 0..dim {
        if j == reverse {
            continue;
        }
        let ray = g.roots().get(g.vertex(w).basis()[j]).ray().clone();
        let q = quotient_ray(&modulus, &ray, &frame)?;
        if w_keys.insert(q.key().clone(), j).is_some() {
            return Err(Error::AxiomViolation(format!(
                "two walls of vertex {w} project to one ray across the edge"
            )));
        }
    }
    for (i, m) in map.iter_mut().enumerate() {
        if i == slot {
            continue;
        }
        let ray = g.roots().get(g.vertex(v).basis()[i]).ray().clone();
        let q = quotient_ray(&modulus, &ray, &frame)?;
        let Some(&j) = w_keys.get(q.key()) else {
            return Err(Error::AxiomViolation(format!(
                "wall {i} of vertex {v} has no partner across the edge to {w}"
            )));
        };
        *m = j;
    }
    let mut seen = alloc::vec![false; dim];
    for &j in &map {
        if j == usize::MAX || seen[j] {
            return Err(Error::AxiomViolation(format!(
                "edge correspondence at vertex {v} is not a bijection"
            )));
        }
        seen[j] = true;
    }
    Ok(map)
}

/// The slot bijection across one compact edge; `result[i]` is the slot of
/// the far vertex corresponding to slot `i` here. Both endpoints must be
/// interior, since the identification quantifies over full walls.
pub fn edge_correspondence<S: Scalar>(
    g: &MGraph<S>,
    v: VertexId,
    slot: usize,
) -> Result<Vec<usize>> {
    if !g.interior(v) {
        return Err(Error::BoundaryVertex(v.0));
    }
    if let SlotTarget::Vertex(w) = g.vertex(v).targets()[slot] {
        if !g.interior(w) {
            return Err(Error::BoundaryVertex(w.0));
        }
    }
    slot_correspondence(g, v, slot)
}

/// Transports the base slot numbering over a breadth-first tree of the
/// interior core, then one step onto the boundary. Every non-tree edge is
/// checked; a disagreement yields the witness cycle through the base.
pub fn global_coloring<S: Scalar>(g: &MGraph<S>) -> Result<ColoringOutcome> {
    let dim = g.dim();
    let base = g.base();
    if !g.interior(base) {
        return Err(Error::OutOfWindow);
    }

    let n = g.vertex_count();
    let mut assigned: Vec<Option<Vec<usize>>> = alloc::vec![None; n];
    let mut parent: Vec<Option<VertexId>> = alloc::vec![None; n];
    assigned[base.index()] = Some((0..dim).collect());

    let tree_walk = |parent: &[Option<VertexId>], from: VertexId| -> Vec<VertexId> {
        let mut walk = alloc::vec![from];
        let mut at = from;
        while let Some(p) = parent[at.index()] {
            walk.push(p);
            at = p;
        }
        walk
    };

    let mut queue = alloc::vec![base];
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let colors_v = assigned[v.index()].clone().expect("queued after coloring");
        for slot in 0..dim {
            let SlotTarget::Vertex(w) = g.vertex(v).targets()[slot] else {
                continue;
            };
            if !g.interior(w) {
                continue;
            }
            let map = slot_correspondence(g, v, slot)?;
            let mut colors_w = alloc::vec![usize::MAX; dim];
            for i in 0..dim {
                colors_w[map[i]] = colors_v[i];
            }
            match &assigned[w.index()] {
                None => {
                    assigned[w.index()] = Some(colors_w);
                    parent[w.index()] = Some(v);
                    queue.push(w);
                }
                Some(existing) => {
                    if *existing != colors_w {
                        // Close the walk through the base: base .. v, w .. base.
                        let mut cycle: Vec<VertexId> =
                            tree_walk(&parent, v).into_iter().rev().collect();
                        cycle.extend(tree_walk(&parent, w));
                        return Ok(ColoringOutcome::Inconsistent { cycle });
                    }
                }
            }
        }
    }

    // One-step extension onto boundary vertices, checked across all of
    // their interior neighbors.
    for v in g.vertex_ids() {
        if !g.interior(v) || assigned[v.index()].is_none() {
            continue;
        }
        let colors_v = assigned[v.index()].clone().unwrap();
        for slot in 0..dim {
            let SlotTarget::Vertex(w) = g.vertex(v).targets()[slot] else {
                continue;
            };
            if g.interior(w) {
                continue;
            }
            let map = slot_correspondence(g, v, slot)?;
            let mut colors_w = alloc::vec![usize::MAX; dim];
            for i in 0..dim {
                colors_w[map[i]] = colors_v[i];
            }
            match &assigned[w.index()] {
                None => assigned[w.index()] = Some(colors_w),
                Some(existing) => {
                    if *existing != colors_w {
                        let mut cycle: Vec<VertexId> =
                            tree_walk(&parent, v).into_iter().rev().collect();
                        cycle.push(w);
                        return Ok(ColoringOutcome::Inconsistent { cycle });
                    }
                }
            }
        }
    }

    if assigned.iter().any(Option::is_none) {
        return Err(Error::OutOfWindow);
    }

    let mut colors = BTreeMap::new();
    for v in g.vertex_ids() {
        let cv = assigned[v.index()].as_ref().unwrap();
        for (slot, &c) in cv.iter().enumerate() {
            colors.insert((v, slot), c);
        }
    }
    Ok(ColoringOutcome::Proper(Coloring {
        palette: dim,
        colors,
    }))
}

/// The slot permutation accumulated around a closed walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Holonomy {
    pub perm: Vec<usize>,
}

impl Holonomy {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Composes the edge correspondences along a closed walk.
pub fn holonomy<S: Scalar>(g: &MGraph<S>, walk: &Path) -> Result<Holonomy> {
    walk.validate(g)?;
    if walk.end() != walk.start() {
        return Err(Error::NotClosed);
    }
    let dim = g.dim();
    let mut perm: Vec<usize> = (0..dim).collect();
    let mut at = walk.start();
    for step in walk.steps() {
        let slot = (0..dim)
            .find(|&i| g.gained(at, i) == Some(step.via))
            .expect("validated step has a slot");
        let map = slot_correspondence(g, at, slot)?;
        perm = perm.into_iter().map(|p| map[p]).collect();
        at = step.to;
    }
    Ok(Holonomy { perm })
}

/// Closed walks through the base, one per non-tree interior edge; their
/// holonomies generate the holonomy of every interior cycle.
pub fn cycle_basis<S: Scalar>(g: &MGraph<S>) -> Result<Vec<Path>> {
    let base = g.base();
    if !g.interior(base) {
        return Err(Error::OutOfWindow);
    }
    let n = g.vertex_count();
    let mut parent_step: Vec<Option<(VertexId, usize)>> = alloc::vec![None; n];
    let mut seen = alloc::vec![false; n];
    seen[base.index()] = true;
    let mut queue = alloc::vec![base];
    let mut head = 0;
    let mut tree_edge = alloc::vec![false; n * g.dim()];
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for slot in 0..g.dim() {
            let SlotTarget::Vertex(w) = g.vertex(v).targets()[slot] else {
                continue;
            };
            if !g.interior(w) || seen[w.index()] {
                continue;
            }
            seen[w.index()] = true;
            parent_step[w.index()] = Some((v, slot));
            tree_edge[v.index() * g.dim() + slot] = true;
            let back = g
                .vertex(w)
                .basis()
                .iter()
                .position(|&r| Some(r) == g.gained(v, slot))
                .expect("reverse slot exists");
            tree_edge[w.index() * g.dim() + back] = true;
            queue.push(w);
        }
    }

    let path_from_base = |parent_step: &[Option<(VertexId, usize)>], to: VertexId| -> Path {
        let mut rev = Vec::new();
        let mut at = to;
        while let Some((p, slot)) = parent_step[at.index()] {
            rev.push((p, slot, at));
            at = p;
        }
        let mut path = Path::new(base);
        for &(p, slot, child) in rev.iter().rev() {
            path.push(crate::graph::Step {
                via: g.gained(p, slot).expect("tree edges are compact"),
                to: child,
            });
        }
        path
    };

    let mut cycles = Vec::new();
    for v in g.vertex_ids() {
        if !g.interior(v) || !seen[v.index()] {
            continue;
        }
        for slot in 0..g.dim() {
            let SlotTarget::Vertex(w) = g.vertex(v).targets()[slot] else {
                continue;
            };
            if !g.interior(w) || tree_edge[v.index() * g.dim() + slot] {
                continue;
            }
            // Each non-tree edge once, from the lower endpoint.
            if w < v {
                continue;
            }
            let mut cycle = path_from_base(&parent_step, v);
            cycle.push(crate::graph::Step {
                via: g.gained(v, slot).expect("compact edge"),
                to: w,
            });
            // Retrace the tree path to w backwards, gaining the negatives.
            let back = path_from_base(&parent_step, w);
            for i in (0..back.steps().len()).rev() {
                let s = back.steps()[i];
                let neg = g.roots().get(s.via).neg().expect("tree edges are compact");
                cycle.push(crate::graph::Step {
                    via: neg,
                    to: back.vertex_at(i),
                });
            }
            debug_assert_eq!(cycle.end(), base);
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}
