//! Combinatorial isomorphism of realized graphs across scalar backends.
//!
//! Two graphs are isomorphic when their vertices and roots admit bijections
//! preserving invertibility, negation links, and the slot structure,
//! including infinite and truncated targets. Rays are deliberately ignored:
//! realizations over different backends compare by shape alone, which is
//! what makes the exact and floating variants of one group comparable.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{MGraph, RootId, SlotTarget, VertexId};
use crate::scalar::Scalar;

/// A witness bijection; index `i` of each vector is the image of id `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<VertexId>,
    pub root_map: Vec<RootId>,
}

#[derive(Clone)]
struct State {
    vmap: Vec<Option<VertexId>>,
    vused: Vec<bool>,
    rmap: Vec<Option<RootId>>,
    rused: Vec<bool>,
}

fn assign_root<A: Scalar, B: Scalar>(
    a: &MGraph<A>,
    b: &MGraph<B>,
    st: &mut State,
    ar: RootId,
    br: RootId,
) -> bool {
    if let Some(cur) = st.rmap[ar.index()] {
        return cur == br;
    }
    if st.rused[br.index()] {
        return false;
    }
    let ae = a.roots().get(ar);
    let be = b.roots().get(br);
    if ae.invertible() != be.invertible() {
        return false;
    }
    st.rmap[ar.index()] = Some(br);
    st.rused[br.index()] = true;
    match (ae.neg(), be.neg()) {
        (None, None) => true,
        (Some(an), Some(bn)) => assign_root(a, b, st, an, bn),
        _ => false,
    }
}

fn extend<A: Scalar, B: Scalar>(
    a: &MGraph<A>,
    b: &MGraph<B>,
    st: &State,
    agenda: &[(VertexId, VertexId)],
    pos: usize,
    slot: usize,
) -> Option<State> {
    if pos == agenda.len() {
        return Some(st.clone());
    }
    if slot == a.dim() {
        return extend(a, b, st, agenda, pos + 1, 0);
    }
    let (av, bv) = agenda[pos];
    let ar = a.vertex(av).basis()[slot];
    let at = a.vertex(av).targets()[slot];
    for j in 0..b.dim() {
        let br = b.vertex(bv).basis()[j];
        let bt = b.vertex(bv).targets()[j];
        let kinds_match = matches!(
            (at, bt),
            (SlotTarget::Vertex(_), SlotTarget::Vertex(_))
                | (SlotTarget::Infinite, SlotTarget::Infinite)
                | (SlotTarget::Truncated, SlotTarget::Truncated)
        );
        if !kinds_match {
            continue;
        }
        let mut next = st.clone();
        if !assign_root(a, b, &mut next, ar, br) {
            continue;
        }
        let mut grown;
        let agenda_next: &[(VertexId, VertexId)] =
            if let (SlotTarget::Vertex(aw), SlotTarget::Vertex(bw)) = (at, bt) {
                match next.vmap[aw.index()] {
                    Some(cur) if cur != bw => continue,
                    Some(_) => agenda,
                    None => {
                        if next.vused[bw.index()] {
                            continue;
                        }
                        next.vmap[aw.index()] = Some(bw);
                        next.vused[bw.index()] = true;
                        grown = agenda.to_vec();
                        grown.push((aw, bw));
                        &grown
                    }
                }
            } else {
                agenda
            };
        if let Some(done) = extend(a, b, &next, agenda_next, pos, slot + 1) {
            return Some(done);
        }
    }
    None
}

/// Roots that sit in no vertex basis carry no combinatorial position
/// beyond invertibility; pair the leftovers in id order.
fn complete_roots<A: Scalar, B: Scalar>(
    a: &MGraph<A>,
    b: &MGraph<B>,
    mut st: State,
) -> Option<State> {
    for invertible in [false, true] {
        let pending: Vec<RootId> = a
            .roots()
            .iter()
            .filter(|(r, e)| st.rmap[r.index()].is_none() && e.invertible() == invertible)
            .map(|(r, _)| r)
            .collect();
        let free: Vec<RootId> = b
            .roots()
            .iter()
            .filter(|(r, e)| !st.rused[r.index()] && e.invertible() == invertible)
            .map(|(r, _)| r)
            .collect();
        let mut next_free = 0;
        for ar in pending {
            if st.rmap[ar.index()].is_some() {
                continue;
            }
            let br = loop {
                let c = *free.get(next_free)?;
                next_free += 1;
                if !st.rused[c.index()] {
                    break c;
                }
            };
            if !assign_root(a, b, &mut st, ar, br) {
                return None;
            }
        }
    }
    if st.rmap.iter().any(Option::is_none) || st.rused.iter().any(|u| !u) {
        return None;
    }
    Some(st)
}

fn shape_profile<S: Scalar>(g: &MGraph<S>) -> (usize, Vec<(usize, usize, usize)>) {
    let noninv = g.roots().iter().filter(|(_, e)| !e.invertible()).count();
    let mut per: Vec<(usize, usize, usize)> = g
        .vertex_ids()
        .map(|v| {
            let mut c = (0, 0, 0);
            for t in g.vertex(v).targets() {
                match t {
                    SlotTarget::Vertex(_) => c.0 += 1,
                    SlotTarget::Infinite => c.1 += 1,
                    SlotTarget::Truncated => c.2 += 1,
                }
            }
            c
        })
        .collect();
    per.sort_unstable();
    (noninv, per)
}

/// Searches for an isomorphism by anchoring the base of `a` at every
/// vertex of `b` and propagating slot assignments with backtracking.
pub fn find_isomorphism<A: Scalar, B: Scalar>(
    a: &MGraph<A>,
    b: &MGraph<B>,
) -> Option<Isomorphism> {
    if a.dim() != b.dim()
        || a.vertex_count() != b.vertex_count()
        || a.roots().len() != b.roots().len()
        || shape_profile(a) != shape_profile(b)
    {
        return None;
    }
    for seed in b.vertex_ids() {
        let mut st = State {
            vmap: vec![None; a.vertex_count()],
            vused: vec![false; b.vertex_count()],
            rmap: vec![None; a.roots().len()],
            rused: vec![false; b.roots().len()],
        };
        st.vmap[a.base().index()] = Some(seed);
        st.vused[seed.index()] = true;
        let agenda = vec![(a.base(), seed)];
        let Some(matched) = extend(a, b, &st, &agenda, 0, 0) else {
            continue;
        };
        let Some(full) = complete_roots(a, b, matched) else {
            continue;
        };
        let iso = Isomorphism {
            vertex_map: full.vmap.into_iter().map(Option::unwrap).collect(),
            root_map: full.rmap.into_iter().map(Option::unwrap).collect(),
        };
        if verify_isomorphism(a, b, &iso) {
            return Some(iso);
        }
    }
    None
}

/// Replays every preserved property; useful as an oracle for the search.
pub fn verify_isomorphism<A: Scalar, B: Scalar>(
    a: &MGraph<A>,
    b: &MGraph<B>,
    iso: &Isomorphism,
) -> bool {
    let nv = a.vertex_count();
    let nr = a.roots().len();
    if b.vertex_count() != nv
        || b.roots().len() != nr
        || iso.vertex_map.len() != nv
        || iso.root_map.len() != nr
    {
        return false;
    }
    let mut vseen = vec![false; nv];
    for &w in &iso.vertex_map {
        if w.index() >= nv || vseen[w.index()] {
            return false;
        }
        vseen[w.index()] = true;
    }
    let mut rseen = vec![false; nr];
    for &s in &iso.root_map {
        if s.index() >= nr || rseen[s.index()] {
            return false;
        }
        rseen[s.index()] = true;
    }
    for (r, e) in a.roots().iter() {
        let img = b.roots().get(iso.root_map[r.index()]);
        if e.invertible() != img.invertible() {
            return false;
        }
        match (e.neg(), img.neg()) {
            (None, None) => {}
            (Some(an), Some(bn)) => {
                if iso.root_map[an.index()] != bn {
                    return false;
                }
            }
            _ => return false,
        }
    }
    for av in a.vertex_ids() {
        let bv = iso.vertex_map[av.index()];
        for slot in 0..a.dim() {
            let want = iso.root_map[a.vertex(av).basis()[slot].index()];
            let Some(j) = b.vertex(bv).basis().iter().position(|&x| x == want) else {
                return false;
            };
            let ok = match (a.vertex(av).targets()[slot], b.vertex(bv).targets()[j]) {
                (SlotTarget::Vertex(aw), SlotTarget::Vertex(bw)) => {
                    iso.vertex_map[aw.index()] == bw
                }
                (SlotTarget::Infinite, SlotTarget::Infinite) => true,
                (SlotTarget::Truncated, SlotTarget::Truncated) => true,
                _ => false,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_cayley, build_rank2, build_weyl, CartanMatrix, CoxeterMatrix, Rank2};

    #[test]
    fn b2_and_c2_are_isomorphic() {
        let b2 = build_weyl(&CartanMatrix::type_b(2).unwrap(), 10).unwrap();
        let c2 = build_weyl(&CartanMatrix::type_c(2).unwrap(), 10).unwrap();
        let iso = find_isomorphism(&b2, &c2).expect("transposed Cartan data");
        assert!(verify_isomorphism(&b2, &c2, &iso));
    }

    #[test]
    fn float_and_exact_hexagons_are_isomorphic() {
        let float = build_cayley(&CoxeterMatrix::dihedral(3).unwrap(), 5).unwrap();
        let exact = build_weyl(&CartanMatrix::type_a(2).unwrap(), 5).unwrap();
        let iso = find_isomorphism(&float, &exact).expect("same group");
        assert!(verify_isomorphism(&float, &exact, &iso));
    }

    #[test]
    fn different_polygons_do_not_match() {
        let hexagon = build_rank2(Rank2::Polygon { m: 3 }).unwrap();
        let octagon = build_rank2(Rank2::Polygon { m: 4 }).unwrap();
        assert!(find_isomorphism(&hexagon, &octagon).is_none());
    }

    #[test]
    fn segment_and_tail_windows_differ() {
        let seg = build_rank2(Rank2::Segment { k: 2 }).unwrap();
        let tail = build_rank2(Rank2::Tail { length: 2 }).unwrap();
        assert!(find_isomorphism(&seg, &tail).is_none());
    }
}
