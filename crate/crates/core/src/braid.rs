//! Shortest-path rewriting through rank-2 cells.
//!
//! Two shortest paths with the same endpoints differ by a sequence of
//! half-polygon swaps inside rank-2 cells. This module classifies the
//! cells, applies single swaps, produces a full rewriting certificate for
//! any shortest pair, replays certificates, and closes a path under all
//! applicable swaps.
//!
//! Everything here is combinatorial: cell membership queries go through
//! the span sets precomputed at assembly, so no linear algebra runs on
//! the hot path.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{MGraph, Path, RootId, SlotTarget, Step, VertexId};
use crate::scalar::Scalar;

/// Shape of a rank-2 cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    /// Closed cycle of `2 * half` compact edges.
    Polygon { half: usize },
    /// Chain truncated at both ends: a window of the infinite dihedral cell.
    IdihedralWindow,
    /// Chain with one infinite edge and one truncated end.
    TailWindow,
    /// Chain with a genuine infinite edge at each end.
    Segment,
}

/// A maximal connected piece of the graph inside one root plane.
///
/// `vertices` and `gained` describe the walk: `gained[i]` is the root
/// gained stepping `vertices[i] -> vertices[i+1]`, cyclically for
/// polygons. Chains run end to end with `gained.len() + 1` vertices.
#[derive(Debug, Clone)]
pub struct Rank2Cell {
    kind: CellKind,
    vertices: Vec<VertexId>,
    gained: Vec<RootId>,
}

impl Rank2Cell {
    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn gained(&self) -> &[RootId] {
        &self.gained
    }

    /// Half length of a polygon cell.
    pub fn half(&self) -> Option<usize> {
        match self.kind {
            CellKind::Polygon { half } => Some(half),
            _ => None,
        }
    }

    pub fn position_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    /// Opposite vertex on a polygon cell.
    pub fn antipode(&self, v: VertexId) -> Option<VertexId> {
        let half = self.half()?;
        let j = self.position_of(v)?;
        Some(self.vertices[(j + half) % self.vertices.len()])
    }

    /// The half of a polygon starting at `from` with gained root `first`.
    /// Each polygon vertex starts exactly two halves, one per direction.
    pub fn half_path<S: Scalar>(
        &self,
        g: &MGraph<S>,
        from: VertexId,
        first: RootId,
    ) -> Result<Path> {
        let Some(half) = self.half() else {
            return Err(Error::InvalidMove("cell is not a closed polygon".into()));
        };
        let len = self.vertices.len();
        let Some(j) = self.position_of(from) else {
            return Err(Error::InvalidMove(format!(
                "vertex {from} does not lie on the cell"
            )));
        };
        let neg = |r: RootId| g.roots().get(r).neg().expect("cell roots are invertible");
        let mut steps = Vec::with_capacity(half);
        if self.gained[j] == first {
            for t in 0..half {
                steps.push(Step {
                    via: self.gained[(j + t) % len],
                    to: self.vertices[(j + t + 1) % len],
                });
            }
        } else if neg(self.gained[(j + len - 1) % len]) == first {
            for t in 0..half {
                let idx = (j + len - 1 - t) % len;
                steps.push(Step {
                    via: neg(self.gained[idx]),
                    to: self.vertices[idx],
                });
            }
        } else {
            return Err(Error::InvalidMove(format!(
                "root {first} does not leave {from} inside the cell"
            )));
        }
        Ok(Path::from_steps(from, steps))
    }
}

enum WalkEnd {
    Cycle,
    Infinite,
    Truncated,
}

fn cell_slots<S: Scalar>(g: &MGraph<S>, span: &[RootId], v: VertexId) -> Vec<usize> {
    (0..g.dim())
        .filter(|&i| span.binary_search(&g.vertex(v).basis()[i]).is_ok())
        .collect()
}

fn walk_direction<S: Scalar>(
    g: &MGraph<S>,
    span: &[RootId],
    start: VertexId,
    slot: usize,
) -> Result<(Vec<Step>, WalkEnd)> {
    let mut steps = Vec::new();
    let mut at = start;
    let mut cur = slot;
    for _ in 0..=2 * g.vertex_count() {
        match g.vertex(at).targets()[cur] {
            SlotTarget::Infinite => return Ok((steps, WalkEnd::Infinite)),
            SlotTarget::Truncated => return Ok((steps, WalkEnd::Truncated)),
            SlotTarget::Vertex(w) => {
                let gained = g.gained(at, cur).expect("compact slots carry pairs");
                steps.push(Step { via: gained, to: w });
                if w == start {
                    return Ok((steps, WalkEnd::Cycle));
                }
                let slots = cell_slots(g, span, w);
                if slots.len() != 2 {
                    return Err(Error::AxiomViolation(format!(
                        "vertex {w} meets the cell plane in {} walls",
                        slots.len()
                    )));
                }
                let entry = g
                    .vertex(w)
                    .basis()
                    .iter()
                    .position(|&r| r == gained)
                    .expect("reverse slot exists");
                let Some(next) = slots.into_iter().find(|&i| i != entry) else {
                    return Err(Error::AxiomViolation(format!(
                        "cell walk cannot continue past vertex {w}"
                    )));
                };
                at = w;
                cur = next;
            }
        }
    }
    Err(Error::AxiomViolation("cell walk does not terminate".into()))
}

/// The rank-2 cell through `v` in the plane of `alpha` and `beta`. The
/// plane must contain exactly two of the walls of `v`.
pub fn rank2_at<S: Scalar>(
    g: &MGraph<S>,
    v: VertexId,
    alpha: RootId,
    beta: RootId,
) -> Result<Rank2Cell> {
    let Some(span) = g.span_set(alpha, beta) else {
        return Err(Error::Parse(format!(
            "roots {alpha} and {beta} span a line, not a plane"
        )));
    };
    let slots = cell_slots(g, span, v);
    if slots.len() != 2 {
        return Err(Error::Parse(format!(
            "the plane of roots {alpha} and {beta} meets {} walls at vertex {v}",
            slots.len()
        )));
    }
    let (lo, hi) = (slots[0], slots[1]);
    let (fwd, fwd_end) = walk_direction(g, span, v, lo)?;
    if let WalkEnd::Cycle = fwd_end {
        let total = fwd.len();
        if total % 2 != 0 {
            return Err(Error::AxiomViolation(format!(
                "rank-2 cycle through vertex {v} has odd length {total}"
            )));
        }
        let mut vertices = Vec::with_capacity(total);
        vertices.push(v);
        vertices.extend(fwd.iter().take(total - 1).map(|s| s.to));
        return Ok(Rank2Cell {
            kind: CellKind::Polygon { half: total / 2 },
            vertices,
            gained: fwd.iter().map(|s| s.via).collect(),
        });
    }
    let (bwd, bwd_end) = walk_direction(g, span, v, hi)?;
    let neg = |r: RootId| g.roots().get(r).neg().expect("cell roots are invertible");
    let mut vertices = Vec::with_capacity(bwd.len() + fwd.len() + 1);
    let mut gained = Vec::with_capacity(bwd.len() + fwd.len());
    for s in bwd.iter().rev() {
        vertices.push(s.to);
    }
    // Reversing the backward walk flips both the orientation and the
    // gained roots; the step into a vertex gains the negative of the
    // root its forward twin gained.
    for t in (0..bwd.len()).rev() {
        gained.push(neg(bwd[t].via));
    }
    vertices.push(v);
    for s in &fwd {
        vertices.push(s.to);
        gained.push(s.via);
    }
    // Fix the step targets: gained[i] steps vertices[i] -> vertices[i+1].
    // The loop above pushed them in walk order already.
    let kind = match (bwd_end, fwd_end) {
        (WalkEnd::Infinite, WalkEnd::Infinite) => CellKind::Segment,
        (WalkEnd::Truncated, WalkEnd::Truncated) => CellKind::IdihedralWindow,
        _ => CellKind::TailWindow,
    };
    Ok(Rank2Cell {
        kind,
        vertices,
        gained,
    })
}

/// One half-polygon swap: replace the `replacement.len()` steps of a path
/// starting at `pos` with the opposite half of their cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidMove {
    pub pos: usize,
    pub replacement: Vec<RootId>,
}

impl BraidMove {
    /// Half length of the cell the move swaps across.
    pub fn m(&self) -> usize {
        self.replacement.len()
    }
}

/// A replayable rewriting of `source` into `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub source: Path,
    pub target: Path,
    pub moves: Vec<BraidMove>,
}

impl Certificate {
    /// Transforms one shortest path into another and packages the moves.
    pub fn generate<S: Scalar>(g: &MGraph<S>, a: &Path, b: &Path) -> Result<Certificate> {
        Ok(Certificate {
            source: a.clone(),
            target: b.clone(),
            moves: matsumoto_transform(g, a, b)?,
        })
    }
}

/// Applies a single swap, validating every claim the move makes. All
/// failures surface as [`Error::InvalidMove`]; a rejected move never
/// indicts the graph.
pub fn apply_move<S: Scalar>(g: &MGraph<S>, path: &Path, mv: &BraidMove) -> Result<Path> {
    let m = mv.replacement.len();
    if m < 2 {
        return Err(Error::InvalidMove("a swap needs at least two steps".into()));
    }
    if mv.pos + m > path.len() {
        return Err(Error::InvalidMove(format!(
            "move at {} with half {m} overruns the path",
            mv.pos
        )));
    }
    let u = path.vertex_at(mv.pos);
    let removed_first = path.steps()[mv.pos].via;
    let repl_first = mv.replacement[0];
    if removed_first == repl_first {
        return Err(Error::InvalidMove("both halves start with one root".into()));
    }
    let cell = rank2_at(g, u, removed_first, repl_first)
        .map_err(|e| Error::InvalidMove(format!("no cell for the move: {e}")))?;
    match cell.kind() {
        CellKind::Polygon { half } if half == m => {}
        CellKind::Polygon { half } => {
            return Err(Error::InvalidMove(format!(
                "cell half is {half}, move claims {m}"
            )));
        }
        _ => return Err(Error::InvalidMove("cell is not a closed polygon".into())),
    }
    let removed = cell
        .half_path(g, u, removed_first)
        .map_err(|e| Error::InvalidMove(format!("bad removed half: {e}")))?;
    if path.steps()[mv.pos..mv.pos + m] != *removed.steps() {
        return Err(Error::InvalidMove(
            "path segment is not a half of the cell".into(),
        ));
    }
    let other = cell
        .half_path(g, u, repl_first)
        .map_err(|e| Error::InvalidMove(format!("bad replacement half: {e}")))?;
    if other.roots() != mv.replacement {
        return Err(Error::InvalidMove(
            "replacement is not the opposite half of the cell".into(),
        ));
    }
    let mut steps = path.steps()[..mv.pos].to_vec();
    steps.extend_from_slice(other.steps());
    steps.extend_from_slice(&path.steps()[mv.pos + m..]);
    Ok(Path::from_steps(path.start(), steps))
}

/// Every shortest path between two vertices, in slot-lexicographic order.
pub fn shortest_paths<S: Scalar>(
    g: &MGraph<S>,
    from: VertexId,
    to: VertexId,
    cap: usize,
) -> Result<Vec<Path>> {
    let n = g.vertex_count();
    if from.index() >= n || to.index() >= n {
        return Err(Error::Parse("unknown vertex".into()));
    }
    // Distance to the target from everywhere, for pruning.
    let mut dist = vec![usize::MAX; n];
    dist[to.index()] = 0;
    let mut queue = vec![to];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for slot in 0..g.dim() {
            if let SlotTarget::Vertex(w) = g.vertex(u).targets()[slot] {
                if dist[w.index()] == usize::MAX {
                    dist[w.index()] = dist[u.index()] + 1;
                    queue.push(w);
                }
            }
        }
    }
    if dist[from.index()] == usize::MAX {
        return Err(Error::OutOfWindow);
    }
    let mut out = Vec::new();
    let mut steps = Vec::new();
    descend(g, &dist, from, from, to, &mut steps, &mut out, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend<S: Scalar>(
    g: &MGraph<S>,
    dist: &[usize],
    start: VertexId,
    at: VertexId,
    to: VertexId,
    steps: &mut Vec<Step>,
    out: &mut Vec<Path>,
    cap: usize,
) -> Result<()> {
    if at == to {
        if out.len() >= cap {
            return Err(Error::CapExceeded);
        }
        out.push(Path::from_steps(start, steps.clone()));
        return Ok(());
    }
    for slot in 0..g.dim() {
        if let SlotTarget::Vertex(w) = g.vertex(at).targets()[slot] {
            if dist[w.index()] + 1 == dist[at.index()] {
                let via = g.gained(at, slot).expect("compact slot");
                steps.push(Step { via, to: w });
                descend(g, dist, start, w, to, steps, out, cap)?;
                steps.pop();
            }
        }
    }
    Ok(())
}

struct RawMove {
    pos: usize,
    removed: Vec<RootId>,
    replacement: Vec<RootId>,
}

fn invert(moves: Vec<RawMove>) -> Vec<RawMove> {
    moves
        .into_iter()
        .rev()
        .map(|m| RawMove {
            pos: m.pos,
            removed: m.replacement,
            replacement: m.removed,
        })
        .collect()
}

fn shift(moves: Vec<RawMove>, by: usize) -> Vec<RawMove> {
    moves
        .into_iter()
        .map(|m| RawMove {
            pos: m.pos + by,
            ..m
        })
        .collect()
}

/// Rewrites shortest path `a` into shortest path `b` and returns the swap
/// sequence. Both paths must share endpoints and realize the graph
/// distance; anything else is [`Error::NotShortestPair`]. A truncated
/// cell needed on the way surfaces as [`Error::OutOfWindow`].
pub fn matsumoto_transform<S: Scalar>(
    g: &MGraph<S>,
    a: &Path,
    b: &Path,
) -> Result<Vec<BraidMove>> {
    a.validate(g)?;
    b.validate(g)?;
    if a.start() != b.start() || a.end() != b.end() || a.len() != b.len() {
        return Err(Error::NotShortestPair);
    }
    if g.distance(a.start(), a.end())? != a.len() {
        return Err(Error::NotShortestPair);
    }
    let raw = transform_rec(g, a, b)?;
    Ok(raw
        .into_iter()
        .map(|m| BraidMove {
            pos: m.pos,
            replacement: m.replacement,
        })
        .collect())
}

fn tail_of(p: &Path) -> Path {
    Path::from_steps(p.steps()[0].to, p.steps()[1..].to_vec())
}

fn concat(prefix: &Path, suffix: &Path) -> Path {
    let mut steps = prefix.steps().to_vec();
    steps.extend_from_slice(suffix.steps());
    Path::from_steps(prefix.start(), steps)
}

fn transform_rec<S: Scalar>(g: &MGraph<S>, a: &Path, b: &Path) -> Result<Vec<RawMove>> {
    let n = a.len();
    if n <= 1 {
        return if a.roots() == b.roots() {
            Ok(Vec::new())
        } else {
            Err(Error::AxiomViolation(
                "distinct single edges share endpoints".into(),
            ))
        };
    }
    if a.steps()[0] == b.steps()[0] {
        let sub = transform_rec(g, &tail_of(a), &tail_of(b))?;
        return Ok(shift(sub, 1));
    }

    let a_roots = a.roots();
    let b_roots = b.roots();
    let alpha = a_roots[0];
    let beta = b_roots[0];
    let Some(k) = a_roots.iter().position(|&r| r == beta) else {
        return Err(Error::AxiomViolation(
            "paths of one pair cross different roots".into(),
        ));
    };
    let Some(j) = b_roots.iter().position(|&r| r == alpha) else {
        return Err(Error::AxiomViolation(
            "paths of one pair cross different roots".into(),
        ));
    };

    if k < n - 1 {
        // The first root of b appears strictly inside a: rewrite the
        // prefix of a up to that crossing so that it starts like b.
        let prefix = Path::from_steps(a.start(), a.steps()[..=k].to_vec());
        let mid = prefix.end();
        let gamma = g.greedy_shortest_path(b.steps()[0].to, mid)?;
        if gamma.len() != k {
            return Err(Error::AxiomViolation(
                "connector has the wrong length".into(),
            ));
        }
        let c = concat(&Path::from_steps(a.start(), vec![b.steps()[0]]), &gamma);
        let mut moves = transform_rec(g, &prefix, &c)?;
        let rewritten = concat(&c, &Path::from_steps(mid, a.steps()[k + 1..].to_vec()));
        moves.extend(transform_rec(g, &rewritten, b)?);
        return Ok(moves);
    }
    if j < n - 1 {
        return Ok(invert(transform_rec(g, b, a)?));
    }

    // Both first roots recur only as the other path's last root: the two
    // paths part ways along one rank-2 cell at the start. Swap its halves.
    let v = a.start();
    let cell = rank2_at(g, v, alpha, beta)?;
    let m = match cell.kind() {
        CellKind::Polygon { half } => half,
        CellKind::IdihedralWindow | CellKind::TailWindow => {
            return Err(Error::OutOfWindow);
        }
        CellKind::Segment => {
            return Err(Error::AxiomViolation(
                "start cell of a shortest pair never closes".into(),
            ));
        }
    };
    if m > n {
        return Err(Error::AxiomViolation(
            "cell half exceeds the path length".into(),
        ));
    }
    let antipode = cell.antipode(v).expect("polygon has antipodes");
    if g.distance(v, antipode)? != m || g.distance(antipode, a.end())? != n - m {
        return Err(Error::AxiomViolation(
            "cell antipode is off the geodesic".into(),
        ));
    }
    let gamma = g.greedy_shortest_path(antipode, a.end())?;
    let half_a = cell.half_path(g, v, alpha)?;
    let half_b = cell.half_path(g, v, beta)?;
    let via_a = concat(&half_a, &gamma);
    let via_b = concat(&half_b, &gamma);
    let mut moves = transform_rec(g, a, &via_a)?;
    moves.push(RawMove {
        pos: 0,
        removed: half_a.roots(),
        replacement: half_b.roots(),
    });
    moves.extend(transform_rec(g, &via_b, b)?);
    Ok(moves)
}

/// Replays a certificate move by move; the error names the first move
/// that fails to apply.
pub fn verify_certificate<S: Scalar>(g: &MGraph<S>, cert: &Certificate) -> Result<()> {
    cert.source.validate(g)?;
    cert.target.validate(g)?;
    let mut cur = cert.source.clone();
    for (i, mv) in cert.moves.iter().enumerate() {
        cur = apply_move(g, &cur, mv)
            .map_err(|e| Error::InvalidMove(format!("move {i} failed: {e}")))?;
    }
    if cur != cert.target {
        return Err(Error::InvalidMove(
            "moves end on a different path than claimed".into(),
        ));
    }
    Ok(())
}

/// All moves applicable to a path, scanning each position's cell.
pub fn available_moves<S: Scalar>(g: &MGraph<S>, p: &Path) -> Result<Vec<BraidMove>> {
    let mut out = Vec::new();
    let roots = p.roots();
    for pos in 0..p.len().saturating_sub(1) {
        let u = p.vertex_at(pos);
        let mid = p.vertex_at(pos + 1);
        if g.span_set(roots[pos], roots[pos + 1]).is_none() {
            continue;
        }
        let cell = rank2_at(g, mid, roots[pos], roots[pos + 1])?;
        let CellKind::Polygon { half } = cell.kind() else {
            continue;
        };
        if pos + half > p.len() {
            continue;
        }
        let Ok(fwd) = cell.half_path(g, u, roots[pos]) else {
            continue;
        };
        if p.steps()[pos..pos + half] != *fwd.steps() {
            continue;
        }
        // The other half leaves `u` along the opposite cell direction.
        let len = cell.vertices().len();
        let jpos = cell.position_of(u).expect("u lies on the cell");
        let neg = |r: RootId| g.roots().get(r).neg().expect("cell roots are invertible");
        let fwd_first = cell.gained()[jpos];
        let bwd_first = neg(cell.gained()[(jpos + len - 1) % len]);
        let other_first = if roots[pos] == fwd_first {
            bwd_first
        } else {
            fwd_first
        };
        let other = cell.half_path(g, u, other_first)?;
        out.push(BraidMove {
            pos,
            replacement: other.roots(),
        });
    }
    Ok(out)
}

/// The closure of a path under half-polygon swaps, capped.
pub fn braid_class<S: Scalar>(
    g: &MGraph<S>,
    start: &Path,
    cap: usize,
) -> Result<BTreeSet<Path>> {
    start.validate(g)?;
    let mut seen = BTreeSet::new();
    if cap == 0 {
        return Err(Error::CapExceeded);
    }
    seen.insert(start.clone());
    let mut stack = vec![start.clone()];
    while let Some(p) = stack.pop() {
        for mv in available_moves(g, &p)? {
            let q = apply_move(g, &p, &mv)?;
            if seen.contains(&q) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::CapExceeded);
            }
            seen.insert(q.clone());
            stack.push(q);
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_rank2, build_weyl, CartanMatrix, CoxeterMatrix, Rank2};
    use crate::generators::build_cayley;

    fn hexagon() -> MGraph<f64> {
        build_rank2(Rank2::Polygon { m: 3 }).unwrap()
    }

    fn far_vertex<S: Scalar>(g: &MGraph<S>) -> VertexId {
        g.vertex_ids()
            .max_by_key(|&v| g.distance(g.base(), v).unwrap())
            .unwrap()
    }

    #[test]
    fn hexagon_cell_is_a_polygon_of_half_three() {
        let g = hexagon();
        let v = g.base();
        let a = g.gained(v, 0).unwrap();
        let b = g.gained(v, 1).unwrap();
        let cell = rank2_at(&g, v, a, b).unwrap();
        assert_eq!(cell.kind(), CellKind::Polygon { half: 3 });
        assert_eq!(cell.vertices().len(), 6);
        let w = cell.antipode(v).unwrap();
        assert_eq!(g.distance(v, w).unwrap(), 3);
    }

    #[test]
    fn chain_cells_classify_by_their_ends() {
        let seg = build_rank2(Rank2::Segment { k: 3 }).unwrap();
        let v = VertexId(1);
        let a = seg.gained(v, 0).unwrap();
        let b = seg.gained(v, 1).unwrap();
        assert_eq!(rank2_at(&seg, v, a, b).unwrap().kind(), CellKind::Segment);

        let tail = build_rank2(Rank2::Tail { length: 2 }).unwrap();
        let v = VertexId(1);
        let a = tail.gained(v, 0).unwrap();
        let b = tail.gained(v, 1).unwrap();
        assert_eq!(rank2_at(&tail, v, a, b).unwrap().kind(), CellKind::TailWindow);

        let idi = build_rank2(Rank2::InfiniteDihedral { radius: 3 }).unwrap();
        let v = idi.base();
        let a = idi.gained(v, 0).unwrap();
        let b = idi.gained(v, 1).unwrap();
        assert_eq!(
            rank2_at(&idi, v, a, b).unwrap().kind(),
            CellKind::IdihedralWindow
        );
    }

    #[test]
    fn hexagon_halves_swap_by_one_move() {
        let g = hexagon();
        let w0 = far_vertex(&g);
        let paths = shortest_paths(&g, g.base(), w0, 100).unwrap();
        assert_eq!(paths.len(), 2);
        let moves = matsumoto_transform(&g, &paths[0], &paths[1]).unwrap();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].pos, 0);
        assert_eq!(moves[0].m(), 3);
        let cert = Certificate {
            source: paths[0].clone(),
            target: paths[1].clone(),
            moves,
        };
        verify_certificate(&g, &cert).unwrap();
    }

    #[test]
    fn cube_diagonal_has_six_words_in_one_class() {
        let g = build_cayley(&CoxeterMatrix::a1_power(3).unwrap(), 10).unwrap();
        let w0 = far_vertex(&g);
        let paths = shortest_paths(&g, g.base(), w0, 100).unwrap();
        assert_eq!(paths.len(), 6);
        let class = braid_class(&g, &paths[0], 100).unwrap();
        assert_eq!(class.len(), 6);
        for p in &paths {
            assert!(class.contains(p));
        }
    }

    #[test]
    fn b2_transforms_verify_for_every_pair() {
        let g = build_weyl(&CartanMatrix::type_b(2).unwrap(), 10).unwrap();
        for v in g.vertex_ids() {
            for w in g.vertex_ids() {
                let paths = shortest_paths(&g, v, w, 1000).unwrap();
                for p in &paths {
                    for q in &paths {
                        let cert = Certificate::generate(&g, p, q).unwrap();
                        verify_certificate(&g, &cert).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn transform_rejects_unequal_pairs() {
        let g = hexagon();
        let w0 = far_vertex(&g);
        let paths = shortest_paths(&g, g.base(), w0, 100).unwrap();
        let shorter = Path::from_steps(g.base(), paths[0].steps()[..2].to_vec());
        assert!(matches!(
            matsumoto_transform(&g, &paths[0], &shorter),
            Err(Error::NotShortestPair)
        ));
    }

    #[test]
    fn nonshortest_path_is_rejected() {
        let g = hexagon();
        let v = g.base();
        let out = g.gained(v, 0).unwrap();
        let here = g.vertex(v).basis()[0];
        let SlotTarget::Vertex(w) = g.vertex(v).targets()[0] else {
            panic!("polygon edges are compact");
        };
        // Step out and straight back: a valid closed walk, but not shortest.
        let there_and_back =
            Path::from_steps(v, vec![Step { via: out, to: w }, Step { via: here, to: v }]);
        there_and_back.validate(&g).unwrap();
        assert!(matches!(
            matsumoto_transform(&g, &there_and_back, &there_and_back),
            Err(Error::NotShortestPair)
        ));
    }

    #[test]
    fn bogus_move_is_rejected_with_its_index() {
        let g = hexagon();
        let w0 = far_vertex(&g);
        let paths = shortest_paths(&g, g.base(), w0, 100).unwrap();
        let mut cert = Certificate::generate(&g, &paths[0], &paths[1]).unwrap();
        cert.moves[0].replacement.swap(0, 1);
        let err = verify_certificate(&g, &cert).unwrap_err();
        match err {
            Error::InvalidMove(msg) => assert!(msg.contains("move 0"), "{msg}"),
            other => panic!("expected invalid move, got {other:?}"),
        }
    }

    #[test]
    fn shortest_path_cap_is_enforced() {
        let g = hexagon();
        let w0 = far_vertex(&g);
        assert!(matches!(
            shortest_paths(&g, g.base(), w0, 1),
            Err(Error::CapExceeded)
        ));
    }
}
