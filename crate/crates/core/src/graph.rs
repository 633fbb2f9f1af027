//! The Matsumoto graph model: root tables, vertex records with ordered ray
//! bases, inversion sets, axiom checking, distances, and span subgraphs.
//!
//! A graph is immutable once assembled. [`MGraph::assemble`] performs the
//! structural validation (canonical dedup of rays, negation links, reverse
//! slots, connectivity) and precomputes the inversion sets; the semantic
//! content of the four realization axioms is checked separately by
//! [`MGraph::check_axioms`], which reports failures with witnesses instead
//! of erroring out. Infinite graphs are materialized as windows; vertices
//! with unexplored neighbor slots are flagged as non-interior, and every
//! check quantifies over the interior core.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{canonicalize, in_cone, independent, Ray, Scalar, SimplicialCone, Solve, Vector};

/// Identifier of a root in a graph's table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootId(pub u32);

/// Identifier of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl core::fmt::Display for RootId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl core::fmt::Display for VertexId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl RootId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One root: a canonical ray plus invertibility data.
#[derive(Debug, Clone)]
pub struct RootEntry<S: Scalar> {
    ray: Ray<S>,
    invertible: bool,
    neg: Option<RootId>,
    positive_at_base: bool,
}

impl<S: Scalar> RootEntry<S> {
    pub fn ray(&self) -> &Ray<S> {
        &self.ray
    }

    pub fn invertible(&self) -> bool {
        self.invertible
    }

    pub fn neg(&self) -> Option<RootId> {
        self.neg
    }

    /// Whether the root lies in the positive system of the base vertex.
    pub fn positive_at_base(&self) -> bool {
        self.positive_at_base
    }
}

/// The set of roots of a graph, deduplicated by ray key.
#[derive(Debug, Clone)]
pub struct RootTable<S: Scalar> {
    entries: Vec<RootEntry<S>>,
    by_key: BTreeMap<S::Key, RootId>,
}

impl<S: Scalar> RootTable<S> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: RootId) -> &RootEntry<S> {
        &self.entries[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = RootId> + '_ {
        (0..self.entries.len() as u32).map(RootId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (RootId, &RootEntry<S>)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| (RootId(i as u32), e))
    }

    pub fn lookup(&self, key: &S::Key) -> Option<RootId> {
        self.by_key.get(key).copied()
    }
}

/// Target of a vertex slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotTarget {
    /// Compact edge to another materialized vertex.
    Vertex(VertexId),
    /// A genuine infinite edge; its root is noninvertible.
    Infinite,
    /// The neighbor exists but lies outside the materialized window.
    Truncated,
}

/// Sorted set of invertible roots positive at a vertex but not at the base.
///
/// By Axiom 4 this set identifies the vertex, which is also how generators
/// deduplicate group elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct InversionSet(Vec<RootId>);

impl InversionSet {
    pub fn new() -> Self {
        InversionSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: RootId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn as_slice(&self) -> &[RootId] {
        &self.0
    }

    /// The set after crossing an edge that gains `gained` and loses its
    /// negative: remove the negative if present, insert `gained` otherwise.
    pub fn crossed(&self, gained: RootId, lost: RootId) -> InversionSet {
        let mut v = self.0.clone();
        match v.binary_search(&lost) {
            Ok(i) => {
                v.remove(i);
            }
            Err(_) => match v.binary_search(&gained) {
                // A shortest route never regains a root; tolerate anyway.
                Ok(_) => {}
                Err(i) => v.insert(i, gained),
            },
        }
        InversionSet(v)
    }

    /// Size of the symmetric difference, which equals the number of roots
    /// separating the two vertices.
    pub fn symmetric_difference_len(&self, other: &InversionSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => {
                    i += 1;
                    n += 1;
                }
                core::cmp::Ordering::Greater => {
                    j += 1;
                    n += 1;
                }
                core::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        n + (a.len() - i) + (b.len() - j)
    }
}

/// A vertex: the ordered basis of incoming roots plus one target per slot.
#[derive(Debug, Clone)]
pub struct VertexRecord {
    basis: Vec<RootId>,
    targets: Vec<SlotTarget>,
    interior: bool,
    inversion: InversionSet,
}

impl VertexRecord {
    pub fn basis(&self) -> &[RootId] {
        &self.basis
    }

    pub fn targets(&self) -> &[SlotTarget] {
        &self.targets
    }

    pub fn interior(&self) -> bool {
        self.interior
    }

    pub fn inversion(&self) -> &InversionSet {
        &self.inversion
    }
}

/// Construction input for one root.
#[derive(Debug, Clone)]
pub struct RootSpec<S: Scalar> {
    pub coords: Vector<S>,
    pub invertible: bool,
    pub neg: Option<RootId>,
}

/// Construction input for one vertex.
#[derive(Debug, Clone)]
pub struct VertexSpec {
    pub basis: Vec<RootId>,
    pub targets: Vec<SlotTarget>,
}

/// One step of a walk: the root gained by the step and the vertex reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub via: RootId,
    pub to: VertexId,
}

/// A walk along compact edges, recorded by gained roots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start: VertexId,
    steps: Vec<Step>,
}

impl Path {
    pub fn new(start: VertexId) -> Self {
        Path {
            start,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(start: VertexId, steps: Vec<Step>) -> Self {
        Path { start, steps }
    }

    /// Resolves a root sequence into a path, checking each step exists.
    pub fn from_roots<S: Scalar>(g: &MGraph<S>, start: VertexId, roots: &[RootId]) -> Result<Path> {
        let mut path = Path::new(start);
        let mut at = start;
        for &root in roots {
            let rec = g.vertex(at);
            let slot = rec
                .basis
                .iter()
                .position(|&b| g.roots.get(b).neg == Some(root))
                .ok_or_else(|| Error::Parse(format!("no edge gaining root {root} at vertex {at}")))?;
            match rec.targets[slot] {
                SlotTarget::Vertex(w) => {
                    path.steps.push(Step { via: root, to: w });
                    at = w;
                }
                SlotTarget::Infinite => {
                    return Err(Error::Parse(format!("root {root} marks an infinite edge")))
                }
                SlotTarget::Truncated => return Err(Error::OutOfWindow),
            }
        }
        Ok(path)
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn roots(&self) -> Vec<RootId> {
        self.steps.iter().map(|s| s.via).collect()
    }

    /// Vertex sequence including both endpoints.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        v.push(self.start);
        v.extend(self.steps.iter().map(|s| s.to));
        v
    }

    /// Vertex reached after `i` steps.
    pub fn vertex_at(&self, i: usize) -> VertexId {
        if i == 0 {
            self.start
        } else {
            self.steps[i - 1].to
        }
    }

    /// Checks every step against the graph's slot structure.
    pub fn validate<S: Scalar>(&self, g: &MGraph<S>) -> Result<()> {
        let mut at = self.start;
        if at.index() >= g.vertex_count() {
            return Err(Error::Parse(format!("unknown vertex {at}")));
        }
        for step in &self.steps {
            let rec = g.vertex(at);
            let ok = (0..g.dim()).any(|i| {
                g.gained(at, i) == Some(step.via) && rec.targets[i] == SlotTarget::Vertex(step.to)
            });
            if !ok {
                return Err(Error::Parse(format!(
                    "no edge from {at} to {} gaining root {}",
                    step.to, step.via
                )));
            }
            at = step.to;
        }
        Ok(())
    }
}

/// Outcome of one axiom check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Human-readable witnesses, capped to keep reports small.
    pub witnesses: Vec<String>,
}

/// Outcome of the full axiom suite.
#[derive(Debug, Clone)]
pub struct Report {
    /// True when the graph is a window of a larger graph, in which case
    /// every check quantified only over the interior core.
    pub windowed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl core::fmt::Display for Report {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(
            f,
            "window-sound: {}",
            if self.windowed { "windowed" } else { "complete" }
        )?;
        for c in &self.checks {
            writeln!(f, "{}: {}", c.name, if c.passed { "pass" } else { "FAIL" })?;
            for w in &c.witnesses {
                writeln!(f, "  witness: {w}")?;
            }
        }
        Ok(())
    }
}

const WITNESS_CAP: usize = 8;

fn push_witness(witnesses: &mut Vec<String>, w: String) {
    if witnesses.len() < WITNESS_CAP {
        witnesses.push(w);
    }
}

/// A graph with a geometric realization by rays.
#[derive(Debug, Clone)]
pub struct MGraph<S: Scalar> {
    dim: usize,
    roots: RootTable<S>,
    vertices: Vec<VertexRecord>,
    base: VertexId,
    /// For each unordered pair of independent roots, the sorted list of
    /// table roots inside their span. Rank-2 cell walks use this instead
    /// of re-solving per query.
    span_sets: BTreeMap<(RootId, RootId), Vec<RootId>>,
}

impl<S: Scalar> MGraph<S> {
    /// Builds a graph from raw parts, enforcing the structural invariants:
    /// canonical dedup of rays, negation involution, reverse-slot symmetry,
    /// and connectivity over compact edges. Inversion sets are computed
    /// along a breadth-first tree from the base; their global consistency
    /// is an axiom matter and belongs to [`check_axioms`](Self::check_axioms).
    pub fn assemble(
        dim: usize,
        roots: Vec<RootSpec<S>>,
        vertices: Vec<VertexSpec>,
        base: VertexId,
    ) -> Result<MGraph<S>> {
        if dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        if vertices.is_empty() {
            return Err(Error::Parse("graph needs at least one vertex".into()));
        }
        if base.index() >= vertices.len() {
            return Err(Error::Parse(format!("base vertex {base} out of range")));
        }

        let mut entries: Vec<RootEntry<S>> = Vec::with_capacity(roots.len());
        let mut by_key: BTreeMap<S::Key, RootId> = BTreeMap::new();
        for (i, spec) in roots.iter().enumerate() {
            if spec.coords.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: spec.coords.len(),
                });
            }
            let ray = canonicalize(&spec.coords)?;
            if let Some(prev) = by_key.insert(ray.key().clone(), RootId(i as u32)) {
                return Err(Error::Parse(format!(
                    "duplicate ray: roots {prev} and {i} span the same ray"
                )));
            }
            entries.push(RootEntry {
                ray,
                invertible: spec.invertible,
                neg: spec.neg,
                positive_at_base: false,
            });
        }

        for (i, spec) in roots.iter().enumerate() {
            let id = RootId(i as u32);
            match (spec.invertible, spec.neg) {
                (true, Some(neg)) => {
                    if neg.index() >= entries.len() {
                        return Err(Error::Parse(format!("root {id}: neg out of range")));
                    }
                    if roots[neg.index()].neg != Some(id) {
                        return Err(Error::Parse(format!(
                            "root {id}: negation is not an involution"
                        )));
                    }
                    let expect = entries[i].ray.negated();
                    if entries[neg.index()].ray.key() != expect.key() {
                        return Err(Error::Parse(format!(
                            "root {id}: neg entry does not span the opposite ray"
                        )));
                    }
                }
                (false, None) => {
                    let opposite = entries[i].ray.negated();
                    if by_key.contains_key(opposite.key()) {
                        return Err(Error::Parse(format!(
                            "root {id} is noninvertible but its opposite ray is in the table"
                        )));
                    }
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "root {id}: invertible flag and neg link disagree"
                    )));
                }
            }
        }

        let mut records: Vec<VertexRecord> = Vec::with_capacity(vertices.len());
        for (vi, spec) in vertices.iter().enumerate() {
            if spec.basis.len() != dim || spec.targets.len() != dim {
                return Err(Error::Parse(format!(
                    "vertex {vi} needs exactly {dim} slots"
                )));
            }
            let mut sorted = spec.basis.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != dim {
                return Err(Error::Parse(format!("vertex {vi} repeats a basis root")));
            }
            for &b in &spec.basis {
                if b.index() >= entries.len() {
                    return Err(Error::Parse(format!("vertex {vi}: root {b} out of range")));
                }
            }
            let interior = spec
                .targets
                .iter()
                .all(|t| !matches!(t, SlotTarget::Truncated));
            records.push(VertexRecord {
                basis: spec.basis.clone(),
                targets: spec.targets.clone(),
                interior,
                inversion: InversionSet::new(),
            });
        }

        // Reverse-slot symmetry; compact edges carry invertible roots,
        // infinite edges noninvertible ones.
        for (vi, spec) in vertices.iter().enumerate() {
            for (slot, target) in spec.targets.iter().enumerate() {
                let b = spec.basis[slot];
                match target {
                    SlotTarget::Vertex(w) => {
                        if w.index() >= vertices.len() {
                            return Err(Error::Parse(format!(
                                "vertex {vi} slot {slot}: neighbor {w} out of range"
                            )));
                        }
                        let Some(neg) = entries[b.index()].neg else {
                            return Err(Error::Parse(format!(
                                "vertex {vi} slot {slot}: compact edge carries noninvertible root"
                            )));
                        };
                        let other = &vertices[w.index()];
                        let Some(rev) = other.basis.iter().position(|&rb| rb == neg) else {
                            return Err(Error::Parse(format!(
                                "vertex {vi} slot {slot}: neighbor {w} lacks the reverse slot"
                            )));
                        };
                        if other.targets[rev] != SlotTarget::Vertex(VertexId(vi as u32)) {
                            return Err(Error::Parse(format!(
                                "vertex {vi} slot {slot}: edge to {w} is not symmetric"
                            )));
                        }
                    }
                    SlotTarget::Infinite => {
                        if entries[b.index()].invertible {
                            return Err(Error::Parse(format!(
                                "vertex {vi} slot {slot}: infinite edge carries invertible root"
                            )));
                        }
                    }
                    SlotTarget::Truncated => {}
                }
            }
        }

        // Connectivity plus inversion sets along the search tree.
        let n = records.len();
        let mut seen = alloc::vec![false; n];
        let mut queue: Vec<VertexId> = Vec::new();
        seen[base.index()] = true;
        queue.push(base);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for slot in 0..dim {
                let SlotTarget::Vertex(w) = records[u.index()].targets[slot] else {
                    continue;
                };
                if seen[w.index()] {
                    continue;
                }
                seen[w.index()] = true;
                let lost = records[u.index()].basis[slot];
                let gained = entries[lost.index()].neg.expect("compact slots are paired");
                records[w.index()].inversion =
                    records[u.index()].inversion.crossed(gained, lost);
                queue.push(w);
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Parse(format!(
                "vertex {v} is unreachable from the base over compact edges"
            )));
        }

        let mut graph = MGraph {
            dim,
            roots: RootTable { entries, by_key },
            vertices: records,
            base,
            span_sets: BTreeMap::new(),
        };

        // Positivity at the base fixes the membership convention used by
        // incremental queries. Unsolvable cones are an axiom-2 failure; the
        // checker reports them, so default to negative here.
        let base_cone = graph.cone_at(base);
        for i in 0..graph.roots.len() {
            let positive = in_cone(&base_cone, &graph.roots.entries[i].ray).unwrap_or(false);
            graph.roots.entries[i].positive_at_base = positive;
        }

        graph.build_span_sets();
        Ok(graph)
    }

    fn build_span_sets(&mut self) {
        let ids: Vec<RootId> = self.roots.ids().collect();
        for (ai, &a) in ids.iter().enumerate() {
            let ra = self.roots.get(a).ray.clone();
            for &b in &ids[ai + 1..] {
                let rb = self.roots.get(b).ray.clone();
                if rb.key() == ra.key() || rb.key() == ra.negated().key() {
                    continue;
                }
                let cols = [ra.dir().to_vec(), rb.dir().to_vec()];
                let members: Vec<RootId> = ids
                    .iter()
                    .copied()
                    .filter(|&r| {
                        !matches!(
                            S::solve(&cols, self.roots.get(r).ray.dir()),
                            Solve::Outside | Solve::Dependent
                        )
                    })
                    .collect();
                self.span_sets.insert((a, b), members);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn vertex(&self, v: VertexId) -> &VertexRecord {
        &self.vertices[v.index()]
    }

    pub fn roots(&self) -> &RootTable<S> {
        &self.roots
    }

    pub fn interior(&self, v: VertexId) -> bool {
        self.vertices[v.index()].interior
    }

    /// True when some vertex is not interior, i.e. the graph is a window.
    pub fn windowed(&self) -> bool {
        self.vertices.iter().any(|r| !r.interior)
    }

    /// Root gained by traversing the slot away from `v`; `None` for slots
    /// whose basis root is noninvertible.
    pub fn gained(&self, v: VertexId, slot: usize) -> Option<RootId> {
        self.roots.get(self.vertices[v.index()].basis[slot]).neg
    }

    /// Sorted table roots inside the span of an independent root pair,
    /// or `None` when the pair is proportional.
    pub fn span_set(&self, a: RootId, b: RootId) -> Option<&[RootId]> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.span_sets.get(&key).map(Vec::as_slice)
    }

    /// The simplicial cone spanned by the basis rays at `v`.
    pub fn cone_at(&self, v: VertexId) -> SimplicialCone<S> {
        SimplicialCone::new(
            self.vertices[v.index()]
                .basis
                .iter()
                .map(|&b| self.roots.get(b).ray.clone())
                .collect(),
        )
    }

    /// Membership of a root in the positive system of `v`, decided from
    /// the inversion set. Exact on valid graphs for both backends.
    pub fn member_positive(&self, v: VertexId, root: RootId) -> bool {
        let entry = self.roots.get(root);
        let Some(neg) = entry.neg else {
            // Noninvertible roots are positive everywhere.
            return true;
        };
        let inv = &self.vertices[v.index()].inversion;
        if entry.positive_at_base {
            !inv.contains(neg)
        } else {
            inv.contains(root)
        }
    }

    /// The positive system at an interior vertex, recomputed from scratch
    /// by cone membership over the whole table.
    pub fn positive_roots(&self, v: VertexId) -> Result<Vec<RootId>> {
        if !self.interior(v) {
            return Err(Error::BoundaryVertex(v.0));
        }
        let cone = self.cone_at(v);
        let mut out = Vec::new();
        for (id, entry) in self.roots.iter() {
            if in_cone(&cone, &entry.ray)? {
                out.push(id);
            }
        }
        Ok(out)
    }

    /// Breadth-first distance over compact edges.
    pub fn distance(&self, v: VertexId, to: VertexId) -> Result<usize> {
        if v.index() >= self.vertex_count() || to.index() >= self.vertex_count() {
            return Err(Error::Parse("unknown vertex".into()));
        }
        let mut dist = alloc::vec![usize::MAX; self.vertex_count()];
        dist[v.index()] = 0;
        let mut queue = Vec::new();
        queue.push(v);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            if u == to {
                return Ok(dist[u.index()]);
            }
            for slot in 0..self.dim {
                if let SlotTarget::Vertex(w) = self.vertices[u.index()].targets[slot] {
                    if dist[w.index()] == usize::MAX {
                        dist[w.index()] = dist[u.index()] + 1;
                        queue.push(w);
                    }
                }
            }
        }
        Err(Error::OutOfWindow)
    }

    /// Distance as the number of roots separating the two positive
    /// systems. Must agree with [`distance`](Self::distance) on valid graphs.
    pub fn distance_geometric(&self, v: VertexId, to: VertexId) -> Result<usize> {
        if !self.interior(v) {
            return Err(Error::BoundaryVertex(v.0));
        }
        if !self.interior(to) {
            return Err(Error::BoundaryVertex(to.0));
        }
        Ok(self.vertices[v.index()]
            .inversion
            .symmetric_difference_len(&self.vertices[to.index()].inversion))
    }

    /// Walks from `v` to `to`, always crossing the lowest slot whose
    /// gained root separates the current vertex from the target.
    pub fn greedy_shortest_path(&self, v: VertexId, to: VertexId) -> Result<Path> {
        if !self.interior(v) {
            return Err(Error::BoundaryVertex(v.0));
        }
        if !self.interior(to) {
            return Err(Error::BoundaryVertex(to.0));
        }
        let mut path = Path::new(v);
        let mut at = v;
        for _ in 0..=self.vertex_count() {
            if at == to {
                return Ok(path);
            }
            let rec = &self.vertices[at.index()];
            let slot = (0..self.dim).find(|&i| {
                self.gained(at, i)
                    .is_some_and(|gained| self.member_positive(to, gained))
            });
            let Some(slot) = slot else {
                return Err(Error::AxiomViolation(format!(
                    "no separating root to cross at vertex {at}"
                )));
            };
            let gained = self.gained(at, slot).expect("slot has an invertible root");
            match rec.targets[slot] {
                SlotTarget::Vertex(w) => {
                    path.push(Step { via: gained, to: w });
                    at = w;
                }
                SlotTarget::Truncated => return Err(Error::OutOfWindow),
                SlotTarget::Infinite => unreachable!("invertible root on infinite edge"),
            }
        }
        Err(Error::AxiomViolation(
            "greedy walk failed to terminate".into(),
        ))
    }

    /// Two-colorability over compact edges.
    pub fn bipartite_check(&self) -> bool {
        let mut color = alloc::vec![u8::MAX; self.vertex_count()];
        color[self.base.index()] = 0;
        let mut queue = Vec::new();
        queue.push(self.base);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for slot in 0..self.dim {
                if let SlotTarget::Vertex(w) = self.vertices[u.index()].targets[slot] {
                    if color[w.index()] == u8::MAX {
                        color[w.index()] = 1 - color[u.index()];
                        queue.push(w);
                    } else if color[w.index()] == color[u.index()] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Positive system recomputed from scratch as a bitmap, or `None`
    /// when the basis cone is degenerate.
    fn positive_bitmap(&self, v: VertexId) -> Option<Vec<bool>> {
        let cone = self.cone_at(v);
        let mut out = Vec::with_capacity(self.roots.len());
        for (_, entry) in self.roots.iter() {
            match in_cone(&cone, &entry.ray) {
                Ok(m) => out.push(m),
                Err(_) => return None,
            }
        }
        Some(out)
    }

    /// Runs the four realization axioms plus two derived consistency
    /// checks. Failures are reported with witnesses, never errors.
    pub fn check_axioms(&self) -> Report {
        let interior: Vec<VertexId> = self.vertex_ids().filter(|&v| self.interior(v)).collect();

        // Axiom 1: no noninvertible root has its opposite in the table.
        let mut a1 = Check {
            name: "axiom1-negatives",
            passed: true,
            witnesses: Vec::new(),
        };
        for (id, entry) in self.roots.iter() {
            if entry.invertible {
                continue;
            }
            if self.roots.lookup(entry.ray.negated().key()).is_some() {
                a1.passed = false;
                push_witness(
                    &mut a1.witnesses,
                    format!("noninvertible root {id} has its opposite ray in the table"),
                );
            }
        }

        // Axiom 2: interior bases are linearly independent.
        let mut a2 = Check {
            name: "axiom2-independence",
            passed: true,
            witnesses: Vec::new(),
        };
        for &v in &interior {
            let rays: Vec<Vector<S>> = self.vertices[v.index()]
                .basis
                .iter()
                .map(|&b| self.roots.get(b).ray.dir().to_vec())
                .collect();
            if !independent(&rays) {
                a2.passed = false;
                push_witness(&mut a2.witnesses, format!("basis at vertex {v} is dependent"));
            }
        }

        let bitmaps: BTreeMap<VertexId, Option<Vec<bool>>> = interior
            .iter()
            .map(|&v| (v, self.positive_bitmap(v)))
            .collect();

        // Axiom 3: crossing an edge exchanges exactly the edge's root pair.
        let mut a3 = Check {
            name: "axiom3-exchange",
            passed: true,
            witnesses: Vec::new(),
        };
        for &v in &interior {
            for slot in 0..self.dim {
                let SlotTarget::Vertex(w) = self.vertices[v.index()].targets[slot] else {
                    continue;
                };
                if !self.interior(w) {
                    continue;
                }
                let lost = self.vertices[v.index()].basis[slot];
                let Some(gained) = self.roots.get(lost).neg else {
                    continue;
                };
                let (Some(Some(mv)), Some(Some(mw))) = (bitmaps.get(&v), bitmaps.get(&w)) else {
                    a3.passed = false;
                    push_witness(
                        &mut a3.witnesses,
                        format!("edge {v}->{w}: positive system not computable"),
                    );
                    continue;
                };
                for (id, _) in self.roots.iter() {
                    let expect = if id == gained {
                        true
                    } else if id == lost {
                        false
                    } else {
                        mv[id.index()]
                    };
                    if mw[id.index()] != expect {
                        a3.passed = false;
                        push_witness(
                            &mut a3.witnesses,
                            format!("edge {v}->{w}: root {id} breaks the exchange"),
                        );
                    }
                }
            }
        }

        // Axiom 4: positive systems identify vertices.
        let mut a4 = Check {
            name: "axiom4-uniqueness",
            passed: true,
            witnesses: Vec::new(),
        };
        let mut by_bitmap: BTreeMap<Vec<bool>, VertexId> = BTreeMap::new();
        for &v in &interior {
            if let Some(Some(bm)) = bitmaps.get(&v) {
                if let Some(&prev) = by_bitmap.get(bm) {
                    a4.passed = false;
                    push_witness(
                        &mut a4.witnesses,
                        format!("vertices {prev} and {v} share a positive system"),
                    );
                } else {
                    by_bitmap.insert(bm.clone(), v);
                }
            }
        }
        let mut by_inversion: BTreeMap<&InversionSet, VertexId> = BTreeMap::new();
        for v in self.vertex_ids() {
            let inv = &self.vertices[v.index()].inversion;
            if let Some(&prev) = by_inversion.get(inv) {
                a4.passed = false;
                push_witness(
                    &mut a4.witnesses,
                    format!("vertices {prev} and {v} share an inversion set"),
                );
            } else {
                by_inversion.insert(inv, v);
            }
        }

        // Noninvertible roots are positive at every interior vertex.
        let mut corollary = Check {
            name: "noninvertible-positivity",
            passed: true,
            witnesses: Vec::new(),
        };
        for (id, entry) in self.roots.iter() {
            if entry.invertible {
                continue;
            }
            for &v in &interior {
                if let Some(Some(bm)) = bitmaps.get(&v) {
                    if !bm[id.index()] {
                        corollary.passed = false;
                        push_witness(
                            &mut corollary.witnesses,
                            format!("noninvertible root {id} is negative at vertex {v}"),
                        );
                    }
                }
            }
        }

        // Incrementally maintained membership matches the from-scratch one.
        let mut incr = Check {
            name: "inversion-consistency",
            passed: true,
            witnesses: Vec::new(),
        };
        for &v in &interior {
            if let Some(Some(bm)) = bitmaps.get(&v) {
                for (id, _) in self.roots.iter() {
                    if bm[id.index()] != self.member_positive(v, id) {
                        incr.passed = false;
                        push_witness(
                            &mut incr.witnesses,
                            format!("vertex {v}: root {id} disagrees with the inversion set"),
                        );
                        break;
                    }
                }
            }
        }

        Report {
            windowed: self.windowed(),
            checks: alloc::vec![a1, a2, a3, a4, corollary, incr],
        }
    }

    /// The connected component of `v` among edges whose roots lie in the
    /// span of the selected basis slots, with coordinates rewritten in
    /// that span. The result is a degree-k graph over the restricted
    /// root table.
    pub fn subgraph_span(&self, v: VertexId, slots: &[usize]) -> Result<MGraph<S>> {
        if !self.interior(v) {
            return Err(Error::BoundaryVertex(v.0));
        }
        let k = slots.len();
        if k == 0 || k > self.dim {
            return Err(Error::Parse(format!("need between 1 and {} slots", self.dim)));
        }
        let mut sorted = slots.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k || sorted.iter().any(|&s| s >= self.dim) {
            return Err(Error::Parse("slot selection repeats or out of range".into()));
        }

        let gens: Vec<Vector<S>> = slots
            .iter()
            .map(|&s| {
                self.roots
                    .get(self.vertices[v.index()].basis[s])
                    .ray
                    .dir()
                    .to_vec()
            })
            .collect();

        // Coefficients in the span generators double as the new coordinates.
        let mut in_span: BTreeMap<RootId, Vec<S>> = BTreeMap::new();
        for (id, entry) in self.roots.iter() {
            match S::solve(&gens, entry.ray.dir()) {
                Solve::Unique(c) => {
                    in_span.insert(id, c);
                }
                Solve::Outside => {}
                Solve::Dependent => {
                    return Err(Error::AxiomViolation(
                        "selected basis slots are dependent".into(),
                    ))
                }
            }
        }

        // Closure of v under compact edges with spanned roots.
        let mut order: Vec<VertexId> = Vec::new();
        let mut index: BTreeMap<VertexId, u32> = BTreeMap::new();
        order.push(v);
        index.insert(v, 0);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for slot in 0..self.dim {
                if !in_span.contains_key(&self.vertices[u.index()].basis[slot]) {
                    continue;
                }
                if let SlotTarget::Vertex(w) = self.vertices[u.index()].targets[slot] {
                    if let alloc::collections::btree_map::Entry::Vacant(e) = index.entry(w) {
                        e.insert(order.len() as u32);
                        order.push(w);
                    }
                }
            }
        }

        let root_ids: Vec<RootId> = in_span.keys().copied().collect();
        let remap: BTreeMap<RootId, RootId> = root_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, RootId(i as u32)))
            .collect();
        let root_specs: Vec<RootSpec<S>> = root_ids
            .iter()
            .map(|&id| {
                let entry = self.roots.get(id);
                RootSpec {
                    coords: in_span[&id].clone(),
                    invertible: entry.invertible,
                    neg: entry.neg.map(|n| remap[&n]),
                }
            })
            .collect();

        let mut vertex_specs: Vec<VertexSpec> = Vec::with_capacity(order.len());
        for &u in &order {
            let mut basis = Vec::with_capacity(k);
            let mut targets = Vec::with_capacity(k);
            for slot in 0..self.dim {
                let b = self.vertices[u.index()].basis[slot];
                let Some(new_id) = remap.get(&b) else {
                    continue;
                };
                basis.push(*new_id);
                targets.push(match self.vertices[u.index()].targets[slot] {
                    SlotTarget::Vertex(w) => SlotTarget::Vertex(VertexId(index[&w])),
                    SlotTarget::Infinite => SlotTarget::Infinite,
                    SlotTarget::Truncated => SlotTarget::Truncated,
                });
            }
            if basis.len() != k {
                return Err(Error::AxiomViolation(format!(
                    "vertex {u} meets the span in {} slots, expected {k}",
                    basis.len()
                )));
            }
            vertex_specs.push(VertexSpec { basis, targets });
        }

        MGraph::assemble(k, root_specs, vertex_specs, VertexId(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Degree-1 graph: one compact edge between two vertices.
    fn segment_pair() -> MGraph<BigRational> {
        let roots = alloc::vec![
            RootSpec {
                coords: alloc::vec![rat(1)],
                invertible: true,
                neg: Some(RootId(1)),
            },
            RootSpec {
                coords: alloc::vec![rat(-1)],
                invertible: true,
                neg: Some(RootId(0)),
            },
        ];
        let vertices = alloc::vec![
            VertexSpec {
                basis: alloc::vec![RootId(1)],
                targets: alloc::vec![SlotTarget::Vertex(VertexId(1))],
            },
            VertexSpec {
                basis: alloc::vec![RootId(0)],
                targets: alloc::vec![SlotTarget::Vertex(VertexId(0))],
            },
        ];
        MGraph::assemble(1, roots, vertices, VertexId(0)).unwrap()
    }

    /// Degree-1 graph: a single vertex with one infinite edge.
    fn lonely_vertex() -> MGraph<BigRational> {
        let roots = alloc::vec![RootSpec {
            coords: alloc::vec![rat(1)],
            invertible: false,
            neg: None,
        }];
        let vertices = alloc::vec![VertexSpec {
            basis: alloc::vec![RootId(0)],
            targets: alloc::vec![SlotTarget::Infinite],
        }];
        MGraph::assemble(1, roots, vertices, VertexId(0)).unwrap()
    }

    #[test]
    fn degenerate_graphs_pass_axioms() {
        for g in [segment_pair(), lonely_vertex()] {
            let report = g.check_axioms();
            assert!(report.all_passed(), "{report}");
            assert!(!report.windowed);
            assert!(g.bipartite_check());
        }
    }

    #[test]
    fn lonely_vertex_sees_all_roots_positive() {
        let g = lonely_vertex();
        assert_eq!(g.positive_roots(VertexId(0)).unwrap(), alloc::vec![RootId(0)]);
    }

    #[test]
    fn segment_pair_distances() {
        let g = segment_pair();
        let (a, b) = (VertexId(0), VertexId(1));
        assert_eq!(g.distance(a, a).unwrap(), 0);
        assert_eq!(g.distance(a, b).unwrap(), 1);
        assert_eq!(g.distance_geometric(a, b).unwrap(), 1);
        let p = g.greedy_shortest_path(a, b).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.end(), b);
        assert!(g.greedy_shortest_path(a, a).unwrap().is_empty());
    }

    #[test]
    fn duplicate_ray_is_rejected_with_the_offending_pair() {
        let roots = alloc::vec![
            RootSpec {
                coords: alloc::vec![rat(1), rat(0)],
                invertible: false,
                neg: None,
            },
            RootSpec {
                coords: alloc::vec![rat(2), rat(0)],
                invertible: false,
                neg: None,
            },
        ];
        let vertices = alloc::vec![VertexSpec {
            basis: alloc::vec![RootId(0), RootId(1)],
            targets: alloc::vec![SlotTarget::Infinite, SlotTarget::Infinite],
        }];
        let err = MGraph::assemble(2, roots, vertices, VertexId(0)).unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("duplicate ray"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn noninvertible_with_opposite_ray_is_rejected() {
        let roots = alloc::vec![
            RootSpec {
                coords: alloc::vec![rat(1), rat(0)],
                invertible: false,
                neg: None,
            },
            RootSpec {
                coords: alloc::vec![rat(-1), rat(0)],
                invertible: false,
                neg: None,
            },
        ];
        let vertices = alloc::vec![VertexSpec {
            basis: alloc::vec![RootId(0), RootId(1)],
            targets: alloc::vec![SlotTarget::Infinite, SlotTarget::Infinite],
        }];
        assert!(matches!(
            MGraph::assemble(2, roots, vertices, VertexId(0)),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn inversion_set_crossing_is_an_involution() {
        let a = RootId(3);
        let b = RootId(5);
        let empty = InversionSet::new();
        let once = empty.crossed(a, b);
        assert!(once.contains(a));
        let back = once.crossed(b, a);
        assert_eq!(back, empty);
        assert_eq!(empty.symmetric_difference_len(&once), 1);
    }
}
