//! Dual chamber fans: locating functionals, the midpoint counterexample
//! family, and reconstruction of a graph from its fan.
//!
//! Every vertex dominates a closed chamber in the dual space, the
//! functionals pairing nonnegatively with its positive system. The
//! chambers tile a region of the dual; [`locate`] walks the tiling,
//! [`dual_reconstruct`] inverts it, reading a graph back off a planar
//! fan given either as 2d cone sectors or as triangles in an affine
//! slice of a 3d fan.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::{MGraph, RootId, RootSpec, SlotTarget, VertexId, VertexSpec};
use crate::scalar::{angle_between, canonicalize, dot, independent, Ray, Scalar, Vector};

/// Whether the functional pairs nonnegatively with every wall of `v`,
/// i.e. lies in the closed dual chamber of `v`.
pub fn chamber_contains<S: Scalar>(g: &MGraph<S>, v: VertexId, xi: &[S]) -> Result<bool> {
    if xi.len() != g.dim() {
        return Err(Error::DimMismatch {
            expected: g.dim(),
            got: xi.len(),
        });
    }
    Ok(g.vertex(v)
        .basis()
        .iter()
        .all(|&b| S::is_nonneg(&dot(g.roots().get(b).ray().dir(), xi))))
}

/// Pairs nonnegatively with every noninvertible root. Functionals outside
/// this cone lie in no chamber at all.
pub fn in_d_prime<S: Scalar>(g: &MGraph<S>, xi: &[S]) -> Result<bool> {
    if xi.len() != g.dim() {
        return Err(Error::DimMismatch {
            expected: g.dim(),
            got: xi.len(),
        });
    }
    Ok(g.roots()
        .iter()
        .all(|(_, e)| e.invertible() || S::is_nonneg(&dot(e.ray().dir(), xi))))
}

/// Finds the chamber containing `xi` by descent: from the base, cross the
/// lowest wall pairing negatively as long as that wall is invertible.
/// `Ok(None)` means no chamber contains `xi`; leaving the materialized
/// window is [`Error::OutOfWindow`].
pub fn locate<S: Scalar>(g: &MGraph<S>, xi: &[S]) -> Result<Option<VertexId>> {
    if xi.len() != g.dim() {
        return Err(Error::DimMismatch {
            expected: g.dim(),
            got: xi.len(),
        });
    }
    let mut at = g.base();
    // Each crossing strictly shrinks the set of positive roots pairing
    // negatively with xi, so the table size bounds the descent.
    for _ in 0..=g.roots().len() + 1 {
        let rec = g.vertex(at);
        let mut saw_noninvertible_negative = false;
        let mut crossing = None;
        for slot in 0..g.dim() {
            let entry = g.roots().get(rec.basis()[slot]);
            if S::is_nonneg(&dot(entry.ray().dir(), xi)) {
                continue;
            }
            if entry.invertible() {
                crossing = Some(slot);
                break;
            }
            saw_noninvertible_negative = true;
        }
        let Some(slot) = crossing else {
            return Ok(if saw_noninvertible_negative {
                None
            } else {
                Some(at)
            });
        };
        match rec.targets()[slot] {
            SlotTarget::Vertex(w) => at = w,
            SlotTarget::Truncated => return Err(Error::OutOfWindow),
            SlotTarget::Infinite => unreachable!("invertible walls have compact slots"),
        }
    }
    Err(Error::AxiomViolation(
        "location descent does not terminate".into(),
    ))
}

/// Smallest angle from the root's ray to any other table ray, in radians.
pub fn isolation_gap<S: Scalar>(g: &MGraph<S>, root: RootId) -> f64 {
    let me = g.roots().get(root).ray().dir();
    let mut best = f64::INFINITY;
    for (other, e) in g.roots().iter() {
        if other == root {
            continue;
        }
        let a = angle_between(me, e.ray().dir());
        if a < best {
            best = a;
        }
    }
    best
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow2(k: usize) -> BigInt {
    BigInt::from(1) << k
}

/// A triangle in the affine slice of a 3d fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceChamber<S: Scalar> {
    pub corners: Vec<(S, S)>,
}

/// Chambers of a 3d fan cut by an affine plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceFan<S: Scalar> {
    pub chambers: Vec<SliceChamber<S>>,
}

/// A planar sector spanned by two independent rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSector<S: Scalar> {
    pub rays: (Vector<S>, Vector<S>),
}

/// A fan of planar sectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFan<S: Scalar> {
    pub sectors: Vec<ConeSector<S>>,
}

/// Planar fan data in either presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fan2D<S: Scalar> {
    Cone(ConeFan<S>),
    Slice(SliceFan<S>),
}

/// One wall of a slice chamber: its inward functional and the chamber
/// across it, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceWall<S: Scalar> {
    pub functional: Vector<S>,
    pub neighbor: Option<usize>,
}

/// Wall structure of a slice fan; `chambers[c][w]` describes wall `w` of
/// chamber `c`, walls ordered `(0,1), (1,2), (0,2)` by corner index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceAnalysis<S: Scalar> {
    pub chambers: Vec<Vec<SliceWall<S>>>,
}

const WALL_CORNERS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (0, 2, 1)];

fn corner_ray<S: Scalar>(c: &(S, S)) -> Result<Ray<S>> {
    canonicalize(&[c.0.clone(), c.1.clone(), S::from_int(1)])
}

fn wall_functional<S: Scalar>(p: &(S, S), q: &(S, S), opposite: &(S, S)) -> Result<Vector<S>> {
    // Normal of the plane through the origin and the lifted corners.
    let a = p.1.clone() - q.1.clone();
    let b = q.0.clone() - p.0.clone();
    let c = p.0.clone() * q.1.clone() - p.1.clone() * q.0.clone();
    let mut f = vec![a, b, c];
    let sign = dot(&f, &[opposite.0.clone(), opposite.1.clone(), S::from_int(1)]);
    if S::is_zero_eps(&sign) {
        return Err(Error::BadFan("chamber corners are collinear".into()));
    }
    if !S::is_nonneg(&sign) {
        for x in &mut f {
            *x = -x.clone();
        }
    }
    Ok(f)
}

/// Chamber-and-wall indices grouped by the ray keys of a wall's corners.
type WallIncidence<S> =
    BTreeMap<(<S as Scalar>::Key, <S as Scalar>::Key), Vec<(usize, usize)>>;

/// Computes wall functionals and adjacency of a slice fan, validating
/// that walls pair up and chambers do not overlap.
pub fn analyze_slice<S: Scalar>(fan: &SliceFan<S>) -> Result<SliceAnalysis<S>> {
    if fan.chambers.is_empty() {
        return Err(Error::BadFan("fan has no chambers".into()));
    }
    for (i, ch) in fan.chambers.iter().enumerate() {
        if ch.corners.len() != 3 {
            return Err(Error::BadFan(format!("chamber {i} is not a triangle")));
        }
    }

    let mut walls: Vec<Vec<SliceWall<S>>> = Vec::with_capacity(fan.chambers.len());
    let mut by_pair: WallIncidence<S> = BTreeMap::new();
    for (ci, ch) in fan.chambers.iter().enumerate() {
        let keys: Vec<S::Key> = ch
            .corners
            .iter()
            .map(|c| corner_ray(c).map(|r| r.key().clone()))
            .collect::<Result<_>>()?;
        let mut ws = Vec::with_capacity(3);
        for (wi, &(a, b, o)) in WALL_CORNERS.iter().enumerate() {
            let f = wall_functional(&ch.corners[a], &ch.corners[b], &ch.corners[o])?;
            let pair = if keys[a] <= keys[b] {
                (keys[a].clone(), keys[b].clone())
            } else {
                (keys[b].clone(), keys[a].clone())
            };
            by_pair.entry(pair).or_default().push((ci, wi));
            ws.push(SliceWall {
                functional: f,
                neighbor: None,
            });
        }
        walls.push(ws);
    }

    for (_, sharers) in by_pair {
        match sharers.as_slice() {
            [_] => {}
            [(c1, w1), (c2, w2)] => {
                let f1 = canonicalize(&walls[*c1][*w1].functional)?;
                let f2 = canonicalize(&walls[*c2][*w2].functional)?;
                if f1.negated().key() != f2.key() {
                    return Err(Error::BadFan(format!(
                        "chambers {c1} and {c2} sit on one side of a shared wall"
                    )));
                }
                walls[*c1][*w1].neighbor = Some(*c2);
                walls[*c2][*w2].neighbor = Some(*c1);
            }
            many => {
                return Err(Error::BadFan(format!(
                    "a wall is shared by {} chambers",
                    many.len()
                )));
            }
        }
    }

    // Pairwise separation: some wall line of one chamber must keep the
    // other chamber weakly on its far side. Touching is fine.
    for i in 0..fan.chambers.len() {
        for j in i + 1..fan.chambers.len() {
            let separated = |from: usize, other: usize| -> bool {
                walls[from].iter().any(|w| {
                    fan.chambers[other].corners.iter().all(|c| {
                        let val =
                            dot(&w.functional, &[c.0.clone(), c.1.clone(), S::from_int(1)]);
                        !S::is_nonneg(&val) || S::is_zero_eps(&val)
                    })
                })
            };
            if !separated(i, j) && !separated(j, i) {
                return Err(Error::BadFan(format!("chambers {i} and {j} overlap")));
            }
        }
    }

    Ok(SliceAnalysis { chambers: walls })
}

struct RootBuilder<S: Scalar> {
    specs: Vec<RootSpec<S>>,
    by_key: BTreeMap<S::Key, RootId>,
}

impl<S: Scalar> RootBuilder<S> {
    fn new() -> Self {
        RootBuilder {
            specs: Vec::new(),
            by_key: BTreeMap::new(),
        }
    }

    fn invertible(&mut self, f: &[S]) -> Result<RootId> {
        let ray = canonicalize(f)?;
        if let Some(&id) = self.by_key.get(ray.key()) {
            if self.specs[id.index()].neg.is_none() {
                return Err(Error::BadFan(
                    "a line doubles as boundary and crossing wall".into(),
                ));
            }
            return Ok(id);
        }
        let id = RootId(self.specs.len() as u32);
        let nid = RootId(id.0 + 1);
        let neg = ray.negated();
        self.by_key.insert(ray.key().clone(), id);
        self.by_key.insert(neg.key().clone(), nid);
        self.specs.push(RootSpec {
            coords: ray.dir().to_vec(),
            invertible: true,
            neg: Some(nid),
        });
        self.specs.push(RootSpec {
            coords: neg.dir().to_vec(),
            invertible: true,
            neg: Some(id),
        });
        Ok(id)
    }

    fn noninvertible(&mut self, f: &[S]) -> Result<RootId> {
        let ray = canonicalize(f)?;
        if let Some(&id) = self.by_key.get(ray.key()) {
            if self.specs[id.index()].neg.is_some() {
                return Err(Error::BadFan(
                    "a line doubles as boundary and crossing wall".into(),
                ));
            }
            return Ok(id);
        }
        let id = RootId(self.specs.len() as u32);
        self.by_key.insert(ray.key().clone(), id);
        self.specs.push(RootSpec {
            coords: ray.dir().to_vec(),
            invertible: false,
            neg: None,
        });
        Ok(id)
    }
}

fn reconstruct_slice<S: Scalar>(fan: &SliceFan<S>) -> Result<MGraph<S>> {
    let analysis = analyze_slice(fan)?;
    let mut roots = RootBuilder::new();
    let mut vertices = Vec::with_capacity(analysis.chambers.len());
    for ws in &analysis.chambers {
        let mut basis = Vec::with_capacity(3);
        let mut targets = Vec::with_capacity(3);
        for w in ws {
            match w.neighbor {
                Some(j) => {
                    basis.push(roots.invertible(&w.functional)?);
                    targets.push(SlotTarget::Vertex(VertexId(j as u32)));
                }
                None => {
                    basis.push(roots.noninvertible(&w.functional)?);
                    targets.push(SlotTarget::Infinite);
                }
            }
        }
        vertices.push(VertexSpec { basis, targets });
    }
    finish_reconstruction(3, roots.specs, vertices)
}

fn reconstruct_cone<S: Scalar>(fan: &ConeFan<S>) -> Result<MGraph<S>> {
    if fan.sectors.is_empty() {
        return Err(Error::BadFan("fan has no sectors".into()));
    }
    let rot90 = |r: &[S]| vec![-r[1].clone(), r[0].clone()];
    let mut sides: Vec<[(S::Key, Vector<S>); 2]> = Vec::with_capacity(fan.sectors.len());
    let mut by_ray: BTreeMap<S::Key, Vec<(usize, usize)>> = BTreeMap::new();
    for (si, sector) in fan.sectors.iter().enumerate() {
        let (g0, g1) = (&sector.rays.0, &sector.rays.1);
        if g0.len() != 2 || g1.len() != 2 {
            return Err(Error::BadFan(format!("sector {si} is not planar")));
        }
        if !independent(&[g0.clone(), g1.clone()]) {
            return Err(Error::BadFan(format!("sector {si} is degenerate")));
        }
        let mut pair = Vec::with_capacity(2);
        for (ray, other) in [(g0, g1), (g1, g0)] {
            let key = canonicalize(ray)?.key().clone();
            let mut f = rot90(ray);
            let sign = dot(&f, other);
            if S::is_zero_eps(&sign) {
                return Err(Error::BadFan(format!("sector {si} is degenerate")));
            }
            if !S::is_nonneg(&sign) {
                for x in &mut f {
                    *x = -x.clone();
                }
            }
            by_ray.entry(key.clone()).or_default().push((si, pair.len()));
            pair.push((key, f));
        }
        sides.push([pair[0].clone(), pair[1].clone()]);
    }

    let mut neighbor: Vec<[Option<usize>; 2]> = vec![[None, None]; fan.sectors.len()];
    for (_, sharers) in by_ray {
        match sharers.as_slice() {
            [_] => {}
            [(s1, e1), (s2, e2)] => {
                let f1 = canonicalize(&sides[*s1][*e1].1)?;
                let f2 = canonicalize(&sides[*s2][*e2].1)?;
                if f1.negated().key() != f2.key() {
                    return Err(Error::BadFan(format!(
                        "sectors {s1} and {s2} sit on one side of a shared ray"
                    )));
                }
                neighbor[*s1][*e1] = Some(*s2);
                neighbor[*s2][*e2] = Some(*s1);
            }
            many => {
                return Err(Error::BadFan(format!(
                    "a boundary ray is shared by {} sectors",
                    many.len()
                )));
            }
        }
    }

    for i in 0..fan.sectors.len() {
        for j in i + 1..fan.sectors.len() {
            let separated = |from: usize, other: usize| -> bool {
                sides[from].iter().any(|(_, f)| {
                    [&fan.sectors[other].rays.0, &fan.sectors[other].rays.1]
                        .iter()
                        .all(|gen| {
                            let val = dot(f, gen);
                            !S::is_nonneg(&val) || S::is_zero_eps(&val)
                        })
                })
            };
            if !separated(i, j) && !separated(j, i) {
                return Err(Error::BadFan(format!("sectors {i} and {j} overlap")));
            }
        }
    }

    let mut roots = RootBuilder::new();
    let mut vertices = Vec::with_capacity(fan.sectors.len());
    for (si, side_pair) in sides.iter().enumerate() {
        let mut basis = Vec::with_capacity(2);
        let mut targets = Vec::with_capacity(2);
        for (e, (_, f)) in side_pair.iter().enumerate() {
            match neighbor[si][e] {
                Some(j) => {
                    basis.push(roots.invertible(f)?);
                    targets.push(SlotTarget::Vertex(VertexId(j as u32)));
                }
                None => {
                    basis.push(roots.noninvertible(f)?);
                    targets.push(SlotTarget::Infinite);
                }
            }
        }
        vertices.push(VertexSpec { basis, targets });
    }
    finish_reconstruction(2, roots.specs, vertices)
}

fn finish_reconstruction<S: Scalar>(
    dim: usize,
    roots: Vec<RootSpec<S>>,
    vertices: Vec<VertexSpec>,
) -> Result<MGraph<S>> {
    let g = MGraph::assemble(dim, roots, vertices, VertexId(0))
        .map_err(|e| Error::BadFan(format!("fan does not assemble: {e}")))?;
    let report = g.check_axioms();
    if !report.all_passed() {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        return Err(Error::AxiomViolation(format!(
            "reconstructed graph fails: {}",
            failing.join(", ")
        )));
    }
    Ok(g)
}

/// Reads a graph back off planar fan data. Structural defects in the fan
/// are [`Error::BadFan`]; a clean fan whose graph still fails an axiom is
/// [`Error::AxiomViolation`].
pub fn dual_reconstruct<S: Scalar>(fan: &Fan2D<S>) -> Result<MGraph<S>> {
    match fan {
        Fan2D::Cone(cone) => reconstruct_cone(cone),
        Fan2D::Slice(slice) => reconstruct_slice(slice),
    }
}

/// Extracts the dual sector of every vertex of a rank-2 graph.
pub fn chamber_fan<S: Scalar>(g: &MGraph<S>) -> Result<ConeFan<S>> {
    if g.dim() != 2 {
        return Err(Error::DimMismatch {
            expected: 2,
            got: g.dim(),
        });
    }
    let mut sectors = Vec::with_capacity(g.vertex_count());
    for v in g.vertex_ids() {
        let basis = g.vertex(v).basis();
        let rays: Vec<Vector<S>> = (0..2)
            .map(|slot| {
                // Extreme ray of the dual sector: orthogonal to the other
                // wall, paired positively with this one.
                let this = g.roots().get(basis[slot]).ray().dir();
                let other = g.roots().get(basis[1 - slot]).ray().dir();
                let mut ray = vec![-other[1].clone(), other[0].clone()];
                let sign = dot(&ray, this);
                if S::is_zero_eps(&sign) {
                    return Err(Error::AxiomViolation(format!(
                        "walls of vertex {v} are parallel"
                    )));
                }
                if !S::is_nonneg(&sign) {
                    for x in &mut ray {
                        *x = -x.clone();
                    }
                }
                Ok(ray)
            })
            .collect::<Result<_>>()?;
        sectors.push(ConeSector {
            rays: (rays[0].clone(), rays[1].clone()),
        });
    }
    Ok(ConeFan { sectors })
}

/// The family of fans from the iterated-midpoint construction: a triangle
/// `A B C` subdivided along midpoints marching toward `C`, truncated after
/// `n` subdivision steps. Returns the slice fan and its graph.
///
/// The crossing walls accumulate toward [`midpoint_limit_direction`],
/// whose opposite ray is a genuine noninvertible root; no fixed
/// neighborhood of the table stays finite as `n` grows.
pub fn midpoint_fan(n: usize) -> Result<(SliceFan<BigRational>, MGraph<BigRational>)> {
    if n == 0 {
        return Err(Error::Parse("midpoint fan needs at least one step".into()));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    // Slice corners: A origin, B and C on the axes, M_0 the midpoint of
    // B C, and M_k for k >= 1 marching from the midpoint of A C up to C.
    let a_pt = (rat(0), rat(0));
    let b_pt = (rat(1), rat(0));
    let m = |k: usize| -> (BigRational, BigRational) {
        if k == 0 {
            (half.clone(), half.clone())
        } else {
            (
                rat(0),
                BigRational::new(pow2(k) - BigInt::from(1), pow2(k)),
            )
        }
    };

    let mut chambers = Vec::with_capacity(n + 2);
    chambers.push(SliceChamber {
        corners: vec![a_pt.clone(), b_pt, m(0)],
    });
    chambers.push(SliceChamber {
        corners: vec![a_pt, m(0), m(1)],
    });
    for j in 2..=n + 1 {
        chambers.push(SliceChamber {
            corners: vec![m(0), m(j - 1), m(j)],
        });
    }
    let fan = SliceFan { chambers };

    // Roots, from the wall lines of the subdivision.
    let f = |k: usize| -> Vec<BigRational> {
        let two_k = BigRational::from_integer(pow2(k));
        vec![
            two_k.clone() - rat(2),
            two_k.clone(),
            rat(1) - two_k,
        ]
    };
    let neg3 = |v: &[BigRational]| -> Vec<BigRational> { v.iter().map(|x| -x.clone()).collect() };

    let mut roots = vec![
        RootSpec {
            coords: vec![rat(0), rat(1), rat(0)],
            invertible: false,
            neg: None,
        },
        RootSpec {
            coords: vec![rat(-1), rat(-1), rat(1)],
            invertible: false,
            neg: None,
        },
        RootSpec {
            coords: vec![rat(1), rat(0), rat(0)],
            invertible: false,
            neg: None,
        },
        RootSpec {
            coords: vec![rat(1), rat(-1), rat(0)],
            invertible: true,
            neg: Some(RootId(4)),
        },
        RootSpec {
            coords: vec![rat(-1), rat(1), rat(0)],
            invertible: true,
            neg: Some(RootId(3)),
        },
    ];
    let fk = |k: usize| RootId((5 + 2 * (k - 1)) as u32);
    let neg_fk = |k: usize| RootId((6 + 2 * (k - 1)) as u32);
    for k in 1..=n {
        roots.push(RootSpec {
            coords: f(k),
            invertible: true,
            neg: Some(neg_fk(k)),
        });
        roots.push(RootSpec {
            coords: neg3(&f(k)),
            invertible: true,
            neg: Some(fk(k)),
        });
    }
    let far = RootId((5 + 2 * n) as u32);
    roots.push(RootSpec {
        coords: neg3(&f(n + 1)),
        invertible: false,
        neg: None,
    });

    let (q, r, s, u, neg_u) = (RootId(0), RootId(1), RootId(2), RootId(3), RootId(4));
    let mut vertices = Vec::with_capacity(n + 2);
    vertices.push(VertexSpec {
        basis: vec![q, r, u],
        targets: vec![
            SlotTarget::Infinite,
            SlotTarget::Infinite,
            SlotTarget::Vertex(VertexId(1)),
        ],
    });
    vertices.push(VertexSpec {
        basis: vec![neg_u, s, neg_fk(1)],
        targets: vec![
            SlotTarget::Vertex(VertexId(0)),
            SlotTarget::Infinite,
            SlotTarget::Vertex(VertexId(2)),
        ],
    });
    for j in 2..=n {
        vertices.push(VertexSpec {
            basis: vec![fk(j - 1), s, neg_fk(j)],
            targets: vec![
                SlotTarget::Vertex(VertexId((j - 1) as u32)),
                SlotTarget::Infinite,
                SlotTarget::Vertex(VertexId((j + 1) as u32)),
            ],
        });
    }
    vertices.push(VertexSpec {
        basis: vec![fk(n), s, far],
        targets: vec![
            SlotTarget::Vertex(VertexId(n as u32)),
            SlotTarget::Infinite,
            SlotTarget::Infinite,
        ],
    });

    let graph = MGraph::assemble(3, roots, vertices, VertexId(0))?;
    Ok((fan, graph))
}

/// Direction the midpoint crossing walls converge to. Its negative is the
/// noninvertible root on the wall through `B`, so the limit itself can
/// never join the table.
pub fn midpoint_limit_direction() -> Vector<BigRational> {
    vec![rat(1), rat(1), rat(-1)]
}
