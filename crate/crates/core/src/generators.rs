//! Graph builders: Cayley graphs of Coxeter systems realized by their
//! geometric representation, exact Weyl variants from Cartan data, and the
//! hand-rolled rank-2 families (polygons, infinite dihedral windows,
//! segments, tails).
//!
//! Generation is a breadth-first walk over group elements. Elements are
//! deduplicated by inversion set, which is faithful exactly when the input
//! honestly presents a Coxeter group; the generator keeps the matrices
//! around and raises [`Error::KeyCollision`] when two distinct matrices
//! land on one key.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;
use num_rational::BigRational;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{InversionSet, MGraph, RootId, RootSpec, SlotTarget, VertexId, VertexSpec};
use crate::scalar::{canonicalize, Scalar, Vector};

/// Row-major square matrix.
pub type SquareMatrix<S> = Vec<Vec<S>>;

/// A Coxeter matrix; `0` encodes an infinite bond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    entries: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::BadCoxeterMatrix("matrix is empty".into()));
        }
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::BadCoxeterMatrix("matrix is not square".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row[i] != 1 {
                return Err(Error::BadCoxeterMatrix(format!(
                    "diagonal entry {i} must be 1"
                )));
            }
            for (j, &bond) in row.iter().enumerate().take(i) {
                if bond != entries[j][i] {
                    return Err(Error::BadCoxeterMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
                if bond == 1 {
                    return Err(Error::BadCoxeterMatrix(format!(
                        "bond ({i},{j}) must be 0 (infinite) or at least 2"
                    )));
                }
            }
        }
        Ok(CoxeterMatrix { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    /// Rank-2 system with one bond of order `m`; `0` means infinite.
    pub fn dihedral(m: u32) -> Result<Self> {
        CoxeterMatrix::new(vec![vec![1, m], vec![m, 1]])
    }

    /// Simply laced chain with `n` nodes.
    pub fn type_a(n: usize) -> Result<Self> {
        CoxeterMatrix::new(chain(n, 3))
    }

    /// Chain with the last bond of order 4.
    pub fn type_b(n: usize) -> Result<Self> {
        let mut e = chain(n, 3);
        if n >= 2 {
            e[n - 1][n - 2] = 4;
            e[n - 2][n - 1] = 4;
        }
        CoxeterMatrix::new(e)
    }

    /// `n` mutually commuting involutions.
    pub fn a1_power(n: usize) -> Result<Self> {
        CoxeterMatrix::new(chain(n, 2))
    }
}

fn chain(n: usize, bond: u32) -> Vec<Vec<u32>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        1
                    } else if i.abs_diff(j) == 1 {
                        bond
                    } else {
                        2
                    }
                })
                .collect()
        })
        .collect()
}

/// A generalized Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::BadCartanMatrix("matrix is empty".into()));
        }
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::BadCartanMatrix("matrix is not square".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row[i] != 2 {
                return Err(Error::BadCartanMatrix(format!(
                    "diagonal entry {i} must be 2"
                )));
            }
            for (j, &e) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if e > 0 {
                    return Err(Error::BadCartanMatrix(format!(
                        "off-diagonal entry ({i},{j}) must be nonpositive"
                    )));
                }
                if (e == 0) != (entries[j][i] == 0) {
                    return Err(Error::BadCartanMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) must vanish together"
                    )));
                }
            }
        }
        Ok(CartanMatrix { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn transpose(&self) -> CartanMatrix {
        let n = self.rank();
        CartanMatrix {
            entries: (0..n)
                .map(|i| (0..n).map(|j| self.entries[j][i]).collect())
                .collect(),
        }
    }

    pub fn type_a(n: usize) -> Result<Self> {
        CartanMatrix::new(cartan_chain(n))
    }

    /// Last simple root short: the final row carries the `-2`.
    pub fn type_b(n: usize) -> Result<Self> {
        let mut e = cartan_chain(n);
        if n >= 2 {
            e[n - 1][n - 2] = -2;
        }
        CartanMatrix::new(e)
    }

    /// Last simple root long; the transpose of type B.
    pub fn type_c(n: usize) -> Result<Self> {
        let mut e = cartan_chain(n);
        if n >= 2 {
            e[n - 2][n - 1] = -2;
        }
        CartanMatrix::new(e)
    }

    pub fn type_g2() -> Result<Self> {
        CartanMatrix::new(vec![vec![2, -1], vec![-3, 2]])
    }
}

fn cartan_chain(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// Reflection matrices of the geometric representation over the standard
/// bilinear form `B(s,t) = -cos(pi/m_st)`, with `-1` for infinite bonds.
pub fn geometric_rep(cox: &CoxeterMatrix) -> Vec<SquareMatrix<f64>> {
    let n = cox.rank();
    let bond = |s: usize, t: usize| -> f64 {
        let m = cox.entry(s, t);
        if m == 0 {
            -1.0
        } else {
            -Float::cos(PI / f64::from(m))
        }
    };
    (0..n)
        .map(|s| {
            let mut mat = identity::<f64>(n);
            for (k, x) in mat[s].iter_mut().enumerate() {
                *x = if s == k { -1.0 } else { -2.0 * bond(s, k) };
            }
            mat
        })
        .collect()
}

/// Exact reflection matrices from a Cartan matrix: the `i`-th generator
/// sends the `j`-th simple root to itself minus `a_ij` times the `i`-th.
pub fn weyl_rep(cartan: &CartanMatrix) -> Vec<SquareMatrix<BigRational>> {
    let n = cartan.rank();
    (0..n)
        .map(|i| {
            let mut mat = identity::<BigRational>(n);
            for (j, x) in mat[i].iter_mut().enumerate() {
                *x = BigRational::from_int(i64::from(i == j) - cartan.entry(i, j));
            }
            mat
        })
        .collect()
}

fn identity<S: Scalar>(n: usize) -> SquareMatrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| S::from_int(i64::from(i == j))).collect())
        .collect()
}

fn mat_col<S: Scalar>(m: &SquareMatrix<S>, j: usize) -> Vector<S> {
    m.iter().map(|row| row[j].clone()).collect()
}

fn mat_mul<S: Scalar>(a: &SquareMatrix<S>, b: &SquareMatrix<S>) -> SquareMatrix<S> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = S::from_int(0);
                    for k in 0..n {
                        acc = acc + a[i][k].clone() * b[k][j].clone();
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Guard width for float key collisions; well-separated rays in every
/// supported family differ by far more than this.
const KEY_GUARD: f64 = 1e-6;

fn dirs_close<S: Scalar>(a: &[S], b: &[S]) -> bool {
    if S::EXACT {
        a == b
    } else {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x.to_f64() - y.to_f64()).abs() <= KEY_GUARD)
    }
}

fn mats_close<S: Scalar>(a: &SquareMatrix<S>, b: &SquareMatrix<S>) -> bool {
    a.iter().zip(b).all(|(ra, rb)| dirs_close::<S>(ra, rb))
}

struct PairInterner<S: Scalar> {
    specs: Vec<RootSpec<S>>,
    by_key: BTreeMap<S::Key, RootId>,
}

impl<S: Scalar> PairInterner<S> {
    fn intern(&mut self, dir: &[S]) -> Result<RootId> {
        let ray = canonicalize(dir)?;
        if let Some(&id) = self.by_key.get(ray.key()) {
            if !dirs_close::<S>(&self.specs[id.index()].coords, ray.dir()) {
                return Err(Error::KeyCollision(format!(
                    "distinct rays share the key of root {id}"
                )));
            }
            return Ok(id);
        }
        let neg = ray.negated();
        if self.by_key.contains_key(neg.key()) {
            return Err(Error::KeyCollision("ray keys lost sign symmetry".into()));
        }
        let id = RootId(self.specs.len() as u32);
        let nid = RootId(id.0 + 1);
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
}

struct GenVertex<S: Scalar> {
    mat: SquareMatrix<S>,
    inv: InversionSet,
    basis: Vec<RootId>,
    targets: Vec<Option<SlotTarget>>,
}

fn make_vertex<S: Scalar>(
    interner: &mut PairInterner<S>,
    mat: SquareMatrix<S>,
    inv: InversionSet,
) -> Result<GenVertex<S>> {
    let n = mat.len();
    let basis = (0..n)
        .map(|x| interner.intern(&mat_col(&mat, x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenVertex {
        mat,
        inv,
        basis,
        targets: vec![None; n],
    })
}

/// Breadth-first Cayley graph of involutions acting on the coordinate
/// simplex, windowed at word length `radius`. The columns of an element's
/// matrix are its basis rays; crossing slot `x` multiplies by the `x`-th
/// generator on the right.
pub fn generate_cayley<S: Scalar>(
    gens: &[SquareMatrix<S>],
    radius: usize,
) -> Result<MGraph<S>> {
    let n = gens.len();
    if n == 0 {
        return Err(Error::Parse("need at least one generator".into()));
    }
    for (x, m) in gens.iter().enumerate() {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("generator {x} is not {n}x{n}")));
        }
        if !mats_close::<S>(&mat_mul(m, m), &identity(n)) {
            return Err(Error::Parse(format!("generator {x} is not an involution")));
        }
    }

    let mut interner = PairInterner {
        specs: Vec::new(),
        by_key: BTreeMap::new(),
    };
    let mut verts: Vec<GenVertex<S>> = Vec::new();
    let mut by_inv: BTreeMap<InversionSet, u32> = BTreeMap::new();

    let root = make_vertex(&mut interner, identity(n), InversionSet::new())?;
    by_inv.insert(root.inv.clone(), 0);
    verts.push(root);

    let mut queue: Vec<(u32, usize)> = vec![(0, 0)];
    let mut head = 0;
    while head < queue.len() {
        let (gi, len) = queue[head];
        head += 1;
        let g = gi as usize;
        for (x, gen) in gens.iter().enumerate() {
            if verts[g].targets[x].is_some() {
                continue;
            }
            let lost = verts[g].basis[x];
            let gained = interner.specs[lost.index()]
                .neg
                .expect("cayley roots come in pairs");
            let new_inv = verts[g].inv.crossed(gained, lost);
            if let Some(&w) = by_inv.get(&new_inv) {
                let expect = mat_mul(&verts[g].mat, gen);
                if !mats_close::<S>(&expect, &verts[w as usize].mat) {
                    return Err(Error::KeyCollision(format!(
                        "vertices {gi} and {w} share an inversion set but differ as matrices"
                    )));
                }
                if verts[w as usize].targets[x].is_some() {
                    return Err(Error::KeyCollision(format!(
                        "slot {x} of vertex {w} is claimed twice"
                    )));
                }
                verts[g].targets[x] = Some(SlotTarget::Vertex(VertexId(w)));
                verts[w as usize].targets[x] = Some(SlotTarget::Vertex(VertexId(gi)));
            } else if len + 1 > radius {
                verts[g].targets[x] = Some(SlotTarget::Truncated);
            } else {
                let mat = mat_mul(&verts[g].mat, gen);
                let wi = verts.len() as u32;
                let vtx = make_vertex(&mut interner, mat, new_inv.clone())?;
                by_inv.insert(new_inv, wi);
                verts.push(vtx);
                verts[g].targets[x] = Some(SlotTarget::Vertex(VertexId(wi)));
                verts[wi as usize].targets[x] = Some(SlotTarget::Vertex(VertexId(gi)));
                queue.push((wi, len + 1));
            }
        }
    }

    let vertex_specs: Vec<VertexSpec> = verts
        .into_iter()
        .map(|v| VertexSpec {
            basis: v.basis,
            targets: v
                .targets
                .into_iter()
                .map(|t| t.expect("every slot is resolved on pop"))
                .collect(),
        })
        .collect();
    MGraph::assemble(n, interner.specs, vertex_specs, VertexId(0))
}

/// Cayley graph over the geometric representation, float backend.
pub fn build_cayley(cox: &CoxeterMatrix, radius: usize) -> Result<MGraph<f64>> {
    generate_cayley(&geometric_rep(cox), radius)
}

/// Cayley graph over the Cartan reflections, exact backend.
pub fn build_weyl(cartan: &CartanMatrix, radius: usize) -> Result<MGraph<BigRational>> {
    generate_cayley(&weyl_rep(cartan), radius)
}

/// The degree-2 families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank2 {
    /// Cycle of `2m` vertices, the dihedral group of order `2m`.
    Polygon { m: u32 },
    /// Window of the infinite dihedral group: `2*radius + 1` vertices
    /// with truncated ends.
    InfiniteDihedral { radius: usize },
    /// Chain of `k+1` vertices with a genuine infinite edge at each end.
    Segment { k: usize },
    /// Chain with an infinite edge at one end, truncated at the other.
    Tail { length: usize },
}

/// Builds one of the rank-2 families.
pub fn build_rank2(kind: Rank2) -> Result<MGraph<f64>> {
    match kind {
        Rank2::Polygon { m } => build_cayley(&CoxeterMatrix::dihedral(m)?, m as usize),
        Rank2::InfiniteDihedral { radius } => {
            build_cayley(&CoxeterMatrix::dihedral(0)?, radius)
        }
        Rank2::Segment { k } => build_segment(k),
        Rank2::Tail { length } => build_tail(length),
    }
}

/// Polygon by total cycle length; odd lengths cannot be realized.
pub fn polygon_total(gon: usize) -> Result<MGraph<f64>> {
    if !gon.is_multiple_of(2) {
        return Err(Error::OddPolygon);
    }
    if gon < 4 {
        return Err(Error::Parse("polygon needs at least four edges".into()));
    }
    build_rank2(Rank2::Polygon { m: (gon / 2) as u32 })
}

fn ray2(theta_deg: f64) -> Vector<f64> {
    let t = theta_deg * PI / 180.0;
    vec![Float::cos(t), Float::sin(t)]
}

/// Segment realization: crossing rays fan out by `80/k` degrees below the
/// x-axis with their negatives mirrored above; the two end rays sit at 90
/// and 91 degrees, inside every chamber cone but on no crossing line.
fn build_segment(k: usize) -> Result<MGraph<f64>> {
    if k == 0 {
        return Err(Error::Parse("segment needs at least one compact edge".into()));
    }
    let eps = 80.0 / k as f64;
    let mut roots = vec![
        RootSpec {
            coords: ray2(90.0),
            invertible: false,
            neg: None,
        },
        RootSpec {
            coords: ray2(91.0),
            invertible: false,
            neg: None,
        },
    ];
    let gamma = |i: usize| RootId((2 * i) as u32);
    let neg_gamma = |i: usize| RootId((2 * i + 1) as u32);
    for i in 1..=k {
        roots.push(RootSpec {
            coords: ray2(-(i as f64) * eps),
            invertible: true,
            neg: Some(neg_gamma(i)),
        });
        roots.push(RootSpec {
            coords: ray2(180.0 - (i as f64) * eps),
            invertible: true,
            neg: Some(gamma(i)),
        });
    }
    let near = RootId(0);
    let far = RootId(1);
    let mut vertices = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let spec = if i == 0 {
            VertexSpec {
                basis: vec![near, neg_gamma(1)],
                targets: vec![SlotTarget::Infinite, SlotTarget::Vertex(VertexId(1))],
            }
        } else if i == k {
            VertexSpec {
                basis: vec![gamma(k), far],
                targets: vec![
                    SlotTarget::Vertex(VertexId((k - 1) as u32)),
                    SlotTarget::Infinite,
                ],
            }
        } else {
            VertexSpec {
                basis: vec![gamma(i), neg_gamma(i + 1)],
                targets: vec![
                    SlotTarget::Vertex(VertexId((i - 1) as u32)),
                    SlotTarget::Vertex(VertexId((i + 1) as u32)),
                ],
            }
        };
        vertices.push(spec);
    }
    MGraph::assemble(2, roots, vertices, VertexId(0))
}

/// Tail realization: crossing rays accumulate geometrically toward 80
/// degrees, so any window length embeds in the same infinite picture.
fn build_tail(length: usize) -> Result<MGraph<f64>> {
    let theta = |i: usize| 80.0 * (1.0 - Float::powi(2.0_f64, -(i as i32)));
    let mut roots = vec![RootSpec {
        coords: ray2(90.0),
        invertible: false,
        neg: None,
    }];
    let gamma = |i: usize| RootId((2 * i - 1) as u32);
    let neg_gamma = |i: usize| RootId((2 * i) as u32);
    for i in 1..=length + 1 {
        roots.push(RootSpec {
            coords: ray2(-theta(i)),
            invertible: true,
            neg: Some(neg_gamma(i)),
        });
        roots.push(RootSpec {
            coords: ray2(180.0 - theta(i)),
            invertible: true,
            neg: Some(gamma(i)),
        });
    }
    let mut vertices = Vec::with_capacity(length + 1);
    for i in 0..=length {
        let up = if i == length {
            SlotTarget::Truncated
        } else {
            SlotTarget::Vertex(VertexId((i + 1) as u32))
        };
        let spec = if i == 0 {
            VertexSpec {
                basis: vec![RootId(0), neg_gamma(1)],
                targets: vec![SlotTarget::Infinite, up],
            }
        } else {
            VertexSpec {
                basis: vec![gamma(i), neg_gamma(i + 1)],
                targets: vec![SlotTarget::Vertex(VertexId((i - 1) as u32)), up],
            }
        };
        vertices.push(spec);
    }
    MGraph::assemble(2, roots, vertices, VertexId(0))
}
