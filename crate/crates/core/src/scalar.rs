//! Scalar backends and the small amount of linear geometry the graph model
//! needs: canonical rays, simplicial cones, and membership tests.
//!
//! Two backends exist. [`num_rational::BigRational`] computes exactly and
//! backs all crystallographic data. `f64` covers general Coxeter
//! realizations, whose reflection matrices involve `cos(pi/m)`; every float
//! comparison goes through a global tolerance which can be adjusted once at
//! startup. A graph fixes its backend through the type parameter, so mixing
//! backends inside one graph is not expressible.

use alloc::vec::Vec;
use core::fmt::Debug;
use core::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense coordinate vector over a scalar backend.
pub type Vector<S> = Vec<S>;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(1e-9f64.to_bits());

/// Replaces the global float tolerance. Intended to be set once, before
/// any float-backed graph is built.
pub fn set_tolerance(tau: f64) {
    assert!(tau.is_finite() && tau > 0.0, "tolerance must be positive");
    TOLERANCE_BITS.store(tau.to_bits(), Ordering::Relaxed);
}

/// Current float comparison tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Outcome of a linear solve against an ordered generator list.
#[derive(Debug, Clone, PartialEq)]
pub enum Solve<S> {
    /// Generators independent and the target in their span; the unique
    /// coefficient list is returned in generator order.
    Unique(Vec<S>),
    /// The target lies outside the span of the generators.
    Outside,
    /// The generators are linearly dependent.
    Dependent,
}

/// Arithmetic backend for geometric realizations.
pub trait Scalar: Clone + PartialOrd + Signed + Debug {
    /// Canonical, ordered form of a ray direction; two rays coincide
    /// exactly when their keys coincide.
    type Key: Clone + Ord + Eq + Debug;

    /// True when arithmetic is exact.
    const EXACT: bool;

    fn from_int(n: i64) -> Self;

    /// Lossy view, used only for angles and diagnostics.
    fn to_f64(&self) -> f64;

    /// `self >= 0` under the backend comparison policy.
    fn is_nonneg(&self) -> bool;

    /// `self > 0` strictly, beyond the tolerance band.
    fn is_pos(&self) -> bool;

    /// `self == 0` within the tolerance band.
    fn is_zero_eps(&self) -> bool;

    /// Scales a nonzero vector to the canonical representative of its ray.
    fn canonical_dir(v: &[Self]) -> Result<Vec<Self>>;

    /// Key of an already canonical direction.
    fn ray_key(dir: &[Self]) -> Self::Key;

    /// Solves `sum_j x_j * cols[j] = target`.
    fn solve(cols: &[Vector<Self>], target: &[Self]) -> Solve<Self>;
}

impl Scalar for BigRational {
    type Key = Vec<BigInt>;

    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_nonneg(&self) -> bool {
        !self.is_negative()
    }

    fn is_pos(&self) -> bool {
        self.is_positive()
    }

    fn is_zero_eps(&self) -> bool {
        self.is_zero()
    }

    fn canonical_dir(v: &[Self]) -> Result<Vec<Self>> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroRay);
        }
        let mut lcm = BigInt::one();
        for x in v {
            lcm = lcm.lcm(x.denom());
        }
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
        let mut gcd = BigInt::zero();
        for n in &ints {
            gcd = gcd.gcd(n);
        }
        // gcd > 0 because v is nonzero; dividing keeps every sign.
        Ok(ints
            .into_iter()
            .map(|n| BigRational::from_integer(n / &gcd))
            .collect())
    }

    fn ray_key(dir: &[Self]) -> Self::Key {
        // Canonical directions have denominator one.
        dir.iter().map(|x| x.numer().clone()).collect()
    }

    fn solve(cols: &[Vector<Self>], target: &[Self]) -> Solve<Self> {
        solve_rational(cols, target)
    }
}

impl Scalar for f64 {
    type Key = Vec<(i64, i32)>;

    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_nonneg(&self) -> bool {
        *self >= -tolerance()
    }

    fn is_pos(&self) -> bool {
        *self > tolerance()
    }

    fn is_zero_eps(&self) -> bool {
        Signed::abs(self) <= tolerance()
    }

    fn canonical_dir(v: &[Self]) -> Result<Vec<Self>> {
        let norm = Float::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::ZeroRay);
        }
        let tau = tolerance();
        Ok(v.iter()
            .map(|x| {
                let y = x / norm;
                if Signed::abs(&y) <= tau {
                    0.0
                } else {
                    y
                }
            })
            .collect())
    }

    fn ray_key(dir: &[Self]) -> Self::Key {
        dir.iter().map(|x| quantize(*x)).collect()
    }

    fn solve(cols: &[Vector<Self>], target: &[Self]) -> Solve<Self> {
        solve_float(cols, target)
    }
}

/// Rounds a unit-scale coordinate to 12 significant decimal digits,
/// returned as a (mantissa, exponent) pair.
fn quantize(x: f64) -> (i64, i32) {
    if x == 0.0 || Signed::abs(&x) <= tolerance() {
        return (0, 0);
    }
    let mut exp = Float::floor(Float::log10(Signed::abs(&x))) as i32;
    let mut mant = Float::round(x * Float::powi(10.0, 11 - exp)) as i64;
    // Rounding may carry into a 13th digit.
    if mant.abs() >= 1_000_000_000_000 {
        mant /= 10;
        exp += 1;
    }
    (mant, exp)
}

/// Fraction-free elimination: rows are cleared to integers, pivots are
/// processed Bareiss style, and only back-substitution divides.
fn solve_rational(cols: &[Vector<BigRational>], target: &[BigRational]) -> Solve<BigRational> {
    let k = cols.len();
    let d = target.len();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for row in 0..d {
        let mut lcm = BigInt::one();
        for col in cols {
            lcm = lcm.lcm(col[row].denom());
        }
        lcm = lcm.lcm(target[row].denom());
        let mut r: Vec<BigInt> = cols
            .iter()
            .map(|col| col[row].numer() * &lcm / col[row].denom())
            .collect();
        r.push(target[row].numer() * &lcm / target[row].denom());
        m.push(r);
    }

    let mut prev = BigInt::one();
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..d).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in row + 1..d {
            for c in col + 1..=k {
                let num = &m[r][c] * &m[row][col] - &m[r][col] * &m[row][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        pivot_rows.push((row, col));
        row += 1;
    }
    if (row..d).any(|r| !m[r][k].is_zero()) {
        return Solve::Outside;
    }
    if pivot_rows.len() < k {
        return Solve::Dependent;
    }

    let mut x = alloc::vec![BigRational::zero(); k];
    for &(r, c) in pivot_rows.iter().rev() {
        let mut acc = BigRational::from_integer(m[r][k].clone());
        for j in c + 1..k {
            acc -= BigRational::from_integer(m[r][j].clone()) * &x[j];
        }
        x[c] = acc / BigRational::from_integer(m[r][c].clone());
    }
    Solve::Unique(x)
}

/// Partial-pivot elimination with the global tolerance as zero threshold.
fn solve_float(cols: &[Vector<f64>], target: &[f64]) -> Solve<f64> {
    let k = cols.len();
    let d = target.len();
    let tau = tolerance();
    let mut m: Vec<Vec<f64>> = (0..d)
        .map(|row| {
            let mut r: Vec<f64> = cols.iter().map(|col| col[row]).collect();
            r.push(target[row]);
            r
        })
        .collect();

    let mut pivot_rows: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..d)
            .filter(|&r| Signed::abs(&m[r][col]) > tau)
            .max_by(|&a, &b| {
                Signed::abs(&m[a][col])
                    .partial_cmp(&Signed::abs(&m[b][col]))
                    .expect("finite pivots")
            })
        else {
            continue;
        };
        m.swap(row, p);
        let (head, tail) = m.split_at_mut(row + 1);
        let lead = &head[row];
        for r in tail.iter_mut() {
            let factor = r[col] / lead[col];
            r[col] = 0.0;
            for (x, l) in r[col + 1..=k].iter_mut().zip(&lead[col + 1..=k]) {
                *x -= factor * l;
            }
        }
        pivot_rows.push((row, col));
        row += 1;
    }
    if (row..d).any(|r| Signed::abs(&m[r][k]) > tau) {
        return Solve::Outside;
    }
    if pivot_rows.len() < k {
        return Solve::Dependent;
    }

    let mut x = alloc::vec![0.0; k];
    for &(r, c) in pivot_rows.iter().rev() {
        let mut acc = m[r][k];
        for j in c + 1..k {
            acc -= m[r][j] * x[j];
        }
        x[c] = acc / m[r][c];
    }
    Solve::Unique(x)
}

/// A closed ray, stored by the canonical representative of its direction.
/// Opposite directions are distinct rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray<S: Scalar> {
    dir: Vector<S>,
    key: S::Key,
}

impl<S: Scalar> Ray<S> {
    pub fn dir(&self) -> &[S] {
        &self.dir
    }

    pub fn key(&self) -> &S::Key {
        &self.key
    }

    pub fn dim(&self) -> usize {
        self.dir.len()
    }

    /// The opposite ray. Negation preserves canonicality, so this does
    /// not renormalize.
    pub fn negated(&self) -> Ray<S> {
        let dir: Vector<S> = self.dir.iter().map(|x| -x.clone()).collect();
        let key = S::ray_key(&dir);
        Ray { dir, key }
    }
}

/// Builds the canonical ray spanned by `v`.
pub fn canonicalize<S: Scalar>(v: &[S]) -> Result<Ray<S>> {
    let dir = S::canonical_dir(v)?;
    let key = S::ray_key(&dir);
    Ok(Ray { dir, key })
}

/// Simplicial cone spanned by an ordered list of rays.
///
/// Independence of the generators is the caller's contract; membership
/// queries surface `Dependent` solves as axiom violations.
#[derive(Debug, Clone)]
pub struct SimplicialCone<S: Scalar> {
    gens: Vec<Ray<S>>,
}

impl<S: Scalar> SimplicialCone<S> {
    pub fn new(gens: Vec<Ray<S>>) -> Self {
        SimplicialCone { gens }
    }

    pub fn gens(&self) -> &[Ray<S>] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }
}

/// True when the given vectors are linearly independent.
pub fn independent<S: Scalar>(vecs: &[Vector<S>]) -> bool {
    if vecs.is_empty() {
        return true;
    }
    let zero = alloc::vec![S::zero(); vecs[0].len()];
    matches!(S::solve(vecs, &zero), Solve::Unique(_))
}

/// Coefficients of `r` in the cone generators, or `None` when `r` lies
/// outside their span. Membership is decided by the caller from the signs.
pub fn cone_coords<S: Scalar>(cone: &SimplicialCone<S>, r: &Ray<S>) -> Result<Option<Vec<S>>> {
    let Some(first) = cone.gens.first() else {
        return Ok(None);
    };
    if first.dim() != r.dim() {
        return Err(Error::DimMismatch {
            expected: first.dim(),
            got: r.dim(),
        });
    }
    let cols: Vec<Vector<S>> = cone.gens.iter().map(|g| g.dir.clone()).collect();
    match S::solve(&cols, r.dir()) {
        Solve::Unique(c) => Ok(Some(c)),
        Solve::Outside => Ok(None),
        Solve::Dependent => Err(Error::AxiomViolation(
            "cone generators are dependent".into(),
        )),
    }
}

/// True when `r` lies in the closed cone.
pub fn in_cone<S: Scalar>(cone: &SimplicialCone<S>, r: &Ray<S>) -> Result<bool> {
    Ok(match cone_coords(cone, r)? {
        Some(coords) => coords.iter().all(S::is_nonneg),
        None => false,
    })
}

/// Image of `r` in the quotient by the modulus line, expressed in the
/// supplied complement frame and canonicalized to a ray of dimension d-1.
pub fn quotient_ray<S: Scalar>(
    modulus: &Ray<S>,
    r: &Ray<S>,
    frame: &[Vector<S>],
) -> Result<Ray<S>> {
    let d = modulus.dim();
    if r.dim() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: r.dim(),
        });
    }
    if frame.len() + 1 != d {
        return Err(Error::DimMismatch {
            expected: d - 1,
            got: frame.len(),
        });
    }
    let mut cols: Vec<Vector<S>> = Vec::with_capacity(d);
    cols.push(modulus.dir.clone());
    cols.extend(frame.iter().cloned());
    match S::solve(&cols, r.dir()) {
        Solve::Unique(c) => {
            if c[1..].iter().all(S::is_zero_eps) {
                Err(Error::DegenerateProjection)
            } else {
                canonicalize(&c[1..])
            }
        }
        _ => Err(Error::Parse(
            "quotient frame does not complement the modulus".into(),
        )),
    }
}

/// Deterministic complement frame for quotients: the standard basis
/// vectors omitting the coordinate where `dir` is largest in magnitude.
pub fn complement_frame<S: Scalar>(dir: &[S]) -> Vec<Vector<S>> {
    let mut pivot = 0;
    for (i, x) in dir.iter().enumerate() {
        if Signed::abs(x) > Signed::abs(&dir[pivot]) {
            pivot = i;
        }
    }
    (0..dir.len())
        .filter(|&q| q != pivot)
        .map(|q| {
            let mut e = alloc::vec![S::zero(); dir.len()];
            e[q] = S::one();
            e
        })
        .collect()
}

/// Euclidean inner product.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

/// Angle between two directions in radians, computed in f64.
pub fn angle_between<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    let af: Vec<f64> = a.iter().map(Scalar::to_f64).collect();
    let bf: Vec<f64> = b.iter().map(Scalar::to_f64).collect();
    let na = Float::sqrt(af.iter().map(|x| x * x).sum::<f64>());
    let nb = Float::sqrt(bf.iter().map(|x| x * x).sum::<f64>());
    let cos = af.iter().zip(&bf).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
    Float::acos(cos.clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_rational_scales_to_coprime_integers() {
        let r = canonicalize(&[rat(2, 1), rat(4, 1)]).unwrap();
        assert_eq!(r.dir(), &[rat(1, 1), rat(2, 1)]);
        let r = canonicalize(&[rat(-3, 1), rat(0, 1)]).unwrap();
        assert_eq!(r.dir(), &[rat(-1, 1), rat(0, 1)]);
        let r = canonicalize(&[rat(1, 2), rat(-1, 3)]).unwrap();
        assert_eq!(r.dir(), &[rat(3, 1), rat(-2, 1)]);
    }

    #[test]
    fn canonical_float_collides_proportional_vectors() {
        let a = canonicalize(&[0.6f64, 0.8]).unwrap();
        let b = canonicalize(&[3.0f64, 4.0]).unwrap();
        assert_eq!(a.key(), b.key());
        let c = canonicalize(&[-0.6f64, 0.8]).unwrap();
        assert_ne!(a.key(), c.key());
    }

    #[test]
    fn ray_keys_distinguish_signs() {
        let r = canonicalize(&[rat(1, 1), rat(2, 1)]).unwrap();
        assert_ne!(r.key(), r.negated().key());
        assert_eq!(r.negated().negated().key(), r.key());
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert_eq!(
            canonicalize(&[rat(0, 1), rat(0, 1)]).unwrap_err(),
            Error::ZeroRay
        );
        assert_eq!(canonicalize(&[0.0f64, 0.0]).unwrap_err(), Error::ZeroRay);
    }

    #[test]
    fn cone_membership_quadrant() {
        let cone = SimplicialCone::new(alloc::vec![
            canonicalize(&[rat(1, 1), rat(0, 1)]).unwrap(),
            canonicalize(&[rat(0, 1), rat(1, 1)]).unwrap(),
        ]);
        let inside = canonicalize(&[rat(2, 1), rat(3, 1)]).unwrap();
        let outside = canonicalize(&[rat(-1, 1), rat(1, 1)]).unwrap();
        assert_eq!(
            cone_coords(&cone, &inside).unwrap().unwrap(),
            alloc::vec![rat(2, 1), rat(3, 1)]
        );
        assert!(in_cone(&cone, &inside).unwrap());
        assert!(!in_cone(&cone, &outside).unwrap());
    }

    #[test]
    fn cone_coords_outside_span() {
        let cone = SimplicialCone::new(alloc::vec![
            canonicalize(&[rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap(),
            canonicalize(&[rat(1, 1), rat(1, 1), rat(0, 1)]).unwrap(),
        ]);
        let off = canonicalize(&[rat(0, 1), rat(0, 1), rat(1, 1)]).unwrap();
        assert_eq!(cone_coords(&cone, &off).unwrap(), None);
        assert!(!in_cone(&cone, &off).unwrap());
    }

    #[test]
    fn quotient_kills_the_modulus_coordinate() {
        let modulus = canonicalize(&[rat(1, 1), rat(0, 1)]).unwrap();
        let frame = alloc::vec![alloc::vec![rat(0, 1), rat(1, 1)]];
        let a = canonicalize(&[rat(3, 1), rat(2, 1)]).unwrap();
        let b = canonicalize(&[rat(-5, 1), rat(2, 1)]).unwrap();
        let qa = quotient_ray(&modulus, &a, &frame).unwrap();
        let qb = quotient_ray(&modulus, &b, &frame).unwrap();
        assert_eq!(qa.key(), qb.key());
        assert_eq!(qa.dir(), &[rat(1, 1)]);
        assert_eq!(
            quotient_ray(&modulus, &modulus, &frame).unwrap_err(),
            Error::DegenerateProjection
        );
    }

    #[test]
    fn float_solver_tolerates_small_residue() {
        let cols = alloc::vec![alloc::vec![1.0, 0.0], alloc::vec![1.0, 1.0]];
        match f64::solve(&cols, &[3.0, 2.0]) {
            Solve::Unique(x) => {
                assert!((x[0] - 1.0).abs() < 1e-12);
                assert!((x[1] - 2.0).abs() < 1e-12);
            }
            other => panic!("expected unique solution, got {other:?}"),
        }
        assert_eq!(
            f64::solve(&alloc::vec![alloc::vec![1.0, 1.0], alloc::vec![2.0, 2.0]], &[1.0, 1.0]),
            Solve::Dependent
        );
    }

    #[test]
    fn dependent_and_outside_rational() {
        let dep = alloc::vec![
            alloc::vec![rat(1, 1), rat(2, 1)],
            alloc::vec![rat(2, 1), rat(4, 1)],
        ];
        assert_eq!(
            BigRational::solve(&dep, &[rat(1, 1), rat(2, 1)]),
            Solve::Dependent
        );
        let cols = alloc::vec![alloc::vec![rat(1, 1), rat(0, 1), rat(0, 1)]];
        assert_eq!(
            BigRational::solve(&cols, &[rat(0, 1), rat(1, 1), rat(0, 1)]),
            Solve::Outside
        );
    }

    #[test]
    fn complement_frame_skips_the_pivot() {
        let frame = complement_frame(&[rat(1, 1), rat(-7, 1), rat(2, 1)]);
        assert_eq!(frame.len(), 2);
        assert_eq!(frame[0], alloc::vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(frame[1], alloc::vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn angles_are_sane() {
        let quarter = angle_between(&[1.0f64, 0.0], &[0.0, 1.0]);
        assert!((quarter - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
