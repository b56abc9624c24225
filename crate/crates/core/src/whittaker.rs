//! Virasoro Whittaker types of `M(1,λ)` / `M(1,λ)(θ)` and their fibers.
//!
//! Both sectors share one indexing: storage positions `p = 0..=R` hold
//! `λ_p` (untwisted) or `λ_{p+1/2}` (twisted), and the type entry for the
//! position sum `s` is `ζ_{s+1}` (untwisted) or `ζ_{s+2}` (twisted):
//!
//! `ζ = ½ Σ_{p+q=s} (λ_p, λ_q)`, `s = R, …, 2R`.
//!
//! Solving for `λ` is triangular: the top equation fixes `λ_R` on a scaled
//! complex sphere, and each lower equation is affine in one unknown entry.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockVector, Sector};
use crate::heisenberg::LambdaSequence;
use crate::scalar::{ExactScalar, HalfInt};
use crate::vertex::{mode_apply, omega, twisted_mode_apply};

/// The arithmetic the fiber solver needs, shared by the exact and numeric paths.
pub trait FieldScalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn half(&self) -> Self;
    fn sqrt(&self) -> Option<Self>;
    /// Zero exactly, or to the numeric tolerance.
    fn negligible(&self) -> bool;
}

impl FieldScalar for ExactScalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn half(&self) -> Self {
        self * &ExactScalar::ratio(1, 2)
    }
    fn sqrt(&self) -> Option<Self> {
        self.sqrt_exact()
    }
    fn negligible(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl FieldScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn half(&self) -> Self {
        self * 0.5
    }
    fn sqrt(&self) -> Option<Self> {
        Some(Complex64::sqrt(*self))
    }
    fn negligible(&self) -> bool {
        self.norm() <= numeric_tolerance()
    }
}

fn dot<S: FieldScalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

fn scaled<S: FieldScalar>(c: &S, v: &[S]) -> Vec<S> {
    v.iter().map(|x| c.mul(x)).collect()
}

/// `(ζ_s)_{s=R..2R}` for entries at positions `0..=R`.
pub fn type_values<S: FieldScalar>(entries: &[Vec<S>]) -> Vec<S> {
    let Some(top) = entries.len().checked_sub(1) else {
        return Vec::new();
    };
    (top..=2 * top)
        .map(|s| {
            let mut acc = S::zero();
            for p in (s - top)..=top {
                acc = acc.add(&dot(&entries[p], &entries[s - p]));
            }
            acc.half()
        })
        .collect()
}

/// Index offset from a position sum `s` to the ζ subscript.
fn zeta_offset(sector: Sector) -> usize {
    match sector {
        Sector::Untwisted => 1,
        Sector::Twisted => 2,
    }
}

/// `ζ = (ζ_{r+1}, …, ζ_{2r+ε})` with `ζ_{2r+ε} ≠ 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct WhittakerType<S = ExactScalar> {
    pub sector: Sector,
    pub r: usize,
    pub zeta: Vec<S>,
}

impl<S: FieldScalar> WhittakerType<S> {
    pub fn new(sector: Sector, r: usize, zeta: Vec<S>) -> Result<Self> {
        if sector == Sector::Twisted && r == 0 {
            return Err(Error::Precondition("twisted Whittaker types need r ≥ 1".into()));
        }
        let expected = r + sector.epsilon() as usize;
        if zeta.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "type with r = {r} in the {sector} sector has {expected} entries, got {}",
                zeta.len()
            )));
        }
        if zeta.last().is_none_or(FieldScalar::is_zero) {
            return Err(Error::ZeroTop);
        }
        Ok(WhittakerType { sector, r, zeta })
    }

    pub fn epsilon(&self) -> usize {
        self.sector.epsilon() as usize
    }

    /// `ζ_i`, zero outside `r+1..=2r+ε`.
    pub fn get(&self, i: usize) -> S {
        if i <= self.r || i > 2 * self.r + self.epsilon() {
            return S::zero();
        }
        self.zeta[i - self.r - 1].clone()
    }

    /// Top storage position `R` of a solution.
    fn top_position(&self) -> usize {
        match self.sector {
            Sector::Untwisted => self.r,
            Sector::Twisted => self.r - 1,
        }
    }
}

/// The type of `λ`, rejecting a zero or isotropic top entry.
pub fn whittaker_type_of(lambda: &LambdaSequence) -> Result<WhittakerType> {
    let Some(r) = lambda.support_bound() else {
        return Err(Error::Precondition("λ = 0 has no Whittaker type".into()));
    };
    let zeta = type_values(lambda.entries());
    if zeta.last().is_none_or(FieldScalar::is_zero) {
        return Err(Error::IsotropicTop);
    }
    WhittakerType::new(lambda.sector(), r, zeta)
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct EigenCheck {
    pub i: usize,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct WhittakerReport {
    pub sector: Sector,
    pub r: usize,
    /// `None` when the top eigenvalue vanishes (isotropic top entry).
    pub zeta: Option<Vec<ExactScalar>>,
    pub checks: Vec<EigenCheck>,
}

impl WhittakerReport {
    pub fn pass(&self) -> bool {
        self.zeta.is_some() && self.checks.iter().all(|c| c.pass)
    }
}

/// `ω_i · 1` in the sector of `lambda`.
pub fn omega_on_vacuum(lambda: &LambdaSequence, i: i64) -> Result<FockVector> {
    let one = FockVector::one(lambda.sector(), lambda.rank());
    let w = omega(lambda.rank());
    match lambda.sector() {
        Sector::Untwisted => mode_apply(&w, i, &one, lambda),
        Sector::Twisted => twisted_mode_apply(&w, HalfInt::from_int(i), &one, lambda),
    }
}

/// Checks `ω_i 1 = ζ_i 1` for `i = r+1 … 2r+ε` and `ω_i 1 = 0` up to `bound`.
pub fn verify_whittaker_vector(lambda: &LambdaSequence, bound: usize) -> Result<WhittakerReport> {
    let Some(r) = lambda.support_bound() else {
        return Err(Error::Precondition("λ = 0 has no Whittaker type".into()));
    };
    let raw = type_values(lambda.entries());
    let valid = raw.last().is_some_and(|z| !FieldScalar::is_zero(z));
    let offset = zeta_offset(lambda.sector());
    let top = lambda.entries().len() - 1;
    let expected_at = |i: usize| -> ExactScalar {
        // i = s + offset with s in top..=2·top
        match i.checked_sub(offset) {
            Some(s) if (top..=2 * top).contains(&s) => raw[s - top].clone(),
            _ => <ExactScalar as Zero>::zero(),
        }
    };
    let mut checks = Vec::new();
    for i in (r + 1)..=bound {
        let observed = omega_on_vacuum(lambda, i as i64)?;
        let expected = expected_at(i);
        let pass = observed.as_constant().is_some_and(|c| c == expected);
        checks.push(EigenCheck {
            i,
            expected: expected.to_string(),
            observed: observed.as_constant().map_or_else(|| observed.to_string(), |c| c.to_string()),
            pass,
        });
    }
    Ok(WhittakerReport { sector: lambda.sector(), r, zeta: valid.then_some(raw), checks })
}

/// `(dim S^{ℓ−1}, affine dimension)` of the fiber over any valid type.
pub fn fiber_dimension(rank: usize, r: usize, sector: Sector) -> (usize, usize) {
    let affine = match sector {
        Sector::Untwisted => r,
        Sector::Twisted => r.saturating_sub(1),
    };
    (rank - 1, (rank - 1) * affine)
}

/// Basis of `{v : (v, top) = 0}` from the standard basis: `e_j − (top_j / (top,top)) top`
/// for every `j` except the first index where `top` is nonzero.
pub fn complement_basis<S: FieldScalar>(top: &[S]) -> Vec<Vec<S>> {
    let norm = dot(top, top);
    let pivot = top.iter().position(|c| !c.is_zero()).unwrap_or(0);
    (0..top.len())
        .filter(|&j| j != pivot)
        .map(|j| {
            let c = top[j].div(&norm);
            (0..top.len())
                .map(|k| {
                    let e = if k == j { S::one() } else { S::zero() };
                    e.sub(&c.mul(&top[k]))
                })
                .collect()
        })
        .collect()
}

/// One point of the fiber over a type.
#[derive(Clone, PartialEq, Debug)]
pub struct FiberPoint<S = ExactScalar> {
    pub sector: Sector,
    pub r: usize,
    /// `z` with `λ_top = √(2ζ_top) · z`; `None` when the root is not representable.
    pub sphere_point: Option<Vec<S>>,
    /// Coordinates of each lower entry in [`complement_basis`], by storage position.
    pub free_params: Vec<Vec<S>>,
    /// `λ` by storage position.
    pub lambda: Vec<Vec<S>>,
}

/// How to pick the top entry `λ_top` of a fiber point.
#[derive(Clone, Debug)]
pub enum TopChoice<S> {
    /// The first standard basis vector of the sphere.
    Default,
    /// A point `z` with `Σ z_j² = 1`.
    Sphere(Vec<S>),
    /// `λ_top` itself, with `(λ_top, λ_top) = 2 ζ_top`; needs no square root.
    Entry(Vec<S>),
}

/// Solves `Φ(λ) = ζ` (or `Ψ` twisted) by back-substitution.
pub fn solve_fiber<S: FieldScalar>(
    zeta: &WhittakerType<S>,
    rank: usize,
    top: TopChoice<S>,
    free_params: Option<&[Vec<S>]>,
) -> Result<FiberPoint<S>> {
    if rank == 0 {
        return Err(Error::Schema("rank must be at least 1".into()));
    }
    let top_pos = zeta.top_position();
    let zeta_top = zeta.zeta.last().cloned().ok_or(Error::ZeroTop)?;
    if zeta_top.is_zero() {
        return Err(Error::ZeroTop);
    }
    let two_zeta = zeta_top.add(&zeta_top);
    let (sphere_point, top_entry) = match top {
        TopChoice::Entry(v) => {
            check_len(&v, rank, "top entry")?;
            if !dot(&v, &v).sub(&two_zeta).negligible() {
                return Err(Error::Precondition("top entry does not satisfy (λ_top, λ_top) = 2ζ_top".into()));
            }
            (None, v)
        }
        choice => {
            let z = match choice {
                TopChoice::Sphere(z) => {
                    check_len(&z, rank, "sphere point")?;
                    z
                }
                _ => (0..rank).map(|k| if k == 0 { S::one() } else { S::zero() }).collect(),
            };
            let root = two_zeta.sqrt().ok_or_else(|| Error::NoExactSquareRoot(format!("{two_zeta:?}")))?;
            (Some(z.clone()), scaled(&root, &z))
        }
    };
    if let Some(z) = &sphere_point {
        if !dot(z, z).sub(&S::one()).negligible() {
            return Err(Error::NotOnSphere);
        }
    }

    let free: Vec<Vec<S>> = match free_params {
        Some(f) => {
            if f.len() != top_pos {
                return Err(Error::DimensionMismatch(format!(
                    "expected {top_pos} free-parameter vectors, got {}",
                    f.len()
                )));
            }
            for v in f {
                check_len(v, rank - 1, "free-parameter vector")?;
            }
            f.to_vec()
        }
        None => vec![vec![S::zero(); rank - 1]; top_pos],
    };

    let basis = complement_basis(&top_entry);
    let norm = dot(&top_entry, &top_entry);
    let mut lambda: Vec<Vec<S>> = vec![Vec::new(); top_pos + 1];
    lambda[top_pos] = top_entry.clone();
    for k in (0..top_pos).rev() {
        let s = k + top_pos;
        let rhs = back_substitution_rhs(&lambda, &zeta.zeta[s - top_pos], k, top_pos);
        let mut entry = scaled(&rhs.div(&norm), &top_entry);
        for (t, b) in free[k].iter().zip(&basis) {
            for (e, bc) in entry.iter_mut().zip(b) {
                *e = e.add(&t.mul(bc));
            }
        }
        lambda[k] = entry;
    }
    Ok(FiberPoint { sector: zeta.sector, r: zeta.r, sphere_point, free_params: free, lambda })
}

/// `ζ_s − ½ Σ_{p+q=s, k<p,q<R} (λ_p, λ_q)`: the required value of `(λ_k, λ_R)`.
fn back_substitution_rhs<S: FieldScalar>(lambda: &[Vec<S>], zeta_s: &S, k: usize, top: usize) -> S {
    let s = k + top;
    let mut inner = S::zero();
    for p in (k + 1)..top {
        let q = s - p;
        if q > k && q < top {
            inner = inner.add(&dot(&lambda[p], &lambda[q]));
        }
    }
    zeta_s.sub(&inner.half())
}

fn check_len<S>(v: &[S], n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("{what} has {} coordinates, expected {n}", v.len())));
    }
    Ok(())
}

/// Default numeric tolerance, overridable through `FOCK_WHITTAKER_TOL`.
pub fn numeric_tolerance() -> f64 {
    std::env::var("FOCK_WHITTAKER_TOL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1e-10)
}

/// `‖Φ(λ) − ζ‖_∞` on a numeric fiber point.
pub fn residual(point: &FiberPoint<Complex64>, zeta: &WhittakerType<Complex64>) -> f64 {
    type_values(&point.lambda)
        .iter()
        .zip(&zeta.zeta)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// One Newton pass on the triangular system: rescale `λ_top` for the quadratic
/// equation, then correct each lower entry along `λ_top` in solve order.
pub fn refine(point: &mut FiberPoint<Complex64>, zeta: &WhittakerType<Complex64>) {
    let top = point.lambda.len() - 1;
    let current = type_values(&point.lambda);
    let norm = dot(&point.lambda[top], &point.lambda[top]);
    // d/dε ½((1+ε)λ, (1+ε)λ) = (λ, λ)
    let eps = (current[top] - zeta.zeta[top]) / norm;
    point.lambda[top] = point.lambda[top].iter().map(|x| x * (1.0 - eps)).collect();
    let top_entry = point.lambda[top].clone();
    let norm = dot(&top_entry, &top_entry);
    for k in (0..top).rev() {
        let s = k + top;
        let value = type_values(&point.lambda)[s - top];
        // ζ_s depends on λ_k through (λ_k, λ_top) with unit weight
        let delta = (value - zeta.zeta[s - top]) / norm;
        for (e, t) in point.lambda[k].iter_mut().zip(&top_entry) {
            *e -= delta * t;
        }
    }
}

/// Numeric solve followed by one refinement pass; returns the point and its residual.
pub fn solve_fiber_numeric(
    zeta: &WhittakerType<Complex64>,
    rank: usize,
    top: TopChoice<Complex64>,
    free_params: Option<&[Vec<Complex64>]>,
) -> Result<(FiberPoint<Complex64>, f64)> {
    let mut point = solve_fiber(zeta, rank, top, free_params)?;
    refine(&mut point, zeta);
    let res = residual(&point, zeta);
    Ok((point, res))
}

/// Inverse of [`solve_fiber`] on its image: the top entry and the free
/// parameters that reproduce `entries`.
pub fn fiber_coordinates<S: FieldScalar>(entries: &[Vec<S>]) -> Result<(Vec<S>, Vec<Vec<S>>)> {
    let top = entries.len().checked_sub(1).ok_or_else(|| Error::Precondition("empty λ".into()))?;
    let top_entry = entries[top].clone();
    let norm = dot(&top_entry, &top_entry);
    if norm.is_zero() {
        return Err(Error::IsotropicTop);
    }
    let pivot = top_entry.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut free = Vec::with_capacity(top);
    for entry in &entries[..top] {
        let alpha = dot(entry, &top_entry).div(&norm);
        let w: Vec<S> = entry.iter().zip(&top_entry).map(|(e, t)| e.sub(&alpha.mul(t))).collect();
        // w = Σ t_j (e_j − c_j top) = Σ t_j e_j − β top with the pivot coordinate fixing β
        let beta = S::zero().sub(&w[pivot]).div(&top_entry[pivot]);
        let params = (0..entry.len())
            .filter(|&j| j != pivot)
            .map(|j| w[j].add(&beta.mul(&top_entry[j])))
            .collect();
        free.push(params);
    }
    Ok((top_entry, free))
}

/// Builds a [`LambdaSequence`] from an exact fiber point.
pub fn fiber_lambda(point: &FiberPoint<ExactScalar>, rank: usize) -> Result<LambdaSequence> {
    LambdaSequence::new(point.sector, rank, point.lambda.clone())
}
