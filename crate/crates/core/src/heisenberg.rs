//! Heisenberg modes acting on the Fock realization of `M(1,λ)` and `M(1,λ)(θ)`.
//!
//! Creation modes `h_i(-n)` multiply by `x[i,n]`; annihilation modes
//! `h_i(n)` act as `∂_{in} + (λ_n, h_i)`. The basis `{h_i}` is orthonormal, so
//! every pairing `(λ_n, h_i)` is the `i`-th coordinate of `λ_n`. The central
//! element acts as the identity throughout.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{check_boson, FockVector, ModeIndex, Sector, Var};
use crate::scalar::{ExactScalar, HalfInt};

/// Whittaker datum: `λ_0, λ_1, …` (untwisted) or `λ_{1/2}, λ_{3/2}, …` (twisted).
///
/// `entries[p]` holds `λ_p` untwisted and `λ_{p+1/2}` twisted. Trailing zero
/// entries are dropped on construction; entries past the list are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaSequence {
    sector: Sector,
    rank: usize,
    entries: Vec<Vec<ExactScalar>>,
}

impl LambdaSequence {
    pub fn new(sector: Sector, rank: usize, mut entries: Vec<Vec<ExactScalar>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Schema("rank must be at least 1".into()));
        }
        for (p, e) in entries.iter().enumerate() {
            if e.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "entry {p} has {} coordinates, rank is {rank}",
                    e.len()
                )));
            }
        }
        while entries.last().is_some_and(|e| e.iter().all(Zero::is_zero)) {
            entries.pop();
        }
        Ok(LambdaSequence { sector, rank, entries })
    }

    pub fn zero(sector: Sector, rank: usize) -> Self {
        LambdaSequence { sector, rank, entries: Vec::new() }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[Vec<ExactScalar>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Mode carried by storage position `p`.
    pub fn mode_at(&self, p: usize) -> HalfInt {
        HalfInt(2 * p as i64 + self.sector.parity())
    }

    fn position(&self, mode: HalfInt) -> Option<usize> {
        if !self.sector.admits(mode) || mode.doubled() < 0 {
            return None;
        }
        usize::try_from(mode.floor()).ok()
    }

    /// `λ_n`, or `None` when it is zero by truncation.
    pub fn entry(&self, mode: HalfInt) -> Option<&[ExactScalar]> {
        self.position(mode).and_then(|p| self.entries.get(p)).map(Vec::as_slice)
    }

    /// `(λ_n, h_i)`.
    pub fn pairing(&self, boson: usize, mode: HalfInt) -> ExactScalar {
        self.entry(mode)
            .map(|e| e[boson - 1].clone())
            .unwrap_or_else(ExactScalar::zero)
    }

    /// The bilinear pairing `(λ_m, λ_n) = Σ_i λ_{m,i} λ_{n,i}`.
    pub fn pair_entries(&self, m: HalfInt, n: HalfInt) -> ExactScalar {
        match (self.entry(m), self.entry(n)) {
            (Some(a), Some(b)) => bilinear(a, b),
            _ => ExactScalar::zero(),
        }
    }

    /// The support bound `r`: top index untwisted (λ_r ≠ 0), or the entry
    /// count twisted (λ_{r−1/2} ≠ 0). `None` for the zero sequence.
    pub fn support_bound(&self) -> Option<usize> {
        match self.sector {
            Sector::Untwisted => self.entries.len().checked_sub(1),
            Sector::Twisted => (!self.entries.is_empty()).then_some(self.entries.len()),
        }
    }

    /// Mode of the top nonzero entry.
    pub fn top_mode(&self) -> Option<HalfInt> {
        self.entries.len().checked_sub(1).map(|p| self.mode_at(p))
    }

    /// Top entry nonzero at a positive index, as the simplicity certifier needs.
    pub fn is_proper(&self) -> bool {
        self.top_mode().is_some_and(|m| m.doubled() > 0)
    }

    /// Positive modes `n` with `λ_n ≠ 0`, ascending.
    pub fn nonzero_positive_modes(&self) -> impl Iterator<Item = HalfInt> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.iter().any(|c| !c.is_zero()))
            .map(|(p, _)| self.mode_at(p))
            .filter(|m| m.doubled() > 0)
    }

    /// Largest mode `k` for which `h(k)` can act nontrivially on a vector of
    /// the given weight; every annihilation mode beyond it kills the vector.
    pub fn annihilation_reach(&self, weight: HalfInt) -> HalfInt {
        let top = self.top_mode().unwrap_or(HalfInt(-1));
        top.max(weight)
    }

    fn check_vector(&self, f: &FockVector) -> Result<()> {
        if f.sector() != self.sector {
            return Err(Error::SectorMismatch { expected: self.sector, found: f.sector() });
        }
        if f.rank() != self.rank {
            return Err(Error::RankMismatch { left: self.rank, right: f.rank() });
        }
        Ok(())
    }
}

pub fn bilinear(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter().zip(b).fold(ExactScalar::zero(), |acc, (x, y)| acc + x * y)
}

/// `h_i(-n) f = x[i,n] f`.
pub fn act_creation(boson: usize, mode: ModeIndex, f: &FockVector) -> Result<FockVector> {
    f.mul_variable(boson, mode)
}

/// `h_i(n) f = ∂_{in} f + (λ_n, h_i) f` for `n ≥ 0`; at `n = 0` only the scalar survives.
pub fn act_annihilation(lambda: &LambdaSequence, boson: usize, mode: HalfInt, f: &FockVector) -> Result<FockVector> {
    lambda.check_vector(f)?;
    check_boson(boson, lambda.rank)?;
    if mode.doubled() < 0 || !lambda.sector.admits(mode) {
        return Err(Error::InvalidMode(format!("{mode} is not an annihilation mode in the {} sector", lambda.sector)));
    }
    Ok(annihilate_unchecked(lambda, boson, mode, f))
}

pub(crate) fn annihilate_unchecked(lambda: &LambdaSequence, boson: usize, mode: HalfInt, f: &FockVector) -> FockVector {
    let shift = lambda.pairing(boson, mode);
    if mode.doubled() == 0 {
        return f.scale(&shift);
    }
    let mut out = f.weighted_partial_unchecked(Var::new(boson, mode.doubled() as u32));
    out.add_scaled_assign(&shift, f);
    out
}

/// Any mode `h_i(m)`: creation for `m < 0`, annihilation for `m ≥ 0`.
pub fn act_mode(lambda: &LambdaSequence, boson: usize, mode: HalfInt, f: &FockVector) -> Result<FockVector> {
    lambda.check_vector(f)?;
    check_boson(boson, lambda.rank)?;
    if !lambda.sector.admits(mode) {
        return Err(Error::InvalidMode(format!("{mode} is not a {} mode", lambda.sector)));
    }
    Ok(act_mode_unchecked(lambda, boson, mode, f))
}

pub(crate) fn act_mode_unchecked(lambda: &LambdaSequence, boson: usize, mode: HalfInt, f: &FockVector) -> FockVector {
    if mode.doubled() < 0 {
        f.mul_var_unchecked(Var::new(boson, (-mode.doubled()) as u32))
    } else {
        annihilate_unchecked(lambda, boson, mode, f)
    }
}

/// `[h_i(m), h_j(n)] f`, computed by two applications each way.
pub fn commutator(
    lambda: &LambdaSequence,
    (i, j): (usize, usize),
    (m, n): (HalfInt, HalfInt),
    f: &FockVector,
) -> Result<FockVector> {
    let a = act_mode(lambda, i, m, &act_mode(lambda, j, n, f)?)?;
    let b = act_mode(lambda, j, n, &act_mode(lambda, i, m, f)?)?;
    a.checked_sub(&b)
}

/// Whether `[h_i(m), h_j(n)] f = m δ_{m+n,0} δ_{ij} f` holds exactly.
pub fn commutator_check(
    lambda: &LambdaSequence,
    (i, j): (usize, usize),
    (m, n): (HalfInt, HalfInt),
    f: &FockVector,
) -> Result<bool> {
    let lhs = commutator(lambda, (i, j), (m, n), f)?;
    Ok(lhs == heisenberg_bracket_value((i, j), (m, n), f))
}

/// Right-hand side of the Heisenberg relation applied to `f`.
pub fn heisenberg_bracket_value((i, j): (usize, usize), (m, n): (HalfInt, HalfInt), f: &FockVector) -> FockVector {
    if i == j && (m + n).doubled() == 0 {
        f.scale(&m.to_scalar())
    } else {
        FockVector::zero(f.sector(), f.rank())
    }
}

/// The `U⁺` element `h_i(m) h_j(n) − shift` with positive annihilation modes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticElement {
    pub i: usize,
    pub j: usize,
    pub m: ModeIndex,
    pub n: ModeIndex,
    pub constant_shift: ExactScalar,
}

impl QuadraticElement {
    /// The element with shift `(λ_m, h_i)(λ_n, h_j)`.
    pub fn shifted(lambda: &LambdaSequence, i: usize, j: usize, m: ModeIndex, n: ModeIndex) -> Result<Self> {
        check_boson(i, lambda.rank)?;
        check_boson(j, lambda.rank)?;
        for mode in [m, n] {
            if mode.sector() != lambda.sector {
                return Err(Error::SectorMismatch { expected: lambda.sector, found: mode.sector() });
            }
        }
        let shift = &lambda.pairing(i, m.value()) * &lambda.pairing(j, n.value());
        Ok(QuadraticElement { i, j, m, n, constant_shift: shift })
    }

    /// Acts as the literal operator `h_i(m)(h_j(n) f) − shift · f`.
    pub fn apply(&self, lambda: &LambdaSequence, f: &FockVector) -> Result<FockVector> {
        let inner = act_mode(lambda, self.j, self.n.value(), f)?;
        let mut out = act_mode(lambda, self.i, self.m.value(), &inner)?;
        out.add_scaled_assign(&-self.constant_shift.clone(), f);
        Ok(out)
    }
}

/// `(λ_m,h_i) ∂_{jn} f + (λ_n,h_j) ∂_{im} f + ∂_{im} ∂_{jn} f`.
///
/// Equals `h_i(m) h_j(n) f − (λ_m,h_i)(λ_n,h_j) f`; the stored shift is not consulted.
pub fn quadratic_act(lambda: &LambdaSequence, q: &QuadraticElement, f: &FockVector) -> Result<FockVector> {
    lambda.check_vector(f)?;
    let vi = f.validate_var(q.i, q.m)?;
    let vj = f.validate_var(q.j, q.n)?;
    let dj = f.weighted_partial_unchecked(vj);
    let mut out = dj.weighted_partial_unchecked(vi);
    out.add_scaled_assign(&lambda.pairing(q.i, q.m.value()), &dj);
    out.add_scaled_assign(&lambda.pairing(q.j, q.n.value()), &f.weighted_partial_unchecked(vi));
    Ok(out)
}

/// `θ`: scales each monomial by `(−1)^k`, `k` its number of variables.
pub fn theta_involution(v: &FockVector) -> FockVector {
    v.map_terms(|m, c| if m.length() % 2 == 0 { c.clone() } else { -c.clone() })
}

/// `J_a = x[a,1]^4 − 2 x[a,3] x[a,1] + (3/2) x[a,2]^2` in the untwisted vacuum space.
pub fn j_generator(a: usize, rank: usize) -> Result<FockVector> {
    check_boson(a, rank)?;
    let u = Sector::Untwisted;
    let mut j = FockVector::monomial(u, rank, ExactScalar::one(), &[(a, 2); 4])?;
    j = j.checked_add(&FockVector::monomial(u, rank, ExactScalar::from_int(-2), &[(a, 6), (a, 2)])?)?;
    j.checked_add(&FockVector::monomial(u, rank, ExactScalar::ratio(3, 2), &[(a, 4), (a, 4)])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Degree;

    const U: Sector = Sector::Untwisted;
    const T: Sector = Sector::Twisted;

    fn lam(sector: Sector, rank: usize, entries: &[&[i64]]) -> LambdaSequence {
        LambdaSequence::new(
            sector,
            rank,
            entries.iter().map(|e| e.iter().map(|&c| ExactScalar::from_int(c)).collect()).collect(),
        )
        .unwrap()
    }

    fn x(sector: Sector, rank: usize, vars: &[(usize, u32)]) -> FockVector {
        FockVector::monomial(sector, rank, ExactScalar::one(), vars).unwrap()
    }

    #[test]
    fn creation_examples() {
        let one = FockVector::one(U, 2);
        assert_eq!(act_creation(1, ModeIndex::untwisted(1), &one).unwrap(), x(U, 2, &[(1, 2)]));
        let f = x(U, 2, &[(1, 2)]);
        assert_eq!(act_creation(2, ModeIndex::untwisted(3), &f).unwrap(), x(U, 2, &[(1, 2), (2, 6)]));
        let one_t = FockVector::one(T, 1);
        assert_eq!(act_creation(1, ModeIndex::twisted(0), &one_t).unwrap(), x(T, 1, &[(1, 1)]));
        assert!(act_creation(3, ModeIndex::untwisted(1), &one).is_err());
    }

    #[test]
    fn annihilation_examples() {
        let one = FockVector::one(U, 1);
        let zero = LambdaSequence::zero(U, 1);
        assert!(act_annihilation(&zero, 1, HalfInt(2), &one).unwrap().is_zero());

        let l = lam(U, 1, &[&[0], &[1]]);
        assert_eq!(act_annihilation(&l, 1, HalfInt(2), &one).unwrap(), one);
        let f = x(U, 1, &[(1, 2)]);
        let expected = one.checked_add(&f).unwrap();
        assert_eq!(act_annihilation(&l, 1, HalfInt(2), &f).unwrap(), expected);
        assert!(act_annihilation(&l, 1, HalfInt(1), &f).is_err());
        assert!(act_annihilation(&l, 1, HalfInt(2), &FockVector::one(T, 1)).is_err());
    }

    #[test]
    fn mode_dispatch_examples() {
        let one = FockVector::one(U, 1);
        let l = lam(U, 1, &[&[3]]);
        assert_eq!(act_mode(&l, 1, HalfInt(-4), &one).unwrap(), x(U, 1, &[(1, 4)]));
        assert_eq!(act_mode(&l, 1, HalfInt(0), &one).unwrap(), one.scale(&3.into()));

        let lt = lam(T, 1, &[&[1]]);
        let one_t = FockVector::one(T, 1);
        assert_eq!(act_mode(&lt, 1, HalfInt(1), &one_t).unwrap(), one_t);
        assert!(matches!(act_mode(&lt, 1, HalfInt(0), &one_t), Err(Error::InvalidMode(_))));
    }

    #[test]
    fn commutator_examples() {
        let l = lam(U, 2, &[&[1, 2], &[3, -1]]);
        let f = x(U, 2, &[(1, 2)]);
        let br = commutator(&l, (1, 1), (HalfInt(2), HalfInt(-2)), &f).unwrap();
        assert_eq!(br, f);
        assert!(commutator_check(&l, (1, 2), (HalfInt(2), HalfInt(-2)), &f).unwrap());
        assert!(commutator(&l, (1, 2), (HalfInt(2), HalfInt(-2)), &f).unwrap().is_zero());

        let lt = lam(T, 1, &[&[2]]);
        let one_t = FockVector::one(T, 1);
        let br = commutator(&lt, (1, 1), (HalfInt(1), HalfInt(-1)), &one_t).unwrap();
        assert_eq!(br, one_t.scale(&ExactScalar::ratio(1, 2)));
    }

    #[test]
    fn quadratic_examples() {
        let c = ExactScalar::from_int(5);
        let l = lam(U, 1, &[&[0], &[5]]);
        let m1 = ModeIndex::untwisted(1);
        let q = QuadraticElement::shifted(&l, 1, 1, m1, m1).unwrap();
        let f = x(U, 1, &[(1, 2)]);
        assert_eq!(quadratic_act(&l, &q, &f).unwrap(), FockVector::constant(U, 1, &c + &c));

        let zero = LambdaSequence::zero(U, 1);
        let q0 = QuadraticElement::shifted(&zero, 1, 1, m1, m1).unwrap();
        let sq = x(U, 1, &[(1, 2), (1, 2)]);
        assert_eq!(quadratic_act(&zero, &q0, &sq).unwrap(), FockVector::constant(U, 1, 2.into()));

        assert!(quadratic_act(&l, &q, &FockVector::one(U, 1)).unwrap().is_zero());
        assert_eq!(q.apply(&l, &f).unwrap(), quadratic_act(&l, &q, &f).unwrap());
    }

    #[test]
    fn theta_and_j() {
        let even = x(U, 1, &[(1, 2), (1, 6)]);
        assert_eq!(theta_involution(&even), even);
        let odd = x(U, 1, &[(1, 4)]);
        assert_eq!(theta_involution(&odd), odd.neg());

        let j = j_generator(1, 1).unwrap();
        assert_eq!(j.to_string(), "(3/2)*x[1,2]^2 + (1)*x[1,1]^4 + (-2)*x[1,1]*x[1,3]");
        assert_eq!(theta_involution(&j), j);
        assert_eq!(j.degree(), Degree::Finite(HalfInt::from_int(4)));
        assert!(j_generator(2, 1).is_err());
    }

    #[test]
    fn whittaker_annihilation_beyond_support() {
        let l = lam(U, 2, &[&[1, 0], &[0, 1], &[2, 2]]);
        let one = FockVector::one(U, 2);
        for n in 3..6 {
            for i in 1..=2 {
                assert!(act_mode(&l, i, HalfInt::from_int(n), &one).unwrap().is_zero());
            }
        }
        let lt = lam(T, 1, &[&[1], &[1]]);
        let one_t = FockVector::one(T, 1);
        assert!(act_mode(&lt, 1, HalfInt(5), &one_t).unwrap().is_zero());
        assert!(!act_mode(&lt, 1, HalfInt(3), &one_t).unwrap().is_zero());
    }

    #[test]
    fn lambda_bookkeeping() {
        let l = lam(U, 1, &[&[0], &[1], &[0]]);
        assert_eq!(l.support_bound(), Some(1));
        assert!(l.is_proper());
        assert!(!lam(U, 1, &[&[4]]).is_proper());
        let lt = lam(T, 2, &[&[1, 0], &[0, 2]]);
        assert_eq!(lt.support_bound(), Some(2));
        assert_eq!(lt.top_mode(), Some(HalfInt(3)));
        assert_eq!(lt.pair_entries(HalfInt(3), HalfInt(3)), 4.into());
        assert!(LambdaSequence::new(U, 2, vec![vec![ExactScalar::one()]]).is_err());
    }
}
