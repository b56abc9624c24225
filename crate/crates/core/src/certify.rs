//! Certificates that a nonzero vector generates the constant `1` under `U⁺`.
//!
//! Each step applies one shifted quadratic element
//! `h_i(m) h_j(n) − (λ_m,h_i)(λ_n,h_j)`, which acts on the Fock realization as
//!
//! `(λ_m,h_i) ∂_{jn} + (λ_n,h_j) ∂_{im} + ∂_{im} ∂_{jn}`
//!
//! and strictly lowers the weighted degree. Iterating reaches a nonzero constant.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{FockVector, ModeIndex, Sector};
use crate::heisenberg::{quadratic_act, LambdaSequence, QuadraticElement};
use crate::scalar::{Degree, ExactScalar, HalfInt};

/// Which branch of the reduction produced a step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CaseTag {
    /// `n > m`
    One,
    /// `n < m`; the `∂_{jn}` term vanishes by minimality of `m`.
    Two,
    /// `n = m`, `(λ_m, h_{i₀}) ≠ 0`
    ThreeA,
    /// `n = m`, `(λ_m, h_{i₀}) = 0`
    ThreeB,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::One => "1",
            CaseTag::Two => "2",
            CaseTag::ThreeA => "3a",
            CaseTag::ThreeB => "3b",
        })
    }
}

impl FromStr for CaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(CaseTag::One),
            "2" => Ok(CaseTag::Two),
            "3a" => Ok(CaseTag::ThreeA),
            "3b" => Ok(CaseTag::ThreeB),
            _ => Err(Error::Parse(format!("unknown case tag `{s}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertificateStep {
    pub q: QuadraticElement,
    pub case: CaseTag,
    pub deg_before: HalfInt,
    /// Always finite: steps never produce zero.
    pub deg_after: HalfInt,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionCertificate {
    pub initial: FockVector,
    pub steps: Vec<CertificateStep>,
    pub terminal: ExactScalar,
    /// Candidate `(i₀, n)` pairs rejected because they produced zero.
    pub retries: usize,
}

/// One reduction together with the bookkeeping that chose it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Reduction {
    pub q: QuadraticElement,
    pub case: CaseTag,
    pub b: FockVector,
    pub retries: usize,
}

fn check_inputs(lambda: &LambdaSequence, a: &FockVector) -> Result<()> {
    if a.sector() != lambda.sector() {
        return Err(Error::SectorMismatch { expected: lambda.sector(), found: a.sector() });
    }
    if a.rank() != lambda.rank() {
        return Err(Error::RankMismatch { left: lambda.rank(), right: a.rank() });
    }
    Ok(())
}

fn mode(sector: Sector, m: HalfInt) -> ModeIndex {
    ModeIndex::from_half(sector, m).expect("positive mode of the right parity")
}

/// Modes `m` with some `∂_{im} a ≠ 0`, ascending, each with the bosons that qualify.
fn partial_support(a: &FockVector) -> Vec<(HalfInt, Vec<usize>)> {
    let mut support: std::collections::BTreeMap<HalfInt, std::collections::BTreeSet<usize>> = Default::default();
    for (mon, _) in a.terms() {
        for (v, _) in mon.factors() {
            support.entry(v.mode()).or_default().insert(v.boson);
        }
    }
    support.into_iter().map(|(m, s)| (m, s.into_iter().collect())).collect()
}

fn first_nonzero(entry: &[ExactScalar], skip: Option<usize>) -> Option<usize> {
    (1..=entry.len()).find(|&j| Some(j) != skip && !entry[j - 1].is_zero())
}

/// The proof's choice of quadratic element for `(i₀, m)` and `n`.
fn choose(lambda: &LambdaSequence, i0: usize, m: HalfInt, n: HalfInt) -> Option<(QuadraticElement, CaseTag)> {
    let sector = lambda.sector();
    let entry_n = lambda.entry(n)?;
    let (j0, case) = if n > m {
        (first_nonzero(entry_n, None)?, CaseTag::One)
    } else if n < m {
        (first_nonzero(entry_n, None)?, CaseTag::Two)
    } else if !lambda.pairing(i0, m).is_zero() {
        (i0, CaseTag::ThreeA)
    } else {
        (first_nonzero(entry_n, Some(i0))?, CaseTag::ThreeB)
    };
    let q = QuadraticElement::shifted(lambda, i0, j0, mode(sector, m), mode(sector, n)).ok()?;
    Some((q, case))
}

/// One reduction `a ↦ b = q·a` with `deg b < deg a` and `b ≠ 0`.
///
/// `m` is the smallest mode with a nonvanishing partial, `i₀` the smallest
/// boson there, `n` the smallest positive mode with `λ_n ≠ 0`. Other
/// `(i₀, n)` pairs at the same `m` are tried only if that choice gives zero.
pub fn reduce_step(lambda: &LambdaSequence, a: &FockVector) -> Result<Reduction> {
    check_inputs(lambda, a)?;
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    if a.as_constant().is_some() {
        return Err(Error::ConstantInput);
    }
    let ns: Vec<HalfInt> = lambda.nonzero_positive_modes().collect();
    if ns.is_empty() {
        return Err(Error::HighestWeight);
    }
    let support = partial_support(a);
    let (m, bosons) = support.first().ok_or(Error::ConstantInput)?;
    let deg = a.degree();
    let mut retries = 0;
    for &i0 in bosons {
        for &n in &ns {
            let Some((q, case)) = choose(lambda, i0, *m, n) else { continue };
            let b = quadratic_act(lambda, &q, a)?;
            if !b.is_zero() && b.degree() < deg {
                return Ok(Reduction { q, case, b, retries });
            }
            retries += 1;
        }
    }
    Err(Error::ReductionStuck)
}

/// Reduces `a` to a nonzero constant, recording every step.
pub fn certify_cyclic(lambda: &LambdaSequence, a: &FockVector) -> Result<ReductionCertificate> {
    check_inputs(lambda, a)?;
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut current = a.clone();
    let mut steps = Vec::new();
    let mut retries = 0;
    while current.as_constant().is_none() {
        let red = reduce_step(lambda, &current)?;
        let deg_before = current.degree().finite().expect("nonzero");
        let deg_after = red.b.degree().finite().expect("reductions are nonzero");
        debug_assert!(deg_after < deg_before);
        retries += red.retries;
        steps.push(CertificateStep { q: red.q, case: red.case, deg_before, deg_after });
        current = red.b;
    }
    let terminal = current.as_constant().expect("loop exit");
    Ok(ReductionCertificate { initial: a.clone(), steps, terminal, retries })
}

/// Replays `cert` from `a` with the literal operators (stored shifts included)
/// and checks every degree annotation and the terminal constant.
pub fn verify_certificate(lambda: &LambdaSequence, a: &FockVector, cert: &ReductionCertificate) -> bool {
    if check_inputs(lambda, a).is_err() || cert.terminal.is_zero() {
        return false;
    }
    let mut current = a.clone();
    for step in &cert.steps {
        if current.degree() != Degree::Finite(step.deg_before) || step.deg_after >= step.deg_before {
            return false;
        }
        current = match step.q.apply(lambda, &current) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if current.degree() != Degree::Finite(step.deg_after) {
            return false;
        }
    }
    current.as_constant().is_some_and(|c| c == cert.terminal)
}

/// The `∂_{jn} a` term that a Case-2 step discards, computed on its own.
pub fn discarded_term(step: &CertificateStep, before: &FockVector) -> Result<FockVector> {
    before.weighted_partial(step.q.j, step.q.n)
}

/// The vectors a certificate passes through, starting with its input.
pub fn trajectory(lambda: &LambdaSequence, cert: &ReductionCertificate) -> Result<Vec<FockVector>> {
    let mut out = vec![cert.initial.clone()];
    for step in &cert.steps {
        let next = step.q.apply(lambda, out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    const U: Sector = Sector::Untwisted;
    const T: Sector = Sector::Twisted;

    fn s(x: &str) -> ExactScalar {
        x.parse().unwrap()
    }

    fn lam(sector: Sector, rank: usize, entries: &[&[&str]]) -> LambdaSequence {
        LambdaSequence::new(sector, rank, entries.iter().map(|e| e.iter().map(|c| s(c)).collect()).collect()).unwrap()
    }

    fn x(sector: Sector, rank: usize, vars: &[(usize, u32)]) -> FockVector {
        FockVector::monomial(sector, rank, ExactScalar::one(), vars).unwrap()
    }

    #[test]
    fn case_3a() {
        let l = lam(U, 1, &[&["0"], &["1"]]);
        let r = reduce_step(&l, &x(U, 1, &[(1, 2)])).unwrap();
        assert_eq!(r.case, CaseTag::ThreeA);
        assert_eq!((r.q.i, r.q.j, r.q.m.doubled(), r.q.n.doubled()), (1, 1, 2, 2));
        assert_eq!(r.b.as_constant(), Some(s("2")));
    }

    #[test]
    fn case_3b() {
        let l = lam(U, 2, &[&["0", "0"], &["0", "1"]]);
        let r = reduce_step(&l, &x(U, 2, &[(1, 2)])).unwrap();
        assert_eq!(r.case, CaseTag::ThreeB);
        assert_eq!((r.q.i, r.q.j), (1, 2));
        assert_eq!(r.b.as_constant(), Some(s("1")));
    }

    #[test]
    fn case_2() {
        let l = lam(U, 1, &[&["0"], &["1"]]);
        let r = reduce_step(&l, &x(U, 1, &[(1, 4)])).unwrap();
        assert_eq!(r.case, CaseTag::Two);
        assert_eq!(r.b.as_constant(), Some(s("2")));
    }

    #[test]
    fn case_1() {
        let l = lam(U, 1, &[&["0"], &["0"], &["3"]]);
        let a = x(U, 1, &[(1, 2), (1, 4)]);
        let r = reduce_step(&l, &a).unwrap();
        assert_eq!(r.case, CaseTag::One);
        assert!(r.b.degree() < a.degree());
    }

    #[test]
    fn constant_and_errors() {
        let l = lam(U, 1, &[&["0"], &["1"]]);
        let c = FockVector::constant(U, 1, s("5"));
        let cert = certify_cyclic(&l, &c).unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(cert.terminal, s("5"));
        assert!(verify_certificate(&l, &c, &cert));
        assert!(matches!(reduce_step(&l, &c), Err(Error::ConstantInput)));
        assert!(matches!(certify_cyclic(&l, &FockVector::zero(U, 1)), Err(Error::ZeroInput)));
        let hw = lam(U, 1, &[&["4"]]);
        assert!(matches!(certify_cyclic(&hw, &x(U, 1, &[(1, 2)])), Err(Error::HighestWeight)));
        let wrong = x(T, 1, &[(1, 1)]);
        assert!(matches!(certify_cyclic(&l, &wrong), Err(Error::SectorMismatch { .. })));
    }

    #[test]
    fn twisted_certificate_replays() {
        let l = lam(T, 2, &[&["0", "1"], &["2", "i"]]);
        let mut a = x(T, 2, &[(1, 1), (2, 3), (1, 1)]);
        a = a.checked_add(&x(T, 2, &[(2, 5)]).scale(&s("1/3"))).unwrap();
        let cert = certify_cyclic(&l, &a).unwrap();
        assert!(verify_certificate(&l, &a, &cert));
        assert_eq!(cert.retries, 0);

        let mut bad = cert.clone();
        bad.steps[0].q.constant_shift = &bad.steps[0].q.constant_shift + &s("1");
        assert!(!verify_certificate(&l, &a, &bad));

        let other = x(T, 2, &[(2, 1), (2, 3), (1, 1)]);
        assert!(!verify_certificate(&l, &other, &cert));
    }

    #[test]
    fn case_two_discards_zero() {
        let l = lam(U, 2, &[&["1", "0"], &["0", "1"], &["1", "1"]]);
        let a = x(U, 2, &[(1, 4), (2, 6), (1, 4)]);
        let cert = certify_cyclic(&l, &a).unwrap();
        let path = trajectory(&l, &cert).unwrap();
        assert!(cert.steps.iter().any(|st| st.case == CaseTag::Two));
        for (st, before) in cert.steps.iter().zip(&path) {
            if st.case == CaseTag::Two {
                assert!(discarded_term(st, before).unwrap().is_zero());
            }
        }
    }
}
