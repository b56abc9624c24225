//! Sparse graded polynomials in the Fock variables `x[i,n]`.
//!
//! A [`FockVector`] lives in one sector: untwisted vectors use integer modes
//! `n = 1, 2, …`, twisted vectors use half-integer modes `n = 1/2, 3/2, …`.
//! Modes are stored doubled so all index arithmetic stays in integers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Degree, ExactScalar, HalfInt};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Untwisted,
    Twisted,
}

impl Sector {
    /// Parity of doubled modes in this sector.
    pub fn parity(self) -> i64 {
        match self {
            Sector::Untwisted => 0,
            Sector::Twisted => 1,
        }
    }

    /// Whether a (signed) mode belongs to this sector's index set.
    pub fn admits(self, mode: HalfInt) -> bool {
        mode.doubled().rem_euclid(2) == self.parity()
    }

    /// Smallest positive mode: 1 or 1/2.
    pub fn min_mode(self) -> HalfInt {
        match self {
            Sector::Untwisted => HalfInt(2),
            Sector::Twisted => HalfInt(1),
        }
    }

    /// ε in the Whittaker type: 1 untwisted, 0 twisted.
    pub fn epsilon(self) -> i64 {
        match self {
            Sector::Untwisted => 1,
            Sector::Twisted => 0,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Untwisted => "untwisted",
            Sector::Twisted => "twisted",
        })
    }
}

impl FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "untwisted" => Ok(Sector::Untwisted),
            "twisted" => Ok(Sector::Twisted),
            other => Err(Error::Parse(format!("unknown sector `{other}`"))),
        }
    }
}

/// A positive mode `n` in a given sector, stored as `2n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ModeIndex {
    doubled: u32,
    sector: Sector,
}

impl ModeIndex {
    pub fn new(sector: Sector, doubled: u32) -> Result<Self> {
        if doubled == 0 || i64::from(doubled % 2) != sector.parity() {
            return Err(Error::InvalidMode(format!(
                "{} is not a positive {sector} mode",
                HalfInt(doubled.into())
            )));
        }
        Ok(ModeIndex { doubled, sector })
    }

    pub fn untwisted(n: u32) -> Self {
        ModeIndex::new(Sector::Untwisted, 2 * n).expect("positive integer mode")
    }

    /// The twisted mode `k + 1/2`.
    pub fn twisted(k: u32) -> Self {
        ModeIndex::new(Sector::Twisted, 2 * k + 1).expect("half-odd mode")
    }

    pub fn from_half(sector: Sector, mode: HalfInt) -> Result<Self> {
        let d = u32::try_from(mode.doubled())
            .map_err(|_| Error::InvalidMode(format!("{mode} is not positive")))?;
        ModeIndex::new(sector, d)
    }

    pub fn doubled(self) -> u32 {
        self.doubled
    }

    pub fn sector(self) -> Sector {
        self.sector
    }

    pub fn value(self) -> HalfInt {
        HalfInt(self.doubled.into())
    }
}

/// The variable `x[boson, mode]`, with `boson` 1-based and `mode` doubled.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Var {
    pub boson: usize,
    pub doubled: u32,
}

impl Var {
    pub fn new(boson: usize, doubled: u32) -> Self {
        Var { boson, doubled }
    }

    pub fn mode(self) -> HalfInt {
        HalfInt(self.doubled.into())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.boson, self.mode())
    }
}

/// A monomial `∏ x[i,n]^e`. Ordered by weight, then by its sorted variable list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Monomial {
    // field order gives the graded ordering under derive(Ord)
    weight2: u64,
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_factors<I: IntoIterator<Item = (Var, u32)>>(iter: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in iter {
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        let weight2 = map.iter().map(|(v, e)| u64::from(v.doubled) * u64::from(*e)).sum();
        Monomial { weight2, factors: map.into_iter().collect() }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn weight(&self) -> HalfInt {
        HalfInt(self.weight2 as i64)
    }

    /// Total number of variables counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|k| self.factors[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(self.factors.iter().chain(other.factors.iter()).copied())
    }

    pub fn mul_var(&self, v: Var) -> Monomial {
        let mut factors = self.factors.clone();
        match factors.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(k) => factors[k].1 += 1,
            Err(k) => factors.insert(k, (v, 1)),
        }
        Monomial { weight2: self.weight2 + u64::from(v.doubled), factors }
    }

    /// Removes one power of `v`, returning the old exponent; `None` if absent.
    fn div_var(&self, v: Var) -> Option<(u32, Monomial)> {
        let k = self.factors.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let mut factors = self.factors.clone();
        let e = factors[k].1;
        if e == 1 {
            factors.remove(k);
        } else {
            factors[k].1 -= 1;
        }
        Some((e, Monomial { weight2: self.weight2 - u64::from(v.doubled), factors }))
    }

    /// Variables with multiplicity, in order.
    pub fn expanded(&self) -> Vec<Var> {
        self.factors
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let bad = || Error::Parse(format!("invalid monomial `{s}`"));
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (var, exp) = match part.split_once('^') {
                Some((v, e)) => (v, e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let inner = var
                .strip_prefix("x[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?;
            let (i, n) = inner.split_once(',').ok_or_else(bad)?;
            let boson: usize = i.trim().parse().map_err(|_| bad())?;
            let mode: HalfInt = n.parse()?;
            let doubled = u32::try_from(mode.doubled()).map_err(|_| bad())?;
            if boson == 0 || doubled == 0 {
                return Err(bad());
            }
            factors.push((Var::new(boson, doubled), exp));
        }
        Ok(Monomial::from_factors(factors))
    }
}

/// A finite combination of Fock monomials in one sector and rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockVector {
    sector: Sector,
    rank: usize,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl FockVector {
    pub fn zero(sector: Sector, rank: usize) -> Self {
        FockVector { sector, rank, terms: BTreeMap::new() }
    }

    pub fn constant(sector: Sector, rank: usize, c: ExactScalar) -> Self {
        let mut v = FockVector::zero(sector, rank);
        v.add_term(Monomial::one(), c);
        v
    }

    pub fn one(sector: Sector, rank: usize) -> Self {
        FockVector::constant(sector, rank, ExactScalar::one())
    }

    /// Builds `c · ∏ x[i, n]` from `(boson, doubled mode)` pairs, validating each.
    pub fn monomial(sector: Sector, rank: usize, c: ExactScalar, vars: &[(usize, u32)]) -> Result<Self> {
        let mut factors = Vec::with_capacity(vars.len());
        for &(i, d) in vars {
            check_boson(i, rank)?;
            ModeIndex::new(sector, d)?;
            factors.push((Var::new(i, d), 1));
        }
        let mut v = FockVector::zero(sector, rank);
        v.add_term(Monomial::from_factors(factors), c);
        Ok(v)
    }

    /// Builds a vector from monomial/coefficient pairs, validating sector and rank.
    pub fn from_terms<I>(sector: Sector, rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ExactScalar)>,
    {
        let mut v = FockVector::zero(sector, rank);
        for (m, c) in terms {
            for &(var, _) in m.factors() {
                check_boson(var.boson, rank)?;
                ModeIndex::new(sector, var.doubled)?;
            }
            v.add_term(m, c);
        }
        Ok(v)
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coefficient(&Monomial::one())
    }

    /// The scalar `c` if this vector equals `c·1` (including `c = 0`).
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .next_back()
            .map_or(Degree::NegInfinity, |m| Degree::Finite(m.weight()))
    }

    /// Terms of exactly the given weight.
    pub fn homogeneous_part(&self, weight: HalfInt) -> FockVector {
        FockVector {
            sector: self.sector,
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == weight)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Top-weight homogeneous part; zero for the zero vector.
    pub fn leading_part(&self) -> FockVector {
        match self.degree() {
            Degree::Finite(d) => self.homogeneous_part(d),
            Degree::NegInfinity => self.clone(),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn check_compatible(&self, other: &FockVector) -> Result<()> {
        if self.sector != other.sector {
            return Err(Error::SectorMismatch { expected: self.sector, found: other.sector });
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    /// `self += c · other`; caller guarantees compatibility.
    pub(crate) fn add_scaled_assign(&mut self, c: &ExactScalar, other: &FockVector) {
        debug_assert!(self.check_compatible(other).is_ok());
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), c * a);
        }
    }

    pub fn checked_add(&self, other: &FockVector) -> Result<FockVector> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled_assign(&ExactScalar::one(), other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &FockVector) -> Result<FockVector> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled_assign(&-ExactScalar::one(), other);
        Ok(out)
    }

    pub fn checked_mul(&self, other: &FockVector) -> Result<FockVector> {
        self.check_compatible(other)?;
        let mut out = FockVector::zero(self.sector, self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> FockVector {
        if c.is_zero() {
            return FockVector::zero(self.sector, self.rank);
        }
        FockVector {
            sector: self.sector,
            rank: self.rank,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn neg(&self) -> FockVector {
        self.scale(&-ExactScalar::one())
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_terms<F>(&self, mut f: F) -> FockVector
    where
        F: FnMut(&Monomial, &ExactScalar) -> ExactScalar,
    {
        let mut out = FockVector::zero(self.sector, self.rank);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }

    /// Multiplication by `x[var]`; caller has validated the variable.
    pub(crate) fn mul_var_unchecked(&self, v: Var) -> FockVector {
        FockVector {
            sector: self.sector,
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.mul_var(v), c.clone())).collect(),
        }
    }

    /// `n ∂/∂x[var]` with `n` the variable's mode; caller has validated the variable.
    pub(crate) fn weighted_partial_unchecked(&self, v: Var) -> FockVector {
        let n = v.mode().to_scalar();
        let mut out = FockVector::zero(self.sector, self.rank);
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.div_var(v) {
                let k = ExactScalar::from_int(i64::from(e));
                out.add_term(rest, &(c * &k) * &n);
            }
        }
        out
    }

    pub fn validate_var(&self, boson: usize, mode: ModeIndex) -> Result<Var> {
        check_boson(boson, self.rank)?;
        if mode.sector() != self.sector {
            return Err(Error::SectorMismatch { expected: self.sector, found: mode.sector() });
        }
        Ok(Var::new(boson, mode.doubled()))
    }

    /// `∂_{in} f = n ∂f/∂x[i,n]`.
    pub fn weighted_partial(&self, boson: usize, mode: ModeIndex) -> Result<FockVector> {
        let v = self.validate_var(boson, mode)?;
        Ok(self.weighted_partial_unchecked(v))
    }

    /// Multiplication by `x[i,n]`.
    pub fn mul_variable(&self, boson: usize, mode: ModeIndex) -> Result<FockVector> {
        let v = self.validate_var(boson, mode)?;
        Ok(self.mul_var_unchecked(v))
    }
}

pub(crate) fn check_boson(i: usize, rank: usize) -> Result<()> {
    if i == 0 || i > rank {
        return Err(Error::BosonOutOfRange { index: i, rank });
    }
    Ok(())
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: Sector = Sector::Untwisted;

    fn x(i: usize, n: u32) -> FockVector {
        FockVector::monomial(U, 2, ExactScalar::one(), &[(i, 2 * n)]).unwrap()
    }

    #[test]
    fn weighted_partial_examples() {
        let d = x(1, 1).weighted_partial(1, ModeIndex::untwisted(1)).unwrap();
        assert_eq!(d, FockVector::one(U, 2));

        let sq = x(1, 2).checked_mul(&x(1, 2)).unwrap();
        let d = sq.weighted_partial(1, ModeIndex::untwisted(2)).unwrap();
        assert_eq!(d, x(1, 2).scale(&ExactScalar::from_int(4)));

        let d = x(2, 1).weighted_partial(1, ModeIndex::untwisted(1)).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn weighted_partial_errors() {
        assert!(matches!(
            x(1, 1).weighted_partial(1, ModeIndex::twisted(0)),
            Err(Error::SectorMismatch { .. })
        ));
        assert!(matches!(
            x(1, 1).weighted_partial(3, ModeIndex::untwisted(1)),
            Err(Error::BosonOutOfRange { index: 3, rank: 2 })
        ));
        assert!(ModeIndex::new(U, 3).is_err());
        assert!(ModeIndex::new(Sector::Twisted, 0).is_err());
    }

    #[test]
    fn degrees() {
        let f = FockVector::monomial(U, 2, ExactScalar::one(), &[(1, 6), (2, 2)]).unwrap();
        assert_eq!(f.degree(), Degree::Finite(HalfInt::from_int(4)));
        assert_eq!(FockVector::constant(U, 1, 7.into()).degree(), Degree::Finite(HalfInt::ZERO));
        assert_eq!(FockVector::zero(U, 1).degree(), Degree::NegInfinity);
    }

    #[test]
    fn ring_examples() {
        let a = x(1, 1);
        assert!(a.checked_add(&a.neg()).unwrap().is_zero());
        let sq = a.checked_mul(&a).unwrap();
        let m: Monomial = "x[1,1]^2".parse().unwrap();
        assert_eq!(sq.coefficient(&m), ExactScalar::one());
        let s = a.checked_add(&x(2, 1)).unwrap().scale(&2.into());
        assert_eq!(s.len(), 2);
        assert!(s.terms().all(|(_, c)| *c == ExactScalar::from_int(2)));
        let tw = FockVector::one(Sector::Twisted, 2);
        assert!(a.checked_add(&tw).is_err());
        assert!(a.checked_mul(&tw).is_err());
    }

    #[test]
    fn monomial_text_roundtrip() {
        for text in ["1", "x[1,1]", "x[1,3/2]^2*x[2,1/2]", "x[2,3]^4"] {
            let m: Monomial = text.parse().unwrap();
            let printed = m.to_string();
            assert_eq!(printed.parse::<Monomial>().unwrap(), m);
        }
        assert!("y[1,1]".parse::<Monomial>().is_err());
        assert!("x[0,1]".parse::<Monomial>().is_err());
    }

    #[test]
    fn graded_order_picks_heaviest_last() {
        let f = FockVector::from_terms(
            U,
            2,
            ["x[2,1]^3", "x[1,3]", "x[1,1]"].iter().map(|t| (t.parse().unwrap(), ExactScalar::one())),
        )
        .unwrap();
        let top: Vec<String> = f.leading_part().terms().map(|(m, _)| m.to_string()).collect();
        assert_eq!(top, vec!["x[1,3]", "x[2,1]^3"]);
    }
}
