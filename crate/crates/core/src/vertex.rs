//! Vertex-operator modes on the Fock realizations.
//!
//! Elements of the vacuum module `M(1)` are represented as untwisted
//! [`FockVector`]s with `λ = 0`: the monomial `x[a1,n1]…x[ar,nr]` stands for
//! `h_{a1}(-n1)…h_{ar}(-nr)1`. The field of such a monomial is the normal
//! ordered product of the derivative fields `∂^{(n-1)} h_a(z)`, whose mode
//! `j` carries the coefficient `C(-j-1, n-1)`. Applied to a concrete vector
//! only finitely many mode tuples contribute, so every mode is evaluated
//! lazily against its argument.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{check_boson, FockVector, Monomial, Sector, Var};
use crate::heisenberg::{annihilate_unchecked, LambdaSequence};
use crate::scalar::{binomial, Degree, ExactScalar, HalfInt};
use crate::series::BiSeries;

/// `u = a_1(-n_1)…a_r(-n_r)1 ∈ M(1)` as an ordered list of `(a_t, n_t)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FreeMonomialVector {
    pub factors: Vec<(usize, u32)>,
}

impl FreeMonomialVector {
    pub fn vacuum() -> Self {
        FreeMonomialVector::default()
    }

    pub fn new(factors: Vec<(usize, u32)>) -> Result<Self> {
        if let Some(&(a, n)) = factors.iter().find(|&&(a, n)| a == 0 || n == 0) {
            return Err(Error::InvalidMode(format!("factor h[{a}](-{n}) needs a ≥ 1 and n ≥ 1")));
        }
        Ok(FreeMonomialVector { factors })
    }

    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|&(_, n)| n).sum()
    }

    /// The corresponding Fock polynomial in the untwisted vacuum space.
    pub fn to_fock(&self, rank: usize) -> Result<FockVector> {
        let vars: Vec<(usize, u32)> = self.factors.iter().map(|&(a, n)| (a, 2 * n)).collect();
        FockVector::monomial(Sector::Untwisted, rank, ExactScalar::one(), &vars)
    }

    /// Reads a vacuum-space monomial back as a factor list.
    pub fn from_monomial(m: &Monomial) -> Self {
        FreeMonomialVector {
            factors: m.expanded().into_iter().map(|v| (v.boson, v.doubled / 2)).collect(),
        }
    }
}

impl std::fmt::Display for FreeMonomialVector {
    /// Text form `h[a](-n)…|0>`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &(a, n) in &self.factors {
            write!(f, "h[{a}](-{n})")?;
        }
        f.write_str("|0>")
    }
}

/// `ω = ½ Σ_i h_i(-1)² 1`.
pub fn omega(rank: usize) -> FockVector {
    let mut w = FockVector::zero(Sector::Untwisted, rank);
    for i in 1..=rank {
        w.add_term(Monomial::from_factors([(Var::new(i, 2), 2)]), ExactScalar::ratio(1, 2));
    }
    w
}

fn check_vacuum_space(u: &FockVector, rank: usize) -> Result<()> {
    if u.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch { expected: Sector::Untwisted, found: u.sector() });
    }
    if u.rank() != rank {
        return Err(Error::RankMismatch { left: rank, right: u.rank() });
    }
    Ok(())
}

/// A normal-ordered word of modes `(boson, doubled mode)`, sorted.
type Word = Vec<(usize, i64)>;

/// Collects `Σ_{j_1+…+j_r = total} ∏ C(-j_t-1, n_t-1) :h_{a_1}(j_1)…h_{a_r}(j_r):`
/// restricted to words that can act nontrivially on a vector whose
/// annihilation modes all die above `reach`.
fn collect_words(
    factors: &[(usize, u32)],
    total: HalfInt,
    sector: Sector,
    reach: HalfInt,
    scale: &ExactScalar,
    out: &mut BTreeMap<Word, BTreeMap<Word, ExactScalar>>,
) {
    let parity = sector.parity();
    if factors.is_empty() {
        if total.doubled() == 0 {
            add_word(out, Vec::new(), Vec::new(), scale.clone());
        }
        return;
    }
    // each mode needs the right parity; with r slots the total has parity r·parity
    if (total.doubled() - factors.len() as i64 * parity).rem_euclid(2) != 0 {
        return;
    }
    let first_annihilator = if sector == Sector::Untwisted { 0 } else { 1 };
    // below the first annihilation mode nothing is annihilated nontrivially
    let reach = (reach.doubled() >= first_annihilator).then_some(reach.doubled());
    enumerate(factors, total, sector, reach, scale, &mut Vec::new(), out);
}

fn enumerate(
    factors: &[(usize, u32)],
    remaining: HalfInt,
    sector: Sector,
    reach: Option<i64>,
    coef: &ExactScalar,
    chosen: &mut Vec<(usize, i64)>,
    out: &mut BTreeMap<Word, BTreeMap<Word, ExactScalar>>,
) {
    let Some((&(a, n), rest)) = factors.split_first() else {
        if remaining.doubled() == 0 {
            let (mut ann, mut cre): (Word, Word) = chosen.iter().partition(|&&(_, j)| j >= 0);
            ann.sort_unstable();
            cre.sort_unstable();
            add_word(out, ann, cre, coef.clone());
        }
        return;
    };
    let parity = sector.parity();
    let annihilator_start = if sector == Sector::Untwisted { 0 } else { 1 };
    // largest doubled mode any slot may take: the reach, else the top creation mode
    let top = reach.unwrap_or(annihilator_start - 2);
    // remaining slots each contribute at most `top`, so this slot is at least:
    let low = remaining.doubled() - rest.len() as i64 * top;
    let high = if rest.is_empty() { remaining.doubled() } else { top };
    let high = high.min(top);
    // step over modes of the right parity
    let mut j = low + (parity - low).rem_euclid(2);
    while j <= high {
        if j < 0 || (j >= annihilator_start && reach.is_some()) {
            let c = derivative_coefficient(j, n);
            if !c.is_zero() {
                let next = coef * &c;
                chosen.push((a, j));
                enumerate(rest, HalfInt(remaining.doubled() - j), sector, reach, &next, chosen, out);
                chosen.pop();
            }
        }
        j += 2;
    }
}

/// `C(-j-1, n-1)` for the doubled mode `j`: the weight of `h(j)` in `∂^{(n-1)} h(z)`.
fn derivative_coefficient(j_doubled: i64, n: u32) -> ExactScalar {
    let x = BigRational::new((-j_doubled - 2).into(), 2.into());
    ExactScalar::real(binomial(&x, n - 1))
}

fn add_word(out: &mut BTreeMap<Word, BTreeMap<Word, ExactScalar>>, ann: Word, cre: Word, c: ExactScalar) {
    let slot = out.entry(ann).or_default().entry(cre).or_insert_with(ExactScalar::zero);
    *slot += &c;
}

/// Evaluates collected words on `f`: annihilators first, then creators.
fn apply_words(
    words: &BTreeMap<Word, BTreeMap<Word, ExactScalar>>,
    lambda: &LambdaSequence,
    f: &FockVector,
) -> FockVector {
    let mut out = FockVector::zero(f.sector(), f.rank());
    let mut memo: HashMap<Word, FockVector> = HashMap::new();
    for (ann, creators) in words {
        let g = annihilate_word(ann, lambda, f, &mut memo);
        if g.is_zero() {
            continue;
        }
        for (cre, c) in creators {
            if c.is_zero() {
                continue;
            }
            let mono = Monomial::from_factors(cre.iter().map(|&(b, j)| (Var::new(b, (-j) as u32), 1)));
            for (m, a) in g.terms() {
                out.add_term(m.mul(&mono), a * c);
            }
        }
    }
    out
}

fn annihilate_word(
    word: &[(usize, i64)],
    lambda: &LambdaSequence,
    f: &FockVector,
    memo: &mut HashMap<Word, FockVector>,
) -> FockVector {
    let Some((&(b, j), prefix)) = word.split_last() else {
        return f.clone();
    };
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let inner = annihilate_word(prefix, lambda, f, memo);
    let v = annihilate_unchecked(lambda, b, HalfInt(j), &inner);
    memo.insert(word.to_vec(), v.clone());
    v
}

fn reach_for(lambda: &LambdaSequence, f: &FockVector) -> HalfInt {
    let weight = f.degree().finite().unwrap_or(HalfInt::ZERO);
    lambda.annihilation_reach(weight)
}

fn check_pair(lambda: &LambdaSequence, f: &FockVector) -> Result<()> {
    if f.sector() != lambda.sector() {
        return Err(Error::SectorMismatch { expected: lambda.sector(), found: f.sector() });
    }
    if f.rank() != lambda.rank() {
        return Err(Error::RankMismatch { left: lambda.rank(), right: f.rank() });
    }
    Ok(())
}

/// `Y_0(u, z)` mode `k` on `f` in the sector of `lambda`: the coefficient of `z^{-k-1}`.
fn y0_mode(u: &FockVector, k: HalfInt, f: &FockVector, lambda: &LambdaSequence) -> FockVector {
    if f.is_zero() {
        return f.clone();
    }
    let reach = reach_for(lambda, f);
    let mut words = BTreeMap::new();
    for (m, c) in u.terms() {
        let fm = FreeMonomialVector::from_monomial(m);
        // Σ (j_t + n_t) = k + 1
        let total = k + HalfInt::from_int(1) - HalfInt::from_int(fm.weight().into());
        collect_words(&fm.factors, total, lambda.sector(), reach, c, &mut words);
    }
    apply_words(&words, lambda, f)
}

/// `u_k f` for `u ∈ M(1)` acting on `B_λ` (untwisted).
pub fn mode_apply(u: &FockVector, k: i64, f: &FockVector, lambda: &LambdaSequence) -> Result<FockVector> {
    if lambda.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch { expected: Sector::Untwisted, found: lambda.sector() });
    }
    check_pair(lambda, f)?;
    check_vacuum_space(u, lambda.rank())?;
    Ok(y0_mode(u, HalfInt::from_int(k), f, lambda))
}

/// `L_n f = ω_{n+1} f` in the untwisted sector.
pub fn virasoro_mode(n: i64, f: &FockVector, lambda: &LambdaSequence) -> Result<FockVector> {
    mode_apply(&omega(lambda.rank()), n + 1, f, lambda)
}

/// Exact rational coefficients of `-log(((1+z)^{1/2} + (1+w)^{1/2}) / 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmnTable {
    order: usize,
    values: Vec<Vec<BigRational>>,
}

impl CmnTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, m: usize, n: usize) -> &BigRational {
        &self.values[m][n]
    }

    pub fn values(&self) -> &[Vec<BigRational>] {
        &self.values
    }

    /// The leading `(order+1)²` block.
    pub fn truncate(&self, order: usize) -> CmnTable {
        assert!(order <= self.order);
        CmnTable {
            order,
            values: self.values[..=order].iter().map(|row| row[..=order].to_vec()).collect(),
        }
    }
}

pub fn cmn_table(order: usize) -> CmnTable {
    let half = BigRational::new(1.into(), 2.into());
    let sz = BiSeries::binomial_power(order, &half, false);
    let sw = BiSeries::binomial_power(order, &half, true);
    let mean = (&sz + &sw).scale(&half);
    let neg_log = mean.log().scale(&-BigRational::one());
    CmnTable {
        order,
        values: (0..=order).map(|m| (0..=order).map(|n| neg_log.coeff(m, n).clone()).collect()).collect(),
    }
}

const SHARED_CMN_ORDER: usize = 16;

fn table_for(order: usize) -> std::borrow::Cow<'static, CmnTable> {
    static SHARED: OnceLock<CmnTable> = OnceLock::new();
    if order <= SHARED_CMN_ORDER {
        std::borrow::Cow::Borrowed(SHARED.get_or_init(|| cmn_table(SHARED_CMN_ORDER)))
    } else {
        std::borrow::Cow::Owned(cmn_table(order))
    }
}

/// `Σ_p z^{-p} v_p` with vacuum-space coefficients, keyed by `p`.
pub type LaurentVector = BTreeMap<u32, FockVector>;

/// `e^{Δ_z} u` with `Δ_z = Σ_i Σ_{m,n} c_{mn} h_i(m) h_i(n) z^{-m-n}` on `M(1)`.
///
/// `h_i(0)` kills the vacuum module, so only `m, n ≥ 1` contribute and each
/// application drops the weight by at least 2; the series terminates. With
/// `order = None` the table is taken to `weight(u)`, which is exact.
pub fn delta_z_apply(u: &FockVector, order: Option<usize>) -> Result<LaurentVector> {
    if u.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch { expected: Sector::Untwisted, found: u.sector() });
    }
    let weight = u.degree().finite().map_or(0, |d| d.floor().max(0) as usize);
    let order = order.unwrap_or(weight);
    let table = table_for(order);
    let rank = u.rank();

    let mut total = LaurentVector::new();
    let mut term = LaurentVector::new();
    if !u.is_zero() {
        term.insert(0, u.clone());
    }
    let mut k = 0u32;
    while !term.is_empty() {
        for (p, v) in &term {
            let slot = total.entry(*p).or_insert_with(|| FockVector::zero(Sector::Untwisted, rank));
            slot.add_scaled_assign(&ExactScalar::one(), v);
        }
        k += 1;
        let inv_k = ExactScalar::ratio(1, k.into());
        let mut next = LaurentVector::new();
        for (p, v) in &term {
            let w = v.degree().finite().map_or(0, |d| d.floor().max(0) as usize);
            for i in 1..=rank {
                for m in 1..=order.min(w) {
                    let dm = v.weighted_partial_unchecked(Var::new(i, 2 * m as u32));
                    if dm.is_zero() {
                        continue;
                    }
                    for n in 1..=order.min(w - m) {
                        let c = table.get(m, n);
                        if c.is_zero() {
                            continue;
                        }
                        let dmn = dm.weighted_partial_unchecked(Var::new(i, 2 * n as u32));
                        if dmn.is_zero() {
                            continue;
                        }
                        let slot = next
                            .entry(p + (m + n) as u32)
                            .or_insert_with(|| FockVector::zero(Sector::Untwisted, rank));
                        slot.add_scaled_assign(&(&ExactScalar::real(c.clone()) * &inv_k), &dmn);
                    }
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        term = next;
    }
    total.retain(|_, v| !v.is_zero());
    Ok(total)
}

/// `u_k f` in the twisted module: coefficient of `z^{-k-1}` in `Y_0(e^{Δ_z} u, z) f`.
///
/// `k` is a half-integer; θ-even `u` only has integer modes.
pub fn twisted_mode_apply(u: &FockVector, k: HalfInt, f: &FockVector, lambda: &LambdaSequence) -> Result<FockVector> {
    if lambda.sector() != Sector::Twisted {
        return Err(Error::SectorMismatch { expected: Sector::Twisted, found: lambda.sector() });
    }
    check_pair(lambda, f)?;
    check_vacuum_space(u, lambda.rank())?;
    let corrected = delta_z_apply(u, None)?;
    let mut out = FockVector::zero(Sector::Twisted, lambda.rank());
    for (p, v) in &corrected {
        let shifted = k - HalfInt::from_int((*p).into());
        out.add_scaled_assign(&ExactScalar::one(), &y0_mode(v, shifted, f, lambda));
    }
    Ok(out)
}

/// Twisted `L_n f = ω_{n+1} f`, including the `z^{-2}` constant from `Δ_z`.
pub fn twisted_virasoro_mode(n: i64, f: &FockVector, lambda: &LambdaSequence) -> Result<FockVector> {
    twisted_mode_apply(&omega(lambda.rank()), HalfInt::from_int(n + 1), f, lambda)
}

/// `L_n f` in whichever sector `lambda` lives.
pub fn sector_virasoro_mode(n: i64, f: &FockVector, lambda: &LambdaSequence) -> Result<FockVector> {
    match lambda.sector() {
        Sector::Untwisted => virasoro_mode(n, f, lambda),
        Sector::Twisted => twisted_virasoro_mode(n, f, lambda),
    }
}

/// Right-hand side `(m−n) L_{m+n} f + (m³−m)/12 δ_{m+n,0} c f` with `c = ℓ`.
pub fn virasoro_bracket_rhs(m: i64, n: i64, f: &FockVector, lambda: &LambdaSequence) -> Result<FockVector> {
    let mut rhs = sector_virasoro_mode(m + n, f, lambda)?.scale(&ExactScalar::from_int(m - n));
    if m + n == 0 {
        let central = ExactScalar::ratio((m * m * m - m) * lambda.rank() as i64, 12);
        rhs.add_scaled_assign(&central, f);
    }
    Ok(rhs)
}

/// `[L_m, L_n] f` by direct double application.
pub fn virasoro_bracket_lhs(m: i64, n: i64, f: &FockVector, lambda: &LambdaSequence) -> Result<FockVector> {
    let mn = sector_virasoro_mode(m, &sector_virasoro_mode(n, f, lambda)?, lambda)?;
    let nm = sector_virasoro_mode(n, &sector_virasoro_mode(m, f, lambda)?, lambda)?;
    mn.checked_sub(&nm)
}

/// Whether the Virasoro relation with central charge `ℓ` holds exactly on `f`.
pub fn virasoro_bracket_check(m: i64, n: i64, f: &FockVector, lambda: &LambdaSequence) -> Result<bool> {
    Ok(virasoro_bracket_lhs(m, n, f, lambda)? == virasoro_bracket_rhs(m, n, f, lambda)?)
}

/// Checks `h_c(k) u = 0` for every boson `c` and integer `k > m`.
pub fn check_annihilation_bound(u: &FockVector, lambda: &LambdaSequence, m: i64) -> Result<()> {
    check_pair(lambda, u)?;
    if m < 0 {
        return Err(Error::InvalidBound { m, i: 1, k: 0 });
    }
    let reach = reach_for(lambda, u).floor();
    for k in (m + 1)..=reach {
        for c in 1..=lambda.rank() {
            if !annihilate_unchecked(lambda, c, HalfInt::from_int(k), u).is_zero() {
                return Err(Error::InvalidBound { m, i: c, k });
            }
        }
    }
    Ok(())
}

/// Left side: `(h_a(-p-1) h_b(-q-1) 1)_{n+1} u`, through the general mode engine.
pub fn binom_identity_lhs(
    (a, b): (usize, usize),
    (p, q): (u32, u32),
    n: i64,
    u: &FockVector,
    lambda: &LambdaSequence,
) -> Result<FockVector> {
    let gen = FockVector::monomial(
        Sector::Untwisted,
        lambda.rank(),
        ExactScalar::one(),
        &[(a, 2 * (p + 1)), (b, 2 * (q + 1))],
    )?;
    mode_apply(&gen, n + 1, u, lambda)
}

/// Right side: `Σ_{i+j = 2m−n+p+q} C(i−m−1, p) C(j−m−1, q) :h_a(m−i) h_b(m−j): u`
/// over `i, j ≥ 0`. Requires `h(k) u = 0` for `k > m`.
pub fn binom_identity_rhs(
    (a, b): (usize, usize),
    (p, q): (u32, u32),
    n: i64,
    u: &FockVector,
    lambda: &LambdaSequence,
    m: i64,
) -> Result<FockVector> {
    if lambda.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch { expected: Sector::Untwisted, found: lambda.sector() });
    }
    check_boson(a, lambda.rank())?;
    check_boson(b, lambda.rank())?;
    check_annihilation_bound(u, lambda, m)?;
    let span = 2 * m - n + i64::from(p) + i64::from(q);
    let mut out = FockVector::zero(Sector::Untwisted, lambda.rank());
    let int = |v: i64| BigRational::from_integer(v.into());
    for i in 0..=span.max(-1) {
        let j = span - i;
        let c = binomial(&int(i - m - 1), p) * binomial(&int(j - m - 1), q);
        if c.is_zero() {
            continue;
        }
        let term = normal_ordered_pair(lambda, (a, m - i), (b, m - j), u);
        out.add_scaled_assign(&ExactScalar::real(c), &term);
    }
    Ok(out)
}

/// `:h_a(s) h_b(t): u` with annihilators applied first.
fn normal_ordered_pair(lambda: &LambdaSequence, (a, s): (usize, i64), (b, t): (usize, i64), u: &FockVector) -> FockVector {
    let act = |boson: usize, mode: i64, v: &FockVector| {
        if mode < 0 {
            v.mul_var_unchecked(Var::new(boson, (-2 * mode) as u32))
        } else {
            annihilate_unchecked(lambda, boson, HalfInt::from_int(mode), v)
        }
    };
    // creation operators to the left: apply the annihilating one (if any) first
    if s >= 0 {
        act(b, t, &act(a, s, u))
    } else {
        act(a, s, &act(b, t, u))
    }
}

/// Whether both sides of the binomial mode identity agree exactly.
pub fn binom_mode_identity_check(
    (a, b): (usize, usize),
    (p, q): (u32, u32),
    n: i64,
    u: &FockVector,
    lambda: &LambdaSequence,
    m: i64,
) -> Result<bool> {
    let rhs = binom_identity_rhs((a, b), (p, q), n, u, lambda, m)?;
    let lhs = binom_identity_lhs((a, b), (p, q), n, u, lambda)?;
    Ok(lhs == rhs)
}

/// Coefficients expressing the family `(h_a(-p-1) h_b(-q-1) 1)_{N+p+q+1}`,
/// `p = 0, …, s-1`, in the normal-ordered products `:h_a(m-i) h_b(m-j):` with
/// `i + j = 2m − N`, `i = 0, …, s-1`, where `s = 2m − N + 1`. Row `p`, column `i`.
pub fn binom_coefficient_matrix(m: i64, mode_sum: i64, q: u32) -> Vec<Vec<BigRational>> {
    let s = 2 * m - mode_sum + 1;
    if s <= 0 {
        return Vec::new();
    }
    let int = |v: i64| BigRational::from_integer(v.into());
    (0..s)
        .map(|p| {
            (0..s)
                .map(|i| {
                    let j = s - 1 - i;
                    binomial(&int(i - m - 1), p as u32) * binomial(&int(j - m - 1), q)
                })
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-valued Gaussian elimination.
pub fn determinant(matrix: &[Vec<BigRational>]) -> BigRational {
    let n = matrix.len();
    let mut a: Vec<Vec<BigRational>> = matrix.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Grading of a mode on the vacuum module: `deg(u_k f) = wt u + deg f − k − 1`.
pub fn expected_mode_degree(u: &FockVector, k: i64, f: &FockVector) -> Degree {
    match (u.degree(), f.degree()) {
        (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b - HalfInt::from_int(k + 1)),
        _ => Degree::NegInfinity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::act_mode;

    const U: Sector = Sector::Untwisted;
    const T: Sector = Sector::Twisted;

    fn s(x: &str) -> ExactScalar {
        x.parse().unwrap()
    }

    fn poly(sector: Sector, rank: usize, terms: &[(&str, &str)]) -> FockVector {
        FockVector::from_terms(sector, rank, terms.iter().map(|(m, c)| (m.parse().unwrap(), s(c)))).unwrap()
    }

    fn lam(sector: Sector, rank: usize, entries: &[&[&str]]) -> LambdaSequence {
        LambdaSequence::new(sector, rank, entries.iter().map(|e| e.iter().map(|c| s(c)).collect()).collect()).unwrap()
    }

    #[test]
    fn vacuum_field_is_identity() {
        let l = lam(U, 2, &[&["1", "0"], &["2", "1/2"]]);
        let one = FockVector::one(U, 2);
        let f = poly(U, 2, &[("x[1,1]*x[2,2]", "3"), ("x[1,1]", "1+1i")]);
        assert_eq!(mode_apply(&one, -1, &f, &l).unwrap(), f);
        for k in [-3, -2, 0, 1, 2] {
            assert!(mode_apply(&one, k, &f, &l).unwrap().is_zero());
        }
    }

    #[test]
    fn creation_property_on_vacuum() {
        let zero = LambdaSequence::zero(U, 2);
        let one = FockVector::one(U, 2);
        let u = poly(U, 2, &[("x[1,2]*x[2,1]^2", "5"), ("x[1,3]", "-1/2")]);
        assert_eq!(mode_apply(&u, -1, &one, &zero).unwrap(), u);
    }

    #[test]
    fn single_free_field_modes() {
        let l = lam(U, 2, &[&["1", "2"], &["-1", "3"]]);
        let u = poly(U, 2, &[("x[1,1]", "1")]);
        let f = poly(U, 2, &[("x[1,1]^2", "1"), ("x[2,2]", "2")]);
        for k in -3..=3 {
            assert_eq!(mode_apply(&u, k, &f, &l).unwrap(), act_mode(&l, 1, HalfInt::from_int(k), &f).unwrap());
        }
    }

    #[test]
    fn l0_is_degree_on_vacuum_module() {
        let zero = LambdaSequence::zero(U, 1);
        let f = poly(U, 1, &[("x[1,2]", "1")]);
        assert_eq!(virasoro_mode(0, &f, &zero).unwrap(), f.scale(&2.into()));
    }

    #[test]
    fn top_omega_modes_on_whittaker_vector() {
        // r = 1: ω_2 1 = (λ_0, λ_1), ω_3 1 = ½ (λ_1, λ_1)
        let l = lam(U, 2, &[&["1", "2"], &["3", "1"]]);
        let one = FockVector::one(U, 2);
        let w = omega(2);
        assert_eq!(mode_apply(&w, 2, &one, &l).unwrap(), one.scale(&5.into()));
        assert_eq!(mode_apply(&w, 3, &one, &l).unwrap(), one.scale(&5.into()));
        assert!(mode_apply(&w, 4, &one, &l).unwrap().is_zero());
    }

    #[test]
    fn bracket_examples() {
        let zero = LambdaSequence::zero(U, 1);
        let f = poly(U, 1, &[("x[1,1]", "1")]);
        assert_eq!(virasoro_bracket_lhs(1, -1, &f, &zero).unwrap(), f.scale(&2.into()));
        let one = FockVector::one(U, 2);
        let zero2 = LambdaSequence::zero(U, 2);
        assert_eq!(virasoro_bracket_lhs(2, -2, &one, &zero2).unwrap(), one);
        assert!(virasoro_bracket_check(3, 5, &f, &zero).unwrap());
    }

    #[test]
    fn cmn_low_order_values() {
        let t = cmn_table(3);
        assert!(t.get(0, 0).is_zero());
        assert_eq!(*t.get(1, 0), BigRational::new((-1).into(), 4.into()));
        assert_eq!(*t.get(1, 1), BigRational::new(1.into(), 16.into()));
        for m in 0..=3 {
            for n in 0..=3 {
                assert_eq!(t.get(m, n), t.get(n, m));
            }
        }
        assert_eq!(cmn_table(5).truncate(3), t);
    }

    #[test]
    fn delta_z_examples() {
        let u = poly(U, 1, &[("x[1,1]", "1")]);
        let e = delta_z_apply(&u, None).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[&0], u);

        for rank in 1..=3 {
            let w = omega(rank);
            let e = delta_z_apply(&w, None).unwrap();
            assert_eq!(e[&0], w);
            assert_eq!(e[&2], FockVector::constant(U, rank, ExactScalar::ratio(rank as i64, 16)));
            assert_eq!(e.len(), 2);
        }

        let one = FockVector::one(U, 2);
        let e = delta_z_apply(&one, None).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[&0], one);
    }

    #[test]
    fn twisted_l0_constant() {
        let zero = LambdaSequence::zero(T, 1);
        let one = FockVector::one(T, 1);
        let l0 = twisted_virasoro_mode(0, &one, &zero).unwrap();
        assert_eq!(l0, one.scale(&ExactScalar::ratio(1, 16)));
        let zero3 = LambdaSequence::zero(T, 3);
        let one3 = FockVector::one(T, 3);
        let l0 = twisted_virasoro_mode(0, &one3, &zero3).unwrap();
        assert_eq!(l0, one3.scale(&ExactScalar::ratio(3, 16)));
    }

    #[test]
    fn twisted_whittaker_eigenvalues() {
        // r = 2: λ_{1/2}, λ_{3/2}; ω_3 1 = (λ_{1/2}, λ_{3/2}), ω_4 1 = ½ (λ_{3/2}, λ_{3/2})
        let l = lam(T, 2, &[&["1", "1"], &["2", "-1"]]);
        let one = FockVector::one(T, 2);
        let w = omega(2);
        assert_eq!(twisted_mode_apply(&w, HalfInt::from_int(3), &one, &l).unwrap(), one.scale(&1.into()));
        assert_eq!(
            twisted_mode_apply(&w, HalfInt::from_int(4), &one, &l).unwrap(),
            one.scale(&ExactScalar::ratio(5, 2))
        );
        assert!(twisted_mode_apply(&w, HalfInt::from_int(5), &one, &l).unwrap().is_zero());
    }

    #[test]
    fn wrong_sector_is_rejected() {
        let lt = LambdaSequence::zero(T, 1);
        let lu = LambdaSequence::zero(U, 1);
        assert!(mode_apply(&omega(1), 0, &FockVector::one(T, 1), &lt).is_err());
        assert!(twisted_mode_apply(&omega(1), HalfInt(0), &FockVector::one(U, 1), &lu).is_err());
    }

    #[test]
    fn binom_identity_small_cases() {
        let l = lam(U, 2, &[&["1", "-1"], &["2", "1"]]);
        let u = poly(U, 2, &[("x[1,1]", "2"), ("1", "1")]);
        for (p, q) in [(0, 0), (1, 0), (0, 2), (2, 1)] {
            for n in -3..=4 {
                assert!(binom_mode_identity_check((1, 2), (p, q), n, &u, &l, 1).unwrap(), "p={p} q={q} n={n}");
            }
        }
        let zero = LambdaSequence::zero(U, 1);
        let one = FockVector::one(U, 1);
        for n in 3..6 {
            assert!(binom_identity_lhs((1, 1), (1, 1), n, &one, &zero).unwrap().is_zero());
            assert!(binom_mode_identity_check((1, 1), (1, 1), n, &one, &zero, 0).unwrap());
        }
        // the bound must really annihilate u
        assert!(matches!(
            binom_mode_identity_check((1, 2), (0, 0), 0, &u, &l, 0),
            Err(Error::InvalidBound { .. })
        ));
    }

    #[test]
    fn coefficient_matrices_are_invertible() {
        for m in 0..=3 {
            for size in 1..=6 {
                let mode_sum = 2 * m + 1 - size;
                let mat = binom_coefficient_matrix(m, mode_sum, 0);
                assert_eq!(mat.len() as i64, size);
                assert!(!determinant(&mat).is_zero());
            }
        }
    }

    #[test]
    fn determinant_basics() {
        let q = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(determinant(&[vec![q(2), q(1)], vec![q(4), q(3)]]), q(2));
        assert_eq!(determinant(&[vec![q(0), q(1)], vec![q(1), q(0)]]), q(-1));
        assert!(determinant(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_zero());
    }

    #[test]
    fn free_monomial_text() {
        let u = FreeMonomialVector::new(vec![(1, 1), (2, 3)]).unwrap();
        assert_eq!(u.to_string(), "h[1](-1)h[2](-3)|0>");
        assert_eq!(u.weight(), 4);
        assert!(FreeMonomialVector::new(vec![(1, 0)]).is_err());
        let f = u.to_fock(2).unwrap();
        let back = FreeMonomialVector::from_monomial(f.terms().next().unwrap().0);
        assert_eq!(back, u);
    }
}
