//! Seeded random inputs for the property suites and the `relations` command.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{FockVector, Monomial, Sector, Var};
use crate::heisenberg::LambdaSequence;
use crate::scalar::ExactScalar;
use crate::whittaker::WhittakerType;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small Gaussian rational; real with probability ½.
pub fn scalar<R: Rng>(rng: &mut R) -> ExactScalar {
    let re = ExactScalar::ratio(rng.random_range(-4..=4), rng.random_range(1..=3));
    if rng.random_bool(0.5) {
        re
    } else {
        let im = ExactScalar::ratio(rng.random_range(-3..=3), rng.random_range(1..=2));
        &re + &(&im * &ExactScalar::i())
    }
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R) -> ExactScalar {
    loop {
        let s = scalar(rng);
        if !num_traits::Zero::is_zero(&s) {
            return s;
        }
    }
}

/// A monomial of weight at most `max_weight`.
pub fn monomial<R: Rng>(rng: &mut R, sector: Sector, rank: usize, max_weight: u32) -> Monomial {
    capped_monomial(rng, sector, rank, max_weight, None)
}

fn capped_monomial<R: Rng>(rng: &mut R, sector: Sector, rank: usize, max_weight: u32, max_mode: Option<u32>) -> Monomial {
    let parity = sector.parity() as u32;
    let min = if parity == 1 { 1 } else { 2 };
    let mut remaining = rng.random_range(0..=2 * max_weight);
    let mut m = Monomial::one();
    let cap = max_mode.map_or(u32::MAX, |m| 2 * m);
    while remaining >= min && cap >= min {
        // doubled mode in min..=min(remaining, cap) with the sector's parity
        let slots = (remaining.min(cap) - min) / 2;
        let doubled = min + 2 * rng.random_range(0..=slots);
        let boson = rng.random_range(1..=rank);
        m = m.mul_var(Var::new(boson, doubled));
        remaining -= doubled;
        if rng.random_bool(0.25) {
            break;
        }
    }
    m
}

/// A vector with up to `max_terms` terms, each of weight at most `max_weight`.
pub fn fock_vector<R: Rng>(rng: &mut R, sector: Sector, rank: usize, max_weight: u32, max_terms: usize) -> FockVector {
    let count = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..count).map(|_| (monomial(rng, sector, rank, max_weight), scalar(rng))).collect();
    FockVector::from_terms(sector, rank, terms).expect("generated in range")
}

pub fn nonzero_fock_vector<R: Rng>(rng: &mut R, sector: Sector, rank: usize, max_weight: u32, max_terms: usize) -> FockVector {
    loop {
        let v = fock_vector(rng, sector, rank, max_weight, max_terms);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Untwisted vector using only modes `≤ max_mode`, so `h(k)` kills it for
/// `k > max_mode` whenever `λ_k = 0` there.
pub fn bounded_vector<R: Rng>(rng: &mut R, rank: usize, max_mode: u32, max_weight: u32, max_terms: usize) -> FockVector {
    let count = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..count)
        .map(|_| (capped_monomial(rng, Sector::Untwisted, rank, max_weight, Some(max_mode)), scalar(rng)))
        .collect();
    FockVector::from_terms(Sector::Untwisted, rank, terms).expect("generated in range")
}

/// Arbitrary untwisted `λ` supported on positions `0..=max_mode`.
pub fn bounded_lambda<R: Rng>(rng: &mut R, rank: usize, max_mode: usize) -> LambdaSequence {
    let entries = (0..=max_mode).map(|_| (0..rank).map(|_| scalar(rng)).collect()).collect();
    LambdaSequence::new(Sector::Untwisted, rank, entries).expect("rank matches")
}

/// `λ` with entries at positions `0..=top` and a nonzero top entry;
/// `anisotropic` additionally forces `(λ_top, λ_top) ≠ 0`.
pub fn lambda<R: Rng>(rng: &mut R, sector: Sector, rank: usize, top: usize, anisotropic: bool) -> LambdaSequence {
    loop {
        let entries: Vec<Vec<ExactScalar>> = (0..=top)
            .map(|_| {
                let sparse = rng.random_bool(0.3);
                (0..rank).map(|_| if sparse && rng.random_bool(0.5) { ExactScalar::from_int(0) } else { scalar(rng) }).collect()
            })
            .collect();
        let norm = crate::heisenberg::bilinear(&entries[top], &entries[top]);
        let top_zero = entries[top].iter().all(num_traits::Zero::is_zero);
        if top_zero || (anisotropic && num_traits::Zero::is_zero(&norm)) {
            continue;
        }
        return LambdaSequence::new(sector, rank, entries).expect("rank matches");
    }
}

/// `λ` with some nonzero entry at a positive mode, as the certifier requires.
pub fn proper_lambda<R: Rng>(rng: &mut R, sector: Sector, rank: usize, max_top: usize) -> LambdaSequence {
    let min_top = match sector {
        Sector::Untwisted => 1,
        Sector::Twisted => 0,
    };
    let top = rng.random_range(min_top..=max_top.max(min_top));
    lambda(rng, sector, rank, top, false)
}

fn complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
}

/// Numeric type with a top entry bounded away from zero.
pub fn numeric_type<R: Rng>(rng: &mut R, sector: Sector, r: usize) -> WhittakerType<Complex64> {
    let len = r + sector.epsilon() as usize;
    let mut zeta: Vec<Complex64> = (0..len).map(|_| complex(rng)).collect();
    let last = zeta.last_mut().expect("valid type has entries");
    while last.norm() < 0.25 {
        *last = complex(rng);
    }
    WhittakerType::new(sector, r, zeta).expect("valid by construction")
}

pub fn numeric_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_repeat() {
        let a = fock_vector(&mut rng(7), Sector::Twisted, 2, 6, 5);
        let b = fock_vector(&mut rng(7), Sector::Twisted, 2, 6, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn weights_respect_bound() {
        let mut r = rng(1);
        for _ in 0..200 {
            let m = monomial(&mut r, Sector::Untwisted, 3, 8);
            assert!(m.weight().doubled() <= 16);
        }
        for _ in 0..100 {
            let v = bounded_vector(&mut r, 2, 2, 6, 3);
            assert!(v.terms().all(|(m, _)| m.factors().iter().all(|(x, _)| x.doubled <= 4)));
        }
    }
}
