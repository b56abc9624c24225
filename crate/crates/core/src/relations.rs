//! Seeded batch run of the defining identities, as reported by `relations`.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fock::{ModeIndex, Sector};
use crate::heisenberg::{commutator_check, quadratic_act, QuadraticElement};
use crate::sample;
use crate::scalar::HalfInt;
use crate::vertex::{binom_mode_identity_check, virasoro_bracket_check};

#[derive(Clone, Debug, Serialize)]
pub struct RelationRow {
    pub relation: &'static str,
    pub sector: Sector,
    pub rank: usize,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    pub seed: u64,
    pub bound: i64,
    pub pass: bool,
    pub rows: Vec<RelationRow>,
}

const SECTORS: [Sector; 2] = [Sector::Untwisted, Sector::Twisted];

/// Admissible modes of a sector with `|k| ≤ bound`.
pub fn modes_up_to(sector: Sector, bound: i64) -> Vec<HalfInt> {
    (-2 * bound..=2 * bound).map(HalfInt).filter(|&k| sector.admits(k)).collect()
}

struct Tally {
    checked: usize,
    failed: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failed: 0 }
    }
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.failed += usize::from(!ok);
    }
    fn row(self, relation: &'static str, sector: Sector, rank: usize) -> RelationRow {
        RelationRow { relation, sector, rank, checked: self.checked, failed: self.failed }
    }
}

pub fn run_relations(bound: i64, seed: u64) -> Result<RelationsReport> {
    let mut rng = sample::rng(seed);
    let bound = bound.max(0);
    let mut rows = Vec::new();

    for sector in SECTORS {
        for rank in 1..=2 {
            let lambda = sample::lambda(&mut rng, sector, rank, 1, false);
            let vectors: Vec<_> = (0..3).map(|_| sample::fock_vector(&mut rng, sector, rank, 4, 4)).collect();
            let modes = modes_up_to(sector, bound);
            let mut t = Tally::new();
            for f in &vectors {
                for i in 1..=rank {
                    for j in 1..=rank {
                        for &m in &modes {
                            for &n in &modes {
                                t.record(commutator_check(&lambda, (i, j), (m, n), f)?);
                            }
                        }
                    }
                }
            }
            rows.push(t.row("heisenberg", sector, rank));
        }
    }

    for sector in SECTORS {
        for rank in 1..=2 {
            let lambda = sample::lambda(&mut rng, sector, rank, 1, false);
            let mut t = Tally::new();
            for _ in 0..4 {
                let i = rng.random_range(1..=rank);
                let j = rng.random_range(1..=rank);
                let m = rng.random_range(0..=2u32);
                let n = rng.random_range(0..=2u32);
                // k-th positive mode: k+1 untwisted, k+½ twisted
                let mode = |k: u32| ModeIndex::new(sector, 2 * k + 2 - sector.parity() as u32);
                let q = QuadraticElement::shifted(&lambda, i, j, mode(m)?, mode(n)?)?;
                let f = sample::fock_vector(&mut rng, sector, rank, 5, 4);
                t.record(quadratic_act(&lambda, &q, &f)? == q.apply(&lambda, &f)?);
            }
            rows.push(t.row("quadratic", sector, rank));
        }
    }

    let vir_bound = bound.min(4);
    for sector in SECTORS {
        for rank in 1..=2 {
            let lambda = sample::lambda(&mut rng, sector, rank, 1, false);
            let f = sample::fock_vector(&mut rng, sector, rank, 2, 2);
            let mut t = Tally::new();
            for m in -vir_bound..=vir_bound {
                for n in -vir_bound..=vir_bound {
                    t.record(virasoro_bracket_check(m, n, &f, &lambda)?);
                }
            }
            rows.push(t.row("virasoro", sector, rank));
        }
    }

    let mut t = Tally::new();
    let rank = 2;
    for m in 0..=bound.min(2) {
        let lambda = sample::bounded_lambda(&mut rng, rank, m as usize);
        let u = sample::bounded_vector(&mut rng, rank, m as u32, 3, 3);
        for p in 0..=2 {
            for q in 0..=2 {
                let a = rng.random_range(1..=rank);
                let b = rng.random_range(1..=rank);
                let n = rng.random_range(-2..=2 * m + 2);
                t.record(binom_mode_identity_check((a, b), (p, q), n, &u, &lambda, m)?);
            }
        }
    }
    rows.push(t.row("binomial", Sector::Untwisted, rank));

    let pass = rows.iter().all(|r| r.failed == 0);
    Ok(RelationsReport { seed, bound, pass, rows })
}
