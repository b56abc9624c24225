//! Algebraic invariants over seeded random inputs.

use fock_whittaker::certify::{certify_cyclic, verify_certificate};
use fock_whittaker::heisenberg::{commutator_check, quadratic_act, theta_involution};
use fock_whittaker::sample;
use fock_whittaker::vertex::{cmn_table, expected_mode_degree, mode_apply};
use fock_whittaker::whittaker::{fiber_coordinates, solve_fiber, type_values, verify_whittaker_vector, whittaker_type_of, TopChoice};
use fock_whittaker::{Degree, FockVector, HalfInt, LambdaSequence, ModeIndex, QuadraticElement, Sector};
use proptest::prelude::*;

fn sector() -> impl Strategy<Value = Sector> {
    prop_oneof![Just(Sector::Untwisted), Just(Sector::Twisted)]
}

fn mode_index(sector: Sector, k: u32) -> ModeIndex {
    ModeIndex::new(sector, 2 * k + 2 - sector.parity() as u32).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_rule(seed: u64, s in sector(), rank in 1usize..=3, boson in 1usize..=3, k in 0u32..3) {
        let boson = boson.min(rank);
        let mut rng = sample::rng(seed);
        let f = sample::fock_vector(&mut rng, s, rank, 5, 4);
        let g = sample::fock_vector(&mut rng, s, rank, 5, 4);
        let m = mode_index(s, k);
        let lhs = f.checked_mul(&g).unwrap().weighted_partial(boson, m).unwrap();
        let rhs = f.weighted_partial(boson, m).unwrap().checked_mul(&g).unwrap()
            .checked_add(&f.checked_mul(&g.weighted_partial(boson, m).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partials_commute(seed: u64, s in sector(), k1 in 0u32..3, k2 in 0u32..3, i in 1usize..=2, j in 1usize..=2) {
        let f = sample::fock_vector(&mut sample::rng(seed), s, 2, 7, 5);
        let (a, b) = (mode_index(s, k1), mode_index(s, k2));
        let ab = f.weighted_partial(j, b).unwrap().weighted_partial(i, a).unwrap();
        let ba = f.weighted_partial(i, a).unwrap().weighted_partial(j, b).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn theta_is_an_algebra_involution(seed: u64, s in sector(), rank in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let f = sample::fock_vector(&mut rng, s, rank, 5, 4);
        let g = sample::fock_vector(&mut rng, s, rank, 5, 4);
        prop_assert_eq!(theta_involution(&theta_involution(&f)), f.clone());
        prop_assert_eq!(
            theta_involution(&f.checked_mul(&g).unwrap()),
            theta_involution(&f).checked_mul(&theta_involution(&g)).unwrap()
        );
        prop_assert_eq!(
            theta_involution(&f.checked_add(&g).unwrap()),
            theta_involution(&f).checked_add(&theta_involution(&g)).unwrap()
        );
    }

    #[test]
    fn degree_is_additive(seed: u64, s in sector(), rank in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let f = sample::nonzero_fock_vector(&mut rng, s, rank, 5, 4);
        let g = sample::nonzero_fock_vector(&mut rng, s, rank, 5, 4);
        prop_assert_eq!(f.checked_mul(&g).unwrap().degree(), f.degree() + g.degree());
        prop_assert_eq!(FockVector::zero(s, rank).degree(), Degree::NegInfinity);
    }

    #[test]
    fn quadratic_action_is_shifted_composition(
        seed: u64, s in sector(), rank in 1usize..=3, i in 1usize..=3, j in 1usize..=3, m in 0u32..3, n in 0u32..3,
    ) {
        let mut rng = sample::rng(seed);
        let lambda = sample::lambda(&mut rng, s, rank, 2, false);
        let f = sample::fock_vector(&mut rng, s, rank, 6, 5);
        let q = QuadraticElement::shifted(&lambda, i.min(rank), j.min(rank), mode_index(s, m), mode_index(s, n)).unwrap();
        prop_assert_eq!(quadratic_act(&lambda, &q, &f).unwrap(), q.apply(&lambda, &f).unwrap());
    }

    #[test]
    fn heisenberg_commutators(seed: u64, s in sector(), m in -6i64..=6, n in -6i64..=6, i in 1usize..=2, j in 1usize..=2) {
        let mut rng = sample::rng(seed);
        let lambda = sample::lambda(&mut rng, s, 2, 2, false);
        let f = sample::fock_vector(&mut rng, s, 2, 5, 4);
        let fix = |k: i64| HalfInt(2 * k + s.parity());
        prop_assert!(commutator_check(&lambda, (i, j), (fix(m), fix(n)), &f).unwrap());
    }

    #[test]
    fn modes_respect_grading(seed: u64, k in -3i64..=4) {
        let mut rng = sample::rng(seed);
        let u = sample::monomial(&mut rng, Sector::Untwisted, 2, 3);
        let f = sample::monomial(&mut rng, Sector::Untwisted, 2, 3);
        let u = FockVector::from_terms(Sector::Untwisted, 2, [(u, sample::nonzero_scalar(&mut rng))]).unwrap();
        let f = FockVector::from_terms(Sector::Untwisted, 2, [(f, sample::nonzero_scalar(&mut rng))]).unwrap();
        let out = mode_apply(&u, k, &f, &LambdaSequence::zero(Sector::Untwisted, 2)).unwrap();
        let expected = expected_mode_degree(&u, k, &f);
        // homogeneous input stays homogeneous of the predicted weight
        if let Degree::Finite(w) = expected {
            if w.doubled() >= 0 {
                prop_assert_eq!(out.homogeneous_part(w), out.clone());
            }
        }
        prop_assert!(out.degree() <= expected);
    }

    #[test]
    fn cmn_truncation_is_consistent(a in 1usize..=7, b in 1usize..=7) {
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert_eq!(cmn_table(hi).truncate(lo), cmn_table(lo));
    }

    #[test]
    fn type_matches_eigenvalues(seed: u64, s in sector(), rank in 1usize..=2, top in 0usize..=2) {
        let lambda = sample::lambda(&mut sample::rng(seed), s, rank, top, true);
        let t = whittaker_type_of(&lambda).unwrap();
        let report = verify_whittaker_vector(&lambda, 2 * t.r + t.epsilon() + 2).unwrap();
        prop_assert!(report.pass());
        for c in &report.checks {
            prop_assert_eq!(c.observed.clone(), t.get(c.i).to_string());
        }
    }

    #[test]
    fn fiber_round_trip(seed: u64, s in sector(), rank in 1usize..=3, top in 0usize..=3) {
        let lambda = sample::lambda(&mut sample::rng(seed), s, rank, top, true);
        let t = whittaker_type_of(&lambda).unwrap();
        let (entry, free) = fiber_coordinates(lambda.entries()).unwrap();
        let p = solve_fiber(&t, rank, TopChoice::Entry(entry), Some(&free)).unwrap();
        prop_assert_eq!(&p.lambda, &lambda.entries().to_vec());
        prop_assert_eq!(type_values(&p.lambda), t.zeta);
    }

    #[test]
    fn certificates_replay(seed: u64, s in sector(), rank in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let lambda = sample::proper_lambda(&mut rng, s, rank, 3);
        let a = sample::nonzero_fock_vector(&mut rng, s, rank, 6, 4);
        let cert = certify_cyclic(&lambda, &a).unwrap();
        prop_assert!(verify_certificate(&lambda, &a, &cert));
        for w in cert.steps.windows(2) {
            prop_assert_eq!(w[0].deg_after, w[1].deg_before);
        }
        let min_mode = if s == Sector::Untwisted { 2 } else { 1 };
        let bound = a.degree().finite().unwrap().doubled() / min_mode;
        prop_assert!(cert.steps.len() as i64 <= bound.max(0));
    }
}
