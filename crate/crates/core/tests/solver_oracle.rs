mod common;

use skewprod_core::cohomology::{oracle_nullspace, solve_continuous, solve_level, solve_measurable, Measurable};
use skewprod_core::SkewSystem;

const TRUNCATION: i64 = 16;
const ORACLE_TOL: f64 = 1e-8;

fn solves(sys: &SkewSystem, n: i64) -> bool {
    match solve_continuous(sys, n).unwrap() {
        Some(w) => {
            let t = sys.step_coefficient(n).mul(&sys.theta().apply(&w).unwrap()).unwrap();
            assert!(t.approx_eq(&w, 1e-12), "returned element is not fixed at level {n}");
            true
        }
        None => false,
    }
}

#[test]
fn closed_form_matches_oracle_on_character_systems() {
    let mut rng = common::rng(7);
    let mut disagreements = Vec::new();
    let mut solvable = 0;
    for i in 0..20 {
        let sys = common::character_system(&mut rng);
        for n in -6..=6 {
            let closed = usize::from(solves(&sys, n));
            solvable += closed;
            let oracle = oracle_nullspace(&sys, n, TRUNCATION, ORACLE_TOL).unwrap();
            if closed != oracle.dimension {
                disagreements.push((i, n, closed, oracle.dimension));
            }
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
    assert!(solvable > 20, "only {solvable} solvable levels sampled");
}

#[test]
fn zinf_oracle_matches_measurable_kind() {
    let mut rng = common::rng(70);
    for _ in 0..30 {
        let sys = common::zinf_system(&mut rng, false);
        for n in -4..=4 {
            let m = solve_measurable(&sys, n).unwrap();
            let o = oracle_nullspace(&sys, n, 0, ORACLE_TOL).unwrap();
            assert_eq!(m != Measurable::None, o.dimension == 1, "n = {n}");
            if let Some(g) = solve_continuous(&sys, n).unwrap() {
                let t = sys.step_coefficient(n).mul(&sys.theta().apply(&g).unwrap()).unwrap();
                assert!(t.approx_eq(&g, 1e-12));
                assert!(g.state_exact().is_one(1e-12));
            }
        }
    }
}

#[test]
fn level_zero_is_the_identity() {
    let mut rng = common::rng(71);
    for _ in 0..20 {
        let sys = common::any_system(&mut rng);
        let r = solve_level(&sys, 0).unwrap();
        assert!(r.continuous.unwrap().is_one(0.0));
    }
}

#[test]
fn solvable_levels_form_a_subgroup() {
    let mut rng = common::rng(72);
    for _ in 0..20 {
        let sys = common::any_system(&mut rng);
        let ok: Vec<i64> = (-8..=8).filter(|&n| solve_continuous(&sys, n).unwrap().is_some()).collect();
        for &a in &ok {
            for &b in &ok {
                if (a - b).abs() <= 8 {
                    assert!(ok.contains(&(a - b)), "{a} - {b} missing from {ok:?}");
                }
            }
        }
    }
}

#[test]
fn monomial_cocycle_anzai_has_affine_solutions() {
    let mut rng = common::rng(73);
    for _ in 0..10 {
        let sys = common::nc_anzai_system(&mut rng, false);
        for n in -3..=3 {
            solves(&sys, n);
        }
    }
}
