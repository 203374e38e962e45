//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use num::Rational64;
use rand::Rng;

use skewprod_core::cohomology::{
    detect_group, oracle_nullspace, solve_continuous, solve_level, AlgebraShape, Measurable, Witness, DEFAULT_N_MAX,
};
use skewprod_core::ergodicity::{
    birkhoff_pointwise, cesaro_orbit_average, classify, invariant_measure_functional, Verdict, CESARO_TOL,
};
use skewprod_core::crossed::fejer_weight;
use skewprod_core::{presets, Angle, CrossedElement, Element, SkewSystem, SymbolBasis};

const FAST: Duration = Duration::from_secs(1);
const SVD_SWEEP: Duration = Duration::from_secs(30);
const LAW_RESIDUAL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-8;
const ORACLE_M_NC: i64 = 12;
const ORACLE_M_AGREEMENT: i64 = 16;
const CESARO_DECAY: f64 = 10.0;
const MEASURE_RESIDUAL: f64 = 1e-10;
const FEJER_COEFF_TOL: f64 = 1e-14;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let detail = f()?;
    let elapsed = t.elapsed();
    check(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))?;
    Ok(format!("{detail} ({elapsed:.2?})"))
}

fn double_rotation_examples() -> Outcome {
    for l in [2, 3, 5] {
        let c = classify(&presets::double_rotation(l).map_err(|e| e.to_string())?, DEFAULT_N_MAX)
            .map_err(|e| e.to_string())?;
        check(c.fixed_point.group_generator == Some(l), format!("l = {l}: n₀ = {:?}", c.fixed_point.group_generator))?;
        check(!c.topologically_ergodic && !c.uniquely_ergodic, format!("l = {l}: ergodicity flags"))?;
        check(c.ue_wrt_fixed_point == Verdict::Yes, format!("l = {l}: ue_wrt_fixed_point"))?;
        check(c.fixed_point.algebra_shape == AlgebraShape::CircleAlgebra, format!("l = {l}: shape"))?;
    }
    Ok("n₀ = l for l ∈ {2,3,5}, ue_wrt_fixed_point = yes".into())
}

fn anzai_inverse_examples() -> Outcome {
    for nc in [false, true] {
        let sys = presets::anzai_inverse(nc).map_err(|e| e.to_string())?;
        let c = classify(&sys, DEFAULT_N_MAX).map_err(|e| e.to_string())?;
        check(c.fixed_point.group_generator == Some(1), format!("nc = {nc}: n₀"))?;
        check(c.ue_wrt_fixed_point == Verdict::Yes, format!("nc = {nc}: ue_wrt_fixed_point"))?;
        let r = solve_level(&sys, 1).map_err(|e| e.to_string())?;
        check(r.witness == Witness::Monomial { m: 1, n: 0 }, format!("nc = {nc}: witness {:?}", r.witness))?;
        check(r.continuous == Some(Element::u(sys.context())), format!("nc = {nc}: generator"))?;
    }
    Ok("classical and NC: n₀ = 1, w₁ = U".into())
}

fn zinf_examples() -> Outcome {
    let sys = presets::zinf(None).map_err(|e| e.to_string())?;
    let c = classify(&sys, DEFAULT_N_MAX).map_err(|e| e.to_string())?;
    check(c.topologically_ergodic && !c.uniquely_ergodic, "irrational β: flags")?;
    for n in (-6..=6).filter(|n| *n != 0) {
        let r = solve_level(&sys, n).map_err(|e| e.to_string())?;
        check(r.measurable == Measurable::MeasurableNonContinuous, format!("irrational β, n = {n}"))?;
    }
    let basis = SymbolBasis::standard();
    let minus_one = presets::zinf(Some(Angle::turns(&basis, Rational64::new(1, 2)))).map_err(|e| e.to_string())?;
    for n in -8..=8 {
        let has = solve_continuous(&minus_one, n).map_err(|e| e.to_string())?.is_some();
        check(has == (n % 2 == 0), format!("β = −1, n = {n}"))?;
    }
    let c = classify(&minus_one, DEFAULT_N_MAX).map_err(|e| e.to_string())?;
    check(c.fixed_point.group_generator == Some(2), "β = −1: n₀")?;
    check(c.ue_wrt_fixed_point == Verdict::No, "β = −1: ue_wrt_fixed_point")?;
    let f0 = sys.u().value_at(0).expect("Z∞").eval();
    for n in 1..=20 {
        let at3 = birkhoff_pointwise(&sys, 1, 3, n).map_err(|e| e.to_string())?;
        check(at3.step_coefficient == Complex64::new(1.0, 0.0), format!("l₀ = 3, n = {n}"))?;
        let at_m2 = birkhoff_pointwise(&sys, 1, -2, n).map_err(|e| e.to_string())?;
        if n >= 3 {
            check(at_m2.step_coefficient == f0, format!("l₀ = −2, n = {n}: {}", at_m2.step_coefficient))?;
        }
    }
    Ok("β = e^{2πis₂}: measurable only; β = −1: n₀ = 2, ue_wrt = no; Birkhoff coefficients exact".into())
}

fn nc_torus_examples() -> Outcome {
    let sys = presets::nctorus(false).map_err(|e| e.to_string())?;
    let c = classify(&sys, DEFAULT_N_MAX).map_err(|e| e.to_string())?;
    check(c.uniquely_ergodic && c.strictly_ergodic, "independent: flags")?;
    let mut dims = Vec::new();
    for n in 0..=3 {
        let o = oracle_nullspace(&sys, n, ORACLE_M_NC, ORACLE_TOL).map_err(|e| e.to_string())?;
        check(o.dimension == usize::from(n == 0), format!("oracle dimension {} at n = {n}", o.dimension))?;
        dims.push(o.dimension);
    }
    let dep = presets::nctorus(true).map_err(|e| e.to_string())?;
    for n in -6..=6 {
        let r = solve_level(&dep, n).map_err(|e| e.to_string())?;
        check(r.witness == Witness::Monomial { m: -n, n: 0 }, format!("dependent n = {n}: {:?}", r.witness))?;
    }
    Ok(format!("independent UE, oracle dims n=0..3: {dims:?}; dependent m = −n"))
}

fn cocycle_suite() -> Outcome {
    let mut rng = common::rng(5);
    let mut checks = 0;
    for i in 0..50 {
        let sys = common::any_system(&mut rng);
        let one = Element::one(sys.context());
        for m in -5..=5 {
            let am = sys.alpha().pow(m, sys.context());
            for n in -5..=5 {
                let rhs = sys.cocycle(m).mul(&am.apply(&sys.cocycle(n)).unwrap()).unwrap();
                check(sys.cocycle(m + n) == rhs, format!("system {i}: u_(m+n) at m = {m}, n = {n}"))?;
                checks += 1;
            }
            let n = m;
            let lhs = sys.crossed(0, sys.cocycle(n)).unwrap().mul(&sys.crossed(n, one.clone()).unwrap()).unwrap();
            let rhs = sys.crossed(n, sys.step_coefficient(n)).unwrap();
            check(lhs.distance(&rhs) == 0.0, format!("system {i}: u_n V^n at n = {n}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} exact identities, 0 failures"))
}

fn law_suite() -> Outcome {
    let mut rng = common::rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let sys = common::any_system(&mut rng);
        let x = common::crossed(&mut rng, &sys, 2);
        let y = common::crossed(&mut rng, &sys, 2);
        let z = common::crossed(&mut rng, &sys, 2);
        let a = sys.crossed(0, common::element(&mut rng, sys.context(), 2)).unwrap();
        let b = sys.crossed(0, common::element(&mut rng, sys.context(), 2)).unwrap();
        let zeta = common::angle(&mut rng, sys.context().basis());
        let e = sys.crossed(0, x.expectation()).unwrap();
        let residuals = [
            x.mul(&y).unwrap().mul(&z).unwrap().distance(&x.mul(&y.mul(&z).unwrap()).unwrap()),
            x.mul(&y).unwrap().adjoint().distance(&y.adjoint().mul(&x.adjoint()).unwrap()),
            sys.apply(&x.mul(&y).unwrap()).unwrap().distance(&sys.apply(&x).unwrap().mul(&sys.apply(&y).unwrap()).unwrap()),
            sys.apply(&sys.inverse_apply(&x).unwrap()).unwrap().distance(&x),
            sys.state_invariance_residual(&x).unwrap(),
            a.mul(&x).unwrap().mul(&b).unwrap().expectation().distance(&a.mul(&e).unwrap().mul(&b).unwrap().expectation()),
            sys.crossed(0, e.expectation()).unwrap().distance(&e),
            (x.gauge(&zeta).state() - x.state()).norm(),
        ];
        worst = residuals.into_iter().fold(worst, f64::max);
    }
    check(worst < LAW_RESIDUAL, format!("worst residual {worst:e}"))?;
    Ok(format!("200 instances, worst residual {worst:e}"))
}

fn solver_oracle_agreement() -> Outcome {
    let mut rng = common::rng(7);
    let (mut agree, mut total) = (0, 0);
    let mut misses = Vec::new();
    for i in 0..20 {
        let sys = common::character_system(&mut rng);
        for n in -6..=6 {
            let closed = usize::from(solve_continuous(&sys, n).map_err(|e| e.to_string())?.is_some());
            let o = oracle_nullspace(&sys, n, ORACLE_M_AGREEMENT, ORACLE_TOL).map_err(|e| e.to_string())?;
            total += 1;
            if closed == o.dimension {
                agree += 1;
            } else {
                misses.push((i, n));
            }
        }
    }
    check(agree == total, format!("{agree}/{total} agree; misses {misses:?}"))?;
    Ok(format!("{agree}/{total} levels agree"))
}

fn cesaro_convergence() -> Outcome {
    let sys = presets::double_rotation(3).map_err(|e| e.to_string())?;
    let fp = detect_group(&sys, DEFAULT_N_MAX).map_err(|e| e.to_string())?;
    let ctx = sys.context();
    let fixed = sys.crossed(3, Element::one(ctx)).unwrap();
    let d = cesaro_orbit_average(&sys, &fp, &fixed, 10_000, &[100, 10_000]).map_err(|e| e.to_string())?;
    check(d.trace.iter().all(|(_, v)| *v == 0.0), "fixed point V³ has a nonzero trace")?;
    let x = sys.crossed(3, Element::one(ctx).add(&Element::u(ctx)).unwrap()).unwrap();
    let d = cesaro_orbit_average(&sys, &fp, &x, 10_000, &[100, 10_000]).map_err(|e| e.to_string())?;
    let (d2, d4) = (d.trace[0].1, d.trace[1].1);
    check(d4 < CESARO_TOL, format!("distance {d4:e} at n = 10⁴"))?;
    check(d2 >= CESARO_DECAY * d4, format!("decay {d2:e} → {d4:e}"))?;
    Ok(format!("V³ trace ≡ 0; V³(1+U): {d2:.2e} at 10² → {d4:.2e} at 10⁴"))
}

fn kernel_checks() -> Outcome {
    let mut rng = common::rng(9);
    let mut instances = 0;
    for _ in 0..20 {
        let sys = common::any_system(&mut rng);
        let x = common::crossed(&mut rng, &sys, 4);
        for n in 1..=32u32 {
            let mut avg = sys.crossed_zero();
            for l in 0..n {
                avg = avg.add(&x.partial_sum(i64::from(l))).unwrap();
            }
            let brute: BTreeMap<_, _> = avg.numeric().into_iter().map(|(k, c)| (k, c / f64::from(n))).collect();
            let d = skewprod_core::crossed::l1_distance(&brute, &x.fejer(n).unwrap().numeric());
            check(d <= FEJER_COEFF_TOL, format!("Fejér coefficients differ by {d:e} at N = {n}"))?;
            for &k in x.modes().keys() {
                let hits: f64 = (0..n).filter(|l| k.unsigned_abs() <= u64::from(*l)).map(|_| 1.0).sum();
                check(hits / f64::from(n) == fejer_weight(k, n), format!("Fejér weight k = {k}, N = {n}"))?;
            }
        }
        let r = rng.gen_range(0.5..0.999);
        let residual = x.abel(r).unwrap().numeric();
        let full = x.numeric();
        let d = skewprod_core::crossed::l1_distance(&residual, &full);
        let bound = (1.0 - r) * x.support_radius() as f64 * x.one_norm();
        check(d <= bound + 1e-15, format!("Abel residual {d:e} > bound {bound:e}"))?;
        instances += 1;
    }
    Ok(format!("Fejér exact for N ≤ 32 and Abel bound on {instances} random elements"))
}

fn characteristic(rng: &mut rand::rngs::StdRng, support: i64) -> BTreeMap<i64, Complex64> {
    let atoms: Vec<(f64, f64)> =
        (0..3).map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU))).collect();
    let total: f64 = atoms.iter().map(|a| a.0).sum();
    (-support..=support)
        .map(|l| {
            if l == 0 {
                return (0, Complex64::new(1.0, 0.0));
            }
            (l, atoms.iter().map(|(p, t)| Complex64::from_polar(p / total, -(l as f64) * t)).sum())
        })
        .collect()
}

fn measure_functional() -> Outcome {
    let mut rng = common::rng(10);
    let haar = BTreeMap::from([(0, Complex64::new(1.0, 0.0))]);
    let (mut worst_neg, mut worst_inv): (f64, f64) = (0.0, 0.0);
    for i in 0..50 {
        let sys: SkewSystem = if i % 2 == 0 {
            presets::double_rotation([2, 3, 5][i % 3]).unwrap()
        } else {
            common::zinf_system(&mut rng, true)
        };
        let fp = detect_group(&sys, DEFAULT_N_MAX).map_err(|e| e.to_string())?;
        let modes: Vec<_> = (0..3).map(|_| (rng.gen_range(-4..=4), common::element(&mut rng, sys.context(), 2))).collect();
        let f = CrossedElement::from_modes(sys.context(), sys.alpha(), modes).unwrap();
        let at_haar = invariant_measure_functional(&sys, &fp, &haar, &f).map_err(|e| e.to_string())?;
        check(at_haar == f.state(), format!("draw {i}: Haar gives {at_haar}, ω(F) = {}", f.state()))?;
        let mu = characteristic(&mut rng, 20);
        let sq = invariant_measure_functional(&sys, &fp, &mu, &f.adjoint().mul(&f).unwrap()).map_err(|e| e.to_string())?;
        worst_neg = worst_neg.max(-sq.re).max(sq.im.abs());
        let before = invariant_measure_functional(&sys, &fp, &mu, &f).map_err(|e| e.to_string())?;
        let after = invariant_measure_functional(&sys, &fp, &mu, &sys.apply(&f).unwrap()).map_err(|e| e.to_string())?;
        worst_inv = worst_inv.max((before - after).norm());
    }
    check(worst_neg <= MEASURE_RESIDUAL, format!("positivity violation {worst_neg:e}"))?;
    check(worst_inv <= MEASURE_RESIDUAL, format!("invariance residual {worst_inv:e}"))?;
    Ok(format!("Haar exact; 50 draws, positivity {worst_neg:.1e}, invariance {worst_inv:.1e}"))
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("double-rotation example", Box::new(|| timed(FAST, double_rotation_examples))),
        ("Anzai-inverse example", Box::new(|| timed(FAST, anzai_inverse_examples))),
        ("Z∞ example", Box::new(|| timed(FAST, zinf_examples))),
        ("NC torus example", Box::new(|| timed(SVD_SWEEP, nc_torus_examples))),
        ("cocycle identities", Box::new(cocycle_suite)),
        ("algebra and crossed-product laws", Box::new(law_suite)),
        ("solver/oracle agreement", Box::new(solver_oracle_agreement)),
        ("Cesàro convergence", Box::new(cesaro_convergence)),
        ("Fejér and Abel kernels", Box::new(kernel_checks)),
        ("T(μ) functional", Box::new(measure_functional)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
