//! Ergodic classification of skew products and the associated averages.

use std::collections::BTreeMap;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{BasisKey, Element};
use crate::cohomology::{detect_group, solve_level, FixedPointDescription, LevelReport, Measurable, Method};
use crate::crossed::{l1_distance, l2_distance, CrossedElement};
use crate::error::{Error, Result};
use crate::phase::PhasedScalar;
use crate::skew::SkewSystem;

/// `ℓ¹` residual below which a Cesàro trace counts as converging.
pub const CESARO_TOL: f64 = 5e-2;
/// Tolerance for the Hermitian symmetry and normalization of `μ̌`.
pub const MEASURE_TOL: f64 = 1e-12;

/// Three-valued verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Ergodic properties of a skew product with respect to `ω = ω₀∘E`.
#[derive(Debug, Clone)]
pub struct Classification {
    pub topologically_ergodic: bool,
    pub uniquely_ergodic: bool,
    pub weakly_clustering: bool,
    pub strictly_ergodic: bool,
    pub sharply_ergodic: bool,
    /// Minimality follows from unique ergodicity and faithfulness; no
    /// independent check is made.
    pub minimal_implied: bool,
    pub ue_wrt_fixed_point: Verdict,
    pub fixed_point: FixedPointDescription,
    pub levels: Vec<LevelReport>,
    pub evidence: Vec<String>,
}

/// Decide the ergodic properties from the group of solvable levels.
pub fn classify(sys: &SkewSystem, n_max: i64) -> Result<Classification> {
    if !sys.flags().base_uniquely_ergodic {
        return Err(Error::Hypothesis("the base dynamics is not known to be uniquely ergodic".into()));
    }
    let fp = detect_group(sys, n_max)?;
    let n0 = fp.group_generator;
    let m0 = fp.measurable_generator;
    let span = [3, n0.unwrap_or(0), m0.unwrap_or(0)].into_iter().max().unwrap_or(3).min(n_max);
    let levels = (-span..=span).map(|n| solve_level(sys, n)).collect::<Result<Vec<_>>>()?;

    let mut evidence = Vec::new();
    match fp.method {
        Method::Scan => evidence.push(format!("levels 1..={n_max} scanned; verdicts assume none beyond")),
        _ => evidence.push("group of solvable levels in closed form".into()),
    }
    let topologically_ergodic = n0.is_none();
    let uniquely_ergodic = m0.is_none();
    let flags = sys.flags();
    let strictly_ergodic = uniquely_ergodic && flags.omega0_faithful;
    let sharply_ergodic = strictly_ergodic && flags.support_central;

    let non_continuous = match (m0, n0) {
        (Some(_), None) => true,
        (Some(m), Some(n)) => n != m,
        _ => false,
    } || levels.iter().any(|l| l.measurable == Measurable::MeasurableNonContinuous);
    let classical = sys.is_classical();
    let ue_wrt_fixed_point = if n0 == Some(1) {
        evidence.push("n₀ = 1: Φ is uniquely ergodic w.r.t. its fixed points".into());
        Verdict::Yes
    } else if non_continuous {
        evidence.push("a level has a measurable solution with no continuous one".into());
        Verdict::No
    } else if classical {
        evidence.push("classical process: every measurable solution is continuous".into());
        Verdict::Yes
    } else if uniquely_ergodic {
        Verdict::Yes
    } else {
        evidence.push("only continuous solutions, noncommutative converse undecided".into());
        Verdict::Unknown
    };
    Ok(Classification {
        topologically_ergodic,
        uniquely_ergodic,
        weakly_clustering: uniquely_ergodic,
        strictly_ergodic,
        sharply_ergodic,
        minimal_implied: strictly_ergodic,
        ue_wrt_fixed_point,
        fixed_point: fp,
        levels,
        evidence,
    })
}

/// `E_Φ(x) = Σ_{l ∈ G} ω₀(w_l^* a_l)·V^l w_l`.
pub fn conditional_expectation_phi(
    sys: &SkewSystem,
    fp: &FixedPointDescription,
    x: &CrossedElement,
) -> Result<CrossedElement> {
    let mut modes = Vec::new();
    for (&k, a) in x.modes() {
        let Some(w) = fp.generator(sys, k)? else { continue };
        let c = w.adjoint().mul(a)?.state_exact();
        if !c.is_zero() {
            modes.push((k, w.scale(&c)));
        }
    }
    CrossedElement::from_modes(sys.context(), sys.alpha(), modes)
}

/// Cesàro-average trace of `Φ^k(x)` against `E_Φ(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageDiagnostics {
    pub iterations: usize,
    /// `(j, ‖(1/j)Σ_{k<j} Φ^k(x) − E_Φ(x)‖₁)` at the checkpoints.
    pub trace: Vec<(usize, f64)>,
    pub final_distance: f64,
    /// Largest coefficientwise deviation at `n`; stays meaningful when the
    /// orbit spreads over infinitely many monomials and `ℓ¹` cannot decay.
    pub final_max_deviation: f64,
    pub converging: bool,
}

/// `1, 2, 5, 10, 20, 50, …` up to `n`, plus `n`.
pub fn log_checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut scale = 1;
    'outer: loop {
        for f in [1, 2, 5] {
            let j = f * scale;
            if j > n {
                break 'outer;
            }
            out.push(j);
        }
        scale *= 10;
    }
    if out.last() != Some(&n) && n > 0 {
        out.push(n);
    }
    out
}

fn accumulate(sum: &mut BTreeMap<(i64, BasisKey), Complex64>, y: &CrossedElement) {
    for (k, c) in y.numeric() {
        *sum.entry(k).or_default() += c;
    }
}

fn averaged(sum: &BTreeMap<(i64, BasisKey), Complex64>, j: usize) -> BTreeMap<(i64, BasisKey), Complex64> {
    sum.iter().map(|(k, c)| (*k, c / j as f64)).collect()
}

fn max_deviation(a: &BTreeMap<(i64, BasisKey), Complex64>, b: &BTreeMap<(i64, BasisKey), Complex64>) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

/// Iterate `Φ` exactly and report the `ℓ¹` distance of the running mean to
/// `E_Φ(x)` at each checkpoint.
pub fn cesaro_orbit_average(
    sys: &SkewSystem,
    fp: &FixedPointDescription,
    x: &CrossedElement,
    n: usize,
    checkpoints: &[usize],
) -> Result<AverageDiagnostics> {
    if n == 0 {
        return Err(Error::InvalidArgument("iterations must be positive".into()));
    }
    let target = conditional_expectation_phi(sys, fp, x)?.numeric();
    let mut sum = BTreeMap::new();
    let mut y = x.clone();
    let mut trace = Vec::new();
    let mut final_distance = 0.0;
    let mut final_max_deviation = 0.0;
    for j in 1..=n {
        accumulate(&mut sum, &y);
        if j == n || checkpoints.contains(&j) {
            let avg = averaged(&sum, j);
            let d = l1_distance(&avg, &target);
            if checkpoints.contains(&j) {
                trace.push((j, d));
            }
            final_distance = d;
            if j == n {
                final_max_deviation = max_deviation(&avg, &target);
            }
        }
        if j < n {
            y = sys.apply(&y)?;
        }
    }
    Ok(AverageDiagnostics {
        iterations: n,
        trace,
        final_distance,
        final_max_deviation,
        converging: final_distance < CESARO_TOL,
    })
}

/// `‖(1/n)Σ_{k<n} V_Φ^k ξ − P ξ‖₂` for `ξ = V^m a` in the GNS space of `ω`,
/// where `P` is the projection onto invariant vectors. `ξ` must fit in the
/// truncation `|m|, |exponents| ≤ truncation`.
pub fn gns_cesaro_check(
    sys: &SkewSystem,
    fp: &FixedPointDescription,
    m: i64,
    a: &Element,
    n: usize,
    truncation: i64,
) -> Result<f64> {
    if !sys.context().is_torus() {
        return Err(Error::Unsupported("the GNS check is implemented for torus families".into()));
    }
    let fits = m.abs() <= truncation
        && a.torus_terms().expect("torus").keys().all(|(p, q)| p.abs() <= truncation && q.abs() <= truncation);
    if !fits {
        return Err(Error::InvalidArgument("vector support exceeds the truncation".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("iterations must be positive".into()));
    }
    let xi = sys.crossed(m, a.clone())?;
    let projected = conditional_expectation_phi(sys, fp, &xi)?.numeric();
    let mut sum = BTreeMap::new();
    let mut y = xi;
    for j in 0..n {
        accumulate(&mut sum, &y);
        if j + 1 < n {
            y = sys.apply(&y)?;
        }
    }
    Ok(l2_distance(&averaged(&sum, n), &projected))
}

/// Pointwise Birkhoff data for `h(l, z) = z^q` along the orbit of `l₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffTrace {
    /// Coefficient of `z^q` in `h∘Φ^n` at `l₀`.
    pub step_coefficient: Complex64,
    /// `(1/n)Σ_{k<n}` of the step coefficients.
    pub average: Complex64,
    /// Limit of the step coefficients when `w(∞) = 1`.
    pub limit: Option<Complex64>,
    /// Running averages `(j, value)` for `j = 1..=n`.
    pub running: Vec<(usize, Complex64)>,
}

/// Iterate `Φ` on `V^q` over `Z∞` and read the mode-`q` coefficient at `l₀`.
pub fn birkhoff_pointwise(sys: &SkewSystem, q: i64, l0: i64, n: usize) -> Result<BirkhoffTrace> {
    let crate::Automorphism::Shift(p) = **sys.theta() else {
        return Err(Error::InvalidArgument("pointwise averages need a Z∞ system".into()));
    };
    if n == 0 {
        return Err(Error::InvalidArgument("iterations must be positive".into()));
    }
    let mut y = sys.crossed(q, Element::one(sys.context()))?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut running = Vec::with_capacity(n);
    for j in 1..=n {
        total += y.coeff(q).value_at(l0).expect("Z∞").eval();
        running.push((j, total / j as f64));
        y = sys.apply(&y)?;
    }
    let step_coefficient = y.coeff(q).value_at(l0).expect("Z∞").eval();
    let w = sys.step_coefficient(q);
    let (w_inf, dev) = w.zinf_parts().expect("Z∞");
    let limit = (w_inf.is_one(MEASURE_TOL) && p != 0).then(|| {
        let mut prod = PhasedScalar::one(sys.context().basis());
        for &d in dev.keys() {
            let gap = l0 - d;
            if gap % p == 0 && gap / p >= 0 {
                prod = prod.mul(&w.value_at(d).expect("Z∞"));
            }
        }
        prod.eval()
    });
    Ok(BirkhoffTrace { step_coefficient, average: total / n as f64, limit, running })
}

/// `T(μ)(F) = Σ_l μ̌(l)·ω₀(w_{n₀l}^* a_{n₀l})` for a classical process, with
/// `μ̌` the finitely supported characteristic function of a measure on the
/// circle.
pub fn invariant_measure_functional(
    sys: &SkewSystem,
    fp: &FixedPointDescription,
    mu: &BTreeMap<i64, Complex64>,
    f: &CrossedElement,
) -> Result<Complex64> {
    if !sys.is_classical() {
        return Err(Error::InvalidArgument("T(μ) is defined for classical processes".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    if (mu.get(&0).copied().unwrap_or(zero) - 1.0).norm() > MEASURE_TOL {
        return Err(Error::InvalidArgument("μ̌(0) must equal 1".into()));
    }
    for (&l, &c) in mu {
        if (mu.get(&-l).copied().unwrap_or(zero) - c.conj()).norm() > MEASURE_TOL {
            return Err(Error::InvalidArgument(format!("μ̌ is not Hermitian at l = {l}")));
        }
    }
    let mut total = zero;
    for (&l, &c) in mu {
        let k = match fp.group_generator {
            Some(n0) => n0 * l,
            None if l == 0 => 0,
            None => continue,
        };
        let a = f.coeff(k);
        if a.is_zero() {
            continue;
        }
        let w = fp.generator(sys, k)?.expect("level in G");
        total += c * w.adjoint().mul(&a)?.state();
    }
    Ok(total)
}
