//! Cohomological equations `α^{−n}(u_n)·θ(a) = a` at every level `n`.
//!
//! Torus families: when `w = α^{−n}(u_n)` is a monomial `e^{iψ}U^s`, the map
//! `T(a) = w·θ(a)` sends each monomial `U^p` to a unimodular multiple of
//! `U^{Ap+s}` where `A` is the exponent matrix of `θ`. A finitely supported
//! (or square-summable) fixed vector must be carried by periodic orbits of
//! `p ↦ Ap + s`; for the matrices handled here those are fixed points, and
//! on the fixed set the weight is an affine phase, so existence reduces to a
//! character equation. In particular measurable and continuous solutions
//! coincide for these families.
//!
//! `Z∞`: the equation reads `g(l) = w(l)·g(l − p)` for the shift `p`; it
//! telescopes along residue classes mod `|p|`.

mod oracle;

use std::collections::BTreeMap;

use num::integer::{gcd, lcm};
use serde::{Deserialize, Serialize};

pub use oracle::{oracle_nullspace, OracleReport};

use crate::algebra::{AlgebraContext, AlgebraKind, Automorphism, Element, Mono};
use crate::angle::{minimal_level, solve_character, solve_phase_relation, Angle};
use crate::crossed::CrossedElement;
use crate::error::{Error, Result};
use crate::lattice::solve_integer;
use crate::phase::PhasedScalar;
use crate::skew::{SkewSystem, IDENTITY_TOL};

/// Default bound for level scans of non-character cocycles.
pub const DEFAULT_N_MAX: i64 = 24;
/// Range `|l| ≤ GENERATOR_RANGE` of generators `w_{n₀l}` stored in a
/// [`FixedPointDescription`].
pub const GENERATOR_RANGE: i64 = 3;

/// Kind of solution available at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurable {
    None,
    ContinuousOnly,
    MeasurableNonContinuous,
}

/// How a result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Scan,
    Oracle,
}

/// Descriptor of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    /// Solution is the monomial `U^mV^n`.
    Monomial { m: i64, n: i64 },
    /// A nonzero scalar in the one-dimensional `L²(δ∞)`.
    DeltaInfinityScalar,
    /// Null vector found numerically.
    NullVector,
}

/// Solutions of the cohomological equation at one level.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub level: i64,
    /// Normalized unitary `w_n`, when a continuous solution exists.
    pub continuous: Option<Element>,
    pub measurable: Measurable,
    pub witness: Witness,
    pub method: Method,
    pub oracle: Option<OracleReport>,
}

/// Shape of the fixed-point algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraShape {
    TrivialScalars,
    CircleAlgebra,
}

/// `G_{θ,u} = n₀Z` and its normalized generators.
#[derive(Debug, Clone)]
pub struct FixedPointDescription {
    /// `n₀`; `None` means `G = {0}`.
    pub group_generator: Option<i64>,
    /// Generator of the group of levels with measurable solutions.
    pub measurable_generator: Option<i64>,
    pub algebra_shape: AlgebraShape,
    /// `l ↦ w_{n₀l}` for `|l| ≤ GENERATOR_RANGE`.
    pub generators: BTreeMap<i64, Element>,
    pub method: Method,
    /// Levels scanned when `method` is [`Method::Scan`].
    pub scan_bound: Option<i64>,
    /// `V^a w_a · V^b w_b` lies on the line of `V^{a+b} w_{a+b}`.
    pub group_law_verified: bool,
}

impl FixedPointDescription {
    /// `w_k` for `k ∈ G`: stored generator or solved on demand.
    pub fn generator(&self, sys: &SkewSystem, k: i64) -> Result<Option<Element>> {
        if k == 0 {
            return Ok(Some(Element::one(sys.context())));
        }
        match self.group_generator {
            Some(n0) if k % n0 == 0 => match self.generators.get(&(k / n0)) {
                Some(w) => Ok(Some(w.clone())),
                None => solve_continuous(sys, k),
            },
            _ => Ok(None),
        }
    }
}

fn monomial_weight(w: &Mono, theta: &Automorphism, p: (i64, i64), gamma: &Angle) -> Mono {
    let zero = Angle::zero(gamma.basis());
    w.mul(&theta.apply_mono(&Mono::new(zero, p), gamma), gamma)
}

/// Exponent matrices for which every periodic orbit of `p ↦ Ap + s` is a
/// fixed point: no eigenvalue is a root of unity other than 1.
fn periodic_orbits_are_fixed(a: [[i64; 2]; 2], dim: usize) -> bool {
    if dim == 1 {
        return a[0][0] == 1;
    }
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let tr = a[0][0] + a[1][1];
    match det {
        1 => tr == 2 || tr.abs() > 2,
        -1 => tr != 0,
        _ => false,
    }
}

fn torus_dim(ctx: &AlgebraContext) -> usize {
    if matches!(ctx.kind(), AlgebraKind::Circle) {
        1
    } else {
        2
    }
}

/// Integer solutions of `(A − I)p = −s` in `Z^dim`.
fn fixed_set(a: [[i64; 2]; 2], s: (i64, i64), dim: usize) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    let m: Vec<Vec<i128>> = (0..dim)
        .map(|i| (0..dim).map(|j| (a[i][j] - i64::from(i == j)) as i128).collect())
        .collect();
    let rhs: Vec<i128> = [s.0, s.1][..dim].iter().map(|x| -(*x as i128)).collect();
    if dim == 1 && s.1 != 0 {
        return None;
    }
    let sol = solve_integer(&m, &rhs)?;
    let conv = |v: &[i128]| v.iter().map(|x| *x as i64).collect::<Vec<_>>();
    Some((conv(&sol.particular), sol.kernel.iter().map(|k| conv(k)).collect()))
}

fn as_pair(v: &[i64]) -> (i64, i64) {
    (v[0], v.get(1).copied().unwrap_or(0))
}

fn second_difference(f: &dyn Fn(i64) -> Angle) -> Angle {
    &(&f(2) - &f(1).scale(2)) + &f(0)
}

/// Least-|t| integer point of the fixed set `p₀ + Σ tᵢ vᵢ` where the weight
/// of `T` is trivial.
fn solve_on_fixed_set(
    w: &Mono,
    theta: &Automorphism,
    gamma: &Angle,
    p0: &[i64],
    kernel: &[Vec<i64>],
) -> Result<Option<(i64, i64)>> {
    let point = |t: &[i64]| -> (i64, i64) {
        let mut p = as_pair(p0);
        for (ti, v) in t.iter().zip(kernel) {
            let v = as_pair(v);
            p = (p.0 + ti * v.0, p.1 + ti * v.1);
        }
        p
    };
    let weight = |t: &[i64]| monomial_weight(w, theta, point(t), gamma).phase;
    match kernel.len() {
        0 => Ok(weight(&[]).is_trivial_phase().then(|| point(&[]))),
        1 => {
            let f = |t: i64| weight(&[t]);
            if !second_difference(&f).is_trivial_phase() {
                return Err(Error::Unsupported("weight is not affine along the fixed line".into()));
            }
            let f0 = f(0);
            let slope = &f(1) - &f0;
            Ok(solve_character(&slope, &f0, 1)?.map(|t| point(&[t])))
        }
        2 => {
            let f00 = weight(&[0, 0]);
            let e1 = &weight(&[1, 0]) - &f00;
            let e2 = &weight(&[0, 1]) - &f00;
            let mixed = &(&weight(&[1, 1]) - &f00) - &(&e1 + &e2);
            let d1 = second_difference(&|t| weight(&[t, 0]));
            let d2 = second_difference(&|t| weight(&[0, t]));
            if !(mixed.is_trivial_phase() && d1.is_trivial_phase() && d2.is_trivial_phase()) {
                return Err(Error::Unsupported("weight is not affine on the fixed lattice".into()));
            }
            Ok(solve_phase_relation(&f00, &[e1, e2])?.map(|sol| point(&[sol.particular[0] as i64, sol.particular[1] as i64])))
        }
        _ => unreachable!("at most two dimensions"),
    }
}

/// Exponent of the monomial solution at level `n` for torus families.
fn torus_level(sys: &SkewSystem, n: i64) -> Result<Option<(i64, i64)>> {
    let ctx = sys.context();
    let theta = sys.theta();
    let dim = torus_dim(ctx);
    let a = theta.matrix().expect("torus automorphism");
    if !periodic_orbits_are_fixed(a, dim) {
        return Err(Error::Unsupported(format!("exponent matrix {a:?} has periodic orbits")));
    }
    let w = sys
        .step_coefficient(n)
        .as_mono(IDENTITY_TOL)
        .ok_or_else(|| Error::Unsupported("α^{−n}(u_n) is not a monomial with exact phase".into()))?;
    let Some((p0, kernel)) = fixed_set(a, w.exp, dim) else { return Ok(None) };
    solve_on_fixed_set(&w, theta, &ctx.gamma(), &p0, &kernel)
}

struct ZInfLevel {
    measurable: bool,
    continuous: Option<Element>,
}

fn zinf_shift(theta: &Automorphism) -> i64 {
    match theta {
        Automorphism::Shift(p) => *p,
        Automorphism::Torus { .. } => unreachable!("Z∞ systems use shifts"),
    }
}

/// `g(l) = w(l)·g(l − p)`, normalized by `g(∞) = 1`.
fn zinf_level(sys: &SkewSystem, n: i64) -> Result<ZInfLevel> {
    let ctx = sys.context();
    let p = zinf_shift(sys.theta());
    if p == 0 {
        return Err(Error::Hypothesis("the identity shift is not uniquely ergodic".into()));
    }
    let w = sys.step_coefficient(n);
    let (w_inf, dev) = w.zinf_parts().expect("Z∞ element");
    if !w_inf.is_one(IDENTITY_TOL) {
        return Ok(ZInfLevel { measurable: false, continuous: None });
    }
    let q = p.abs();
    let one = PhasedScalar::one(ctx.basis());
    let mut classes: BTreeMap<i64, PhasedScalar> = BTreeMap::new();
    for &l in dev.keys() {
        let r = l.rem_euclid(q);
        let v = w.value_at(l).expect("Z∞");
        let acc = classes.remove(&r).unwrap_or_else(|| one.clone());
        classes.insert(r, acc.mul(&v));
    }
    if classes.values().any(|c| !c.is_one(IDENTITY_TOL)) {
        return Ok(ZInfLevel { measurable: true, continuous: None });
    }
    let mut g: BTreeMap<i64, PhasedScalar> = BTreeMap::new();
    if let (Some(&lo), Some(&hi)) = (dev.keys().next(), dev.keys().next_back()) {
        let ordered: Vec<i64> = if p > 0 { (lo..=hi).collect() } else { (lo..=hi).rev().collect() };
        let mut running: BTreeMap<i64, PhasedScalar> = BTreeMap::new();
        for l in ordered {
            let r = l.rem_euclid(q);
            let prev = running.remove(&r).unwrap_or_else(|| one.clone());
            let cur = prev.mul(&w.value_at(l).expect("Z∞"));
            let d = cur.sub(&one);
            if !d.is_zero() && d.coeff_abs_sum() > IDENTITY_TOL {
                g.insert(l, d);
            }
            running.insert(r, cur);
        }
    }
    let sol = Element::zinf(ctx, one, g)?;
    Ok(ZInfLevel { measurable: true, continuous: Some(sol) })
}

/// Normalized continuous solution at level `n`, if any.
pub fn solve_continuous(sys: &SkewSystem, n: i64) -> Result<Option<Element>> {
    if sys.context().is_torus() {
        match torus_level(sys, n)? {
            Some((m, k)) => Ok(Some(Element::monomial(sys.context(), m, k, PhasedScalar::one(sys.context().basis()))?)),
            None => Ok(None),
        }
    } else {
        Ok(zinf_level(sys, n)?.continuous)
    }
}

/// Kind of square-integrable solution at level `n` in the GNS space of `ω₀`.
pub fn solve_measurable(sys: &SkewSystem, n: i64) -> Result<Measurable> {
    Ok(solve_level(sys, n)?.measurable)
}

/// Full report for level `n`.
pub fn solve_level(sys: &SkewSystem, n: i64) -> Result<LevelReport> {
    let (continuous, measurable, witness) = if sys.context().is_torus() {
        match torus_level(sys, n)? {
            Some((m, k)) => {
                let w = Element::monomial(sys.context(), m, k, PhasedScalar::one(sys.context().basis()))?;
                (Some(w), Measurable::ContinuousOnly, Witness::Monomial { m, n: k })
            }
            None => (None, Measurable::None, Witness::None),
        }
    } else {
        let z = zinf_level(sys, n)?;
        match (z.measurable, z.continuous) {
            (_, Some(g)) => (Some(g), Measurable::ContinuousOnly, Witness::DeltaInfinityScalar),
            (true, None) => (None, Measurable::MeasurableNonContinuous, Witness::DeltaInfinityScalar),
            (false, None) => (None, Measurable::None, Witness::None),
        }
    };
    Ok(LevelReport { level: n, continuous, measurable, witness, method: Method::ClosedForm, oracle: None })
}

/// [`solve_level`], falling back to the nullspace oracle for unsupported
/// cocycle shapes.
pub fn solve_level_or_oracle(sys: &SkewSystem, n: i64, m: i64, tol: f64) -> Result<LevelReport> {
    match solve_level(sys, n) {
        Err(Error::Unsupported(_)) => {
            let o = oracle_nullspace(sys, n, m, tol)?;
            let measurable = if o.dimension > 0 { Measurable::ContinuousOnly } else { Measurable::None };
            let witness = if o.dimension > 0 { Witness::NullVector } else { Witness::None };
            Ok(LevelReport { level: n, continuous: None, measurable, witness, method: Method::Oracle, oracle: Some(o) })
        }
        other => other,
    }
}

/// Closed-form `(n₀, measurable generator)` when the cocycle is of character
/// type; `None` when only a scan applies.
fn closed_form_group(sys: &SkewSystem) -> Result<Option<(Option<i64>, Option<i64>)>> {
    let ctx = sys.context();
    if ctx.is_torus() {
        let Some(phi) = sys.u().as_mono(IDENTITY_TOL).filter(|m| m.exp == (0, 0)).map(|m| m.phase) else {
            return Ok(None);
        };
        let theta = sys.theta();
        let dim = torus_dim(ctx);
        let a = theta.matrix().expect("torus");
        if !periodic_orbits_are_fixed(a, dim) {
            return Ok(None);
        }
        let gamma = ctx.gamma();
        let Some((_, kernel)) = fixed_set(a, (0, 0), dim) else { return Ok(Some((None, None))) };
        let id = Mono::identity(&gamma);
        let chi = |p: (i64, i64)| monomial_weight(&id, theta, p, &gamma).phase;
        let n0 = match kernel.len() {
            0 => phi.order(),
            1 => {
                let v = as_pair(&kernel[0]);
                let f = |t: i64| chi((t * v.0, t * v.1));
                if !second_difference(&f).is_trivial_phase() {
                    return Ok(None);
                }
                minimal_level(&f(1), &phi)?.map(|(n0, _)| n0)
            }
            _ => {
                let cu = chi((1, 0));
                let cv = chi((0, 1));
                let mixed = &chi((1, 1)) - &(&cu + &cv);
                if !mixed.is_trivial_phase() {
                    return Ok(None);
                }
                let sol = solve_phase_relation(&Angle::zero(ctx.basis()), &[phi, cu, cv])?;
                let g = sol.map_or(0, |s| s.kernel.iter().fold(0i128, |acc, k| gcd(acc, k[0])));
                (g != 0).then_some(g as i64)
            }
        };
        return Ok(Some((n0, n0)));
    }
    if !sys.alpha().is_identity() {
        return Ok(None);
    }
    let u = sys.u();
    let (inf, dev) = u.zinf_parts().expect("Z∞");
    let Some(inf_phase) = inf.as_exact_phase(IDENTITY_TOL) else { return Ok(None) };
    let q = zinf_shift(sys.theta()).abs();
    if q == 0 {
        return Err(Error::Hypothesis("the identity shift is not uniquely ergodic".into()));
    }
    let mut classes: BTreeMap<i64, Angle> = BTreeMap::new();
    for &l in dev.keys() {
        let Some(ph) = u.value_at(l).and_then(|v| v.as_exact_phase(IDENTITY_TOL)) else { return Ok(None) };
        let r = l.rem_euclid(q);
        let acc = classes.remove(&r).unwrap_or_else(|| Angle::zero(ctx.basis()));
        classes.insert(r, &acc + &ph);
    }
    let m0 = inf_phase.order();
    let n0 = classes.values().try_fold(m0.unwrap_or(0), |acc, c| c.order().map(|o| lcm(acc, o)));
    let n0 = match (m0, n0) {
        (Some(_), Some(n)) if n > 0 => Some(n),
        _ => None,
    };
    Ok(Some((n0, m0)))
}

/// `V^a w_a · V^b w_b` equals a unimodular multiple of `V^{a+b} w_{a+b}`.
pub fn on_same_line(x: &CrossedElement, y: &CrossedElement, tol: f64) -> bool {
    let (xn, yn) = (x.numeric(), y.numeric());
    let yy: f64 = yn.values().map(|c| c.norm_sqr()).sum();
    if yy == 0.0 {
        return xn.is_empty();
    }
    let zero = num::complex::Complex64::new(0.0, 0.0);
    let c: num::complex::Complex64 = yn.iter().map(|(k, v)| v.conj() * xn.get(k).unwrap_or(&zero)).sum::<num::complex::Complex64>() / yy;
    if (c.norm() - 1.0).abs() > tol {
        return false;
    }
    let scaled = y.scale_complex(c).numeric();
    crate::crossed::l2_distance(&xn, &scaled) <= tol
}

/// `G_{θ,u}`, its generators and the fixed-point algebra shape.
pub fn detect_group(sys: &SkewSystem, n_max: i64) -> Result<FixedPointDescription> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let (n0, m0, method, scan_bound) = match closed_form_group(sys)? {
        Some((n0, m0)) => (n0, m0, Method::ClosedForm, None),
        None => {
            let mut n0 = None;
            let mut m0 = None;
            for n in 1..=n_max {
                let r = solve_level(sys, n)?;
                if m0.is_none() && r.measurable != Measurable::None {
                    m0 = Some(n);
                }
                if r.continuous.is_some() {
                    n0 = Some(n);
                    break;
                }
            }
            (n0, m0, Method::Scan, Some(n_max))
        }
    };
    let mut generators = BTreeMap::new();
    generators.insert(0, Element::one(sys.context()));
    if let Some(n0) = n0 {
        for l in -GENERATOR_RANGE..=GENERATOR_RANGE {
            if l == 0 {
                continue;
            }
            let w = solve_continuous(sys, n0 * l)?.ok_or_else(|| {
                Error::InvalidSystem(format!("level {} lies in G but has no solution", n0 * l))
            })?;
            generators.insert(l, w);
        }
    }
    let mut verified = true;
    for (&a, wa) in &generators {
        for (&b, wb) in &generators {
            let Some(wab) = generators.get(&(a + b)) else { continue };
            let step = n0.unwrap_or(0);
            let xa = sys.crossed(step * a, wa.clone())?;
            let xb = sys.crossed(step * b, wb.clone())?;
            let target = sys.crossed(step * (a + b), wab.clone())?;
            if !on_same_line(&xa.mul(&xb)?, &target, 1e-9) {
                verified = false;
            }
        }
    }
    Ok(FixedPointDescription {
        group_generator: n0,
        measurable_generator: m0,
        algebra_shape: if n0.is_some() { AlgebraShape::CircleAlgebra } else { AlgebraShape::TrivialScalars },
        generators,
        method,
        scan_bound,
        group_law_verified: verified,
    })
}
