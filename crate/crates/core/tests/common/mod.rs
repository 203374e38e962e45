//! Seeded random systems and elements shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num::complex::Complex64;
use num::Rational64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use skewprod_core::{
    AlgebraContext, AlgebraKind, Angle, Automorphism, CrossedElement, Element, Mono, PhasedScalar, SkewSystem,
    SymbolBasis,
};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rational(rng: &mut StdRng, max_den: i64) -> Rational64 {
    let d = rng.gen_range(1..=max_den);
    Rational64::new(rng.gen_range(-2 * d..=2 * d), d)
}

fn sym(basis: &Arc<SymbolBasis>, name: &str, k: i64) -> Angle {
    Angle::symbol(basis, name, Rational64::from_integer(k)).unwrap()
}

/// Rational part plus small multiples of `s1` and `s2`.
pub fn angle(rng: &mut StdRng, basis: &Arc<SymbolBasis>) -> Angle {
    let mut a = Angle::turns(basis, rational(rng, 6));
    for name in ["s1", "s2"] {
        if rng.gen_bool(0.5) {
            a = &a + &sym(basis, name, rng.gen_range(-2..=2));
        }
    }
    a
}

pub fn complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn scalar(rng: &mut StdRng, basis: &Arc<SymbolBasis>) -> PhasedScalar {
    PhasedScalar::term(angle(rng, basis), complex(rng))
}

/// A few random terms with `|exponents| ≤ 2`, or `Z∞` deviations in `[−3, 3]`.
pub fn element(rng: &mut StdRng, ctx: &Arc<AlgebraContext>, terms: usize) -> Element {
    let basis = ctx.basis();
    if !ctx.is_torus() {
        let dev: BTreeMap<i64, PhasedScalar> =
            (0..terms).map(|_| (rng.gen_range(-3..=3), scalar(rng, basis))).collect();
        return Element::zinf(ctx, scalar(rng, basis), dev).unwrap();
    }
    let circle = matches!(ctx.kind(), AlgebraKind::Circle);
    let t: Vec<_> = (0..terms)
        .map(|_| {
            let m = rng.gen_range(-2..=2);
            let n = if circle { 0 } else { rng.gen_range(-2..=2) };
            ((m, n), scalar(rng, basis))
        })
        .collect();
    Element::from_terms(ctx, t).unwrap()
}

/// `Σ V^k a_k` over modes `|k| ≤ 2`.
pub fn crossed(rng: &mut StdRng, sys: &SkewSystem, modes: usize) -> CrossedElement {
    let m: Vec<_> = (0..modes).map(|_| (rng.gen_range(-2..=2), element(rng, sys.context(), 2))).collect();
    CrossedElement::from_modes(sys.context(), sys.alpha(), m).unwrap()
}

/// Irrational rotation angle `k·s + r` with `k ≠ 0`.
fn irrational(rng: &mut StdRng, basis: &Arc<SymbolBasis>, name: &str) -> Angle {
    let k = [1, 2, -1][rng.gen_range(0..3)];
    &sym(basis, name, k) + &Angle::turns(basis, rational(rng, 4))
}

/// Circle rotation, `α = id`, `u = e^{iψ}U^r`.
pub fn circle_system(rng: &mut StdRng, scalar_cocycle: bool) -> SkewSystem {
    let basis = SymbolBasis::standard();
    let ctx = AlgebraContext::circle(&basis);
    let a = irrational(rng, &basis, "s1");
    let theta = Automorphism::rotation(&ctx, a, Angle::zero(&basis));
    let r = if scalar_cocycle { 0 } else { rng.gen_range(-2..=2) };
    let u = Element::from_mono(&ctx, &Mono::new(angle(rng, &basis), (r, 0))).unwrap();
    SkewSystem::new(&ctx, theta, Automorphism::identity(&ctx), u, None).unwrap()
}

fn nc_context(rng: &mut StdRng, basis: &Arc<SymbolBasis>) -> Arc<AlgebraContext> {
    let gamma = &sym(basis, "s3", 1) + &Angle::turns(basis, rational(rng, 5));
    AlgebraContext::nc_torus(basis, gamma).unwrap()
}

/// `U ↦ e^{ia}U`, `V ↦ e^{ib}V` with independent `a`, `b`; rotation `α`;
/// scalar `u`.
pub fn nc_rotation_system(rng: &mut StdRng) -> SkewSystem {
    let basis = SymbolBasis::standard();
    let ctx = nc_context(rng, &basis);
    let theta = Automorphism::rotation(&ctx, irrational(rng, &basis, "s1"), irrational(rng, &basis, "s2"));
    let alpha = Automorphism::rotation(&ctx, Angle::turns(&basis, rational(rng, 5)), angle(rng, &basis));
    let u = Element::phase(&ctx, angle(rng, &basis));
    SkewSystem::new(&ctx, theta, alpha, u, None).unwrap()
}

/// Anzai `V ↦ e^{ib}UV` on `A_γ` with `α(U) = e^{−iγ}U`, `α(V) = e^{ic}V` and
/// `u = e^{iψ}U`, or with a rotation `α` and scalar `u`.
pub fn nc_anzai_system(rng: &mut StdRng, scalar_cocycle: bool) -> SkewSystem {
    let basis = SymbolBasis::standard();
    let ctx = nc_context(rng, &basis);
    let theta = Automorphism::anzai(irrational(rng, &basis, "s1"), angle(rng, &basis), 1);
    let (alpha, u) = if scalar_cocycle {
        let alpha = Automorphism::rotation(&ctx, Angle::zero(&basis), Angle::turns(&basis, rational(rng, 5)));
        (alpha, Element::phase(&ctx, angle(rng, &basis)))
    } else {
        let alpha = Automorphism::rotation(&ctx, -&ctx.gamma(), angle(rng, &basis));
        (alpha, Element::from_mono(&ctx, &Mono::new(angle(rng, &basis), (1, 0))).unwrap())
    };
    SkewSystem::new(&ctx, theta, alpha, u, None).unwrap()
}

/// Unitary function on `Z∞` with phases at `∞` and at a few points.
pub fn zinf_unitary(rng: &mut StdRng, ctx: &Arc<AlgebraContext>) -> Element {
    let basis = ctx.basis();
    let inf = PhasedScalar::phase(angle(rng, basis));
    let dev: BTreeMap<i64, PhasedScalar> = (0..rng.gen_range(1..=3))
        .map(|_| (rng.gen_range(-3..=3), PhasedScalar::phase(angle(rng, basis)).sub(&inf)))
        .collect();
    Element::zinf(ctx, inf, dev).unwrap()
}

/// Shift by `p ∈ {±1, ±2}`; `α` a shift (identity when `classical`).
pub fn zinf_system(rng: &mut StdRng, classical: bool) -> SkewSystem {
    let basis = SymbolBasis::standard();
    let ctx = AlgebraContext::zinf(&basis);
    let p = [1, -1, 2, -2][rng.gen_range(0..4)];
    let q = if classical { 0 } else { rng.gen_range(-1..=1) };
    let u = zinf_unitary(rng, &ctx);
    SkewSystem::new(&ctx, Automorphism::Shift(p), Automorphism::Shift(q), u, None).unwrap()
}

/// Any supported family.
pub fn any_system(rng: &mut StdRng) -> SkewSystem {
    match rng.gen_range(0..6) {
        0 => circle_system(rng, true),
        1 => circle_system(rng, false),
        2 => nc_rotation_system(rng),
        3 => nc_anzai_system(rng, true),
        4 => nc_anzai_system(rng, false),
        _ => {
            let classical = rng.gen_bool(0.5);
            zinf_system(rng, classical)
        }
    }
}

/// Character-type systems: `u` a unitary monomial over a torus family.
pub fn character_system(rng: &mut StdRng) -> SkewSystem {
    match rng.gen_range(0..4) {
        0 => circle_system(rng, true),
        1 => circle_system(rng, false),
        2 => nc_rotation_system(rng),
        _ => nc_anzai_system(rng, true),
    }
}
