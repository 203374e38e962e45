//! Built-in example systems over the standard symbol basis.

use num::Rational64;

use crate::algebra::{AlgebraContext, Automorphism, Element, Mono};
use crate::angle::{Angle, SymbolBasis};
use crate::error::{Error, Result};
use crate::phase::PhasedScalar;
use crate::skew::SkewSystem;

/// Names accepted by [`by_name`].
pub const PRESET_NAMES: [&str; 5] =
    ["double-rotation", "anzai-inverse", "zinf", "nctorus-independent", "nctorus-dependent"];

fn sym(basis: &std::sync::Arc<SymbolBasis>, name: &str) -> Angle {
    Angle::symbol(basis, name, Rational64::from_integer(1)).expect("standard symbol")
}

/// Circle rotation by `2πs₁` with the constant cocycle `e^{2πi/l}`, `α = id`.
pub fn double_rotation(l: i64) -> Result<SkewSystem> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be nonzero".into()));
    }
    let basis = SymbolBasis::standard();
    let ctx = AlgebraContext::circle(&basis);
    let theta = Automorphism::rotation(&ctx, sym(&basis, "s1"), Angle::zero(&basis));
    let u = Element::phase(&ctx, Angle::turns(&basis, Rational64::new(1, l)));
    SkewSystem::new(&ctx, theta, Automorphism::identity(&ctx), u, None)
}

/// `u = e^{−iθ}` against the rotation by `θ = 2πs₁`, so `U` solves level 1.
/// The noncommutative variant lives on `A_γ` (`γ = 2πs₃`) with a rotation
/// `α`.
pub fn anzai_inverse(noncommutative: bool) -> Result<SkewSystem> {
    let basis = SymbolBasis::standard();
    let s1 = sym(&basis, "s1");
    let u_phase = -&s1;
    if noncommutative {
        let ctx = AlgebraContext::nc_torus(&basis, sym(&basis, "s3"))?;
        let theta = Automorphism::rotation(&ctx, s1, sym(&basis, "s2"));
        let alpha = Automorphism::rotation(&ctx, Angle::zero(&basis), Angle::turns(&basis, Rational64::new(1, 5)));
        let u = Element::phase(&ctx, u_phase);
        SkewSystem::new(&ctx, theta, alpha, u, None)
    } else {
        let ctx = AlgebraContext::circle(&basis);
        let theta = Automorphism::rotation(&ctx, s1, Angle::zero(&basis));
        let u = Element::phase(&ctx, u_phase);
        SkewSystem::new(&ctx, theta, Automorphism::identity(&ctx), u, None)
    }
}

/// Shift `l ↦ l + 1` on `C(Z∞)` with `f(0) = β` and `f = 1` elsewhere;
/// `β` defaults to `e^{2πis₂}`.
pub fn zinf(beta: Option<Angle>) -> Result<SkewSystem> {
    let basis = SymbolBasis::standard();
    let ctx = AlgebraContext::zinf(&basis);
    let beta = beta.unwrap_or_else(|| sym(&basis, "s2"));
    let u = Element::zinf_point_value(&ctx, 0, PhasedScalar::phase(beta))?;
    SkewSystem::new(&ctx, Automorphism::Shift(-1), Automorphism::Shift(0), u, None)
}

/// `A_γ` with `γ = 2πs₃`, Anzai `U ↦ e^{2πis₁}U`, `V ↦ UV`,
/// `α(V) = e^{2πi/5}V` and constant `u = e^{iφ}`: `φ = 2πs₂` (independent)
/// or `φ = 2πs₁` (dependent).
pub fn nctorus(dependent: bool) -> Result<SkewSystem> {
    let basis = SymbolBasis::standard();
    let ctx = AlgebraContext::nc_torus(&basis, sym(&basis, "s3"))?;
    let theta = Automorphism::torus(Mono::new(sym(&basis, "s1"), (1, 0)), Mono::new(Angle::zero(&basis), (1, 1)));
    let alpha = Automorphism::rotation(&ctx, Angle::zero(&basis), Angle::turns(&basis, Rational64::new(1, 5)));
    let phi = sym(&basis, if dependent { "s1" } else { "s2" });
    let u = Element::phase(&ctx, phi);
    SkewSystem::new(&ctx, theta, alpha, u, None)
}

/// Preset by name with default parameters.
pub fn by_name(name: &str) -> Result<SkewSystem> {
    match name {
        "double-rotation" => double_rotation(3),
        "anzai-inverse" => anzai_inverse(false),
        "zinf" => zinf(None),
        "nctorus-independent" => nctorus(false),
        "nctorus-dependent" => nctorus(true),
        other => Err(Error::InvalidArgument(format!("unknown preset {other:?}"))),
    }
}
