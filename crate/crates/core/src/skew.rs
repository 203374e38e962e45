//! Skew-product automorphisms `Φ_{θ,u}` of `A ⋊_α Z`.
//!
//! `Φ(a) = θ(a)` on coefficients and `Φ(V) = uV`, which is well defined when
//! `u·(α∘θ)(a) = (θ∘α)(a)·u` for all `a`. On a Fourier monomial
//! `Φ(V^k a) = (uV)^k θ(a) = V^k α^{−k}(u_k)·θ(a)` with the cocycle `u_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{apply_power, generators, AlgebraContext, AlgebraKind, Automorphism, Element};
use crate::angle::{solve_phase_relation, Angle};
use crate::crossed::CrossedElement;
use crate::error::{Error, Result};

/// Residual tolerance for the exact-phase identities checked on systems.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Metadata carried alongside a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    pub base_uniquely_ergodic: bool,
    pub omega0_faithful: bool,
    pub support_central: bool,
}

/// Base dynamics `(A, θ, ω₀)` for which unique ergodicity is decided here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseFamily {
    /// `U ↦ e^{ia}U` on the circle.
    CircleRotation,
    /// `U ↦ e^{ia}U`, `V ↦ e^{ib}V`.
    TorusRotation,
    /// `U ↦ e^{ia}U`, `V ↦ e^{ib}U^jV` with `j ≠ 0`.
    Anzai,
    /// Shift on `Z∞` with `δ∞`.
    ZInfShift,
    /// Anything else; unique ergodicity is taken from the asserted flag.
    Other,
}

/// Recognize the base family and decide unique ergodicity when known.
pub fn base_family(ctx: &AlgebraContext, theta: &Automorphism) -> (BaseFamily, Option<bool>) {
    match theta {
        Automorphism::Shift(p) => (BaseFamily::ZInfShift, Some(*p != 0)),
        Automorphism::Torus { u_image, v_image } => {
            let [[a, b], [c, d]] = theta.matrix().expect("torus");
            match (ctx.kind(), [[a, b], [c, d]]) {
                (AlgebraKind::Circle, [[1, _], [0, _]]) => {
                    (BaseFamily::CircleRotation, Some(u_image.phase.order().is_none()))
                }
                (AlgebraKind::Circle, _) => (BaseFamily::Other, Some(false)),
                (_, [[1, 0], [0, 1]]) => {
                    let rel = solve_phase_relation(&Angle::zero(ctx.basis()), &[u_image.phase.clone(), v_image.phase.clone()])
                        .expect("same basis");
                    let ue = !rel.is_some_and(|s| !s.kernel.is_empty());
                    (BaseFamily::TorusRotation, Some(ue))
                }
                (_, [[1, j], [0, 1]]) if j != 0 => (BaseFamily::Anzai, Some(u_image.phase.has_symbols())),
                _ => (BaseFamily::Other, None),
            }
        }
    }
}

/// One failed identity with its residual.
#[derive(Debug, Clone)]
pub struct ValidationFailure {
    pub identity: String,
    pub residual: Option<Element>,
    pub detail: String,
}

/// Outcome of [`validate_parts`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, identity: impl Into<String>, residual: Option<Element>, detail: impl Into<String>) {
        self.failures.push(ValidationFailure { identity: identity.into(), residual, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.failures.iter().map(|x| format!("{} ({})", x.identity, x.detail)).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Check unitarity of `u`, the intertwining relation on generators, and
/// `θ`-invariance of the reference state on generators.
pub fn validate_parts(
    ctx: &Arc<AlgebraContext>,
    theta: &Automorphism,
    alpha: &Automorphism,
    u: &Element,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (name, sigma) in [("θ", theta), ("α", alpha)] {
        if let Err(e) = sigma.validate(ctx) {
            report.fail(format!("{name} is an automorphism"), None, e.to_string());
        }
    }
    if !AlgebraContext::same(ctx, u.context()) {
        report.fail("u ∈ A", None, "u lives in a different algebra");
    }
    if !report.is_valid() {
        return report;
    }
    let one = Element::one(ctx);
    let uus = u.mul_unchecked(&u.adjoint());
    let usu = u.adjoint().mul_unchecked(u);
    for (name, prod) in [("u·u* = 1", uus), ("u*·u = 1", usu)] {
        let d = prod.distance(&one);
        if d > IDENTITY_TOL {
            report.fail(name, Some(prod.add_unchecked(&one, true)), format!("residual {d:.3e}"));
        }
    }
    for (name, g) in generators(ctx) {
        let lhs = u.mul_unchecked(&alpha.apply_unchecked(&theta.apply_unchecked(&g)));
        let rhs = theta.apply_unchecked(&alpha.apply_unchecked(&g)).mul_unchecked(u);
        let d = lhs.distance(&rhs);
        if d > IDENTITY_TOL {
            report.fail(
                format!("u·α(θ({name})) = θ(α({name}))·u"),
                Some(lhs.add_unchecked(&rhs, true)),
                format!("residual {d:.3e}"),
            );
        }
        let drift = (theta.apply_unchecked(&g).state() - g.state()).norm();
        if drift > IDENTITY_TOL {
            report.fail(format!("ω₀(θ({name})) = ω₀({name})"), None, format!("residual {drift:.3e}"));
        }
    }
    report
}

/// `(A ⋊_α Z, Φ_{θ,u})` with validated data.
pub struct SkewSystem {
    ctx: Arc<AlgebraContext>,
    theta: Arc<Automorphism>,
    alpha: Arc<Automorphism>,
    u: Element,
    flags: Flags,
    family: BaseFamily,
    steps: Mutex<BTreeMap<i64, Element>>,
    inverse: OnceLock<Box<SkewSystem>>,
}

impl Clone for SkewSystem {
    fn clone(&self) -> Self {
        Self::assemble(self.ctx.clone(), self.theta.clone(), self.alpha.clone(), self.u.clone(), self.flags, self.family)
    }
}

impl fmt::Debug for SkewSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkewSystem")
            .field("algebra", &self.ctx.name())
            .field("theta", &self.theta)
            .field("alpha", &self.alpha)
            .field("u", &self.u)
            .field("flags", &self.flags)
            .finish()
    }
}

impl SkewSystem {
    /// Validate and build. `asserted_base_ue` is used only for base
    /// families this crate cannot decide; known non-uniquely-ergodic bases
    /// are refused with [`Error::Hypothesis`].
    pub fn new(
        ctx: &Arc<AlgebraContext>,
        theta: Automorphism,
        alpha: Automorphism,
        u: Element,
        asserted_base_ue: Option<bool>,
    ) -> Result<Self> {
        let report = validate_parts(ctx, &theta, &alpha, &u);
        if !report.is_valid() {
            return Err(Error::InvalidSystem(report.to_string()));
        }
        let (family, known) = base_family(ctx, &theta);
        if known == Some(false) {
            return Err(Error::Hypothesis(format!(
                "the base automorphism ({family:?}) is not uniquely ergodic"
            )));
        }
        let flags = Flags {
            base_uniquely_ergodic: known.or(asserted_base_ue).unwrap_or(false),
            omega0_faithful: ctx.omega0_faithful(),
            support_central: ctx.support_central(),
        };
        Ok(Self::assemble(ctx.clone(), Arc::new(theta), Arc::new(alpha), u, flags, family))
    }

    fn assemble(
        ctx: Arc<AlgebraContext>,
        theta: Arc<Automorphism>,
        alpha: Arc<Automorphism>,
        u: Element,
        flags: Flags,
        family: BaseFamily,
    ) -> Self {
        Self { ctx, theta, alpha, u, flags, family, steps: Mutex::new(BTreeMap::new()), inverse: OnceLock::new() }
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn theta(&self) -> &Arc<Automorphism> {
        &self.theta
    }

    pub fn alpha(&self) -> &Arc<Automorphism> {
        &self.alpha
    }

    pub fn u(&self) -> &Element {
        &self.u
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn family(&self) -> BaseFamily {
        self.family
    }

    /// Re-run [`validate_parts`] on the stored data.
    pub fn validate(&self) -> ValidationReport {
        validate_parts(&self.ctx, &self.theta, &self.alpha, &self.u)
    }

    /// `α` acts trivially and `A` is commutative.
    pub fn is_classical(&self) -> bool {
        self.ctx.is_commutative() && self.alpha.is_identity()
    }

    /// `V^k a` over this system's crossed product.
    pub fn crossed(&self, k: i64, a: Element) -> Result<CrossedElement> {
        CrossedElement::monomial(&self.alpha, k, a)
    }

    pub fn crossed_zero(&self) -> CrossedElement {
        CrossedElement::zero(&self.ctx, &self.alpha).expect("validated α")
    }

    /// `u_0 = I`, `u_n = u·α(u)···α^{n−1}(u)`, `u_{−n} = α^{−1}(u*)···α^{−n}(u*)`.
    pub fn cocycle(&self, n: i64) -> Element {
        if n == 0 {
            return Element::one(&self.ctx);
        }
        let (step, mut cur) = if n > 0 {
            (Arc::clone(&self.alpha), self.u.clone())
        } else {
            let inv = Arc::new(self.alpha.inverse(&self.ctx));
            let first = inv.apply_unchecked(&self.u.adjoint());
            (inv, first)
        };
        let mut acc = cur.clone();
        for _ in 1..n.abs() {
            cur = step.apply_unchecked(&cur);
            acc = acc.mul_unchecked(&cur);
        }
        acc
    }

    /// `α^{−k}(u_k)`, the mode-`k` multiplier of `Φ`.
    pub fn step_coefficient(&self, k: i64) -> Element {
        if let Some(c) = self.steps.lock().expect("cache lock").get(&k) {
            return c.clone();
        }
        let c = apply_power(&self.alpha, -k, &self.cocycle(k));
        self.steps.lock().expect("cache lock").insert(k, c.clone());
        c
    }

    fn check_element(&self, x: &CrossedElement) -> Result<()> {
        AlgebraContext::check_same(&self.ctx, x.context())?;
        if **x.alpha() != *self.alpha {
            return Err(Error::ContextMismatch("element lives over a different α".into()));
        }
        Ok(())
    }

    /// `Φ(x)`.
    pub fn apply(&self, x: &CrossedElement) -> Result<CrossedElement> {
        self.check_element(x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &CrossedElement) -> CrossedElement {
        let modes = x
            .modes()
            .iter()
            .map(|(&k, a)| (k, self.step_coefficient(k).mul_unchecked(&self.theta.apply_unchecked(a))))
            .collect();
        x.with_modes(modes)
    }

    /// `Φ_{θ^{−1}, θ^{−1}(u*)}`.
    pub fn inverse_system(&self) -> &SkewSystem {
        self.inverse.get_or_init(|| {
            let theta_inv = self.theta.inverse(&self.ctx);
            let u = theta_inv.apply_unchecked(&self.u.adjoint());
            let (family, _) = base_family(&self.ctx, &theta_inv);
            Box::new(Self::assemble(
                self.ctx.clone(),
                Arc::new(theta_inv),
                self.alpha.clone(),
                u,
                self.flags,
                family,
            ))
        })
    }

    /// `Φ^{−1}(x)`.
    pub fn inverse_apply(&self, x: &CrossedElement) -> Result<CrossedElement> {
        self.inverse_system().apply(x)
    }

    /// `Φ^j(x)`, any sign of `j`.
    pub fn power(&self, x: &CrossedElement, j: i64) -> Result<CrossedElement> {
        self.check_element(x)?;
        let sys = if j >= 0 { self } else { self.inverse_system() };
        let mut y = x.clone();
        for _ in 0..j.abs() {
            y = sys.apply_unchecked(&y);
        }
        Ok(y)
    }

    /// `|ω(Φ(x)) − ω(x)|`.
    pub fn state_invariance_residual(&self, x: &CrossedElement) -> Result<f64> {
        Ok((self.apply(x)?.state() - x.state()).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::SymbolBasis;
    use crate::phase::PhasedScalar;
    use num::complex::Complex64;
    use num::Rational64;

    fn sym(b: &Arc<SymbolBasis>, name: &str) -> Angle {
        Angle::symbol(b, name, Rational64::from_integer(1)).unwrap()
    }

    fn nc_final_example() -> SkewSystem {
        let b = SymbolBasis::standard();
        let ctx = AlgebraContext::nc_torus(&b, sym(&b, "s3")).unwrap();
        let theta = Automorphism::anzai(sym(&b, "s1"), Angle::zero(&b), 1);
        let alpha = Automorphism::rotation(&ctx, Angle::zero(&b), Angle::turns(&b, Rational64::new(1, 5)));
        let u = Element::phase(&ctx, sym(&b, "s2"));
        SkewSystem::new(&ctx, theta, alpha, u, None).unwrap()
    }

    #[test]
    fn commuting_rotations_with_trivial_u_are_valid() {
        let b = SymbolBasis::standard();
        let ctx = AlgebraContext::nc_torus(&b, sym(&b, "s3")).unwrap();
        let theta = Automorphism::rotation(&ctx, sym(&b, "s1"), sym(&b, "s2"));
        let alpha = Automorphism::rotation(&ctx, sym(&b, "s2"), Angle::zero(&b));
        assert!(validate_parts(&ctx, &theta, &alpha, &Element::one(&ctx)).is_valid());
    }

    #[test]
    fn scalar_intertwiner_is_valid() {
        assert!(nc_final_example().validate().is_valid());
    }

    #[test]
    fn non_unitary_u_is_reported() {
        let b = SymbolBasis::standard();
        let ctx = AlgebraContext::circle(&b);
        let theta = Automorphism::rotation(&ctx, sym(&b, "s1"), Angle::zero(&b));
        let two = Element::scalar(&ctx, PhasedScalar::complex(&b, Complex64::new(2.0, 0.0)));
        let report = validate_parts(&ctx, &theta, &Automorphism::identity(&ctx), &two);
        assert!(!report.is_valid());
        assert!(report.failures[0].identity.contains("u·u*"));
        assert!(matches!(
            SkewSystem::new(&ctx, theta, Automorphism::identity(&ctx), two, None),
            Err(Error::InvalidSystem(_))
        ));
    }

    #[test]
    fn rational_rotation_base_is_refused() {
        let b = SymbolBasis::standard();
        let ctx = AlgebraContext::circle(&b);
        let theta = Automorphism::rotation(&ctx, Angle::turns(&b, Rational64::new(1, 4)), Angle::zero(&b));
        let r = SkewSystem::new(&ctx, theta, Automorphism::identity(&ctx), Element::one(&ctx), None);
        assert!(matches!(r, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn cocycle_examples() {
        let sys = nc_final_example();
        let ctx = sys.context().clone();
        assert!(sys.cocycle(0).is_one(0.0));
        let u = sys.u().clone();
        assert_eq!(sys.cocycle(2), u.mul(&sys.alpha().apply(&u).unwrap()).unwrap());
        let inv = sys.alpha().inverse(&ctx);
        assert_eq!(sys.cocycle(-1), inv.apply(&u.adjoint()).unwrap());
    }

    #[test]
    fn phi_on_generators() {
        let sys = nc_final_example();
        let ctx = sys.context().clone();
        let a = sys.crossed(0, Element::v(&ctx)).unwrap();
        assert_eq!(sys.apply(&a).unwrap().coeff(0), sys.theta().apply(&Element::v(&ctx)).unwrap());
        let v = sys.crossed(1, Element::one(&ctx)).unwrap();
        let inv = sys.alpha().inverse(&ctx);
        assert_eq!(sys.apply(&v).unwrap().coeff(1), inv.apply(sys.u()).unwrap());
        // Φ(V) = uV
        let uv = sys.crossed(0, sys.u().clone()).unwrap().mul(&v).unwrap();
        assert_eq!(sys.apply(&v).unwrap(), uv);
    }

    #[test]
    fn inverse_round_trip() {
        let sys = nc_final_example();
        let ctx = sys.context().clone();
        let x = sys
            .crossed(2, Element::u(&ctx))
            .unwrap()
            .add(&sys.crossed(-1, Element::v(&ctx)).unwrap())
            .unwrap();
        assert_eq!(sys.inverse_apply(&sys.apply(&x).unwrap()).unwrap(), x);
        assert_eq!(sys.power(&x, 0).unwrap(), x);
        assert_eq!(sys.power(&sys.power(&x, 3).unwrap(), -3).unwrap(), x);
        assert!(sys.state_invariance_residual(&x).unwrap() < 1e-12);
    }
}
