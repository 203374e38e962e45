use super::{AlgebraContext, AlgebraKind, Element};
use crate::angle::Angle;
use crate::error::{Error, Result};

/// `e^{iφ} U^x V^y` with an unreduced exact phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mono {
    pub phase: Angle,
    pub exp: (i64, i64),
}

impl Mono {
    pub fn new(phase: Angle, exp: (i64, i64)) -> Self {
        Self { phase, exp }
    }

    pub fn identity(gamma: &Angle) -> Self {
        Self::new(Angle::zero(gamma.basis()), (0, 0))
    }

    /// `(U^aV^b)(U^cV^d) = e^{−iγ·bc} U^{a+c}V^{b+d}`.
    pub fn mul(&self, other: &Mono, gamma: &Angle) -> Mono {
        let (a, b) = self.exp;
        let (c, d) = other.exp;
        let mut phase = &self.phase + &other.phase;
        if b * c != 0 {
            phase = &phase - &gamma.scale(b * c);
        }
        Mono::new(phase, (a + c, b + d))
    }

    pub fn inverse(&self, gamma: &Angle) -> Mono {
        let (x, y) = self.exp;
        Mono::new(&(-&self.phase) - &gamma.scale(x * y), (-x, -y))
    }

    /// Closed form: `(e^{iφ}W)^k = e^{ikφ}·e^{−iγ·xy·k(k−1)/2} U^{kx}V^{ky}`.
    pub fn pow(&self, k: i64, gamma: &Angle) -> Mono {
        if k < 0 {
            return self.inverse(gamma).pow(-k, gamma);
        }
        let (x, y) = self.exp;
        let tri = k * (k - 1) / 2;
        let mut phase = self.phase.scale(k);
        if x * y * tri != 0 {
            phase = &phase - &gamma.scale(x * y * tri);
        }
        Mono::new(phase, (k * x, k * y))
    }

    pub fn rotated(&self, angle: &Angle) -> Mono {
        Mono::new(&self.phase + angle, self.exp)
    }
}

/// Automorphism of a coefficient algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum Automorphism {
    /// `U ↦ u_image`, `V ↦ v_image`; phases stored reduced.
    Torus { u_image: Mono, v_image: Mono },
    /// `(σf)(l) = f(l − p)` on `Z∞`.
    Shift(i64),
}

impl Automorphism {
    pub fn torus(u_image: Mono, v_image: Mono) -> Self {
        Automorphism::Torus {
            u_image: Mono::new(u_image.phase.reduced(), u_image.exp),
            v_image: Mono::new(v_image.phase.reduced(), v_image.exp),
        }
    }

    pub fn identity(ctx: &AlgebraContext) -> Self {
        match ctx.kind() {
            AlgebraKind::ZInf => Automorphism::Shift(0),
            _ => Self::rotation(ctx, Angle::zero(ctx.basis()), Angle::zero(ctx.basis())),
        }
    }

    /// `U ↦ e^{ia}U`, `V ↦ e^{ib}V`.
    pub fn rotation(ctx: &AlgebraContext, a: Angle, b: Angle) -> Self {
        let b = if matches!(ctx.kind(), AlgebraKind::Circle) { Angle::zero(ctx.basis()) } else { b };
        Self::torus(Mono::new(a, (1, 0)), Mono::new(b, (0, 1)))
    }

    /// `U ↦ e^{ia}U`, `V ↦ e^{ib}U^jV`.
    pub fn anzai(a: Angle, b: Angle, j: i64) -> Self {
        Self::torus(Mono::new(a, (1, 0)), Mono::new(b, (j, 1)))
    }

    /// Exponent matrix with the images of `U` and `V` as columns.
    pub fn matrix(&self) -> Option<[[i64; 2]; 2]> {
        match self {
            Automorphism::Torus { u_image, v_image } => {
                Some([[u_image.exp.0, v_image.exp.0], [u_image.exp.1, v_image.exp.1]])
            }
            Automorphism::Shift(_) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Automorphism::Shift(p) => *p == 0,
            Automorphism::Torus { u_image, v_image } => {
                u_image.exp == (1, 0)
                    && v_image.exp == (0, 1)
                    && u_image.phase.is_trivial_phase()
                    && v_image.phase.is_trivial_phase()
            }
        }
    }

    pub fn validate(&self, ctx: &AlgebraContext) -> Result<()> {
        match (self, ctx.kind()) {
            (Automorphism::Shift(_), AlgebraKind::ZInf) => Ok(()),
            (Automorphism::Shift(_), _) | (Automorphism::Torus { .. }, AlgebraKind::ZInf) => Err(
                Error::ContextMismatch(format!("automorphism kind does not fit the {} algebra", ctx.name())),
            ),
            (Automorphism::Torus { u_image, v_image }, kind) => {
                for m in [u_image, v_image] {
                    if !m.phase.same_basis(&Angle::zero(ctx.basis())) {
                        return Err(Error::BasisMismatch);
                    }
                }
                let [[a, b], [c, d]] = self.matrix().expect("torus");
                let det = a * d - b * c;
                if let AlgebraKind::Circle = kind {
                    if c != 0 || (a != 1 && a != -1) {
                        return Err(Error::InvalidAutomorphism("circle maps must send U to λU^{±1}".into()));
                    }
                    if v_image.exp != (0, 1) || !v_image.phase.is_trivial_phase() {
                        return Err(Error::InvalidAutomorphism("circle maps have no V image".into()));
                    }
                    return Ok(());
                }
                match det {
                    1 => Ok(()),
                    -1 if ctx.gamma().is_trivial_phase() => Ok(()),
                    -1 => Err(Error::InvalidAutomorphism(
                        "determinant −1 does not preserve UV = e^{iγ}VU for nontrivial γ".into(),
                    )),
                    _ => Err(Error::InvalidAutomorphism(format!("exponent matrix has determinant {det}"))),
                }
            }
        }
    }

    /// Image of `e^{iφ}U^xV^y`.
    pub fn apply_mono(&self, m: &Mono, gamma: &Angle) -> Mono {
        match self {
            Automorphism::Torus { u_image, v_image } => {
                let (x, y) = m.exp;
                let img = u_image.pow(x, gamma).mul(&v_image.pow(y, gamma), gamma);
                img.rotated(&m.phase)
            }
            Automorphism::Shift(_) => m.clone(),
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.validate(x.context())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Element) -> Element {
        match self {
            Automorphism::Shift(p) => x.shift_points(*p),
            Automorphism::Torus { .. } => {
                if self.is_identity() {
                    return x.clone();
                }
                let gamma = x.context().gamma();
                let zero = Angle::zero(x.context().basis());
                x.map_keys(|exp| {
                    let img = self.apply_mono(&Mono::new(zero.clone(), exp), &gamma);
                    (img.exp, img.phase)
                })
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism, ctx: &AlgebraContext) -> Automorphism {
        match (self, other) {
            (Automorphism::Shift(p), Automorphism::Shift(q)) => Automorphism::Shift(p + q),
            (Automorphism::Torus { .. }, Automorphism::Torus { u_image, v_image }) => {
                let g = ctx.gamma();
                Self::torus(self.apply_mono(u_image, &g), self.apply_mono(v_image, &g))
            }
            _ => panic!("composing automorphisms of different algebra kinds"),
        }
    }

    pub fn inverse(&self, ctx: &AlgebraContext) -> Automorphism {
        match self {
            Automorphism::Shift(p) => Automorphism::Shift(-p),
            Automorphism::Torus { .. } => {
                let g = ctx.gamma();
                let [[a, b], [c, d]] = self.matrix().expect("torus");
                let det = a * d - b * c;
                let zero = Angle::zero(ctx.basis());
                let solve = |exp: (i64, i64)| {
                    let img = self.apply_mono(&Mono::new(zero.clone(), exp), &g);
                    Mono::new(-&img.phase, exp)
                };
                let u_pre = solve((det * d, -det * c));
                let v_pre = solve((-det * b, det * a));
                Self::torus(u_pre, v_pre)
            }
        }
    }

    pub fn pow(&self, k: i64, ctx: &AlgebraContext) -> Automorphism {
        if k < 0 {
            return self.inverse(ctx).pow(-k, ctx);
        }
        if let Automorphism::Shift(p) = self {
            return Automorphism::Shift(p * k);
        }
        let mut result = Automorphism::identity(ctx);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base, ctx);
            }
            base = base.compose(&base, ctx);
            e >>= 1;
        }
        result
    }
}

/// `σ^k(x)` for a validated automorphism.
pub(crate) fn apply_power(sigma: &Automorphism, k: i64, x: &Element) -> Element {
    if k == 0 || sigma.is_identity() {
        return x.clone();
    }
    sigma.pow(k, x.context()).apply_unchecked(x)
}
