use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::complex::Complex64;

use super::{AlgebraContext, AlgebraKind, Mono};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::phase::PhasedScalar;

/// Coordinate of a basis vector used for numeric (ℓ¹, ℓ²) comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    /// `U^m V^n`.
    Mono(i64, i64),
    /// Value at `∞` of a `Z∞` function.
    Infinity,
    /// Deviation from the value at `∞` at the point `l`.
    Point(i64),
}

#[derive(Clone, PartialEq)]
enum Data {
    Torus(BTreeMap<(i64, i64), PhasedScalar>),
    ZInf { inf: PhasedScalar, dev: BTreeMap<i64, PhasedScalar> },
}

/// Finitely supported element of a coefficient algebra.
///
/// Torus elements are `Σ c_{m,n} U^m V^n` in normal order. `Z∞` elements are
/// `f(l) = f(∞) + dev(l)` with finitely many deviations.
#[derive(Clone)]
pub struct Element {
    ctx: Arc<AlgebraContext>,
    data: Data,
}

/// Decomposition of `λ·U^m V^n` (or a constant on `Z∞`).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarMonomial {
    pub modulus: f64,
    /// Exact part of the phase.
    pub phase: Angle,
    /// Remaining unit complex factor of the scalar.
    pub unit: Complex64,
    /// `None` for constants on `Z∞`.
    pub exp: Option<(i64, i64)>,
}

impl Element {
    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        let data = match ctx.kind() {
            AlgebraKind::ZInf => Data::ZInf { inf: PhasedScalar::zero(), dev: BTreeMap::new() },
            _ => Data::Torus(BTreeMap::new()),
        };
        Self { ctx: ctx.clone(), data }
    }

    /// `s·1`.
    pub fn scalar(ctx: &Arc<AlgebraContext>, s: PhasedScalar) -> Self {
        let mut x = Self::zero(ctx);
        match &mut x.data {
            Data::Torus(t) => {
                if !s.is_zero() {
                    t.insert((0, 0), s);
                }
            }
            Data::ZInf { inf, .. } => *inf = s,
        }
        x
    }

    pub fn one(ctx: &Arc<AlgebraContext>) -> Self {
        Self::scalar(ctx, PhasedScalar::one(ctx.basis()))
    }

    /// `e^{i·phase}·1`.
    pub fn phase(ctx: &Arc<AlgebraContext>, phase: Angle) -> Self {
        Self::scalar(ctx, PhasedScalar::phase(phase))
    }

    /// `s·U^m V^n`.
    pub fn monomial(ctx: &Arc<AlgebraContext>, m: i64, n: i64, s: PhasedScalar) -> Result<Self> {
        match ctx.kind() {
            AlgebraKind::ZInf => return Err(Error::ContextMismatch("Z∞ has no monomials".into())),
            AlgebraKind::Circle if n != 0 => {
                return Err(Error::ContextMismatch("the circle algebra has no V generator".into()))
            }
            _ => {}
        }
        let mut t = BTreeMap::new();
        if !s.is_zero() {
            t.insert((m, n), s);
        }
        Ok(Self { ctx: ctx.clone(), data: Data::Torus(t) })
    }

    pub fn from_mono(ctx: &Arc<AlgebraContext>, m: &Mono) -> Result<Self> {
        Self::monomial(ctx, m.exp.0, m.exp.1, PhasedScalar::phase(m.phase.clone()))
    }

    pub fn from_terms(ctx: &Arc<AlgebraContext>, terms: impl IntoIterator<Item = ((i64, i64), PhasedScalar)>) -> Result<Self> {
        let mut x = Self::zero(ctx);
        for ((m, n), s) in terms {
            x = x.add(&Self::monomial(ctx, m, n, s)?)?;
        }
        Ok(x)
    }

    /// The generator `U`.
    pub fn u(ctx: &Arc<AlgebraContext>) -> Self {
        Self::monomial(ctx, 1, 0, PhasedScalar::one(ctx.basis())).expect("torus context")
    }

    /// The generator `V` of `A_γ`.
    pub fn v(ctx: &Arc<AlgebraContext>) -> Self {
        Self::monomial(ctx, 0, 1, PhasedScalar::one(ctx.basis())).expect("nc torus context")
    }

    /// `Z∞` function with the given value at `∞` and deviations.
    pub fn zinf(ctx: &Arc<AlgebraContext>, inf: PhasedScalar, dev: BTreeMap<i64, PhasedScalar>) -> Result<Self> {
        if !matches!(ctx.kind(), AlgebraKind::ZInf) {
            return Err(Error::ContextMismatch("not a Z∞ context".into()));
        }
        let dev = dev.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        Ok(Self { ctx: ctx.clone(), data: Data::ZInf { inf, dev } })
    }

    /// `Z∞` function equal to `value` at `l` and `1` elsewhere.
    pub fn zinf_point_value(ctx: &Arc<AlgebraContext>, l: i64, value: PhasedScalar) -> Result<Self> {
        let one = PhasedScalar::one(ctx.basis());
        let dev = BTreeMap::from([(l, value.sub(&one))]);
        Self::zinf(ctx, one, dev)
    }

    /// Indicator of the point `l` in `Z∞`.
    pub fn indicator(ctx: &Arc<AlgebraContext>, l: i64) -> Self {
        let dev = BTreeMap::from([(l, PhasedScalar::one(ctx.basis()))]);
        Self::zinf(ctx, PhasedScalar::zero(), dev).expect("Z∞ context")
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Torus(t) => t.is_empty(),
            Data::ZInf { inf, dev } => inf.is_zero() && dev.is_empty(),
        }
    }

    /// Torus coefficients `(m, n) ↦ c`.
    pub fn torus_terms(&self) -> Option<&BTreeMap<(i64, i64), PhasedScalar>> {
        match &self.data {
            Data::Torus(t) => Some(t),
            Data::ZInf { .. } => None,
        }
    }

    /// `Z∞` parts `(f(∞), deviations)`.
    pub fn zinf_parts(&self) -> Option<(&PhasedScalar, &BTreeMap<i64, PhasedScalar>)> {
        match &self.data {
            Data::ZInf { inf, dev } => Some((inf, dev)),
            Data::Torus(_) => None,
        }
    }

    /// `f(l)` for a `Z∞` element.
    pub fn value_at(&self, l: i64) -> Option<PhasedScalar> {
        let (inf, dev) = self.zinf_parts()?;
        Some(match dev.get(&l) {
            Some(d) => inf.add(d),
            None => inf.clone(),
        })
    }

    pub fn coeff(&self, m: i64, n: i64) -> PhasedScalar {
        self.torus_terms().and_then(|t| t.get(&(m, n)).cloned()).unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        AlgebraContext::check_same(&self.ctx, &other.ctx)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        AlgebraContext::check_same(&self.ctx, &other.ctx)?;
        Ok(self.add_unchecked(other, true))
    }

    pub(crate) fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let comb = |a: &PhasedScalar, b: &PhasedScalar| if negate { a.sub(b) } else { a.add(b) };
        let data = match (&self.data, &other.data) {
            (Data::Torus(a), Data::Torus(b)) => {
                let mut out = a.clone();
                for (k, s) in b {
                    let v = comb(out.get(k).unwrap_or(&PhasedScalar::zero()), s);
                    if v.is_zero() {
                        out.remove(k);
                    } else {
                        out.insert(*k, v);
                    }
                }
                Data::Torus(out)
            }
            (Data::ZInf { inf: ia, dev: da }, Data::ZInf { inf: ib, dev: db }) => {
                let mut dev = da.clone();
                for (k, s) in db {
                    let v = comb(dev.get(k).unwrap_or(&PhasedScalar::zero()), s);
                    if v.is_zero() {
                        dev.remove(k);
                    } else {
                        dev.insert(*k, v);
                    }
                }
                Data::ZInf { inf: comb(ia, ib), dev }
            }
            _ => unreachable!("context checked"),
        };
        Self { ctx: self.ctx.clone(), data }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        AlgebraContext::check_same(&self.ctx, &other.ctx)?;
        Ok(self.mul_unchecked(other))
    }

    /// Torus: `(U^mV^n)(U^pV^q) = e^{−iγ·np} U^{m+p}V^{n+q}`. `Z∞`: pointwise.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let data = match (&self.data, &other.data) {
            (Data::Torus(a), Data::Torus(b)) => {
                let gamma = self.ctx.gamma();
                let twisted = !gamma.is_trivial_phase();
                let mut out: BTreeMap<(i64, i64), PhasedScalar> = BTreeMap::new();
                for (&(m, n), c) in a {
                    for (&(p, q), d) in b {
                        let mut s = c.mul(d);
                        if twisted && n * p != 0 {
                            s = s.rotate(&gamma.scale(-(n * p)));
                        }
                        let key = (m + p, n + q);
                        let v = out.remove(&key).unwrap_or_default().add(&s);
                        if !v.is_zero() {
                            out.insert(key, v);
                        }
                    }
                }
                Data::Torus(out)
            }
            (Data::ZInf { inf: ia, dev: da }, Data::ZInf { inf: ib, dev: db }) => {
                let inf = ia.mul(ib);
                let mut dev = BTreeMap::new();
                for &l in da.keys().chain(db.keys()) {
                    if dev.contains_key(&l) {
                        continue;
                    }
                    let fa = da.get(&l).map_or_else(|| ia.clone(), |d| ia.add(d));
                    let fb = db.get(&l).map_or_else(|| ib.clone(), |d| ib.add(d));
                    dev.insert(l, fa.mul(&fb).sub(&inf));
                }
                dev.retain(|_, s| !s.is_zero());
                Data::ZInf { inf, dev }
            }
            _ => unreachable!("context checked"),
        };
        Self { ctx: self.ctx.clone(), data }
    }

    /// `(c U^mV^n)* = c̄·e^{−iγ·mn} U^{−m}V^{−n}`; pointwise conjugate on `Z∞`.
    pub fn adjoint(&self) -> Self {
        let data = match &self.data {
            Data::Torus(a) => {
                let gamma = self.ctx.gamma();
                Data::Torus(
                    a.iter()
                        .map(|(&(m, n), c)| {
                            let mut s = c.conj();
                            if m * n != 0 {
                                s = s.rotate(&gamma.scale(-(m * n)));
                            }
                            ((-m, -n), s)
                        })
                        .collect(),
                )
            }
            Data::ZInf { inf, dev } => {
                Data::ZInf { inf: inf.conj(), dev: dev.iter().map(|(l, s)| (*l, s.conj())).collect() }
            }
        };
        Self { ctx: self.ctx.clone(), data }
    }

    /// Multiply by a scalar.
    pub fn scale(&self, s: &PhasedScalar) -> Self {
        self.map_coeffs(|c| c.mul(s))
    }

    pub fn scale_complex(&self, k: Complex64) -> Self {
        self.map_coeffs(|c| c.scale(k))
    }

    /// Multiply by `e^{i·angle}`.
    pub fn rotate(&self, angle: &Angle) -> Self {
        self.map_coeffs(|c| c.rotate(angle))
    }

    fn map_coeffs(&self, f: impl Fn(&PhasedScalar) -> PhasedScalar) -> Self {
        let data = match &self.data {
            Data::Torus(a) => {
                Data::Torus(a.iter().map(|(k, c)| (*k, f(c))).filter(|(_, c)| !c.is_zero()).collect())
            }
            Data::ZInf { inf, dev } => Data::ZInf {
                inf: f(inf),
                dev: dev.iter().map(|(l, c)| (*l, f(c))).filter(|(_, c)| !c.is_zero()).collect(),
            },
        };
        Self { ctx: self.ctx.clone(), data }
    }

    pub(crate) fn map_keys(&self, f: impl Fn((i64, i64)) -> ((i64, i64), Angle)) -> Self {
        match &self.data {
            Data::Torus(a) => {
                let mut out: BTreeMap<(i64, i64), PhasedScalar> = BTreeMap::new();
                for (k, c) in a {
                    let (nk, ph) = f(*k);
                    let v = out.remove(&nk).unwrap_or_default().add(&c.rotate(&ph));
                    if !v.is_zero() {
                        out.insert(nk, v);
                    }
                }
                Self { ctx: self.ctx.clone(), data: Data::Torus(out) }
            }
            Data::ZInf { .. } => self.clone(),
        }
    }

    pub(crate) fn shift_points(&self, p: i64) -> Self {
        match &self.data {
            Data::ZInf { inf, dev } => Self {
                ctx: self.ctx.clone(),
                data: Data::ZInf { inf: inf.clone(), dev: dev.iter().map(|(l, c)| (l + p, c.clone())).collect() },
            },
            Data::Torus(_) => self.clone(),
        }
    }

    /// Reference state: trace / Haar coefficient `c_{0,0}`, or `f(∞)` on `Z∞`.
    pub fn state_exact(&self) -> PhasedScalar {
        match &self.data {
            Data::Torus(a) => a.get(&(0, 0)).cloned().unwrap_or_default(),
            Data::ZInf { inf, .. } => inf.clone(),
        }
    }

    pub fn state(&self) -> Complex64 {
        self.state_exact().eval()
    }

    /// `Σ|coefficients|`, an upper bound for the C*-norm on the torus.
    pub fn one_norm(&self) -> f64 {
        self.numeric().values().map(|c| c.norm()).sum()
    }

    /// Numeric coefficients keyed by basis vector.
    pub fn numeric(&self) -> BTreeMap<BasisKey, Complex64> {
        match &self.data {
            Data::Torus(a) => a.iter().map(|(&(m, n), c)| (BasisKey::Mono(m, n), c.eval())).collect(),
            Data::ZInf { inf, dev } => {
                let mut out: BTreeMap<BasisKey, Complex64> =
                    dev.iter().map(|(l, c)| (BasisKey::Point(*l), c.eval())).collect();
                if !inf.is_zero() {
                    out.insert(BasisKey::Infinity, inf.eval());
                }
                out
            }
        }
    }

    /// Largest coefficient discrepancy with exact phase matching.
    pub fn distance(&self, other: &Self) -> f64 {
        if !AlgebraContext::same(&self.ctx, &other.ctx) {
            return f64::INFINITY;
        }
        let d = self.add_unchecked(other, true);
        match &d.data {
            Data::Torus(a) => a.values().map(PhasedScalar::coeff_abs_sum).fold(0.0, f64::max),
            Data::ZInf { inf, dev } => {
                dev.values().map(PhasedScalar::coeff_abs_sum).fold(inf.coeff_abs_sum(), f64::max)
            }
        }
    }

    /// Equal phases, scalars within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn is_one(&self, tol: f64) -> bool {
        self.approx_eq(&Self::one(&self.ctx), tol)
    }

    /// `λ·U^mV^n` (torus) or a constant (`Z∞`).
    pub fn is_scalar_unitary(&self) -> Option<ScalarMonomial> {
        let (exp, s) = match &self.data {
            Data::Torus(a) if a.len() == 1 => {
                let (k, s) = a.iter().next()?;
                (Some(*k), s)
            }
            Data::ZInf { inf, dev } if dev.is_empty() => (None, inf),
            _ => return None,
        };
        let (phase, c) = s.single()?;
        let modulus = c.norm();
        Some(ScalarMonomial { modulus, phase: phase.clone(), unit: c / modulus, exp })
    }

    /// `e^{iφ}U^mV^n` with the phase fully exact.
    pub fn as_mono(&self, tol: f64) -> Option<Mono> {
        let sm = self.is_scalar_unitary()?;
        let exp = sm.exp?;
        ((sm.modulus - 1.0).abs() <= tol && (sm.unit - 1.0).norm() <= tol).then(|| Mono::new(sm.phase, exp))
    }

    /// Rescale by a unimodular scalar so that the lowest-index coefficient
    /// (lexicographic on `(m, n)`), or `f(∞)` on `Z∞`, is positive real.
    pub fn normalized(&self) -> Self {
        let lead = match &self.data {
            Data::Torus(a) => a.values().next().cloned(),
            Data::ZInf { inf, dev } => {
                if inf.is_zero() {
                    dev.values().next().cloned()
                } else {
                    Some(inf.clone())
                }
            }
        };
        let Some(lead) = lead else { return self.clone() };
        match lead.single() {
            Some((a, c)) => {
                let unit = c.conj() / c.norm();
                let out = self.rotate(&-a);
                if (unit - 1.0).norm() == 0.0 {
                    out
                } else {
                    out.scale_complex(unit)
                }
            }
            None => {
                let z = lead.eval();
                self.scale_complex(z.conj() / z.norm())
            }
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        AlgebraContext::same(&self.ctx, &other.ctx) && self.data == other.data
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            Data::Torus(a) => {
                if a.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for ((m, n), c) in a {
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    write!(f, "[{c:?}]·U^{m}V^{n}")?;
                }
                Ok(())
            }
            Data::ZInf { inf, dev } => {
                write!(f, "f(∞)={inf:?}")?;
                for (l, c) in dev {
                    write!(f, ", Δf({l})={c:?}")?;
                }
                Ok(())
            }
        }
    }
}
