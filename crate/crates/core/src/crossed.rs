//! The crossed product `A ⋊_α Z` as finitely supported Fourier series
//! `x = Σ_k V^k a_k`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::complex::Complex64;

use crate::algebra::{AlgebraContext, Automorphism, BasisKey, Element};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::phase::PhasedScalar;

/// `Σ_k V^k a_k` with `V a V* = α(a)`.
#[derive(Clone, Debug)]
pub struct CrossedElement {
    ctx: Arc<AlgebraContext>,
    alpha: Arc<Automorphism>,
    modes: BTreeMap<i64, Element>,
}

impl CrossedElement {
    pub fn zero(ctx: &Arc<AlgebraContext>, alpha: &Arc<Automorphism>) -> Result<Self> {
        alpha.validate(ctx)?;
        Ok(Self { ctx: ctx.clone(), alpha: alpha.clone(), modes: BTreeMap::new() })
    }

    /// `V^k a`.
    pub fn monomial(alpha: &Arc<Automorphism>, k: i64, a: Element) -> Result<Self> {
        let mut x = Self::zero(a.context(), alpha)?;
        if !a.is_zero() {
            x.modes.insert(k, a);
        }
        Ok(x)
    }

    /// `V^k`.
    pub fn v_power(ctx: &Arc<AlgebraContext>, alpha: &Arc<Automorphism>, k: i64) -> Result<Self> {
        Self::monomial(alpha, k, Element::one(ctx))
    }

    pub fn from_modes(
        ctx: &Arc<AlgebraContext>,
        alpha: &Arc<Automorphism>,
        modes: impl IntoIterator<Item = (i64, Element)>,
    ) -> Result<Self> {
        let mut x = Self::zero(ctx, alpha)?;
        for (k, a) in modes {
            AlgebraContext::check_same(ctx, a.context())?;
            let v = match x.modes.remove(&k) {
                Some(b) => b.add_unchecked(&a, false),
                None => a,
            };
            if !v.is_zero() {
                x.modes.insert(k, v);
            }
        }
        Ok(x)
    }

    pub(crate) fn with_modes(&self, modes: BTreeMap<i64, Element>) -> Self {
        let modes = modes.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        Self { ctx: self.ctx.clone(), alpha: self.alpha.clone(), modes }
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn alpha(&self) -> &Arc<Automorphism> {
        &self.alpha
    }

    pub fn modes(&self) -> &BTreeMap<i64, Element> {
        &self.modes
    }

    /// Coefficient `a_k`, i.e. `E(V^{−k}x)`.
    pub fn coeff(&self, k: i64) -> Element {
        self.modes.get(&k).cloned().unwrap_or_else(|| Element::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Largest `|k|` in the support.
    pub fn support_radius(&self) -> i64 {
        self.modes.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        AlgebraContext::check_same(&self.ctx, &other.ctx)?;
        if self.alpha != other.alpha {
            return Err(Error::ContextMismatch("crossed products over different α".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut modes = self.modes.clone();
        for (k, b) in &other.modes {
            let v = match modes.remove(k) {
                Some(a) => a.add_unchecked(b, negate),
                None if negate => b.scale_complex(Complex64::new(-1.0, 0.0)),
                None => b.clone(),
            };
            modes.insert(*k, v);
        }
        self.with_modes(modes)
    }

    /// `V^m a · V^n b = V^{m+n} α^{−n}(a)·b`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut modes: BTreeMap<i64, Element> = BTreeMap::new();
        for (&n, b) in &other.modes {
            let shift = self.alpha.pow(-n, &self.ctx);
            for (&m, a) in &self.modes {
                let term = shift.apply_unchecked(a).mul_unchecked(b);
                let v = match modes.remove(&(m + n)) {
                    Some(acc) => acc.add_unchecked(&term, false),
                    None => term,
                };
                modes.insert(m + n, v);
            }
        }
        Ok(self.with_modes(modes))
    }

    /// `(V^m a)* = V^{−m} α^m(a*)`.
    pub fn adjoint(&self) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|(&m, a)| (-m, crate::algebra::apply_power(&self.alpha, m, &a.adjoint())))
            .collect();
        self.with_modes(modes)
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        self.with_modes(self.modes.iter().map(|(k, a)| (*k, a.scale_complex(c))).collect())
    }

    pub fn scale(&self, s: &PhasedScalar) -> Self {
        self.with_modes(self.modes.iter().map(|(k, a)| (*k, a.scale(s))).collect())
    }

    /// Gauge action `ρ_z`: mode `k` times `e^{ik·z}`.
    pub fn gauge(&self, z: &Angle) -> Self {
        self.with_modes(self.modes.iter().map(|(k, a)| (*k, a.rotate(&z.scale(*k)))).collect())
    }

    /// Canonical expectation `E(x) = a_0`.
    pub fn expectation(&self) -> Element {
        self.coeff(0)
    }

    /// `ω = ω₀∘E`.
    pub fn state(&self) -> Complex64 {
        self.expectation().state()
    }

    /// Mode `k` scaled by `max(0, 1 − |k|/N)`.
    pub fn fejer(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Fejér order must be positive".into()));
        }
        Ok(self.weighted(|k| fejer_weight(k, n)))
    }

    /// Mode `k` scaled by `r^{|k|}`.
    pub fn abel(&self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("Abel radius must lie in (0,1), got {r}")));
        }
        Ok(self.weighted(|k| abel_weight(k, r)))
    }

    /// Symmetric partial sum `Σ_{|k|≤l} V^k a_k`.
    pub fn partial_sum(&self, l: i64) -> Self {
        self.with_modes(self.modes.range(-l..=l).map(|(k, a)| (*k, a.clone())).collect())
    }

    fn weighted(&self, w: impl Fn(i64) -> f64) -> Self {
        let modes = self
            .modes
            .iter()
            .filter_map(|(&k, a)| {
                let wk = w(k);
                if wk == 0.0 {
                    None
                } else if wk == 1.0 {
                    Some((k, a.clone()))
                } else {
                    Some((k, a.scale_complex(Complex64::new(wk, 0.0))))
                }
            })
            .collect();
        self.with_modes(modes)
    }

    /// Numeric coefficients keyed by `(mode, basis vector)`.
    pub fn numeric(&self) -> BTreeMap<(i64, BasisKey), Complex64> {
        let mut out = BTreeMap::new();
        for (k, a) in &self.modes {
            for (key, c) in a.numeric() {
                out.insert((*k, key), c);
            }
        }
        out
    }

    /// Coefficient ℓ¹ norm.
    pub fn one_norm(&self) -> f64 {
        self.modes.values().map(Element::one_norm).sum()
    }

    /// Largest coefficient discrepancy with exact phase matching.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.check(other).is_err() {
            return f64::INFINITY;
        }
        let mut keys: Vec<i64> = self.modes.keys().chain(other.modes.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().map(|k| self.coeff(*k).distance(&other.coeff(*k))).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// `max(0, 1 − |k|/N)`, computed as `(N − |k|)/N`.
pub fn fejer_weight(k: i64, n: u32) -> f64 {
    let n = u64::from(n);
    n.saturating_sub(k.unsigned_abs()) as f64 / n as f64
}

/// `r^{|k|}`.
pub fn abel_weight(k: i64, r: f64) -> f64 {
    r.powi(k.unsigned_abs().min(i32::MAX as u64) as i32)
}

/// ℓ¹ distance between two numeric coefficient maps.
pub fn l1_distance<K: Ord>(a: &BTreeMap<K, Complex64>, b: &BTreeMap<K, Complex64>) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut d: f64 = a.iter().map(|(k, x)| (x - b.get(k).unwrap_or(&zero)).norm()).sum();
    d += b.iter().filter(|(k, _)| !a.contains_key(k)).map(|(_, y)| y.norm()).sum::<f64>();
    d
}

/// ℓ² distance between two numeric coefficient maps.
pub fn l2_distance<K: Ord>(a: &BTreeMap<K, Complex64>, b: &BTreeMap<K, Complex64>) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut d: f64 = a.iter().map(|(k, x)| (x - b.get(k).unwrap_or(&zero)).norm_sqr()).sum();
    d += b.iter().filter(|(k, _)| !a.contains_key(k)).map(|(_, y)| y.norm_sqr()).sum::<f64>();
    d.sqrt()
}

impl PartialEq for CrossedElement {
    fn eq(&self, other: &Self) -> bool {
        self.check(other).is_ok() && self.modes == other.modes
    }
}
