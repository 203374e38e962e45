//! Complex scalars with exact phase bookkeeping.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::complex::Complex64;

use crate::angle::{Angle, SymbolBasis};

/// Entries below this modulus are dropped after every update.
pub const PRUNE: f64 = 1e-14;

/// A finite sum `Σ c_j·e^{iθ_j}` with exact, reduced phases `θ_j`.
///
/// Products add phases exactly, so a scalar that started as `e^{iθ}` stays a
/// single term after any number of multiplications and conjugations.
#[derive(Clone, Default, PartialEq)]
pub struct PhasedScalar {
    terms: BTreeMap<Angle, Complex64>,
}

impl PhasedScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(basis: &Arc<SymbolBasis>) -> Self {
        Self::term(Angle::zero(basis), Complex64::new(1.0, 0.0))
    }

    pub fn complex(basis: &Arc<SymbolBasis>, c: Complex64) -> Self {
        Self::term(Angle::zero(basis), c)
    }

    /// `e^{i·angle}`.
    pub fn phase(angle: Angle) -> Self {
        Self::term(angle, Complex64::new(1.0, 0.0))
    }

    pub fn term(angle: Angle, c: Complex64) -> Self {
        let mut s = Self::zero();
        s.add_term(angle, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Angle, &Complex64)> {
        self.terms.iter()
    }

    /// The only term, if there is exactly one.
    pub fn single(&self) -> Option<(&Angle, Complex64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(a, c)| (a, *c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, angle: Angle, c: Complex64) {
        let key = angle.reduced();
        let slot = self.terms.entry(key.clone()).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if slot.norm() <= PRUNE {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), -*c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(a + b, c * d);
            }
        }
        out
    }

    /// Multiply by `e^{i·angle}`.
    pub fn rotate(&self, angle: &Angle) -> Self {
        if angle.is_trivial_phase() {
            return self.clone();
        }
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            out.add_term(a + angle, *c);
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * k);
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            out.add_term(-a, c.conj());
        }
        out
    }

    /// Numeric value using the basis witnesses.
    pub fn eval(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, c)| c * Complex64::from_polar(1.0, a.to_radians()))
            .sum()
    }

    /// `Σ|c_j|`, an upper bound for `|eval()|`.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Same phases, scalars within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Exactly one term, with trivial phase and scalar within `tol` of 1.
    pub fn is_one(&self, tol: f64) -> bool {
        matches!(self.single(), Some((a, c)) if a.is_trivial_phase() && (c - 1.0).norm() <= tol)
    }

    /// `e^{iθ}` form: single term whose scalar is 1 within `tol`.
    pub fn as_exact_phase(&self, tol: f64) -> Option<Angle> {
        match self.single() {
            Some((a, c)) if (c - 1.0).norm() <= tol => Some(a.clone()),
            _ => None,
        }
    }
}

impl fmt::Debug for PhasedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·e^{{i·{a}}}")?;
        }
        Ok(())
    }
}
