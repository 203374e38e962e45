//! Coefficient algebras: the noncommutative torus `A_γ`, its commutative
//! corner `C(T)`, and `C(Z∞)`.

mod automorphism;
mod element;

use std::sync::Arc;

pub(crate) use automorphism::apply_power;
pub use automorphism::{Automorphism, Mono};
pub use element::{BasisKey, Element, ScalarMonomial};

use crate::angle::{Angle, SymbolBasis};
use crate::error::{Error, Result};

/// Which concrete algebra elements live in.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraKind {
    /// `C(T)` generated by a single unitary `U`, state = Haar integral.
    Circle,
    /// `UV = e^{iγ}VU` with the trace `τ(U^mV^n) = δ_{m,0}δ_{n,0}`.
    NcTorus { gamma: Angle },
    /// Functions on `Z ∪ {∞}` that are eventually constant, state = `δ∞`.
    ZInf,
}

/// Shared algebra data: symbol basis plus the algebra kind.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraContext {
    basis: Arc<SymbolBasis>,
    kind: AlgebraKind,
}

impl AlgebraContext {
    pub fn circle(basis: &Arc<SymbolBasis>) -> Arc<Self> {
        Arc::new(Self { basis: basis.clone(), kind: AlgebraKind::Circle })
    }

    pub fn nc_torus(basis: &Arc<SymbolBasis>, gamma: Angle) -> Result<Arc<Self>> {
        if !SymbolBasis::compatible(basis, gamma.basis()) {
            return Err(Error::BasisMismatch);
        }
        Ok(Arc::new(Self { basis: basis.clone(), kind: AlgebraKind::NcTorus { gamma: gamma.reduced() } }))
    }

    pub fn zinf(basis: &Arc<SymbolBasis>) -> Arc<Self> {
        Arc::new(Self { basis: basis.clone(), kind: AlgebraKind::ZInf })
    }

    pub fn basis(&self) -> &Arc<SymbolBasis> {
        &self.basis
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    /// Deformation angle; zero for the commutative algebras.
    pub fn gamma(&self) -> Angle {
        match &self.kind {
            AlgebraKind::NcTorus { gamma } => gamma.clone(),
            _ => Angle::zero(&self.basis),
        }
    }

    pub fn is_torus(&self) -> bool {
        !matches!(self.kind, AlgebraKind::ZInf)
    }

    pub fn is_commutative(&self) -> bool {
        match &self.kind {
            AlgebraKind::NcTorus { gamma } => gamma.is_trivial_phase(),
            _ => true,
        }
    }

    /// The reference state is faithful: trace and Haar yes, `δ∞` no.
    pub fn omega0_faithful(&self) -> bool {
        !matches!(self.kind, AlgebraKind::ZInf)
    }

    /// Support of the reference state in the bidual is central. True for
    /// all three: commutative algebras, and a trace on `A_γ`.
    pub fn support_central(&self) -> bool {
        true
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AlgebraKind::Circle => "circle",
            AlgebraKind::NcTorus { .. } => "nctorus",
            AlgebraKind::ZInf => "zinf",
        }
    }

    pub(crate) fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    pub(crate) fn check_same(a: &Arc<Self>, b: &Arc<Self>) -> Result<()> {
        if Self::same(a, b) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{} vs {}", a.name(), b.name())))
        }
    }
}

/// Elements the intertwining and invariance checks are run on.
pub fn generators(ctx: &Arc<AlgebraContext>) -> Vec<(String, Element)> {
    match ctx.kind() {
        AlgebraKind::Circle => vec![("U".into(), Element::u(ctx))],
        AlgebraKind::NcTorus { .. } => vec![("U".into(), Element::u(ctx)), ("V".into(), Element::v(ctx))],
        AlgebraKind::ZInf => vec![
            ("1".into(), Element::one(ctx)),
            ("δ0".into(), Element::indicator(ctx, 0)),
            ("δ1".into(), Element::indicator(ctx, 1)),
        ],
    }
}
