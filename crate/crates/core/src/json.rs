//! JSON forms of systems, elements and reports.
//!
//! Angles are written as `{"q0": "p/q", "sym": {"s1": "p/q"}}` in turns.
//! Complex scalars are `re`, `im` with an optional exact `phase` angle;
//! a term carrying only a phase has modulus one.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num::complex::Complex64;
use num::{Rational64, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraContext, AlgebraKind, Automorphism, Element, Mono};
use crate::angle::{Angle, Symbol, SymbolBasis};
use crate::cohomology::{AlgebraShape, FixedPointDescription, LevelReport, Measurable, Method, OracleReport, Witness};
use crate::crossed::CrossedElement;
use crate::ergodicity::{BirkhoffTrace, Classification, Verdict};
use crate::error::{Error, Result};
use crate::phase::PhasedScalar;
use crate::skew::SkewSystem;

fn parse_rational(s: &str) -> Result<Rational64> {
    Rational64::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

fn zero_str() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDto {
    pub name: String,
    pub witness: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleDto {
    #[serde(default = "zero_str")]
    pub q0: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sym: BTreeMap<String, String>,
}

impl Default for AngleDto {
    fn default() -> Self {
        Self { q0: zero_str(), sym: BTreeMap::new() }
    }
}

impl AngleDto {
    pub fn from_angle(a: &Angle) -> Self {
        let sym = a
            .basis()
            .symbols()
            .iter()
            .zip(a.symbol_coeffs())
            .filter(|(_, q)| !q.is_zero())
            .map(|(s, q)| (s.name.clone(), q.to_string()))
            .collect();
        Self { q0: a.q0().to_string(), sym }
    }

    pub fn to_angle(&self, basis: &Arc<SymbolBasis>) -> Result<Angle> {
        let mut coeffs = vec![Rational64::zero(); basis.len()];
        for (name, q) in &self.sym {
            let i = basis.index_of(name).ok_or_else(|| Error::Parse(format!("unknown symbol {name:?}")))?;
            coeffs[i] = parse_rational(q)?;
        }
        Angle::from_parts(basis, parse_rational(&self.q0)?, coeffs)
    }

    fn is_zero(&self) -> bool {
        self.sym.is_empty() && parse_rational(&self.q0).is_ok_and(|q| q.is_zero())
    }
}

fn one() -> f64 {
    1.0
}

/// `(re + i·im)·e^{i·phase}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarDto {
    #[serde(default = "one")]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<AngleDto>,
}

impl ScalarDto {
    fn from_term(a: &Angle, c: Complex64) -> Self {
        let phase = AngleDto::from_angle(a);
        Self { re: c.re, im: c.im, phase: (!phase.is_zero()).then_some(phase) }
    }

    fn to_scalar(&self, basis: &Arc<SymbolBasis>) -> Result<PhasedScalar> {
        let angle = match &self.phase {
            Some(p) => p.to_angle(basis)?,
            None => Angle::zero(basis),
        };
        Ok(PhasedScalar::term(angle, Complex64::new(self.re, self.im)))
    }
}

fn scalar_terms(s: &PhasedScalar) -> Vec<ScalarDto> {
    s.terms().map(|(a, c)| ScalarDto::from_term(a, *c)).collect()
}

fn scalar_sum(terms: &[ScalarDto], basis: &Arc<SymbolBasis>) -> Result<PhasedScalar> {
    terms.iter().try_fold(PhasedScalar::zero(), |acc, t| Ok(acc.add(&t.to_scalar(basis)?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub m: i64,
    #[serde(default)]
    pub n: i64,
    #[serde(default = "one")]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<AngleDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDto {
    pub l: i64,
    #[serde(default = "one")]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<AngleDto>,
}

/// Torus elements list terms `c·U^mV^n`; `Z∞` elements give the value at
/// `∞` and the deviations from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ElementDto {
    Torus {
        terms: Vec<TermDto>,
    },
    ZInf {
        infinity: Vec<ScalarDto>,
        #[serde(default)]
        deviations: Vec<PointDto>,
    },
}

impl ElementDto {
    pub fn from_element(x: &Element) -> Self {
        if let Some(terms) = x.torus_terms() {
            let terms = terms
                .iter()
                .flat_map(|(&(m, n), s)| {
                    s.terms().map(move |(a, c)| {
                        let ScalarDto { re, im, phase } = ScalarDto::from_term(a, *c);
                        TermDto { m, n, re, im, phase }
                    })
                })
                .collect();
            return ElementDto::Torus { terms };
        }
        let (inf, dev) = x.zinf_parts().expect("Z∞");
        let deviations = dev
            .iter()
            .flat_map(|(&l, s)| {
                s.terms().map(move |(a, c)| {
                    let ScalarDto { re, im, phase } = ScalarDto::from_term(a, *c);
                    PointDto { l, re, im, phase }
                })
            })
            .collect();
        ElementDto::ZInf { infinity: scalar_terms(inf), deviations }
    }

    pub fn to_element(&self, ctx: &Arc<AlgebraContext>) -> Result<Element> {
        let basis = ctx.basis();
        match (self, ctx.is_torus()) {
            (ElementDto::Torus { terms }, true) => {
                let terms = terms
                    .iter()
                    .map(|t| {
                        let c = ScalarDto { re: t.re, im: t.im, phase: t.phase.clone() };
                        Ok(((t.m, t.n), c.to_scalar(basis)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Element::from_terms(ctx, terms)
            }
            (ElementDto::ZInf { infinity, deviations }, false) => {
                let mut dev: BTreeMap<i64, PhasedScalar> = BTreeMap::new();
                for p in deviations {
                    let s = ScalarDto { re: p.re, im: p.im, phase: p.phase.clone() }.to_scalar(basis)?;
                    let acc = dev.remove(&p.l).unwrap_or_default();
                    dev.insert(p.l, acc.add(&s));
                }
                Element::zinf(ctx, scalar_sum(infinity, basis)?, dev)
            }
            _ => Err(Error::Parse(format!("element shape does not match the {} algebra", ctx.name()))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeDto {
    pub k: i64,
    pub a: ElementDto,
}

/// `Σ_k V^k a_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossedDto {
    pub modes: Vec<ModeDto>,
}

impl CrossedDto {
    pub fn from_crossed(x: &CrossedElement) -> Self {
        Self { modes: x.modes().iter().map(|(&k, a)| ModeDto { k, a: ElementDto::from_element(a) }).collect() }
    }

    pub fn to_crossed(&self, sys: &SkewSystem) -> Result<CrossedElement> {
        let modes = self.modes.iter().map(|m| Ok((m.k, m.a.to_element(sys.context())?))).collect::<Result<Vec<_>>>()?;
        CrossedElement::from_modes(sys.context(), sys.alpha(), modes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoDto {
    #[serde(default, skip_serializing_if = "AngleDto::is_zero")]
    pub phase: AngleDto,
    pub exp: [i64; 2],
}

impl MonoDto {
    fn from_mono(m: &Mono) -> Self {
        Self { phase: AngleDto::from_angle(&m.phase), exp: [m.exp.0, m.exp.1] }
    }

    fn to_mono(&self, basis: &Arc<SymbolBasis>) -> Result<Mono> {
        Ok(Mono::new(self.phase.to_angle(basis)?, (self.exp[0], self.exp[1])))
    }
}

/// Torus automorphism by generator images, or a shift on `Z∞` with
/// `(σf)(l) = f(l − shift)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum AutomorphismDto {
    Torus {
        u_image: MonoDto,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v_image: Option<MonoDto>,
    },
    Shift {
        shift: i64,
    },
}

impl AutomorphismDto {
    pub fn from_automorphism(a: &Automorphism, ctx: &AlgebraContext) -> Self {
        match a {
            Automorphism::Shift(p) => AutomorphismDto::Shift { shift: *p },
            Automorphism::Torus { u_image, v_image } => AutomorphismDto::Torus {
                u_image: MonoDto::from_mono(u_image),
                v_image: (!matches!(ctx.kind(), AlgebraKind::Circle)).then(|| MonoDto::from_mono(v_image)),
            },
        }
    }

    pub fn to_automorphism(&self, ctx: &AlgebraContext) -> Result<Automorphism> {
        let a = match self {
            AutomorphismDto::Shift { shift } => Automorphism::Shift(*shift),
            AutomorphismDto::Torus { u_image, v_image } => {
                let v = match v_image {
                    Some(v) => v.to_mono(ctx.basis())?,
                    None => Mono::new(Angle::zero(ctx.basis()), (0, 1)),
                };
                Automorphism::torus(u_image.to_mono(ctx.basis())?, v)
            }
        };
        a.validate(ctx)?;
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDto {
    /// `circle`, `nctorus` or `zinf`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<AngleDto>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsDto {
    pub base_uniquely_ergodic: bool,
}

/// A skew-product system `(A, θ, α, u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDto {
    /// Symbol basis; the standard `s1, s2, s3` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<SymbolDto>>,
    pub algebra: AlgebraDto,
    pub theta: AutomorphismDto,
    /// Identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AutomorphismDto>,
    pub u: ElementDto,
    /// Asserted unique ergodicity of the base, used only for families the
    /// library cannot decide.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagsDto>,
}

impl SystemDto {
    pub fn from_system(sys: &SkewSystem) -> Self {
        let ctx = sys.context();
        let basis = ctx.basis();
        let basis_dto = (**basis != *SymbolBasis::standard()).then(|| {
            basis.symbols().iter().map(|s| SymbolDto { name: s.name.clone(), witness: s.witness }).collect()
        });
        let gamma = match ctx.kind() {
            AlgebraKind::NcTorus { gamma } => Some(AngleDto::from_angle(gamma)),
            _ => None,
        };
        Self {
            basis: basis_dto,
            algebra: AlgebraDto { kind: ctx.name().into(), gamma },
            theta: AutomorphismDto::from_automorphism(sys.theta(), ctx),
            alpha: (!sys.alpha().is_identity()).then(|| AutomorphismDto::from_automorphism(sys.alpha(), ctx)),
            u: ElementDto::from_element(sys.u()),
            flags: None,
        }
    }

    pub fn to_system(&self) -> Result<SkewSystem> {
        let basis = match &self.basis {
            Some(symbols) => SymbolBasis::new(
                symbols.iter().map(|s| Symbol { name: s.name.clone(), witness: s.witness }).collect(),
            )?,
            None => SymbolBasis::standard(),
        };
        let ctx = match (self.algebra.kind.as_str(), &self.algebra.gamma) {
            ("circle", None) => AlgebraContext::circle(&basis),
            ("zinf", None) => AlgebraContext::zinf(&basis),
            ("nctorus", g) => AlgebraContext::nc_torus(&basis, g.clone().unwrap_or_default().to_angle(&basis)?)?,
            (kind, Some(_)) => return Err(Error::Parse(format!("gamma is not allowed for {kind:?}"))),
            (kind, None) => return Err(Error::Parse(format!("unknown algebra kind {kind:?}"))),
        };
        let theta = self.theta.to_automorphism(&ctx)?;
        let alpha = match &self.alpha {
            Some(a) => a.to_automorphism(&ctx)?,
            None => Automorphism::identity(&ctx),
        };
        let u = self.u.to_element(&ctx)?;
        SkewSystem::new(&ctx, theta, alpha, u, self.flags.map(|f| f.base_uniquely_ergodic))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelReportDto {
    pub level: i64,
    pub continuous: Option<ElementDto>,
    pub measurable: Measurable,
    pub witness: Witness,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl From<&LevelReport> for LevelReportDto {
    fn from(r: &LevelReport) -> Self {
        Self {
            level: r.level,
            continuous: r.continuous.as_ref().map(ElementDto::from_element),
            measurable: r.measurable,
            witness: r.witness.clone(),
            method: r.method,
            oracle: r.oracle.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDto {
    pub l: i64,
    pub w: ElementDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointDto {
    pub group_generator: Option<i64>,
    pub measurable_generator: Option<i64>,
    pub algebra_shape: AlgebraShape,
    pub generators: Vec<GeneratorDto>,
    pub method: Method,
    pub scan_bound: Option<i64>,
    pub group_law_verified: bool,
}

impl From<&FixedPointDescription> for FixedPointDto {
    fn from(f: &FixedPointDescription) -> Self {
        Self {
            group_generator: f.group_generator,
            measurable_generator: f.measurable_generator,
            algebra_shape: f.algebra_shape,
            generators: f.generators.iter().map(|(&l, w)| GeneratorDto { l, w: ElementDto::from_element(w) }).collect(),
            method: f.method,
            scan_bound: f.scan_bound,
            group_law_verified: f.group_law_verified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationDto {
    pub topologically_ergodic: bool,
    pub uniquely_ergodic: bool,
    pub weakly_clustering: bool,
    pub strictly_ergodic: bool,
    pub sharply_ergodic: bool,
    /// `"implied"` or `"not_implied"`.
    pub minimal: String,
    pub ue_wrt_fixed_point: Verdict,
    pub fixed_point: FixedPointDto,
    pub levels: Vec<LevelReportDto>,
    pub evidence: Vec<String>,
}

impl From<&Classification> for ClassificationDto {
    fn from(c: &Classification) -> Self {
        Self {
            topologically_ergodic: c.topologically_ergodic,
            uniquely_ergodic: c.uniquely_ergodic,
            weakly_clustering: c.weakly_clustering,
            strictly_ergodic: c.strictly_ergodic,
            sharply_ergodic: c.sharply_ergodic,
            minimal: if c.minimal_implied { "implied" } else { "not_implied" }.into(),
            ue_wrt_fixed_point: c.ue_wrt_fixed_point,
            fixed_point: (&c.fixed_point).into(),
            levels: c.levels.iter().map(Into::into).collect(),
            evidence: c.evidence.clone(),
        }
    }
}

/// Complex numbers as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirkhoffDto {
    pub step_coefficient: [f64; 2],
    pub average: [f64; 2],
    pub limit: Option<[f64; 2]>,
}

impl From<&BirkhoffTrace> for BirkhoffDto {
    fn from(t: &BirkhoffTrace) -> Self {
        let pair = |c: Complex64| [c.re, c.im];
        Self { step_coefficient: pair(t.step_coefficient), average: pair(t.average), limit: t.limit.map(pair) }
    }
}

/// Serialize any report as pretty JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

/// Parse any report or spec.
pub fn from_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}
