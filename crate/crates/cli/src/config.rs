//! Scenario files.
//!
//! ```json
//! {
//!   "system": "double-rotation",
//!   "params": {"l": 5},
//!   "n_max": 24,
//!   "level": 1,
//!   "truncation": 12,
//!   "tol": 1e-8,
//!   "iterations": 10000,
//!   "element": {"modes": [{"k": 3, "a": {"terms": [{"m": 0}]}}]},
//!   "observable": {"q": 1, "l0": -1},
//!   "mu": [{"l": 0, "re": 1.0}]
//! }
//! ```
//!
//! `system` is a preset name or a full system object (see
//! [`skewprod_core::json::SystemDto`]). Unknown keys are rejected.

use serde::Deserialize;

use skewprod_core::json::{AngleDto, CrossedDto, SystemDto};
use skewprod_core::{presets, SkewSystem, SymbolBasis};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Preset(String),
    Spec(Box<SystemDto>),
}

/// Overrides for preset parameters.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetParams {
    /// Order of the constant cocycle of `double-rotation`.
    pub l: Option<i64>,
    /// `β` of `zinf`, as an angle in turns.
    pub beta: Option<AngleDto>,
    /// Noncommutative variant of `anzai-inverse`.
    pub noncommutative: Option<bool>,
}

/// `h(l, z) = z^q` evaluated along the orbit of `l0`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observable {
    #[serde(default = "one")]
    pub q: i64,
    pub l0: i64,
}

fn one() -> i64 {
    1
}

/// One value `μ̌(l)` of a characteristic function.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuEntry {
    pub l: i64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub system: Option<SystemSpec>,
    #[serde(default)]
    pub params: PresetParams,
    pub n_max: Option<i64>,
    pub level: Option<i64>,
    pub truncation: Option<i64>,
    pub tol: Option<f64>,
    pub iterations: Option<usize>,
    pub element: Option<CrossedDto>,
    pub observable: Option<Observable>,
    pub mu: Option<Vec<MuEntry>>,
}

/// Build a preset with parameter overrides.
pub fn build_preset(name: &str, params: &PresetParams) -> skewprod_core::Result<SkewSystem> {
    match name {
        "double-rotation" => presets::double_rotation(params.l.unwrap_or(3)),
        "anzai-inverse" => presets::anzai_inverse(params.noncommutative.unwrap_or(false)),
        "zinf" => {
            let beta = params.beta.as_ref().map(|b| b.to_angle(&SymbolBasis::standard())).transpose()?;
            presets::zinf(beta)
        }
        other => presets::by_name(other),
    }
}

impl ScenarioConfig {
    pub fn build_system(&self, preset_flag: Option<&str>) -> anyhow::Result<SkewSystem> {
        let sys = match (preset_flag, &self.system) {
            (Some(name), _) => build_preset(name, &self.params)?,
            (None, Some(SystemSpec::Preset(name))) => build_preset(name, &self.params)?,
            (None, Some(SystemSpec::Spec(dto))) => dto.to_system()?,
            (None, None) => anyhow::bail!(crate::Usage("no system given: pass --preset or a config file".into())),
        };
        Ok(sys)
    }
}
