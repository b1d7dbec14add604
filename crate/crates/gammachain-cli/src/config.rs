//! TOML configuration files.
//!
//! Two uses: overriding the chain parameters of any subcommand (flat keys
//! `J, gamma, Gamma, alpha, h, N`) and describing an atom-light setup for
//! the `couplings` subcommand (`[[sites]]` and `[[modes]]` tables with
//! complex entries written as `[re, im]` pairs).

use num_complex::Complex64 as C64;
use serde::Deserialize;

use gammachain::synthesis::{AtomLightParams, CavityMode};

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "J")]
    pub j: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(rename = "Gamma")]
    pub big_gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub h: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,

    // atom-light section
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub delta: Option<f64>,
    pub occupation_s: Option<f64>,
    pub occupation_g: Option<f64>,
    pub detuning_ratio: Option<f64>,
    #[serde(default)]
    pub sites: Vec<SiteEntry>,
    #[serde(default)]
    pub modes: Vec<ModeEntry>,
}

#[derive(Debug, Deserialize)]
pub struct SiteEntry {
    pub omega1: [f64; 2],
    pub omega2: [f64; 2],
}

#[derive(Debug, Deserialize)]
pub struct ModeEntry {
    pub detuning: f64,
    #[serde(default)]
    pub kappa: f64,
    pub g: Vec<[f64; 2]>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config '{path}': {e}"))?;
        toml::from_str(&text).map_err(|e| format!("cannot parse config '{path}': {e}"))
    }

    pub fn atom_light(&self) -> Result<AtomLightParams, String> {
        if self.sites.is_empty() || self.modes.is_empty() {
            return Err("config needs at least one [[sites]] and one [[modes]] entry".into());
        }
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| format!("config key '{name}' is required for couplings"))
        };
        let cx = |p: &[f64; 2]| C64::new(p[0], p[1]);
        Ok(AtomLightParams {
            omega1: self.sites.iter().map(|s| cx(&s.omega1)).collect(),
            omega2: self.sites.iter().map(|s| cx(&s.omega2)).collect(),
            delta1: need(self.delta1, "delta1")?,
            delta2: need(self.delta2, "delta2")?,
            delta: self.delta.unwrap_or(0.0),
            modes: self
                .modes
                .iter()
                .map(|m| CavityMode {
                    detuning: m.detuning,
                    kappa: m.kappa,
                    g: m.g.iter().map(cx).collect(),
                })
                .collect(),
            occupation_s: self.occupation_s.unwrap_or(0.5),
            occupation_g: self.occupation_g.unwrap_or(0.5),
            detuning_ratio: self.detuning_ratio.unwrap_or(10.0),
        })
    }
}
