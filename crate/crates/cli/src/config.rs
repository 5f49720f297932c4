//! Run configuration: defaults, recipe overlays, config files and flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use fraglab::dynamics::{SpamModel, TimeWindow};
use fraglab::hamiltonians::{RydbergParams, TWO_PI};
use fraglab::sliomstats::ScalingKind;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::recipes::Recipe;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Facilitated gauge-theory Hamiltonian.
    Lgt,
    /// Full Rydberg Hamiltonian on the blockaded basis.
    Ryd,
    /// PXQ + QXP on the unconstrained basis.
    Pxq,
    /// Second-order effective Hamiltonian.
    Eff2,
    /// Rydberg Hamiltonian with sampled position disorder.
    Disordered,
}

/// Physical parameters in lab units; converted to rad/µs on use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    /// Ω/2π, MHz.
    pub omega_mhz: f64,
    /// V₁/2π at separation 2a, MHz.
    pub v1_mhz: f64,
    /// Δ/2π, MHz; `null` means Δ = V₁.
    pub delta_mhz: Option<f64>,
    /// Lattice spacing, µm.
    pub spacing_um: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            omega_mhz: 1.39,
            v1_mhz: 9.2,
            delta_mhz: None,
            spacing_um: 3.37,
        }
    }
}

impl ParamsConfig {
    pub fn resolve(&self) -> RydbergParams {
        let d = 2.0 * self.spacing_um;
        let d2 = d * d;
        let v1 = TWO_PI * self.v1_mhz;
        RydbergParams {
            omega: TWO_PI * self.omega_mhz,
            delta: self.delta_mhz.map_or(v1, |x| TWO_PI * x),
            spacing_a: self.spacing_um,
            c6: v1 * (d2 * d2 * d2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostselectSpec {
    pub blockade: bool,
    /// Required cluster count.
    pub nc: Option<usize>,
}

impl std::str::FromStr for PostselectSpec {
    type Err = String;

    /// `none`, `blockade`, `nc=K` or `blockade,nc=K`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Self::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "none" | "off" => {}
                "blockade" => out.blockade = true,
                _ => {
                    let k = part
                        .strip_prefix("nc=")
                        .and_then(|k| k.parse().ok())
                        .ok_or_else(|| format!("unrecognised post-selection term `{part}`"))?;
                    out.nc = Some(k);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    /// Position spread, µm.
    pub sigma_r: f64,
    pub realizations: usize,
}

impl Default for DisorderConfig {
    fn default() -> Self {
        Self {
            sigma_r: 0.083,
            realizations: 50,
        }
    }
}

/// Fully resolved run configuration. Every field has a default, so a config
/// file only lists what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub recipe: Option<Recipe>,
    /// Inferred from `init` when absent, else 16.
    pub n_atoms: Option<usize>,
    pub model: Model,
    pub params: ParamsConfig,
    /// Longest coupling kept by Rydberg builders, in lattice spacings.
    pub max_range: usize,
    /// Physical g/r string for `quench`.
    pub init: Option<String>,
    /// Probed fragments for `ensemble`; empty picks one representative per
    /// mirror pair.
    pub initial_states: Vec<String>,
    /// Strings decomposed by `map`.
    pub configs: Vec<String>,
    pub window: TimeWindow,
    /// Quench summaries average over grid points with `Ωt` at least this.
    pub average_from: f64,
    pub sector: usize,
    /// Snapshots per time step; 0 disables sampling in `quench`.
    pub shots: usize,
    pub seed: u64,
    pub spam: bool,
    pub spam_model: SpamModel,
    pub prep_errors: bool,
    pub postselect: PostselectSpec,
    pub disorder: DisorderConfig,
    /// Chain lengths swept by `fragments` and `scaling`.
    pub n_list: Vec<usize>,
    pub scaling: Vec<ScalingKind>,
    /// Chain lengths for the centre-distribution collapse.
    pub collapse: Vec<usize>,
    pub peak_n: Option<usize>,
    /// Write the full basis listing.
    pub dump: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            recipe: None,
            n_atoms: None,
            model: Model::Lgt,
            params: ParamsConfig::default(),
            max_range: 2,
            init: None,
            initial_states: Vec::new(),
            configs: Vec::new(),
            window: TimeWindow::default(),
            average_from: 0.0,
            sector: 5,
            shots: 0,
            seed: 0,
            spam: false,
            spam_model: SpamModel::default(),
            prep_errors: false,
            postselect: PostselectSpec::default(),
            disorder: DisorderConfig::default(),
            n_list: Vec::new(),
            scaling: vec![ScalingKind::Bulk, ScalingKind::Boundary],
            collapse: Vec::new(),
            peak_n: None,
            dump: false,
            out: PathBuf::from("fraglab-out"),
        }
    }
}

impl RunConfig {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms.expect("resolved before use")
    }

    pub fn params(&self) -> RydbergParams {
        self.params.resolve()
    }

    pub fn spam_model(&self) -> Option<SpamModel> {
        self.spam.then_some(self.spam_model)
    }
}

/// Flag overrides, applied last.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub recipe: Option<Recipe>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub n_atoms: Option<usize>,
    pub model: Option<Model>,
    pub init: Option<String>,
    pub tmax: Option<f64>,
    pub steps: Option<usize>,
    pub shots: Option<usize>,
    pub spam: Option<bool>,
    pub postselect: Option<PostselectSpec>,
}

/// Recursively overlays `top` onto `base`; objects merge, everything else
/// is replaced.
fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn read_file(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if !v.is_object() {
        return Err(CliError::Config(format!("{}: expected a JSON object", path.display())));
    }
    Ok(v)
}

/// Resolves defaults, then the recipe, then the file, then flags.
pub fn load(path: Option<&Path>, ov: &Overrides) -> Result<RunConfig, CliError> {
    let file = path.map(read_file).transpose()?;
    let recipe = match (&ov.recipe, file.as_ref().and_then(|f| f.get("recipe"))) {
        (Some(r), _) => Some(*r),
        (None, Some(v)) if !v.is_null() => Some(
            serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("recipe: {e}")))?,
        ),
        _ => None,
    };
    let base = recipe.map(|r| r.config()).unwrap_or_default();
    let mut value = serde_json::to_value(&base).expect("config serialises");
    if let Some(f) = file {
        merge(&mut value, f);
    }
    let mut cfg: RunConfig =
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("config: {e}")))?;
    cfg.recipe = recipe;

    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    if let Some(o) = &ov.out {
        cfg.out = o.clone();
    }
    if let Some(n) = ov.n_atoms {
        cfg.n_atoms = Some(n);
    }
    if let Some(m) = ov.model {
        cfg.model = m;
    }
    if let Some(i) = &ov.init {
        cfg.init = Some(i.clone());
    }
    if let Some(t) = ov.tmax {
        cfg.window.omega_t_end = t;
    }
    if let Some(s) = ov.steps {
        cfg.window.n_steps = s;
    }
    if let Some(s) = ov.shots {
        cfg.shots = s;
    }
    if let Some(s) = ov.spam {
        cfg.spam = s;
    }
    if let Some(p) = ov.postselect {
        cfg.postselect = p;
    }
    if cfg.n_atoms.is_none() {
        cfg.n_atoms = Some(cfg.init.as_ref().map_or(16, |s| s.chars().count()));
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let bad = |m: String| Err(CliError::Config(m));
    if cfg.n_atoms() == 0 {
        return bad("n_atoms must be at least 1".into());
    }
    if let Some(init) = &cfg.init {
        if init.chars().count() != cfg.n_atoms() {
            return bad(format!(
                "init has {} atoms but n_atoms is {}",
                init.chars().count(),
                cfg.n_atoms()
            ));
        }
    }
    TimeWindow::new(cfg.window.omega_t_start, cfg.window.omega_t_end, cfg.window.n_steps)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let p = &cfg.params;
    if !(p.omega_mhz > 0.0 && p.v1_mhz > 0.0 && p.spacing_um > 0.0) {
        return bad("omega_mhz, v1_mhz and spacing_um must be positive".into());
    }
    if !(1..=3).contains(&cfg.max_range) {
        return bad(format!("max_range must be 1..=3, got {}", cfg.max_range));
    }
    Ok(())
}
