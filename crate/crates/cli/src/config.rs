//! Experiment configuration files.
//!
//! A config is one TOML document:
//!
//! ```toml
//! kind = "charfn-test"
//! master_seed = 7
//!
//! [output]
//! dir = "runs/charfn"
//!
//! [params]
//! paths = 100000
//! subordinator = { intensity = { type = "stable", beta = 0.9 } }
//! ```
//!
//! `kind` selects the `[params]` schema. Unknown keys are rejected.

use levy_ou::subordinator::{Scheme, SubordinatorKind, SubordinatorSpec, DEFAULT_CUTOFF};
use levy_ou::regularity::Profile;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SubordinatorCheck,
    CharfnTest,
    OuSample,
    Regularity,
    Blowup,
    Circle,
    Burgers,
    Bounds,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::SubordinatorCheck,
        Kind::CharfnTest,
        Kind::OuSample,
        Kind::Regularity,
        Kind::Blowup,
        Kind::Circle,
        Kind::Burgers,
        Kind::Bounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::SubordinatorCheck => "subordinator-check",
            Kind::CharfnTest => "charfn-test",
            Kind::OuSample => "ou-sample",
            Kind::Regularity => "regularity",
            Kind::Blowup => "blowup",
            Kind::Circle => "circle",
            Kind::Burgers => "burgers",
            Kind::Bounds => "bounds",
        }
    }

    /// Result exercised by the experiment.
    pub fn result_tag(self) -> &'static str {
        match self {
            Kind::SubordinatorCheck => "Thm 2.2",
            Kind::CharfnTest => "Thm 2.3",
            Kind::OuSample => "Thm 2.5",
            Kind::Regularity => "Thm 1.1",
            Kind::Blowup => "Thm 7.1",
            Kind::Circle => "Thm 6.1",
            Kind::Burgers => "Thm 8.7",
            Kind::Bounds => "Prop 8.8",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Kind::SubordinatorCheck => "E exp(-rZ(T)) against exp(-T psi(r))",
            Kind::CharfnTest => "characteristic functional of the subordinated noise",
            Kind::OuSample => "OU field samples against the characteristic-functional quadrature",
            Kind::Regularity => "Hoelder exponent of OU samples against the critical exponent",
            Kind::Blowup => "post-jump sup of X2 in a space too strong for the noise",
            Kind::Circle => "convolution on the circle under grid refinement",
            Kind::Burgers => "stochastic Burgers solve and weak-form residuals",
            Kind::Bounds => "a priori bounds of the modified Burgers equation",
        }
    }
}

/// Path resolution of the subordinator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SchemeConfig {
    Exact { cells: usize },
    Cutoff { epsilon: f64 },
}

impl From<SchemeConfig> for Scheme {
    fn from(s: SchemeConfig) -> Self {
        match s {
            SchemeConfig::Exact { cells } => Scheme::Exact { cells },
            SchemeConfig::Cutoff { epsilon } => Scheme::Cutoff { epsilon },
        }
    }
}

fn default_scheme(sub: &SubordinatorSpec) -> Scheme {
    match sub.kind() {
        SubordinatorKind::Stable(_) => Scheme::Exact { cells: 1 },
        _ => Scheme::Cutoff { epsilon: DEFAULT_CUTOFF },
    }
}

fn stable(beta: f64) -> SubordinatorSpec {
    SubordinatorSpec::stable(beta).expect("valid default")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SubordinatorCheck {
    pub subordinator: SubordinatorSpec,
    pub horizon: f64,
    pub paths: usize,
    pub r: Vec<f64>,
    pub scheme: Option<SchemeConfig>,
    pub sigmas: f64,
    /// Exponents `p` reported for `Sub(p)` membership.
    pub sub_p: Vec<f64>,
}

impl Default for SubordinatorCheck {
    fn default() -> Self {
        Self {
            subordinator: stable(0.5),
            horizon: 1.0,
            paths: 100_000,
            r: vec![0.5, 1.0, 2.0],
            scheme: None,
            sigmas: 4.0,
            sub_p: vec![0.5, 1.0, 1.5, 2.0],
        }
    }
}

impl SubordinatorCheck {
    pub fn scheme(&self) -> Scheme {
        self.scheme.map(Into::into).unwrap_or_else(|| default_scheme(&self.subordinator))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CharfnTest {
    pub subordinator: SubordinatorSpec,
    pub modes: usize,
    /// Noise weights `w_j = j^weight_exponent`.
    pub weight_exponent: f64,
    pub functionals: usize,
    pub times: Vec<f64>,
    pub paths: usize,
    pub scheme: Option<SchemeConfig>,
    pub sigmas: f64,
}

impl Default for CharfnTest {
    fn default() -> Self {
        Self {
            subordinator: stable(0.9),
            modes: 64,
            weight_exponent: 0.5,
            functionals: 5,
            times: vec![0.5, 1.0],
            paths: 100_000,
            scheme: None,
            sigmas: 4.0,
        }
    }
}

impl CharfnTest {
    /// Exact stable increments when the times sit on an equispaced grid.
    pub fn scheme(&self) -> Scheme {
        if let Some(s) = self.scheme {
            return s.into();
        }
        let t = self.times.last().copied().unwrap_or(1.0);
        let k = self.times.len();
        let equispaced = self.times.iter().enumerate().all(|(i, s)| (s - t * (i + 1) as f64 / k as f64).abs() < 1e-12);
        match self.subordinator.kind() {
            SubordinatorKind::Stable(_) if equispaced => Scheme::Exact { cells: k },
            _ => Scheme::Cutoff { epsilon: DEFAULT_CUTOFF },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OuSample {
    pub subordinator: SubordinatorSpec,
    pub gamma: f64,
    pub dim: usize,
    pub per_axis: usize,
    /// Noise weights `w_j = μ_j^weight_exponent`.
    pub weight_exponent: f64,
    /// Pair `k` uses `times[k % times.len()]`.
    pub times: Vec<f64>,
    pub pairs: usize,
    pub paths: usize,
    pub scheme: Option<SchemeConfig>,
    pub sigmas: f64,
    pub quad_tol: f64,
    /// Physical grid for the exported sample (`dim = 1` only).
    pub grid_m: usize,
}

impl Default for OuSample {
    fn default() -> Self {
        Self {
            subordinator: stable(0.5),
            gamma: 1.0,
            dim: 1,
            per_axis: 16,
            weight_exponent: 0.25,
            times: vec![0.25, 0.5, 1.0],
            pairs: 10,
            paths: 40_000,
            scheme: None,
            sigmas: 4.0,
            quad_tol: 1e-10,
            grid_m: 256,
        }
    }
}

impl OuSample {
    pub fn scheme(&self) -> Scheme {
        self.scheme.map(Into::into).unwrap_or(Scheme::Cutoff { epsilon: DEFAULT_CUTOFF })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Regularity {
    pub subordinator: SubordinatorSpec,
    pub gamma: f64,
    pub modes: usize,
    pub grid_m: usize,
    pub paths: usize,
    pub time: f64,
    pub scheme: Option<SchemeConfig>,
    /// Accepted range of the ensemble-mean exponent.
    pub accept_min: Option<f64>,
    pub accept_max: Option<f64>,
}

impl Default for Regularity {
    fn default() -> Self {
        Self {
            subordinator: SubordinatorSpec::drift_only(1.0).expect("valid default"),
            gamma: 1.0,
            modes: 2048,
            grid_m: 4096,
            paths: 20,
            time: 1.0,
            scheme: None,
            accept_min: None,
            accept_max: None,
        }
    }
}

impl Regularity {
    pub fn scheme(&self) -> Scheme {
        self.scheme.map(Into::into).unwrap_or(Scheme::Cutoff { epsilon: 1e-8 })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Blowup {
    pub subordinator: SubordinatorSpec,
    pub gamma: f64,
    /// Sobolev orders of `F` and `U`.
    pub f_order: f64,
    pub u_order: f64,
    pub threshold: f64,
    pub truncations: Vec<usize>,
    pub window: Option<f64>,
    pub window_points: usize,
    pub horizon: f64,
    pub epsilon: f64,
    /// Conclusive seeds wanted and attempts allowed.
    pub seeds: usize,
    pub max_attempts: usize,
    pub min_success: usize,
    pub min_slope: f64,
    pub max_u_ratio: f64,
}

impl Default for Blowup {
    fn default() -> Self {
        Self {
            subordinator: stable(0.5),
            gamma: 1.0,
            f_order: 1.0,
            u_order: -1.0,
            threshold: 1.0,
            truncations: (6..=12).map(|k| 1 << k).collect(),
            window: None,
            window_points: 64,
            horizon: 1.0,
            epsilon: 1e-3,
            seeds: 10,
            max_attempts: 100,
            min_success: 8,
            min_slope: 0.1,
            max_u_ratio: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircleExpectation {
    Bounded,
    Grows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Circle {
    pub subordinator: SubordinatorSpec,
    pub profile: Profile,
    /// Resolution of the driving path.
    pub cells: usize,
    pub grids: Vec<usize>,
    pub epsilon: f64,
    pub expect: Option<CircleExpectation>,
}

impl Default for Circle {
    fn default() -> Self {
        Self {
            subordinator: stable(0.5),
            profile: Profile::Fourier { theta: 0.8, modes: 256, seed: 1 },
            cells: 4096,
            grids: (6..=12).map(|k| 1 << k).collect(),
            epsilon: 1e-6,
            expect: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Burgers {
    pub subordinator: SubordinatorSpec,
    /// `H = H^{ϑ,2}`.
    pub theta: f64,
    pub horizon: f64,
    pub steps: usize,
    pub modes: usize,
    pub epsilon: f64,
    /// Sine coefficients of `u0` and of a time-constant forcing.
    pub u0: Vec<f64>,
    pub forcing: Vec<f64>,
    pub test_modes: usize,
    pub residual_tol: f64,
    /// Rows written to `snapshots.csv`.
    pub snapshots: usize,
    pub grid_m: usize,
}

impl Default for Burgers {
    fn default() -> Self {
        Self {
            subordinator: stable(0.5),
            theta: 0.4,
            horizon: 0.1,
            steps: 1000,
            modes: 256,
            epsilon: 1e-4,
            u0: vec![0.3, 0.2],
            forcing: vec![1.0, 0.0, -0.5],
            test_modes: 5,
            residual_tol: 1e-3,
            snapshots: 11,
            grid_m: 256,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Bounds {
    pub instances: usize,
    pub modes: usize,
    pub steps_per_unit: usize,
    pub horizons: Vec<f64>,
    /// Range of `|v0|`.
    pub v0_norm: (f64, f64),
    pub z_amplitude: f64,
    pub g_amplitude: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            instances: 50,
            modes: 32,
            steps_per_unit: 4000,
            horizons: vec![0.5, 1.0],
            v0_norm: (0.1, 0.7),
            z_amplitude: 1.0,
            g_amplitude: 3.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum Experiment {
    SubordinatorCheck(SubordinatorCheck),
    CharfnTest(CharfnTest),
    OuSample(OuSample),
    Regularity(Regularity),
    Blowup(Blowup),
    Circle(Circle),
    Burgers(Burgers),
    Bounds(Bounds),
}

impl Experiment {
    pub fn kind(&self) -> Kind {
        match self {
            Experiment::SubordinatorCheck(_) => Kind::SubordinatorCheck,
            Experiment::CharfnTest(_) => Kind::CharfnTest,
            Experiment::OuSample(_) => Kind::OuSample,
            Experiment::Regularity(_) => Kind::Regularity,
            Experiment::Blowup(_) => Kind::Blowup,
            Experiment::Circle(_) => Kind::Circle,
            Experiment::Burgers(_) => Kind::Burgers,
            Experiment::Bounds(_) => Kind::Bounds,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub output: Output,
    #[serde(flatten)]
    pub experiment: Experiment,
}

/// Rejected configuration, with the location when known.
#[derive(Debug)]
pub struct ConfigError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.path.display())?;
        if let Some(l) = self.line {
            write!(f, ":{l}")?;
        }
        if let Some(field) = &self.field {
            write!(f, ": field `{field}`")?;
        }
        write!(f, ": {}", self.message.trim_end())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Deserialize)]
struct Header {
    kind: Kind,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document<P> {
    #[allow(dead_code)]
    kind: Kind,
    master_seed: u64,
    #[serde(default)]
    output: Output,
    #[serde(default)]
    params: P,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of `key = …` inside `[params]` (or at top level).
fn locate(text: &str, key: &str) -> Option<usize> {
    let mut in_params = false;
    let mut top = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            in_params = line == "[params]";
            continue;
        }
        let Some((k, _)) = line.split_once('=') else { continue };
        if k.trim() == key {
            if in_params {
                return Some(i + 1);
            }
            top.get_or_insert(i + 1);
        }
    }
    top
}

fn parse_error(path: &Path, text: &str, e: toml::de::Error) -> ConfigError {
    ConfigError { path: path.to_owned(), line: e.span().map(|s| line_of(text, s.start)), field: None, message: e.to_string() }
}

fn field_error(path: &Path, text: &str, field: &str, message: String) -> ConfigError {
    ConfigError { path: path.to_owned(), line: locate(text, field), field: Some(format!("params.{field}")), message }
}

type Check = std::result::Result<(), (&'static str, String)>;

fn positive(field: &'static str, x: f64) -> Check {
    if x.is_finite() && x > 0.0 { Ok(()) } else { Err((field, format!("must be finite and positive, got {x}"))) }
}

fn at_least(field: &'static str, x: usize, min: usize) -> Check {
    if x >= min { Ok(()) } else { Err((field, format!("must be at least {min}, got {x}"))) }
}

fn scheme_ok(field: &'static str, s: Option<SchemeConfig>, sub: &SubordinatorSpec) -> Check {
    match s {
        Some(SchemeConfig::Exact { cells }) => {
            if !matches!(sub.kind(), SubordinatorKind::Stable(_)) {
                return Err((field, "exact increments need a stable subordinator".into()));
            }
            at_least(field, cells, 1)
        }
        Some(SchemeConfig::Cutoff { epsilon }) => positive(field, epsilon),
        None => Ok(()),
    }
}

fn increasing(field: &'static str, v: &[f64]) -> Check {
    if v.is_empty() || v[0] <= 0.0 || v.windows(2).any(|w| w[1] <= w[0]) || v.iter().any(|x| !x.is_finite()) {
        return Err((field, "must be a nonempty increasing list of positive numbers".into()));
    }
    Ok(())
}

impl SubordinatorCheck {
    fn validate(&self) -> Check {
        positive("horizon", self.horizon)?;
        at_least("paths", self.paths, 2)?;
        positive("sigmas", self.sigmas)?;
        if self.r.is_empty() || self.r.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(("r", "must be a nonempty list of nonnegative numbers".into()));
        }
        if self.sub_p.iter().any(|p| !(*p > 0.0 && *p <= 2.0)) {
            return Err(("sub_p", "exponents must lie in (0, 2]".into()));
        }
        scheme_ok("scheme", self.scheme, &self.subordinator)
    }
}

impl CharfnTest {
    fn validate(&self) -> Check {
        at_least("modes", self.modes, 1)?;
        at_least("functionals", self.functionals, 1)?;
        at_least("paths", self.paths, 2)?;
        positive("sigmas", self.sigmas)?;
        if !self.weight_exponent.is_finite() {
            return Err(("weight_exponent", "must be finite".into()));
        }
        increasing("times", &self.times)?;
        scheme_ok("scheme", self.scheme, &self.subordinator)?;
        if let Some(SchemeConfig::Exact { cells }) = self.scheme {
            let t = *self.times.last().unwrap();
            let on_grid = self.times.iter().all(|s| {
                let k = s / t * cells as f64;
                (k - k.round()).abs() < 1e-9
            });
            if !on_grid {
                return Err(("scheme", format!("times must be multiples of {t}/{cells} for exact increments")));
            }
        }
        Ok(())
    }
}

impl OuSample {
    fn validate(&self) -> Check {
        positive("gamma", self.gamma)?;
        if !(1..=3).contains(&self.dim) {
            return Err(("dim", format!("must be 1, 2 or 3, got {}", self.dim)));
        }
        at_least("per_axis", self.per_axis, 1)?;
        increasing("times", &self.times)?;
        if !self.weight_exponent.is_finite() {
            return Err(("weight_exponent", "must be finite".into()));
        }
        at_least("pairs", self.pairs, 1)?;
        at_least("paths", self.paths, 2)?;
        positive("sigmas", self.sigmas)?;
        positive("quad_tol", self.quad_tol)?;
        if !self.grid_m.is_power_of_two() || self.grid_m < self.per_axis {
            return Err(("grid_m", format!("must be a power of two of at least per_axis, got {}", self.grid_m)));
        }
        scheme_ok("scheme", self.scheme, &self.subordinator)
    }
}

impl Regularity {
    fn validate(&self) -> Check {
        positive("gamma", self.gamma)?;
        at_least("modes", self.modes, 1)?;
        if !self.grid_m.is_power_of_two() || self.grid_m < 64 {
            return Err(("grid_m", format!("must be a power of two of at least 64, got {}", self.grid_m)));
        }
        at_least("paths", self.paths, 2)?;
        positive("time", self.time)?;
        if let (Some(a), Some(b)) = (self.accept_min, self.accept_max) {
            if a > b {
                return Err(("accept_min", format!("exceeds accept_max ({a} > {b})")));
            }
        }
        scheme_ok("scheme", self.scheme, &self.subordinator)
    }
}

impl Blowup {
    fn validate(&self) -> Check {
        positive("gamma", self.gamma)?;
        positive("threshold", self.threshold)?;
        positive("horizon", self.horizon)?;
        positive("epsilon", self.epsilon)?;
        if self.truncations.len() < 2 || self.truncations[0] == 0 || self.truncations.windows(2).any(|w| w[1] <= w[0]) {
            return Err(("truncations", "must hold at least two increasing positive sizes".into()));
        }
        if let Some(w) = self.window {
            positive("window", w)?;
        }
        at_least("window_points", self.window_points, 2)?;
        at_least("seeds", self.seeds, 1)?;
        at_least("max_attempts", self.max_attempts, self.seeds)?;
        if self.min_success > self.seeds {
            return Err(("min_success", format!("exceeds seeds ({} > {})", self.min_success, self.seeds)));
        }
        positive("max_u_ratio", self.max_u_ratio)
    }
}

impl Circle {
    fn validate(&self) -> Check {
        at_least("cells", self.cells, 2)?;
        positive("epsilon", self.epsilon)?;
        if self.grids.is_empty() || self.grids.iter().any(|g| *g == 0 || !self.cells.is_multiple_of(*g)) {
            return Err(("grids", format!("every grid must divide cells = {}", self.cells)));
        }
        if self.grids.windows(2).any(|w| w[1] <= w[0]) {
            return Err(("grids", "must be increasing".into()));
        }
        match self.profile {
            Profile::Constant { value } if !value.is_finite() => Err(("profile", "value must be finite".into())),
            Profile::Fourier { theta, modes, .. } if !theta.is_finite() || modes == 0 => {
                Err(("profile", "needs finite theta and at least one mode".into()))
            }
            _ => Ok(()),
        }
    }
}

impl Burgers {
    fn validate(&self) -> Check {
        if !(self.theta > 0.0 && self.theta < 0.5) {
            return Err(("theta", format!("must lie in (0, 1/2), got {}", self.theta)));
        }
        positive("horizon", self.horizon)?;
        at_least("steps", self.steps, 1)?;
        at_least("modes", self.modes, 1)?;
        positive("epsilon", self.epsilon)?;
        if self.u0.len() > self.modes || self.u0.iter().any(|x| !x.is_finite()) {
            return Err(("u0", format!("needs at most {} finite coefficients", self.modes)));
        }
        if self.forcing.len() > self.modes || self.forcing.iter().any(|x| !x.is_finite()) {
            return Err(("forcing", format!("needs at most {} finite coefficients", self.modes)));
        }
        if self.test_modes == 0 || self.test_modes > self.modes {
            return Err(("test_modes", format!("must lie in 1..={}", self.modes)));
        }
        positive("residual_tol", self.residual_tol)?;
        at_least("snapshots", self.snapshots, 2)?;
        at_least("grid_m", self.grid_m, 2)
    }
}

impl Bounds {
    fn validate(&self) -> Check {
        at_least("instances", self.instances, 1)?;
        at_least("modes", self.modes, 1)?;
        at_least("steps_per_unit", self.steps_per_unit, 1)?;
        increasing("horizons", &self.horizons)?;
        let (a, b) = self.v0_norm;
        if !(a >= 0.0 && b >= a && b.is_finite()) {
            return Err(("v0_norm", format!("needs 0 <= low <= high, got ({a}, {b})")));
        }
        if !(self.z_amplitude >= 0.0 && self.g_amplitude >= 0.0) {
            return Err(("z_amplitude", "amplitudes must be nonnegative".into()));
        }
        Ok(())
    }
}

fn typed<P>(path: &Path, text: &str, wrap: fn(P) -> Experiment, validate: fn(&P) -> Check) -> Result<ExperimentConfig, ConfigError>
where
    P: for<'de> Deserialize<'de> + Default,
{
    let doc: Document<P> = toml::from_str(text).map_err(|e| parse_error(path, text, e))?;
    validate(&doc.params).map_err(|(field, msg)| field_error(path, text, field, msg))?;
    Ok(ExperimentConfig { master_seed: doc.master_seed, output: doc.output, experiment: wrap(doc.params) })
}

/// Parses and validates a config document.
pub fn parse(path: &Path, text: &str) -> Result<ExperimentConfig, ConfigError> {
    let header: Header = toml::from_str(text).map_err(|e| parse_error(path, text, e))?;
    match header.kind {
        Kind::SubordinatorCheck => typed(path, text, Experiment::SubordinatorCheck, SubordinatorCheck::validate),
        Kind::CharfnTest => typed(path, text, Experiment::CharfnTest, CharfnTest::validate),
        Kind::OuSample => typed(path, text, Experiment::OuSample, OuSample::validate),
        Kind::Regularity => typed(path, text, Experiment::Regularity, Regularity::validate),
        Kind::Blowup => typed(path, text, Experiment::Blowup, Blowup::validate),
        Kind::Circle => typed(path, text, Experiment::Circle, Circle::validate),
        Kind::Burgers => typed(path, text, Experiment::Burgers, Burgers::validate),
        Kind::Bounds => typed(path, text, Experiment::Bounds, Bounds::validate),
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        path: path.to_owned(),
        line: None,
        field: None,
        message: format!("cannot read config: {e}"),
    })?;
    parse(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Result<ExperimentConfig, ConfigError> {
        parse(Path::new("t.toml"), text)
    }

    #[test]
    fn defaults_fill_missing_params() {
        let c = p("kind = \"bounds\"\nmaster_seed = 3\n").unwrap();
        assert_eq!(c.master_seed, 3);
        let Experiment::Bounds(b) = c.experiment else { panic!() };
        assert_eq!(b.instances, 50);
    }

    #[test]
    fn unknown_field_reports_line() {
        let e = p("kind = \"charfn-test\"\nmaster_seed = 1\n[params]\npaths = 10\nmodez = 4\n").unwrap_err();
        assert_eq!(e.line, Some(5), "{e}");
        assert!(e.message.contains("modez"), "{e}");
    }

    #[test]
    fn invalid_subordinator_is_rejected_at_load() {
        let e = p("kind = \"subordinator-check\"\nmaster_seed = 1\n[params]\nsubordinator = { intensity = { type = \"stable\", beta = 1.5 } }\n")
            .unwrap_err();
        assert_eq!(e.line, Some(4), "{e}");
    }

    #[test]
    fn validation_names_the_field() {
        let e = p("kind = \"burgers\"\nmaster_seed = 1\n[params]\ntheta = 0.7\n").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("params.theta"));
        assert_eq!(e.line, Some(4));
    }

    #[test]
    fn shipped_configs_load() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        let mut kinds = Vec::new();
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let c = load(&path).unwrap_or_else(|e| panic!("{e}"));
            kinds.push(c.experiment.kind());
        }
        for k in Kind::ALL {
            assert!(kinds.contains(&k), "no config for {}", k.name());
        }
    }

    #[test]
    fn unknown_kind() {
        let e = p("kind = \"nope\"\nmaster_seed = 1\n").unwrap_err();
        assert_eq!(e.line, Some(1), "{e}");
    }

    #[test]
    fn charfn_default_scheme_is_exact_on_equispaced_times() {
        let c = CharfnTest::default();
        assert_eq!(c.scheme(), Scheme::Exact { cells: 2 });
        let c = CharfnTest { times: vec![0.3, 1.0], ..CharfnTest::default() };
        assert!(matches!(c.scheme(), Scheme::Cutoff { .. }));
    }
}
