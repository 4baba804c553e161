//! Run configuration: a TOML file, overridden by command-line flags, resolved
//! into concrete parameters. The resolved form is embedded in every output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tcopo::criteria::{OmegaGrid, Sign};
use tcopo::model::threshold_pump;
use tcopo::sde::TrajectoryConfig;
use tcopo::SystemParams;

use crate::error::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Pump as a multiple of the threshold. Exactly one of `ratio` and
    /// `pump` must be given.
    pub ratio: Option<f64>,
    /// Absolute pump amplitude `E`, applied to all three pump modes.
    pub pump: Option<f64>,
    /// Overrides `sde.seed` when set.
    pub seed: Option<u64>,
    pub params: ParamsSection,
    pub omega: OmegaSection,
    pub epr: EprSection,
    pub sde: TrajectoryConfig,
    pub initial: InitialSection,
    pub output: OutputSection,
}

/// Rates in units of the signal decay rate by default (`kappa = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSection {
    pub chi: [f64; 3],
    pub gamma: f64,
    pub kappa: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        let r = SystemParams::reference(0.0);
        Self { chi: r.chi, gamma: r.gamma, kappa: r.kappa }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OmegaSection {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for OmegaSection {
    fn default() -> Self {
        Self { min: -6.0, max: 6.0, step: 0.01 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EprSection {
    /// Sign in the combined quadratures `X_j ± X_k`, `Y_j ± Y_k`.
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// The semiclassical steady state.
    #[default]
    Steady,
    /// Every amplitude zero.
    Zero,
    /// Pumps at `E/γ` with empty signals shifted by `perturbation`; the
    /// start for watching the signals build up above threshold.
    PerturbedVacuum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    pub state: InitialState,
    pub perturbation: f64,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self { state: InitialState::Steady, perturbation: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Format,
    /// Standard output when unset.
    pub path: Option<PathBuf>,
    /// Optional CSV dump of trajectory 0 from the `sde` command.
    pub dump: Option<PathBuf>,
}

/// Flag values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub ratio: Option<f64>,
    pub pump: Option<f64>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_step: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn apply(&mut self, o: &Overrides) {
        // a pump flag replaces whatever the file chose
        if o.ratio.is_some() || o.pump.is_some() {
            self.ratio = o.ratio;
            self.pump = o.pump;
        }
        self.omega.min = o.omega_min.unwrap_or(self.omega.min);
        self.omega.max = o.omega_max.unwrap_or(self.omega.max);
        self.omega.step = o.omega_step.unwrap_or(self.omega.step);
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        self.output.format = o.format.unwrap_or(self.output.format);
        if o.out.is_some() {
            self.output.path.clone_from(&o.out);
        }
    }

    /// Checks the configuration and computes the concrete parameters. The
    /// returned config has the seed folded into `sde.seed` and both `ratio`
    /// and `pump` filled in.
    pub fn resolve(mut self) -> Result<Resolved, CliError> {
        let base = SystemParams { chi: self.params.chi, gamma: self.params.gamma, kappa: self.params.kappa, pump: [0.0; 3] };
        let threshold = threshold_pump(&base).map_err(CliError::Core)?;
        let pump = match (self.ratio, self.pump) {
            (Some(r), None) => r * threshold,
            (None, Some(e)) => e,
            _ => return Err(CliError::Config("exactly one of `ratio` and `pump` must be given".into())),
        };
        if !(pump.is_finite() && pump >= 0.0) {
            return Err(CliError::Config(format!("pump must be finite and non-negative, got {pump}")));
        }
        self.ratio = Some(pump / threshold);
        self.pump = Some(pump);
        if let Some(seed) = self.seed {
            self.sde.seed = seed;
        }
        self.seed = Some(self.sde.seed);
        let o = self.omega;
        if !(o.min.is_finite() && o.max.is_finite() && o.min <= o.max && o.step > 0.0) {
            return Err(CliError::Config(format!(
                "frequency grid must be increasing with a positive step (min {}, max {}, step {})",
                o.min, o.max, o.step
            )));
        }
        if !(self.initial.perturbation.is_finite()) {
            return Err(CliError::Config("initial.perturbation must be finite".into()));
        }
        let grid = OmegaGrid::with_step(o.min, o.max, o.step).map_err(CliError::Core)?;
        self.sde.check().map_err(CliError::Core)?;
        let params = base.with_pump(pump);
        params.check().map_err(CliError::Core)?;
        Ok(Resolved { params, threshold, grid, config: self })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration is always representable in TOML")
    }
}

/// A checked configuration with its derived quantities.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: RunConfig,
    pub params: SystemParams,
    pub threshold: f64,
    pub grid: OmegaGrid,
}

impl Resolved {
    pub fn ratio(&self) -> f64 {
        self.config.ratio.expect("set by resolve")
    }

    pub fn pump(&self) -> f64 {
        self.config.pump.expect("set by resolve")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_ratio(r: f64) -> RunConfig {
        RunConfig { ratio: Some(r), ..RunConfig::default() }
    }

    #[test]
    fn empty_file_uses_reference_parameters() {
        let c = RunConfig::parse("ratio = 0.9").unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.threshold, 500.0);
        assert_eq!(r.pump(), 450.0);
        assert_eq!(r.params, SystemParams::reference(450.0));
        assert_eq!(r.grid.points, 1201);
        assert_eq!(r.config.seed, Some(42));
    }

    #[test]
    fn full_file_round_trips() {
        let text = r#"
            pump = 550.0
            seed = 7
            [params]
            chi = [0.02, 0.02, 0.02]
            gamma = 5.0
            kappa = 1.0
            [omega]
            min = 0.0
            max = 3.0
            step = 0.5
            [epr]
            sign = "minus"
            [sde]
            dt = 0.002
            n_traj = 10
            scheme = "euler-maruyama"
            noise = false
            [initial]
            state = "perturbed-vacuum"
            perturbation = 0.01
            [output]
            format = "json"
        "#;
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.epr.sign, Sign::Minus);
        assert_eq!(c.output.format, Format::Json);
        assert_eq!(c.initial.state, InitialState::PerturbedVacuum);
        let r = c.clone().resolve().unwrap();
        assert_eq!(r.threshold, 125.0);
        assert_eq!(r.config.sde.seed, 7);
        assert_eq!(r.grid.points, 7);
        let again = RunConfig::parse(&r.config.to_toml()).unwrap();
        assert_eq!(again, r.config);
    }

    #[test]
    fn exactly_one_pump_setting() {
        assert!(matches!(RunConfig::default().resolve(), Err(CliError::Config(_))));
        let both = RunConfig { ratio: Some(0.9), pump: Some(450.0), ..RunConfig::default() };
        assert!(matches!(both.resolve(), Err(CliError::Config(_))));
    }

    #[test]
    fn flags_override_file() {
        let mut c = RunConfig { pump: Some(100.0), ..RunConfig::default() };
        c.apply(&Overrides { ratio: Some(1.1), omega_step: Some(0.1), seed: Some(3), ..Overrides::default() });
        let r = c.resolve().unwrap();
        assert!((r.pump() - 550.0).abs() < 1e-9);
        assert_eq!(r.grid.points, 121);
        assert_eq!(r.config.sde.seed, 3);
    }

    #[test]
    fn rejects_bad_grids_and_unknown_keys() {
        let mut c = with_ratio(0.9);
        c.omega = OmegaSection { min: 1.0, max: -1.0, step: 0.1 };
        assert!(matches!(c.resolve(), Err(CliError::Config(_))));
        let mut c = with_ratio(0.9);
        c.omega.step = 0.0;
        assert!(matches!(c.resolve(), Err(CliError::Config(_))));
        assert!(RunConfig::parse("ratio = 0.9\nbogus = 1").is_err());
        assert!(RunConfig::parse("[sde]\nsteps = 3").is_err());
    }

    #[test]
    fn bad_physics_is_a_core_error() {
        let mut c = with_ratio(0.9);
        c.params.gamma = -1.0;
        assert!(matches!(c.resolve(), Err(CliError::Core(tcopo::Error::InvalidParams(_)))));
        let c = RunConfig { pump: Some(-5.0), ..RunConfig::default() };
        assert!(matches!(c.resolve(), Err(CliError::Config(_))));
    }
}
