//! Run configuration, read from TOML. Every section and key is optional.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use softdress::phase_factors::CrossMethod;
use softdress::photon_modes::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Phases,
    Cancellation,
    SpinRho,
    Softcount,
    Stationary,
    All,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Phases => "phases",
            Command::Cancellation => "cancellation",
            Command::SpinRho => "spin-rho",
            Command::Softcount => "softcount",
            Command::Stationary => "stationary",
            Command::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub out: PathBuf,
    pub seed: u64,
    /// Strict tolerance for the exact identities: the asymptotic phase
    /// cancellation and the free/dressed density-matrix difference.
    pub tolerance: f64,
    pub alpha: f64,
    pub phases: PhaseSection,
    pub cancellation: CancellationSection,
    pub spin: SpinSection,
    pub softcount: SoftcountSection,
    pub stationary: StationarySection,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::All,
            out: PathBuf::from("softdress-out"),
            seed: 1,
            tolerance: 1e-12,
            alpha: softdress::FINE_STRUCTURE,
            phases: PhaseSection::default(),
            cancellation: CancellationSection::default(),
            spin: SpinSection::default(),
            softcount: SoftcountSection::default(),
            stationary: StationarySection::default(),
            base_dir: PathBuf::from("."),
        }
    }
}

/// World lines and the `(t₀, t)` schedule shared by `phases` and
/// `cancellation`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseSection {
    pub v1: [f64; 3],
    pub v2: [f64; 3],
    pub x1: [f64; 3],
    pub x2: [f64; 3],
    pub t0: Vec<f64>,
    /// Used when `t` is absent: `t = ratio · t₀`.
    pub ratio: f64,
    pub t: Option<Vec<f64>>,
    /// Relative agreement required between quadrature and the full closed form.
    pub closed_form_tolerance: f64,
}

impl Default for PhaseSection {
    fn default() -> Self {
        Self {
            v1: [0.0; 3],
            v2: [0.6, 0.0, 0.0],
            x1: [1.0, 0.0, 0.0],
            x2: [0.0; 3],
            t0: vec![1e3, 1e4, 1e5],
            ratio: 10.0,
            t: None,
            closed_form_tolerance: 1e-6,
        }
    }
}

impl PhaseSection {
    pub fn schedule(&self) -> Vec<(f64, f64)> {
        match &self.t {
            Some(t) => self.t0.iter().copied().zip(t.iter().copied()).collect(),
            None => self.t0.iter().map(|&t0| (t0, self.ratio * t0)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CancellationSection {
    pub method: CrossMethod,
    /// Bound on the last residual when `method` is not `asymptotic`.
    pub sweep_tolerance: f64,
}

impl Default for CancellationSection {
    fn default() -> Self {
        Self {
            method: CrossMethod::Asymptotic,
            sweep_tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinSection {
    /// JSON state file, relative to the config file. Without it a random
    /// state is drawn from `seed`.
    pub state: Option<PathBuf>,
    pub random_pairs: usize,
    pub x1: [f64; 3],
    pub x2: [f64; 3],
    pub t: f64,
    pub t0: f64,
}

impl Default for SpinSection {
    fn default() -> Self {
        Self {
            state: None,
            random_pairs: 20,
            x1: [1.0, 0.0, 0.0],
            x2: [0.0, 2.0, 0.0],
            t: 1e4,
            t0: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SoftcountSection {
    pub v1: [f64; 3],
    pub v2: [f64; 3],
    pub t: f64,
    pub ir_cutoffs: Vec<f64>,
    pub grid: GridSpec,
    pub min_r_squared: f64,
    pub max_dressed: f64,
}

impl Default for SoftcountSection {
    fn default() -> Self {
        Self {
            v1: [0.0, 0.0, 0.5],
            v2: [0.3, 0.0, -0.2],
            t: 1.0,
            ir_cutoffs: vec![1e-3, 1e-4, 1e-5, 1e-6],
            grid: GridSpec::default(),
            min_r_squared: 0.99,
            max_dressed: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StationarySection {
    pub pair_creation: EnvelopeRun,
    pub scattering: EnvelopeRun,
    /// `|I(t_last)|/|I(t_first)|` must fall below this for pair creation.
    pub max_decay_ratio: f64,
    /// Relative change of `I` over the last two times for scattering.
    pub max_cauchy_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeRun {
    pub momentum: [f64; 3],
    pub center: [f64; 3],
    pub width_parallel: f64,
    pub width_perp: f64,
    pub times: Vec<f64>,
}

impl Default for StationarySection {
    fn default() -> Self {
        Self {
            pair_creation: EnvelopeRun {
                momentum: [0.0; 3],
                center: [0.0; 3],
                width_parallel: 0.02,
                width_perp: 0.02,
                times: vec![10.0, 100.0, 1000.0],
            },
            scattering: EnvelopeRun {
                momentum: [1000.0, 0.0, 0.0],
                center: [0.01, 0.0, 0.0],
                width_parallel: 0.002,
                width_perp: 1e-5,
                times: vec![100.0, 1000.0, 10000.0],
            },
            max_decay_ratio: 0.1,
            max_cauchy_gap: 0.01,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.alpha.is_finite() && self.alpha >= 0.0,
            "alpha must be finite and non-negative"
        );
        ensure!(
            self.tolerance.is_finite() && self.tolerance > 0.0,
            "tolerance must be positive"
        );

        let ph = &self.phases;
        ensure!(!ph.t0.is_empty(), "phases.t0 must not be empty");
        if let Some(t) = &ph.t {
            ensure!(
                t.len() == ph.t0.len(),
                "phases.t has {} entries but phases.t0 has {}",
                t.len(),
                ph.t0.len()
            );
        } else {
            ensure!(ph.ratio.is_finite() && ph.ratio > 0.0, "phases.ratio must be positive");
        }
        for (t0, t) in ph.schedule() {
            if !(t.is_finite() && t0.is_finite() && t * t0 > 0.0) {
                bail!("phases schedule entry t0 = {t0}, t = {t} needs t/t0 > 0");
            }
        }

        let sp = &self.spin;
        ensure!(sp.t * sp.t0 > 0.0, "spin.t/spin.t0 must be positive");
        if sp.state.is_none() {
            ensure!(sp.random_pairs > 0, "spin.random_pairs must be at least 1");
        }
        if let Some(p) = &sp.state {
            let p = self.resolve(p);
            ensure!(p.is_file(), "spin.state {} does not exist", p.display());
        }

        let sc = &self.softcount;
        ensure!(
            sc.ir_cutoffs.len() >= 2,
            "softcount.ir_cutoffs needs at least two entries"
        );

        for (name, run) in [
            ("pair_creation", &self.stationary.pair_creation),
            ("scattering", &self.stationary.scattering),
        ] {
            ensure!(
                run.times.len() >= 2,
                "stationary.{name}.times needs at least two entries"
            );
        }
        Ok(())
    }
}
