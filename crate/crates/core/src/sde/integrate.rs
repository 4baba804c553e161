use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::equations::{drift, noise_roots, noise_with_roots, tracked_noise_roots};
use super::rng::{complex_wiener, trajectory_rng};
use super::stats::{EnsembleStats, TrajectorySummary};
use crate::error::{Error, Result};
use crate::linalg::Mat12;
use crate::model::SystemParams;
use crate::{C64, DIM};

/// Fixed-point iterations for the implicit midpoint. Three are enough for
/// second-order accuracy in the deterministic part.
pub const MIDPOINT_ITERATIONS: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    EulerMaruyama,
    #[default]
    SemiImplicitMidpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpacePoint {
    pub z: [C64; DIM],
    pub t: f64,
}

impl PhaseSpacePoint {
    pub fn new(z: [C64; DIM]) -> Self {
        Self { z, t: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoryConfig {
    pub dt: f64,
    pub t_end: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub scheme: Scheme,
    /// Trajectories with any `|z|` above this are dropped and counted. `None`
    /// means `10⁶ · max(|reference|, 1)`.
    pub divergence_guard: Option<f64>,
    /// With `false` only the deterministic drift is integrated.
    pub noise: bool,
    /// Moments are averaged over `[burn_in, t_end]`.
    pub burn_in: f64,
    /// Steps between moment samples.
    pub sample_every: usize,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 50.0,
            n_traj: 1000,
            seed: 42,
            scheme: Scheme::SemiImplicitMidpoint,
            divergence_guard: None,
            noise: true,
            burn_in: 20.0,
            sample_every: 10,
        }
    }
}

impl TrajectoryConfig {
    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be non-negative");
        }
        if self.n_traj < 1 {
            return bad("n_traj must be at least 1");
        }
        if let Some(g) = self.divergence_guard {
            if !(g > 0.0) {
                return bad("divergence_guard must be positive");
            }
        }
        if self.sample_every < 1 {
            return bad("sample_every must be at least 1");
        }
        if !(self.burn_in >= 0.0) {
            return bad("burn_in must be non-negative");
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    fn guard_for(&self, reference: &[C64; DIM]) -> f64 {
        self.divergence_guard
            .unwrap_or_else(|| 1e6 * reference.iter().fold(1.0_f64, |m, z| m.max(z.norm())))
    }
}

struct Stepper<'a> {
    params: &'a SystemParams,
    scheme: Scheme,
    dt: f64,
    roots: [C64; 6],
}

impl<'a> Stepper<'a> {
    fn new(params: &'a SystemParams, scheme: Scheme, dt: f64, z: &[C64; DIM]) -> Self {
        Self { params, scheme, dt, roots: noise_roots(params, z) }
    }

    fn step(&mut self, z: &mut [C64; DIM], dw: Option<&[C64; 6]>) {
        let dt = self.dt;
        match self.scheme {
            Scheme::EulerMaruyama => {
                let f = drift(self.params, z);
                let n = dw.map(|dw| {
                    self.roots = tracked_noise_roots(self.params, z, &self.roots);
                    noise_with_roots(&self.roots, dw)
                });
                for i in 0..DIM {
                    z[i] += f[i] * dt;
                    if let Some(n) = &n {
                        z[i] += n[i];
                    }
                }
            }
            Scheme::SemiImplicitMidpoint => {
                let z0 = *z;
                let mut mid = z0;
                for _ in 0..MIDPOINT_ITERATIONS {
                    let f = drift(self.params, &mid);
                    let n = dw.map(|dw| {
                        self.roots = tracked_noise_roots(self.params, &mid, &self.roots);
                        noise_with_roots(&self.roots, dw)
                    });
                    for i in 0..DIM {
                        let mut inc = f[i] * dt;
                        if let Some(n) = &n {
                            inc += n[i];
                        }
                        mid[i] = z0[i] + 0.5 * inc;
                    }
                }
                for i in 0..DIM {
                    z[i] = 2.0 * mid[i] - z0[i];
                }
            }
        }
    }
}

struct MomentAccumulator {
    mean: [C64; DIM],
    second: Mat12,
    samples: usize,
}

impl Default for MomentAccumulator {
    fn default() -> Self {
        Self { mean: [C64::new(0.0, 0.0); DIM], second: Mat12::zeros(), samples: 0 }
    }
}

impl MomentAccumulator {
    fn add(&mut self, z: &[C64; DIM], reference: &[C64; DIM]) {
        let d: [C64; DIM] = std::array::from_fn(|i| z[i] - reference[i]);
        for i in 0..DIM {
            self.mean[i] += d[i];
            for j in 0..DIM {
                self.second[(i, j)] += d[i] * d[j];
            }
        }
        self.samples += 1;
    }

    fn finish(self, index: u64, last: [C64; DIM]) -> TrajectorySummary {
        let inv = 1.0 / self.samples as f64;
        TrajectorySummary {
            index,
            samples: self.samples,
            mean: self.mean.map(|v| v * inv),
            second: self.second * C64::new(inv, 0.0),
            last,
        }
    }
}

fn exceeds(z: &[C64; DIM], guard: f64) -> bool {
    z.iter().any(|v| !(v.norm() <= guard))
}

/// Result of one trajectory.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)] // divergence is the rare case
pub enum TrajectoryOutcome {
    Completed(TrajectorySummary),
    Diverged { index: u64, t: f64 },
}

/// Integrates trajectory `index` from `initial` and averages the fluctuation
/// moments about `reference` over the sampling window.
pub fn integrate_trajectory(
    params: &SystemParams,
    config: &TrajectoryConfig,
    initial: &PhaseSpacePoint,
    reference: &[C64; DIM],
    index: u64,
) -> TrajectoryOutcome {
    let guard = config.guard_for(reference);
    let steps = config.steps();
    let mut rng = trajectory_rng(config.seed, index);
    let mut z = initial.z;
    let mut stepper = Stepper::new(params, config.scheme, config.dt, &z);

    let mut acc = MomentAccumulator::default();

    // tolerate rounding in t = n dt when deciding whether a step is sampled
    let first_sampled = (config.burn_in / config.dt - 1e-9).ceil().max(0.0) as usize;
    for n in 1..=steps {
        let dw = config.noise.then(|| complex_wiener(&mut rng, config.dt));
        stepper.step(&mut z, dw.as_ref());
        if exceeds(&z, guard) {
            return TrajectoryOutcome::Diverged { index, t: initial.t + n as f64 * config.dt };
        }
        if n >= first_sampled && (n - first_sampled).is_multiple_of(config.sample_every) {
            acc.add(&z, reference);
        }
    }
    if acc.samples == 0 {
        acc.add(&z, reference);
    }
    TrajectoryOutcome::Completed(acc.finish(index, z))
}

/// Samples of trajectory `index` every `config.sample_every` steps,
/// including the initial point.
pub fn trajectory(params: &SystemParams, config: &TrajectoryConfig, initial: &PhaseSpacePoint, index: u64) -> Result<Vec<PhaseSpacePoint>> {
    config.check()?;
    let guard = config.guard_for(&initial.z);
    let mut rng = trajectory_rng(config.seed, index);
    let mut z = initial.z;
    let mut stepper = Stepper::new(params, config.scheme, config.dt, &z);
    let mut out = vec![*initial];
    for n in 1..=config.steps() {
        let dw = config.noise.then(|| complex_wiener(&mut rng, config.dt));
        stepper.step(&mut z, dw.as_ref());
        if exceeds(&z, guard) {
            return Err(Error::AllDiverged { n_traj: 1 });
        }
        if n % config.sample_every == 0 {
            out.push(PhaseSpacePoint { z, t: initial.t + n as f64 * config.dt });
        }
    }
    Ok(out)
}

/// Runs `config.n_traj` independent trajectories. The result depends only on
/// the inputs, not on how rayon schedules the work.
pub fn integrate_ensemble(
    params: &SystemParams,
    config: &TrajectoryConfig,
    initial: &PhaseSpacePoint,
    reference: &[C64; DIM],
) -> Result<EnsembleStats> {
    params.check()?;
    config.check()?;
    let outcomes: Vec<TrajectoryOutcome> = (0..config.n_traj as u64)
        .into_par_iter()
        .map(|i| integrate_trajectory(params, config, initial, reference, i))
        .collect();
    let mut summaries = Vec::with_capacity(outcomes.len());
    let mut diverged = Vec::new();
    for o in outcomes {
        match o {
            TrajectoryOutcome::Completed(s) => summaries.push(s),
            TrajectoryOutcome::Diverged { index, .. } => diverged.push(index),
        }
    }
    if summaries.is_empty() {
        return Err(Error::AllDiverged { n_traj: config.n_traj });
    }
    Ok(EnsembleStats::new(*reference, summaries, diverged))
}
