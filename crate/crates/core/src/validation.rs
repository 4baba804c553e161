//! End-to-end acceptance checks on the reference configuration
//! (χ = 0.01, γ = 10, κ = 1, so the threshold pump is 500), shared by the
//! acceptance test target and the `validate` command.
//!
//! Every criterion is a list of [`Check`]s. A criterion passes when it ran
//! without error and all of its gating checks hold; informational checks
//! are reported alongside but never decide the outcome.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{
    report_for, vlf_spectrum, OmegaGrid, Pair, Sign, EPR_JOINT_BOUND, EPR_SINGLE_BOUND, VLF_BOUND,
};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, Mat12};
use crate::linearization::{
    build_diffusion, build_drift, finite_difference_jacobian, integrated_spectrum, noise_matrix, stability_eigenvalues,
    LinearizedSystem,
};
use crate::model::{intensity_ratio, steady_state, threshold_pump, Mode, SteadyState, SystemParams};
use crate::quadrature::{Quadrature, QuadratureSelector};
use crate::sde::{compare_means, compare_moments, increment_moments, integrate_ensemble, PhaseSpacePoint, TrajectoryConfig, ZScore};

/// Relative tolerance on threshold, steady states and intensity ratio.
pub const STEADY_TOL: f64 = 1e-12;
/// Relative tolerance between numeric and closed-form entanglement spectra.
pub const ORACLE_TOL: f64 = 1e-8;
/// Absolute tolerance on the zero-frequency spectrum just below threshold.
pub const ANCHOR_TOL: f64 = 1e-3;
/// Relative gap allowed between the normalized EPR products below threshold.
pub const EPR_COINCIDENCE_TOL: f64 = 1e-6;
/// Allowed distance of the least stable eigenvalue from zero at threshold.
pub const MARGINAL_TOL: f64 = 1e-9;
/// Largest acceptable Monte-Carlo z-score.
pub const Z_LIMIT: f64 = 3.0;
/// Relative tolerance of drift against the finite-difference Jacobian.
pub const JACOBIAN_TOL: f64 = 1e-6;
/// Absolute tolerance of `B̄B̄ᵀ` against the diffusion matrix.
pub const FACTORIZATION_TOL: f64 = 1e-12;
/// Absolute tolerance for evenness and permutation symmetry.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Relative tolerance of the integrated spectrum against the covariance.
pub const CLOSURE_TOL: f64 = 1e-3;

/// Zero-frequency limit of the pair spectra as the pump approaches threshold
/// from below.
pub const THRESHOLD_ANCHOR: f64 = 2.0 / 9.0;

/// Deliberate perturbations used to show that the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hooks {
    /// Multiplies the input-output gain of every linearized system.
    pub io_gain_scale: f64,
    /// Negates the analytic drift matrix before it is compared with the
    /// finite-difference Jacobian.
    pub flip_drift_sign: bool,
}

impl Default for Hooks {
    fn default() -> Self {
        Self { io_gain_scale: 1.0, flip_drift_sign: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationConfig {
    pub hooks: Hooks,
    /// Ensemble settings for the stochastic consistency check.
    pub sde: TrajectoryConfig,
    /// Noise draws for the increment-covariance check.
    pub increment_draws: usize,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            hooks: Hooks::default(),
            // dt = 5e-3 keeps 10⁴ trajectories to a couple of minutes on one
            // core; the midpoint scheme reproduces the stationary covariance of
            // the linear part exactly at any dt.
            sde: TrajectoryConfig { n_traj: 10_000, dt: 5e-3, ..TrajectoryConfig::default() },
            increment_draws: 1_000_000,
        }
    }
}

/// One measured quantity and the bound it is held to.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    /// Human-readable condition, e.g. `<= 1e-8`.
    pub bound: String,
    pub passed: bool,
    /// Informational checks are reported but do not decide the verdict.
    pub gating: bool,
}

impl Check {
    fn at_most(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { label: label.into(), value, bound: format!("<= {limit:e}"), passed: value <= limit, gating: true }
    }

    fn below(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { label: label.into(), value, bound: format!("< {limit}"), passed: value < limit, gating: true }
    }

    fn within(label: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self { label: label.into(), value, bound: format!("in [{lo}, {hi}]"), passed: (lo..=hi).contains(&value), gating: true }
    }

    fn holds(label: impl Into<String>, ok: bool) -> Self {
        Self { label: label.into(), value: f64::from(u8::from(ok)), bound: "holds".into(), passed: ok, gating: true }
    }

    fn info(label: impl Into<String>, value: f64) -> Self {
        Self { label: label.into(), value, bound: "(info)".into(), passed: true, gating: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Set when the criterion could not be evaluated at all.
    pub error: Option<String>,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        let gating: Vec<&Check> = self.checks.iter().filter(|c| c.gating).collect();
        self.error.is_none() && !gating.is_empty() && gating.iter().all(|c| c.passed)
    }

    /// The one-line verdict, e.g. `criterion 1 PASS  threshold and steady
    /// states (0.01 s)`.
    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!("criterion {} {verdict}  {} ({:.2} s)", self.id, self.title, self.seconds)
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        if let Some(e) = &self.error {
            writeln!(f, "    error: {e}")?;
        }
        for c in &self.checks {
            let mark = if !c.gating {
                "    "
            } else if c.passed {
                "ok  "
            } else {
                "FAIL"
            };
            writeln!(f, "    {mark} {}: {:.6e} {}", c.label, c.value, c.bound)?;
        }
        Ok(())
    }
}

/// Criterion numbers and titles.
pub const CRITERIA: [(u8, &str); 8] = [
    (1, "threshold and steady states"),
    (2, "numeric spectra match closed forms"),
    (3, "threshold and far-frequency anchors"),
    (4, "pair entanglement violated at zero frequency"),
    (5, "EPR spectra below and above threshold"),
    (6, "stability spectrum"),
    (7, "stochastic ensemble matches linear theory"),
    (8, "structural invariants"),
];

/// Runs criterion `id` (1 to 8). Failures inside the criterion are recorded
/// in the result; only an unknown `id` is an error.
pub fn run_criterion(id: u8, cfg: &ValidationConfig) -> Result<CriterionResult> {
    let title = CRITERIA
        .iter()
        .find(|(n, _)| *n == id)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::InvalidConfig(format!("no acceptance criterion {id}")))?;
    let start = Instant::now();
    let outcome = match id {
        1 => steady_states(),
        2 => closed_forms(cfg),
        3 => anchors(cfg),
        4 => pair_violation(cfg),
        5 => epr(cfg),
        6 => stability(),
        7 => stochastic(cfg),
        _ => structure(cfg),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut checks, error) = match outcome {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    if let Some(limit) = runtime_limit(id) {
        checks.push(Check::below("runtime (s)", seconds, limit));
    }
    Ok(CriterionResult { id, title, checks, error, seconds })
}

/// Runs every criterion in order.
pub fn run_all(cfg: &ValidationConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, cfg).expect("listed criteria exist")).collect()
}

fn runtime_limit(id: u8) -> Option<f64> {
    match id {
        1 | 3 => Some(1.0),
        _ => None,
    }
}

fn reference(ratio: f64) -> Result<SystemParams> {
    SystemParams::reference(0.0).at_ratio(ratio)
}

fn linearize(cfg: &ValidationConfig, params: &SystemParams) -> Result<LinearizedSystem> {
    let mut lin = LinearizedSystem::from_params(params)?;
    lin.io_gain *= cfg.hooks.io_gain_scale;
    Ok(lin)
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn steady_states() -> Result<Vec<Check>> {
    let base = SystemParams::reference(0.0);
    let mut checks = vec![Check::at_most("threshold pump vs 500 (rel)", rel(threshold_pump(&base)?, 500.0), STEADY_TOL)];

    let below = steady_state(&base.with_pump(450.0))?;
    let above = steady_state(&base.with_pump(550.0))?;
    let worst = |ss: &SteadyState, modes: [Mode; 3], want: f64| {
        modes
            .iter()
            .flat_map(|m| [ss.alpha[m.slot()], ss.alpha[m.conj_slot()]])
            .map(|a| if want == 0.0 { a.norm() } else { (a - want).norm() / want })
            .fold(0.0, f64::max)
    };
    checks.push(Check::at_most("E=450 pumps vs 45 (rel)", worst(&below, Mode::PUMPS, 45.0), STEADY_TOL));
    checks.push(Check::at_most("E=450 signals vs 0 (abs)", worst(&below, Mode::SIGNALS, 0.0), STEADY_TOL));
    checks.push(Check::at_most("E=550 pumps vs 50 (rel)", worst(&above, Mode::PUMPS, 50.0), STEADY_TOL));
    checks.push(Check::at_most(
        "E=550 signals vs sqrt(5000) (rel)",
        worst(&above, Mode::SIGNALS, 5000.0_f64.sqrt()),
        STEADY_TOL,
    ));
    checks.push(Check::at_most("E=550 intensity ratio vs 2 (rel)", rel(intensity_ratio(&above)?, 2.0), STEADY_TOL));
    Ok(checks)
}

fn closed_forms(cfg: &ValidationConfig) -> Result<Vec<Check>> {
    let omegas = OmegaGrid::with_step(0.0, 6.0, 0.01)?.values();
    let mut checks = Vec::new();
    for ratio in [0.5, 0.9, 0.99, 1.01, 1.1, 1.5] {
        let lin = linearize(cfg, &reference(ratio)?)?;
        let report = report_for(&lin, &omegas, Sign::Plus)?;
        checks.push(Check::at_most(
            format!("E/E_th={ratio}: max relative residual over 3 pairs, 601 frequencies"),
            report.max_analytic_residual(),
            ORACLE_TOL,
        ));
    }
    Ok(checks)
}

fn zero_frequency(cfg: &ValidationConfig, ratio: f64) -> Result<[f64; 3]> {
    let lin = linearize(cfg, &reference(ratio)?)?;
    let mut out = [0.0; 3];
    for (v, pair) in out.iter_mut().zip(Pair::ALL) {
        *v = vlf_spectrum(&lin, pair, 0.0)?;
    }
    Ok(out)
}

fn anchors(cfg: &ValidationConfig) -> Result<Vec<Check>> {
    let approach = [0.9, 0.99, 0.999, 0.9999];
    let values = approach.iter().map(|&r| zero_frequency(cfg, r).map(|v| v[0])).collect::<Result<Vec<f64>>>()?;
    let distances: Vec<f64> = values.iter().map(|v| (v - THRESHOLD_ANCHOR).abs()).collect();
    let mut checks = vec![Check::at_most(
        "|I(0) - 2/9| at E=0.9999 E_th",
        *distances.last().expect("non-empty"),
        ANCHOR_TOL,
    )];
    checks.push(Check::holds(
        "I(0) decreases monotonically towards 2/9 over E/E_th = 0.9, 0.99, 0.999, 0.9999",
        values.windows(2).all(|w| w[1] < w[0]) && distances.windows(2).all(|w| w[1] < w[0]),
    ));
    for ratio in [0.9, 1.1] {
        let lin = linearize(cfg, &reference(ratio)?)?;
        for pair in Pair::ALL {
            let v = vlf_spectrum(&lin, pair, 100.0)?;
            checks.push(Check::within(format!("E/E_th={ratio}: I_{}(100 kappa)", pair.label()), v, 4.99, 5.0));
        }
    }
    Ok(checks)
}

fn pair_violation(cfg: &ValidationConfig) -> Result<Vec<Check>> {
    // closed forms substituted by hand: χα = 0.45 below, (χβ)² = 0.5 above
    let hand = [(0.9, 5.0 - 35.703 / 7.590025), (1.1, 5.0 - 1_927_600.0 / 465_124.0)];
    let mut checks = Vec::new();
    for (ratio, expected) in hand {
        let values = zero_frequency(cfg, ratio)?;
        for (pair, v) in Pair::ALL.into_iter().zip(values) {
            checks.push(Check::below(format!("E/E_th={ratio}: I_{}(0)", pair.label()), v, VLF_BOUND));
            checks.push(Check::at_most(
                format!("E/E_th={ratio}: |I_{}(0) - {expected:.6}|", pair.label()),
                (v - expected).abs(),
                ANCHOR_TOL,
            ));
        }
    }
    Ok(checks)
}

fn epr(cfg: &ValidationConfig) -> Result<Vec<Check>> {
    let omegas = OmegaGrid::default().values();
    let mut checks = Vec::new();

    let below = report_for(&linearize(cfg, &reference(0.9)?)?, &omegas, Sign::Plus)?;
    for (k, part) in below.partitions.iter().enumerate() {
        let gap = below.epr_joint[k]
            .iter()
            .zip(&below.epr_single[k])
            .map(|(j, s)| {
                let (a, b) = (j / EPR_JOINT_BOUND, s / EPR_SINGLE_BOUND);
                (a - b).abs() / a.abs().max(b.abs())
            })
            .fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("E/E_th=0.9, {}: max relative gap between normalized products", part.label()),
            gap,
            EPR_COINCIDENCE_TOL,
        ));
    }

    let lin = linearize(cfg, &reference(1.1)?)?;
    let at_zero = report_for(&lin, &[0.0], Sign::Plus)?;
    let above = report_for(&lin, &omegas, Sign::Plus)?;
    for (k, part) in above.partitions.iter().enumerate() {
        let label = part.label();
        checks.push(Check::below(format!("E/E_th=1.1, {label}: joint product at 0"), at_zero.epr_joint[k][0], EPR_JOINT_BOUND));
        checks.push(Check::below(
            format!("E/E_th=1.1, {label}: single product at 0"),
            at_zero.epr_single[k][0],
            EPR_SINGLE_BOUND,
        ));
        // two-mode inference is the single product; better means lower
        let margin = above.epr_joint[k]
            .iter()
            .zip(&above.epr_single[k])
            .map(|(j, s)| j / EPR_JOINT_BOUND - s / EPR_SINGLE_BOUND)
            .fold(f64::INFINITY, f64::min);
        checks.push(Check::holds(
            format!("E/E_th=1.1, {label}: single/1 <= joint/4 at all {} frequencies", omegas.len()),
            margin >= 0.0,
        ));
        checks.push(Check::info(format!("E/E_th=1.1, {label}: smallest joint/4 - single/1"), margin));
    }
    Ok(checks)
}

fn stability() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for ratio in [0.9, 1.1] {
        let s = LinearizedSystem::from_params(&reference(ratio)?)?.stability;
        checks.push(Check::below(format!("E/E_th={ratio}: largest eigenvalue real part"), s.max_real, 0.0));
    }
    let at = reference(1.0)?;
    let ss = SteadyState::threshold_limit(&at)?;
    let s = stability_eigenvalues(&build_drift(&at, &ss))?;
    checks.push(Check::at_most("E=E_th: |largest eigenvalue real part|", s.max_real.abs(), MARGINAL_TOL));
    Ok(checks)
}

fn max_z(zs: &[ZScore], keep: impl Fn(&ZScore) -> bool) -> f64 {
    zs.iter().filter(|z| keep(z)).map(|z| z.z.abs()).fold(0.0, f64::max)
}

fn stochastic(cfg: &ValidationConfig) -> Result<Vec<Check>> {
    let params = reference(0.9)?;
    let lin = LinearizedSystem::from_params(&params)?;
    let sigma = lin.stationary_covariance()?;
    let expected = lin.second_order_moments()?;
    let reference = lin.steady.alpha;
    let stats = integrate_ensemble(&params, &cfg.sde, &PhaseSpacePoint::new(reference), &reference)?;

    let all: Vec<usize> = (0..crate::DIM).collect();
    let pumps: Vec<usize> = Mode::PUMPS.iter().flat_map(|m| [m.slot(), m.conj_slot()]).collect();
    let is_pump_pair = |z: &ZScore| pumps.contains(&z.i) && pumps.contains(&z.j);
    let vs_expected = stats.compare_fluctuations(&expected, &all)?;
    let vs_bare = stats.compare_fluctuations(&sigma, &all)?;

    let mut checks = vec![
        Check::info("trajectories kept", stats.n_effective() as f64),
        Check::info("trajectories diverged", stats.n_diverged() as f64),
        Check::at_most(
            "max |z| of signal and pump-signal moments vs Lyapunov covariance",
            max_z(&vs_expected, |z| !is_pump_pair(z)),
            Z_LIMIT,
        ),
        Check::at_most(
            "max |z| of pump-pump moments vs second-order depletion theory",
            max_z(&vs_expected, is_pump_pair),
            Z_LIMIT,
        ),
        Check::info("max |z| of pump-pump moments vs bare Lyapunov (zero)", max_z(&vs_bare, is_pump_pair)),
    ];

    let means = stats.first_moments()?;
    let vs_depleted = compare_means(&means, &lin.second_order_means()?);
    let vs_steady = compare_means(&means, &reference);
    checks.push(Check::at_most("max |z| of means vs second-order mean amplitudes", max_z(&vs_depleted, |_| true), Z_LIMIT));
    checks.push(Check::info("max |z| of pump means vs semiclassical E/γ", max_z(&vs_steady, |z| pumps.contains(&z.i))));

    let inc = increment_moments(&params, &reference, cfg.sde.dt, cfg.increment_draws, cfg.sde.seed)?;
    let inc_z = compare_moments(&inc, &lin.diffusion, &all);
    checks.push(Check::at_most(
        format!("max |z| of increment covariance vs diffusion matrix ({} draws)", cfg.increment_draws),
        max_z(&inc_z, |_| true),
        Z_LIMIT,
    ));
    Ok(checks)
}

fn structure(cfg: &ValidationConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for ratio in [0.9, 1.1] {
        let params = reference(ratio)?;
        let ss = steady_state(&params)?;
        let mut a = build_drift(&params, &ss);
        if cfg.hooks.flip_drift_sign {
            a = -a;
        }
        let h = 1e-6 * ss.max_abs().max(1.0);
        let jac = finite_difference_jacobian(&params, &ss.alpha, h);
        let jac_err = a
            .iter()
            .zip(jac.iter())
            .map(|(x, y)| (x - y).norm() / x.norm().max(params.kappa))
            .fold(0.0, f64::max);
        checks.push(Check::at_most(format!("E/E_th={ratio}: drift vs finite-difference Jacobian (rel)"), jac_err, JACOBIAN_TOL));

        let b = noise_matrix(&params, &ss);
        let d = build_diffusion(&params, &ss);
        checks.push(Check::at_most(
            format!("E/E_th={ratio}: |B Bt - D| (abs)"),
            max_abs(&(b * b.transpose() - d)),
            FACTORIZATION_TOL,
        ));

        let lin = linearize(cfg, &params)?;
        let pos = OmegaGrid::with_step(0.0, 6.0, 0.01)?.values();
        let neg: Vec<f64> = pos.iter().map(|w| -w).collect();
        let (rp, rn) = (report_for(&lin, &pos, Sign::Plus)?, report_for(&lin, &neg, Sign::Plus)?);
        let series = |r: &crate::criteria::CriteriaReport| -> Vec<Vec<f64>> {
            r.i_out.iter().chain(&r.epr_joint).chain(&r.epr_single).cloned().collect()
        };
        let odd = series(&rp)
            .iter()
            .zip(series(&rn))
            .flat_map(|(p, n)| p.iter().zip(n).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
            .fold(0.0, f64::max);
        checks.push(Check::at_most(format!("E/E_th={ratio}: max |f(w) - f(-w)| over all criteria"), odd, SYMMETRY_TOL));

        let spread = |v: &[Vec<f64>; 3]| {
            (0..v[0].len())
                .map(|n| {
                    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s[n]), hi.max(s[n])));
                    hi - lo
                })
                .fold(0.0, f64::max)
        };
        let pair_spread = spread(&rp.i_out).max(spread(&rp.epr_joint)).max(spread(&rp.epr_single));
        checks.push(Check::at_most(format!("E/E_th={ratio}: spread across pairs and partitions"), pair_spread, SYMMETRY_TOL));
        checks.push(Check::at_most(
            format!("E/E_th={ratio}: output spectra under signal relabelling"),
            permutation_spread(&lin)?,
            SYMMETRY_TOL,
        ));

        let sigma = lin.stationary_covariance()?;
        let closure = |tail: bool| -> Result<f64> {
            let integ = integrated_spectrum(&lin.drift, &lin.diffusion, 200.0, 0.01, tail)?;
            Ok(worst_relative(&sigma, &integ))
        };
        checks.push(Check::at_most(
            format!("E/E_th={ratio}: integrated spectrum vs covariance, with 1/w^2 tail (rel)"),
            closure(true)?,
            CLOSURE_TOL,
        ));
        checks.push(Check::info(format!("E/E_th={ratio}: same without tail correction (rel)"), closure(false)?));
    }
    Ok(checks)
}

fn worst_relative(exact: &Mat12, approx: &Mat12) -> f64 {
    exact
        .iter()
        .zip(approx.iter())
        .filter(|(s, _)| s.norm() > 1e-6)
        .map(|(s, i)| (s - i).norm() / s.norm())
        .fold(0.0, f64::max)
}

/// Largest change of a set of output (cross-)spectra under the six
/// relabellings of the signal modes.
fn permutation_spread(lin: &LinearizedSystem) -> Result<f64> {
    use Quadrature::{X, Y};
    let [a4, a5, a6] = Mode::SIGNALS;
    let sel = |m: Mode, q: Quadrature, w: f64| QuadratureSelector::term(m, q, w);
    let selectors = [
        sel(a4, X, 1.0) + sel(a5, X, -1.0),
        QuadratureSelector::sum(Y, &Mode::SIGNALS),
        sel(a4, X, 1.0) + sel(a5, X, 0.5) + sel(a6, Y, -2.0),
        sel(a4, Y, 1.0),
    ];
    let perms: [[Mode; 3]; 6] = [[a4, a5, a6], [a4, a6, a5], [a5, a4, a6], [a5, a6, a4], [a6, a4, a5], [a6, a5, a4]];
    let relabel = |s: &QuadratureSelector, p: &[Mode; 3]| {
        s.permuted(|m| match m.number() {
            4 => p[0],
            5 => p[1],
            6 => p[2],
            _ => m,
        })
    };
    let spreads = [0.0, 0.37, 1.5, 4.0]
        .par_iter()
        .map(|&w| -> Result<f64> {
            let s = lin.spectral_matrix(w)?;
            let mut worst: f64 = 0.0;
            for a in &selectors {
                for b in &selectors {
                    let base = lin.output_spectrum_from(&s, a, b)?;
                    for p in &perms {
                        let v = lin.output_spectrum_from(&s, &relabel(a, p), &relabel(b, p))?;
                        worst = worst.max((v - base).abs());
                    }
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(spreads.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ValidationConfig {
        ValidationConfig {
            sde: TrajectoryConfig { n_traj: 200, dt: 5e-3, t_end: 30.0, burn_in: 10.0, ..TrajectoryConfig::default() },
            increment_draws: 20_000,
            ..ValidationConfig::default()
        }
    }

    #[test]
    fn unknown_criterion_is_rejected() {
        assert!(matches!(run_criterion(9, &quick()), Err(Error::InvalidConfig(_))));
        assert!(matches!(run_criterion(0, &quick()), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 3, 4, 6] {
            let r = run_criterion(id, &quick()).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn io_gain_hook_breaks_threshold_anchor() {
        let cfg = ValidationConfig { hooks: Hooks { io_gain_scale: 0.5, ..Hooks::default() }, ..quick() };
        let r = run_criterion(3, &cfg).unwrap();
        assert!(!r.passed());
        let anchor = r.checks.iter().find(|c| c.label.contains("2/9")).unwrap();
        assert!(!anchor.passed);
    }

    #[test]
    fn drift_sign_hook_breaks_jacobian_check() {
        let cfg = ValidationConfig { hooks: Hooks { flip_drift_sign: true, ..Hooks::default() }, ..quick() };
        let r = run_criterion(8, &cfg).unwrap();
        assert!(!r.passed());
        let failing: Vec<&Check> = r.checks.iter().filter(|c| !c.passed).collect();
        assert!(!failing.is_empty() && failing.iter().all(|c| c.label.contains("Jacobian")), "{r}");
    }

    #[test]
    fn errors_fail_the_criterion() {
        let r = CriterionResult { id: 1, title: "t", checks: vec![Check::info("x", 1.0)], error: None, seconds: 0.0 };
        // informational checks alone do not make a pass
        assert!(!r.passed());
        let r = CriterionResult { error: Some("boom".into()), checks: vec![Check::holds("x", true)], ..r };
        assert!(!r.passed());
        assert!(r.summary().starts_with("criterion 1 FAIL"));
    }

    #[test]
    fn check_constructors() {
        assert!(Check::at_most("a", 1.0, 1.0).passed);
        assert!(!Check::below("a", 1.0, 1.0).passed);
        assert!(!Check::at_most("a", f64::NAN, 1.0).passed);
        assert!(Check::within("a", 4.995, 4.99, 5.0).passed);
        assert!(!Check::within("a", 5.0 + 1e-9, 4.99, 5.0).passed);
    }
}
