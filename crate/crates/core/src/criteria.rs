//! Tripartite entanglement and three-mode EPR criteria in the frequency
//! domain.
//!
//! Variances become same-frequency output spectral densities and
//! covariances become same-frequency symmetrized cross-spectra; the bounds
//! carry over unchanged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linearization::{LinearizedSystem, SpectralMatrix};
use crate::model::{threshold_pump, Branch, Mode, SystemParams};
use crate::quadrature::{Quadrature, QuadratureSelector};

/// `I_ij` is entangling below this value.
pub const VLF_BOUND: f64 = 4.0;
/// Joint (one mode infers two) inferred-variance product bound.
pub const EPR_JOINT_BOUND: f64 = 4.0;
/// Single (two modes infer one) inferred-variance product bound.
pub const EPR_SINGLE_BOUND: f64 = 1.0;
/// `I_ij` of uncorrelated vacuum: 2 from `X_i − X_j`, 3 from `Y₄+Y₅+Y₆`.
pub const VLF_VACUUM: f64 = 5.0;

/// Conditioning spectra below this are treated as zero.
pub const INFERENCE_GUARD: f64 = 1e-14;

/// Unordered pair of distinct signal modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair(pub Mode, pub Mode);

impl Pair {
    pub const ALL: [Pair; 3] = [Pair(Mode::A4, Mode::A5), Pair(Mode::A4, Mode::A6), Pair(Mode::A5, Mode::A6)];

    fn check(self) -> Result<()> {
        if self.0.is_signal() && self.1.is_signal() && self.0 != self.1 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("pair ({}, {}) must be two distinct signal modes", self.0, self.1)))
        }
    }

    pub fn label(self) -> String {
        format!("{}{}", self.0, self.1)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

fn y_sum() -> QuadratureSelector {
    QuadratureSelector::sum(Quadrature::Y, &Mode::SIGNALS)
}

fn vlf_from(lin: &LinearizedSystem, s: &SpectralMatrix, pair: Pair) -> Result<f64> {
    let xd = QuadratureSelector::x(pair.0) - QuadratureSelector::x(pair.1);
    let ys = y_sum();
    Ok(lin.output_spectrum_from(s, &xd, &xd)? + lin.output_spectrum_from(s, &ys, &ys)?)
}

/// `I_ij(ω) = S_out[X_i − X_j] + S_out[Y₄ + Y₅ + Y₆]`.
pub fn vlf_spectrum(lin: &LinearizedSystem, pair: Pair, omega: f64) -> Result<f64> {
    pair.check()?;
    vlf_from(lin, &lin.spectral_matrix(omega)?, pair)
}

fn symmetric_rates(params: &SystemParams) -> Result<(f64, f64, f64, f64)> {
    let e_th = threshold_pump(params)?;
    Ok((params.chi[0], params.gamma, params.kappa, e_th))
}

/// Closed-form `I(ω)` below threshold, with pump amplitude `α = E/γ`.
pub fn analytic_below(params: &SystemParams, pump: f64, omega: f64) -> Result<f64> {
    let (chi, gamma, kappa, e_th) = symmetric_rates(params)?;
    if pump >= e_th {
        return Err(Error::WrongBranch { expected: Branch::BelowThreshold, found: Branch::AboveThreshold });
    }
    let ca = chi * pump / gamma;
    let w2 = omega * omega;
    let num = 8.0 * kappa * ca * (7.0 * ca * ca + 10.0 * kappa * ca + 4.0 * (w2 + kappa * kappa));
    let den = ((ca + kappa).powi(2) + w2) * ((2.0 * ca + kappa).powi(2) + w2);
    Ok(VLF_VACUUM - num / den)
}

/// Closed-form `I(ω)` above threshold, with signal amplitude
/// `β = √((E − E_th)/χ)`.
pub fn analytic_above(params: &SystemParams, pump: f64, omega: f64) -> Result<f64> {
    let (chi, g, k, e_th) = symmetric_rates(params)?;
    if pump <= e_th {
        return Err(Error::WrongBranch { expected: Branch::AboveThreshold, found: Branch::BelowThreshold });
    }
    // (χβ)² = χ (E − E_th)
    let cb2 = chi * (pump - e_th);
    let w2 = omega * omega;
    let g2 = g * g;
    let num = 4.0
        * k
        * k
        * (w2 + g2)
        * (76.0 * cb2 * cb2 + cb2 * (100.0 * g * k - 56.0 * w2) + (w2 + g2) * (16.0 * w2 + 43.0 * k * k));
    let d1 = (4.0 * cb2 + 2.0 * g * k - w2).powi(2) + (2.0 * k + g).powi(2) * w2;
    let d2 = (2.0 * cb2 + 3.0 * g * k - 2.0 * w2).powi(2) + (3.0 * k + 2.0 * g).powi(2) * w2;
    Ok(VLF_VACUUM - num / (d1 * d2))
}

/// Whichever closed form applies to `params.pump[0]`.
pub fn analytic_vlf(params: &SystemParams, omega: f64) -> Result<f64> {
    let e = params.pump[0];
    if e < threshold_pump(params)? {
        analytic_below(params, e, omega)
    } else {
        analytic_above(params, e, omega)
    }
}

/// Ingredients of one inferred spectrum: the target spectrum, its
/// cross-spectrum with the measured quantity, and the measured spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InferenceTerms {
    pub target: f64,
    pub cross: f64,
    pub conditioning: f64,
}

impl InferenceTerms {
    /// Error spectrum of the linear estimate `target ≈ gain · measured`.
    pub fn with_gain(&self, gain: f64) -> f64 {
        self.target - 2.0 * gain * self.cross + gain * gain * self.conditioning
    }

    pub fn optimal_gain(&self) -> f64 {
        self.cross / self.conditioning
    }

    /// Minimum over linear estimators, `target − cross² / conditioning`.
    pub fn inferred(&self, omega: f64) -> Result<f64> {
        if self.conditioning.abs() < INFERENCE_GUARD {
            return Err(Error::DegenerateInference { omega, value: self.conditioning });
        }
        Ok(self.target - self.cross * self.cross / self.conditioning)
    }
}

/// Which modes measure and which are inferred, `{i, j, k} = {4, 5, 6}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    /// The lone mode `i`.
    pub single: Mode,
    /// The combined modes `j ± k`.
    pub pair: (Mode, Mode),
    pub sign: Sign,
}

impl Partition {
    pub fn new(single: Mode, pair: (Mode, Mode), sign: Sign) -> Result<Self> {
        let mut ms = [single.number(), pair.0.number(), pair.1.number()];
        ms.sort_unstable();
        if ms != [4, 5, 6] {
            return Err(Error::InvalidConfig(format!(
                "EPR partition {single} | {}{} must use each signal mode once",
                pair.0, pair.1
            )));
        }
        Ok(Self { single, pair, sign })
    }

    /// The partition with `single` alone and the other two signal modes
    /// combined in increasing order.
    pub fn isolating(single: Mode, sign: Sign) -> Result<Self> {
        let rest: Vec<Mode> = Mode::SIGNALS.into_iter().filter(|&m| m != single).collect();
        if rest.len() != 2 {
            return Err(Error::InvalidConfig(format!("mode {single} is not a signal mode")));
        }
        Self::new(single, (rest[0], rest[1]), sign)
    }

    pub fn label(&self) -> String {
        let s = if self.sign == Sign::Plus { '+' } else { '-' };
        format!("{}|{}{}{}", self.single, self.pair.0, s, self.pair.1)
    }

    fn selectors(&self, q: Quadrature) -> (QuadratureSelector, QuadratureSelector) {
        let single = QuadratureSelector::term(self.single, q, 1.0);
        let combined = QuadratureSelector::term(self.pair.0, q, 1.0) + QuadratureSelector::term(self.pair.1, q, self.sign.factor());
        (single, combined)
    }

    /// Spectra for inferring `Q_j ± Q_k` from `Q_i`.
    pub fn joint_terms(&self, lin: &LinearizedSystem, s: &SpectralMatrix, q: Quadrature) -> Result<InferenceTerms> {
        let (single, combined) = self.selectors(q);
        Ok(InferenceTerms {
            target: lin.output_spectrum_from(s, &combined, &combined)?,
            cross: lin.output_spectrum_from(s, &single, &combined)?,
            conditioning: lin.output_spectrum_from(s, &single, &single)?,
        })
    }

    /// Spectra for inferring `Q_i` from `Q_j ± Q_k`.
    pub fn single_terms(&self, lin: &LinearizedSystem, s: &SpectralMatrix, q: Quadrature) -> Result<InferenceTerms> {
        let t = self.joint_terms(lin, s, q)?;
        Ok(InferenceTerms { target: t.conditioning, cross: t.cross, conditioning: t.target })
    }
}

fn joint_from(lin: &LinearizedSystem, s: &SpectralMatrix, part: &Partition) -> Result<f64> {
    let x = part.joint_terms(lin, s, Quadrature::X)?.inferred(s.omega)?;
    let y = part.joint_terms(lin, s, Quadrature::Y)?.inferred(s.omega)?;
    Ok(x * y)
}

fn single_from(lin: &LinearizedSystem, s: &SpectralMatrix, part: &Partition) -> Result<f64> {
    let x = part.single_terms(lin, s, Quadrature::X)?.inferred(s.omega)?;
    let y = part.single_terms(lin, s, Quadrature::Y)?.inferred(s.omega)?;
    Ok(x * y)
}

/// `S_inf(X_j ± X_k) · S_inf(Y_j ± Y_k)` with both inferred from mode `i`.
/// Below [`EPR_JOINT_BOUND`] demonstrates the paradox.
pub fn epr_joint_inference(lin: &LinearizedSystem, part: &Partition, omega: f64) -> Result<f64> {
    joint_from(lin, &lin.spectral_matrix(omega)?, part)
}

/// `S_inf(X_i) · S_inf(Y_i)` with both inferred from `j ± k`. Below
/// [`EPR_SINGLE_BOUND`] demonstrates the paradox.
pub fn epr_single_inference(lin: &LinearizedSystem, part: &Partition, omega: f64) -> Result<f64> {
    single_from(lin, &lin.spectral_matrix(omega)?, part)
}

/// Evenly spaced frequency grid, both ends included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for OmegaGrid {
    fn default() -> Self {
        Self { min: -6.0, max: 6.0, points: 1201 }
    }
}

impl OmegaGrid {
    /// Grid with spacing as close to `step` as fits evenly.
    pub fn with_step(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(max >= min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidConfig(format!("bad frequency grid [{min}, {max}] step {step}")));
        }
        let points = ((max - min) / step).round() as usize + 1;
        Ok(Self { min, max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + i as f64 * h).collect()
    }
}

/// Every criterion over a frequency grid.
#[derive(Clone, Debug, Serialize)]
pub struct CriteriaReport {
    pub omega_grid: Vec<f64>,
    pub pairs: [Pair; 3],
    /// `I_ij` for each of [`Pair::ALL`].
    pub i_out: [Vec<f64>; 3],
    pub i_out_analytic: Vec<f64>,
    /// Largest relative difference between any numeric pair spectrum and the
    /// closed form, per frequency.
    pub analytic_residual: Vec<f64>,
    /// One partition per isolated mode 4, 5, 6.
    pub partitions: [Partition; 3],
    pub epr_joint: [Vec<f64>; 3],
    pub epr_single: [Vec<f64>; 3],
    pub flags: ViolationFlags,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ViolationFlags {
    pub i_out: [Vec<bool>; 3],
    /// At least two pair criteria violated at once.
    pub tripartite: Vec<bool>,
    pub epr_joint: [Vec<bool>; 3],
    pub epr_single: [Vec<bool>; 3],
}

impl CriteriaReport {
    pub fn max_analytic_residual(&self) -> f64 {
        self.analytic_residual.iter().copied().fold(0.0, f64::max)
    }

    pub fn violation_count(&self) -> usize {
        let f = &self.flags;
        f.i_out
            .iter()
            .chain(&f.epr_joint)
            .chain(&f.epr_single)
            .map(|v| v.iter().filter(|&&b| b).count())
            .sum()
    }
}

struct Row {
    i_out: [f64; 3],
    analytic: f64,
    joint: [f64; 3],
    single: [f64; 3],
}

/// Evaluates all criteria over `omega_grid` for the configuration in
/// `params` (symmetric, off threshold).
pub fn full_report(params: &SystemParams, omega_grid: &[f64], sign: Sign) -> Result<CriteriaReport> {
    let lin = LinearizedSystem::from_params(params)?;
    report_for(&lin, omega_grid, sign)
}

/// As [`full_report`] for an already linearized system.
pub fn report_for(lin: &LinearizedSystem, omega_grid: &[f64], sign: Sign) -> Result<CriteriaReport> {
    let partitions = [
        Partition::isolating(Mode::A4, sign)?,
        Partition::isolating(Mode::A5, sign)?,
        Partition::isolating(Mode::A6, sign)?,
    ];
    let rows: Vec<Row> = omega_grid
        .par_iter()
        .map(|&w| -> Result<Row> {
            let s = lin.spectral_matrix(w)?;
            let mut row = Row { i_out: [0.0; 3], analytic: analytic_vlf(&lin.params, w)?, joint: [0.0; 3], single: [0.0; 3] };
            for (k, pair) in Pair::ALL.into_iter().enumerate() {
                row.i_out[k] = vlf_from(lin, &s, pair)?;
            }
            for (k, part) in partitions.iter().enumerate() {
                row.joint[k] = joint_from(lin, &s, part)?;
                row.single[k] = single_from(lin, &s, part)?;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let col = |f: &dyn Fn(&Row) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let i_out = [0, 1, 2].map(|k| col(&|r| r.i_out[k]));
    let epr_joint = [0, 1, 2].map(|k| col(&|r| r.joint[k]));
    let epr_single = [0, 1, 2].map(|k| col(&|r| r.single[k]));
    let i_out_analytic = col(&|r| r.analytic);
    let analytic_residual = col(&|r| r.i_out.iter().map(|v| (v - r.analytic).abs() / r.analytic.abs()).fold(0.0, f64::max));

    let below = |v: &Vec<f64>, bound: f64| v.iter().map(|x| *x < bound).collect::<Vec<bool>>();
    let flag_i = [0, 1, 2].map(|k| below(&i_out[k], VLF_BOUND));
    let tripartite = (0..rows.len()).map(|n| flag_i.iter().filter(|f| f[n]).count() >= 2).collect();
    let flags = ViolationFlags {
        tripartite,
        epr_joint: [0, 1, 2].map(|k| below(&epr_joint[k], EPR_JOINT_BOUND)),
        epr_single: [0, 1, 2].map(|k| below(&epr_single[k], EPR_SINGLE_BOUND)),
        i_out: flag_i,
    };

    Ok(CriteriaReport {
        omega_grid: omega_grid.to_vec(),
        pairs: Pair::ALL,
        i_out,
        i_out_analytic,
        analytic_residual,
        partitions,
        epr_joint,
        epr_single,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    const A1: Mode = Mode::A1;
    const A2: Mode = Mode::A2;
    const A4: Mode = Mode::A4;
    const A5: Mode = Mode::A5;
    const A6: Mode = Mode::A6;

    fn lin(e: f64) -> LinearizedSystem {
        LinearizedSystem::from_params(&SystemParams::reference(e)).unwrap()
    }

    fn part4() -> Partition {
        Partition::isolating(A4, Sign::Plus).unwrap()
    }

    // Hand substitution into the closed forms at the plotted parameters.
    #[test]
    fn analytic_hand_values() {
        let p = SystemParams::reference(0.0);
        // χα = 0.45: 5 − 8·0.45·(7·0.2025 + 4.5 + 4) / (1.45² · 1.9²)
        let below = 5.0 - 8.0 * 0.45 * (7.0 * 0.2025 + 4.5 + 4.0) / (1.45_f64.powi(2) * 1.9_f64.powi(2));
        assert!((analytic_below(&p, 450.0, 0.0).unwrap() - below).abs() < 1e-14);
        assert!((below - 0.296063).abs() < 1e-5);
        // (χβ)² = 0.5
        let above = 5.0 - 1_927_600.0 / 465_124.0;
        assert!((analytic_above(&p, 550.0, 0.0).unwrap() - above).abs() < 1e-13);
        assert!((above - 0.85573).abs() < 1e-5);
    }

    #[test]
    fn analytic_limits() {
        let p = SystemParams::reference(0.0);
        let near = analytic_below(&p, 500.0 * (1.0 - 1e-9), 0.0).unwrap();
        assert!((near - 2.0 / 9.0).abs() < 1e-7);
        assert!((analytic_below(&p, 450.0, 1e5).unwrap() - 5.0).abs() < 1e-8);
        assert!((analytic_above(&p, 550.0, 1e5).unwrap() - 5.0).abs() < 1e-8);
        assert_eq!(analytic_below(&p, 0.0, 0.3).unwrap(), 5.0);
    }

    #[test]
    fn analytic_branch_errors() {
        let p = SystemParams::reference(0.0);
        assert!(matches!(analytic_below(&p, 550.0, 0.0), Err(Error::WrongBranch { .. })));
        assert!(matches!(analytic_above(&p, 450.0, 0.0), Err(Error::WrongBranch { .. })));
    }

    #[test]
    fn vlf_examples() {
        for w in [0.0, 1.0, 100.0] {
            assert_eq!(vlf_spectrum(&lin(0.0), Pair(A4, A5), w).unwrap(), 5.0);
        }
        assert!((vlf_spectrum(&lin(450.0), Pair(A4, A5), 0.0).unwrap() - 0.2960).abs() < 1e-4);
        assert!((vlf_spectrum(&lin(550.0), Pair(A5, A6), 0.0).unwrap() - 0.8557).abs() < 1e-4);
        assert!(vlf_spectrum(&lin(450.0), Pair(A4, A4), 0.0).is_err());
        assert!(vlf_spectrum(&lin(450.0), Pair(A1, A4), 0.0).is_err());
    }

    #[test]
    fn numeric_matches_closed_form() {
        for ratio in [0.5, 0.9, 0.99, 1.01, 1.1, 1.5] {
            let p = SystemParams::reference(500.0 * ratio);
            let l = LinearizedSystem::from_params(&p).unwrap();
            for i in 0..=60 {
                let w = 0.1 * i as f64;
                let a = analytic_vlf(&p, w).unwrap();
                for pair in Pair::ALL {
                    let n = vlf_spectrum(&l, pair, w).unwrap();
                    assert!((n - a).abs() < 1e-8 * a.abs(), "ratio {ratio} ω {w}: {n} vs {a}");
                }
            }
        }
    }

    #[test]
    fn epr_vacuum_baselines() {
        let l = lin(0.0);
        for w in [0.0, 2.0] {
            assert_eq!(epr_joint_inference(&l, &part4(), w).unwrap(), 4.0);
            assert_eq!(epr_single_inference(&l, &part4(), w).unwrap(), 1.0);
        }
    }

    #[test]
    fn epr_below_threshold() {
        let l = lin(450.0);
        let j = epr_joint_inference(&l, &part4(), 0.0).unwrap();
        let s = epr_single_inference(&l, &part4(), 0.0).unwrap();
        assert!(j < 4.0 && s < 1.0);
        assert!((j / 4.0 - s).abs() < 1e-6 * s);
    }

    #[test]
    fn epr_above_threshold_two_mode_inference_is_better() {
        let l = lin(550.0);
        let j = epr_joint_inference(&l, &part4(), 0.0).unwrap();
        let s = epr_single_inference(&l, &part4(), 0.0).unwrap();
        assert!(j < 4.0 && s < 1.0);
        assert!(s <= j / 4.0);
    }

    #[test]
    fn inference_gain_is_optimal() {
        for e in [450.0, 550.0] {
            let l = lin(e);
            for part in [part4(), Partition::isolating(A6, Sign::Minus).unwrap()] {
                for w in [0.0, 0.8, 4.0] {
                    let s = l.spectral_matrix(w).unwrap();
                    for q in [Quadrature::X, Quadrature::Y] {
                        for t in [part.joint_terms(&l, &s, q).unwrap(), part.single_terms(&l, &s, q).unwrap()] {
                            let best = t.inferred(w).unwrap();
                            let g = t.optimal_gain();
                            assert!((t.with_gain(g) - best).abs() < 1e-12 * best.abs().max(1.0));
                            for f in [0.9, 1.1] {
                                assert!(t.with_gain(g * f) >= best - 1e-12 * best.abs().max(1.0));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_inference_guard() {
        let t = InferenceTerms { target: 1.0, cross: 0.0, conditioning: 1e-15 };
        assert!(matches!(t.inferred(0.5), Err(Error::DegenerateInference { .. })));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(A4, (A5, A6), Sign::Plus).is_ok());
        assert!(Partition::new(A4, (A4, A6), Sign::Plus).is_err());
        assert!(Partition::new(A1, (A5, A6), Sign::Plus).is_err());
        assert!(Partition::isolating(A2, Sign::Plus).is_err());
        assert_eq!(part4().label(), "4|5+6");
    }

    #[test]
    fn criteria_are_even_in_omega() {
        for e in [450.0, 550.0] {
            let l = lin(e);
            for w in [0.1, 0.77, 2.5, 5.9] {
                for pair in Pair::ALL {
                    let d = vlf_spectrum(&l, pair, w).unwrap() - vlf_spectrum(&l, pair, -w).unwrap();
                    assert!(d.abs() < 1e-10);
                }
                for sign in [Sign::Plus, Sign::Minus] {
                    let p = Partition::isolating(A5, sign).unwrap();
                    let d = epr_joint_inference(&l, &p, w).unwrap() - epr_joint_inference(&l, &p, -w).unwrap();
                    assert!(d.abs() < 1e-10);
                    let d = epr_single_inference(&l, &p, w).unwrap() - epr_single_inference(&l, &p, -w).unwrap();
                    assert!(d.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn grid_construction() {
        let g = OmegaGrid::default().values();
        assert_eq!(g.len(), 1201);
        assert_eq!(g[0], -6.0);
        assert_eq!(g[600], 0.0);
        assert!((g[1200] - 6.0).abs() < 1e-12);
        assert_eq!(OmegaGrid::with_step(0.0, 6.0, 0.01).unwrap().points, 601);
        assert!(OmegaGrid::with_step(1.0, 0.0, 0.01).is_err());
        assert!(OmegaGrid::with_step(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn report_flags() {
        let grid: Vec<f64> = OmegaGrid { min: -1.0, max: 1.0, points: 21 }.values();
        let r = full_report(&SystemParams::reference(450.0), &grid, Sign::Plus).unwrap();
        let zero = 10;
        assert!(r.flags.i_out.iter().all(|f| f[zero]));
        assert!(r.flags.tripartite[zero]);
        assert!(r.max_analytic_residual() < 1e-8);
        for k in 0..3 {
            for n in 0..grid.len() {
                assert!((r.i_out[k][n] - r.i_out[0][n]).abs() < 1e-10);
            }
        }
        let r = full_report(&SystemParams::reference(550.0), &grid, Sign::Plus).unwrap();
        assert!(r.flags.tripartite[zero] && r.flags.epr_joint[0][zero] && r.flags.epr_single[0][zero]);
        let r = full_report(&SystemParams::reference(0.0), &grid, Sign::Plus).unwrap();
        assert_eq!(r.violation_count(), 0);
        assert!(r.i_out[0].iter().all(|v| *v == 5.0));
    }
}
