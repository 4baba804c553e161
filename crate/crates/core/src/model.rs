//! Physical parameters, oscillation threshold and semiclassical steady states.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{C64, DIM};

/// Default relative half-width of the band around `E_th` in which no steady
/// state is returned.
pub const DEFAULT_THRESHOLD_GUARD: f64 = 1e-6;

/// Relative tolerance used to decide that the three pumps (or the three
/// couplings) are equal.
const SYMMETRY_TOL: f64 = 1e-12;

/// One of the six cavity modes, numbered 1 to 6. Modes 1-3 are the pumps,
/// modes 4-6 the down-converted signals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Mode(u8);

impl Mode {
    pub const A1: Mode = Mode(1);
    pub const A2: Mode = Mode(2);
    pub const A3: Mode = Mode(3);
    pub const A4: Mode = Mode(4);
    pub const A5: Mode = Mode(5);
    pub const A6: Mode = Mode(6);

    pub const ALL: [Mode; 6] = [Self::A1, Self::A2, Self::A3, Self::A4, Self::A5, Self::A6];
    pub const PUMPS: [Mode; 3] = [Self::A1, Self::A2, Self::A3];
    pub const SIGNALS: [Mode; 3] = [Self::A4, Self::A5, Self::A6];

    pub fn new(number: u8) -> Option<Mode> {
        (1..=6).contains(&number).then_some(Mode(number))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Index of `α_j` in the interleaved phase-space vector.
    pub fn slot(self) -> usize {
        2 * (self.0 as usize - 1)
    }

    /// Index of `α_j⁺`.
    pub fn conj_slot(self) -> usize {
        self.slot() + 1
    }

    pub fn is_signal(self) -> bool {
        self.0 >= 4
    }

    /// Cavity decay rate of this mode.
    pub fn decay(self, params: &SystemParams) -> f64 {
        if self.is_signal() {
            params.kappa
        } else {
            params.gamma
        }
    }
}

impl TryFrom<u8> for Mode {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        Mode::new(n).ok_or_else(|| format!("mode number {n} is outside 1..=6"))
    }
}

impl From<Mode> for u8 {
    fn from(m: Mode) -> u8 {
        m.0
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Physical constants of the oscillator. Rates are in units of the signal
/// decay rate when `kappa = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Nonlinear couplings `χ₁, χ₂, χ₃` of the three down-conversion processes.
    pub chi: [f64; 3],
    /// Pump-mode decay rate.
    pub gamma: f64,
    /// Signal-mode decay rate.
    pub kappa: f64,
    /// Real, non-negative external drive amplitudes `E₁, E₂, E₃`.
    pub pump: [f64; 3],
}

/// A single violated parameter invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamViolation {
    NonPositiveChi { index: usize, value: f64 },
    NonPositiveGamma(f64),
    NonPositiveKappa(f64),
    NegativePump { index: usize, value: f64 },
    NonFinite(&'static str),
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositiveChi { index, value } => {
                write!(f, "chi must be positive (chi[{index}] = {value})")
            }
            Self::NonPositiveGamma(v) => write!(f, "gamma must be positive (gamma = {v})"),
            Self::NonPositiveKappa(v) => write!(f, "kappa must be positive (kappa = {v})"),
            Self::NegativePump { index, value } => {
                write!(f, "pump must be non-negative (pump[{index}] = {value})")
            }
            Self::NonFinite(name) => write!(f, "{name} must be finite"),
        }
    }
}

impl SystemParams {
    /// Equal couplings and equal pumps.
    pub fn symmetric(chi: f64, gamma: f64, kappa: f64, pump: f64) -> Self {
        Self { chi: [chi; 3], gamma, kappa, pump: [pump; 3] }
    }

    /// `χ = 0.01, γ = 10, κ = 1`: the parameter set used for all plotted
    /// spectra, with all pumps set to `pump`.
    pub fn reference(pump: f64) -> Self {
        Self::symmetric(0.01, 10.0, 1.0, pump)
    }

    /// Same constants with all three pumps set to `pump`.
    pub fn with_pump(self, pump: f64) -> Self {
        Self { pump: [pump; 3], ..self }
    }

    /// Same constants with all three pumps at `ratio · E_th`.
    pub fn at_ratio(self, ratio: f64) -> Result<Self> {
        Ok(self.with_pump(ratio * threshold_pump(&self)?))
    }

    /// Returns every violated invariant.
    pub fn validate(&self) -> Vec<ParamViolation> {
        validate(self)
    }

    pub fn check(&self) -> Result<()> {
        let v = validate(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    fn check_symmetric(&self) -> Result<()> {
        if !all_equal(&self.chi) {
            return Err(Error::AsymmetricPumps(format!("chi = {:?}", self.chi)));
        }
        if !all_equal(&self.pump) {
            return Err(Error::AsymmetricPumps(format!("pump = {:?}", self.pump)));
        }
        Ok(())
    }
}

fn all_equal(v: &[f64; 3]) -> bool {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v.iter().all(|x| (x - v[0]).abs() <= SYMMETRY_TOL * scale)
}

/// Lists the violated parameter invariants; an empty list means usable.
pub fn validate(params: &SystemParams) -> Vec<ParamViolation> {
    let mut out = Vec::new();
    for (index, &value) in params.chi.iter().enumerate() {
        if !value.is_finite() {
            out.push(ParamViolation::NonFinite("chi"));
        } else if value <= 0.0 {
            out.push(ParamViolation::NonPositiveChi { index, value });
        }
    }
    if !params.gamma.is_finite() {
        out.push(ParamViolation::NonFinite("gamma"));
    } else if params.gamma <= 0.0 {
        out.push(ParamViolation::NonPositiveGamma(params.gamma));
    }
    if !params.kappa.is_finite() {
        out.push(ParamViolation::NonFinite("kappa"));
    } else if params.kappa <= 0.0 {
        out.push(ParamViolation::NonPositiveKappa(params.kappa));
    }
    for (index, &value) in params.pump.iter().enumerate() {
        if !value.is_finite() {
            out.push(ParamViolation::NonFinite("pump"));
        } else if value < 0.0 {
            out.push(ParamViolation::NegativePump { index, value });
        }
    }
    out
}

/// Oscillation threshold `E_th = γκ / 2χ` for equal couplings.
pub fn threshold_pump(params: &SystemParams) -> Result<f64> {
    params.check()?;
    if !all_equal(&params.chi) {
        return Err(Error::AsymmetricPumps(format!("chi = {:?}", params.chi)));
    }
    Ok(params.gamma * params.kappa / (2.0 * params.chi[0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    BelowThreshold,
    AboveThreshold,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::BelowThreshold => "below-threshold",
            Branch::AboveThreshold => "above-threshold",
        })
    }
}

/// Semiclassical fixed point in the doubled phase space. Entries come in
/// conjugate pairs, `alpha[2j+1] == alpha[2j].conj()`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub alpha: [C64; DIM],
    pub branch: Branch,
    /// `E / E_th`.
    pub pump_ratio: f64,
}

impl SteadyState {
    fn from_modes(pump_amp: f64, signal_amp: f64, branch: Branch, pump_ratio: f64) -> Self {
        let mut alpha = [C64::new(0.0, 0.0); DIM];
        for m in Mode::ALL {
            let a = if m.is_signal() { signal_amp } else { pump_amp };
            alpha[m.slot()] = C64::new(a, 0.0);
            alpha[m.conj_slot()] = C64::new(a, 0.0).conj();
        }
        Self { alpha, branch, pump_ratio }
    }

    /// The point where both branches meet, `ᾱ₁,₂,₃ = κ/2χ` and empty signal
    /// modes. Its linearization has an undamped direction.
    pub fn threshold_limit(params: &SystemParams) -> Result<Self> {
        threshold_pump(params)?;
        Ok(Self::from_modes(
            params.kappa / (2.0 * params.chi[0]),
            0.0,
            Branch::BelowThreshold,
            1.0,
        ))
    }

    /// Steady-state amplitude `ᾱ_j`.
    pub fn amplitude(&self, mode: Mode) -> C64 {
        self.alpha[mode.slot()]
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha.iter().fold(0.0, |m, a| m.max(a.norm()))
    }
}

/// Steady state with the default threshold guard band.
pub fn steady_state(params: &SystemParams) -> Result<SteadyState> {
    steady_state_with_guard(params, DEFAULT_THRESHOLD_GUARD)
}

/// Steady state for equal pumps and couplings.
///
/// Below threshold the pumps sit at `E/γ` and the signal modes are empty;
/// above it the pumps clamp at `κ/2χ` and the signals take the positive root
/// `√((E − E_th)/χ)`. Pumps with `|E − E_th| < guard · E_th` are rejected.
pub fn steady_state_with_guard(params: &SystemParams, guard: f64) -> Result<SteadyState> {
    params.check()?;
    params.check_symmetric()?;
    let e_th = threshold_pump(params)?;
    let chi = params.chi[0];
    let e = params.pump[0];
    let ratio = e / e_th;
    if (e - e_th).abs() < guard * e_th || e == e_th {
        return Err(Error::AtThreshold { pump: e, ratio });
    }
    Ok(if e < e_th {
        SteadyState::from_modes(e / params.gamma, 0.0, Branch::BelowThreshold, ratio)
    } else {
        SteadyState::from_modes(
            params.kappa / (2.0 * chi),
            ((e - e_th) / chi).sqrt(),
            Branch::AboveThreshold,
            ratio,
        )
    })
}

/// Signal-to-pump intensity ratio `|ᾱ₄|² / |ᾱ₁|²` above threshold.
pub fn intensity_ratio(ss: &SteadyState) -> Result<f64> {
    if ss.branch != Branch::AboveThreshold {
        return Err(Error::WrongBranch { expected: Branch::AboveThreshold, found: ss.branch });
    }
    Ok(ss.amplitude(Mode::A4).norm_sqr() / ss.amplitude(Mode::A1).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::drift;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&SystemParams::reference(450.0)).is_empty());

        let v = validate(&SystemParams::symmetric(0.0, 10.0, 1.0, 450.0));
        assert_eq!(v.len(), 3);
        assert!(v[0].to_string().starts_with("chi must be positive"));

        let v = validate(&SystemParams::symmetric(0.01, -1.0, 1.0, 450.0));
        assert_eq!(v, vec![ParamViolation::NonPositiveGamma(-1.0)]);
        assert!(v[0].to_string().starts_with("gamma must be positive"));

        let mut p = SystemParams::reference(450.0);
        p.pump[1] = -3.0;
        p.kappa = f64::NAN;
        let v = validate(&p);
        assert!(v.contains(&ParamViolation::NonFinite("kappa")));
        assert!(v.contains(&ParamViolation::NegativePump { index: 1, value: -3.0 }));
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_pump(&SystemParams::reference(0.0)).unwrap(), 500.0);
        assert_eq!(threshold_pump(&SystemParams::symmetric(0.5, 1.0, 1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(threshold_pump(&SystemParams::symmetric(0.01, 10.0, 2.0, 0.0)).unwrap(), 1000.0);
        assert!(matches!(
            threshold_pump(&SystemParams::symmetric(-0.01, 10.0, 2.0, 0.0)),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn steady_state_below_threshold() {
        let ss = steady_state(&SystemParams::reference(450.0)).unwrap();
        assert_eq!(ss.branch, Branch::BelowThreshold);
        assert!((ss.pump_ratio - 0.9).abs() < 1e-15);
        for m in Mode::PUMPS {
            assert!(rel(ss.amplitude(m).re, 45.0) < 1e-12);
        }
        for m in Mode::SIGNALS {
            assert_eq!(ss.alpha[m.slot()], C64::new(0.0, 0.0));
            assert_eq!(ss.alpha[m.conj_slot()], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn steady_state_above_threshold() {
        let ss = steady_state(&SystemParams::reference(550.0)).unwrap();
        assert_eq!(ss.branch, Branch::AboveThreshold);
        for m in Mode::PUMPS {
            assert!(rel(ss.amplitude(m).re, 50.0) < 1e-12);
        }
        for m in Mode::SIGNALS {
            assert!(rel(ss.amplitude(m).re, 5000.0_f64.sqrt()) < 1e-12);
            assert_eq!(ss.amplitude(m).im, 0.0);
        }
        // phase condition: φ₄+φ₅ = φ₄+φ₆ = φ₅+φ₆ = 0
        let ph = |m: Mode| ss.amplitude(m).arg();
        assert_eq!(ph(Mode::A4) + ph(Mode::A5), 0.0);
        assert_eq!(ph(Mode::A5) + ph(Mode::A6), 0.0);
    }

    #[test]
    fn empty_cavity() {
        let ss = steady_state(&SystemParams::reference(0.0)).unwrap();
        assert!(ss.alpha.iter().all(|a| *a == C64::new(0.0, 0.0)));
    }

    #[test]
    fn conjugate_pairing() {
        for e in [0.0, 300.0, 700.0] {
            let ss = steady_state(&SystemParams::reference(e)).unwrap();
            for m in Mode::ALL {
                assert_eq!(ss.alpha[m.conj_slot()], ss.alpha[m.slot()].conj());
            }
        }
    }

    #[test]
    fn threshold_guard() {
        let p = SystemParams::reference(500.0);
        assert!(matches!(steady_state(&p), Err(Error::AtThreshold { .. })));
        let p = SystemParams::reference(500.0 * (1.0 + 1e-7));
        assert!(matches!(steady_state(&p), Err(Error::AtThreshold { .. })));
        assert!(steady_state_with_guard(&p, 1e-8).is_ok());
        assert!(matches!(
            steady_state_with_guard(&SystemParams::reference(500.0), 0.0),
            Err(Error::AtThreshold { .. })
        ));
    }

    #[test]
    fn asymmetric_rejected() {
        let mut p = SystemParams::reference(450.0);
        p.pump[2] = 451.0;
        assert!(matches!(steady_state(&p), Err(Error::AsymmetricPumps(_))));
        let mut p = SystemParams::reference(450.0);
        p.chi[0] = 0.02;
        assert!(matches!(steady_state(&p), Err(Error::AsymmetricPumps(_))));
    }

    #[test]
    fn intensity_ratio_examples() {
        let r = |e: f64| intensity_ratio(&steady_state(&SystemParams::reference(e)).unwrap());
        assert!(rel(r(550.0).unwrap(), 2.0) < 1e-12);
        assert!(rel(r(750.0).unwrap(), 10.0) < 1e-12);
        assert!(r(500.0 * (1.0 + 1e-5)).unwrap() < 1e-3);
        assert!(matches!(r(450.0), Err(Error::WrongBranch { .. })));
    }

    #[test]
    fn branches_meet_at_threshold() {
        let p = SystemParams::reference(0.0);
        let lim = SteadyState::threshold_limit(&p).unwrap();
        for eps in [1e-3, 1e-5] {
            let below = steady_state(&p.with_pump(500.0 * (1.0 - eps))).unwrap();
            let above = steady_state(&p.with_pump(500.0 * (1.0 + eps))).unwrap();
            let d = (below.amplitude(Mode::A1) - lim.amplitude(Mode::A1)).norm();
            assert!(d <= 50.0 * eps * 1.0000001);
            assert_eq!(above.amplitude(Mode::A1), lim.amplitude(Mode::A1));
        }
        // E_th / γ and κ / 2χ are the same number
        let e_th = threshold_pump(&p).unwrap();
        assert_eq!(e_th / p.gamma, p.kappa / (2.0 * p.chi[0]));
    }

    #[test]
    fn steady_state_is_drift_fixed_point() {
        for e in [0.0, 100.0, 450.0, 499.0, 501.0, 550.0, 750.0, 3000.0] {
            let p = SystemParams::reference(e);
            let ss = steady_state(&p).unwrap();
            let f = drift(&p, &ss.alpha);
            let res = f.iter().fold(0.0_f64, |m, x| m.max(x.norm()));
            let scale = p.gamma.max(p.kappa) * ss.max_abs().max(1.0);
            assert!(res < 1e-12 * scale, "E = {e}: residual {res}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn fixed_point_for_any_symmetric_params(
                chi in 1e-3..0.1_f64,
                gamma in 0.5..20.0_f64,
                kappa in 0.2..5.0_f64,
                ratio in prop_oneof![0.0..0.99_f64, 1.01..3.0_f64],
            ) {
                let base = SystemParams::symmetric(chi, gamma, kappa, 0.0);
                let p = base.at_ratio(ratio).unwrap();
                let ss = steady_state(&p).unwrap();
                let f = drift(&p, &ss.alpha);
                let res = f.iter().fold(0.0_f64, |m, x| m.max(x.norm()));
                prop_assert!(res < 1e-12 * gamma.max(kappa) * ss.max_abs().max(1.0));
            }

            // χ → sχ, E → E/s leaves χᾱ unchanged on both branches
            #[test]
            fn coupling_scaling(
                s in 0.1..10.0_f64,
                ratio in prop_oneof![0.0..0.99_f64, 1.01..3.0_f64],
            ) {
                let p = SystemParams::reference(0.0).at_ratio(ratio).unwrap();
                let mut q = p;
                q.chi = p.chi.map(|c| c * s);
                q.pump = p.pump.map(|e| e / s);
                let a = steady_state(&p).unwrap();
                let b = steady_state(&q).unwrap();
                prop_assert_eq!(a.branch, b.branch);
                for m in Mode::ALL {
                    let lhs = p.chi[0] * a.amplitude(m).re;
                    let rhs = q.chi[0] * b.amplitude(m).re;
                    prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300) + 1e-15);
                }
            }
        }
    }
}
