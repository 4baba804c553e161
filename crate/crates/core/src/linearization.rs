//! Ornstein-Uhlenbeck description of small fluctuations about a steady state.
//!
//! Fluctuations `δα = α − ᾱ` obey `dδα = A δα dt + B dW` with the drift `A`
//! and diffusion `D = B Bᵀ` built here. Everything measurable follows from
//! the stationary spectral matrix
//!
//! ```text
//! S(ω) = (iω − A)⁻¹ D (−iω − Aᵀ)⁻¹
//! ```
//!
//! which holds the Fourier transforms of the normally ordered two-time
//! covariances, and the cavity input-output relation that turns intracavity
//! spectra into the spectra measured outside the output mirror.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat12};
use crate::model::{steady_state, Branch, Mode, SteadyState, SystemParams};
use crate::quadrature::{vacuum_overlap, QuadratureSelector};
use crate::sde::equations::{drift, noise_roots, noise_with_roots};
use crate::{C64, DIM};

/// Factor multiplying `decay · S_normal` in the output spectrum. With it the
/// empty cavity is shot-noise limited and the degenerate OPO output reaches
/// perfect squeezing at threshold.
pub const OUTPUT_COUPLING_GAIN: f64 = 2.0;

/// Drift matrix about `ss`, in the block form
///
/// ```text
/// ⎡ −γ I₆      −A₂ ⎤
/// ⎣ (A₂*)ᵀ     A₃  ⎦
/// ```
///
/// where the upper-left block acts on the pump variables and the lower-right
/// on the signal variables.
pub fn build_drift(params: &SystemParams, ss: &SteadyState) -> Mat12 {
    let [x1, x2, x3] = params.chi.map(|x| C64::new(x, 0.0));
    let a = |m: Mode| ss.alpha[m.slot()];
    let ac = |m: Mode| ss.alpha[m.conj_slot()];
    let (a1, a2, a3) = (a(Mode::A1), a(Mode::A2), a(Mode::A3));
    let (a4, a5, a6) = (a(Mode::A4), a(Mode::A5), a(Mode::A6));
    let (a1c, a2c, a3c) = (ac(Mode::A1), ac(Mode::A2), ac(Mode::A3));
    let (a4c, a5c, a6c) = (ac(Mode::A4), ac(Mode::A5), ac(Mode::A6));
    let z = C64::new(0.0, 0.0);
    let k = C64::new(-params.kappa, 0.0);

    // pump-row derivatives with respect to the signal variables
    #[rustfmt::skip]
    let a2m = [
        [x1 * a5, z,       x1 * a4, z,       z,       z      ],
        [z,       x1 * a5c, z,      x1 * a4c, z,      z      ],
        [z,       z,       x2 * a6, z,       x2 * a5, z      ],
        [z,       z,       z,       x2 * a6c, z,      x2 * a5c],
        [x3 * a6, z,       z,       z,       x3 * a4, z      ],
        [z,       x3 * a6c, z,      z,       z,       x3 * a4c],
    ];
    #[rustfmt::skip]
    let a3m = [
        [k,        z,        z,        x1 * a1,  z,        x3 * a3 ],
        [z,        k,        x1 * a1c, z,        x3 * a3c, z       ],
        [z,        x1 * a1,  k,        z,        z,        x2 * a2 ],
        [x1 * a1c, z,        z,        k,        x2 * a2c, z       ],
        [z,        x3 * a3,  z,        x2 * a2,  k,        z       ],
        [x3 * a3c, z,        x2 * a2c, z,        z,        k       ],
    ];

    let mut m = Mat12::zeros();
    for i in 0..6 {
        m[(i, i)] = C64::new(-params.gamma, 0.0);
        for j in 0..6 {
            m[(i, 6 + j)] = -a2m[i][j];
            m[(6 + i, j)] = a2m[j][i].conj();
            m[(6 + i, 6 + j)] = a3m[i][j];
        }
    }
    m
}

/// Diffusion matrix `D = B̄ B̄ᵀ` in closed form. The only nonzero entries pair
/// two different signal variables through the pump that couples them.
pub fn build_diffusion(params: &SystemParams, ss: &SteadyState) -> Mat12 {
    let mut d = Mat12::zeros();
    let mut set = |i: usize, j: usize, v: C64| {
        d[(i, j)] = v;
        d[(j, i)] = v;
    };
    let [x1, x2, x3] = params.chi;
    let a = |m: Mode| ss.alpha[m.slot()];
    let ac = |m: Mode| ss.alpha[m.conj_slot()];
    let (s4, s5, s6) = (Mode::A4, Mode::A5, Mode::A6);

    set(s4.slot(), s5.slot(), a(Mode::A1) * x1);
    set(s4.slot(), s6.slot(), a(Mode::A3) * x3);
    set(s5.slot(), s6.slot(), a(Mode::A2) * x2);
    set(s4.conj_slot(), s5.conj_slot(), ac(Mode::A1) * x1);
    set(s4.conj_slot(), s6.conj_slot(), ac(Mode::A3) * x3);
    set(s5.conj_slot(), s6.conj_slot(), ac(Mode::A2) * x2);
    d
}

/// Central-difference Jacobian of the nonlinear drift at `z0` with step `h`,
/// independent of the block layout used by [`build_drift`].
pub fn finite_difference_jacobian(params: &SystemParams, z0: &[C64; DIM], h: f64) -> Mat12 {
    let mut jac = Mat12::zeros();
    for col in 0..DIM {
        let mut zp = *z0;
        let mut zm = *z0;
        zp[col] += h;
        zm[col] -= h;
        let (fp, fm) = (drift(params, &zp), drift(params, &zm));
        for row in 0..DIM {
            jac[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    jac
}

/// Explicit noise matrix `B̄` acting on twelve independent real Wiener
/// increments, where complex noise `k` is `dW_k = (dξ_{2k−1} + i dξ_{2k}) / √2`.
/// Columns are read off the stochastic equations themselves.
pub fn noise_matrix(params: &SystemParams, ss: &SteadyState) -> Mat12 {
    let roots = noise_roots(params, &ss.alpha);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut b = Mat12::zeros();
    for col in 0..DIM {
        let mut dw = [C64::new(0.0, 0.0); 6];
        dw[col / 2] = if col % 2 == 0 { C64::new(h, 0.0) } else { C64::new(0.0, h) };
        let n = noise_with_roots(&roots, &dw);
        for (row, v) in n.iter().enumerate() {
            b[(row, col)] = *v;
        }
    }
    b
}

/// Eigenvalues of a drift matrix and whether they all lie in the open left
/// half-plane.
#[derive(Clone, Debug)]
pub struct Stability {
    pub eigenvalues: Vec<C64>,
    pub is_stable: bool,
    /// Largest real part, i.e. minus the slowest damping rate.
    pub max_real: f64,
}

pub fn stability_eigenvalues(a: &Mat12) -> Result<Stability> {
    let eigenvalues = linalg::eigenvalues(a)?;
    let max_real = eigenvalues.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(Stability { is_stable: max_real < 0.0, max_real, eigenvalues })
}

fn require_stable(a: &Mat12) -> Result<()> {
    let s = stability_eigenvalues(a)?;
    if s.is_stable {
        Ok(())
    } else {
        Err(Error::Unstable { max_real: s.max_real })
    }
}

/// Stationary covariance `σ`, solving `Aσ + σAᵀ + D = 0`.
pub fn stationary_covariance(a: &Mat12, d: &Mat12) -> Result<Mat12> {
    require_stable(a)?;
    linalg::solve_lyapunov(a, d)
}

/// Two-sided stationary spectral matrix at one frequency (units of κ when
/// `κ = 1`), with the `e^{−iωτ}` transform kernel.
#[derive(Clone, Copy, Debug)]
pub struct SpectralMatrix {
    pub omega: f64,
    pub s: Mat12,
}

pub fn spectral_matrix(a: &Mat12, d: &Mat12, omega: f64) -> Result<SpectralMatrix> {
    require_stable(a)?;
    resolvent_sandwich(a, d, omega)
}

fn resolvent_sandwich(a: &Mat12, d: &Mat12, omega: f64) -> Result<SpectralMatrix> {
    let iw = Mat12::identity() * C64::new(0.0, omega);
    let left = linalg::inverse(&(iw - a))?;
    // (−iω − Aᵀ)⁻¹ = ((−iω − A)⁻¹)ᵀ
    let right = linalg::inverse(&(-iw - a))?.transpose();
    Ok(SpectralMatrix { omega, s: left * d * right })
}

/// `(1/2π) ∫ S(ω) dω` over `[−ω_max, ω_max]` by the trapezoid rule with at
/// most `step` spacing. With `tail` set, the truncated wings are added from
/// the asymptote `S(ω) → D/ω²`, which contributes `D / (π ω_max)`.
pub fn integrated_spectrum(a: &Mat12, d: &Mat12, omega_max: f64, step: f64, tail: bool) -> Result<Mat12> {
    require_stable(a)?;
    let n = (2.0 * omega_max / step).ceil() as usize;
    let h = 2.0 * omega_max / n as f64;
    let mut acc = Mat12::zeros();
    for i in 0..=n {
        let w = -omega_max + i as f64 * h;
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += resolvent_sandwich(a, d, w)?.s * C64::new(weight, 0.0);
    }
    let mut out = acc * C64::new(h / (2.0 * PI), 0.0);
    if tail {
        out += d * C64::new(1.0 / (PI * omega_max), 0.0);
    }
    Ok(out)
}

/// Linearized fluctuation dynamics about one steady state.
#[derive(Clone, Debug)]
pub struct LinearizedSystem {
    pub params: SystemParams,
    pub steady: SteadyState,
    pub drift: Mat12,
    pub diffusion: Mat12,
    pub stability: Stability,
    /// Input-output factor, [`OUTPUT_COUPLING_GAIN`] unless deliberately
    /// perturbed.
    pub io_gain: f64,
}

impl LinearizedSystem {
    pub fn new(params: &SystemParams, ss: &SteadyState) -> Result<Self> {
        let drift = build_drift(params, ss);
        let stability = stability_eigenvalues(&drift)?;
        Ok(Self {
            params: *params,
            steady: *ss,
            diffusion: build_diffusion(params, ss),
            drift,
            stability,
            io_gain: OUTPUT_COUPLING_GAIN,
        })
    }

    /// Steady state followed by linearization.
    pub fn from_params(params: &SystemParams) -> Result<Self> {
        Self::new(params, &steady_state(params)?)
    }

    fn check_stable(&self) -> Result<()> {
        if self.stability.is_stable {
            Ok(())
        } else {
            Err(Error::Unstable { max_real: self.stability.max_real })
        }
    }

    pub fn stationary_covariance(&self) -> Result<Mat12> {
        self.check_stable()?;
        linalg::solve_lyapunov(&self.drift, &self.diffusion)
    }

    pub fn spectral_matrix(&self, omega: f64) -> Result<SpectralMatrix> {
        self.check_stable()?;
        resolvent_sandwich(&self.drift, &self.diffusion, omega)
    }

    /// Stationary fluctuation second moments about the steady state, with
    /// the pump block carried to second order in the signal fluctuations.
    ///
    /// Below threshold the linear pump fluctuations are exactly zero: pumps
    /// carry no noise and decouple from the signals at the vacuum signal
    /// state. The leading pump moments come from the quadratic source
    /// `δp = −χ ∫ e^{−γu} δs δs′(t − u) du`, whose Gaussian (Isserlis)
    /// average needs the two-time signal correlations `e^{Aτ}σ`. Signal and
    /// pump-signal entries are the Lyapunov values; their own corrections are
    /// of relative order `χ²` and negligible.
    pub fn second_order_moments(&self) -> Result<Mat12> {
        if self.steady.branch != Branch::BelowThreshold {
            return Err(Error::WrongBranch { expected: Branch::BelowThreshold, found: self.steady.branch });
        }
        let sigma = self.stationary_covariance()?;
        let gamma = self.params.gamma;
        let sources = self.pump_sources();

        // ∫₀^∞ e^{−γτ} [G(τ) + G(τ)ᵀ-ordered] dτ by Simpson's rule, with
        // C(τ) = e^{Aτ}σ stepped by a fixed propagator.
        let slowest = self.stability.max_real.abs().min(gamma);
        let tau_max = 40.0 / (gamma + 2.0 * slowest);
        let n_steps = 4000;
        let h = tau_max / n_steps as f64;
        let prop = (self.drift * C64::new(h, 0.0)).exp();
        let mut c = sigma;
        let mut integral = [[C64::new(0.0, 0.0); 6]; 6];
        for step in 0..=n_steps {
            let simpson = if step == 0 || step == n_steps {
                1.0
            } else if step % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let w = simpson * h / 3.0 * (-gamma * step as f64 * h).exp();
            for (a, &(_, _, i, j)) in sources.iter().enumerate() {
                for (b, &(_, _, k, l)) in sources.iter().enumerate() {
                    let forward = c[(i, k)] * c[(j, l)] + c[(i, l)] * c[(j, k)];
                    let backward = c[(k, i)] * c[(l, j)] + c[(l, i)] * c[(k, j)];
                    integral[a][b] += (forward + backward) * w;
                }
            }
            c = prop * c;
        }

        let mut out = sigma;
        for (a, &(p, chi_a, i, j)) in sources.iter().enumerate() {
            for (b, &(q, chi_b, k, l)) in sources.iter().enumerate() {
                let disconnected = sigma[(i, j)] * sigma[(k, l)] / (gamma * gamma);
                out[(p, q)] = (disconnected + integral[a][b] / (2.0 * gamma)) * (chi_a * chi_b);
            }
        }
        Ok(out)
    }

    /// Mean amplitudes to second order below threshold: each pump is
    /// depleted by its quadratic source, `⟨δα_p⟩ = −χ⟨δα_s δα_s'⟩/γ`.
    /// The signals stay at zero.
    pub fn second_order_means(&self) -> Result<[C64; DIM]> {
        if self.steady.branch != Branch::BelowThreshold {
            return Err(Error::WrongBranch { expected: Branch::BelowThreshold, found: self.steady.branch });
        }
        let sigma = self.stationary_covariance()?;
        let mut mean = self.steady.alpha;
        for (p, chi, i, j) in self.pump_sources() {
            mean[p] -= sigma[(i, j)] * (chi / self.params.gamma);
        }
        Ok(mean)
    }

    /// (pump slot, χ, signal slots) of each quadratic pump source.
    fn pump_sources(&self) -> Vec<(usize, f64, usize, usize)> {
        let mut sources = Vec::with_capacity(6);
        for (n, (&pump, (s1, s2))) in Mode::PUMPS
            .iter()
            .zip([(Mode::A4, Mode::A5), (Mode::A5, Mode::A6), (Mode::A4, Mode::A6)])
            .enumerate()
        {
            let chi = self.params.chi[n];
            sources.push((pump.slot(), chi, s1.slot(), s2.slot()));
            sources.push((pump.conj_slot(), chi, s1.conj_slot(), s2.conj_slot()));
        }
        sources
    }

    /// Symmetrized measurable output cross-spectrum of two quadrature
    /// combinations.
    pub fn output_spectrum(&self, sel_a: &QuadratureSelector, sel_b: &QuadratureSelector, omega: f64) -> Result<f64> {
        let s = self.spectral_matrix(omega)?;
        self.output_spectrum_from(&s, sel_a, sel_b)
    }

    /// As [`Self::output_spectrum`] with a precomputed spectral matrix, so a
    /// single `S(ω)` can serve many selector pairs.
    pub fn output_spectrum_from(&self, s: &SpectralMatrix, sel_a: &QuadratureSelector, sel_b: &QuadratureSelector) -> Result<f64> {
        let rate_a = sel_a.decay(&self.params)?;
        let rate_b = sel_b.decay(&self.params)?;
        let contract = |l: &QuadratureSelector, r: &QuadratureSelector| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..DIM {
                if l.c[i] == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..DIM {
                    acc += l.c[i] * s.s[(i, j)] * r.c[j];
                }
            }
            acc
        };
        let normal = 0.5 * (contract(sel_a, sel_b) + contract(sel_b, sel_a)).re;
        Ok(vacuum_overlap(sel_a, sel_b) + self.io_gain * (rate_a * rate_b).sqrt() * normal)
    }
}

/// Free-function form of [`LinearizedSystem::output_spectrum`].
pub fn output_spectrum(lin: &LinearizedSystem, sel_a: &QuadratureSelector, sel_b: &QuadratureSelector, omega: f64) -> Result<f64> {
    lin.output_spectrum(sel_a, sel_b, omega)
}
