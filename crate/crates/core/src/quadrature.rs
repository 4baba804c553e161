//! Linear combinations of field quadratures.
//!
//! With `X = a + a†` and `Y = −i(a − a†)` the commutator is `[X, Y] = 2i`
//! and a single vacuum quadrature has variance 1.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Mode, SystemParams};
use crate::{C64, DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    X,
    Y,
}

/// Coefficient vector `c` such that the observable is `Σ c_k z_k` over the
/// interleaved phase-space variables, i.e. `Σ_j (c_{2j} a_j + c_{2j+1} a_j†)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSelector {
    pub c: [C64; DIM],
    /// Shot-noise variance of this combination.
    pub vacuum_level: f64,
}

impl QuadratureSelector {
    fn from_coeffs(c: [C64; DIM]) -> Self {
        let mut s = Self { c, vacuum_level: 0.0 };
        s.vacuum_level = vacuum_overlap(&s, &s);
        s
    }

    /// `weight · Q_mode`.
    pub fn term(mode: Mode, q: Quadrature, weight: f64) -> Self {
        let mut c = [C64::new(0.0, 0.0); DIM];
        let (a, ad) = match q {
            Quadrature::X => (C64::new(1.0, 0.0), C64::new(1.0, 0.0)),
            Quadrature::Y => (C64::new(0.0, -1.0), C64::new(0.0, 1.0)),
        };
        c[mode.slot()] = a * weight;
        c[mode.conj_slot()] = ad * weight;
        Self::from_coeffs(c)
    }

    pub fn x(mode: Mode) -> Self {
        Self::term(mode, Quadrature::X, 1.0)
    }

    pub fn y(mode: Mode) -> Self {
        Self::term(mode, Quadrature::Y, 1.0)
    }

    /// `Q_{m₁} + Q_{m₂} + …`
    pub fn sum(q: Quadrature, modes: &[Mode]) -> Self {
        modes
            .iter()
            .map(|&m| Self::term(m, q, 1.0))
            .fold(Self::zero(), |acc, s| acc + s)
    }

    pub fn zero() -> Self {
        Self::from_coeffs([C64::new(0.0, 0.0); DIM])
    }

    pub fn scaled(&self, w: f64) -> Self {
        Self::from_coeffs(self.c.map(|z| z * w))
    }

    /// Modes with a nonzero coefficient.
    pub fn modes(&self) -> Vec<Mode> {
        Mode::ALL
            .into_iter()
            .filter(|m| self.c[m.slot()] != C64::new(0.0, 0.0) || self.c[m.conj_slot()] != C64::new(0.0, 0.0))
            .collect()
    }

    /// Relabels modes; `perm` must be a bijection.
    pub fn permuted(&self, perm: impl Fn(Mode) -> Mode) -> Self {
        let mut c = [C64::new(0.0, 0.0); DIM];
        for m in Mode::ALL {
            let t = perm(m);
            c[t.slot()] = self.c[m.slot()];
            c[t.conj_slot()] = self.c[m.conj_slot()];
        }
        Self::from_coeffs(c)
    }

    /// Decay rate shared by every mode in the combination.
    pub fn decay(&self, params: &SystemParams) -> Result<f64> {
        let modes = self.modes();
        let Some(first) = modes.first() else {
            return Ok(params.kappa);
        };
        if modes.iter().any(|m| m.is_signal() != first.is_signal()) {
            return Err(Error::MixedDecay);
        }
        Ok(first.decay(params))
    }
}

impl Add for QuadratureSelector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        Self::from_coeffs(c)
    }
}

impl Sub for QuadratureSelector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadratureSelector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(-1.0)
    }
}

impl fmt::Display for QuadratureSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in Mode::ALL {
            let (a, ad) = (self.c[m.slot()], self.c[m.conj_slot()]);
            for (q, w) in [(Quadrature::X, (a + ad).re / 2.0), (Quadrature::Y, (a - ad).im / -2.0)] {
                if w == 0.0 {
                    continue;
                }
                let sign = if w < 0.0 { "-" } else if first { "" } else { "+" };
                let mag = if w.abs() == 1.0 { String::new() } else { format!("{}", w.abs()) };
                write!(f, "{sign}{mag}{q:?}{m}")?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Symmetrized vacuum expectation `½⟨O_A O_B + O_B O_A⟩`.
///
/// Only `⟨a a†⟩ = 1` survives in vacuum, so this is
/// `Re Σ_j (u^A_j v^B_j + u^B_j v^A_j) / 2` with `u, v` the `a`, `a†`
/// coefficients.
pub fn vacuum_overlap(a: &QuadratureSelector, b: &QuadratureSelector) -> f64 {
    Mode::ALL
        .iter()
        .map(|m| {
            let (i, j) = (m.slot(), m.conj_slot());
            ((a.c[i] * b.c[j] + b.c[i] * a.c[j]) * 0.5).re
        })
        .sum()
}
