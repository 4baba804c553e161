//! Right-hand side of the positive-P Itô equations.
//!
//! Each signal equation for `α_j` has an interchange partner for `α_j⁺`
//! obtained by swapping `α ↔ α⁺` and `dW_k ↔ dW_{k+3}`. The external pumps
//! are real so they are unchanged by the swap.

use crate::model::SystemParams;
use crate::{C64, DIM};

// slots in the interleaved phase-space vector
const A1: usize = 0;
const A1P: usize = 1;
const A2: usize = 2;
const A2P: usize = 3;
const A3: usize = 4;
const A3P: usize = 5;
const A4: usize = 6;
const A4P: usize = 7;
const A5: usize = 8;
const A5P: usize = 9;
const A6: usize = 10;
const A6P: usize = 11;

/// Deterministic part of the equations of motion.
pub fn drift(params: &SystemParams, z: &[C64; DIM]) -> [C64; DIM] {
    let [x1, x2, x3] = params.chi;
    let [e1, e2, e3] = params.pump;
    let (g, k) = (params.gamma, params.kappa);
    let mut f = [C64::new(0.0, 0.0); DIM];

    f[A1] = -g * z[A1] + e1 - x1 * z[A4] * z[A5];
    f[A2] = -g * z[A2] + e2 - x2 * z[A5] * z[A6];
    f[A3] = -g * z[A3] + e3 - x3 * z[A4] * z[A6];
    f[A1P] = -g * z[A1P] + e1 - x1 * z[A4P] * z[A5P];
    f[A2P] = -g * z[A2P] + e2 - x2 * z[A5P] * z[A6P];
    f[A3P] = -g * z[A3P] + e3 - x3 * z[A4P] * z[A6P];

    f[A4] = -k * z[A4] + x1 * z[A1] * z[A5P] + x3 * z[A3] * z[A6P];
    f[A5] = -k * z[A5] + x1 * z[A1] * z[A4P] + x2 * z[A2] * z[A6P];
    f[A6] = -k * z[A6] + x2 * z[A2] * z[A5P] + x3 * z[A3] * z[A4P];
    f[A4P] = -k * z[A4P] + x1 * z[A1P] * z[A5] + x3 * z[A3P] * z[A6];
    f[A5P] = -k * z[A5P] + x1 * z[A1P] * z[A4] + x2 * z[A2P] * z[A6];
    f[A6P] = -k * z[A6P] + x2 * z[A2P] * z[A5] + x3 * z[A3P] * z[A4];
    f
}

/// The six noise amplitudes `√(χ₁α₁), √(χ₂α₂), √(χ₃α₃), √(χ₁α₁⁺), √(χ₂α₂⁺),
/// √(χ₃α₃⁺)` on the principal branch.
pub fn noise_roots(params: &SystemParams, z: &[C64; DIM]) -> [C64; 6] {
    let [x1, x2, x3] = params.chi;
    [
        (z[A1] * x1).sqrt(),
        (z[A2] * x2).sqrt(),
        (z[A3] * x3).sqrt(),
        (z[A1P] * x1).sqrt(),
        (z[A2P] * x2).sqrt(),
        (z[A3P] * x3).sqrt(),
    ]
}

/// Principal roots with each sign flipped where needed so that it stays on
/// the same side as `previous` (no jump across the branch cut).
pub fn tracked_noise_roots(params: &SystemParams, z: &[C64; DIM], previous: &[C64; 6]) -> [C64; 6] {
    let mut r = noise_roots(params, z);
    for (root, prev) in r.iter_mut().zip(previous) {
        if (*root * prev.conj()).re < 0.0 {
            *root = -*root;
        }
    }
    r
}

/// Stochastic increment for given roots and complex Wiener increments
/// `dW₁ … dW₆`. Pump slots receive no noise.
pub fn noise_with_roots(roots: &[C64; 6], dw: &[C64; 6]) -> [C64; DIM] {
    let [s1, s2, s3, s1p, s2p, s3p] = *roots;
    let [w1, w2, w3, w4, w5, w6] = *dw;
    let mut n = [C64::new(0.0, 0.0); DIM];
    n[A4] = s1 * w1 + s3 * w3;
    n[A5] = s2 * w2 + s1 * w1.conj();
    n[A6] = s2 * w2.conj() + s3 * w3.conj();
    n[A4P] = s1p * w4 + s3p * w6;
    n[A5P] = s2p * w5 + s1p * w4.conj();
    n[A6P] = s2p * w5.conj() + s3p * w6.conj();
    n
}

/// Stochastic increment at `z` using principal-branch square roots.
pub fn noise_increment(params: &SystemParams, z: &[C64; DIM], dw: &[C64; 6]) -> [C64; DIM] {
    noise_with_roots(&noise_roots(params, z), dw)
}
