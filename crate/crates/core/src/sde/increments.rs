//! Monte-Carlo estimate of the instantaneous noise correlations.

use super::equations::noise_increment;
use super::rng::{complex_wiener, trajectory_rng};
use super::stats::Estimate;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::{C64, DIM};

/// `E[dz_i dz_j] / dt` at the fixed point `z` from `draws` independent noise
/// increments, with plain standard errors. The exact value is the diffusion
/// matrix at `z`.
pub fn increment_moments(params: &SystemParams, z: &[C64; DIM], dt: f64, draws: usize, seed: u64) -> Result<Vec<Vec<Estimate>>> {
    if draws < 2 {
        return Err(Error::InsufficientData { n: draws });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig("dt must be positive".into()));
    }
    let mut rng = trajectory_rng(seed, 0);
    let mut sum = [[C64::new(0.0, 0.0); DIM]; DIM];
    let mut sq = [[(0.0, 0.0); DIM]; DIM];
    for _ in 0..draws {
        let dw = complex_wiener(&mut rng, dt);
        let dz = noise_increment(params, z, &dw);
        for i in 0..DIM {
            if dz[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in i..DIM {
                let p = dz[i] * dz[j] / dt;
                sum[i][j] += p;
                sq[i][j].0 += p.re * p.re;
                sq[i][j].1 += p.im * p.im;
            }
        }
    }
    let n = draws as f64;
    let se = |s: f64, q: f64| ((q / n - (s / n).powi(2)).max(0.0) / (n - 1.0)).sqrt();
    let mut out = vec![vec![Estimate { value: C64::new(0.0, 0.0), se_re: 0.0, se_im: 0.0 }; DIM]; DIM];
    for i in 0..DIM {
        for j in i..DIM {
            let e = Estimate { value: sum[i][j] / n, se_re: se(sum[i][j].re, sq[i][j].0), se_im: se(sum[i][j].im, sq[i][j].1) };
            out[i][j] = e;
            out[j][i] = e;
        }
    }
    Ok(out)
}
