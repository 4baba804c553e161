use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat12;
use crate::{C64, DIM};

/// Time-averaged fluctuation moments of a single trajectory, taken about the
/// ensemble's reference point.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySummary {
    pub index: u64,
    pub samples: usize,
    /// `⟨δz_i⟩_t`
    pub mean: [C64; DIM],
    /// `⟨δz_i δz_j⟩_t`
    pub second: Mat12,
    /// State at `t_end`.
    pub last: [C64; DIM],
}

/// Which ensemble average to estimate. Indices are phase-space slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moment {
    /// `⟨z_i⟩`
    Mean(usize),
    /// `⟨z_i z_j⟩`, the normally ordered operator moment when `i` names an
    /// `α⁺` slot and `j` an `α` slot.
    Product(usize, usize),
    /// `⟨(z_i − r_i)(z_j − r_j)⟩` about the reference point `r`.
    Fluctuation(usize, usize),
    /// `⟨z_i z_j⟩ − ⟨z_i⟩⟨z_j⟩`.
    Covariance(usize, usize),
}

/// Ensemble estimate with separate jackknife standard errors for the real
/// and imaginary parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: C64,
    pub se_re: f64,
    pub se_im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

/// One row of a sample-versus-theory comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZScore {
    pub i: usize,
    pub j: usize,
    pub part: Part,
    pub sample: f64,
    pub se: f64,
    pub expected: f64,
    pub z: f64,
}

/// Per-trajectory summaries of an ensemble run plus the bookkeeping of
/// diverged trajectories. Summaries are kept sorted by trajectory index so
/// merged ensembles give bit-identical statistics regardless of the order
/// in which parts were produced.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStats {
    pub reference: [C64; DIM],
    summaries: Vec<TrajectorySummary>,
    diverged: Vec<u64>,
}

fn z_score(sample: f64, se: f64, expected: f64) -> f64 {
    let d = sample - expected;
    if se > 0.0 {
        d / se
    } else if d == 0.0 {
        0.0
    } else {
        d.signum() * f64::INFINITY
    }
}

impl EnsembleStats {
    pub fn new(reference: [C64; DIM], mut summaries: Vec<TrajectorySummary>, mut diverged: Vec<u64>) -> Self {
        summaries.sort_by_key(|s| s.index);
        diverged.sort_unstable();
        Self { reference, summaries, diverged }
    }

    /// Combines two ensembles over disjoint trajectory indices with the same
    /// reference point.
    pub fn merge(mut self, other: EnsembleStats) -> Result<Self> {
        if self.reference != other.reference {
            return Err(Error::InvalidConfig("cannot merge ensembles with different reference points".into()));
        }
        self.summaries.extend(other.summaries);
        self.diverged.extend(other.diverged);
        let merged = Self::new(self.reference, self.summaries, self.diverged);
        let dup = merged.summaries.windows(2).any(|w| w[0].index == w[1].index);
        if dup {
            return Err(Error::InvalidConfig("merged ensembles share trajectory indices".into()));
        }
        Ok(merged)
    }

    pub fn n_effective(&self) -> usize {
        self.summaries.len()
    }

    pub fn n_diverged(&self) -> usize {
        self.diverged.len()
    }

    pub fn diverged(&self) -> &[u64] {
        &self.diverged
    }

    pub fn summaries(&self) -> &[TrajectorySummary] {
        &self.summaries
    }

    /// Keeps only trajectories whose index satisfies `keep`.
    pub fn subset(&self, keep: impl Fn(u64) -> bool) -> Self {
        Self {
            reference: self.reference,
            summaries: self.summaries.iter().filter(|s| keep(s.index)).cloned().collect(),
            diverged: self.diverged.iter().copied().filter(|&i| keep(i)).collect(),
        }
    }

    fn per_trajectory(&self, s: &TrajectorySummary, m: Moment) -> C64 {
        let r = &self.reference;
        match m {
            Moment::Mean(i) => r[i] + s.mean[i],
            Moment::Product(i, j) => s.second[(i, j)] + r[i] * s.mean[j] + r[j] * s.mean[i] + r[i] * r[j],
            Moment::Fluctuation(i, j) => s.second[(i, j)],
            Moment::Covariance(..) => unreachable!("covariance is not a plain average"),
        }
    }

    /// Ensemble estimate with jackknife standard errors.
    pub fn moment(&self, which: Moment) -> Result<Estimate> {
        let n = self.summaries.len();
        if n < 2 {
            return Err(Error::InsufficientData { n });
        }
        let max_slot = match which {
            Moment::Mean(i) => i,
            Moment::Product(i, j) | Moment::Fluctuation(i, j) | Moment::Covariance(i, j) => i.max(j),
        };
        if max_slot >= DIM {
            return Err(Error::InvalidConfig(format!("moment slot out of range: {which:?}")));
        }
        let nf = n as f64;
        match which {
            Moment::Covariance(i, j) => {
                let (mut si, mut sj, mut sij) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                for s in &self.summaries {
                    si += s.mean[i];
                    sj += s.mean[j];
                    sij += s.second[(i, j)];
                }
                let full = sij / nf - (si / nf) * (sj / nf);
                let loo = self.summaries.iter().map(|s| {
                    let m = nf - 1.0;
                    (sij - s.second[(i, j)]) / m - ((si - s.mean[i]) / m) * ((sj - s.mean[j]) / m)
                });
                Ok(jackknife(full, loo, n))
            }
            _ => {
                let vals: Vec<C64> = self.summaries.iter().map(|s| self.per_trajectory(s, which)).collect();
                let total: C64 = vals.iter().sum();
                let full = total / nf;
                let loo = vals.iter().map(|v| (total - v) / (nf - 1.0));
                Ok(jackknife(full, loo, n))
            }
        }
    }

    /// Ensemble means `⟨z_i⟩` for every slot.
    pub fn first_moments(&self) -> Result<[Estimate; DIM]> {
        let mut out = [Estimate { value: C64::new(0.0, 0.0), se_re: 0.0, se_im: 0.0 }; DIM];
        for (i, e) in out.iter_mut().enumerate() {
            *e = self.moment(Moment::Mean(i))?;
        }
        Ok(out)
    }

    /// Fluctuation second moments about the reference for every slot pair.
    pub fn fluctuation_moments(&self) -> Result<Vec<Vec<Estimate>>> {
        (0..DIM)
            .map(|i| (0..DIM).map(|j| self.moment(Moment::Fluctuation(i, j))).collect())
            .collect()
    }

    /// z-scores of the fluctuation second moments against `expected` (for
    /// instance a Lyapunov covariance), over the upper triangle of `slots ×
    /// slots`, real and imaginary parts separately.
    pub fn compare_fluctuations(&self, expected: &Mat12, slots: &[usize]) -> Result<Vec<ZScore>> {
        Ok(compare_moments(&self.fluctuation_moments()?, expected, slots))
    }
}

/// z-scores of a table of estimates against `expected` over the upper
/// triangle of `slots × slots`, real and imaginary parts separately.
pub fn compare_moments(estimates: &[Vec<Estimate>], expected: &Mat12, slots: &[usize]) -> Vec<ZScore> {
    let mut out = Vec::new();
    for (a, &i) in slots.iter().enumerate() {
        for &j in &slots[a..] {
            let est = estimates[i][j];
            let exp = expected[(i, j)];
            out.push(ZScore { i, j, part: Part::Re, sample: est.value.re, se: est.se_re, expected: exp.re, z: z_score(est.value.re, est.se_re, exp.re) });
            out.push(ZScore { i, j, part: Part::Im, sample: est.value.im, se: est.se_im, expected: exp.im, z: z_score(est.value.im, est.se_im, exp.im) });
        }
    }
    out
}

/// z-scores of first-moment estimates against `expected`, one entry per
/// slot (`i == j`), real and imaginary parts separately.
pub fn compare_means(means: &[Estimate], expected: &[C64; DIM]) -> Vec<ZScore> {
    let mut out = Vec::with_capacity(2 * DIM);
    for (i, (est, exp)) in means.iter().zip(expected).enumerate() {
        out.push(ZScore { i, j: i, part: Part::Re, sample: est.value.re, se: est.se_re, expected: exp.re, z: z_score(est.value.re, est.se_re, exp.re) });
        out.push(ZScore { i, j: i, part: Part::Im, sample: est.value.im, se: est.se_im, expected: exp.im, z: z_score(est.value.im, est.se_im, exp.im) });
    }
    out
}

/// Jackknife standard errors from the leave-one-out estimates.
fn jackknife(full: C64, loo: impl Iterator<Item = C64>, n: usize) -> Estimate {
    let loo: Vec<C64> = loo.collect();
    let nf = n as f64;
    let mean: C64 = loo.iter().sum::<C64>() / nf;
    let (mut vr, mut vi) = (0.0, 0.0);
    for v in &loo {
        vr += (v.re - mean.re).powi(2);
        vi += (v.im - mean.im).powi(2);
    }
    let scale = (nf - 1.0) / nf;
    Estimate { value: full, se_re: (scale * vr).sqrt(), se_im: (scale * vi).sqrt() }
}
