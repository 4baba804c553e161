//! Statistical and numerical properties of the positive-P integrator.

use tcopo::linearization::LinearizedSystem;
use tcopo::sde::{
    compare_moments, drift, increment_moments, integrate_ensemble, trajectory, Moment, PhaseSpacePoint, Scheme,
    TrajectoryConfig,
};
use tcopo::{Error, Mode, SystemParams, C64, DIM};

fn below() -> SystemParams {
    SystemParams::reference(0.0).at_ratio(0.9).unwrap()
}

fn above() -> SystemParams {
    SystemParams::reference(0.0).at_ratio(1.1).unwrap()
}

/// Classical fourth-order Runge-Kutta on the deterministic drift; an
/// independent reference for the order test.
fn rk4(params: &SystemParams, mut z: [C64; DIM], dt: f64, steps: usize) -> [C64; DIM] {
    let axpy = |z: &[C64; DIM], k: &[C64; DIM], h: f64| {
        let mut out = *z;
        for (o, v) in out.iter_mut().zip(k) {
            *o += v * h;
        }
        out
    };
    for _ in 0..steps {
        let k1 = drift(params, &z);
        let k2 = drift(params, &axpy(&z, &k1, dt / 2.0));
        let k3 = drift(params, &axpy(&z, &k2, dt / 2.0));
        let k4 = drift(params, &axpy(&z, &k3, dt));
        for i in 0..DIM {
            z[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
    z
}

fn start() -> [C64; DIM] {
    let mut z = [C64::new(0.0, 0.0); DIM];
    for m in Mode::PUMPS {
        z[m.slot()] = C64::new(20.0, 0.0);
        z[m.conj_slot()] = C64::new(20.0, 0.0);
    }
    for (k, m) in Mode::SIGNALS.into_iter().enumerate() {
        z[m.slot()] = C64::new(5.0 + k as f64, 1.0);
        z[m.conj_slot()] = C64::new(5.0 + k as f64, -1.0);
    }
    z
}

fn quiet_endpoint(params: &SystemParams, scheme: Scheme, dt: f64, t_end: f64) -> [C64; DIM] {
    let cfg = TrajectoryConfig { dt, t_end, scheme, noise: false, n_traj: 1, sample_every: 1, ..Default::default() };
    trajectory(params, &cfg, &PhaseSpacePoint::new(start()), 0).unwrap().last().unwrap().z
}

#[test]
fn deterministic_convergence_order() {
    let p = above();
    let t_end = 1.0;
    let exact = rk4(&p, start(), 1e-5, 100_000);
    let err = |scheme, dt| {
        let z = quiet_endpoint(&p, scheme, dt, t_end);
        z.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    };
    for (scheme, factor) in [(Scheme::EulerMaruyama, 2.0), (Scheme::SemiImplicitMidpoint, 4.0)] {
        let e: Vec<f64> = [0.01, 0.005, 0.0025].iter().map(|&dt| err(scheme, dt)).collect();
        for w in e.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - factor).abs() < 0.15 * factor, "{scheme:?}: errors {e:?}");
        }
    }
}

fn short_run(n_traj: usize, seed: u64) -> TrajectoryConfig {
    TrajectoryConfig { n_traj, seed, dt: 5e-3, t_end: 15.0, burn_in: 5.0, ..Default::default() }
}

#[test]
fn identical_seed_gives_identical_statistics() {
    let p = below();
    let ss = LinearizedSystem::from_params(&p).unwrap().steady.alpha;
    let init = PhaseSpacePoint::new(ss);
    let a = integrate_ensemble(&p, &short_run(16, 9), &init, &ss).unwrap();
    let b = integrate_ensemble(&p, &short_run(16, 9), &init, &ss).unwrap();
    assert_eq!(a, b);
    let c = integrate_ensemble(&p, &short_run(16, 10), &init, &ss).unwrap();
    assert_ne!(a, c);
    // trajectory i does not depend on how many others run alongside it
    let small = integrate_ensemble(&p, &short_run(4, 9), &init, &ss).unwrap();
    assert_eq!(small.summaries(), &a.summaries()[..4]);
}

#[test]
fn split_halves_and_conjugation_symmetry() {
    let p = below();
    let ss = LinearizedSystem::from_params(&p).unwrap().steady.alpha;
    let stats = integrate_ensemble(&p, &short_run(2000, 42), &PhaseSpacePoint::new(ss), &ss).unwrap();
    assert_eq!(stats.n_effective(), 2000);

    let halves = [stats.subset(|i| i % 2 == 0), stats.subset(|i| i % 2 == 1)];
    let (a4, a5) = (Mode::A4, Mode::A5);
    let moments = [
        Moment::Fluctuation(a4.slot(), a5.slot()),
        Moment::Fluctuation(a4.slot(), a4.conj_slot()),
        Moment::Fluctuation(a5.conj_slot(), a4.conj_slot()),
        Moment::Mean(a4.slot()),
    ];
    for m in moments {
        let full = stats.moment(m).unwrap().se_re;
        for h in &halves {
            let ratio = h.moment(m).unwrap().se_re / full;
            assert!((ratio - 2f64.sqrt()).abs() < 0.15, "{m:?}: {ratio}");
        }
    }

    // the distribution, not each trajectory, realizes α⁺ = α*
    for mode in Mode::ALL {
        let a = stats.moment(Moment::Mean(mode.slot())).unwrap();
        let ap = stats.moment(Moment::Mean(mode.conj_slot())).unwrap();
        let d = ap.value - a.value.conj();
        let (se_re, se_im) = ((a.se_re.powi(2) + ap.se_re.powi(2)).sqrt(), (a.se_im.powi(2) + ap.se_im.powi(2)).sqrt());
        assert!(d.re.abs() <= 3.0 * se_re + 1e-12, "{mode}: {d}");
        assert!(d.im.abs() <= 3.0 * se_im + 1e-12, "{mode}: {d}");
    }
}

#[test]
fn photon_number_above_threshold() {
    let p = above();
    let ss = LinearizedSystem::from_params(&p).unwrap().steady.alpha;
    let cfg = TrajectoryConfig { n_traj: 200, dt: 5e-3, t_end: 10.0, burn_in: 2.0, ..Default::default() };
    let stats = integrate_ensemble(&p, &cfg, &PhaseSpacePoint::new(ss), &ss).unwrap();
    let n = stats.moment(Moment::Product(Mode::A4.conj_slot(), Mode::A4.slot())).unwrap();
    assert!((n.value.re - 5000.0).abs() < 0.01 * 5000.0, "{n:?}");
    assert!(n.se_re < 0.01 * n.value.re);
}

#[test]
fn increment_covariance_reproduces_diffusion_above_threshold() {
    let p = above();
    let lin = LinearizedSystem::from_params(&p).unwrap();
    let d45 = lin.diffusion[(Mode::A4.slot(), Mode::A5.slot())];
    assert!((d45 - 0.5).norm() < 1e-12);
    let m = increment_moments(&p, &lin.steady.alpha, 1e-3, 1_000_000, 3).unwrap();
    let slots: Vec<usize> = (0..DIM).collect();
    for z in compare_moments(&m, &lin.diffusion, &slots) {
        assert!(z.z.abs() < 3.0, "{z:?}");
    }
}

#[test]
fn ensemble_reports_total_divergence() {
    let p = below();
    let ss = LinearizedSystem::from_params(&p).unwrap().steady.alpha;
    let cfg = TrajectoryConfig { n_traj: 3, divergence_guard: Some(1.0), t_end: 1.0, ..Default::default() };
    let r = integrate_ensemble(&p, &cfg, &PhaseSpacePoint::new([C64::new(0.0, 0.0); DIM]), &ss);
    assert_eq!(r.unwrap_err(), Error::AllDiverged { n_traj: 3 });
}
