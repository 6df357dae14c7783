use objectivity::collision::plus_register;
use objectivity::lindblad::{analytic_coherences, blp_witness, dephasing_factor_nm, integrate_nonmarkov_from};
use objectivity::{integrate, integrate_nonmarkov, Bath, CollisionConfig, CollisionModel, LindbladConfig};
use proptest::prelude::*;

fn n1(bath: Bath, gamma: f64, nbar: f64) -> LindbladConfig {
    LindbladConfig { n_accessible: 1, jz: 1.0, bath, gamma, nbar, t_max: 4.0, dt: 1e-3, record_every: 50, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn trajectories_stay_physical(gamma in 0.0f64..2.0, nbar in 0.0f64..2.0, thermal in any::<bool>()) {
        let bath = if thermal { Bath::Thermalising } else { Bath::Dephasing };
        let config = LindbladConfig { n_accessible: 2, t_max: 1.0, dt: 2e-3, record_every: 25, ..n1(bath, gamma, nbar) };
        for r in integrate(&config).unwrap() {
            prop_assert!(r.rho.validate_with(1e-9).is_ok());
            prop_assert!((r.rho.trace().re - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn dephasing_fragment_is_blind_to_gamma(gamma in 0.0f64..3.0) {
        let a = integrate(&n1(Bath::Dephasing, 0.0, 0.0)).unwrap();
        let b = integrate(&n1(Bath::Dephasing, gamma, 0.0)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.coherence_a1 - y.coherence_a1).norm() <= 1e-8);
        }
    }
}

#[test]
fn unitary_limit_matches_collisions_without_unit_coupling() {
    let tau = 0.01;
    let config = n1(Bath::Dephasing, 0.0, 0.0);
    let records = integrate(&LindbladConfig { record_every: 10, ..config.clone() }).unwrap();
    let collision = CollisionConfig { n_accessible: 1, j_sa_tau1: config.jz * tau, j_se_tau2: 0.0, steps: 400, ..Default::default() };
    let states: Vec<_> = CollisionModel::new(&collision).unwrap().trajectory().unwrap().map(Result::unwrap).collect();
    for r in records.iter().skip(1) {
        let n = (r.t / tau).round() as usize;
        let s = states[n - 1].rho.site_element("S", 0, 1).unwrap();
        assert!((s - r.coherence_s).norm() < 1e-9, "t = {}", r.t);
    }
}

#[test]
fn collision_dephasing_reproduces_lindblad_envelope() {
    let gamma = 0.5;
    let tau = 0.01 / gamma;
    let config = LindbladConfig { n_accessible: 1, jz: 1.0, gamma, t_max: 4.0, dt: 1e-3, record_every: 20, ..Default::default() };
    let records = integrate(&config).unwrap();
    let j_se = 0.5 * (-2.0 * gamma * tau).exp().acos();
    let steps = (config.t_max / tau).round() as usize;
    let collision = CollisionConfig { n_accessible: 1, j_sa_tau1: config.jz * tau, j_se_tau2: j_se, steps, ..Default::default() };
    let states: Vec<_> = CollisionModel::new(&collision).unwrap().trajectory().unwrap().map(Result::unwrap).collect();
    let c0 = records[0].coherence_s.norm();
    for r in records.iter().skip(1) {
        let n = (r.t / tau).round() as usize;
        let s = states[n - 1].rho.site_element("S", 0, 1).unwrap();
        assert!((s - r.coherence_s).norm() <= 0.02 * c0, "t = {}", r.t);
    }
}

#[test]
fn amplitude_damping_relaxes_at_gamma() {
    let config = LindbladConfig { jz: 0.0, t_max: 3.0, ..n1(Bath::Thermalising, 0.7, 0.0) };
    for r in integrate(&config).unwrap() {
        let p1 = r.rho.partial_trace(&["S"]).unwrap().populations()[1];
        assert!((p1 - 0.5 * (-0.7 * r.t).exp()).abs() < 1e-10);
    }
}

#[test]
fn thermal_fragment_coherence_is_suppressed() {
    let config = LindbladConfig { t_max: 40.0, dt: 2e-3, record_every: 500, ..n1(Bath::Thermalising, 0.5, 0.5) };
    let last = integrate(&config).unwrap().pop().unwrap();
    assert!(last.coherence_a1.norm() < 1e-3);
    let (_, analytic) = analytic_coherences(&config, last.t).unwrap();
    assert!(analytic.norm() < 1e-3);
}

#[test]
fn recoherence_at_full_period() {
    let calj = 2.0;
    let config = LindbladConfig {
        n_accessible: 1,
        jz: 0.0,
        bath: Bath::NonMarkovDephasing,
        gamma: 0.0,
        calj: Some(calj),
        t_max: std::f64::consts::PI / calj,
        dt: 1e-4,
        record_every: 1,
        ..Default::default()
    };
    let records = integrate_nonmarkov(&config).unwrap();
    let last = records.last().unwrap();
    assert!((dephasing_factor_nm(last.t, 0.0, calj) - 1.0).abs() < 1e-6);
    assert!((last.coherence_s.norm() - 0.5).abs() < 1e-6);
}

#[test]
fn markovian_witness_never_increases() {
    let config = LindbladConfig { n_accessible: 1, gamma: 0.3, t_max: 3.0, dt: 1e-3, record_every: 10, ..Default::default() };
    let plus = plus_register(1).unwrap();
    let flipped = plus.evolve(&objectivity::space::embed(&objectivity::linalg::pauli::z(), "S", plus.space()).unwrap());
    let series = blp_witness(&config, (&plus, &flipped)).unwrap();
    assert!(series.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9));
    assert!((series[0].1 - 1.0).abs() < 1e-12);
}

#[test]
fn nonmarkov_rejects_foreign_state() {
    let config = LindbladConfig::nonmarkov_default();
    assert!(integrate_nonmarkov_from(&config, &plus_register(1).unwrap()).is_err());
}

#[test]
fn nonmarkov_and_markov_information_agree_roughly() {
    let nm = LindbladConfig { n_accessible: 2, t_max: 0.5, dt: 1e-5, record_every: 1000, ..LindbladConfig::nonmarkov_default() };
    let a = integrate_nonmarkov(&nm).unwrap();
    let b = integrate(&LindbladConfig { bath: Bath::Dephasing, ..nm.clone() }).unwrap();
    for (x, y) in a.iter().zip(&b) {
        if let (Some(p), Some(q)) = (x.profile.rescaled(1), y.profile.rescaled(1)) {
            assert!((p - q).abs() < 0.1, "t = {}", x.t);
        }
    }
}
