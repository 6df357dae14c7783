use std::f64::consts::PI;

use objectivity::collision::{collision_step, plus_register, StroboscopicState};
use objectivity::{run_collision_sim, CollisionConfig, CollisionModel, Interaction};
use proptest::prelude::*;

fn small(interaction: Interaction) -> impl Strategy<Value = CollisionConfig> {
    (1usize..=3, -1.0f64..1.0, -1.0f64..1.0, -2.0f64..2.0, any::<bool>()).prop_map(move |(n, jsa, jse, beta, free)| {
        CollisionConfig {
            n_accessible: n,
            j_sa_tau1: jsa,
            j_se_tau2: jse,
            beta,
            interaction,
            steps: 6,
            include_free_evolution: free,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_round_yields_a_valid_state(config in small(Interaction::Thermalising)) {
        let model = CollisionModel::new(&config).unwrap();
        for s in model.trajectory().unwrap() {
            prop_assert!(s.unwrap().rho.validate().is_ok());
        }
    }

    #[test]
    fn dephasing_preserves_populations(config in small(Interaction::Dephasing)) {
        let model = CollisionModel::new(&config).unwrap();
        let start = StroboscopicState::initial(config.n_accessible).unwrap();
        let p0 = start.rho.populations();
        for s in model.trajectory().unwrap() {
            let p = s.unwrap().rho.populations();
            for (a, b) in p0.iter().zip(&p) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rescaled_information_stays_in_range(config in small(Interaction::Dephasing)) {
        for profile in run_collision_sim(&config).unwrap() {
            for r in &profile.records {
                prop_assert!(r.mi_bits >= 0.0);
                prop_assert!(r.entropy_s_bits <= 1.0 + 1e-9);
                if let Some(v) = r.rescaled {
                    prop_assert!((-1e-9..=2.0 + 1e-6).contains(&v));
                }
            }
        }
    }
}

#[test]
fn plateau_peaks_recur_at_half_conditional_period() {
    let config = CollisionConfig { steps: 700, ..Default::default() };
    let i1: Vec<f64> = run_collision_sim(&config).unwrap().iter().map(|p| p.rescaled(1).unwrap_or(0.0)).collect();
    let argmax = |lo: usize, hi: usize| (lo..=hi).max_by(|&a, &b| i1[a - 1].total_cmp(&i1[b - 1])).unwrap();
    assert_eq!(argmax(1, 266), 133);
    assert_eq!(argmax(267, 533), 400);
    assert!(i1[132] > 0.999);
}

#[test]
fn full_fragment_set_carries_twice_the_entropy_when_global_state_is_pure() {
    let config = CollisionConfig { j_se_tau2: 0.0, steps: 133, ..Default::default() };
    let last = run_collision_sim(&config).unwrap().pop().unwrap();
    assert!((last.rescaled(3).unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn stepping_and_model_agree() {
    let config = CollisionConfig { n_accessible: 2, interaction: Interaction::Thermalising, beta: 0.7, steps: 3, ..Default::default() };
    let mut state = StroboscopicState { step: 0, rho: plus_register(2).unwrap() };
    let from_model: Vec<_> = CollisionModel::new(&config).unwrap().trajectory().unwrap().map(Result::unwrap).collect();
    for expected in from_model {
        state = collision_step(&state, &config).unwrap();
        assert_eq!(state.step, expected.step);
        assert!(state.rho.matrix().max_abs_diff(expected.rho.matrix()) < 1e-15);
    }
}

#[test]
fn quarter_turn_exchange_swaps_system_into_unit() {
    let config = CollisionConfig {
        n_accessible: 1,
        j_sa_tau1: 0.0,
        j_se_tau2: PI / 4.0,
        interaction: Interaction::Thermalising,
        beta: 50.0,
        steps: 1,
        ..Default::default()
    };
    let s = CollisionModel::new(&config).unwrap().trajectory().unwrap().next().unwrap().unwrap();
    let p = s.rho.partial_trace(&["S"]).unwrap().populations();
    assert!((p[0] - 1.0).abs() < 1e-12);
}
