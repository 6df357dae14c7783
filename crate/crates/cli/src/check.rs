//! Built-in self-check run by `--check`.

use objectivity::collision::plus_register;
use objectivity::lindblad::{blp_witness, dephasing_factor_nm};
use objectivity::{
    integrate, integrate_nonmarkov, partial_trace, unitary_from_hamiltonian, von_neumann_entropy, Bath, CollisionConfig,
    CollisionModel, ComplexMatrix, DensityMatrix, Interaction, LindbladConfig, TensorSpace, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunSpec, Simulation};
use crate::run::render;

type Outcome = Result<(), String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sim<T>(r: objectivity::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Result<DensityMatrix, String> {
    let space = sim(TensorSpace::qubits((0..n).map(|i| format!("q{i}"))))?;
    let d = space.total_dim();
    let g = ComplexMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &g * &g.adjoint();
    let m = m.scale_real(1.0 / m.trace().re).hermitian_part();
    sim(DensityMatrix::new(space, m))
}

fn state_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..500 {
        let n = rng.random_range(1..=4);
        let rho = random_state(&mut rng, n)?;
        let d = rho.dim();
        let s = sim(von_neumann_entropy(&rho))?;
        ensure((-1e-10..=(d as f64).log2() + 1e-10).contains(&s), || format!("entropy {s} out of range (round {round})"))?;
        let h = ComplexMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).hermitian_part();
        let u = sim(unitary_from_hamiltonian(&h, 1.3))?;
        let defect = (&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(d));
        ensure(defect < 1e-12, || format!("unitarity defect {defect:e} (round {round})"))?;
        sim(rho.evolve(&u).validate())?;
        if n > 1 {
            sim(sim(partial_trace(&rho, &["q0"]))?.validate())?;
        }
    }
    Ok(())
}

fn system_equivalence() -> Outcome {
    let deph = CollisionConfig { steps: 300, ..Default::default() };
    let therm = CollisionConfig { interaction: Interaction::Thermalising, ..deph.clone() };
    let a = sim(CollisionModel::new(&deph))?;
    let b = sim(CollisionModel::new(&therm))?;
    for (x, y) in sim(a.trajectory())?.zip(sim(b.trajectory())?) {
        let (x, y) = (sim(x)?, sim(y)?);
        let gap = sim(x.rho.partial_trace(&["S"]))?.matrix().max_abs_diff(sim(y.rho.partial_trace(&["S"]))?.matrix());
        ensure(gap <= 1e-10, || format!("system states differ by {gap:e} at round {}", x.step))?;
    }
    Ok(())
}

fn fragment_blindness() -> Outcome {
    let base = LindbladConfig { t_max: 2.0, record_every: 20, ..Default::default() };
    let a = sim(integrate(&LindbladConfig { gamma: 0.0, ..base.clone() }))?;
    let b = sim(integrate(&LindbladConfig { gamma: 1.0, ..base }))?;
    for (x, y) in a.iter().zip(&b) {
        let gap = (x.coherence_a1 - y.coherence_a1).norm();
        ensure(gap <= 1e-8, || format!("fragment coherence depends on gamma by {gap:e} at t = {}", x.t))?;
    }
    Ok(())
}

fn thermal_fixed_point() -> Outcome {
    let config = LindbladConfig { jz: 0.0, bath: Bath::Thermalising, gamma: 1.0, nbar: 0.5, t_max: 22.0, dt: 2e-3, record_every: 11000, ..Default::default() };
    let last = sim(integrate(&config))?.pop().ok_or("empty trajectory")?;
    let p = sim(last.rho.partial_trace(&["S"]))?.populations();
    ensure((p[0] - 0.75).abs() < 1e-6, || format!("ground population {} instead of 0.75", p[0]))
}

fn recoherence() -> Outcome {
    let config = LindbladConfig::nonmarkov_default();
    let last = sim(integrate_nonmarkov(&LindbladConfig { n_accessible: 1, jz: 0.0, calj: Some(10.0), gamma: 0.0, t_max: 0.3, dt: 1e-5, record_every: 30000, ..config }))?
        .pop()
        .ok_or("empty trajectory")?;
    let expected = 0.5 * dephasing_factor_nm(last.t, 0.0, 10.0);
    ensure((last.coherence_s.norm() - expected).abs() < 1e-9, || format!("coherence {} instead of {expected}", last.coherence_s.norm()))
}

fn markovian_contraction() -> Outcome {
    let config = LindbladConfig { t_max: 2.0, record_every: 10, ..Default::default() };
    let plus = sim(plus_register(1))?;
    let z = sim(objectivity::embed(&objectivity::linalg::pauli::z(), "S", plus.space()))?;
    let series = sim(blp_witness(&config, (&plus, &plus.evolve(&z))))?;
    ensure(series.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9), || "trace distance increased under a Markovian bath".into())
}

fn csv_rows_and_determinism() -> Outcome {
    let spec = RunSpec {
        mode: crate::config::Mode::Collision,
        simulation: Simulation::Collision(CollisionConfig { steps: 300, ..Default::default() }),
        record_every: 1,
        sweep: None,
        output: None,
    };
    let first = sim(render(&spec))?;
    ensure(first == sim(render(&spec))?, || "repeated run produced different output".into())?;
    for line in first.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect();
        ensure(cols[4] >= -1e-9, || format!("negative rescaled information in `{line}`"))?;
        ensure((0.0..=1.0 + 1e-9).contains(&cols[5]), || format!("system entropy out of range in `{line}`"))?;
    }
    Ok(())
}

/// Runs every check, reporting each to `report`; true when all pass.
pub fn run_checks(report: &mut dyn FnMut(&str, &Outcome)) -> bool {
    let checks: [Check; 7] = [
        ("state invariants", state_invariants),
        ("system trajectory equivalence", system_equivalence),
        ("fragment blind to dephasing rate", fragment_blindness),
        ("thermal fixed point", thermal_fixed_point),
        ("non-Markovian recoherence", recoherence),
        ("Markovian contraction", markovian_contraction),
        ("CSV rows and determinism", csv_rows_and_determinism),
    ];
    let mut all = true;
    for (name, check) in checks {
        let outcome = check();
        all &= outcome.is_ok();
        report(name, &outcome);
    }
    all
}
