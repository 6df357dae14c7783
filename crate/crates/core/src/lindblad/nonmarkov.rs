//! Time-dependent dephasing with rate `γ + g(t)`, `g(t) = tan(𝒥t)/2`.
//!
//! `g` turns negative on `𝒥t ∈ (π/2, π)` (mod π), which breaks divisibility
//! of the dynamical map and lets coherence flow back into the system. Since
//! `H_SA` and `σ_z^S` commute, every system-coherence element is simply
//! multiplied by
//!
//! ```text
//! exp(-2 ∫₀ᵗ (g(s) + γ) ds) = e^{-2γt} |cos 𝒥t|^{1/𝒥}
//! ```
//!
//! on top of the unitary phase, using the principal-value continuation of
//! `∫ tan` through its poles. That closed form is what trajectories record;
//! an RK4 integration with the rate clamped near the poles runs alongside as
//! a consistency check.

use std::f64::consts::PI;

use super::{check_trace, checked_state, integrate_from, rk4_step, Bath, Generator, LindbladConfig, TrajectoryRecord};
use crate::collision::plus_register;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::metrics::FragmentSelection;
use crate::state::{trace_distance, DensityMatrix};

/// Half-width, in units of `𝒥t`, of the exclusion window around each pole.
pub const POLE_WINDOW: f64 = 1e-3;
/// Clamp `|g| ≤ G_MAX_FACTOR · 𝒥`.
pub const G_MAX_FACTOR: f64 = 1e3;
/// Largest accepted relative distance between the integrated and the
/// closed-form state outside pole windows.
pub const CLOSED_FORM_TOL: f64 = 1e-3;

/// Signed offset of `𝒥t` from the nearest pole `π/2 + kπ`.
fn pole_offset(t: f64, calj: f64) -> f64 {
    let x = calj * t - PI / 2.0;
    x - PI * (x / PI).round()
}

pub fn in_pole_window(t: f64, calj: f64) -> bool {
    pole_offset(t, calj).abs() < POLE_WINDOW
}

/// `tan(𝒥t)/2`, refusing evaluation inside a pole window.
pub fn nonmarkov_rate(t: f64, calj: f64) -> Result<f64> {
    if in_pole_window(t, calj) {
        return Err(Error::PoleProximity(t));
    }
    Ok((calj * t).tan() / 2.0)
}

/// `tan(𝒥t)/2` limited to `±G_MAX_FACTOR·𝒥`; inside a pole window the rate
/// takes the clamp value with the sign of the branch it is on.
pub fn clamped_rate(t: f64, calj: f64) -> f64 {
    let g_max = G_MAX_FACTOR * calj;
    let off = pole_offset(t, calj);
    if off.abs() < POLE_WINDOW {
        if off < 0.0 {
            g_max
        } else {
            -g_max
        }
    } else {
        ((calj * t).tan() / 2.0).clamp(-g_max, g_max)
    }
}

/// `e^{-2γt} |cos 𝒥t|^{1/𝒥}`.
pub fn dephasing_factor_nm(t: f64, gamma: f64, calj: f64) -> f64 {
    let decay = (-2.0 * gamma * t).exp();
    if calj == 0.0 {
        return decay;
    }
    decay * (calj * t).cos().abs().powf(1.0 / calj)
}

/// Exact state at time `t` for diagonal `H_SA` and σ_z dephasing with
/// accumulated factor `factor`.
fn closed_form(rho0: &ComplexMatrix, gen: &Generator, t: f64, factor: f64) -> ComplexMatrix {
    let e = gen.energies();
    let s = gen.system_sign();
    ComplexMatrix::from_fn(rho0.rows(), rho0.cols(), |i, j| {
        let phase = C64::from_polar(1.0, -(e[i] - e[j]) * t);
        let damp = if s[i] != s[j] { factor } else { 1.0 };
        rho0.get(i, j) * phase * damp
    })
}

/// Pole and window-edge times strictly inside `(a, b)`.
fn breakpoints(a: f64, b: f64, calj: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let k_lo = ((calj * a - PI / 2.0 - POLE_WINDOW) / PI).floor() as i64;
    let k_hi = ((calj * b - PI / 2.0 + POLE_WINDOW) / PI).ceil() as i64;
    for k in k_lo..=k_hi {
        let pole = PI / 2.0 + k as f64 * PI;
        for x in [pole - POLE_WINDOW, pole, pole + POLE_WINDOW] {
            let t = x / calj;
            if t > a && t < b {
                out.push(t);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// RK4 from `t` to `t + dt`, split at every discontinuity of the clamped
/// rate so each sub-step sees a smooth coefficient.
fn clamped_step(gen: &Generator, rho: &ComplexMatrix, t: f64, dt: f64, gamma: f64, calj: f64) -> ComplexMatrix {
    let mut nodes = vec![t];
    nodes.extend(breakpoints(t, t + dt, calj));
    nodes.push(t + dt);
    let g_max = G_MAX_FACTOR * calj;
    let mut rho = rho.clone();
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid_off = pole_offset(0.5 * (a + b), calj);
        let rate: Box<dyn Fn(f64) -> f64> = if mid_off.abs() < POLE_WINDOW {
            let g = if mid_off < 0.0 { g_max } else { -g_max };
            Box::new(move |_| gamma + g)
        } else {
            Box::new(move |s: f64| gamma + ((calj * s).tan() / 2.0).clamp(-g_max, g_max))
        };
        rho = rk4_step(gen, &rho, a, b - a, rate.as_ref());
    }
    rho
}

/// Non-Markovian trajectory from `|+⟩` on the system and every fragment.
pub fn integrate_nonmarkov(config: &LindbladConfig) -> Result<Vec<TrajectoryRecord>> {
    integrate_nonmarkov_from(config, &plus_register(config.n_accessible)?)
}

pub fn integrate_nonmarkov_from(config: &LindbladConfig, rho0: &DensityMatrix) -> Result<Vec<TrajectoryRecord>> {
    config.validate()?;
    if config.bath != Bath::NonMarkovDephasing {
        return Err(Error::config("bath", "integrate_nonmarkov needs the nonmarkov-dephasing bath"));
    }
    let space = config.register_space()?;
    if rho0.space() != &space {
        return Err(Error::SpaceMismatch);
    }
    let selection = FragmentSelection::fragments(config.n_accessible)?;
    let gen = Generator::new(config)?;
    let (gamma, calj) = (config.gamma, config.calj());
    let steps = config.steps();
    let initial = rho0.matrix();
    let mut records = Vec::with_capacity(steps / config.record_every + 1);
    records.push(TrajectoryRecord::new(0.0, rho0.clone(), &selection)?);
    let mut rho = initial.clone();
    for k in 0..steps {
        let t = k as f64 * config.dt;
        rho = clamped_step(&gen, &rho, t, config.dt, gamma, calj).hermitian_part();
        let t_next = (k + 1) as f64 * config.dt;
        check_trace(&rho, t_next)?;
        if (k + 1) % config.record_every == 0 {
            let exact = closed_form(initial, &gen, t_next, dephasing_factor_nm(t_next, gamma, calj));
            if !in_pole_window(t_next, calj) {
                let error = rho.max_abs_diff(&exact) / exact.max_abs();
                if !(error <= CLOSED_FORM_TOL) {
                    return Err(Error::ClosedFormMismatch { t: t_next, error });
                }
            }
            let state = checked_state(&space, exact, t_next)?;
            records.push(TrajectoryRecord::new(t_next, state, &selection)?);
        }
    }
    Ok(records)
}

/// Trace distance between two register states evolved under the same
/// configuration, at every recorded time.
pub fn blp_witness(config: &LindbladConfig, initial_pair: (&DensityMatrix, &DensityMatrix)) -> Result<Vec<(f64, f64)>> {
    let (a, b) = initial_pair;
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch);
    }
    let evolve = |rho: &DensityMatrix| match config.bath {
        Bath::NonMarkovDephasing => integrate_nonmarkov_from(config, rho),
        _ => integrate_from(config, rho),
    };
    let ra = evolve(a)?;
    let rb = evolve(b)?;
    ra.iter().zip(&rb).map(|(x, y)| Ok((x.t, trace_distance(&x.rho, &y.rho)?))).collect()
}

/// Maximal time intervals over which the series rises by more than `noise`
/// between consecutive samples.
pub fn backflow_intervals(series: &[(f64, f64)], noise: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open = false;
    for w in series.windows(2) {
        let ((t0, d0), (t1, d1)) = (w[0], w[1]);
        if d1 - d0 > noise {
            match (open, out.last_mut()) {
                (true, Some(last)) => last.1 = t1,
                _ => out.push((t0, t1)),
            }
            open = true;
        } else {
            open = false;
        }
    }
    out
}
