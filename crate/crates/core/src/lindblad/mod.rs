//! Continuous-time model: the system and its accessible fragments evolve
//! under `H_SA` while a Markovian bath acts on the system alone,
//!
//! ```text
//! dρ/dt = -i[H_SA, ρ] + L(ρ)
//! L_D(ρ) = γ (σ_z ρ σ_z - ρ)
//! L_T(ρ) = γ(n̄+1) D[σ_-](ρ) + γ n̄ D[σ_+](ρ),   D[c](ρ) = c ρ c† - ½{c†c, ρ}
//! ```
//!
//! with `σ_-` = `|0⟩⟨1|` so that `n̄ = 0` relaxes the system into `|0⟩`,
//! matching the population ordering of the Gibbs units in
//! [`gibbs_qubit`](crate::state::gibbs_qubit).
//!
//! Integration is fixed-step RK4 without trace renormalisation; the state is
//! re-Hermitised after every step and a trace drift above
//! [`TRACE_DRIFT_TOL`] aborts the run.

pub mod nonmarkov;


use crate::collision::{hsa_operator, plus_register};
use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, C64};
use crate::metrics::{mi_profile, FragmentSelection, MIProfile};
use crate::space::{embed, TensorSpace};
use crate::state::DensityMatrix;

pub use nonmarkov::{
    backflow_intervals, blp_witness, clamped_rate, dephasing_factor_nm, in_pole_window, integrate_nonmarkov,
    integrate_nonmarkov_from, nonmarkov_rate,
};

/// Largest accepted `|tr ρ - 1|` during integration.
pub const TRACE_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bath {
    Dephasing,
    Thermalising,
    /// Dephasing at rate `γ + tan(𝒥t)/2`.
    NonMarkovDephasing,
}

impl std::str::FromStr for Bath {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dephasing" => Ok(Self::Dephasing),
            "thermalising" | "thermalizing" => Ok(Self::Thermalising),
            "nonmarkov-dephasing" => Ok(Self::NonMarkovDephasing),
            other => Err(format!(
                "unknown bath `{other}` (expected dephasing, thermalising or nonmarkov-dephasing)"
            )),
        }
    }
}

impl std::fmt::Display for Bath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Dephasing => "dephasing",
            Self::Thermalising => "thermalising",
            Self::NonMarkovDephasing => "nonmarkov-dephasing",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladConfig {
    pub n_accessible: usize,
    /// System-fragment coupling `J_SA` in `H_SA`.
    pub jz: f64,
    pub bath: Bath,
    pub gamma: f64,
    pub nbar: f64,
    /// Rate `𝒥` of the time-dependent dephasing; `None` means `jz`.
    pub calj: Option<f64>,
    pub t_max: f64,
    pub dt: f64,
    /// Store every `record_every`-th step (the initial state is always kept).
    pub record_every: usize,
}

impl Default for LindbladConfig {
    fn default() -> Self {
        Self {
            n_accessible: 1,
            jz: 1.0,
            bath: Bath::Dephasing,
            gamma: 0.1,
            nbar: 0.0,
            calj: None,
            t_max: 10.0,
            dt: 1e-3,
            record_every: 1,
        }
    }
}

impl LindbladConfig {
    /// Strong-coupling non-Markovian setting: three fragments, `J_SA = 10γ`
    /// with `γ = 1`, over a window that contains three sign changes of the
    /// time-dependent rate.
    pub fn nonmarkov_default() -> Self {
        Self {
            n_accessible: 3,
            jz: 10.0,
            bath: Bath::NonMarkovDephasing,
            gamma: 1.0,
            nbar: 0.0,
            calj: None,
            t_max: 1.0,
            dt: 1e-5,
            record_every: 1000,
        }
    }

    pub fn calj(&self) -> f64 {
        self.calj.unwrap_or(self.jz)
    }

    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.n_accessible) {
            return Err(Error::config("n_accessible", "must be between 1 and 4"));
        }
        if !self.jz.is_finite() {
            return Err(Error::config("jz", "must be finite"));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::config("gamma", "must be finite and non-negative"));
        }
        if !(self.nbar >= 0.0 && self.nbar.is_finite()) {
            return Err(Error::config("nbar", "must be finite and non-negative"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("dt", "must be positive"));
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return Err(Error::config("t_max", "must be at least dt"));
        }
        if self.record_every == 0 {
            return Err(Error::config("record_every", "must be at least 1"));
        }
        if let Some(c) = self.calj {
            if !c.is_finite() {
                return Err(Error::config("calj", "must be finite"));
            }
        }
        if self.bath == Bath::NonMarkovDephasing && !(self.calj() > 0.0) {
            return Err(Error::config("calj", "must be positive for the non-Markovian bath"));
        }
        Ok(())
    }

    pub fn register_space(&self) -> Result<TensorSpace> {
        TensorSpace::system_and_fragments(self.n_accessible)
    }
}

/// Stored point of a continuous-time trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub rho: DensityMatrix,
    /// `⟨0|ρ_S|1⟩`.
    pub coherence_s: C64,
    /// `⟨0|ρ_{A1}|1⟩`.
    pub coherence_a1: C64,
    pub profile: MIProfile,
}

impl TrajectoryRecord {
    pub(crate) fn new(t: f64, rho: DensityMatrix, selection: &FragmentSelection) -> Result<Self> {
        let coherence_s = rho.site_element("S", 0, 1)?;
        let coherence_a1 = rho.site_element("A1", 0, 1)?;
        let profile = mi_profile(&rho, "S", selection)?.at(t);
        Ok(Self { t, rho, coherence_s, coherence_a1, profile })
    }
}

/// Right-hand side of the master equation with a time-dependent dephasing
/// rate supplied per call.
#[derive(Debug, Clone)]
pub(crate) struct Generator {
    /// Diagonal of `H_SA`.
    energies: Vec<f64>,
    /// `σ_z^S` eigenvalue of each basis state.
    system_sign: Vec<f64>,
    thermal: Option<ThermalTerms>,
}

#[derive(Debug, Clone)]
struct ThermalTerms {
    down_rate: f64,
    up_rate: f64,
    lower: ComplexMatrix,
    raise: ComplexMatrix,
    /// `σ_+σ_-`, projector onto `|1⟩` of the system.
    n_excited: ComplexMatrix,
    /// `σ_-σ_+`, projector onto `|0⟩` of the system.
    n_ground: ComplexMatrix,
}

impl Generator {
    pub(crate) fn new(config: &LindbladConfig) -> Result<Self> {
        let space = config.register_space()?;
        let h = hsa_operator(config.n_accessible, config.jz)?;
        debug_assert!(h.is_diagonal());
        let energies = h.diagonal().iter().map(|z| z.re).collect();
        let zs = embed(&pauli::z(), "S", &space)?;
        let system_sign = zs.diagonal().iter().map(|z| z.re).collect();
        let thermal = if config.bath == Bath::Thermalising {
            let lower = embed(&pauli::to_zero(), "S", &space)?;
            let raise = lower.adjoint();
            Some(ThermalTerms {
                down_rate: config.gamma * (config.nbar + 1.0),
                up_rate: config.gamma * config.nbar,
                n_excited: &raise * &lower,
                n_ground: &lower * &raise,
                lower,
                raise,
            })
        } else {
            None
        };
        Ok(Self { energies, system_sign, thermal })
    }

    /// `-i[H, ρ] + rate (σ_z ρ σ_z - ρ)` plus the thermal dissipator when
    /// configured. `dephasing_rate` is ignored for the thermal bath.
    pub(crate) fn apply(&self, rho: &ComplexMatrix, dephasing_rate: f64) -> ComplexMatrix {
        let n = rho.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        let minus_i = C64::new(0.0, -1.0);
        {
            let o = out.as_nalgebra_mut();
            let r = rho.as_nalgebra();
            for j in 0..n {
                for i in 0..n {
                    let mut v = minus_i * (self.energies[i] - self.energies[j]) * r[(i, j)];
                    if self.thermal.is_none() && self.system_sign[i] != self.system_sign[j] {
                        v -= 2.0 * dephasing_rate * r[(i, j)];
                    }
                    o[(i, j)] = v;
                }
            }
        }
        if let Some(th) = &self.thermal {
            let dissipator = |c: &ComplexMatrix, cd: &ComplexMatrix, num: &ComplexMatrix| {
                let jump = &(c * rho) * cd;
                let anti = &(num * rho) + &(rho * num);
                &jump - &anti.scale_real(0.5)
            };
            let down = dissipator(&th.lower, &th.raise, &th.n_excited).scale_real(th.down_rate);
            let up = dissipator(&th.raise, &th.lower, &th.n_ground).scale_real(th.up_rate);
            out = &(&out + &down) + &up;
        }
        out
    }

    pub(crate) fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub(crate) fn system_sign(&self) -> &[f64] {
        &self.system_sign
    }
}

/// One classical RK4 step from `t` to `t + dt`.
pub(crate) fn rk4_step(
    gen: &Generator,
    rho: &ComplexMatrix,
    t: f64,
    dt: f64,
    rate: &dyn Fn(f64) -> f64,
) -> ComplexMatrix {
    let k1 = gen.apply(rho, rate(t));
    let mid = t + 0.5 * dt;
    let y2 = rho + &k1.scale_real(0.5 * dt);
    let k2 = gen.apply(&y2, rate(mid));
    let y3 = rho + &k2.scale_real(0.5 * dt);
    let k3 = gen.apply(&y3, rate(mid));
    let y4 = rho + &k3.scale_real(dt);
    let k4 = gen.apply(&y4, rate(t + dt));
    let incr = &(&(&k1 + &k2.scale_real(2.0)) + &k3.scale_real(2.0)) + &k4;
    rho + &incr.scale_real(dt / 6.0)
}

pub(crate) fn check_trace(rho: &ComplexMatrix, t: f64) -> Result<()> {
    let drift = (rho.trace() - C64::new(1.0, 0.0)).norm();
    if !(drift <= TRACE_DRIFT_TOL) {
        return Err(Error::TraceDrift { t, drift });
    }
    Ok(())
}

pub(crate) fn checked_state(space: &TensorSpace, m: ComplexMatrix, t: f64) -> Result<DensityMatrix> {
    let rho = DensityMatrix::from_parts(space.clone(), m)?;
    rho.validate_with(TRACE_DRIFT_TOL).map_err(|e| Error::Invariant { t, source: Box::new(e) })?;
    Ok(rho)
}

/// `dρ/dt` at time `t`.
pub fn liouvillian_apply(rho: &DensityMatrix, config: &LindbladConfig, t: f64) -> Result<ComplexMatrix> {
    config.validate()?;
    if rho.space() != &config.register_space()? {
        return Err(Error::SpaceMismatch);
    }
    let rate = match config.bath {
        Bath::NonMarkovDephasing => config.gamma + nonmarkov_rate(t, config.calj())?,
        _ => config.gamma,
    };
    Ok(Generator::new(config)?.apply(rho.matrix(), rate))
}

/// RK4 trajectory from `|+⟩` on the system and every fragment.
pub fn integrate(config: &LindbladConfig) -> Result<Vec<TrajectoryRecord>> {
    integrate_from(config, &plus_register(config.n_accessible)?)
}

/// RK4 trajectory from an arbitrary register state.
pub fn integrate_from(config: &LindbladConfig, rho0: &DensityMatrix) -> Result<Vec<TrajectoryRecord>> {
    config.validate()?;
    if config.bath == Bath::NonMarkovDephasing {
        return Err(Error::config("bath", "nonmarkov-dephasing is integrated by integrate_nonmarkov"));
    }
    let space = config.register_space()?;
    if rho0.space() != &space {
        return Err(Error::SpaceMismatch);
    }
    let selection = FragmentSelection::fragments(config.n_accessible)?;
    let gen = Generator::new(config)?;
    let gamma = config.gamma;
    let rate = move |_t: f64| gamma;
    let steps = config.steps();
    let mut records = Vec::with_capacity(steps / config.record_every + 1);
    records.push(TrajectoryRecord::new(0.0, rho0.clone(), &selection)?);
    let mut rho = rho0.matrix().clone();
    for k in 0..steps {
        let t = k as f64 * config.dt;
        rho = rk4_step(&gen, &rho, t, config.dt, &rate).hermitian_part();
        let t_next = (k + 1) as f64 * config.dt;
        check_trace(&rho, t_next)?;
        if (k + 1) % config.record_every == 0 {
            let state = checked_state(&space, rho.clone(), t_next)?;
            records.push(TrajectoryRecord::new(t_next, state, &selection)?);
        }
    }
    Ok(records)
}

/// Closed-form coherences `(⟨0|ρ_S|1⟩, ⟨0|ρ_A|1⟩)` for one fragment.
///
/// The expressions are written in terms of the conditional-phase frequency
/// `J_z = 2 jz` (the `σ_z σ_z` coupling rotates the two conditional fragment
/// states apart at twice the coupling). As printed, the system expression
/// starts from 1 while the state's actual coherence starts from ½; compare
/// trajectories after normalising to `t = 0`.
pub fn analytic_coherences(config: &LindbladConfig, t: f64) -> Result<(C64, C64)> {
    if config.n_accessible != 1 {
        return Err(Error::config("n_accessible", "closed-form coherences need exactly one fragment"));
    }
    let jz = 2.0 * config.jz;
    let g = config.gamma;
    let nbar = config.nbar;
    let c = (jz * t).cos();
    match config.bath {
        Bath::Dephasing => Ok((C64::new((-2.0 * g * t).exp() * c, 0.0), C64::new(c / 2.0, 0.0))),
        Bath::Thermalising => {
            let system = C64::new((-g * (nbar + 0.5) * t).exp() * c, 0.0);
            let g_n = g * (2.0 * nbar + 1.0);
            let alpha = (C64::new(-4.0 * jz * jz + g_n * g_n, -4.0 * jz * g)).sqrt();
            let prefactor = (-(C64::new(g_n, 0.0) + alpha) * (t / 2.0)).exp();
            let fragment = if alpha.norm() < 1e-12 {
                // α → 0 limit of the bracket over 4α
                prefactor * C64::new(0.5 + g_n * t / 4.0, 0.0)
            } else {
                let e = (alpha * t).exp();
                prefactor / (4.0 * alpha) * ((e + 1.0) * alpha + (e - 1.0) * g_n)
            };
            Ok((system, fragment))
        }
        Bath::NonMarkovDephasing => Err(Error::config("bath", "closed-form coherences cover dephasing and thermalising")),
    }
}
