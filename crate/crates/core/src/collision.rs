//! Stroboscopic collision model with two baths.
//!
//! Each round the system first interacts jointly with every accessible
//! fragment through `H_SA = J_SA Σ_i σ_z^S σ_z^{A_i}` for a time `τ1`, then
//! with a fresh collisional unit `E` drawn from a Gibbs state through either
//! a dephasing (`σ_z σ_z`) or a thermalising (`σ_x σ_x + σ_y σ_y`) coupling
//! for a time `τ2`:
//!
//! ```text
//! ρ(n+1) = Tr_E[ U_SE U_SA (ρ(n) ⊗ ρ_E) U_SA† U_SE† ]
//! ```
//!
//! The unit is appended as the last tensor factor and traced out at the end
//! of the round, so the accessible register never holds more than one unit.
//! Only the products `J_SA τ1` and `J_SE τ2` enter the dynamics.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, unitary_from_hamiltonian, ComplexMatrix, C64};
use crate::metrics::{mi_profile, FragmentSelection, MIProfile};
use crate::space::{embed, embed_pair, fragment_labels, TensorSpace};
use crate::state::{gibbs_qubit, DensityMatrix};

/// Label of the collisional unit while it is attached.
pub const UNIT_LABEL: &str = "E";

/// Coupling between the system and the collisional units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interaction {
    /// `J_SE σ_z^S σ_z^E`; commutes with `H_SA`.
    Dephasing,
    /// `J_SE (σ_x^S σ_x^E + σ_y^S σ_y^E)`; does not commute with `H_SA`.
    Thermalising,
}

impl std::str::FromStr for Interaction {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dephasing" => Ok(Self::Dephasing),
            "thermalising" | "thermalizing" => Ok(Self::Thermalising),
            other => Err(format!("unknown interaction `{other}` (expected dephasing or thermalising)")),
        }
    }
}

impl std::fmt::Display for Interaction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Dephasing => "dephasing",
            Self::Thermalising => "thermalising",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionConfig {
    /// Number of accessible fragments `N`.
    pub n_accessible: usize,
    /// `J_SA τ1`.
    pub j_sa_tau1: f64,
    /// `J_SE τ2`.
    pub j_se_tau2: f64,
    /// Inverse temperature of every incoming unit.
    pub beta: f64,
    pub interaction: Interaction,
    pub steps: usize,
    /// Apply `exp(-i σ_z^S (J_SA τ1 + J_SE τ2))` at the start of each round.
    pub include_free_evolution: bool,
}

impl Default for CollisionConfig {
    fn default() -> Self {
        Self {
            n_accessible: 3,
            j_sa_tau1: 0.0075 * PI / 4.0,
            j_se_tau2: 0.015 * PI / 2.0,
            beta: 0.0,
            interaction: Interaction::Dephasing,
            steps: 2000,
            include_free_evolution: false,
        }
    }
}

impl CollisionConfig {
    /// Largest `N` whose register plus one attached unit stays within
    /// [`MAX_DIM`](crate::MAX_DIM).
    pub const MAX_ACCESSIBLE: usize = 3;

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::config("steps", "must be at least 1"));
        }
        if !(1..=Self::MAX_ACCESSIBLE).contains(&self.n_accessible) {
            return Err(Error::config(
                "n_accessible",
                format!(
                    "must be between 1 and {} for collisions (register plus unit must fit in {} dimensions)",
                    Self::MAX_ACCESSIBLE,
                    crate::MAX_DIM
                ),
            ));
        }
        if !self.j_sa_tau1.is_finite() {
            return Err(Error::config("j_sa_tau1", "must be finite"));
        }
        if !self.j_se_tau2.is_finite() {
            return Err(Error::config("j_se_tau2", "must be finite"));
        }
        if !self.beta.is_finite() {
            return Err(Error::config("beta", "must be finite"));
        }
        Ok(())
    }

    /// Register space `S, A1..AN`.
    pub fn register_space(&self) -> Result<TensorSpace> {
        TensorSpace::system_and_fragments(self.n_accessible)
    }
}

/// Register state after `step` completed rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct StroboscopicState {
    pub step: usize,
    pub rho: DensityMatrix,
}

impl StroboscopicState {
    /// `|+⟩⟨+|` on the system and on every fragment.
    pub fn initial(n_accessible: usize) -> Result<Self> {
        Ok(Self { step: 0, rho: plus_register(n_accessible)? })
    }
}

/// `|+⟩^{⊗(N+1)}` on `S, A1..AN`.
pub fn plus_register(n_accessible: usize) -> Result<DensityMatrix> {
    let space = TensorSpace::system_and_fragments(n_accessible)?;
    let d = space.total_dim();
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    DensityMatrix::pure(space, &vec![amp; d])
}

/// `J Σ_i σ_z^S ⊗ σ_z^{A_i}` on `S, A1..AN`. Diagonal.
pub fn hsa_operator(n_accessible: usize, coupling: f64) -> Result<ComplexMatrix> {
    let space = TensorSpace::system_and_fragments(n_accessible)?;
    let zs = embed(&pauli::z(), "S", &space)?;
    let mut h = ComplexMatrix::zeros(space.total_dim(), space.total_dim());
    for label in fragment_labels(n_accessible) {
        let za = embed(&pauli::z(), &label, &space)?;
        h = &h + &(&zs * &za);
    }
    Ok(h.scale_real(coupling))
}

/// `H_SA τ1` for the configured register: the generator whose unit-time
/// exponential is one accessible collision.
pub fn build_hsa(config: &CollisionConfig) -> Result<ComplexMatrix> {
    hsa_operator(config.n_accessible, config.j_sa_tau1)
}

/// System-unit coupling on `S ⊗ E`.
pub fn build_hse(interaction: Interaction, j_se: f64) -> ComplexMatrix {
    let h = match interaction {
        Interaction::Dephasing => kron(&pauli::z(), &pauli::z()),
        Interaction::Thermalising => &kron(&pauli::x(), &pauli::x()) + &kron(&pauli::y(), &pauli::y()),
    };
    h.scale_real(j_se)
}

/// Precomputed unitaries for repeated rounds of one configuration.
#[derive(Debug, Clone)]
pub struct CollisionModel {
    config: CollisionConfig,
    register: TensorSpace,
    extended: TensorSpace,
    free: Option<ComplexMatrix>,
    u_sa: ComplexMatrix,
    u_se: ComplexMatrix,
    unit: DensityMatrix,
}

impl CollisionModel {
    pub fn new(config: &CollisionConfig) -> Result<Self> {
        config.validate()?;
        let register = config.register_space()?;
        let extended = register.with_appended(UNIT_LABEL, 2)?;
        let u_sa = unitary_from_hamiltonian(&build_hsa(config)?, 1.0)?;
        let u_se_pair = unitary_from_hamiltonian(&build_hse(config.interaction, config.j_se_tau2), 1.0)?;
        let u_se = embed_pair(&u_se_pair, "S", UNIT_LABEL, &extended)?;
        let free = if config.include_free_evolution {
            let phase = config.j_sa_tau1 + config.j_se_tau2;
            Some(unitary_from_hamiltonian(&embed(&pauli::z(), "S", &register)?, phase)?)
        } else {
            None
        };
        Ok(Self { config: config.clone(), register, extended, free, u_sa, u_se, unit: gibbs_qubit(config.beta)? })
    }

    pub fn config(&self) -> &CollisionConfig {
        &self.config
    }

    pub fn register_space(&self) -> &TensorSpace {
        &self.register
    }

    /// One round: optional free evolution, `U_SA`, attach a fresh unit,
    /// `U_SE`, trace the unit out.
    pub fn step(&self, state: &StroboscopicState) -> Result<StroboscopicState> {
        if state.rho.space() != &self.register {
            return Err(Error::SpaceMismatch);
        }
        let mut rho = state.rho.clone();
        if let Some(free) = &self.free {
            rho = rho.evolve(free);
        }
        let rho = rho.evolve(&self.u_sa);
        let joint = rho.tensor(&self.unit)?;
        debug_assert_eq!(joint.space(), &self.extended);
        let joint = joint.evolve(&self.u_se);
        let keep: Vec<&str> = self.register.labels().iter().map(String::as_str).collect();
        let next = joint.partial_trace(&keep)?;
        let step = state.step + 1;
        next.validate().map_err(|e| Error::Invariant { t: step as f64, source: Box::new(e) })?;
        Ok(StroboscopicState { step, rho: next })
    }

    /// States after rounds `1..=steps`, starting from `|+⟩` everywhere.
    pub fn trajectory(&self) -> Result<Trajectory<'_>> {
        Ok(Trajectory { model: self, state: StroboscopicState::initial(self.config.n_accessible)?, failed: false })
    }
}

/// Iterator over successive rounds of a [`CollisionModel`].
pub struct Trajectory<'a> {
    model: &'a CollisionModel,
    state: StroboscopicState,
    failed: bool,
}

impl Iterator for Trajectory<'_> {
    type Item = Result<StroboscopicState>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.state.step >= self.model.config.steps {
            return None;
        }
        match self.model.step(&self.state) {
            Ok(next) => {
                self.state = next.clone();
                Some(Ok(next))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Single round for an arbitrary state.
pub fn collision_step(state: &StroboscopicState, config: &CollisionConfig) -> Result<StroboscopicState> {
    CollisionModel::new(config)?.step(state)
}

/// Redundancy profile after every round.
pub fn run_collision_sim(config: &CollisionConfig) -> Result<Vec<MIProfile>> {
    let model = CollisionModel::new(config)?;
    let selection = FragmentSelection::fragments(config.n_accessible)?;
    model
        .trajectory()?
        .map(|s| {
            let s = s?;
            Ok(mi_profile(&s.rho, "S", &selection)?.at(s.step as f64))
        })
        .collect()
}
