//! Mutual information between the system and fragments of the accessible
//! environment, and the redundancy profile built from it.
//!
//! For a fragment `F` the quantity of interest is
//! `I(S:F) = H(S) + H(F) - H(S,F)` in bits, and its rescaled form
//! `Ī = I(S:F) / H(S)`. A classical redundancy plateau shows up as `Ī = 1`
//! for every fragment smaller than the whole accessible environment.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::space::fragment_labels;
use crate::state::{l1_coherence, von_neumann_entropy, DensityMatrix, POSITIVITY_TOL};

/// `H(S)` at or below this value leaves `Ī` undefined.
pub const MIN_SYSTEM_ENTROPY: f64 = 1e-12;

/// How fragments of size `k` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FragmentPolicy {
    /// Average `I(S:F)` over all `C(N, k)` fragments of size `k`.
    #[default]
    AllSubsetsAverage,
    /// Use only the first `k` accessible labels.
    FirstK,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentSelection {
    accessible: Vec<String>,
    policy: FragmentPolicy,
}

impl FragmentSelection {
    pub fn new<S: Into<String>>(accessible: impl IntoIterator<Item = S>, policy: FragmentPolicy) -> Result<Self> {
        let accessible: Vec<String> = accessible.into_iter().map(Into::into).collect();
        if accessible.is_empty() {
            return Err(Error::EmptySelection);
        }
        for (i, l) in accessible.iter().enumerate() {
            if accessible[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { accessible, policy })
    }

    /// `A1..An` with the default policy.
    pub fn fragments(n: usize) -> Result<Self> {
        Self::new(fragment_labels(n), FragmentPolicy::default())
    }

    pub fn with_policy(mut self, policy: FragmentPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn accessible(&self) -> &[String] {
        &self.accessible
    }

    pub fn policy(&self) -> FragmentPolicy {
        self.policy
    }

    fn fragments_of_size(&self, k: usize) -> Vec<Vec<&str>> {
        match self.policy {
            FragmentPolicy::FirstK => vec![self.accessible[..k].iter().map(String::as_str).collect()],
            FragmentPolicy::AllSubsetsAverage => {
                self.accessible.iter().map(String::as_str).combinations(k).collect()
            }
        }
    }
}

/// One point of a redundancy profile: fragments of `k` accessible qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct FragmentRecord {
    pub k: usize,
    /// `k / N`.
    pub fraction: f64,
    /// Mean `I(S:F)` over the selected fragments, bits.
    pub mi_bits: f64,
    /// `mi_bits / H(S)`; `None` when `H(S) ≤ MIN_SYSTEM_ENTROPY`.
    pub rescaled: Option<f64>,
    pub entropy_s_bits: f64,
}

/// Mutual information against fragment size at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct MIProfile {
    /// Collision number or physical time, whichever drives the run.
    pub step_or_time: f64,
    /// Indexed by `k - 1`.
    pub records: Vec<FragmentRecord>,
    /// l1 coherence of the reduced system state.
    pub coherence_s: f64,
    /// l1 coherence of the first accessible fragment.
    pub coherence_a1: f64,
}

impl MIProfile {
    pub fn at(mut self, step_or_time: f64) -> Self {
        self.step_or_time = step_or_time;
        self
    }

    pub fn entropy_s_bits(&self) -> f64 {
        self.records.first().map_or(0.0, |r| r.entropy_s_bits)
    }

    /// `Ī` for fragment size `k` (1-based).
    pub fn rescaled(&self, k: usize) -> Option<f64> {
        self.records.get(k.checked_sub(1)?)?.rescaled
    }

    pub fn mi_bits(&self, k: usize) -> Option<f64> {
        Some(self.records.get(k.checked_sub(1)?)?.mi_bits)
    }
}

fn check_parts<S: AsRef<str>>(rho: &DensityMatrix, a: &[S], b: &[S]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySelection);
    }
    for l in a.iter().chain(b) {
        rho.space().position(l.as_ref())?;
    }
    if let Some(dup) = a.iter().find(|x| b.iter().any(|y| y.as_ref() == x.as_ref())) {
        return Err(Error::OverlappingLabels(dup.as_ref().to_string()));
    }
    Ok(())
}

fn clamp_mi(raw: f64) -> Result<f64> {
    if raw < -POSITIVITY_TOL {
        Err(Error::NegativeMutualInformation(raw))
    } else {
        Ok(raw.max(0.0))
    }
}

/// `H(ρ_a) + H(ρ_b) - H(ρ_ab)` in bits.
pub fn mutual_information<S: AsRef<str>>(rho: &DensityMatrix, part_a: &[S], part_b: &[S]) -> Result<f64> {
    check_parts(rho, part_a, part_b)?;
    let joint: Vec<&str> = part_a.iter().chain(part_b).map(AsRef::as_ref).collect();
    let rho_ab = rho.partial_trace(&joint)?;
    let h_ab = von_neumann_entropy(&rho_ab)?;
    let h_a = von_neumann_entropy(&rho_ab.partial_trace(part_a)?)?;
    let h_b = von_neumann_entropy(&rho_ab.partial_trace(part_b)?)?;
    clamp_mi(h_a + h_b - h_ab)
}

/// `Ī = I / H(S)`.
pub fn rescaled_mi(i_bits: f64, h_s_bits: f64) -> Result<f64> {
    if !(h_s_bits > MIN_SYSTEM_ENTROPY) {
        return Err(Error::UndefinedRatio(h_s_bits));
    }
    Ok(i_bits / h_s_bits)
}

/// Redundancy profile of `rho` for fragments of every size `1..=N`.
///
/// `rho` must already be reduced to the system and the accessible labels.
pub fn mi_profile(rho: &DensityMatrix, system: &str, selection: &FragmentSelection) -> Result<MIProfile> {
    let rho_s = rho.partial_trace(&[system])?;
    let h_s = von_neumann_entropy(&rho_s)?;
    let n = selection.accessible().len();
    let mut records = Vec::with_capacity(n);
    for k in 1..=n {
        let fragments = selection.fragments_of_size(k);
        let mut total = 0.0;
        for frag in &fragments {
            check_parts(rho, &[system], frag)?;
            let mut joint = Vec::with_capacity(k + 1);
            joint.push(system);
            joint.extend(frag.iter().copied());
            let rho_sf = rho.partial_trace(&joint)?;
            let h_sf = von_neumann_entropy(&rho_sf)?;
            let h_f = von_neumann_entropy(&rho_sf.partial_trace(frag)?)?;
            total += clamp_mi(h_s + h_f - h_sf)?;
        }
        let mi = total / fragments.len() as f64;
        records.push(FragmentRecord {
            k,
            fraction: k as f64 / n as f64,
            mi_bits: mi,
            rescaled: rescaled_mi(mi, h_s).ok(),
            entropy_s_bits: h_s,
        });
    }
    let first = &selection.accessible()[0];
    let coherence_a1 = l1_coherence(&rho.partial_trace(&[first.as_str()])?);
    Ok(MIProfile { step_or_time: 0.0, records, coherence_s: l1_coherence(&rho_s), coherence_a1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, unitary_from_hamiltonian, ComplexMatrix, C64};
    use crate::space::TensorSpace;
    use std::f64::consts::PI;

    fn plus_product(n: usize) -> DensityMatrix {
        let space = TensorSpace::system_and_fragments(n).unwrap();
        let d = space.total_dim();
        let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        DensityMatrix::pure(space, &vec![amp; d]).unwrap()
    }

    fn ghz(n: usize) -> DensityMatrix {
        let space = TensorSpace::system_and_fragments(n).unwrap();
        let d = space.total_dim();
        let mut psi = vec![C64::new(0.0, 0.0); d];
        psi[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        psi[d - 1] = psi[0];
        DensityMatrix::pure(space, &psi).unwrap()
    }

    #[test]
    fn product_state_has_no_mutual_information() {
        let rho = plus_product(2);
        assert!(mutual_information(&rho, &["S"], &["A1", "A2"]).unwrap().abs() < 1e-12);
        let p = mi_profile(&rho, "S", &FragmentSelection::fragments(2).unwrap()).unwrap();
        for r in &p.records {
            assert!(r.mi_bits.abs() < 1e-12);
            assert_eq!(r.rescaled, None);
        }
    }

    #[test]
    fn bell_state_carries_two_bits() {
        let rho = ghz(1);
        assert!((mutual_information(&rho, &["S"], &["A1"]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_phase_quarter_turn_gives_one_bit() {
        // 2 J t = π/2 under J σz⊗σz: conditional fragment states become orthogonal
        let rho = plus_product(1);
        let h = crate::linalg::kron(&pauli::z(), &pauli::z());
        let u = unitary_from_hamiltonian(&h, PI / 4.0).unwrap();
        let rho = rho.evolve(&u);
        let p = mi_profile(&rho, "S", &FragmentSelection::fragments(1).unwrap()).unwrap();
        assert!((p.records[0].mi_bits - 2.0).abs() < 1e-10, "pure global state doubles H(S)");
        // with the system decohered the correlations are classical: one bit
        let dephased = DensityMatrix::new(
            rho.space().clone(),
            ComplexMatrix::from_fn(4, 4, |i, j| if (i >> 1) == (j >> 1) { rho.get(i, j) } else { C64::new(0.0, 0.0) }),
        )
        .unwrap();
        assert!((mutual_information(&dephased, &["S"], &["A1"]).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ghz_profile() {
        let p = mi_profile(&ghz(3), "S", &FragmentSelection::fragments(3).unwrap()).unwrap();
        let r: Vec<f64> = p.records.iter().map(|r| r.rescaled.unwrap()).collect();
        assert!((r[0] - 1.0).abs() < 1e-10);
        assert!((r[1] - 1.0).abs() < 1e-10);
        assert!((r[2] - 2.0).abs() < 1e-10);
        assert!((p.entropy_s_bits() - 1.0).abs() < 1e-12);
        assert_eq!(p.records[2].fraction, 1.0);
    }

    #[test]
    fn symmetric_state_policies_agree() {
        let rho = plus_product(3);
        let h: ComplexMatrix = (1..=3)
            .map(|i| {
                let space = rho.space();
                let zs = crate::space::embed(&pauli::z(), "S", space).unwrap();
                let za = crate::space::embed(&pauli::z(), &format!("A{i}"), space).unwrap();
                &zs * &za
            })
            .reduce(|a, b| &a + &b)
            .unwrap();
        let rho = rho.evolve(&unitary_from_hamiltonian(&h, 0.3).unwrap());
        let all = mi_profile(&rho, "S", &FragmentSelection::fragments(3).unwrap()).unwrap();
        let first = mi_profile(&rho, "S", &FragmentSelection::fragments(3).unwrap().with_policy(FragmentPolicy::FirstK)).unwrap();
        for (a, b) in all.records.iter().zip(&first.records) {
            assert!((a.mi_bits - b.mi_bits).abs() < 1e-10);
        }
    }

    #[test]
    fn rescaled_examples() {
        assert_eq!(rescaled_mi(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(rescaled_mi(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(rescaled_mi(2.0 * 0.37, 0.37).unwrap(), 2.0);
        assert!(matches!(rescaled_mi(0.0, 1e-13), Err(Error::UndefinedRatio(_))));
        assert!(matches!(rescaled_mi(0.0, f64::NAN), Err(Error::UndefinedRatio(_))));
    }

    #[test]
    fn label_errors() {
        let rho = plus_product(2);
        assert!(matches!(mutual_information(&rho, &["S"], &["S", "A1"]), Err(Error::OverlappingLabels(_))));
        assert!(matches!(mutual_information(&rho, &["S"], &["B"]), Err(Error::UnknownLabel(_))));
        assert!(matches!(mutual_information::<&str>(&rho, &["S"], &[]), Err(Error::EmptySelection)));
        assert!(matches!(FragmentSelection::new(Vec::<String>::new(), FragmentPolicy::FirstK), Err(Error::EmptySelection)));
        assert!(matches!(FragmentSelection::new(["A1", "A1"], FragmentPolicy::FirstK), Err(Error::DuplicateLabel(_))));
    }
}
