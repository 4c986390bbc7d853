//! Projective and generalized measurements: validation, Born-rule
//! probabilities, post-measurement states, Kraus decomposition and seeded
//! outcome sampling.

mod distribution;
mod sets;

pub use distribution::{sample_outcomes, OutcomeDistribution, SUM_TOL};
pub use sets::{default_labels, validate_povm, validate_pvm, KrausSet, Outcome, PovmSet, PvmSet};

use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix, Tolerance};
use crate::states::{density_from_pure, DensityMatrix, PureState};

/// Outcomes at or below this probability have no post-measurement state.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

fn check_dim(set_dim: usize, state_dim: usize) -> Result<()> {
    if set_dim != state_dim {
        return Err(Error::ShapeMismatch(format!(
            "measurement on dimension {set_dim} applied to a state of dimension {state_dim}"
        )));
    }
    Ok(())
}

/// `p_i = ⟨ψ|P_i|ψ⟩`.
pub fn pvm_probabilities(pvm: &PvmSet, psi: &PureState) -> Result<OutcomeDistribution> {
    check_dim(pvm.dim(), psi.dim())?;
    let raw = pvm
        .operators()
        .map(|p| Ok(p.sandwich(psi.amplitudes(), psi.amplitudes())?.re))
        .collect::<Result<Vec<_>>>()?;
    Ok(OutcomeDistribution::from_raw(pvm.labels(), raw))
}

fn trace_probabilities<'a>(
    labels: impl Iterator<Item = &'a str>,
    ops: impl Iterator<Item = &'a ComplexMatrix>,
    rho: &DensityMatrix,
) -> OutcomeDistribution {
    let raw = ops.map(|q| (q * rho.matrix()).trace().re).collect();
    OutcomeDistribution::from_raw(labels, raw)
}

/// `p_i = tr(P_i ρ)`.
pub fn pvm_probabilities_mixed(pvm: &PvmSet, rho: &DensityMatrix) -> Result<OutcomeDistribution> {
    check_dim(pvm.dim(), rho.dim())?;
    Ok(trace_probabilities(pvm.labels(), pvm.operators(), rho))
}

/// `p_i = tr(Q_i ρ)`.
pub fn povm_probabilities(povm: &PovmSet, rho: &DensityMatrix) -> Result<OutcomeDistribution> {
    check_dim(povm.dim(), rho.dim())?;
    Ok(trace_probabilities(povm.labels(), povm.operators(), rho))
}

/// [`povm_probabilities`] on `|ψ⟩⟨ψ|`.
pub fn povm_probabilities_pure(povm: &PovmSet, psi: &PureState) -> Result<OutcomeDistribution> {
    povm_probabilities(povm, &density_from_pure(psi))
}

/// `P_i|ψ⟩ / √⟨ψ|P_i|ψ⟩`.
pub fn pvm_post_state(pvm: &PvmSet, label: &str, psi: &PureState) -> Result<PureState> {
    check_dim(pvm.dim(), psi.dim())?;
    let p = pvm.operator(label)?;
    let probability = p.sandwich(psi.amplitudes(), psi.amplitudes())?.re;
    if probability <= MIN_OUTCOME_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome {
            label: label.to_string(),
            probability,
        });
    }
    let projected = p.apply(psi.amplitudes())?;
    let scale = probability.sqrt();
    // Renormalizing from the vector itself removes the rounding left by
    // dividing through √p.
    PureState::normalized(projected.into_iter().map(|z| z / scale).collect())
}

/// `A ρ A† / tr(A†A ρ)`; `A` is the projector for PVMs and the Kraus
/// operator otherwise.
fn sandwich_post_state(a: &ComplexMatrix, label: &str, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let probability = (&(&a.adjoint() * a) * rho.matrix()).trace().re;
    if probability <= MIN_OUTCOME_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome {
            label: label.to_string(),
            probability,
        });
    }
    let numerator = &(a * rho.matrix()) * &a.adjoint();
    let raw = numerator.scale_real(1.0 / probability);
    // Symmetrize to remove rounding asymmetry.
    let sym = (&raw + &raw.adjoint()).scale_real(0.5);
    Ok(DensityMatrix::new_unchecked(sym))
}

/// `P_i ρ P_i / tr(P_i ρ)`.
pub fn pvm_post_state_mixed(pvm: &PvmSet, label: &str, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(pvm.dim(), rho.dim())?;
    sandwich_post_state(pvm.operator(label)?, label, rho)
}

/// `A_i ρ A_i† / tr(A_i†A_i ρ)`.
///
/// The adjoint on the right is required for the result to be Hermitian
/// when `A_i` is not; for the principal square root `A_i = √Q_i` the two
/// readings coincide.
pub fn povm_post_state(kraus: &KrausSet, label: &str, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(kraus.dim(), rho.dim())?;
    sandwich_post_state(kraus.operator(label)?, label, rho)
}

/// Principal square roots `A_i = √Q_i`. Use [`KrausSet::with_unitaries`]
/// for a different member of the `U·A_i` family.
pub fn kraus_from_povm(povm: &PovmSet, tol: Tolerance) -> Result<KrausSet> {
    let outcomes = povm
        .outcomes()
        .iter()
        .map(|o| Ok(Outcome::new(o.label.clone(), psd_sqrt(&o.operator, tol)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(KrausSet::new_unchecked(povm.dim(), outcomes))
}
