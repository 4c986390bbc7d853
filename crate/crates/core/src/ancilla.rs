//! POVMs realized by an ancilla: couple the system to an ancilla prepared
//! in a fixed state, apply a joint unitary, then measure the ancilla alone.
//!
//! Composite indices are system-major (`j·N + k` for system `j`, ancilla
//! `k`). The induced effect for local outcome `i` is the compression
//! `Q_i = W† A†(I ⊗ P_i)A W` with `W|ψ⟩ = |ψ⟩ ⊗ |ready⟩`. When `A†(I⊗P_i)A`
//! happens to be diagonal in the product basis this reduces to reading off
//! its `k = 0` diagonal coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{is_projector, orthonormal_completion, ComplexMatrix, Tolerance};
use crate::measurement::{validate_povm, KrausSet, Outcome, OutcomeDistribution, PovmSet, PvmSet};
use crate::states::{tensor_product_op, tensor_product_state, PureState};

/// Bound on `‖A†A − I‖_max` and on the round trip back to the input POVM.
pub const REALIZATION_TOL: f64 = 1e-9;
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct AncillaModel {
    system_dim: usize,
    unitary: ComplexMatrix,
    ready: PureState,
    local_pvm: PvmSet,
}

impl AncillaModel {
    /// Checks that `unitary` is a `kN × kN` unitary, that `ready` lives on
    /// the ancilla and that `local_pvm` is a PVM there.
    pub fn new(
        system_dim: usize,
        unitary: ComplexMatrix,
        ready: PureState,
        local_pvm: PvmSet,
        tol: Tolerance,
    ) -> Result<Self> {
        let ancilla_dim = local_pvm.dim();
        if ready.dim() != ancilla_dim {
            return Err(Error::ShapeMismatch(format!(
                "ready state of dimension {} for an ancilla of dimension {ancilla_dim}",
                ready.dim()
            )));
        }
        let total = system_dim * ancilla_dim;
        if unitary.shape() != (total, total) {
            return Err(Error::ShapeMismatch(format!(
                "unitary is {}x{}, expected {total}x{total}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        let residual = unitarity_residual(&unitary);
        if residual > tol.bound(total as f64) {
            return Err(Error::InvalidArgument(format!(
                "coupling matrix is not unitary (residual {residual:e})"
            )));
        }
        let local_pvm = PvmSet::new(local_pvm.into_outcomes(), tol)?;
        Ok(Self {
            system_dim,
            unitary,
            ready,
            local_pvm,
        })
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.local_pvm.dim()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn ready_state(&self) -> &PureState {
        &self.ready
    }

    pub fn local_pvm(&self) -> &PvmSet {
        &self.local_pvm
    }

    /// `‖A†A − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.unitary)
    }

    /// The `kN × k` isometry `W|ψ⟩ = |ψ⟩ ⊗ |ready⟩`.
    pub fn embedding(&self) -> ComplexMatrix {
        let n = self.ancilla_dim();
        let ready = self.ready.amplitudes();
        ComplexMatrix::from_fn(self.system_dim * n, self.system_dim, |r, c| {
            if r / n == c {
                ready[r % n]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.cols()))
}

/// `O_i = A†(I_k ⊗ P_i)A` for one local outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedOperator {
    pub label: String,
    pub matrix: ComplexMatrix,
}

/// Builds `A` with `A(|ψ⟩ ⊗ |0⟩) = Σ_i A_i|ψ⟩ ⊗ |i⟩`.
///
/// The columns fed by `|c⟩ ⊗ |0⟩` are the isometry `V = Σ_i A_i ⊗ |i⟩`;
/// the remaining columns are an orthonormal completion of `V`, placed in
/// order. The induced POVM is checked against `{A_i†A_i}` before return.
pub fn realize_povm_with_ancilla(kraus: &KrausSet) -> Result<AncillaModel> {
    let k = kraus.dim();
    let n = kraus.len();
    let total = k * n;
    let ops: Vec<&ComplexMatrix> = kraus.operators().collect();
    let isometry = ComplexMatrix::from_fn(total, k, |r, c| ops[r % n][(r / n, c)]);
    let completed = orthonormal_completion(&isometry).map_err(|_| Error::CompletionFailure)?;

    // Column c of the isometry goes to slot c·N; completion columns fill
    // the other slots in ascending order.
    let mut slot_source = vec![0usize; total];
    let mut extra = k;
    for (slot, src) in slot_source.iter_mut().enumerate() {
        if slot % n == 0 {
            *src = slot / n;
        } else {
            *src = extra;
            extra += 1;
        }
    }
    let unitary = ComplexMatrix::from_fn(total, total, |r, c| completed[(r, slot_source[c])]);

    let residual = unitarity_residual(&unitary);
    if residual > UNITARITY_TOL {
        return Err(Error::CompletionFailure);
    }
    let local_pvm = PvmSet::new_unchecked(
        n,
        kraus
            .labels()
            .enumerate()
            .map(|(i, label)| {
                let mut d = vec![0.0; n];
                d[i] = 1.0;
                Outcome::new(label, ComplexMatrix::from_diag(&d))
            })
            .collect(),
    );
    let model = AncillaModel {
        system_dim: k,
        unitary,
        ready: PureState::basis(n, 0)?,
        local_pvm,
    };

    let induced = induced_effects(&model);
    let round_trip = induced
        .iter()
        .zip(kraus.effects().operators())
        .map(|(q, want)| q.operator.max_abs_diff(want))
        .fold(0.0, f64::max);
    if round_trip > REALIZATION_TOL {
        return Err(Error::CompletionFailure);
    }
    Ok(model)
}

pub fn combined_operators(m: &AncillaModel) -> Vec<CombinedOperator> {
    let id = ComplexMatrix::identity(m.system_dim);
    let a = &m.unitary;
    let a_dag = a.adjoint();
    m.local_pvm
        .outcomes()
        .iter()
        .map(|o| CombinedOperator {
            label: o.label.clone(),
            matrix: &(&a_dag * &tensor_product_op(&id, &o.operator)) * a,
        })
        .collect()
}

fn induced_effects(m: &AncillaModel) -> Vec<Outcome> {
    let w = m.embedding();
    let w_dag = w.adjoint();
    combined_operators(m)
        .into_iter()
        .map(|o| {
            let q = &(&w_dag * &o.matrix) * &w;
            Outcome::new(o.label, (&q + &q.adjoint()).scale_real(0.5))
        })
        .collect()
}

/// `Q_i = W† O_i W`. Zero effects are kept so labels line up with the
/// local PVM.
pub fn induced_povm(m: &AncillaModel, tol: Tolerance) -> Result<PovmSet> {
    validate_povm(induced_effects(m), tol)
}

/// `p_i = ⟨ψ⊗r| A†(I⊗P_i)A |ψ⊗r⟩`.
pub fn ancilla_probabilities(m: &AncillaModel, psi: &PureState) -> Result<OutcomeDistribution> {
    if psi.dim() != m.system_dim {
        return Err(Error::ShapeMismatch(format!(
            "model on system dimension {} applied to a state of dimension {}",
            m.system_dim,
            psi.dim()
        )));
    }
    let combined = tensor_product_state(psi, &m.ready);
    let evolved = m.unitary.apply(combined.amplitudes())?;
    let id = ComplexMatrix::identity(m.system_dim);
    let raw = m
        .local_pvm
        .operators()
        .map(|p| Ok(tensor_product_op(&id, p).sandwich(&evolved, &evolved)?.re))
        .collect::<Result<Vec<_>>>()?;
    Ok(OutcomeDistribution::from_raw(m.local_pvm.labels(), raw))
}

/// Whether every combined operator is a projector and they sum to `I_{kN}`.
pub fn combined_operators_form_pvm(m: &AncillaModel, tol: Tolerance) -> Result<bool> {
    let ops = combined_operators(m);
    let mats: Vec<ComplexMatrix> = ops.iter().map(|o| o.matrix.clone()).collect();
    Ok(ops.iter().all(|o| is_projector(&o.matrix, tol)) && crate::linalg::is_resolution_of_identity(&mats, tol)?)
}

/// Model with no coupling: `A = I`, ready state `|0⟩`, ancilla measured in
/// its computational basis.
pub fn uncoupled_model(system_dim: usize, ancilla_dim: usize) -> Result<AncillaModel> {
    AncillaModel::new(
        system_dim,
        ComplexMatrix::identity(system_dim * ancilla_dim),
        PureState::basis(ancilla_dim, 0)?,
        PvmSet::computational_basis(ancilla_dim),
        Tolerance::default(),
    )
}
