use std::collections::HashSet;

use crate::error::{Error, Result, SetViolation};
use crate::linalg::{hermitian_eigendecomposition, identity_residual, is_hermitian, ComplexMatrix, Tolerance};

/// One labeled operator of a measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub operator: ComplexMatrix,
}

impl Outcome {
    pub fn new(label: impl Into<String>, operator: ComplexMatrix) -> Self {
        Self {
            label: label.into(),
            operator,
        }
    }
}

/// Labels operators `"0"`, `"1"`, … in input order.
pub fn default_labels(ops: impl IntoIterator<Item = ComplexMatrix>) -> Vec<Outcome> {
    ops.into_iter()
        .enumerate()
        .map(|(i, op)| Outcome::new(i.to_string(), op))
        .collect()
}

macro_rules! labeled_set {
    ($name:ident) => {
        impl $name {
            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn len(&self) -> usize {
                self.outcomes.len()
            }

            pub fn is_empty(&self) -> bool {
                self.outcomes.is_empty()
            }

            pub fn outcomes(&self) -> &[Outcome] {
                &self.outcomes
            }

            pub fn labels(&self) -> impl Iterator<Item = &str> {
                self.outcomes.iter().map(|o| o.label.as_str())
            }

            pub fn operators(&self) -> impl Iterator<Item = &ComplexMatrix> {
                self.outcomes.iter().map(|o| &o.operator)
            }

            pub fn index_of(&self, label: &str) -> Result<usize> {
                self.outcomes
                    .iter()
                    .position(|o| o.label == label)
                    .ok_or_else(|| Error::UnknownLabel(label.to_string()))
            }

            pub fn operator(&self, label: &str) -> Result<&ComplexMatrix> {
                Ok(&self.outcomes[self.index_of(label)?].operator)
            }

            pub fn into_outcomes(self) -> Vec<Outcome> {
                self.outcomes
            }
        }
    };
}

/// Projection-valued measure: Hermitian, idempotent, pairwise orthogonal
/// projectors resolving the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PvmSet {
    dim: usize,
    outcomes: Vec<Outcome>,
}

/// Positive-operator valued measure: Hermitian PSD effects resolving the
/// identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmSet {
    dim: usize,
    outcomes: Vec<Outcome>,
}

/// Kraus operators `A_i` with `Σ A_i†A_i = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    outcomes: Vec<Outcome>,
}

labeled_set!(PvmSet);
labeled_set!(PovmSet);
labeled_set!(KrausSet);

impl PvmSet {
    pub fn new(candidate: Vec<Outcome>, tol: Tolerance) -> Result<Self> {
        validate_pvm(candidate, tol)
    }

    /// Computational basis `{|i⟩⟨i|}`.
    pub fn computational_basis(dim: usize) -> Self {
        let outcomes = default_labels((0..dim).map(|i| {
            let mut d = vec![0.0; dim];
            d[i] = 1.0;
            ComplexMatrix::from_diag(&d)
        }));
        Self { dim, outcomes }
    }

    pub(crate) fn new_unchecked(dim: usize, outcomes: Vec<Outcome>) -> Self {
        Self { dim, outcomes }
    }
}

impl PovmSet {
    pub fn new(candidate: Vec<Outcome>, tol: Tolerance) -> Result<Self> {
        validate_povm(candidate, tol)
    }

    pub(crate) fn new_unchecked(dim: usize, outcomes: Vec<Outcome>) -> Self {
        Self { dim, outcomes }
    }
}

impl From<PvmSet> for PovmSet {
    fn from(pvm: PvmSet) -> Self {
        Self {
            dim: pvm.dim,
            outcomes: pvm.outcomes,
        }
    }
}

impl From<&PvmSet> for PovmSet {
    fn from(pvm: &PvmSet) -> Self {
        pvm.clone().into()
    }
}

impl KrausSet {
    /// Checks `‖Σ A_i†A_i − I‖` within tolerance.
    pub fn new(candidate: Vec<Outcome>, tol: Tolerance) -> Result<Self> {
        let dim = check_shapes(&candidate)?;
        let effects: Vec<ComplexMatrix> = candidate.iter().map(|o| &o.operator.adjoint() * &o.operator).collect();
        check_completeness(&effects, dim, tol)?;
        Ok(Self {
            dim,
            outcomes: candidate,
        })
    }

    pub(crate) fn new_unchecked(dim: usize, outcomes: Vec<Outcome>) -> Self {
        Self { dim, outcomes }
    }

    /// The POVM `{A_i†A_i}` these operators implement.
    pub fn effects(&self) -> PovmSet {
        PovmSet::new_unchecked(
            self.dim,
            self.outcomes
                .iter()
                .map(|o| Outcome::new(o.label.clone(), &o.operator.adjoint() * &o.operator))
                .collect(),
        )
    }

    /// Replaces each `A_i` with `U_i A_i`; the effects are unchanged. The
    /// unitaries are matched to outcomes by position.
    pub fn with_unitaries(&self, unitaries: &[ComplexMatrix], tol: Tolerance) -> Result<Self> {
        if unitaries.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} unitaries for {} Kraus operators",
                unitaries.len(),
                self.len()
            )));
        }
        let id = ComplexMatrix::identity(self.dim);
        let outcomes = self
            .outcomes
            .iter()
            .zip(unitaries)
            .map(|(o, u)| {
                if u.shape() != (self.dim, self.dim) {
                    return Err(Error::ShapeMismatch("unitary has the wrong shape".into()));
                }
                if (&u.adjoint() * u).max_abs_diff(&id) > tol.bound(self.dim as f64) {
                    return Err(Error::InvalidArgument(format!(
                        "matrix for outcome {:?} is not unitary",
                        o.label
                    )));
                }
                Ok(Outcome::new(o.label.clone(), u * &o.operator))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dim: self.dim,
            outcomes,
        })
    }
}

fn check_shapes(candidate: &[Outcome]) -> Result<usize> {
    let first = candidate.first().ok_or(SetViolation::Empty)?;
    let dim = first.operator.rows();
    let mut seen = HashSet::new();
    for (i, o) in candidate.iter().enumerate() {
        if o.operator.shape() != (dim, dim) {
            return Err(SetViolation::BadShape(i).into());
        }
        if !seen.insert(o.label.as_str()) {
            return Err(SetViolation::DuplicateLabel(o.label.clone()).into());
        }
    }
    Ok(dim)
}

fn check_completeness(ops: &[ComplexMatrix], dim: usize, tol: Tolerance) -> Result<()> {
    let residual = identity_residual(ops)?;
    if residual > tol.bound(dim as f64) {
        return Err(SetViolation::IncompleteResolution { residual }.into());
    }
    Ok(())
}

fn check_positive(candidate: &[Outcome], tol: Tolerance) -> Result<()> {
    for (i, o) in candidate.iter().enumerate() {
        if !is_hermitian(&o.operator, tol) {
            return Err(SetViolation::NotHermitian(i).into());
        }
        let min = hermitian_eigendecomposition(&o.operator, tol)?.eigenvalues[0];
        if min < -tol.bound(o.operator.norm_proxy()) {
            return Err(SetViolation::NotPsd(i, min).into());
        }
    }
    Ok(())
}

/// Checks the five projector-system properties in order (Hermitian, PSD,
/// idempotent, pairwise orthogonal, complete) and reports the first
/// violation.
pub fn validate_pvm(candidate: Vec<Outcome>, tol: Tolerance) -> Result<PvmSet> {
    let dim = check_shapes(&candidate)?;
    check_positive(&candidate, tol)?;
    for (i, o) in candidate.iter().enumerate() {
        let p = &o.operator;
        if (&(p * p) - p).max_abs() > tol.bound(p.norm_proxy()) {
            return Err(SetViolation::NotIdempotent(i).into());
        }
    }
    for i in 0..candidate.len() {
        for j in i + 1..candidate.len() {
            let (pi, pj) = (&candidate[i].operator, &candidate[j].operator);
            let scale = pi.norm_proxy().max(pj.norm_proxy());
            if (pi * pj).max_abs() > tol.bound(scale) {
                return Err(SetViolation::NotOrthogonal(i, j).into());
            }
        }
    }
    let ops: Vec<_> = candidate.iter().map(|o| o.operator.clone()).collect();
    check_completeness(&ops, dim, tol)?;
    Ok(PvmSet {
        dim,
        outcomes: candidate,
    })
}

/// Checks Hermiticity, positivity and completeness.
pub fn validate_povm(candidate: Vec<Outcome>, tol: Tolerance) -> Result<PovmSet> {
    let dim = check_shapes(&candidate)?;
    check_positive(&candidate, tol)?;
    let ops: Vec<_> = candidate.iter().map(|o| o.operator.clone()).collect();
    check_completeness(&ops, dim, tol)?;
    Ok(PovmSet {
        dim,
        outcomes: candidate,
    })
}
