//! Dense complex linear algebra: the matrix type, tolerance-based
//! predicates, and the spectral decompositions the measurement code is
//! built on.
//!
//! Eigen- and singular-value decompositions delegate to `faer`; this
//! module owns the contracts (ordering, full unitary factors, error
//! reporting) around them.

mod decomp;
mod matrix;

pub use decomp::{
    hermitian_eigendecomposition, orthonormal_completion, psd_sqrt, singular_value_decomposition, EigenDecomposition,
    SvdResult,
};
pub use matrix::{sum, ComplexMatrix};

use crate::error::{Error, Result};

/// Absolute/relative tolerance pair.
///
/// A residual `r` measured against an operator of size `s` passes when
/// `r ≤ atol + rtol · s`, where `s` is [`ComplexMatrix::norm_proxy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Tolerance {
    pub const DEFAULT_ATOL: f64 = 1e-10;
    pub const DEFAULT_RTOL: f64 = 1e-9;

    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        if !(atol >= 0.0 && rtol >= 0.0 && atol.is_finite() && rtol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be finite and nonnegative (atol {atol}, rtol {rtol})"
            )));
        }
        Ok(Self { atol, rtol })
    }

    /// Threshold for a residual measured against something of size `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: Self::DEFAULT_ATOL,
            rtol: Self::DEFAULT_RTOL,
        }
    }
}

/// `‖A − A†‖_max ≤ atol + rtol·‖A‖`. Non-square matrices are never Hermitian.
pub fn is_hermitian(a: &ComplexMatrix, tol: Tolerance) -> bool {
    a.is_square() && hermitian_residual(a) <= tol.bound(a.norm_proxy())
}

pub(crate) fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    a.max_abs_diff(&a.adjoint())
}

/// Smallest eigenvalue, after checking the matrix is Hermitian.
pub fn min_eigenvalue(a: &ComplexMatrix, tol: Tolerance) -> Result<f64> {
    let eig = hermitian_eigendecomposition(a, tol)?;
    Ok(eig.eigenvalues[0])
}

/// Minimum eigenvalue `≥ −(atol + rtol·‖A‖)`.
pub fn is_psd(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    Ok(min_eigenvalue(a, tol)? >= -tol.bound(a.norm_proxy()))
}

/// Hermitian and `‖A² − A‖_max` within tolerance.
pub fn is_projector(a: &ComplexMatrix, tol: Tolerance) -> bool {
    is_hermitian(a, tol) && (&(a * a) - a).max_abs() <= tol.bound(a.norm_proxy())
}

/// `‖Σ ops − I‖_max ≤ atol + rtol·dim`.
pub fn is_resolution_of_identity(ops: &[ComplexMatrix], tol: Tolerance) -> Result<bool> {
    let residual = identity_residual(ops)?;
    let dim = ops.first().map_or(0, ComplexMatrix::rows);
    Ok(residual <= tol.bound(dim as f64))
}

/// `‖Σ ops − I‖_max`.
pub fn identity_residual(ops: &[ComplexMatrix]) -> Result<f64> {
    let first = ops
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty operator sequence".into()))?;
    if !first.is_square() || ops.iter().any(|m| m.shape() != first.shape()) {
        return Err(Error::ShapeMismatch("operators must share one square shape".into()));
    }
    let total = sum(ops).expect("nonempty");
    Ok(total.max_abs_diff(&ComplexMatrix::identity(first.rows())))
}
