//! Pure states, density matrices and tensor products.
//!
//! Composite indices are system-major: for `a ⊗ b` the amplitude of
//! `|j⟩⊗|k⟩` sits at `j·dim(b) + k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecomposition, ComplexMatrix, Tolerance};

/// Tolerance on `Σ|α_j|² = 1` and on `tr ρ = 1`.
pub const NORM_TOL: f64 = 1e-10;

/// Unit-norm state vector. Global phase is kept as given.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ShapeMismatch("state of dimension 0".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sqr: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { norm_sqr: norm * norm });
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::ShapeMismatch(format!("basis index {index} in dimension {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Appends zero amplitudes, embedding the state in the leading
    /// coordinates of a larger space.
    pub fn zero_padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "cannot embed dimension {} into {dim}",
                self.dim()
            )));
        }
        let mut amps = self.amplitudes.clone();
        amps.resize(dim, Complex64::new(0.0, 0.0));
        Ok(Self { amplitudes: amps })
    }
}

/// Hermitian, positive semi-definite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotDensity(format!(
                "{}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::NotDensity(format!("trace is {trace}")));
        }
        let eig = hermitian_eigendecomposition(&matrix, tol).map_err(|e| match e {
            Error::NotHermitian => Error::NotDensity("not Hermitian".into()),
            other => other,
        })?;
        if eig.eigenvalues[0] < -tol.bound(matrix.norm_proxy()) {
            return Err(Error::NotDensity(format!(
                "negative eigenvalue {:e}",
                eig.eigenvalues[0]
            )));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants hold.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new_unchecked(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        density_from_pure(psi)
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    DensityMatrix::new_unchecked(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()))
}

/// `⟨ψ|φ⟩`, conjugate-linear in `psi`.
pub fn overlap(psi: &PureState, phi: &PureState) -> Result<Complex64> {
    if psi.dim() != phi.dim() {
        return Err(Error::ShapeMismatch(format!(
            "overlap of dimensions {} and {}",
            psi.dim(),
            phi.dim()
        )));
    }
    Ok(psi
        .amplitudes
        .iter()
        .zip(&phi.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

pub fn tensor_product_state(a: &PureState, b: &PureState) -> PureState {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    PureState { amplitudes }
}

/// Kronecker product with the same index convention as [`tensor_product_state`].
pub fn tensor_product_op(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2 as S;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> PureState {
        PureState::from_real(&[S, S]).unwrap()
    }

    fn plus_i() -> PureState {
        PureState::new(vec![c(S, 0.0), c(0.0, S)]).unwrap()
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            PureState::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(PureState::normalized(vec![c(0.0, 0.0)]).is_err());
        let n = PureState::normalized(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(n.amplitudes()[1], c(0.0, 0.8));
    }

    #[test]
    fn density_from_pure_examples() {
        let rho0 = density_from_pure(&PureState::basis(2, 0).unwrap());
        assert_eq!(rho0.matrix(), &ComplexMatrix::from_diag(&[1.0, 0.0]));

        let rho = density_from_pure(&plus());
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::from_real(2, 2, &[0.5; 4]).unwrap())
                < 1e-15
        );

        let rho = density_from_pure(&plus_i());
        let expected = ComplexMatrix::new(2, 2, vec![c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)]).unwrap();
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
        assert!(DensityMatrix::new(rho.matrix().clone(), Tolerance::default()).is_ok());
    }

    #[test]
    fn overlap_examples() {
        let zero = PureState::basis(2, 0).unwrap();
        let one = PureState::basis(2, 1).unwrap();
        assert_eq!(overlap(&zero, &one).unwrap(), c(0.0, 0.0));
        assert!((overlap(&zero, &plus()).unwrap() - c(S, 0.0)).norm() < 1e-15);
        assert!((overlap(&plus(), &plus_i()).unwrap() - c(0.5, 0.5)).norm() < 1e-15);
        assert!(overlap(&zero, &PureState::basis(3, 0).unwrap()).is_err());
    }

    #[test]
    fn tensor_state_examples() {
        let zero = PureState::basis(2, 0).unwrap();
        let one = PureState::basis(2, 1).unwrap();
        assert_eq!(tensor_product_state(&zero, &zero), PureState::basis(4, 0).unwrap());
        assert_eq!(tensor_product_state(&one, &one), PureState::basis(4, 3).unwrap());
        let pz = tensor_product_state(&plus(), &zero);
        let expected = [S, 0.0, S, 0.0];
        for (a, e) in pz.amplitudes().iter().zip(expected) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_op_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product_op(&i2, &i2), ComplexMatrix::identity(4));
        assert_eq!(
            tensor_product_op(&ComplexMatrix::from_diag(&[1.0, 0.0]), &i2),
            ComplexMatrix::from_diag(&[1.0, 1.0, 0.0, 0.0])
        );
        assert_eq!(
            tensor_product_op(&i2, &ComplexMatrix::from_diag(&[0.0, 1.0])),
            ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 1.0])
        );
    }

    #[test]
    fn density_validation() {
        let tol = Tolerance::default();
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(2), tol),
            Err(Error::NotDensity(_))
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_diag(&[1.5, -0.5]), tol),
            Err(Error::NotDensity(_))
        ));
        let skew = ComplexMatrix::from_real(2, 2, &[0.5, 1.0, 0.0, 0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(skew, tol), Err(Error::NotDensity(_))));
        assert_eq!(DensityMatrix::maximally_mixed(2).matrix().trace(), c(1.0, 0.0));
    }
}
