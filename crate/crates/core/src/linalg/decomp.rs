use faer::Side;
use num_complex::Complex64;

use super::{hermitian_residual, ComplexMatrix, Tolerance};
use crate::error::{Error, Result};

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` pairs with `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `Σ_j f(λ_j) |v_j⟩⟨v_j|`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(j);
            out = &out + &ComplexMatrix::outer(&v, &v).scale_real(f(lambda));
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_spectral(|x| x)
    }
}

/// Full singular value decomposition `M = left · diag(singulars) · right†`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// `n × n` unitary.
    pub left: ComplexMatrix,
    /// Descending, `min(n, N)` entries.
    pub singulars: Vec<f64>,
    /// `N × N` unitary.
    pub right: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (n, cols) = (self.left.rows(), self.right.rows());
        let sigma = ComplexMatrix::from_fn(n, cols, |r, c| {
            if r == c {
                Complex64::new(self.singulars[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &(&self.left * &sigma) * &self.right.adjoint()
    }
}

pub fn hermitian_eigendecomposition(h: &ComplexMatrix, tol: Tolerance) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix is not square",
            h.rows(),
            h.cols()
        )));
    }
    if hermitian_residual(h) > tol.bound(h.norm_proxy()) {
        return Err(Error::NotHermitian);
    }
    // Exact symmetrization so the solver sees a Hermitian input.
    let n = h.rows();
    let sym = faer::Mat::from_fn(n, n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let eig = sym
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::ConvergenceFailure)?;
    let values = eig.S().column_vector();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));
    let eigenvalues = order.iter().map(|&j| values[j].re).collect();
    let vectors = eig.U();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

pub fn singular_value_decomposition(m: &ComplexMatrix) -> Result<SvdResult> {
    let (rows, cols) = m.shape();
    let svd = faer::Mat::from_fn(rows, cols, |r, c| m[(r, c)])
        .svd()
        .map_err(|_| Error::ConvergenceFailure)?;
    let values = svd.S().column_vector();

    let mut order: Vec<usize> = (0..rows.min(cols)).collect();
    order.sort_by(|&a, &b| values[b].re.total_cmp(&values[a].re));
    let singulars = order.iter().map(|&j| values[j].re.max(0.0)).collect();
    let (u, v) = (svd.U(), svd.V());
    let col = |c: usize| order.get(c).copied().unwrap_or(c);
    Ok(SvdResult {
        left: ComplexMatrix::from_fn(rows, rows, |r, c| u[(r, col(c))]),
        singulars,
        right: ComplexMatrix::from_fn(cols, cols, |r, c| v[(r, col(c))]),
    })
}

/// Principal square root of a PSD matrix. Eigenvalues within tolerance
/// below zero are clamped to zero.
pub fn psd_sqrt(q: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecomposition(q, tol)?;
    let min = eig.eigenvalues[0];
    if min < -tol.bound(q.norm_proxy()) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    // Eigenvalues at rounding level are zero; taking their square root
    // would inflate ~1e-17 noise to ~1e-9.
    let largest = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let floor = 8.0 * f64::EPSILON * q.rows() as f64 * largest;
    Ok(eig.apply_spectral(|x| if x <= floor { 0.0 } else { x.sqrt() }))
}

/// Extends an `n × r` matrix with orthonormal columns to an `n × n`
/// unitary whose first `r` columns are the input.
///
/// New columns come from the standard basis: at each step the candidate
/// with the largest component orthogonal to the current span is taken,
/// then orthogonalized twice (modified Gram-Schmidt) and normalized. The
/// result depends only on the input.
pub fn orthonormal_completion(basis: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = basis.rows();
    if basis.cols() > n {
        return Err(Error::ShapeMismatch(format!(
            "{} columns cannot be orthonormal in dimension {n}",
            basis.cols()
        )));
    }
    let mut columns: Vec<Vec<Complex64>> = (0..basis.cols()).map(|c| basis.column(c)).collect();
    let mut used = vec![false; n];

    while columns.len() < n {
        let mut best: Option<(usize, Vec<Complex64>, f64)> = None;
        for (e, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut cand = vec![Complex64::new(0.0, 0.0); n];
            cand[e] = Complex64::new(1.0, 0.0);
            project_out(&mut cand, &columns);
            let norm = vec_norm(&cand);
            if best.as_ref().is_none_or(|(_, _, b)| norm > *b) {
                best = Some((e, cand, norm));
            }
        }
        let (e, mut cand, norm) = best.ok_or(Error::CompletionFailure)?;
        // Some standard basis vector always retains at least 1/√n of its
        // norm outside a proper subspace.
        if norm < 0.5 / (n as f64).sqrt() {
            return Err(Error::CompletionFailure);
        }
        project_out(&mut cand, &columns);
        let norm = vec_norm(&cand);
        cand.iter_mut().for_each(|z| *z /= norm);
        used[e] = true;
        columns.push(cand);
    }
    ComplexMatrix::from_columns(&columns)
}

fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let coeff: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
        v.iter_mut().zip(b).for_each(|(y, x)| *y -= coeff * x);
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
