//! Random operators and states for property checks and Monte-Carlo
//! verification. Entries are standard complex Gaussians, so states are
//! Haar-distributed and unitaries from the eigenbasis of a GUE-like
//! matrix.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eigendecomposition, ComplexMatrix, Tolerance};
use crate::measurement::{default_labels, PovmSet, PvmSet};
use crate::states::PureState;

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// `G†G` for Gaussian `G`.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    &g.adjoint() * &g
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    hermitian_eigendecomposition(&hermitian(rng, dim), Tolerance::default())
        .expect("symmetrized Gaussian matrix is Hermitian")
        .eigenvectors
}

/// Random effects `S^{-1/2} G_i S^{-1/2}` with `S = Σ G_i`, which sum to
/// the identity exactly up to rounding.
pub fn povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> PovmSet {
    let raw: Vec<ComplexMatrix> = (0..outcomes).map(|_| psd(rng, dim)).collect();
    let total = crate::linalg::sum(&raw).expect("at least one outcome");
    let eig = hermitian_eigendecomposition(&total, Tolerance::default()).expect("sum of PSD matrices is Hermitian");
    let inv_sqrt = eig.apply_spectral(|x| 1.0 / x.sqrt());
    let effects = raw.iter().map(|g| {
        let q = &(&inv_sqrt * g) * &inv_sqrt;
        (&q + &q.adjoint()).scale_real(0.5)
    });
    PovmSet::new(default_labels(effects), Tolerance::default()).expect("normalized random effects form a POVM")
}

/// Splits the columns of a random unitary into `outcomes` nonempty groups
/// (`outcomes ≤ dim`) and projects onto each.
pub fn pvm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> PvmSet {
    assert!((1..=dim).contains(&outcomes));
    let u = unitary(rng, dim);
    let mut group: Vec<usize> = (0..dim).map(|c| c.min(outcomes - 1)).collect();
    for g in group.iter_mut().skip(outcomes) {
        *g = rng.random_range(0..outcomes);
    }
    let projectors = (0..outcomes).map(|g| {
        let mut p = ComplexMatrix::zeros(dim, dim);
        for c in (0..dim).filter(|&c| group[c] == g) {
            let v = u.column(c);
            p = &p + &ComplexMatrix::outer(&v, &v);
        }
        p
    });
    PvmSet::new(default_labels(projectors), Tolerance::default()).expect("grouped unitary columns form a PVM")
}
