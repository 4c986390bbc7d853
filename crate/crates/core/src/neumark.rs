//! Neumark dilation: realize a POVM on a `k`-dimensional space as a PVM on
//! an `N`-dimensional space containing it.
//!
//! The construction runs in four steps:
//!
//! 1. Split every effect into rank-one pieces `|μ_j⟩⟨μ_j|` through its
//!    eigendecomposition, remembering which outcome each piece came from.
//! 2. Stack the measurement vectors as the columns of `M`, zero-padded to
//!    `n′ = max(k, N)` rows. Completeness gives `MM† = P_U`, the projector
//!    onto the first `k` coordinates, so `M` is a partial isometry.
//! 3. Take the SVD `M = UΣV†` and replace the singular values by ones:
//!    `M̃ = Σ_{i ≤ N} |u_i⟩⟨v_i|`. `M̃` has orthonormal columns and
//!    `P_U M̃ = M`.
//! 4. The columns `|p_j⟩` of `M̃` give the PVM `P_j = |p_j⟩⟨p_j|`, and
//!    `P_U P_j P_U = |μ_j⟩⟨μ_j|`. For states supported on the first `k`
//!    coordinates the PVM reproduces the POVM statistics after summing
//!    fine outcomes over their parents.
//!
//! Every comparison is operator-level, so the gauge freedom of the SVD in
//! its zero block does not matter.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecomposition, singular_value_decomposition, ComplexMatrix, Tolerance};
use crate::measurement::{
    default_labels, povm_probabilities_pure, pvm_probabilities, validate_pvm, Outcome, OutcomeDistribution, PovmSet,
    PvmSet,
};
use crate::random;
use crate::states::PureState;

/// Eigenvalues at or below this fraction of the largest one are dropped.
pub const RANK_CUT: f64 = 1e-12;
/// Bound on every identity residual checked after construction.
pub const DILATION_TOL: f64 = 1e-9;

/// A POVM rewritten as rank-one effects `|μ_j⟩⟨μ_j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneRefinement {
    original_dim: usize,
    vectors: Vec<Vec<Complex64>>,
    parent: Vec<usize>,
    coarse_labels: Vec<String>,
}

impl RankOneRefinement {
    /// Dimension `k` of the space the POVM acts on.
    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    /// Number `N` of rank-one pieces.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Measurement vectors, grouped by outcome, eigenvalues descending
    /// within a group.
    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// Index into [`Self::coarse_labels`] for each fine outcome.
    pub fn parent(&self) -> &[usize] {
        &self.parent
    }

    pub fn coarse_labels(&self) -> &[String] {
        &self.coarse_labels
    }

    pub fn parent_label(&self, fine: usize) -> &str {
        &self.coarse_labels[self.parent[fine]]
    }

    /// `Σ_{j ∈ parent⁻¹(i)} |μ_j⟩⟨μ_j|` for each coarse outcome `i`.
    pub fn coarse_effects(&self) -> Vec<ComplexMatrix> {
        let k = self.original_dim;
        let mut out = vec![ComplexMatrix::zeros(k, k); self.coarse_labels.len()];
        for (v, &p) in self.vectors.iter().zip(&self.parent) {
            out[p] = &out[p] + &ComplexMatrix::outer(v, v);
        }
        out
    }
}

/// Splits each effect into rank-one pieces `√λ_j |ψ_j⟩`.
pub fn refine_to_rank_one(povm: &PovmSet, tol: Tolerance) -> Result<RankOneRefinement> {
    let mut vectors = Vec::new();
    let mut parent = Vec::new();
    for (i, q) in povm.operators().enumerate() {
        let eig = hermitian_eigendecomposition(q, tol)?;
        let largest = eig.eigenvalues.last().copied().unwrap_or(0.0);
        let cut = RANK_CUT * largest;
        for j in (0..eig.eigenvalues.len()).rev() {
            let lambda = eig.eigenvalues[j];
            if lambda <= cut || lambda <= 0.0 {
                continue;
            }
            let scale = lambda.sqrt();
            vectors.push(eig.eigenvectors.column(j).into_iter().map(|z| z * scale).collect());
            parent.push(i);
        }
    }
    Ok(RankOneRefinement {
        original_dim: povm.dim(),
        vectors,
        parent,
        coarse_labels: povm.labels().map(str::to_string).collect(),
    })
}

/// Measurement vectors as columns, zero-padded to `max(k, N)` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrix {
    matrix: ComplexMatrix,
    original_dim: usize,
}

impl MeasurementMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    /// `P_U = diag(I_k, 0)` on the padded space.
    pub fn subspace_projector(&self) -> ComplexMatrix {
        subspace_projector(self.original_dim, self.matrix.rows())
    }

    /// `‖MM† − P_U‖_max`.
    pub fn projector_residual(&self) -> f64 {
        (&self.matrix * &self.matrix.adjoint()).max_abs_diff(&self.subspace_projector())
    }

    pub fn singular_values(&self) -> Result<Vec<f64>> {
        Ok(singular_value_decomposition(&self.matrix)?.singulars)
    }
}

fn subspace_projector(k: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c && r < k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn measurement_matrix(r: &RankOneRefinement) -> Result<MeasurementMatrix> {
    let k = r.original_dim;
    let rows = k.max(r.len());
    if r.is_empty() {
        return Err(Error::ShapeMismatch("refinement has no measurement vectors".into()));
    }
    let matrix = ComplexMatrix::from_fn(rows, r.len(), |row, col| {
        if row < k {
            r.vectors[col][row]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(MeasurementMatrix {
        matrix,
        original_dim: k,
    })
}

/// PVM on the enlarged space together with what is needed to map it back.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumarkDilation {
    refinement: RankOneRefinement,
    measurement: MeasurementMatrix,
    extended: ComplexMatrix,
    pvm: PvmSet,
}

impl NeumarkDilation {
    /// Assembles a dilation around an arbitrary `M̃` without checking any
    /// identity; [`verify_dilation`] reports how far it is off.
    pub fn from_parts(refinement: RankOneRefinement, extended: ComplexMatrix) -> Result<Self> {
        let measurement = measurement_matrix(&refinement)?;
        if extended.shape() != measurement.matrix.shape() {
            return Err(Error::ShapeMismatch(format!(
                "extended matrix is {}x{}, measurement matrix {}x{}",
                extended.rows(),
                extended.cols(),
                measurement.matrix.rows(),
                measurement.matrix.cols()
            )));
        }
        let projectors = (0..extended.cols()).map(|j| {
            let p = extended.column(j);
            ComplexMatrix::outer(&p, &p)
        });
        let pvm = PvmSet::new_unchecked(extended.rows(), default_labels(projectors));
        Ok(Self {
            refinement,
            measurement,
            extended,
            pvm,
        })
    }

    /// Dimension `N` of the enlarged space.
    pub fn enlarged_dim(&self) -> usize {
        self.extended.rows()
    }

    pub fn original_dim(&self) -> usize {
        self.refinement.original_dim
    }

    pub fn refinement(&self) -> &RankOneRefinement {
        &self.refinement
    }

    pub fn measurement_matrix(&self) -> &MeasurementMatrix {
        &self.measurement
    }

    /// `M̃`.
    pub fn extended_matrix(&self) -> &ComplexMatrix {
        &self.extended
    }

    /// Fine outcomes labeled `"0"`, `"1"`, … in refinement order.
    pub fn pvm(&self) -> &PvmSet {
        &self.pvm
    }

    pub fn subspace_projector(&self) -> ComplexMatrix {
        self.measurement.subspace_projector()
    }

    /// `(fine label, coarse label)` pairs.
    pub fn parent_map(&self) -> Vec<(String, String)> {
        self.pvm
            .labels()
            .enumerate()
            .map(|(j, l)| (l.to_string(), self.refinement.parent_label(j).to_string()))
            .collect()
    }

    /// `P_U P_j P_U` restricted to the original space, per fine outcome.
    pub fn compressed_effects(&self) -> Vec<ComplexMatrix> {
        let k = self.original_dim();
        self.pvm.operators().map(|p| p.submatrix(0, 0, k, k)).collect()
    }
}

/// Runs the SVD construction and checks `M̃†M̃ = I`, `P_U M̃ = M`,
/// `Q_j = P_U P_j P_U` and PVM validity before returning.
pub fn dilate(r: &RankOneRefinement) -> Result<NeumarkDilation> {
    let m = measurement_matrix(r)?;
    let svd = singular_value_decomposition(&m.matrix)?;
    let (rows, n) = m.matrix.shape();
    // M̃ = Σ_{i ≤ N} |u_i⟩⟨v_i|; n′ ≥ N guarantees N left vectors exist.
    let u_n = svd.left.submatrix(0, 0, rows, n);
    let extended = &u_n * &svd.right.adjoint();
    let d = NeumarkDilation::from_parts(r.clone(), extended)?;

    let residuals = identity_residuals(&d);
    for (identity, residual) in [
        ("column orthonormality", residuals.column_orthonormality),
        ("subspace projection", residuals.subspace_projection),
        ("compression", residuals.max_compression()),
    ] {
        if residual.is_nan() || residual > DILATION_TOL {
            return Err(Error::DilationVerificationFailure { identity, residual });
        }
    }
    let strict = Tolerance::new(DILATION_TOL, 0.0)?;
    if validate_pvm(d.pvm.outcomes().to_vec(), strict).is_err() {
        return Err(Error::DilationVerificationFailure {
            identity: "pvm axioms",
            residual: residuals.column_orthonormality,
        });
    }
    Ok(d)
}

/// Fine PVM statistics on `ψ` embedded in the enlarged space, and their
/// sums per original outcome.
pub fn dilated_probabilities(
    d: &NeumarkDilation,
    psi: &PureState,
) -> Result<(OutcomeDistribution, OutcomeDistribution)> {
    if psi.dim() != d.original_dim() {
        return Err(Error::ShapeMismatch(format!(
            "dilation of a dimension-{} POVM applied to a dimension-{} state",
            d.original_dim(),
            psi.dim()
        )));
    }
    let embedded = psi.zero_padded(d.enlarged_dim())?;
    let fine = pvm_probabilities(&d.pvm, &embedded)?;
    let labels = d.refinement.coarse_labels();
    let mut coarse = vec![0.0; labels.len()];
    for (p, &parent) in fine.probabilities().zip(&d.refinement.parent) {
        coarse[parent] += p;
    }
    let coarse = OutcomeDistribution::from_raw(labels.iter().map(String::as_str), coarse);
    Ok((fine, coarse))
}

#[derive(Debug, Clone, PartialEq)]
struct IdentityResiduals {
    column_orthonormality: f64,
    subspace_projection: f64,
    compression: Vec<f64>,
}

impl IdentityResiduals {
    fn max_compression(&self) -> f64 {
        self.compression.iter().copied().fold(0.0, f64::max)
    }
}

fn identity_residuals(d: &NeumarkDilation) -> IdentityResiduals {
    let ext = &d.extended;
    let pu = d.subspace_projector();
    let column_orthonormality = (&ext.adjoint() * ext).max_abs_diff(&ComplexMatrix::identity(ext.cols()));
    let subspace_projection = (&pu * ext).max_abs_diff(d.measurement.matrix());
    let rows = ext.rows();
    let compression = d
        .pvm
        .operators()
        .zip(&d.refinement.vectors)
        .map(|(p, mu)| {
            let q = ComplexMatrix::outer(mu, mu).padded(rows, rows);
            (&(&pu * p) * &pu).max_abs_diff(&q)
        })
        .collect();
    IdentityResiduals {
        column_orthonormality,
        subspace_projection,
        compression,
    }
}

/// Residuals of every dilation identity plus a Monte-Carlo comparison of
/// outcome statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport {
    /// `‖M̃†M̃ − I_N‖_max`.
    pub column_orthonormality: f64,
    /// `‖P_U M̃ − M‖_max`.
    pub subspace_projection: f64,
    /// `‖|μ_j⟩⟨μ_j| − P_U P_j P_U‖_max` per fine outcome.
    pub compression: Vec<f64>,
    /// `‖Q_i − Σ_{j→i} P_U P_j P_U‖_max` per original outcome.
    pub coarse_compression: Vec<f64>,
    pub pvm_valid: bool,
    pub trials: u64,
    /// Largest coarse probability discrepancy; `None` without trials.
    pub max_probability_discrepancy: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
}

impl DilationReport {
    pub fn worst_residual(&self) -> f64 {
        [
            self.column_orthonormality,
            self.subspace_projection,
            self.compression.iter().copied().fold(0.0, f64::max),
            self.coarse_compression.iter().copied().fold(0.0, f64::max),
            self.max_probability_discrepancy.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks a dilation against the POVM it claims to realize. Passes iff
/// every residual is at most [`DILATION_TOL`] and the emitted set is a PVM.
pub fn verify_dilation(d: &NeumarkDilation, original: &PovmSet, trials: u64, seed: u64) -> Result<DilationReport> {
    if original.dim() != d.original_dim() || original.len() != d.refinement.coarse_labels.len() {
        return Err(Error::ShapeMismatch("dilation does not match the POVM".into()));
    }
    let residuals = identity_residuals(d);
    let compressed = d.compressed_effects();
    let coarse_compression = original
        .operators()
        .enumerate()
        .map(|(i, q)| {
            let k = q.rows();
            let mut total = ComplexMatrix::zeros(k, k);
            for (c, _) in compressed.iter().zip(&d.refinement.parent).filter(|(_, &p)| p == i) {
                total = &total + c;
            }
            total.max_abs_diff(q)
        })
        .collect();
    let strict = Tolerance::new(DILATION_TOL, 0.0)?;
    let pvm_valid = validate_pvm(d.pvm.outcomes().to_vec(), strict).is_ok();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_discrepancy: Option<f64> = None;
    for _ in 0..trials {
        let psi = random::state(&mut rng, d.original_dim());
        let (_, coarse) = dilated_probabilities(d, &psi)?;
        let direct = povm_probabilities_pure(original, &psi)?;
        let diff = coarse.max_abs_diff(&direct);
        max_discrepancy = Some(max_discrepancy.map_or(diff, |m| m.max(diff)));
    }

    let mut report = DilationReport {
        column_orthonormality: residuals.column_orthonormality,
        subspace_projection: residuals.subspace_projection,
        compression: residuals.compression,
        coarse_compression,
        pvm_valid,
        trials,
        max_probability_discrepancy: max_discrepancy,
        threshold: DILATION_TOL,
        passed: false,
    };
    report.passed = pvm_valid && report.worst_residual() <= DILATION_TOL;
    Ok(report)
}

/// Refine, dilate, and return the dilation in one call.
pub fn dilate_povm(povm: &PovmSet, tol: Tolerance) -> Result<NeumarkDilation> {
    dilate(&refine_to_rank_one(povm, tol)?)
}

/// The rank-one POVM `{|μ_j⟩⟨μ_j|}` on the original space.
pub fn fine_povm(r: &RankOneRefinement) -> PovmSet {
    let outcomes = r
        .vectors
        .iter()
        .enumerate()
        .map(|(j, v)| Outcome::new(j.to_string(), ComplexMatrix::outer(v, v)))
        .collect();
    PovmSet::new_unchecked(r.original_dim, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn trine_vectors() -> Vec<[f64; 2]> {
        let s = (2.0f64 / 3.0).sqrt();
        (0..3)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
                [s * t.cos(), s * t.sin()]
            })
            .collect()
    }

    fn trine() -> PovmSet {
        let ops = trine_vectors().into_iter().map(|v| {
            let mu = [c(v[0]), c(v[1])];
            ComplexMatrix::outer(&mu, &mu)
        });
        PovmSet::new(default_labels(ops), tol()).unwrap()
    }

    fn coin() -> PovmSet {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        PovmSet::new(default_labels([half.clone(), half]), tol()).unwrap()
    }

    /// Equal up to a global phase.
    fn same_ray(a: &[Complex64], b: &[Complex64]) -> bool {
        let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
        (ip.norm() - (na * nb).sqrt()).abs() < 1e-12 && (na - nb).abs() < 1e-12
    }

    #[test]
    fn refine_trine() {
        let r = refine_to_rank_one(&trine(), tol()).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.parent(), &[0, 1, 2]);
        for (v, want) in r.vectors().iter().zip(trine_vectors()) {
            assert!(same_ray(v, &[c(want[0]), c(want[1])]));
        }
    }

    #[test]
    fn refine_identity_effect() {
        let single = PovmSet::new(default_labels([ComplexMatrix::identity(2)]), tol()).unwrap();
        let r = refine_to_rank_one(&single, tol()).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.parent(), &[0, 0]);
        let m = measurement_matrix(&r).unwrap();
        assert!((&m.matrix().adjoint() * m.matrix()).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(m.projector_residual() < 1e-14);
    }

    #[test]
    fn refine_computational_basis() {
        let r = refine_to_rank_one(&PvmSet::computational_basis(2).into(), tol()).unwrap();
        assert_eq!(r.parent(), &[0, 1]);
        assert!(same_ray(&r.vectors()[0], &[c(1.0), c(0.0)]));
        assert!(same_ray(&r.vectors()[1], &[c(0.0), c(1.0)]));
        let m = measurement_matrix(&r).unwrap();
        // columns are e₁, e₂ up to phase, so M M† = I exactly
        assert!(m.projector_residual() < 1e-15);
        assert_eq!(m.matrix().shape(), (2, 2));
    }

    #[test]
    fn refine_drops_zero_effects_and_orders_descending() {
        let ops = [
            ComplexMatrix::from_diag(&[0.25, 0.75, 0.0]),
            ComplexMatrix::zeros(3, 3),
            ComplexMatrix::from_diag(&[0.75, 0.25, 1.0]),
        ];
        let povm = PovmSet::new(default_labels(ops), tol()).unwrap();
        let r = refine_to_rank_one(&povm, tol()).unwrap();
        assert_eq!(r.parent(), &[0, 0, 2, 2, 2]);
        let norms: Vec<f64> = r
            .vectors()
            .iter()
            .map(|v| v.iter().map(|z| z.norm_sqr()).sum())
            .collect();
        assert!((norms[0] - 0.75).abs() < 1e-14 && (norms[1] - 0.25).abs() < 1e-14);
        assert!((norms[2] - 1.0).abs() < 1e-14 && (norms[4] - 0.25).abs() < 1e-14);
        for (q, want) in r.coarse_effects().iter().zip(povm.operators()) {
            assert!(q.max_abs_diff(want) < 1e-14);
        }
    }

    #[test]
    fn trine_measurement_matrix() {
        let r = refine_to_rank_one(&trine(), tol()).unwrap();
        let m = measurement_matrix(&r).unwrap();
        assert_eq!(m.matrix().shape(), (3, 3));
        assert!((0..3).all(|c| m.matrix()[(2, c)].norm() == 0.0));
        let mmt = m.matrix() * &m.matrix().adjoint();
        assert!(mmt.max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 1.0, 0.0])) < 1e-14);
        let sv = m.singular_values().unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-12 && (sv[1] - 1.0).abs() < 1e-12 && sv[2].abs() < 1e-12);
    }

    #[test]
    fn dilate_computational_basis() {
        let basis: PovmSet = PvmSet::computational_basis(2).into();
        let d = dilate_povm(&basis, tol()).unwrap();
        assert_eq!(d.enlarged_dim(), 2);
        for (j, p) in d.pvm().operators().enumerate() {
            let mut diag = [0.0, 0.0];
            diag[j] = 1.0;
            assert!(p.max_abs_diff(&ComplexMatrix::from_diag(&diag)) < 1e-12);
        }
        let report = verify_dilation(&d, &basis, 10, 1).unwrap();
        assert!(report.passed);
        assert!(report.compression.iter().all(|&r| r <= 1e-10));
    }

    #[test]
    fn dilate_trine() {
        let povm = trine();
        let d = dilate_povm(&povm, tol()).unwrap();
        assert_eq!(d.enlarged_dim(), 3);
        let ext = d.extended_matrix();
        for (j, want) in trine_vectors().iter().enumerate() {
            let col = ext.column(j);
            let mu = &d.refinement().vectors()[j];
            assert!((col[0] - mu[0]).norm() < 1e-9 && (col[1] - mu[1]).norm() < 1e-9);
            assert!(same_ray(&col[..2], &[c(want[0]), c(want[1])]));
        }
        for (q, want) in d.compressed_effects().iter().zip(povm.operators()) {
            assert!(q.max_abs_diff(want) < 1e-9);
        }
        let (_, coarse) = dilated_probabilities(&d, &PureState::basis(2, 0).unwrap()).unwrap();
        for (p, want) in coarse.probabilities().zip([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]) {
            assert!((p - want).abs() < 1e-10);
        }
    }

    #[test]
    fn dilate_coin() {
        let povm = coin();
        let d = dilate_povm(&povm, tol()).unwrap();
        assert_eq!(d.enlarged_dim(), 4);
        assert_eq!(d.pvm().len(), 4);
        let psi = PureState::normalized(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.9)]).unwrap();
        let (fine, coarse) = dilated_probabilities(&d, &psi).unwrap();
        assert_eq!(fine.len(), 4);
        for p in coarse.probabilities() {
            assert!((p - 0.5).abs() < 1e-10);
        }
        assert_eq!(
            d.parent_map().iter().map(|(_, c)| c.as_str()).collect::<Vec<_>>(),
            vec!["0", "0", "1", "1"]
        );
    }

    #[test]
    fn computational_pvm_on_plus() {
        let basis: PovmSet = PvmSet::computational_basis(2).into();
        let d = dilate_povm(&basis, tol()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (fine, coarse) = dilated_probabilities(&d, &PureState::from_real(&[s, s]).unwrap()).unwrap();
        assert!(fine.max_abs_diff(&coarse) < 1e-12);
        assert!(fine.probabilities().all(|p| (p - 0.5).abs() < 1e-12));
        assert!(dilated_probabilities(&d, &PureState::basis(3, 0).unwrap()).is_err());
    }

    #[test]
    fn corrupted_column_is_reported() {
        let povm = trine();
        let d = dilate_povm(&povm, tol()).unwrap();
        let ext = d.extended_matrix();
        let corrupted = ComplexMatrix::from_fn(ext.rows(), ext.cols(), |r, c| {
            if c == 1 {
                ext[(r, c)] * 1.01
            } else {
                ext[(r, c)]
            }
        });
        let bad = NeumarkDilation::from_parts(d.refinement().clone(), corrupted).unwrap();
        let report = verify_dilation(&bad, &povm, 5, 3).unwrap();
        assert!(!report.passed);
        // (1.01² − 1) on the diagonal of M̃†M̃
        assert!((report.column_orthonormality - 0.0201).abs() < 1e-9);
    }

    #[test]
    fn verify_without_trials() {
        let povm = trine();
        let d = dilate_povm(&povm, tol()).unwrap();
        let report = verify_dilation(&d, &povm, 0, 0).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_probability_discrepancy, None);
        assert_eq!(report.compression.len(), 3);
        assert!(report.column_orthonormality <= DILATION_TOL);
    }

    #[test]
    fn fine_povm_is_complete() {
        let r = refine_to_rank_one(&coin(), tol()).unwrap();
        let fine = fine_povm(&r);
        assert!(PovmSet::new(fine.into_outcomes(), tol()).is_ok());
    }
}
