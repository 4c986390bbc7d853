//! Three-outcome unambiguous discrimination of two nonorthogonal pure
//! states.
//!
//! With `Q₀ = a(I − |ψ⟩⟨ψ|)`, `Q₁ = a(I − |φ⟩⟨φ|)` and
//! `Q₂ = I − Q₀ − Q₁`, outcome `1` never fires on `φ` and outcome `0`
//! never fires on `ψ`, so those two outcomes identify the state without
//! error; outcome `2` is inconclusive.
//!
//! `Q₂ = (1 − 2a)I + a(|ψ⟩⟨ψ| + |φ⟩⟨φ|)`. On span{ψ, φ} its eigenvalues are
//! `1 − a(1 ∓ |⟨ψ|φ⟩|)`, and on the orthogonal complement (dimension ≥ 3
//! only) it is `1 − 2a`. The largest feasible `a` is therefore
//! `1/(1 + |⟨ψ|φ⟩|)` in dimension 2 and `1/2` above.

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, ComplexMatrix, Tolerance};
use crate::measurement::{povm_probabilities_pure, sample_outcomes, Outcome, OutcomeDistribution, PovmSet};
use crate::states::{overlap, PureState};

/// `|⟨ψ|φ⟩|` at or above `1 − PARALLEL_TOL` counts as parallel.
pub const PARALLEL_TOL: f64 = 1e-12;

pub const LABEL_NOT_PSI: &str = "0";
pub const LABEL_NOT_PHI: &str = "1";
pub const LABEL_INCONCLUSIVE: &str = "2";

/// Which of the two candidate states is actually prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidate {
    Psi,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    DefinitelyPsi,
    DefinitelyPhi,
    Inconclusive,
}

impl Verdict {
    /// Whether this verdict names `truth` as the state, or contradicts it.
    pub fn is_wrong_for(self, truth: Candidate) -> bool {
        matches!(
            (self, truth),
            (Verdict::DefinitelyPsi, Candidate::Phi) | (Verdict::DefinitelyPhi, Candidate::Psi)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationPovm {
    psi: PureState,
    phi: PureState,
    a: f64,
    overlap_abs: f64,
    povm: PovmSet,
}

impl DiscriminationPovm {
    pub fn psi(&self) -> &PureState {
        &self.psi
    }

    pub fn phi(&self) -> &PureState {
        &self.phi
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `|⟨ψ|φ⟩|`.
    pub fn overlap_abs(&self) -> f64 {
        self.overlap_abs
    }

    /// Labels `"0"`, `"1"`, `"2"`.
    pub fn povm(&self) -> &PovmSet {
        &self.povm
    }

    /// Closed-form conclusive probability `a(1 − |⟨ψ|φ⟩|²)`, the same for
    /// either prepared state.
    pub fn conclusive_probability(&self) -> f64 {
        self.a * (1.0 - self.overlap_abs * self.overlap_abs)
    }

    pub fn state(&self, which: Candidate) -> &PureState {
        match which {
            Candidate::Psi => &self.psi,
            Candidate::Phi => &self.phi,
        }
    }
}

/// Largest `a` keeping `Q₂` positive semi-definite.
pub fn max_feasible_a(dim: usize, overlap_abs: f64) -> f64 {
    if dim <= 2 {
        1.0 / (1.0 + overlap_abs)
    } else {
        0.5
    }
}

/// Builds the discrimination POVM; `a` defaults to [`max_feasible_a`].
///
/// Feasibility of a supplied `a` is decided by the smallest eigenvalue of
/// `Q₂` against the tolerance, so the boundary value itself is accepted.
pub fn build_discrimination_povm(
    psi: &PureState,
    phi: &PureState,
    a: Option<f64>,
    tol: Tolerance,
) -> Result<DiscriminationPovm> {
    let dim = psi.dim();
    if phi.dim() != dim {
        return Err(Error::ShapeMismatch(format!(
            "states of dimension {dim} and {}",
            phi.dim()
        )));
    }
    if dim < 2 {
        return Err(Error::ShapeMismatch("discrimination needs dimension at least 2".into()));
    }
    let overlap_abs = overlap(psi, phi)?.norm();
    if overlap_abs >= 1.0 - PARALLEL_TOL {
        return Err(Error::ParallelStates { overlap: overlap_abs });
    }
    let max = max_feasible_a(dim, overlap_abs);
    let a = a.unwrap_or(max);
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InfeasibleParameter { a, max });
    }

    let id = ComplexMatrix::identity(dim);
    let psi_proj = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes());
    let phi_proj = ComplexMatrix::outer(phi.amplitudes(), phi.amplitudes());
    let q0 = (&id - &psi_proj).scale_real(a);
    let q1 = (&id - &phi_proj).scale_real(a);
    let q2 = &(&id - &q0) - &q1;
    if min_eigenvalue(&q2, tol)? < -tol.bound(q2.norm_proxy()) {
        return Err(Error::InfeasibleParameter { a, max });
    }

    let povm = PovmSet::new(
        vec![
            Outcome::new(LABEL_NOT_PSI, q0),
            Outcome::new(LABEL_NOT_PHI, q1),
            Outcome::new(LABEL_INCONCLUSIVE, q2),
        ],
        tol,
    )?;
    Ok(DiscriminationPovm {
        psi: psi.clone(),
        phi: phi.clone(),
        a,
        overlap_abs,
        povm,
    })
}

/// Born-rule outcome probabilities when `which` is prepared.
pub fn discrimination_probabilities(d: &DiscriminationPovm, which: Candidate) -> Result<OutcomeDistribution> {
    povm_probabilities_pure(&d.povm, d.state(which))
}

pub fn classify_outcome(label: &str) -> Result<Verdict> {
    match label {
        LABEL_NOT_PHI => Ok(Verdict::DefinitelyPsi),
        LABEL_NOT_PSI => Ok(Verdict::DefinitelyPhi),
        LABEL_INCONCLUSIVE => Ok(Verdict::Inconclusive),
        other => Err(Error::UnknownLabel(other.to_string())),
    }
}

/// Tally of a seeded Monte-Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub ground_truth: Candidate,
    pub trials: u64,
    pub definitely_psi: u64,
    pub definitely_phi: u64,
    pub inconclusive: u64,
    /// Conclusive verdicts naming the wrong state.
    pub wrong_conclusive: u64,
    /// `None` when no trials ran.
    pub conclusive_rate: Option<f64>,
    pub error_rate: Option<f64>,
    pub expected_conclusive_rate: f64,
}

impl TrialReport {
    pub fn conclusive(&self) -> u64 {
        self.definitely_psi + self.definitely_phi
    }
}

pub fn discrimination_trial(
    d: &DiscriminationPovm,
    ground_truth: Candidate,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    let dist = discrimination_probabilities(d, ground_truth)?;
    let mut report = TrialReport {
        ground_truth,
        trials,
        definitely_psi: 0,
        definitely_phi: 0,
        inconclusive: 0,
        wrong_conclusive: 0,
        conclusive_rate: None,
        error_rate: None,
        expected_conclusive_rate: d.conclusive_probability(),
    };
    for (label, count) in sample_outcomes(&dist, trials, seed) {
        let verdict = classify_outcome(&label)?;
        match verdict {
            Verdict::DefinitelyPsi => report.definitely_psi += count,
            Verdict::DefinitelyPhi => report.definitely_phi += count,
            Verdict::Inconclusive => report.inconclusive += count,
        }
        if verdict.is_wrong_for(ground_truth) {
            report.wrong_conclusive += count;
        }
    }
    if trials > 0 {
        report.conclusive_rate = Some(report.conclusive() as f64 / trials as f64);
        report.error_rate = Some(report.wrong_conclusive as f64 / trials as f64);
    }
    Ok(report)
}
