use std::path::{Path, PathBuf};

use qmeas_core::ancilla::{
    combined_operators_form_pvm, induced_povm, realize_povm_with_ancilla, REALIZATION_TOL, UNITARITY_TOL,
};
use qmeas_core::discrimination::{
    build_discrimination_povm, classify_outcome, discrimination_probabilities, discrimination_trial, max_feasible_a,
    Candidate, TrialReport,
};
use qmeas_core::linalg::identity_residual;
use qmeas_core::measurement::{
    kraus_from_povm, povm_post_state, povm_probabilities, povm_probabilities_pure, pvm_post_state,
    pvm_post_state_mixed, pvm_probabilities, pvm_probabilities_mixed, sample_outcomes, SUM_TOL,
};
use qmeas_core::neumark::{dilate, refine_to_rank_one, verify_dilation, DILATION_TOL};
use qmeas_core::{ComplexMatrix, Error, OutcomeDistribution, PureState, Tolerance};
use serde::Serialize;

use crate::args::{DilateArgs, DiscriminateArgs, MeasureArgs, RealizeArgs, TolArgs, ValidateArgs};
use crate::error::CliError;
use crate::files::{
    encode_matrix, read_json, write_json, FineToCoarse, MappingFile, MatrixRows, MeasurementSet, ModelFile,
    OperatorSetFile, SetKind, State, StateFile, StateKind,
};
use crate::report::{Check, ErrorInfo, Session};

/// Largest `p(0|ψ)` or `p(1|φ)` accepted as zero.
pub const FALSE_IDENTIFICATION_TOL: f64 = 1e-12;
/// Allowed deviation of matrix-computed probabilities from closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

pub fn tolerance(t: TolArgs) -> Result<Tolerance, CliError> {
    Tolerance::new(t.tol_abs, t.tol_rel).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Debug, Serialize)]
pub struct LabeledProbability {
    pub label: String,
    pub probability: f64,
}

fn labeled(dist: &OutcomeDistribution) -> Vec<LabeledProbability> {
    dist.entries()
        .iter()
        .map(|(label, p)| LabeledProbability {
            label: label.clone(),
            probability: *p,
        })
        .collect()
}

fn load_set(session: &mut Session, role: &str, path: &Path, tol: Tolerance) -> Result<MeasurementSet, CliError> {
    let file = read_json::<OperatorSetFile>(path)?;
    session.input(role, path, file.sha256);
    let outcomes = file.value.decode().map_err(|m| CliError::parse(path, m))?;
    Ok(OperatorSetFile::validate(
        outcomes,
        file.value.kind,
        file.value.dim,
        tol,
    )?)
}

fn load_state(session: &mut Session, role: &str, path: &Path, tol: Tolerance) -> Result<State, CliError> {
    let file = read_json::<StateFile>(path)?;
    session.input(role, path, file.sha256);
    let raw = file.value.decode().map_err(|m| CliError::parse(path, m))?;
    Ok(StateFile::validate(raw, file.value.dim, tol)?)
}

fn load_pure(session: &mut Session, role: &str, path: &Path, tol: Tolerance) -> Result<PureState, CliError> {
    match load_state(session, role, path, tol)? {
        State::Pure(psi) => Ok(psi),
        State::Density(_) => Err(Error::InvalidArgument(format!("{role} must be a pure state")).into()),
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateResult {
    pub kind: SetKind,
    pub dim: usize,
    pub outcomes: usize,
    pub labels: Vec<String>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ErrorInfo>,
    /// `‖Σ_i Q_i − I‖_max`, absent when the shapes do not allow the sum.
    pub identity_residual: Option<f64>,
}

pub fn validate(session: &mut Session, args: &ValidateArgs) -> Result<ValidateResult, CliError> {
    let tol = tolerance(args.tol)?;
    let file = read_json::<OperatorSetFile>(&args.input)?;
    session.input("set", &args.input, file.sha256);
    let set = file.value;
    let outcomes = set.decode().map_err(|m| CliError::parse(&args.input, m))?;

    let effects: Vec<ComplexMatrix> = outcomes
        .iter()
        .map(|o| match set.kind {
            SetKind::Kraus => o
                .operator
                .adjoint()
                .checked_mul(&o.operator)
                .unwrap_or_else(|_| o.operator.clone()),
            _ => o.operator.clone(),
        })
        .collect();
    let residual = identity_residual(&effects).ok();
    let labels = outcomes.iter().map(|o| o.label.clone()).collect();
    let count = outcomes.len();

    let verdict = OperatorSetFile::validate(outcomes, set.kind, set.dim, tol);
    let violation = verdict.as_ref().err().map(ErrorInfo::from);
    if let Err(e) = &verdict {
        session.fail(e);
    }
    session.check(Check::holds("axioms", verdict.is_ok()));
    Ok(ValidateResult {
        kind: set.kind,
        dim: set.dim,
        outcomes: count,
        labels,
        valid: verdict.is_ok(),
        violation,
        identity_residual: residual,
    })
}

#[derive(Debug, Serialize)]
pub struct PostState {
    pub label: String,
    pub probability: f64,
    pub state: StateFile,
}

#[derive(Debug, Serialize)]
pub struct OutcomeCount {
    pub label: String,
    pub count: u64,
}

#[derive(Debug, Serialize)]
pub struct SampleSummary {
    pub n: u64,
    pub seed: u64,
    pub counts: Vec<OutcomeCount>,
}

#[derive(Debug, Serialize)]
pub struct MeasureResult {
    pub set_kind: SetKind,
    pub state_kind: StateKind,
    pub dim: usize,
    pub distribution: Vec<LabeledProbability>,
    pub total: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post: Option<PostState>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSummary>,
}

pub fn measure(session: &mut Session, args: &MeasureArgs) -> Result<MeasureResult, CliError> {
    let tol = tolerance(args.tol)?;
    let set = load_set(session, "set", &args.set, tol)?;
    let mut state = load_state(session, "state", &args.state, tol)?;
    if args.mixed {
        state = State::Density(state.to_density());
    }
    if set.dim() != state.dim() {
        return Err(Error::ShapeMismatch(format!(
            "measurement of dimension {} applied to a state of dimension {}",
            set.dim(),
            state.dim()
        ))
        .into());
    }

    let dist = match (&set, &state) {
        (MeasurementSet::Pvm(p), State::Pure(psi)) => pvm_probabilities(p, psi)?,
        (MeasurementSet::Pvm(p), State::Density(rho)) => pvm_probabilities_mixed(p, rho)?,
        (other, State::Pure(psi)) => povm_probabilities_pure(&other.effects(), psi)?,
        (other, State::Density(rho)) => povm_probabilities(&other.effects(), rho)?,
    };
    let total = dist.total();
    session.check(Check::at_most("probabilities_sum_to_one", (total - 1.0).abs(), SUM_TOL));

    let post = match &args.post {
        None => None,
        Some(label) => {
            let probability = dist.probability(label)?;
            let post_state = match (&set, &state) {
                (MeasurementSet::Pvm(p), State::Pure(psi)) => StateFile::pure(&pvm_post_state(p, label, psi)?),
                (MeasurementSet::Pvm(p), State::Density(rho)) => {
                    StateFile::density(&pvm_post_state_mixed(p, label, rho)?)
                }
                (MeasurementSet::Povm(q), s) => {
                    StateFile::density(&povm_post_state(&kraus_from_povm(q, tol)?, label, &s.to_density())?)
                }
                (MeasurementSet::Kraus(k), s) => StateFile::density(&povm_post_state(k, label, &s.to_density())?),
            };
            Some(PostState {
                label: label.clone(),
                probability,
                state: post_state,
            })
        }
    };

    let sample = args.sample.map(|n| SampleSummary {
        n,
        seed: args.seed,
        counts: sample_outcomes(&dist, n, args.seed)
            .into_iter()
            .map(|(label, count)| OutcomeCount { label, count })
            .collect(),
    });

    Ok(MeasureResult {
        set_kind: match set {
            MeasurementSet::Pvm(_) => SetKind::Pvm,
            MeasurementSet::Povm(_) => SetKind::Povm,
            MeasurementSet::Kraus(_) => SetKind::Kraus,
        },
        state_kind: match state {
            State::Pure(_) => StateKind::Pure,
            State::Density(_) => StateKind::Density,
        },
        dim: set.dim(),
        distribution: labeled(&dist),
        total,
        post,
        sample,
    })
}

#[derive(Debug, Serialize)]
pub struct VerdictOperator {
    pub label: String,
    pub verdict: String,
    pub matrix: MatrixRows,
}

#[derive(Debug, Serialize)]
pub struct TrialSummary {
    pub ground_truth: String,
    pub seed: u64,
    pub trials: u64,
    pub definitely_psi: u64,
    pub definitely_phi: u64,
    pub inconclusive: u64,
    pub wrong_conclusive: u64,
    pub conclusive_rate: Option<f64>,
    pub expected_conclusive_rate: f64,
    pub error_rate: Option<f64>,
}

impl TrialSummary {
    fn new(r: &TrialReport, seed: u64) -> Self {
        Self {
            ground_truth: candidate_name(r.ground_truth).into(),
            seed,
            trials: r.trials,
            definitely_psi: r.definitely_psi,
            definitely_phi: r.definitely_phi,
            inconclusive: r.inconclusive,
            wrong_conclusive: r.wrong_conclusive,
            conclusive_rate: r.conclusive_rate,
            expected_conclusive_rate: r.expected_conclusive_rate,
            error_rate: r.error_rate,
        }
    }
}

fn candidate_name(c: Candidate) -> &'static str {
    match c {
        Candidate::Psi => "psi",
        Candidate::Phi => "phi",
    }
}

#[derive(Debug, Serialize)]
pub struct DiscriminateResult {
    pub dim: usize,
    pub overlap_abs: f64,
    pub a: f64,
    pub max_feasible_a: f64,
    pub conclusive_probability: f64,
    pub operators: Vec<VerdictOperator>,
    pub given_psi: Vec<LabeledProbability>,
    pub given_phi: Vec<LabeledProbability>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trials: Vec<TrialSummary>,
}

pub fn discriminate(session: &mut Session, args: &DiscriminateArgs) -> Result<DiscriminateResult, CliError> {
    let tol = tolerance(args.tol)?;
    let psi = load_pure(session, "psi", &args.psi, tol)?;
    let phi = load_pure(session, "phi", &args.phi, tol)?;
    let d = build_discrimination_povm(&psi, &phi, args.a, tol)?;

    let operators = d
        .povm()
        .outcomes()
        .iter()
        .map(|o| {
            Ok(VerdictOperator {
                label: o.label.clone(),
                verdict: format!("{:?}", classify_outcome(&o.label)?),
                matrix: encode_matrix(&o.operator),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let given_psi = discrimination_probabilities(&d, Candidate::Psi)?;
    let given_phi = discrimination_probabilities(&d, Candidate::Phi)?;
    let expected = d.conclusive_probability();
    let false_id = given_psi.probability("0")?.max(given_phi.probability("1")?);
    session.check(Check::at_most(
        "no_false_identification",
        false_id,
        FALSE_IDENTIFICATION_TOL,
    ));
    let closed_form = [
        given_psi.probability("1")? - expected,
        given_phi.probability("0")? - expected,
        given_psi.probability("2")? - (1.0 - expected),
        given_phi.probability("2")? - (1.0 - expected),
    ]
    .into_iter()
    .fold(0.0, |m: f64, x| m.max(x.abs()));
    session.check(Check::at_most(
        "closed_form_probabilities",
        closed_form,
        CLOSED_FORM_TOL,
    ));

    let mut trials = Vec::new();
    if args.trials > 0 {
        for (truth, seed) in [(Candidate::Psi, args.seed), (Candidate::Phi, args.seed.wrapping_add(1))] {
            let r = discrimination_trial(&d, truth, args.trials, seed)?;
            session.check(Check::at_most(
                format!("no_wrong_verdicts_given_{}", candidate_name(truth)),
                r.wrong_conclusive as f64,
                0.0,
            ));
            trials.push(TrialSummary::new(&r, seed));
        }
    }

    Ok(DiscriminateResult {
        dim: psi.dim(),
        overlap_abs: d.overlap_abs(),
        a: d.a(),
        max_feasible_a: max_feasible_a(psi.dim(), d.overlap_abs()),
        conclusive_probability: expected,
        operators,
        given_psi: labeled(&given_psi),
        given_phi: labeled(&given_phi),
        trials,
    })
}

#[derive(Debug, Serialize)]
pub struct LabeledResidual {
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct DilationResiduals {
    pub column_orthonormality: f64,
    pub subspace_projection: f64,
    pub compression_max: f64,
    pub coarse_compression: Vec<LabeledResidual>,
    pub max_probability_discrepancy: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DilateResult {
    pub original_dim: usize,
    pub enlarged_dim: usize,
    pub coarse_outcomes: usize,
    pub fine_outcomes: usize,
    pub fine_to_coarse: Vec<FineToCoarse>,
    pub residuals: DilationResiduals,
    pub pvm_valid: bool,
    pub verify_trials: u64,
    pub seed: u64,
    pub threshold: f64,
}

/// `pvm.json` → `pvm.mapping.json`.
pub fn default_mapping_path(out: &Path) -> PathBuf {
    out.with_extension("mapping.json")
}

pub fn dilate_cmd(session: &mut Session, args: &DilateArgs) -> Result<DilateResult, CliError> {
    let tol = tolerance(args.tol)?;
    let povm = load_set(session, "povm", &args.input, tol)?.effects();
    let d = dilate(&refine_to_rank_one(&povm, tol)?)?;
    let report = verify_dilation(&d, &povm, args.verify_trials, args.seed)?;

    for (name, value) in [
        ("column_orthonormality", report.column_orthonormality),
        ("subspace_projection", report.subspace_projection),
        (
            "fine_compression",
            report.compression.iter().copied().fold(0.0, f64::max),
        ),
        (
            "coarse_compression",
            report.coarse_compression.iter().copied().fold(0.0, f64::max),
        ),
    ] {
        session.check(Check::at_most(name, value, DILATION_TOL));
    }
    if let Some(p) = report.max_probability_discrepancy {
        session.check(Check::at_most("probability_discrepancy", p, DILATION_TOL));
    }
    session.check(Check::holds("pvm_axioms", report.pvm_valid));

    if let Some(out) = &args.out {
        let digest = write_json(out, &OperatorSetFile::from_pvm(d.pvm()))?;
        session.output("pvm", out, digest);
        let mapping = args.mapping.clone().unwrap_or_else(|| default_mapping_path(out));
        let digest = write_json(&mapping, &MappingFile::from_dilation(&d))?;
        session.output("mapping", &mapping, digest);
    }

    Ok(DilateResult {
        original_dim: d.original_dim(),
        enlarged_dim: d.enlarged_dim(),
        coarse_outcomes: povm.len(),
        fine_outcomes: d.pvm().len(),
        fine_to_coarse: d
            .parent_map()
            .into_iter()
            .map(|(fine, coarse)| FineToCoarse { fine, coarse })
            .collect(),
        residuals: DilationResiduals {
            column_orthonormality: report.column_orthonormality,
            subspace_projection: report.subspace_projection,
            compression_max: report.compression.iter().copied().fold(0.0, f64::max),
            coarse_compression: povm
                .labels()
                .zip(&report.coarse_compression)
                .map(|(label, &residual)| LabeledResidual {
                    label: label.to_string(),
                    residual,
                })
                .collect(),
            max_probability_discrepancy: report.max_probability_discrepancy,
        },
        pvm_valid: report.pvm_valid,
        verify_trials: args.verify_trials,
        seed: args.seed,
        threshold: report.threshold,
    })
}

#[derive(Debug, Serialize)]
pub struct RealizeResult {
    pub system_dim: usize,
    pub ancilla_dim: usize,
    pub unitarity_residual: f64,
    pub round_trip: Vec<LabeledResidual>,
    pub round_trip_max: f64,
    pub combined_operators_form_pvm: bool,
}

pub fn realize(session: &mut Session, args: &RealizeArgs) -> Result<RealizeResult, CliError> {
    let tol = tolerance(args.tol)?;
    let kraus = match load_set(session, "povm", &args.input, tol)? {
        MeasurementSet::Kraus(k) => k,
        other => kraus_from_povm(&other.effects(), tol)?,
    };
    let model = realize_povm_with_ancilla(&kraus)?;
    let induced = induced_povm(&model, tol)?;
    let round_trip: Vec<LabeledResidual> = kraus
        .effects()
        .outcomes()
        .iter()
        .zip(induced.operators())
        .map(|(o, q)| LabeledResidual {
            label: o.label.clone(),
            residual: q.max_abs_diff(&o.operator),
        })
        .collect();
    let round_trip_max = round_trip.iter().map(|r| r.residual).fold(0.0, f64::max);
    let unitarity = model.unitarity_residual();
    let forms_pvm = combined_operators_form_pvm(&model, tol)?;
    session.check(Check::at_most("round_trip", round_trip_max, REALIZATION_TOL));
    session.check(Check::at_most("unitarity", unitarity, UNITARITY_TOL));
    session.check(Check::holds("combined_operators_form_pvm", forms_pvm));

    if let Some(out) = &args.out {
        let digest = write_json(out, &ModelFile::from_model(&model))?;
        session.output("model", out, digest);
    }

    Ok(RealizeResult {
        system_dim: model.system_dim(),
        ancilla_dim: model.ancilla_dim(),
        unitarity_residual: unitarity,
        round_trip,
        round_trip_max,
        combined_operators_form_pvm: forms_pvm,
    })
}
