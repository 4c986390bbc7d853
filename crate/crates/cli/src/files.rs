//! On-disk formats. Complex numbers are `[re, im]` pairs and matrices are
//! row-major nested arrays.

use std::fs;
use std::path::Path;

use qmeas_core::ancilla::AncillaModel;
use qmeas_core::neumark::NeumarkDilation;
use qmeas_core::{Complex64, ComplexMatrix, DensityMatrix, KrausSet, Outcome, PovmSet, PureState, PvmSet, Tolerance};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::json;

pub const SCHEMA_VERSION: &str = "1";

pub type Pair = [f64; 2];
pub type MatrixRows = Vec<Vec<Pair>>;

pub fn encode_vector(v: &[Complex64]) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn encode_matrix(m: &ComplexMatrix) -> MatrixRows {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn decode_vector(v: &[Pair]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

/// Rejects ragged or empty nesting; `what` names the field in messages.
pub fn decode_matrix(rows: &[Vec<Pair>], what: &str) -> Result<ComplexMatrix, String> {
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 {
        return Err(format!("{what}: matrix is empty"));
    }
    if let Some(r) = rows.iter().position(|row| row.len() != cols) {
        return Err(format!(
            "{what}: row {r} has {} entries, expected {cols}",
            rows[r].len()
        ));
    }
    let data = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    ComplexMatrix::new(rows.len(), cols, data).map_err(|e| format!("{what}: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Pvm,
    Povm,
    Kraus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeEntry {
    pub label: String,
    pub matrix: MatrixRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSetFile {
    pub schema_version: String,
    pub kind: SetKind,
    pub dim: usize,
    pub outcomes: Vec<OutcomeEntry>,
}

/// A validated measurement loaded from an [`OperatorSetFile`].
#[derive(Debug, Clone)]
pub enum MeasurementSet {
    Pvm(PvmSet),
    Povm(PovmSet),
    Kraus(KrausSet),
}

impl MeasurementSet {
    pub fn dim(&self) -> usize {
        match self {
            MeasurementSet::Pvm(s) => s.dim(),
            MeasurementSet::Povm(s) => s.dim(),
            MeasurementSet::Kraus(s) => s.dim(),
        }
    }

    /// The effects `Q_i` (projectors for a PVM, `A_i†A_i` for Kraus sets).
    pub fn effects(&self) -> PovmSet {
        match self {
            MeasurementSet::Pvm(s) => s.into(),
            MeasurementSet::Povm(s) => s.clone(),
            MeasurementSet::Kraus(s) => s.effects(),
        }
    }
}

impl OperatorSetFile {
    pub fn new(kind: SetKind, dim: usize, outcomes: &[Outcome]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            kind,
            dim,
            outcomes: outcomes
                .iter()
                .map(|o| OutcomeEntry {
                    label: o.label.clone(),
                    matrix: encode_matrix(&o.operator),
                })
                .collect(),
        }
    }

    pub fn from_pvm(pvm: &PvmSet) -> Self {
        Self::new(SetKind::Pvm, pvm.dim(), pvm.outcomes())
    }

    /// Structural decoding only; the measurement axioms are checked by
    /// [`OperatorSetFile::validate`].
    pub fn decode(&self) -> Result<Vec<Outcome>, String> {
        check_schema(&self.schema_version)?;
        self.outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| {
                Ok(Outcome::new(
                    o.label.clone(),
                    decode_matrix(&o.matrix, &format!("outcomes[{i}]"))?,
                ))
            })
            .collect()
    }

    pub fn validate(
        outcomes: Vec<Outcome>,
        kind: SetKind,
        dim: usize,
        tol: Tolerance,
    ) -> qmeas_core::Result<MeasurementSet> {
        if let Some(o) = outcomes.iter().find(|o| o.operator.shape() != (dim, dim)) {
            return Err(qmeas_core::Error::ShapeMismatch(format!(
                "outcome {:?} is {}x{} but dim is {dim}",
                o.label,
                o.operator.rows(),
                o.operator.cols()
            )));
        }
        Ok(match kind {
            SetKind::Pvm => MeasurementSet::Pvm(PvmSet::new(outcomes, tol)?),
            SetKind::Povm => MeasurementSet::Povm(PovmSet::new(outcomes, tol)?),
            SetKind::Kraus => MeasurementSet::Kraus(KrausSet::new(outcomes, tol)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub schema_version: String,
    pub kind: StateKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixRows>,
}

/// A state loaded from a [`StateFile`].
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Density(DensityMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(s) => s.dim(),
            State::Density(s) => s.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(s) => s.into(),
            State::Density(s) => s.clone(),
        }
    }
}

/// Raw state data before the normalization checks.
pub enum RawState {
    Pure(Vec<Complex64>),
    Density(ComplexMatrix),
}

impl StateFile {
    pub fn pure(psi: &PureState) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            kind: StateKind::Pure,
            dim: psi.dim(),
            amplitudes: Some(encode_vector(psi.amplitudes())),
            matrix: None,
        }
    }

    pub fn density(rho: &DensityMatrix) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            kind: StateKind::Density,
            dim: rho.dim(),
            amplitudes: None,
            matrix: Some(encode_matrix(rho.matrix())),
        }
    }

    pub fn decode(&self) -> Result<RawState, String> {
        check_schema(&self.schema_version)?;
        match (self.kind, &self.amplitudes, &self.matrix) {
            (StateKind::Pure, Some(a), None) => {
                if a.is_empty() {
                    return Err("amplitudes: vector is empty".into());
                }
                Ok(RawState::Pure(decode_vector(a)))
            }
            (StateKind::Density, None, Some(m)) => Ok(RawState::Density(decode_matrix(m, "matrix")?)),
            (StateKind::Pure, _, _) => Err("a pure state needs `amplitudes` and no `matrix`".into()),
            (StateKind::Density, _, _) => Err("a density state needs `matrix` and no `amplitudes`".into()),
        }
    }

    pub fn validate(raw: RawState, dim: usize, tol: Tolerance) -> qmeas_core::Result<State> {
        let actual = match &raw {
            RawState::Pure(a) => (a.len(), a.len()),
            RawState::Density(m) => m.shape(),
        };
        if actual.0 != dim || actual.1 != dim {
            return Err(qmeas_core::Error::ShapeMismatch(format!(
                "state data does not match dim {dim}"
            )));
        }
        Ok(match raw {
            RawState::Pure(a) => State::Pure(PureState::new(a)?),
            RawState::Density(m) => State::Density(DensityMatrix::new(m, tol)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: String,
    pub kind: String,
    pub system_dim: usize,
    pub ancilla_dim: usize,
    /// Acts on system ⊗ ancilla, system index major.
    pub unitary: MatrixRows,
    pub ready_state: Vec<Pair>,
    pub local_pvm: Vec<OutcomeEntry>,
}

pub const MODEL_KIND: &str = "ancilla_model";

impl ModelFile {
    pub fn from_model(m: &AncillaModel) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            kind: MODEL_KIND.into(),
            system_dim: m.system_dim(),
            ancilla_dim: m.ancilla_dim(),
            unitary: encode_matrix(m.unitary()),
            ready_state: encode_vector(m.ready_state().amplitudes()),
            local_pvm: OperatorSetFile::from_pvm(m.local_pvm()).outcomes,
        }
    }

    pub fn to_model(&self, tol: Tolerance) -> Result<qmeas_core::Result<AncillaModel>, String> {
        check_schema(&self.schema_version)?;
        if self.kind != MODEL_KIND {
            return Err(format!("kind {:?} is not {MODEL_KIND:?}", self.kind));
        }
        let unitary = decode_matrix(&self.unitary, "unitary")?;
        let local = OperatorSetFile {
            schema_version: self.schema_version.clone(),
            kind: SetKind::Pvm,
            dim: self.ancilla_dim,
            outcomes: self.local_pvm.clone(),
        }
        .decode()?;
        let ready = decode_vector(&self.ready_state);
        Ok((|| {
            let pvm = PvmSet::new(local, tol)?;
            AncillaModel::new(self.system_dim, unitary, PureState::new(ready)?, pvm, tol)
        })())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FineToCoarse {
    pub fine: String,
    pub coarse: String,
}

/// Sidecar written next to a dilated PVM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingFile {
    pub schema_version: String,
    pub kind: String,
    pub original_dim: usize,
    pub enlarged_dim: usize,
    pub fine_to_coarse: Vec<FineToCoarse>,
    pub subspace_projector: MatrixRows,
}

pub const MAPPING_KIND: &str = "neumark_mapping";

impl MappingFile {
    pub fn from_dilation(d: &NeumarkDilation) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            kind: MAPPING_KIND.into(),
            original_dim: d.original_dim(),
            enlarged_dim: d.enlarged_dim(),
            fine_to_coarse: d
                .parent_map()
                .into_iter()
                .map(|(fine, coarse)| FineToCoarse { fine, coarse })
                .collect(),
            subspace_projector: encode_matrix(&d.subspace_projector()),
        }
    }
}

fn check_schema(version: &str) -> Result<(), String> {
    if version == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(format!(
            "unsupported schema_version {version:?}, expected {SCHEMA_VERSION:?}"
        ))
    }
}

/// File contents plus their SHA-256.
pub struct Loaded<T> {
    pub value: T,
    pub sha256: String,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::io(path, source))?;
    let value = serde_json::from_slice(&bytes).map_err(|e| CliError::parse(path, e.to_string()))?;
    Ok(Loaded {
        value,
        sha256: sha256_hex(&bytes),
    })
}

/// Writes `value` and returns the digest of the bytes written.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<String, CliError> {
    let bytes = json::to_vec(value).map_err(|e| CliError::parse(path, e.to_string()))?;
    fs::write(path, &bytes).map_err(|source| CliError::io(path, source))?;
    Ok(sha256_hex(&bytes))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
