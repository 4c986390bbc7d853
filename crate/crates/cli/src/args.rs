use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qmeas_core::Tolerance;

#[derive(Parser, Debug)]
#[command(name = "qmeas", version, about = "Validate, apply and dilate quantum measurements")]
pub struct Cli {
    /// Add `wall_time_seconds` to the report. Reports are otherwise
    /// byte-identical across runs.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an operator-set file against the PVM, POVM or Kraus axioms.
    Validate(ValidateArgs),
    /// Outcome distribution of a state, with optional post-measurement
    /// state and seeded sampling.
    Measure(MeasureArgs),
    /// Build the unambiguous-discrimination POVM for two pure states.
    Discriminate(DiscriminateArgs),
    /// Dilate a POVM to a PVM on an enlarged space.
    Dilate(DilateArgs),
    /// Realize a POVM as a unitary on system ⊗ ancilla plus a local PVM.
    Realize(RealizeArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct TolArgs {
    /// Absolute tolerance.
    #[arg(long, default_value_t = Tolerance::DEFAULT_ATOL)]
    pub tol_abs: f64,

    /// Relative tolerance, scaled by the operator norm proxy.
    #[arg(long, default_value_t = Tolerance::DEFAULT_RTOL)]
    pub tol_rel: f64,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Operator-set file.
    pub input: PathBuf,

    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    /// Operator-set file.
    pub set: PathBuf,

    /// State file.
    pub state: PathBuf,

    /// Treat a pure state as the density matrix |ψ⟩⟨ψ|.
    #[arg(long)]
    pub mixed: bool,

    /// Report the post-measurement state for this outcome label.
    #[arg(long, value_name = "LABEL")]
    pub post: Option<String>,

    /// Draw this many seeded samples from the distribution.
    #[arg(long, value_name = "N")]
    pub sample: Option<u64>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug)]
pub struct DiscriminateArgs {
    /// Pure state file for ψ.
    #[arg(long)]
    pub psi: PathBuf,

    /// Pure state file for φ.
    #[arg(long)]
    pub phi: PathBuf,

    /// Scale of the conclusive effects; defaults to the largest feasible value.
    #[arg(long)]
    pub a: Option<f64>,

    /// Seeded trials per ground truth (ψ uses `seed`, φ uses `seed + 1`).
    #[arg(long, default_value_t = 0)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug)]
pub struct DilateArgs {
    /// POVM file (PVM and Kraus files are accepted through their effects).
    pub input: PathBuf,

    /// Where to write the enlarged-space PVM.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Where to write the fine-to-coarse mapping; defaults to the `--out`
    /// path with extension `mapping.json`.
    #[arg(long, requires = "out")]
    pub mapping: Option<PathBuf>,

    /// Random states on which dilated and direct statistics are compared.
    #[arg(long, default_value_t = 20)]
    pub verify_trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    /// POVM or Kraus file; a POVM uses principal square roots.
    pub input: PathBuf,

    /// Where to write the ancilla model.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub tol: TolArgs,
}
