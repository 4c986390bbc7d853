//! Fixtures shared by the benchmarks.

use qmeas_core::measurement::default_labels;
use qmeas_core::{Complex64, ComplexMatrix, PovmSet, Tolerance};

/// Three symmetric rank-one effects `(2/3)|μ_i⟩⟨μ_i|` on a qubit.
pub fn trine() -> PovmSet {
    let ops = (0..3).map(|i| {
        let t = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
        let mu = [Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0)];
        ComplexMatrix::outer(&mu, &mu).scale_real(2.0 / 3.0)
    });
    PovmSet::new(default_labels(ops), Tolerance::default()).expect("trine is a POVM")
}
