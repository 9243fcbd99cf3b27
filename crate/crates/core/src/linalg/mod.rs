//! Exact rational linear algebra for verdicts on integer data, and floating
//! spectra where irrational character values force it.

mod exact;
mod spectral;

pub use exact::{
    as_integer, exact_nullspace, exact_rank, exact_solve, integer_eigenvalue_multiplicity, integer_rank,
    is_nonnegative, rat, ratio, Rational, RationalMatrix, SolutionSet,
};
pub use spectral::{
    cayley_spectrum_from_characters, character_eigenvalues, float_rank, float_rank_real, float_spectrum,
    float_spectrum_of_integers, Spectrum, SpectrumEntry, CHARACTER_IMAG_TOL, DEFAULT_RANK_TOL, MERGE_TOL,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("system is inconsistent (certificate row combination {certificate:?})")]
    Inconsistent { certificate: Vec<Rational> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("eigenvalue with imaginary part {imag:.3e}")]
    NonRealEigenvalue { imag: f64 },
    #[error("connection set is not a union of conjugacy classes")]
    NotNormal,
    #[error("character table does not fit the group: {0}")]
    TableMismatch(String),
}
