use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the state, product-vector and invariant machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace must be real and positive, got {0}")]
    InvalidTrace(Complex64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid tolerance profile: {0}")]
    InvalidTolerance(&'static str),

    #[error("zero vector where a nonzero projective vector is required")]
    ZeroVector,

    #[error("product vectors {i} and {j} are not orthogonal (overlap {overlap:.3e})")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },

    #[error("orthogonal complement is not completely entangled: {0}")]
    NotUnextendible(String),

    #[error("constraint vectors are linearly dependent")]
    DependentConstraints,

    #[error("product-vector search is indeterminate: {0}")]
    Indeterminate(String),

    #[error("degenerate quintuple: |Δ({0},{1},{2})| = {3:.3e} on side {4}")]
    DegenerateQuintuple(usize, usize, usize, f64, char),

    #[error("invariant {index} is not real: {value}")]
    NonRealInvariant { index: usize, value: Complex64 },

    #[error("invariant {index} = {value} is too close to 0 or 1 to classify{}", permutation.map(|p| format!(" (ordering {p:?})")).unwrap_or_default())]
    IndeterminateSymbol {
        index: usize,
        value: f64,
        permutation: Option<[usize; 6]>,
    },

    #[error("rational action undefined: factor {0} vanishes")]
    DenominatorVanishes(&'static str),

    #[error("quadruple ({0}, {1}, {2}, {3}) lies outside the box p×p×N×p")]
    OutOfBox(f64, f64, f64, f64),

    #[error("unsupported state class: {0}")]
    UnsupportedClass(String),

    #[error("no ordering of the kernel sextuple has symbol ppPNNp")]
    NoPpPNNpOrdering,

    #[error("closed-form cubic root z{index} = {closed} disagrees with numeric roots (nearest {numeric}, relative error {error:.3e})")]
    RootMismatch {
        index: usize,
        closed: f64,
        numeric: f64,
        error: f64,
    },

    #[error("cubic root ordering violated: {0}")]
    RootOrdering(String),

    #[error("reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("state is not entangled: {0}")]
    NotEntangled(String),

    #[error("state is not PPT: {0}")]
    NotPpt(String),

    #[error("no combination of C1 and C3 satisfies am = dj with the required ranks")]
    DegenerateCombination,

    #[error("reduction step '{step}' failed: {detail}")]
    ReductionStep { step: &'static str, detail: String },

    #[error("internal defect: {0}")]
    Defect(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures caused by numerical borderline cases rather than bad input.
    pub fn is_numeric_indeterminate(&self) -> bool {
        matches!(
            self,
            Error::Indeterminate(_) | Error::IndeterminateSymbol { .. } | Error::NonRealInvariant { .. }
        )
    }
}
