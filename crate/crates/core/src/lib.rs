//! Gabor analysis and noncommutative geometry on exactly computable models.
//!
//! Everything here is built over finite abelian groups `Z_{N1} × … × Z_{Nd}`,
//! where time-frequency analysis becomes exact finite linear algebra: twisted
//! group algebras of phase-space lattices, Gabor frame operators and canonical
//! (Parseval) windows, Heisenberg-module inner products, Dirac-type operators
//! built from phase-space weights, and `QC^k` certification of window
//! families. Discretized ℝ-models (truncation boxes, ladders of group sizes)
//! and exact `Z[1/p]` solenoid lattices connect the finite substrate to the
//! noncommutative 2-torus and to noncommutative solenoids.

pub mod algebra;
pub mod gabor;
pub mod heisenberg;
pub mod io;
pub mod lca;
pub mod padic;
pub mod phase;
pub mod spectral;
pub mod torus;
pub mod weights;

use thiserror::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex vector over a finite group.
pub type CVec = nalgebra::DVector<C64>;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("moduli mismatch between operands")]
    ModuliMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattice mismatch between operands")]
    LatticeMismatch,
    #[error("element set is not closed under the group law")]
    NotASubgroup,
    #[error("not a frame: lower bound {lower:.3e} is below tolerance {tol:.3e}")]
    NotAFrame { lower: f64, tol: f64 },
    #[error("operator is not invertible")]
    NotInvertible,
    #[error("coefficient support violates the target lattice")]
    SupportViolation,
    #[error("reference window must be nonzero")]
    ZeroWindow,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("spectral-triple incompatible: {0}")]
    Incompatible(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Largest absolute entry of a matrix; the residual norm used by the
/// identity checks in this crate.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of a vector.
pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `Σ u_i conj(w_i)` — the inner product, linear in the first slot.
pub fn inner(u: &CVec, w: &CVec) -> C64 {
    u.iter().zip(w.iter()).map(|(a, b)| a * b.conj()).sum()
}
