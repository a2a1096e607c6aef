//! Numerical tolerances used across the crate.
//!
//! Every threshold has a single authoritative constant here. Routines that
//! validate their inputs also come in a `_with` variant accepting a
//! [`Tolerances`] value, so callers can tighten or relax individual checks
//! without recompiling.

/// Max |M(i,j) - conj(M(j,i))| for a matrix flagged Hermitian.
pub const HERMITIAN_ENTRY: f64 = 1e-14;

/// Hermiticity tolerance for eigensolver and density-matrix inputs.
pub const HERMITIAN_INPUT: f64 = 1e-12;

/// Max |tr(ρ) - 1| for a unit-trace density matrix.
pub const TRACE_ONE: f64 = 1e-10;

/// Eigenvalues of a density matrix may dip below zero by at most this much.
pub const PSD_EIGENVALUE: f64 = 1e-12;

/// Max |⟨ψ|ψ⟩ - 1| for a vector labeled normalized.
pub const STATE_NORM: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the cyclic Jacobi sweep stops.
pub const JACOBI_OFFDIAG: f64 = 1e-14;

/// |⟨J⟩| below this marks the mean-spin frame degenerate.
pub const DEGENERATE_MEAN_SPIN: f64 = 1e-12;

/// |⟨Jy⟩| above this rejects the single-angle x-z rotation.
pub const MEAN_SPIN_Y: f64 = 1e-10;

/// Allowed violation of c1²+c2² = 1 (and the other two pairs).
pub const PARAM_NORMALIZATION: f64 = 1e-10;

/// Radicands this far below zero are treated as rounding and clamped to 0.
pub const RADICAND_CLAMP: f64 = 1e-12;

/// Bundle of the input-validation tolerances, for callers that need
/// non-default thresholds.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub hermitian_input: f64,
    pub trace_one: f64,
    pub psd_eigenvalue: f64,
    pub state_norm: f64,
    pub degenerate_mean_spin: f64,
    pub mean_spin_y: f64,
    pub param_normalization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian_input: HERMITIAN_INPUT,
            trace_one: TRACE_ONE,
            psd_eigenvalue: PSD_EIGENVALUE,
            state_norm: STATE_NORM,
            degenerate_mean_spin: DEGENERATE_MEAN_SPIN,
            mean_spin_y: MEAN_SPIN_Y,
            param_normalization: PARAM_NORMALIZATION,
        }
    }
}

/// `sqrt` with clamping of tiny negative radicands.
///
/// Values in `[-RADICAND_CLAMP, 0)` arise from rounding in expressions like
/// ½ - c1·c2 at c1 = c2 = 1/√2 and are clamped to zero. Anything more
/// negative is a caller bug and panics in debug builds.
pub(crate) fn clamped_sqrt(v: f64) -> f64 {
    debug_assert!(v >= -RADICAND_CLAMP, "radicand {v} below clamp window");
    if v <= 0.0 {
        0.0
    } else {
        v.sqrt()
    }
}
