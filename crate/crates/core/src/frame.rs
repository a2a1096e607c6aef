//! Mean spin vector and the rotation aligning it with the z′ axis.
//!
//! For the state family built by [`crate::state`] the mean spin vector lies
//! in the x-z plane, so a single rotation angle θ with
//! cosθ = ⟨Jz⟩/|⟨J⟩| and sinθ = ⟨Jx⟩/|⟨J⟩| carries ⟨J⟩ onto +z′:
//!
//! ```text
//! Jx′ = Jx·cosθ - Jz·sinθ      Jy′ = Jy      Jz′ = Jx·sinθ + Jz·cosθ
//! ```
//!
//! Inputs whose mean spin leaves the x-z plane are rejected; a vanishing
//! mean spin marks the frame degenerate (the rotation is then undefined,
//! while the closed-form uncertainties remain finite).

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, trace_product};
use crate::spin::SpinOperatorSet;
use crate::tol::{self, Tolerances};

/// Mean spin components, their norm, and the rotation angle onto z′.
///
/// When `degenerate` is set the angle is fixed to the identity rotation
/// (cosθ = 1, sinθ = 0) and must not be used; numeric rotated-frame paths
/// refuse degenerate frames.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanSpinFrame {
    pub jx_mean: f64,
    pub jy_mean: f64,
    pub jz_mean: f64,
    pub norm: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub degenerate: bool,
}

fn frame_from_means(jx: f64, jy: f64, jz: f64, tols: &Tolerances) -> Result<MeanSpinFrame> {
    if jy.abs() > tols.mean_spin_y {
        return Err(Error::MeanSpinOutOfPlane(jy));
    }
    let norm = (jx * jx + jz * jz).sqrt();
    let degenerate = norm < tols.degenerate_mean_spin;
    let (cos_theta, sin_theta) = if degenerate {
        (1.0, 0.0)
    } else {
        (jz / norm, jx / norm)
    };
    Ok(MeanSpinFrame {
        jx_mean: jx,
        jy_mean: jy,
        jz_mean: jz,
        norm,
        cos_theta,
        sin_theta,
        degenerate,
    })
}

/// Mean spin frame of a normalized pure state.
pub fn mean_spin(state: &StateVector, ops: &SpinOperatorSet) -> Result<MeanSpinFrame> {
    mean_spin_with(state, ops, &Tolerances::default())
}

pub fn mean_spin_with(
    state: &StateVector,
    ops: &SpinOperatorSet,
    tols: &Tolerances,
) -> Result<MeanSpinFrame> {
    let defect = (state.norm_sq() - 1.0).abs();
    if defect > tols.state_norm {
        return Err(Error::NotNormalized(defect));
    }
    frame_from_means(
        state.expectation(&ops.jx),
        state.expectation(&ops.jy),
        state.expectation(&ops.jz),
        tols,
    )
}

/// Mean spin frame of a unit-trace density matrix.
pub fn mean_spin_density(rho: &ComplexMatrix, ops: &SpinOperatorSet) -> Result<MeanSpinFrame> {
    mean_spin_density_with(rho, ops, &Tolerances::default())
}

pub fn mean_spin_density_with(
    rho: &ComplexMatrix,
    ops: &SpinOperatorSet,
    tols: &Tolerances,
) -> Result<MeanSpinFrame> {
    let tr_err = (rho.trace().re - 1.0).abs();
    if tr_err > tols.trace_one {
        return Err(Error::TraceNotOne(tr_err));
    }
    frame_from_means(
        trace_product(rho, &ops.jx),
        trace_product(rho, &ops.jy),
        trace_product(rho, &ops.jz),
        tols,
    )
}

/// Operators in the rotated frame where ⟨J⟩ points along +z′.
///
/// The rotation is orthogonal, so the commutation relations and
/// Jx² + Jy² + Jz² carry over unchanged.
pub fn rotated_ops(frame: &MeanSpinFrame, ops: &SpinOperatorSet) -> Result<SpinOperatorSet> {
    if frame.degenerate {
        return Err(Error::DegenerateMeanSpin);
    }
    let (c, s) = (frame.cos_theta, frame.sin_theta);
    let jx = ops.jx.scale_re(c).sub(&ops.jz.scale_re(s));
    let jy = ops.jy.clone();
    let jz = ops.jx.scale_re(s).add(&ops.jz.scale_re(c));
    Ok(SpinOperatorSet::from_xyz(jx, jy, jz, ops.n_atoms()))
}

/// ⟨Jx′²⟩ of a pure state, combined from the unrotated second moments:
///
/// ```text
/// ⟨Jx′²⟩ = [⟨Jx²⟩⟨Jz⟩² + ⟨Jz²⟩⟨Jx⟩² - ⟨JxJz + JzJx⟩⟨Jx⟩⟨Jz⟩] / |⟨J⟩|²
/// ```
pub fn rotated_variance_x(state: &StateVector, ops: &SpinOperatorSet) -> Result<f64> {
    let frame = mean_spin(state, ops)?;
    let moments = SecondMoments {
        xx: state.expectation(&ops.jx.matmul(&ops.jx)),
        zz: state.expectation(&ops.jz.matmul(&ops.jz)),
        xz: state.expectation(&ops.jx.anticommutator(&ops.jz)),
    };
    combine_rotated_variance(&frame, &moments)
}

/// Density-matrix counterpart of [`rotated_variance_x`], used for the
/// reduced single-atom states.
pub fn rotated_variance_x_density(rho: &ComplexMatrix, ops: &SpinOperatorSet) -> Result<f64> {
    let frame = mean_spin_density(rho, ops)?;
    let moments = SecondMoments {
        xx: trace_product(rho, &ops.jx.matmul(&ops.jx)),
        zz: trace_product(rho, &ops.jz.matmul(&ops.jz)),
        xz: trace_product(rho, &ops.jx.anticommutator(&ops.jz)),
    };
    combine_rotated_variance(&frame, &moments)
}

struct SecondMoments {
    xx: f64,
    zz: f64,
    xz: f64,
}

fn combine_rotated_variance(frame: &MeanSpinFrame, m: &SecondMoments) -> Result<f64> {
    if frame.degenerate {
        return Err(Error::DegenerateMeanSpin);
    }
    let (x, z) = (frame.jx_mean, frame.jz_mean);
    let norm_sq = frame.norm * frame.norm;
    Ok((m.xx * z * z + m.zz * x * x - m.xz * x * z) / norm_sq)
}

/// Convenience check used by tests: the frame invariant
/// cos²θ + sin²θ = 1 and cosθ = ⟨Jz⟩/|⟨J⟩| for non-degenerate frames.
pub fn frame_consistent(frame: &MeanSpinFrame) -> bool {
    let unit = (frame.cos_theta * frame.cos_theta + frame.sin_theta * frame.sin_theta - 1.0).abs()
        <= 1e-12;
    if frame.degenerate {
        return unit;
    }
    unit && (frame.cos_theta - frame.jz_mean / frame.norm).abs() <= tol::DEGENERATE_MEAN_SPIN
}
