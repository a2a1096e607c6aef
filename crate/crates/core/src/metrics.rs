//! Frame-independent uncertainties, von Neumann entropies, squeezing
//! parameters, and the entropy↔squeezing inversion formulas.
//!
//! The composite uncertainties have closed forms in the superposition
//! constants,
//!
//! ```text
//! ΔJx′ = √(½ + c1·c2) · |c3·c5 + c4·c6|       ΔJy′ = √(½ - c1·c2)
//! ```
//!
//! which every numeric path here is checked against. Subsystem
//! uncertainties are identically ½. Since ΔJy′ depends only on the Schmidt
//! pair, it determines the reduced-state entropy, and so do the y-quadrature
//! squeezing parameters built from it; the x-quadrature admits no such
//! inversion because ΔJx′ mixes in the basis constants.

use crate::error::{Error, Result};
use crate::frame::{self, mean_spin};
use crate::linalg::{eig_hermitian, trace_product, ComplexMatrix, Subsystem};
use crate::spin::{single_atom_ops, two_atom_ops};
use crate::state::BipartiteParams;
use crate::tol::{self, clamped_sqrt};

/// Standard deviations of the two spin components transverse to ⟨J⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintyPair {
    pub djx: f64,
    pub djy: f64,
}

/// Kitagawa (ξ_s) and Wineland (ξ_R) squeezing parameters for N = 2.
///
/// A parameter below one signals squeezing in that quadrature. The ξ_R pair
/// diverges when the mean spin vanishes; the values are then `f64::INFINITY`
/// and `divergent` is set, never an error, so sweeps can traverse the
/// degenerate point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezingReport {
    pub xi_s_x: f64,
    pub xi_s_y: f64,
    pub xi_r_x: f64,
    pub xi_r_y: f64,
    pub divergent: bool,
}

/// Von Neumann entropies of the composite state and both subsystems, in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyReport {
    pub s_composite: f64,
    pub s_a: f64,
    pub s_b: f64,
}

/// Entropy unit selector for [`von_neumann_entropy_in`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntropyUnit {
    Bits,
    Nats,
}

/// Both Schmidt-square candidates recovered from an uncertainty value,
/// together with their common entropy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DjyInversion {
    pub entropy: f64,
    /// The two (c1², c2²) branches; swapping the sign swaps the pair, so
    /// both yield the same entropy.
    pub roots: [(f64, f64); 2],
}

/// Closed-form composite uncertainties.
///
/// The x-value is returned as an absolute value: a standard deviation is
/// nonnegative, and signed basis constants can make c3·c5 + c4·c6 negative.
pub fn composite_uncertainties_closed(p: &BipartiteParams) -> UncertaintyPair {
    let c1c2 = p.c1() * p.c2();
    let basis_overlap = p.c3() * p.c5() + p.c4() * p.c6();
    UncertaintyPair {
        djx: clamped_sqrt(0.5 + c1c2) * basis_overlap.abs(),
        djy: clamped_sqrt(0.5 - c1c2),
    }
}

/// Composite uncertainties by brute-force matrix contraction in the rotated
/// frame. Fails with [`Error::DegenerateMeanSpin`] when the mean spin
/// vanishes (only ΔJx′ needs the frame; ΔJy′ is frame-free since Jy′ = Jy).
pub fn composite_uncertainties_numeric(p: &BipartiteParams) -> Result<UncertaintyPair> {
    let ops = two_atom_ops();
    let psi = p.state_vector();
    let djx_sq = frame::rotated_variance_x(&psi, &ops)?;
    let djy_sq = psi.expectation(&ops.jy.matmul(&ops.jy));
    Ok(UncertaintyPair {
        djx: clamped_sqrt(djx_sq),
        djy: clamped_sqrt(djy_sq),
    })
}

/// Subsystem uncertainties: identically (½, ½) for every valid parameter
/// set, independent of entanglement.
pub fn subsystem_uncertainties(_p: &BipartiteParams, _which: Subsystem) -> UncertaintyPair {
    UncertaintyPair { djx: 0.5, djy: 0.5 }
}

/// Subsystem uncertainties through the reduced density matrix and the
/// rotated-frame moment formula. Reproduces (½, ½) whenever the subsystem
/// frame is non-degenerate (it degenerates at c1² = c2²).
pub fn subsystem_uncertainties_numeric(
    p: &BipartiteParams,
    which: Subsystem,
) -> Result<UncertaintyPair> {
    let ops = single_atom_ops();
    let rho = p.reduced_density(which);
    let djx_sq = frame::rotated_variance_x_density(&rho, &ops)?;
    let djy_sq = trace_product(&rho, &ops.jy.matmul(&ops.jy));
    Ok(UncertaintyPair {
        djx: clamped_sqrt(djx_sq),
        djy: clamped_sqrt(djy_sq),
    })
}

/// Von Neumann entropy S(ρ) = -Σ λᵢ log₂ λᵢ in bits, with 0·log 0 := 0.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    von_neumann_entropy_in(rho, EntropyUnit::Bits)
}

pub fn von_neumann_entropy_in(rho: &ComplexMatrix, unit: EntropyUnit) -> Result<f64> {
    let defect = rho.hermiticity_defect();
    if defect > tol::HERMITIAN_INPUT {
        return Err(Error::NotDensityMatrix(format!(
            "hermiticity defect {defect:.3e}"
        )));
    }
    let tr_err = (rho.trace().re - 1.0).abs();
    if tr_err > tol::TRACE_ONE {
        return Err(Error::NotDensityMatrix(format!(
            "trace differs from one by {tr_err:.3e}"
        )));
    }
    let eigs = eig_hermitian(rho)?;
    if let Some(&worst) = eigs.first() {
        if worst < -tol::PSD_EIGENVALUE {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {worst:.3e}"
            )));
        }
    }
    let s_bits: f64 = eigs
        .iter()
        .filter(|&&lambda| lambda > 0.0)
        .map(|&lambda| -lambda * lambda.log2())
        .sum();
    Ok(match unit {
        EntropyUnit::Bits => s_bits,
        EntropyUnit::Nats => s_bits * std::f64::consts::LN_2,
    })
}

/// Entropies of the composite state and both reduced states. The composite
/// entropy is computed from the 4x4 projector and serves as a pure-state
/// zero check; the subsystem entropies equal -c1²log₂c1² - c2²log₂c2².
pub fn entropy_report(p: &BipartiteParams) -> Result<EntropyReport> {
    let s_composite = von_neumann_entropy(&p.state_vector().projector())?;
    let s_a = von_neumann_entropy(&p.reduced_density(Subsystem::A))?;
    let s_b = von_neumann_entropy(&p.reduced_density(Subsystem::B))?;
    Ok(EntropyReport {
        s_composite,
        s_a,
        s_b,
    })
}

/// |⟨J⟩| from the closed-form mean-spin components, defined for every
/// parameter set (including degenerate frames, where it is zero).
pub fn mean_spin_norm_closed(p: &BipartiteParams) -> f64 {
    let amps = p.amplitudes();
    let jx = (amps.a + amps.d) * (amps.b + amps.c);
    let jz = amps.a * amps.a - amps.d * amps.d;
    (jx * jx + jz * jz).sqrt()
}

/// Spin and spectroscopic squeezing parameters for the two-atom state
/// (N = 2, j = 1): ξ_s = √2·ΔJ′ and ξ_R = √2·ΔJ′/|⟨J⟩|.
pub fn squeezing_report(p: &BipartiteParams) -> SqueezingReport {
    let u = composite_uncertainties_closed(p);
    let norm = mean_spin_norm_closed(p);
    let sqrt2 = std::f64::consts::SQRT_2;
    let xi_s_x = sqrt2 * u.djx;
    let xi_s_y = sqrt2 * u.djy;
    if norm < tol::DEGENERATE_MEAN_SPIN {
        SqueezingReport {
            xi_s_x,
            xi_s_y,
            xi_r_x: f64::INFINITY,
            xi_r_y: f64::INFINITY,
            divergent: true,
        }
    } else {
        SqueezingReport {
            xi_s_x,
            xi_s_y,
            xi_r_x: xi_s_x / norm,
            xi_r_y: xi_s_y / norm,
            divergent: false,
        }
    }
}

fn entropy_of_schmidt_squares(lambda1: f64, lambda2: f64) -> f64 {
    let mut s = 0.0;
    for lambda in [lambda1, lambda2] {
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    s
}

/// Recover the Schmidt squares and the subsystem entropy from ΔJy′:
/// c1² = ½ ± ΔJy′·√(1 - ΔJy′²), entropy symmetric under the branch swap.
pub fn entropy_from_djy(djy: f64) -> Result<DjyInversion> {
    if !(0.0..=1.0).contains(&djy) {
        return Err(Error::DomainError(format!(
            "ΔJy′ = {djy} outside [0, 1]"
        )));
    }
    let half_gap = djy * clamped_sqrt(1.0 - djy * djy);
    let plus = (0.5 + half_gap).min(1.0);
    let minus = (0.5 - half_gap).max(0.0);
    Ok(DjyInversion {
        entropy: entropy_of_schmidt_squares(plus, minus),
        roots: [(plus, minus), (minus, plus)],
    })
}

/// Subsystem entropy from the spin squeezing parameter ξ_sy, using
/// ΔJy′ = ξ·√(j/2) for collective spin j (j = 1 for the two-atom case).
pub fn entropy_from_xi_s(xi_s_y: f64, j: f64) -> Result<f64> {
    if j <= 0.0 || !j.is_finite() {
        return Err(Error::DomainError(format!("spin j = {j} must be positive")));
    }
    let djy = xi_s_y * (j / 2.0).sqrt();
    if !(0.0..=1.0).contains(&djy) {
        return Err(Error::DomainError(format!(
            "ξ_sy = {xi_s_y} maps to ΔJy′ = {djy} outside [0, 1]"
        )));
    }
    Ok(entropy_from_djy(djy)?.entropy)
}

/// Subsystem entropy from the spectroscopic squeezing parameter ξ_Ry and
/// the mean-spin norm, using ΔJy′ = ξ·|⟨J⟩|/√2.
pub fn entropy_from_xi_r(xi_r_y: f64, j_norm: f64) -> Result<f64> {
    if j_norm <= tol::DEGENERATE_MEAN_SPIN {
        return Err(Error::DegenerateMeanSpin);
    }
    let djy = xi_r_y * j_norm / std::f64::consts::SQRT_2;
    if !(0.0..=1.0).contains(&djy) {
        return Err(Error::DomainError(format!(
            "ξ_Ry·|⟨J⟩| = {v} maps to ΔJy′ = {djy} outside [0, 1]",
            v = xi_r_y * j_norm
        )));
    }
    Ok(entropy_from_djy(djy)?.entropy)
}

/// ⟨Jz′⟩ of the composite state; after the aligning rotation this equals
/// |⟨J⟩|, which fixes the Robertson lower bound ΔJx′·ΔJy′ ≥ ½|⟨Jz′⟩|.
pub fn rotated_jz_mean(p: &BipartiteParams) -> Result<f64> {
    let ops = two_atom_ops();
    let frame = mean_spin(&p.state_vector(), &ops)?;
    Ok(frame.norm)
}
