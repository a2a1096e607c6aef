//! General entangled pure state of two two-level atoms.
//!
//! The state is fixed by six real superposition constants: Schmidt
//! coefficients (c1, c2) and two local-basis pairs (c3, c4) and (c5, c6),
//! each pair normalized to one. In the computational basis
//! {|½½⟩, |½,-½⟩, |-½,½⟩, |-½,-½⟩} the amplitudes are
//!
//! ```text
//! A = c1·c3·c5 + c2·c4·c6      B = c1·c3·c6 - c2·c4·c5
//! C = c1·c4·c5 - c2·c3·c6      D = c1·c4·c6 + c2·c3·c5
//! ```
//!
//! with A² + B² + C² + D² = 1 following from the pair normalizations.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, Subsystem};
use crate::tol;

/// The six real superposition constants, validated at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BipartiteParams {
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
    c5: f64,
    c6: f64,
}

/// Computational-basis coefficients of the two-atom state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitudes {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

fn check_pair(label: &str, x: f64, y: f64) -> Result<()> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidParams(format!("{label} must be finite")));
    }
    let defect = (x * x + y * y - 1.0).abs();
    if defect > tol::PARAM_NORMALIZATION {
        return Err(Error::InvalidParams(format!(
            "{label} violates normalization by {defect:.3e}"
        )));
    }
    Ok(())
}

fn derived_companion(label: &str, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + tol::PARAM_NORMALIZATION {
        return Err(Error::InvalidParams(format!(
            "{label} = {x} lies outside [-1, 1]"
        )));
    }
    Ok((1.0 - x * x).max(0.0).sqrt())
}

impl BipartiteParams {
    /// Full six-constant constructor; accepts signed values.
    ///
    /// Inputs violating any of the three pair normalizations by more than
    /// [`tol::PARAM_NORMALIZATION`] are rejected rather than renormalized.
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64, c5: f64, c6: f64) -> Result<Self> {
        check_pair("(c1, c2)", c1, c2)?;
        check_pair("(c3, c4)", c3, c4)?;
        check_pair("(c5, c6)", c5, c6)?;
        Ok(Self {
            c1,
            c2,
            c3,
            c4,
            c5,
            c6,
        })
    }

    /// Constructor over the free constants (c1, c3, c5), deriving the
    /// nonnegative companions c2 = +√(1-c1²), c4 = +√(1-c3²),
    /// c6 = +√(1-c5²). This is the branch the parameter sweeps use.
    pub fn from_schmidt_basis(c1: f64, c3: f64, c5: f64) -> Result<Self> {
        let c2 = derived_companion("c1", c1)?;
        let c4 = derived_companion("c3", c3)?;
        let c6 = derived_companion("c5", c5)?;
        Self::new(c1, c2, c3, c4, c5, c6)
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }

    pub fn c4(&self) -> f64 {
        self.c4
    }

    pub fn c5(&self) -> f64 {
        self.c5
    }

    pub fn c6(&self) -> f64 {
        self.c6
    }

    /// The computational-basis coefficients A, B, C, D.
    pub fn amplitudes(&self) -> Amplitudes {
        let Self {
            c1,
            c2,
            c3,
            c4,
            c5,
            c6,
        } = *self;
        Amplitudes {
            a: c1 * c3 * c5 + c2 * c4 * c6,
            b: c1 * c3 * c6 - c2 * c4 * c5,
            c: c1 * c4 * c5 - c2 * c3 * c6,
            d: c1 * c4 * c6 + c2 * c3 * c5,
        }
    }

    /// The four-dimensional ket as a normalized state vector.
    pub fn state_vector(&self) -> StateVector {
        self.amplitudes().state_vector()
    }

    /// Reduced density matrix of one atom, built from the Schmidt form:
    /// ρ = c1²|v⟩⟨v| + c2²|w⟩⟨w| with the local basis pair of that atom.
    /// Its eigenvalues are {c1², c2²} regardless of the basis constants.
    pub fn reduced_density(&self, keep: Subsystem) -> ComplexMatrix {
        let (p, q) = match keep {
            Subsystem::A => (self.c3, self.c4),
            Subsystem::B => (self.c5, self.c6),
        };
        let v = StateVector::from_real(&[p, q]);
        let w = StateVector::from_real(&[q, -p]);
        v.projector()
            .scale_re(self.c1 * self.c1)
            .add(&w.projector().scale_re(self.c2 * self.c2))
    }
}

impl Amplitudes {
    pub fn sum_of_squares(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Amplitudes [A, B, C, D] in the fixed basis ordering.
    pub fn state_vector(&self) -> StateVector {
        StateVector::from_real(&[self.a, self.b, self.c, self.d])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, partial_trace};

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn symmetric(c1: f64) -> BipartiteParams {
        BipartiteParams::from_schmidt_basis(c1, SQRT_HALF, SQRT_HALF).unwrap()
    }

    #[test]
    fn product_state_amplitudes() {
        let p = BipartiteParams::new(1.0, 0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        let amps = p.amplitudes();
        assert_eq!((amps.a, amps.b, amps.c, amps.d), (1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn fully_symmetric_amplitudes() {
        let s = SQRT_HALF;
        let p = BipartiteParams::new(s, s, s, s, s, s).unwrap();
        let amps = p.amplitudes();
        assert!((amps.a - s).abs() < 1e-15);
        assert!(amps.b.abs() < 1e-15);
        assert!(amps.c.abs() < 1e-15);
        assert!((amps.d - s).abs() < 1e-15);
        assert!((amps.sum_of_squares() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_basis_amplitudes_match_scalar_oracle() {
        // c3 = 3/8, c4 = √55/8, c5 = 4/7, c6 = √33/7 at c1 = 0.5; expected
        // values frozen from a direct scalar evaluation of the four products.
        let p = BipartiteParams::from_schmidt_basis(0.5, 3.0 / 8.0, 4.0 / 7.0).unwrap();
        assert!((p.c4() - 55.0f64.sqrt() / 8.0).abs() < 1e-15);
        assert!((p.c6() - 33.0f64.sqrt() / 7.0).abs() < 1e-15);
        let amps = p.amplitudes();
        assert!((amps.a - 0.765984314799045).abs() < 1e-12);
        assert!((amps.b - -0.304886092634343).abs() < 1e-12);
        assert!((amps.c - -0.0016502604001423782).abs() < 1e-12);
        assert!((amps.d - 0.5659591651706082).abs() < 1e-12);
        assert!((amps.sum_of_squares() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_vector_is_normalized() {
        for c1 in [0.1, 0.37, 0.6, 0.92] {
            let psi = symmetric(c1).state_vector();
            assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        }
        let e0 = Amplitudes {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
        }
        .state_vector();
        assert_eq!(e0, StateVector::basis_state(4, 0));
    }

    #[test]
    fn reduced_density_of_separable_state_is_pure() {
        let p = BipartiteParams::new(1.0, 0.0, 0.6, 0.8, 0.9, -0.43588989435406733).unwrap();
        let eigs = eig_hermitian(&p.reduced_density(Subsystem::A)).unwrap();
        assert!(eigs[0].abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_of_maximally_entangled_state() {
        let p = symmetric(SQRT_HALF);
        for keep in [Subsystem::A, Subsystem::B] {
            let eigs = eig_hermitian(&p.reduced_density(keep)).unwrap();
            assert!((eigs[0] - 0.5).abs() < 1e-10);
            assert!((eigs[1] - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn reduced_density_eigenvalues_are_schmidt_squares() {
        let p = symmetric(0.6);
        let eigs = eig_hermitian(&p.reduced_density(Subsystem::A)).unwrap();
        assert!((eigs[0] - 0.36).abs() < 1e-10);
        assert!((eigs[1] - 0.64).abs() < 1e-10);
    }

    #[test]
    fn reduced_density_matches_partial_trace_oracle() {
        for c1 in [0.15, 0.5, 0.83] {
            let p = BipartiteParams::from_schmidt_basis(c1, 0.3, -0.72).unwrap();
            let rho = p.state_vector().projector();
            for keep in [Subsystem::A, Subsystem::B] {
                let from_trace = partial_trace(&rho, keep).unwrap();
                let closed = p.reduced_density(keep);
                assert!(closed.max_abs_diff(&from_trace) < 1e-12);
            }
        }
    }

    #[test]
    fn schmidt_eigenvalues_ignore_basis_constants() {
        let p1 = BipartiteParams::from_schmidt_basis(0.44, 0.31, 0.95).unwrap();
        let p2 = BipartiteParams::from_schmidt_basis(0.44, -0.87, 0.12).unwrap();
        let e1 = eig_hermitian(&p1.reduced_density(Subsystem::A)).unwrap();
        let e2 = eig_hermitian(&p2.reduced_density(Subsystem::B)).unwrap();
        assert!((e1[0] - e2[0]).abs() < 1e-10);
        assert!((e1[1] - e2[1]).abs() < 1e-10);
    }

    #[test]
    fn jz_expectation_matches_amplitude_form() {
        let ops = crate::spin::two_atom_ops();
        for c1 in [0.2, 0.55, 0.9] {
            let p = BipartiteParams::from_schmidt_basis(c1, 0.25, 0.8).unwrap();
            let amps = p.amplitudes();
            let jz = p.state_vector().expectation(&ops.jz);
            assert!((jz - (amps.a * amps.a - amps.d * amps.d)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_denormalized_constants() {
        assert!(matches!(
            BipartiteParams::new(0.6, 0.9, 1.0, 0.0, 1.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BipartiteParams::new(0.6, 0.8, 0.5, 0.5, 1.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BipartiteParams::from_schmidt_basis(1.2, 0.5, 0.5),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BipartiteParams::new(f64::NAN, 1.0, 1.0, 0.0, 1.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn accepts_rounding_level_defects() {
        // 1e-12 off normalization is absorbed by the tolerance.
        let c2 = (1.0f64 - 0.36).sqrt() + 1e-13;
        assert!(BipartiteParams::new(0.6, c2, 1.0, 0.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn signed_constants_are_accepted() {
        let p = BipartiteParams::new(-0.6, 0.8, 0.28, -0.96, -1.0, 0.0).unwrap();
        assert!((p.state_vector().norm_sq() - 1.0).abs() < 1e-12);
    }
}
