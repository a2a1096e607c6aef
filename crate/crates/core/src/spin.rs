//! Pseudo-spin operators for two-level atoms and their collective sums.
//!
//! Single-atom operators act on the {|½⟩, |-½⟩} basis with ħ = 1, so
//! `jz = diag(½, -½)` and `jx`, `jy` are half the Pauli matrices. Collective
//! operators for `N` atoms are sums of single-atom operators tensor-padded
//! with identities; atom 0 is the leftmost (most significant) factor, so
//! basis index 0 is |½⟩⊗…⊗|½⟩.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{kron, C64, ComplexMatrix};

/// Largest ensemble the dense builder accepts (2^10 = 1024 dimensional).
pub const MAX_ATOMS: usize = 10;

/// Number of atoms and the derived collective spin quantum number j = N/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnsembleSpec {
    n_atoms: usize,
}

impl EnsembleSpec {
    pub fn new(n_atoms: usize) -> Result<Self> {
        if n_atoms == 0 || n_atoms > MAX_ATOMS {
            return Err(Error::EnsembleTooLarge(n_atoms, MAX_ATOMS));
        }
        Ok(Self { n_atoms })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// j = N/2.
    pub fn spin_j(&self) -> f64 {
        self.n_atoms as f64 / 2.0
    }

    /// Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        1 << self.n_atoms
    }
}

/// The five operators Ĵx, Ĵy, Ĵz, Ĵ+, Ĵ- as explicit matrices.
#[derive(Clone, Debug)]
pub struct SpinOperatorSet {
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
    pub jplus: ComplexMatrix,
    pub jminus: ComplexMatrix,
    n_atoms: usize,
}

impl SpinOperatorSet {
    pub(crate) fn from_xyz(
        jx: ComplexMatrix,
        jy: ComplexMatrix,
        jz: ComplexMatrix,
        n_atoms: usize,
    ) -> Self {
        let i = C64::new(0.0, 1.0);
        let jplus = jx.add(&jy.scale(i));
        let jminus = jx.sub(&jy.scale(i));
        Self {
            jx,
            jy,
            jz,
            jplus,
            jminus,
            n_atoms,
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.jx.rows()
    }

    /// Ĵ² = Ĵx² + Ĵy² + Ĵz².
    pub fn j_squared(&self) -> ComplexMatrix {
        self.jx
            .matmul(&self.jx)
            .add(&self.jy.matmul(&self.jy))
            .add(&self.jz.matmul(&self.jz))
    }
}

/// Pseudo-spin operators of a single two-level atom.
pub fn single_atom_ops() -> SpinOperatorSet {
    let jx = ComplexMatrix::from_real_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]);
    let jy = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -0.5)],
        vec![C64::new(0.0, 0.5), C64::new(0.0, 0.0)],
    ]);
    let jz = ComplexMatrix::from_real_rows(&[vec![0.5, 0.0], vec![0.0, -0.5]]);
    SpinOperatorSet::from_xyz(jx, jy, jz, 1)
}

/// Single-atom operator embedded at position `atom` of an `N`-atom ensemble:
/// I ⊗ … ⊗ op ⊗ … ⊗ I.
fn embed(op: &ComplexMatrix, atom: usize, n_atoms: usize) -> ComplexMatrix {
    let mut out = if atom == 0 {
        op.clone()
    } else {
        ComplexMatrix::identity(2)
    };
    for k in 1..n_atoms {
        let factor = if k == atom {
            op.clone()
        } else {
            ComplexMatrix::identity(2)
        };
        out = kron(&out, &factor);
    }
    out
}

/// The operators of one atom inside the ensemble, tensor-padded with
/// identities on the other atoms.
pub fn atom_ops(spec: EnsembleSpec, atom: usize) -> SpinOperatorSet {
    assert!(atom < spec.n_atoms());
    let single = single_atom_ops();
    let n = spec.n_atoms();
    SpinOperatorSet::from_xyz(
        embed(&single.jx, atom, n),
        embed(&single.jy, atom, n),
        embed(&single.jz, atom, n),
        n,
    )
}

fn build_collective(spec: EnsembleSpec) -> SpinOperatorSet {
    let n = spec.n_atoms();
    let dim = spec.dim();
    let single = single_atom_ops();
    let mut jx = ComplexMatrix::zeros(dim, dim);
    let mut jy = ComplexMatrix::zeros(dim, dim);
    let mut jz = ComplexMatrix::zeros(dim, dim);
    for atom in 0..n {
        jx = jx.add(&embed(&single.jx, atom, n));
        jy = jy.add(&embed(&single.jy, atom, n));
        jz = jz.add(&embed(&single.jz, atom, n));
    }
    SpinOperatorSet::from_xyz(jx, jy, jz, n)
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<SpinOperatorSet>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SpinOperatorSet>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Collective operators Ĵα = Σᵢ Ĵ_{i,α} for the ensemble, built once per
/// atom count and shared immutably afterwards.
pub fn collective_ops(spec: EnsembleSpec) -> Arc<SpinOperatorSet> {
    let mut map = cache().lock().expect("spin operator cache poisoned");
    map.entry(spec.n_atoms())
        .or_insert_with(|| Arc::new(build_collective(spec)))
        .clone()
}

/// Collective operators for the two-atom system the closed forms describe.
pub fn two_atom_ops() -> Arc<SpinOperatorSet> {
    collective_ops(EnsembleSpec::new(2).expect("2 <= MAX_ATOMS"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::StateVector;

    fn commutator_defect(ops: &SpinOperatorSet) -> f64 {
        let i = C64::new(0.0, 1.0);
        let cycles = [
            (&ops.jx, &ops.jy, &ops.jz),
            (&ops.jy, &ops.jz, &ops.jx),
            (&ops.jz, &ops.jx, &ops.jy),
        ];
        cycles
            .iter()
            .map(|(a, b, c)| a.commutator(b).sub(&c.scale(i)).max_abs_entry())
            .fold(0.0, f64::max)
    }

    #[test]
    fn single_atom_jz_eigenvalues() {
        let ops = single_atom_ops();
        let up = StateVector::basis_state(2, 0);
        let down = StateVector::basis_state(2, 1);
        assert!((ops.jz.apply(&up).amplitude(0) - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((ops.jz.apply(&down).amplitude(1) - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_atom_commutator() {
        let ops = single_atom_ops();
        assert!(commutator_defect(&ops) < 1e-15);
    }

    #[test]
    fn ladder_raises_spin_down() {
        let ops = single_atom_ops();
        let down = StateVector::basis_state(2, 1);
        let raised = ops.jplus.apply(&down);
        assert!((raised.amplitude(0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(raised.amplitude(1).norm() < 1e-15);
    }

    #[test]
    fn ladder_operators_match_xy_combinations() {
        let ops = two_atom_ops();
        let i = C64::new(0.0, 1.0);
        let plus = ops.jx.add(&ops.jy.scale(i));
        let minus = ops.jx.sub(&ops.jy.scale(i));
        assert!(ops.jplus.max_abs_diff(&plus) < 1e-14);
        assert!(ops.jminus.max_abs_diff(&minus) < 1e-14);
    }

    #[test]
    fn collective_jz_for_two_atoms() {
        let ops = two_atom_ops();
        let expected = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
        ]);
        assert_eq!(ops.jz.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn two_atom_commutators() {
        let ops = two_atom_ops();
        assert!(commutator_defect(&ops) < 1e-14);
    }

    #[test]
    fn collective_of_one_atom_reduces_to_single() {
        let one = collective_ops(EnsembleSpec::new(1).unwrap());
        let single = single_atom_ops();
        assert_eq!(one.jx.max_abs_diff(&single.jx), 0.0);
        assert_eq!(one.jy.max_abs_diff(&single.jy), 0.0);
        assert_eq!(one.jz.max_abs_diff(&single.jz), 0.0);
    }

    #[test]
    fn commutators_hold_up_to_six_atoms() {
        for n in 1..=6 {
            let ops = collective_ops(EnsembleSpec::new(n).unwrap());
            assert!(
                commutator_defect(&ops) < 1e-13,
                "commutator defect too large for N = {n}"
            );
        }
    }

    #[test]
    fn j_squared_commutes_with_components() {
        for n in 1..=6 {
            let ops = collective_ops(EnsembleSpec::new(n).unwrap());
            let j2 = ops.j_squared();
            for component in [&ops.jx, &ops.jy, &ops.jz] {
                assert!(
                    j2.commutator(component).max_abs_entry() < 1e-13,
                    "J² fails to commute for N = {n}"
                );
            }
        }
    }

    #[test]
    fn operators_of_different_atoms_commute_exactly() {
        let spec = EnsembleSpec::new(2).unwrap();
        let first = atom_ops(spec, 0);
        let second = atom_ops(spec, 1);
        assert_eq!(first.jx.commutator(&second.jy).max_abs_entry(), 0.0);
        assert_eq!(first.jz.commutator(&second.jx).max_abs_entry(), 0.0);
    }

    #[test]
    fn rejects_oversized_ensembles() {
        assert!(matches!(
            EnsembleSpec::new(MAX_ATOMS + 1),
            Err(Error::EnsembleTooLarge(..))
        ));
        assert!(matches!(EnsembleSpec::new(0), Err(Error::EnsembleTooLarge(..))));
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = two_atom_ops();
        let b = two_atom_ops();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn operators_are_hermitian() {
        let ops = two_atom_ops();
        for m in [&ops.jx, &ops.jy, &ops.jz] {
            assert!(m.is_hermitian(1e-14));
        }
    }
}
