//! Minimal dense complex linear algebra.
//!
//! Everything in this crate runs on small fixed dimensions (2x2 and 4x4 for
//! the physics, up to 2^10 for the generic operator builder), so the
//! implementations favor clarity and exact reproducibility over asymptotic
//! speed: plain row-major storage, straightforward triple loops, a
//! closed-form 2x2 Hermitian eigensolver, and cyclic Jacobi for larger
//! Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::{self, Tolerances};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Which tensor factor of a 2⊗2 space to keep when tracing the other out.
///
/// Atom `a` is the left (most significant) factor: basis index `2*i + k`
/// holds atom `a` in state `i` and atom `b` in state `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from nested rows of complex entries.
    ///
    /// Panics if the rows are ragged; matrices in this crate are always
    /// constructed from literals or other matrices, so a malformed shape is
    /// a programming error, not input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    /// Conjugate transpose M†.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        debug_assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Commutator [self, other] = self·other - other·self.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Anticommutator {self, other} = self·other + other·self.
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.matmul(other).add(&other.matmul(self))
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.cols, v.dim());
        let amps = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * v.amplitude(j))
                    .sum()
            })
            .collect();
        StateVector::from_complex(amps)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max |M(i,j) - conj(M(j,i))| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        debug_assert_eq!(self.rows, self.cols);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.rows == self.cols && self.hermiticity_defect() <= tolerance
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Normalized complex state vector of small fixed dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn from_complex(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        Self {
            amplitudes: amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    /// Computational basis vector |index⟩.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, i: usize) -> C64 {
        self.amplitudes[i]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sq() - 1.0).abs() <= tolerance
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self⟩ ⊗ |other⟩.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }

    /// Rank-one density matrix |self⟩⟨self|.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        m
    }

    /// Real part of ⟨self|M|self⟩.
    ///
    /// For Hermitian `M` the imaginary part is rounding noise.
    pub fn expectation(&self, m: &ComplexMatrix) -> f64 {
        let mv = m.apply(self);
        self.inner(&mv).re
    }
}

/// Kronecker product a ⊗ b: entry (i·p + k, j·q + l) = a(i,j)·b(k,l)
/// for b of shape p×q.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a.get(i, j);
            for k in 0..br {
                for l in 0..bc {
                    out.set(i * br + k, j * bc + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Real part of tr(ρ·M), the expectation of `M` in the mixed state `ρ`.
pub fn trace_product(rho: &ComplexMatrix, m: &ComplexMatrix) -> f64 {
    assert_eq!(rho.cols(), m.rows());
    let mut t = C64::new(0.0, 0.0);
    for i in 0..rho.rows() {
        for k in 0..rho.cols() {
            t += rho.get(i, k) * m.get(k, i);
        }
    }
    t.re
}

/// Trace out one atom of a two-qubit density matrix.
///
/// The input must be 4x4, Hermitian, and unit trace; the result is the 2x2
/// reduced density matrix of the kept atom.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    partial_trace_with(rho, keep, &Tolerances::default())
}

pub fn partial_trace_with(
    rho: &ComplexMatrix,
    keep: Subsystem,
    tols: &Tolerances,
) -> Result<ComplexMatrix> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: rho.rows(),
        });
    }
    let defect = rho.hermiticity_defect();
    if defect > tols.hermitian_input {
        return Err(Error::NotHermitian(defect));
    }
    let tr = rho.trace();
    let tr_err = (tr - C64::new(1.0, 0.0)).norm();
    if tr_err > tols.trace_one {
        return Err(Error::TraceNotOne(tr_err));
    }

    let mut out = ComplexMatrix::zeros(2, 2);
    match keep {
        Subsystem::A => {
            for i in 0..2 {
                for j in 0..2 {
                    let v = rho.get(2 * i, 2 * j) + rho.get(2 * i + 1, 2 * j + 1);
                    out.set(i, j, v);
                }
            }
        }
        Subsystem::B => {
            for k in 0..2 {
                for l in 0..2 {
                    let v = rho.get(k, l) + rho.get(2 + k, 2 + l);
                    out.set(k, l, v);
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian_full(m)?.0)
}

/// Eigenvalues (ascending) and matching eigenvectors (as columns) of a
/// Hermitian matrix.
///
/// 2x2 inputs use the closed-form quadratic; larger matrices use cyclic
/// Jacobi sweeps driven to off-diagonal norm below [`tol::JACOBI_OFFDIAG`].
pub fn eig_hermitian_full(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(m.rows(), m.cols(), m.rows(), m.rows()));
    }
    let defect = m.hermiticity_defect();
    if defect > tol::HERMITIAN_INPUT {
        return Err(Error::NotHermitian(defect));
    }
    match m.rows() {
        0 => Ok((Vec::new(), ComplexMatrix::zeros(0, 0))),
        1 => Ok((vec![m.get(0, 0).re], ComplexMatrix::identity(1))),
        2 => Ok(eig_hermitian_2x2(m)),
        _ => Ok(eig_hermitian_jacobi(m)),
    }
}

fn eig_hermitian_2x2(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let half_sum = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = (half_diff * half_diff + b.norm_sqr()).sqrt();
    let lo = half_sum - disc;
    let hi = half_sum + disc;

    // Eigenvector for `hi`: (b, hi - a) or (hi - d, conj(b)), whichever is
    // better conditioned; `lo` vector is its orthogonal complement.
    let mut vecs = ComplexMatrix::identity(2);
    if b.norm() > 0.0 || (a - d).abs() > 0.0 {
        let (v0, v1) = if b.norm() >= (hi - a).abs() {
            (b, C64::new(hi - a, 0.0))
        } else {
            (C64::new(hi - d, 0.0), b.conj())
        };
        let n = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        if n > 0.0 {
            let (v0, v1) = (v0 / n, v1 / n);
            // columns: [lo, hi]; lo vector ⟂ hi vector
            vecs.set(0, 1, v0);
            vecs.set(1, 1, v1);
            vecs.set(0, 0, -v1.conj());
            vecs.set(1, 0, v0.conj());
        }
    }
    (vec![lo, hi], vecs)
}

fn offdiag_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn eig_hermitian_jacobi(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    const MAX_SWEEPS: usize = 100;

    for _ in 0..MAX_SWEEPS {
        if offdiag_norm(&a) < tol::JACOBI_OFFDIAG {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // Unitary 2x2 rotation zeroing a(p,q):
                //   J(p,p)=c, J(p,q)=s·phase, J(q,p)=-s·conj(phase), J(q,q)=c
                // with angle from cs(app-aqq) + (c²-s²)r = 0.
                let theta = 0.5 * (-2.0 * r).atan2(app - aqq);
                let c = theta.cos();
                let s = theta.sin();
                let jpq = phase * s;
                let jqp = -phase.conj() * s;

                // a <- J† a J, touching only rows/cols p and q
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c + akq * jqp);
                    a.set(k, q, akp * jpq + akq * c);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c + aqk * jqp.conj());
                    a.set(q, k, apk * jpq.conj() + aqk * c);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c + vkq * jqp);
                    v.set(k, q, vkp * jpq + vkq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, dst, v.get(k, src));
        }
    }
    (values, vectors)
}
