//! Dense complex matrices backed by `nalgebra`.
//!
//! The JSON form is `{"rows":R,"cols":C,"entries":[[re,im],...]}` in row-major
//! order. Comparisons always take an explicit tolerance.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::ToleranceProfile;

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix(DMatrix<C64>);

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.rows * r.cols != r.entries.len() {
            return Err(Error::Format(format!(
                "{}x{} matrix needs {} entries, found {}",
                r.rows,
                r.cols,
                r.rows * r.cols,
                r.entries.len()
            )));
        }
        if r.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Format("non-finite matrix entry".into()));
        }
        let data: Vec<C64> = r.entries.iter().map(|&[a, b]| c(a, b)).collect();
        Ok(ComplexMatrix(DMatrix::from_row_slice(r.rows, r.cols, &data)))
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        let (rows, cols) = m.0.shape();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = m.0[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixRepr {
            rows,
            cols,
            entries,
        }
    }
}

impl ComplexMatrix {
    pub fn from_inner(m: DMatrix<C64>) -> Self {
        ComplexMatrix(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[C64]) -> Self {
        ComplexMatrix(DMatrix::from_row_slice(rows, cols, data))
    }

    pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> Self {
        let v: Vec<C64> = data.iter().map(|&x| re(x)).collect();
        Self::from_row_slice(rows, cols, &v)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    // Row-major view of the entries.
    pub fn entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols()),
                found: format!("{} rows", other.rows()),
            });
        }
        Ok(ComplexMatrix(&self.0 * &other.0))
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.0.shape() != other.0.shape() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, rel_tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE);
        self.max_abs_diff(other) <= rel_tol * scale
    }

    /// `‖A − A†‖_F / ‖A‖_F`, zero for the zero matrix.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows() != self.cols() {
            return f64::INFINITY;
        }
        let n = self.frobenius_norm();
        if n == 0.0 {
            return 0.0;
        }
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            / n
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_defect() <= rel_tol
    }

    pub fn hermitian_part(&self) -> Self {
        ComplexMatrix((&self.0 + self.0.adjoint()) * re(0.5))
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        svd(&self.0, f64::INFINITY).values
    }

    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues (ascending) of the Hermitian part `(A + A†)/2`.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = self.hermitian_part();
        let mut ev: Vec<f64> = SymmetricEigen::new(h.0).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Number of singular values above `tol.rank · σ_max`.
pub fn numerical_rank(m: &ComplexMatrix, tol: &ToleranceProfile) -> usize {
    let s = m.singular_values();
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol.rank * top).count()
}

/// Singular values of a matrix, with the singular vector pairs of the values
/// that are not negligible.
#[derive(Debug, Clone)]
pub struct Svd {
    /// All `min(rows, cols)` singular values, decreasing.
    pub values: Vec<f64>,
    /// Left singular vectors for `values[..u.len()]`.
    pub u: Vec<DVector<C64>>,
    /// Right singular vectors, `m v_i = σ_i u_i`.
    pub v: Vec<DVector<C64>>,
}

/// Singular value decomposition through the Hermitian eigenproblem of
/// `[[0, m], [m†, 0]]`, whose spectrum is `±σ_i` padded with zeros. This keeps
/// the accuracy of a direct SVD without squaring the condition number.
///
/// Vector pairs are returned for the values above `vector_cut · σ_max`; below
/// that the `±σ` eigenvectors approach the zero eigenspace and stop separating.
pub fn svd(m: &DMatrix<C64>, vector_cut: f64) -> Svd {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Svd {
            values: Vec::new(),
            u: Vec::new(),
            v: Vec::new(),
        };
    }
    let mut h = DMatrix::<C64>::zeros(r + c, r + c);
    h.view_mut((0, r), (r, c)).copy_from(m);
    h.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..r + c).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values: Vec<f64> = order[..k].iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let top = values[0];
    let mut u = Vec::new();
    let mut v = Vec::new();
    for (n, &i) in order[..k].iter().enumerate() {
        if !(top > 0.0) || values[n] <= vector_cut * top {
            break;
        }
        let x = eig.eigenvectors.column(i);
        let ui = x.rows(0, r).into_owned();
        let vi = x.rows(r, c).into_owned();
        u.push(&ui / re(ui.norm()));
        v.push(&vi / re(vi.norm()));
    }
    Svd { values, u, v }
}

/// Orthonormal bases `(range, complement)` of the column space, split at the
/// relative rank cutoff.
pub fn column_space_split(m: &ComplexMatrix, tol: &ToleranceProfile) -> (Vec<DVector<C64>>, Vec<DVector<C64>>) {
    let n = m.rows();
    let mut range = gram_schmidt(svd(&m.0, tol.rank).u);
    range.truncate(n);
    let mut proj = DMatrix::<C64>::identity(n, n);
    for u in &range {
        proj -= u * u.adjoint();
    }
    let eig = SymmetricEigen::new(proj);
    let mut rest: Vec<(f64, DVector<C64>)> = (0..n)
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
        .collect();
    rest.sort_by(|a, b| b.0.total_cmp(&a.0));
    (range, rest.into_iter().map(|x| x.1).collect())
}

/// Modified Gram-Schmidt, dropping vectors that become negligible.
fn gram_schmidt(vs: Vec<DVector<C64>>) -> Vec<DVector<C64>> {
    let mut out: Vec<DVector<C64>> = Vec::new();
    for mut v in vs {
        for _ in 0..2 {
            for q in &out {
                let t = q.dotc(&v);
                v -= q * t;
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            out.push(v / re(n));
        }
    }
    out
}

/// Random complex matrix with condition number below `max_cond`, drawn by
/// rejection from `I + G/4` with Gaussian `G`.
pub fn random_well_conditioned<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> ComplexMatrix {
    use rand_distr::StandardNormal;
    loop {
        let data: Vec<C64> = (0..n * n)
            .map(|k| {
                let g = c(rng.sample(StandardNormal), rng.sample(StandardNormal)) * 0.25;
                if k % (n + 1) == 0 {
                    g + re(1.0)
                } else {
                    g
                }
            })
            .collect();
        let m = ComplexMatrix::from_row_slice(n, n, &data);
        let s = m.singular_values();
        if s[n - 1] > 0.0 && s[0] / s[n - 1] < max_cond {
            return m;
        }
    }
}

/// Haar-ish random unitary from the QR factorisation of a Gaussian matrix.
pub fn random_unitary<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    use rand_distr::StandardNormal;
    let g = DMatrix::<C64>::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { re(1.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    ComplexMatrix(u)
}
