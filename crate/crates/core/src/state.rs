//! Two-qutrit states `ρ` on C³⊗C³ and the basic PPT toolkit.
//!
//! States are kept unnormalized. Index `3i + j` stands for `|i⟩_A ⊗ |j⟩_B`, so
//! the 9×9 matrix is a 3×3 grid of 3×3 blocks over system A.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{numerical_rank, ComplexMatrix, C64};
use crate::tolerance::ToleranceProfile;

pub const DIM_A: usize = 3;
pub const DIM_B: usize = 3;
pub const DIM: usize = DIM_A * DIM_B;

/// Largest tolerated `‖ρ − ρ†‖/‖ρ‖` for a state.
pub const HERMITIAN_SLACK: f64 = 1e-10;

/// Hermitian positive semidefinite 9×9 matrix with positive trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartiteState {
    #[serde(rename = "dimA")]
    dim_a: usize,
    #[serde(rename = "dimB")]
    dim_b: usize,
    #[serde(flatten)]
    matrix: ComplexMatrix,
    #[serde(skip)]
    tol: ToleranceProfile,
}

impl BipartiteState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, ToleranceProfile::default())
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: ToleranceProfile) -> Result<Self> {
        tol.validate()?;
        check_square9(&matrix)?;
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_SLACK {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        let scale = matrix.max_abs();
        if !(tr.re > 0.0) || tr.im.abs() > HERMITIAN_SLACK * scale.max(1.0) {
            return Err(Error::InvalidTrace(tr));
        }
        let ev = matrix.hermitian_eigenvalues();
        let norm = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if ev[0] < -tol.psd * norm {
            return Err(Error::NotPsd(ev[0]));
        }
        Ok(Self {
            dim_a: DIM_A,
            dim_b: DIM_B,
            matrix,
            tol,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> &ToleranceProfile {
        &self.tol
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn retolerance(mut self, tol: ToleranceProfile) -> Result<Self> {
        tol.validate()?;
        self.tol = tol;
        Ok(self)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `ρ / tr ρ`.
    pub fn normalized(&self) -> Self {
        let t = self.trace();
        Self {
            matrix: ComplexMatrix::from_inner(self.matrix.inner() / C64::new(t, 0.0)),
            ..self.clone()
        }
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose(&self.matrix).expect("state matrices are 9x9")
    }

    pub fn reduced_states(&self) -> (ComplexMatrix, ComplexMatrix) {
        reduced_states(&self.matrix).expect("state matrices are 9x9")
    }

    pub fn rank(&self) -> usize {
        numerical_rank(&self.matrix, &self.tol)
    }

    pub fn is_ppt(&self) -> bool {
        is_ppt(self)
    }

    pub fn birank(&self) -> (usize, usize) {
        birank(self)
    }

    /// `(V⊗W) ρ (V⊗W)†` for 3×3 matrices `V`, `W`.
    pub fn conjugate_local(&self, v: &ComplexMatrix, w: &ComplexMatrix) -> Result<Self> {
        for m in [v, w] {
            if m.rows() != 3 || m.cols() != 3 {
                return Err(Error::DimensionMismatch {
                    expected: "3x3 local operator".into(),
                    found: format!("{}x{}", m.rows(), m.cols()),
                });
            }
        }
        let op = v.kron(w);
        let m = op.mul(&self.matrix)?.mul(&op.adjoint())?;
        // Conjugation can leave rounding-level asymmetry.
        Self::with_tolerance(m.hermitian_part(), self.tol)
    }
}

fn check_square9(m: &ComplexMatrix) -> Result<()> {
    if m.rows() != DIM || m.cols() != DIM {
        return Err(Error::DimensionMismatch {
            expected: "9x9".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

/// Transpose on system A: block `(i, j)` of the result is block `(j, i)` of `m`.
pub fn partial_transpose(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square9(m)?;
    let src = m.inner();
    let out = nalgebra::DMatrix::from_fn(DIM, DIM, |r, s| {
        let (i, k) = (r / DIM_B, r % DIM_B);
        let (j, l) = (s / DIM_B, s % DIM_B);
        src[(j * DIM_B + k, i * DIM_B + l)]
    });
    Ok(ComplexMatrix::from_inner(out))
}

/// Partial traces `(tr_B m, tr_A m)`.
pub fn reduced_states(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_square9(m)?;
    let src = m.inner();
    let rho_a = nalgebra::DMatrix::from_fn(DIM_A, DIM_A, |i, j| {
        (0..DIM_B).map(|k| src[(i * DIM_B + k, j * DIM_B + k)]).sum::<C64>()
    });
    let rho_b = nalgebra::DMatrix::from_fn(DIM_B, DIM_B, |k, l| {
        (0..DIM_A).map(|i| src[(i * DIM_B + k, i * DIM_B + l)]).sum::<C64>()
    });
    Ok((ComplexMatrix::from_inner(rho_a), ComplexMatrix::from_inner(rho_b)))
}

/// Smallest eigenvalue of the Hermitian part of `ρ^Γ` against `ε_psd·‖ρ^Γ‖`.
pub fn is_ppt(rho: &BipartiteState) -> bool {
    let pt = rho.partial_transpose();
    let ev = pt.hermitian_eigenvalues();
    let norm = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
    ev[0] >= -rho.tol.psd * norm
}

pub fn birank(rho: &BipartiteState) -> (usize, usize) {
    (
        numerical_rank(rho.matrix(), &rho.tol),
        numerical_rank(&rho.partial_transpose(), &rho.tol),
    )
}

/// False when `r² + s² > M²N² + 1`, which rules out extremality.
pub fn extreme_necessary(birank: (usize, usize)) -> bool {
    let (r, s) = birank;
    r * r + s * s <= DIM * DIM + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{random_well_conditioned, re};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_hermitian(rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let g: Vec<C64> = (0..81)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        ComplexMatrix::from_row_slice(9, 9, &g).hermitian_part()
    }

    fn max_entangled() -> BipartiteState {
        let mut m = ComplexMatrix::zeros(9, 9).into_inner();
        for i in 0..3 {
            for j in 0..3 {
                m[(4 * i, 4 * j)] = re(1.0);
            }
        }
        BipartiteState::new(ComplexMatrix::from_inner(m)).unwrap()
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng);
            let back = partial_transpose(&partial_transpose(&h).unwrap()).unwrap();
            assert!(back.approx_eq(&h, 0.0));
            let t1 = partial_transpose(&h).unwrap().trace();
            assert!((t1 - h.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_keeps_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h = random_hermitian(&mut rng);
        assert!(partial_transpose(&h).unwrap().is_hermitian(1e-14));
    }

    #[test]
    fn reduced_a_of_transpose_is_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let h = random_hermitian(&mut rng);
            let (ra, rb) = reduced_states(&h).unwrap();
            let (ra_g, rb_g) = reduced_states(&partial_transpose(&h).unwrap()).unwrap();
            assert!(ra_g.approx_eq(&ra.transpose(), 1e-14));
            assert!(rb_g.approx_eq(&rb, 1e-14));
        }
    }

    #[test]
    fn identity_reduces_to_three_identity() {
        let (ra, rb) = reduced_states(&ComplexMatrix::identity(9)).unwrap();
        let three = ComplexMatrix::from_inner(ComplexMatrix::identity(3).into_inner() * re(3.0));
        assert!(ra.approx_eq(&three, 0.0));
        assert!(rb.approx_eq(&three, 0.0));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            partial_transpose(&ComplexMatrix::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(reduced_states(&ComplexMatrix::zeros(9, 8)).is_err());
    }

    #[test]
    fn maximally_entangled_is_npt() {
        assert!(!max_entangled().is_ppt());
        let ev = max_entangled().partial_transpose().hermitian_eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn separable_diagonal_is_ppt() {
        let d: Vec<f64> = (0..81).map(|k| if k % 10 == 0 { (k / 10 + 1) as f64 } else { 0.0 }).collect();
        let s = BipartiteState::new(ComplexMatrix::from_real_rows(9, 9, &d)).unwrap();
        assert!(s.is_ppt());
    }

    #[test]
    fn identity_birank() {
        let s = BipartiteState::new(ComplexMatrix::identity(9)).unwrap();
        assert_eq!(s.birank(), (9, 9));
    }

    #[test]
    fn invariants_are_validated() {
        assert!(matches!(BipartiteState::new(ComplexMatrix::zeros(9, 9)), Err(Error::InvalidTrace(_))));
        let mut m = ComplexMatrix::identity(9).into_inner();
        m[(0, 0)] = re(-1.0);
        assert!(matches!(BipartiteState::new(ComplexMatrix::from_inner(m.clone())), Err(Error::NotPsd(_))));
        m[(0, 0)] = re(1.0);
        m[(0, 1)] = re(0.5);
        assert!(matches!(BipartiteState::new(ComplexMatrix::from_inner(m)), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn extreme_necessary_threshold() {
        assert!(extreme_necessary((4, 4)));
        assert!(extreme_necessary((5, 7)));
        assert!(!extreme_necessary((6, 8)));
        assert!(extreme_necessary((1, 9)));
        assert!(!extreme_necessary((5, 8)));
    }

    #[test]
    fn ppt_is_ilo_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let me = max_entangled();
        let sep = BipartiteState::new(ComplexMatrix::identity(9)).unwrap();
        for _ in 0..5 {
            let v = random_well_conditioned(&mut rng, 3, 10.0);
            let w = random_well_conditioned(&mut rng, 3, 10.0);
            assert!(!me.conjugate_local(&v, &w).unwrap().is_ppt());
            assert!(sep.conjugate_local(&v, &w).unwrap().is_ppt());
        }
    }
}
