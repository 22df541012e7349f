//! Constructors for the concrete state families: the canonical form `ω(a,b,c,d)`,
//! checkerboard states and the one-parameter Choi family.

use nalgebra::{DMatrix, SMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{re, ComplexMatrix, C64};
use crate::product::ProductVector;
use crate::state::BipartiteState;

/// A 4×3 block `C_i` of `C = [C_0 C_1 C_2]`.
pub type Block = SMatrix<C64, 4, 3>;

fn positive(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: x,
            reason: "must be finite and > 0",
        })
    }
}

/// `ρ = C†C` with `C = [C_0 C_1 C_2]`, i.e. block `(i, j)` equals `C_i† C_j`.
pub fn state_from_blocks(blocks: &[Block; 3]) -> Result<BipartiteState> {
    BipartiteState::new(ComplexMatrix::from_inner(gram_of_blocks(blocks)))
}

pub fn gram_of_blocks(blocks: &[Block; 3]) -> DMatrix<C64> {
    let c = concat_blocks(blocks);
    c.adjoint() * &c
}

/// The 4×9 matrix `[C_0 C_1 C_2]`.
pub fn concat_blocks(blocks: &[Block; 3]) -> DMatrix<C64> {
    DMatrix::from_fn(4, 9, |r, s| blocks[s / 3][(r, s % 3)])
}

fn real_block(rows: [[f64; 3]; 4]) -> Block {
    Block::from_fn(|i, j| re(rows[i][j]))
}

/// Parameters `(a, b, c, d)` of the canonical form, all positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CanonicalParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Ok(Self {
            a: positive("a", a)?,
            b: positive("b", b)?,
            c: positive("c", c)?,
            d: positive("d", d)?,
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn blocks(&self) -> [Block; 3] {
        let CanonicalParams { a, b, c, d } = *self;
        [
            real_block([[0.0, a, b], [0.0, 0.0, 1.0], [0.0; 3], [0.0; 3]]),
            real_block([[0.0; 3], [0.0, 0.0, c], [0.0, 0.0, 1.0], [1.0, 0.0, -1.0 / d]]),
            real_block([[0.0, -1.0 / b, 0.0], [0.0, 1.0, 0.0], [1.0, -c, 0.0], [d, 0.0, 0.0]]),
        ]
    }
}

/// The canonical rank-four PPT entangled state `ω(a,b,c,d) = C†C`.
pub fn omega(p: &CanonicalParams) -> Result<BipartiteState> {
    let p = CanonicalParams::new(p.a, p.b, p.c, p.d)?;
    state_from_blocks(&p.blocks())
}

/// Parameters `(u, v)` of the checkerboard normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckerboardParams {
    pub u: f64,
    pub v: f64,
}

impl CheckerboardParams {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        Ok(Self {
            u: positive("u", u)?,
            v: positive("v", v)?,
        })
    }

    /// The normal form embedded in the general checkerboard pattern.
    pub fn to_raw(&self) -> CheckerboardRaw {
        let z = C64::new(0.0, 0.0);
        let (u, v) = (re(self.u), re(self.v));
        let one = re(1.0);
        CheckerboardRaw {
            a: one,
            d: z,
            g: u,
            j: z,
            m: z,
            q: z,
            c: u,
            f: one,
            i: z,
            l: one,
            p: z,
            s: one,
            b: z,
            e: z,
            h: v,
            k: v,
            n: one,
            r: one,
        }
    }
}

/// A general checkerboard state: the eighteen pattern slots of `C_1, C_2, C_3`.
///
/// ```text
/// C1 = [a 0 d; 0 g 0; j 0 m; 0 q 0]
/// C2 = [0 c 0; f 0 i; 0 l 0; p 0 s]
/// C3 = [b 0 e; 0 h 0; k 0 n; 0 r 0]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckerboardRaw {
    pub a: C64,
    pub d: C64,
    pub g: C64,
    pub j: C64,
    pub m: C64,
    pub q: C64,
    pub c: C64,
    pub f: C64,
    pub i: C64,
    pub l: C64,
    pub p: C64,
    pub s: C64,
    pub b: C64,
    pub e: C64,
    pub h: C64,
    pub k: C64,
    pub n: C64,
    pub r: C64,
}

/// Slots that must vanish in `C_1` and `C_3` (`C_2` uses the complement).
const ODD_SLOTS: [(usize, usize); 6] = [(0, 1), (1, 0), (1, 2), (2, 1), (3, 0), (3, 2)];
const EVEN_SLOTS: [(usize, usize); 6] = [(0, 0), (0, 2), (1, 1), (2, 0), (2, 2), (3, 1)];

impl CheckerboardRaw {
    pub fn blocks(&self) -> [Block; 3] {
        let z = C64::new(0.0, 0.0);
        let s = self;
        [
            Block::from_row_slice(&[s.a, z, s.d, z, s.g, z, s.j, z, s.m, z, s.q, z]),
            Block::from_row_slice(&[z, s.c, z, s.f, z, s.i, z, s.l, z, s.p, z, s.s]),
            Block::from_row_slice(&[s.b, z, s.e, z, s.h, z, s.k, z, s.n, z, s.r, z]),
        ]
    }

    /// Reads the pattern slots back, rejecting blocks with entries off the pattern.
    pub fn from_blocks(blocks: &[Block; 3], tol: f64) -> Result<Self> {
        let scale = blocks.iter().flat_map(|b| b.iter()).map(|z| z.norm()).fold(0.0, f64::max);
        let off = |b: &Block, slots: &[(usize, usize)]| slots.iter().map(|&ij| b[ij].norm()).fold(0.0, f64::max);
        let worst = off(&blocks[0], &ODD_SLOTS)
            .max(off(&blocks[1], &EVEN_SLOTS))
            .max(off(&blocks[2], &ODD_SLOTS));
        if worst > tol * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Format(format!(
                "blocks leave the checkerboard pattern (off-pattern entry {worst:.3e})"
            )));
        }
        let [c1, c2, c3] = blocks;
        Ok(Self {
            a: c1[(0, 0)],
            d: c1[(0, 2)],
            g: c1[(1, 1)],
            j: c1[(2, 0)],
            m: c1[(2, 2)],
            q: c1[(3, 1)],
            c: c2[(0, 1)],
            f: c2[(1, 0)],
            i: c2[(1, 2)],
            l: c2[(2, 1)],
            p: c2[(3, 0)],
            s: c2[(3, 2)],
            b: c3[(0, 0)],
            e: c3[(0, 2)],
            h: c3[(1, 1)],
            k: c3[(2, 0)],
            n: c3[(2, 2)],
            r: c3[(3, 1)],
        })
    }
}

/// `ρ = C†C` from the checkerboard blocks, with no PPT or entanglement guarantee.
pub fn checkerboard_raw(r: &CheckerboardRaw) -> Result<BipartiteState> {
    state_from_blocks(&r.blocks())
}

pub fn checkerboard_canonical(p: &CheckerboardParams) -> Result<BipartiteState> {
    let p = CheckerboardParams::new(p.u, p.v)?;
    checkerboard_raw(&p.to_raw())
}

/// `λ ∈ (0, 1)` for the generalized Choi family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoiParam(f64);

impl ChoiParam {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 && lambda < 1.0 {
            Ok(Self(lambda))
        } else {
            Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must lie in (0, 1)",
            })
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The 9×9 density matrix of the Choi family.
///
/// The pair (1,3)/(3,1) is filled symmetrically so the matrix is Hermitian.
pub fn choi_state(p: ChoiParam) -> Result<BipartiteState> {
    let l2 = p.0 * p.0;
    let il2 = 1.0 / l2;
    let mut m = [[0.0f64; 9]; 9];
    let diag = [1.0, l2, il2, il2, 1.0, l2, l2, il2, 1.0];
    for (k, &x) in diag.iter().enumerate() {
        m[k][k] = x;
    }
    for i in [0, 4, 8] {
        for j in [0, 4, 8] {
            m[i][j] = 1.0;
        }
    }
    for (i, j) in [(1, 3), (2, 6), (5, 7)] {
        m[i][j] = 1.0;
        m[j][i] = 1.0;
    }
    let flat: Vec<f64> = m.iter().flatten().copied().collect();
    BipartiteState::new(ComplexMatrix::from_real_rows(9, 9, &flat))
}

/// The six product vectors spanning the kernel of [`choi_state`], in the
/// listed column order.
pub fn choi_kernel_vectors(p: ChoiParam) -> Vec<ProductVector> {
    let l = p.0;
    let a = [
        [1.0, l, 0.0],
        [0.0, 1.0, l],
        [l, 0.0, 1.0],
        [1.0, -l, 0.0],
        [0.0, 1.0, -l],
        [-l, 0.0, 1.0],
    ];
    let b = [
        [-l, 1.0, 0.0],
        [0.0, -l, 1.0],
        [1.0, 0.0, -l],
        [l, 1.0, 0.0],
        [0.0, l, 1.0],
        [1.0, 0.0, l],
    ];
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| ProductVector::real(*x, *y).expect("nonzero columns"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_rejects_nonpositive() {
        assert!(CanonicalParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(CanonicalParams::new(-1.0, 1.0, 1.0, 1.0).is_err());
        let bad = CanonicalParams {
            a: 1.0,
            b: 1.0,
            c: f64::NAN,
            d: 1.0,
        };
        assert!(omega(&bad).is_err());
    }

    #[test]
    fn omega_corner_entry_vanishes() {
        for p in [(1.0, 1.0, 1.0, 1.0), (2.0, 3.0, 5.0, 7.0), (0.3, 0.2, 4.0, 0.5)] {
            let s = omega(&CanonicalParams::new(p.0, p.1, p.2, p.3).unwrap()).unwrap();
            assert_eq!(s.matrix().get(0, 0), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn omega_is_self_dual() {
        let s = omega(&CanonicalParams::new(1.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(s.partial_transpose().approx_eq(s.matrix(), 1e-12));
        let (_, rb) = s.reduced_states();
        let (_, rb_g) = crate::state::reduced_states(&s.partial_transpose()).unwrap();
        assert!(rb.approx_eq(&rb_g, 1e-14));
    }

    #[test]
    fn checkerboard_zero_is_rejected() {
        let z = C64::new(0.0, 0.0);
        let mut raw = CheckerboardParams::new(1.0, 1.0).unwrap().to_raw();
        for slot in [
            &mut raw.a, &mut raw.d, &mut raw.g, &mut raw.j, &mut raw.m, &mut raw.q, &mut raw.c, &mut raw.f, &mut raw.i,
            &mut raw.l, &mut raw.p, &mut raw.s, &mut raw.b, &mut raw.e, &mut raw.h, &mut raw.k, &mut raw.n, &mut raw.r,
        ] {
            *slot = z;
        }
        assert!(matches!(checkerboard_raw(&raw), Err(Error::InvalidTrace(_))));
    }

    #[test]
    fn canonical_checkerboard_matches_raw_embedding() {
        let p = CheckerboardParams::new(1.0, 1.0).unwrap();
        let blocks = p.to_raw().blocks();
        let expect = [
            real_block([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0; 3], [0.0; 3]]),
            real_block([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            real_block([[0.0; 3], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
        ];
        assert_eq!(blocks, expect);
        let back = CheckerboardRaw::from_blocks(&blocks, 0.0).unwrap();
        assert_eq!(back, p.to_raw());
    }

    #[test]
    fn off_pattern_blocks_rejected() {
        let mut blocks = CheckerboardParams::new(1.0, 2.0).unwrap().to_raw().blocks();
        blocks[1][(0, 0)] = re(0.3);
        assert!(CheckerboardRaw::from_blocks(&blocks, 1e-12).is_err());
    }

    #[test]
    fn choi_entries() {
        let s = choi_state(ChoiParam::new(0.5).unwrap()).unwrap();
        assert_eq!(s.matrix().get(1, 1), re(0.25));
        assert_eq!(s.matrix().get(2, 2), re(4.0));
        // 3 + 3λ² + 3/λ² at λ = 1/2
        assert!((s.trace() - 15.75).abs() < 1e-12);
    }

    #[test]
    fn choi_parameter_range() {
        assert!(ChoiParam::new(0.0).is_err());
        assert!(ChoiParam::new(1.0).is_err());
        assert!(ChoiParam::new(1.5).is_err());
        assert!(ChoiParam::new(0.9).is_ok());
    }

    #[test]
    fn choi_kernel_vectors_are_annihilated() {
        for l in [0.1, 0.25, 0.5, 0.9] {
            let p = ChoiParam::new(l).unwrap();
            let s = choi_state(p).unwrap();
            let norm = s.matrix().spectral_norm();
            let vs = choi_kernel_vectors(p);
            assert_eq!(vs.len(), 6);
            for v in &vs {
                let r = s.matrix().apply(&v.tensor()).norm() / v.tensor().norm();
                assert!(r < 1e-10 * norm, "residual {r}");
            }
            let first = ProductVector::real([1.0, l, 0.0], [-l, 1.0, 0.0]).unwrap();
            assert!(vs[0].same_ray(&first));
        }
    }
}
