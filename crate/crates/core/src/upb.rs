//! Unextendible product bases of five vectors and the states built from them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::finder::{is_ces, SubspaceSpec};
use crate::matrix::{re, ComplexMatrix, C64};
use crate::product::ProductVector;
use crate::state::{BipartiteState, DIM};
use crate::tolerance::ToleranceProfile;

/// Largest normalized overlap accepted as orthogonal.
pub const ORTHOGONALITY_SLACK: f64 = 1e-10;

const PYRAMID_JSON: &str = include_str!("../fixtures/pyramid.json");
const TILES_JSON: &str = include_str!("../fixtures/tiles.json");

/// Five pairwise orthogonal product vectors whose orthogonal complement
/// contains no product vector.
#[derive(Debug, Clone, PartialEq)]
pub struct UpbQuintuple {
    vectors: [ProductVector; 5],
}

impl UpbQuintuple {
    pub fn new(vectors: [ProductVector; 5]) -> Result<Self> {
        let units: Vec<_> = vectors.iter().map(|p| p.unit_tensor()).collect();
        for i in 0..5 {
            for j in i + 1..5 {
                let overlap = units[i].dotc(&units[j]).norm();
                if overlap > ORTHOGONALITY_SLACK {
                    return Err(Error::NotOrthogonal { i, j, overlap });
                }
            }
        }
        let complement = SubspaceSpec::from_constraints(&units, &ToleranceProfile::default())?;
        if !is_ces(&complement)? {
            return Err(Error::NotUnextendible(
                "a product vector is orthogonal to all five".into(),
            ));
        }
        Ok(Self { vectors })
    }

    /// Parse a JSON list of five `{"A": .., "B": ..}` product vectors.
    pub fn from_json(s: &str) -> Result<Self> {
        let list: Vec<ProductVector> = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        let vectors: [ProductVector; 5] = list
            .try_into()
            .map_err(|v: Vec<ProductVector>| Error::Format(format!("expected 5 product vectors, got {}", v.len())))?;
        Self::new(vectors)
    }

    pub fn vectors(&self) -> &[ProductVector; 5] {
        &self.vectors
    }
}

/// `|ψ_j⟩ = |v_j⟩⊗|v_{2j mod 5}⟩` with `|v_j⟩ ∝ (cos 2πj/5, sin 2πj/5, h)`,
/// `h = √(1+√5)/2`, listed as `ψ0, ψ2, ψ4, ψ1, ψ3`.
pub fn pyramid_fixture() -> Result<UpbQuintuple> {
    UpbQuintuple::from_json(PYRAMID_JSON)
}

/// `(|0⟩−|1⟩)|2⟩, |2⟩(|1⟩−|2⟩), |0⟩(|0⟩−|1⟩), (|1⟩−|2⟩)|0⟩` and the all-ones
/// product, unnormalized.
pub fn tiles_fixture() -> Result<UpbQuintuple> {
    UpbQuintuple::from_json(TILES_JSON)
}

/// Projector onto the orthogonal complement of the quintuple, trace 4.
pub fn upb_state(q: &UpbQuintuple) -> Result<BipartiteState> {
    let mut p = DMatrix::<C64>::identity(DIM, DIM);
    for v in q.vectors() {
        let u = v.unit_tensor();
        p -= &u * u.adjoint();
    }
    // Symmetrize so rounding cannot break the Hermitian check.
    let p = ComplexMatrix::from_inner((&p + p.adjoint()) * re(0.5));
    BipartiteState::new(p)
}
