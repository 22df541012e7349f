//! Product vectors `|a⟩⊗|b⟩` counted up to scalar multiples.

use std::cmp::Ordering;

use nalgebra::{DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

pub type Vec3 = Vector3<C64>;

/// Coordinates below this fraction of the largest modulus are zeroed when
/// scaling to canonical form.
pub const PROJECTIVE_ZERO: f64 = 1e-12;

/// Two product vectors closer than this are the same projective point.
pub const PROJECTIVE_DEDUP: f64 = 1e-8;

/// Scale `v` so its first nonzero coordinate equals one.
pub fn canonical_scaling(v: &Vec3) -> Result<Vec3> {
    let top = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(top > 0.0) || !top.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut w = *v;
    for z in w.iter_mut() {
        if z.norm() < PROJECTIVE_ZERO * top {
            *z = C64::new(0.0, 0.0);
        }
    }
    let lead = w.iter().find(|z| z.norm() > 0.0).copied().ok_or(Error::ZeroVector)?;
    Ok(w / lead)
}

/// Sine of the angle between two rays, `‖v − P_u v‖/‖v‖`. Computed from the
/// orthogonal component so that it stays accurate near zero.
pub fn ray_distance(u: &[C64], v: &[C64]) -> f64 {
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let uv: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let t = uv / uu;
    let perp: f64 = u.iter().zip(v).map(|(a, b)| (b - t * a).norm_sqr()).sum();
    (perp / vv).sqrt().min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductVector {
    a: Vec3,
    b: Vec3,
}

impl ProductVector {
    pub fn new(a: Vec3, b: Vec3) -> Result<Self> {
        Ok(Self {
            a: canonical_scaling(&a)?,
            b: canonical_scaling(&b)?,
        })
    }

    pub fn from_slices(a: [C64; 3], b: [C64; 3]) -> Result<Self> {
        Self::new(Vec3::from(a), Vec3::from(b))
    }

    pub fn real(a: [f64; 3], b: [f64; 3]) -> Result<Self> {
        Self::new(Vec3::from(a.map(|x| C64::new(x, 0.0))), Vec3::from(b.map(|x| C64::new(x, 0.0))))
    }

    /// `|i⟩⊗|j⟩`.
    pub fn basis(i: usize, j: usize) -> Self {
        let mut a = Vec3::zeros();
        let mut b = Vec3::zeros();
        a[i] = C64::new(1.0, 0.0);
        b[j] = C64::new(1.0, 0.0);
        Self { a, b }
    }

    pub fn a(&self) -> &Vec3 {
        &self.a
    }

    pub fn b(&self) -> &Vec3 {
        &self.b
    }

    /// The vector in C⁹, index `3i + j`.
    pub fn tensor(&self) -> DVector<C64> {
        DVector::from_fn(9, |k, _| self.a[k / 3] * self.b[k % 3])
    }

    pub fn unit_tensor(&self) -> DVector<C64> {
        let t = self.tensor();
        let n = t.norm();
        t / C64::new(n, 0.0)
    }

    pub fn distance(&self, other: &ProductVector) -> f64 {
        ray_distance(self.tensor().as_slice(), other.tensor().as_slice())
    }

    pub fn same_ray(&self, other: &ProductVector) -> bool {
        self.distance(other) < PROJECTIVE_DEDUP
    }

    /// `(V|a⟩) ⊗ (W|b⟩)`.
    pub fn transformed(&self, v: &ComplexMatrix, w: &ComplexMatrix) -> Result<Self> {
        let a = mat3_apply(v, &self.a)?;
        let b = mat3_apply(w, &self.b)?;
        Self::new(a, b)
    }

    /// Lexicographic order of the canonical coordinates, rounded so that
    /// rounding noise cannot reorder otherwise equal vectors.
    pub fn canonical_cmp(&self, other: &ProductVector) -> Ordering {
        let key = |p: &ProductVector| -> Vec<i64> {
            p.a.iter()
                .chain(p.b.iter())
                .flat_map(|z| [z.re, z.im])
                .map(|x| (x * 1e8).round() as i64)
                .collect()
        };
        key(self).cmp(&key(other))
    }
}

fn mat3_apply(m: &ComplexMatrix, v: &Vec3) -> Result<Vec3> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: "3x3".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let d = m.apply(&DVector::from_column_slice(v.as_slice()));
    Ok(Vec3::new(d[0], d[1], d[2]))
}

/// JSON form `{"A":[[re,im]×3], "B":[[re,im]×3]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductVectorRepr {
    #[serde(rename = "A")]
    pub a: [[f64; 2]; 3],
    #[serde(rename = "B")]
    pub b: [[f64; 2]; 3],
}

impl From<&ProductVector> for ProductVectorRepr {
    fn from(p: &ProductVector) -> Self {
        let f = |v: &Vec3| [0, 1, 2].map(|i| [v[i].re, v[i].im]);
        ProductVectorRepr { a: f(&p.a), b: f(&p.b) }
    }
}

impl TryFrom<&ProductVectorRepr> for ProductVector {
    type Error = Error;

    fn try_from(r: &ProductVectorRepr) -> Result<Self> {
        let f = |v: &[[f64; 2]; 3]| Vec3::from(v.map(|[x, y]| C64::new(x, y)));
        ProductVector::new(f(&r.a), f(&r.b))
    }
}

impl Serialize for ProductVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProductVectorRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ProductVectorRepr::deserialize(d)?;
        ProductVector::try_from(&r).map_err(serde::de::Error::custom)
    }
}
