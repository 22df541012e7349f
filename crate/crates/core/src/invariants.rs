//! Determinant-ratio invariants of ordered quintuples of product vectors.
//!
//! With `Δ_ijk = det[v_i v_j v_k]` on one side,
//! `J1 = Δ204·Δ013 / (Δ203·Δ014)`, `J2 = Δ014·Δ123 / (Δ013·Δ124)` and
//! `J3 = Δ124·Δ203 / (Δ123·Δ204)`, so `J1·J2·J3 = 1`. Each ratio is unchanged
//! by rescaling any vector and by any invertible map applied to all five.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Matrix3;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::Permutation;
use crate::matrix::C64;
use crate::product::{ProductVector, Vec3};
use crate::tolerance::ToleranceProfile;

/// `det[v1 v2 v3]`.
pub fn delta(v1: &Vec3, v2: &Vec3, v3: &Vec3) -> C64 {
    Matrix3::from_columns(&[*v1, *v2, *v3]).determinant()
}

/// The determinants in the denominators, `(i, j, k)` with 0-based indices.
const DENOMINATORS: [[usize; 3]; 6] = [[2, 0, 3], [0, 1, 4], [0, 1, 3], [1, 2, 4], [1, 2, 3], [2, 0, 4]];

/// `(J1, J2, J3)` of five vectors in C³, before any reality check.
pub fn side_invariants(vs: &[Vec3; 5], side: char, tol: &ToleranceProfile) -> Result<[C64; 3]> {
    let unit: Vec<Vec3> = vs.iter().map(|v| v.normalize()).collect();
    let d = |i: usize, j: usize, k: usize| delta(&unit[i], &unit[j], &unit[k]);
    for [i, j, k] in DENOMINATORS {
        let v = d(i, j, k).norm();
        if !(v >= tol.rank) {
            return Err(Error::DegenerateQuintuple(i, j, k, v, side));
        }
    }
    let (d204, d013, d203, d014, d123, d124) = (d(2, 0, 4), d(0, 1, 3), d(2, 0, 3), d(0, 1, 4), d(1, 2, 3), d(1, 2, 4));
    Ok([
        d204 * d013 / (d203 * d014),
        d014 * d123 / (d013 * d124),
        d124 * d203 / (d123 * d204),
    ])
}

/// The six invariants `(J1ᴬ, J2ᴬ, J3ᴬ, J1ᴮ, J2ᴮ, J3ᴮ)` as complex numbers.
pub fn complex_invariants(q: &[ProductVector; 5], tol: &ToleranceProfile) -> Result<[C64; 6]> {
    let a = side_invariants(&q.each_ref().map(|p| *p.a()), 'A', tol)?;
    let b = side_invariants(&q.each_ref().map(|p| *p.b()), 'B', tol)?;
    Ok([a[0], a[1], a[2], b[0], b[1], b[2]])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantTuple {
    pub j1a: f64,
    pub j2a: f64,
    pub j3a: f64,
    pub j1b: f64,
    pub j2b: f64,
    pub j3b: f64,
}

impl InvariantTuple {
    pub fn from_array(v: [f64; 6]) -> Self {
        let [j1a, j2a, j3a, j1b, j2b, j3b] = v;
        Self { j1a, j2a, j3a, j1b, j2b, j3b }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.j1a, self.j2a, self.j3a, self.j1b, self.j2b, self.j3b]
    }

    /// `(J1ᴬ, J2ᴬ, J2ᴮ, J3ᴮ)`, which determine the other two.
    pub fn quadruple(&self) -> InvariantQuadruple {
        InvariantQuadruple::new(self.j1a, self.j2a, self.j2b, self.j3b)
    }

    /// Largest deviation of `J1·J2·J3` from one over both sides.
    pub fn product_defect(&self) -> f64 {
        let a = (self.j1a * self.j2a * self.j3a - 1.0).abs();
        let b = (self.j1b * self.j2b * self.j3b - 1.0).abs();
        a.max(b)
    }
}

impl Serialize for InvariantTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

/// Drop imaginary parts within `ε_match·(1+|z|)`; larger ones are an error.
pub fn enforce_real(vals: [C64; 6], tol: &ToleranceProfile) -> Result<InvariantTuple> {
    let mut out = [0.0; 6];
    for (index, z) in vals.iter().enumerate() {
        if !z.re.is_finite() || z.im.abs() > tol.matching * (1.0 + z.norm()) {
            return Err(Error::NonRealInvariant { index, value: *z });
        }
        out[index] = z.re;
    }
    Ok(InvariantTuple::from_array(out))
}

/// Real invariants of an ordered quintuple.
pub fn quintuple_invariants(q: &[ProductVector; 5], tol: &ToleranceProfile) -> Result<InvariantTuple> {
    enforce_real(complex_invariants(q, tol)?, tol)
}

/// Invariants of the first five vectors of an ordered sextuple.
pub fn sextuple_invariants(s: &[ProductVector; 6], tol: &ToleranceProfile) -> Result<InvariantTuple> {
    quintuple_invariants(&[s[0], s[1], s[2], s[3], s[4]], tol)
}

/// The sextuple reordered as `out[i] = s[p[i]]`.
pub fn reorder<T: Copy>(s: &[T; 6], p: &Permutation) -> [T; 6] {
    p.apply(s)
}

/// Coordinates on the box `p×p×N×p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantQuadruple {
    pub j1a: f64,
    pub j2a: f64,
    pub j2b: f64,
    pub j3b: f64,
}

impl InvariantQuadruple {
    pub fn new(j1a: f64, j2a: f64, j2b: f64, j3b: f64) -> Self {
        Self { j1a, j2a, j2b, j3b }
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.j1a, self.j2a, self.j2b, self.j3b]
    }

    /// `j1a, j2a, j3b ∈ (0,1)` and `j2b < 0`.
    pub fn in_box(&self) -> bool {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        unit(self.j1a) && unit(self.j2a) && self.j2b < 0.0 && unit(self.j3b)
    }

    /// The full tuple, using `J1·J2·J3 = 1` on each side.
    pub fn complete(&self) -> InvariantTuple {
        let j3a = 1.0 / (self.j1a * self.j2a);
        let j1b = 1.0 / (self.j2b * self.j3b);
        InvariantTuple::from_array([self.j1a, self.j2a, j3a, j1b, self.j2b, self.j3b])
    }

    pub fn approx_eq(&self, other: &InvariantQuadruple, tol: f64) -> bool {
        ToleranceProfile::relative_gap(&self.as_array(), &other.as_array()) < tol
    }
}

impl Serialize for InvariantQuadruple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// In `(0, 1)`.
    Unit,
    /// Greater than one.
    Large,
    /// Negative.
    Negative,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::Unit => 'p',
            Letter::Large => 'P',
            Letter::Negative => 'N',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'p' => Some(Letter::Unit),
            'P' => Some(Letter::Large),
            'N' => Some(Letter::Negative),
            _ => None,
        }
    }
}

/// Six letters, one per invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub [Letter; 6]);

impl Symbol {
    pub fn parse(s: &str) -> Option<Self> {
        let letters: Vec<Letter> = s.chars().map(Letter::from_char).collect::<Option<_>>()?;
        Some(Symbol(letters.try_into().ok()?))
    }

    /// The symbol of the box coordinates.
    pub fn box_type() -> Self {
        Symbol::parse("ppPNNp").expect("valid letters")
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Letter of each invariant; values within `ε_symbol` of 0 or 1 are refused.
pub fn classify_symbol(t: &InvariantTuple, tol: &ToleranceProfile) -> Result<Symbol> {
    let mut out = [Letter::Unit; 6];
    for (index, &value) in t.as_array().iter().enumerate() {
        if value.abs() <= tol.symbol || (value - 1.0).abs() <= tol.symbol || !value.is_finite() {
            return Err(Error::IndeterminateSymbol {
                index,
                value,
                permutation: None,
            });
        }
        out[index] = if value < 0.0 {
            Letter::Negative
        } else if value < 1.0 {
            Letter::Unit
        } else {
            Letter::Large
        };
    }
    Ok(Symbol(out))
}

/// Symbol of every ordering of the sextuple, in lexicographic order.
pub fn ordering_symbols(s: &[ProductVector; 6], tol: &ToleranceProfile) -> Result<Vec<(Permutation, InvariantTuple, Symbol)>> {
    Permutation::all()
        .into_iter()
        .map(|p| {
            let t = sextuple_invariants(&p.apply(s), tol)?;
            let sym = classify_symbol(&t, tol).map_err(|e| match e {
                Error::IndeterminateSymbol { index, value, .. } => Error::IndeterminateSymbol {
                    index,
                    value,
                    permutation: Some(p.0),
                },
                other => other,
            })?;
            Ok((p, t, sym))
        })
        .collect()
}

/// Multiplicity of each symbol over the 720 orderings.
pub fn symbol_census(s: &[ProductVector; 6], tol: &ToleranceProfile) -> Result<BTreeMap<Symbol, usize>> {
    let mut census = BTreeMap::new();
    for (_, _, sym) in ordering_symbols(s, tol)? {
        *census.entry(sym).or_insert(0) += 1;
    }
    Ok(census)
}
