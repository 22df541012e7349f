//! SLOCC equivalence of rank-four PPT entangled states, canonical parameters
//! and the cubic attached to a canonical form.

use serde::Serialize;

use crate::action::phi;
use crate::builders::{omega, CanonicalParams};
use crate::error::{Error, Result};
use crate::finder::{find_product_vectors, in_general_position, is_ces, PvStatus, SubspaceSpec};
use crate::group::Permutation;
use crate::invariants::{classify_symbol, sextuple_invariants, InvariantQuadruple, InvariantTuple, Symbol};
use crate::matrix::{re, C64};
use crate::poly::Poly;
use crate::product::ProductVector;
use crate::state::BipartiteState;
use crate::tolerance::ToleranceProfile;

/// The six kernel product vectors of a rank-four PPT entangled state, sorted
/// canonically.
pub fn kernel_sextuple(rho: &BipartiteState) -> Result<[ProductVector; 6]> {
    let tol = rho.tolerance();
    if rho.birank() != (4, 4) {
        let (r, s) = rho.birank();
        return Err(Error::UnsupportedClass(format!("birank ({r},{s}), expected (4,4)")));
    }
    if !rho.is_ppt() {
        return Err(Error::UnsupportedClass("partial transpose is not positive semidefinite".into()));
    }
    let kernel = SubspaceSpec::kernel_of(rho.matrix(), tol)?;
    let found = find_product_vectors(&kernel);
    match found.status {
        PvStatus::Finite => {}
        PvStatus::Infinite => {
            return Err(Error::UnsupportedClass("kernel has infinitely many product vectors".into()))
        }
        PvStatus::Indeterminate => return Err(Error::Indeterminate(found.note.unwrap_or_default())),
    }
    let n = found.vectors.len();
    let six: [ProductVector; 6] = found
        .vectors
        .try_into()
        .map_err(|_| Error::UnsupportedClass(format!("kernel has {n} product vectors, expected 6")))?;
    if !in_general_position(&six, tol) {
        return Err(Error::UnsupportedClass("kernel product vectors are not in general position".into()));
    }
    let range = SubspaceSpec::range_of(rho.matrix(), tol)?;
    if !is_ces(&range)? {
        return Err(Error::UnsupportedClass("range contains a product vector (separable)".into()));
    }
    Ok(six)
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// Ordering of the first state's sextuple, `out[i] = s[p[i]]`.
    pub permutation: Permutation,
    pub tuple: InvariantTuple,
    pub reference: InvariantTuple,
    pub quadruple: InvariantQuadruple,
    pub reference_quadruple: InvariantQuadruple,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub witness: Option<Witness>,
    /// Smallest relative gap between tuples over all orderings.
    pub residual: f64,
}

/// Compare a sextuple against a fixed reference ordering; the witness is
/// the lexicographically least matching ordering.
pub fn match_sextuples(s: &[ProductVector; 6], reference: &[ProductVector; 6], tol: &ToleranceProfile) -> Result<EquivalenceVerdict> {
    let target = sextuple_invariants(reference, tol)?;
    let mut best = f64::INFINITY;
    for p in Permutation::all() {
        let t = sextuple_invariants(&p.apply(s), tol)?;
        let gap = ToleranceProfile::relative_gap(&t.as_array(), &target.as_array());
        best = best.min(gap);
        if gap < tol.matching {
            return Ok(EquivalenceVerdict {
                equivalent: true,
                witness: Some(Witness {
                    permutation: p,
                    tuple: t,
                    reference: target,
                    quadruple: t.quadruple(),
                    reference_quadruple: target.quadruple(),
                }),
                residual: gap,
            });
        }
    }
    Ok(EquivalenceVerdict {
        equivalent: false,
        witness: None,
        residual: best,
    })
}

/// Decide whether `rho2 = (V⊗W) rho1 (V⊗W)†` for some invertible `V`, `W`.
pub fn is_equivalent(rho1: &BipartiteState, rho2: &BipartiteState) -> Result<EquivalenceVerdict> {
    let s1 = kernel_sextuple(rho1)?;
    let s2 = kernel_sextuple(rho2)?;
    match_sextuples(&s1, &s2, rho1.tolerance())
}

/// One ppPNNp ordering of the kernel together with its canonical parameters.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalCandidate {
    pub permutation: Permutation,
    pub quadruple: InvariantQuadruple,
    pub params: CanonicalParams,
}

/// Every ppPNNp ordering of the kernel sextuple, in lexicographic order.
pub fn canonical_candidates(rho: &BipartiteState) -> Result<Vec<CanonicalCandidate>> {
    let s = kernel_sextuple(rho)?;
    candidates_of(&s, rho.tolerance())
}

pub fn candidates_of(s: &[ProductVector; 6], tol: &ToleranceProfile) -> Result<Vec<CanonicalCandidate>> {
    let target = Symbol::box_type();
    let mut out = Vec::new();
    for p in Permutation::all() {
        let t = sextuple_invariants(&p.apply(s), tol)?;
        if classify_symbol(&t, tol)? != target {
            continue;
        }
        let quadruple = t.quadruple();
        out.push(CanonicalCandidate {
            permutation: p,
            quadruple,
            params: phi(&quadruple)?,
        });
    }
    if out.is_empty() {
        return Err(Error::NoPpPNNpOrdering);
    }
    Ok(out)
}

/// Largest `|ln p|` over the four parameters.
fn spread(p: &CanonicalParams) -> f64 {
    p.as_array().iter().map(|x| x.ln().abs()).fold(0.0, f64::max)
}

/// The candidate with parameters closest to 1. Orderings near the corners of
/// the box give nearly singular canonical forms.
pub fn preferred_candidate(candidates: Vec<CanonicalCandidate>) -> Result<CanonicalCandidate> {
    candidates
        .into_iter()
        .min_by(|x, y| spread(&x.params).total_cmp(&spread(&y.params)))
        .ok_or(Error::NoPpPNNpOrdering)
}

/// Canonical parameters of an equivalent state, from the preferred ppPNNp
/// ordering; the result is checked by an equivalence test.
pub fn canonicalize(rho: &BipartiteState) -> Result<CanonicalCandidate> {
    let first = preferred_candidate(canonical_candidates(rho)?)?;
    let verdict = is_equivalent(rho, &omega(&first.params)?)?;
    if !verdict.equivalent {
        return Err(Error::ReconstructionFailed(format!(
            "canonical form is not equivalent to the input (gap {:.3e})",
            verdict.residual
        )));
    }
    Ok(first)
}

/// Coefficients of `f(z) = abz(cz−1−d²)(c−(1+c²)z) + d(cz−1)(b²c−(1+b²+b²c²)z)`,
/// constant term first.
pub fn cubic_coefficients(p: &CanonicalParams) -> [f64; 4] {
    let [a, b, c, d] = p.as_array();
    let (b2, c2, d2) = (b * b, c * c, d * d);
    let first = Poly::from_real(&[0.0, a * b])
        .mul(&Poly::from_real(&[-1.0 - d2, c]))
        .mul(&Poly::from_real(&[c, -(1.0 + c2)]));
    let second = Poly::from_real(&[-d, d * c]).mul(&Poly::from_real(&[b2 * c, -(1.0 + b2 + b2 * c2)]));
    let f = first.add(&second);
    let mut out = [0.0; 4];
    for (o, z) in out.iter_mut().zip(f.coeffs()) {
        *o = z.re;
    }
    out
}

/// Discriminant of `k0 + k1 z + k2 z² + k3 z³`; positive iff three distinct
/// real roots.
pub fn cubic_discriminant(k: &[f64; 4]) -> f64 {
    let [d, c, b, a] = *k;
    18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d
}

/// Closed-form roots `(z1, z2, z3)` of the cubic of `p`, where `q` is the
/// quadruple with `phi(q) = p`.
pub fn closed_form_roots(p: &CanonicalParams, q: &InvariantQuadruple) -> [f64; 3] {
    let c = p.as_array()[2];
    let [x, y, z, w] = q.as_array();
    let z1 = (w / c) * (1.0 - x * z) / (1.0 - x * z * w);
    let z2 = z1 / w;
    let z3 = -(1.0 / c) * (1.0 - y) * (1.0 - x * z) / ((1.0 - x) * (y - z));
    [z1, z2, z3]
}

/// Matching tolerance between closed-form and numeric roots.
pub const ROOT_MATCH: f64 = 1e-9;

/// Check the closed forms against numeric roots and the interval constraints
/// `z3 < 0`, `λ < z1 < c/(1+c²)`, `1/c < z2 < (1+d²)/c` with
/// `λ = b²c/(1+b²+b²c²)`.
pub fn cubic_roots_check(p: &CanonicalParams, q: &InvariantQuadruple) -> Result<[f64; 3]> {
    let k = cubic_coefficients(p);
    let numeric = Poly::from_real(&k).roots();
    let closed = closed_form_roots(p, q);
    for (index, &z) in closed.iter().enumerate() {
        let nearest = numeric
            .iter()
            .min_by(|u, v| (*u - re(z)).norm().total_cmp(&(*v - re(z)).norm()))
            .copied()
            .unwrap_or(C64::new(f64::NAN, 0.0));
        let error = (nearest - re(z)).norm() / (1.0 + z.abs());
        if !(error <= ROOT_MATCH) {
            return Err(Error::RootMismatch {
                index: index + 1,
                closed: z,
                numeric: nearest.re,
                error,
            });
        }
    }
    let [_, b, c, d] = p.as_array();
    let lambda = b * b * c / (1.0 + b * b + b * b * c * c);
    let [z1, z2, z3] = closed;
    if !(z3 < 0.0) {
        return Err(Error::RootOrdering(format!("z3 = {z3} is not negative")));
    }
    if !(lambda < z1 && z1 < c / (1.0 + c * c)) {
        return Err(Error::RootOrdering(format!("z1 = {z1} outside ({lambda}, {})", c / (1.0 + c * c))));
    }
    if !(1.0 / c < z2 && z2 < (1.0 + d * d) / c) {
        return Err(Error::RootOrdering(format!("z2 = {z2} outside ({}, {})", 1.0 / c, (1.0 + d * d) / c)));
    }
    Ok(closed)
}
