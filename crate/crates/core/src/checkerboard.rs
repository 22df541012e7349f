//! Detection of checkerboard states through invariants, and reduction of a
//! general checkerboard state to the two-parameter normal form.
//!
//! Blocks are the 4×3 matrices `C_1, C_2, C_3` with `ρ = C†C`. The reduction
//! only uses moves that keep the checkerboard pattern: unitary mixing of rows
//! `{0,2}` and of rows `{1,3}`, column operations inside `{0,2}` and on column
//! 1 (B side), and linear combinations of the blocks (A side).

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector2};
use serde::Serialize;

use crate::builders::{checkerboard_canonical, checkerboard_raw, Block, CheckerboardParams, CheckerboardRaw};
use crate::equivalence::{is_equivalent, kernel_sextuple};
use crate::error::{Error, Result};
use crate::finder::{is_ces, SubspaceSpec};
use crate::group::Permutation;
use crate::invariants::{classify_symbol, sextuple_invariants, Symbol};
use crate::matrix::{re, C64};
use crate::state::BipartiteState;

/// Residual allowed on each identity claimed by a reduction step.
pub const STEP_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct CheckerboardVerdict {
    pub is_checkerboard: bool,
    /// Normal form with `u ≥ 1`.
    pub params: Option<CheckerboardParams>,
    /// The equivalent normal form `(1/u, v)`.
    pub alternate: Option<CheckerboardParams>,
    /// `(λ, μ)` read off the PNNpPP tuple `(1/μ², −μ, −μ, 1/λ², λ, λ)`.
    pub lambda_mu: Option<(f64, f64)>,
    pub permutation: Option<Permutation>,
    /// Smallest violation of `J2 = J3` over the PNNpPP orderings.
    pub residual: f64,
}

/// Normal-form parameters from `(λ, μ)` with `λ > 1`, `0 < μ < 1`.
pub fn params_from_lambda_mu(lambda: f64, mu: f64) -> Result<CheckerboardParams> {
    let v = 2.0 * (lambda * mu).sqrt() / (lambda - mu);
    let w = 2.0 * ((lambda - mu) / (lambda + mu)) * ((lambda * lambda + 1.0) / (lambda * lambda - 1.0));
    let denom = (1.0 + v * v) * (w - 1.0) - 1.0;
    if !(denom > 0.0) {
        return Err(Error::ReconstructionFailed(format!("(1+v²)(w−1)−1 = {denom} is not positive")));
    }
    CheckerboardParams::new(v / denom.sqrt(), v)
}

/// `(λ, μ)` of the normal form, from the roots `0 < x1 < 1 < x2` of
/// `u²(1+v²)x⁴ − (u²v²+2u²+v²)x² + u²`.
pub fn lambda_mu_of(p: &CheckerboardParams) -> (f64, f64) {
    let (u2, v2) = (p.u * p.u, p.v * p.v);
    let (a, b, c) = (u2 * (1.0 + v2), -(u2 * v2 + 2.0 * u2 + v2), u2);
    let disc = (b * b - 4.0 * a * c).sqrt();
    let s_small = (-b - disc) / (2.0 * a);
    let s_large = (-b + disc) / (2.0 * a);
    let (x1, x2) = (s_small.sqrt(), s_large.sqrt());
    let lambda = (x2 + x1) / (x2 - x1);
    (lambda, lambda * (1.0 - x1 * x2) / (1.0 + x1 * x2))
}

/// Decide whether `ρ` is equivalent to a checkerboard state.
///
/// `ρ(u, v)` and `ρ(1/u, v)` are equivalent, so the invariants only fix `u`
/// up to inversion. The representative with `u ≥ 1` is returned in `params`
/// and the other one in `alternate`.
pub fn checkerboard_class(rho: &BipartiteState) -> Result<CheckerboardVerdict> {
    let tol = *rho.tolerance();
    let s = kernel_sextuple(rho)?;
    let target = Symbol::parse("PNNpPP").expect("valid letters");
    let mut residual = f64::INFINITY;
    let mut best: Option<(CheckerboardParams, (f64, f64), Permutation, f64)> = None;
    for p in Permutation::all() {
        let t = sextuple_invariants(&p.apply(&s), &tol)?;
        if classify_symbol(&t, &tol)? != target {
            continue;
        }
        let gap_a = (t.j2a - t.j3a).abs() / (1.0 + t.j3a.abs());
        let gap_b = (t.j2b - t.j3b).abs() / (1.0 + t.j3b.abs());
        let gap = gap_a.max(gap_b);
        residual = residual.min(gap);
        if gap >= tol.matching {
            continue;
        }
        let mu = -(t.j2a + t.j3a) / 2.0;
        let lambda = (t.j2b + t.j3b) / 2.0;
        let params = params_from_lambda_mu(lambda, mu)?;
        if best.as_ref().is_none_or(|b| params.u > b.0.u * (1.0 + tol.matching)) {
            best = Some((params, (lambda, mu), p, gap));
        }
    }
    let Some((params, lambda_mu, p, gap)) = best else {
        return Ok(CheckerboardVerdict {
            is_checkerboard: false,
            params: None,
            alternate: None,
            lambda_mu: None,
            permutation: None,
            residual,
        });
    };
    let verdict = is_equivalent(rho, &checkerboard_canonical(&params)?)?;
    if !verdict.equivalent {
        return Err(Error::ReconstructionFailed(format!(
            "normal form ({}, {}) is not equivalent to the input (gap {:.3e})",
            params.u, params.v, verdict.residual
        )));
    }
    Ok(CheckerboardVerdict {
        is_checkerboard: true,
        params: Some(params),
        alternate: Some(CheckerboardParams::new(1.0 / params.u, params.v)?),
        lambda_mu: Some(lambda_mu),
        permutation: Some(p),
        residual: gap,
    })
}

type Blocks = [Block; 3];

fn scale_of(c: &Blocks) -> f64 {
    c.iter().flat_map(|b| b.iter()).map(|z| z.norm()).fold(0.0, f64::max)
}

fn step_error(step: &'static str, detail: impl Into<String>) -> Error {
    Error::ReductionStep {
        step,
        detail: detail.into(),
    }
}

/// Fail unless `|z| ≤ STEP_RESIDUAL·scale`.
fn expect_small(step: &'static str, what: &str, z: C64, scale: f64) -> Result<()> {
    if z.norm() <= STEP_RESIDUAL * scale {
        Ok(())
    } else {
        Err(step_error(step, format!("{what} = {z} should vanish")))
    }
}

fn rows(c: &Blocks, r: &Matrix4<C64>) -> Blocks {
    c.map(|b| r * b)
}

fn cols(c: &Blocks, n: &Matrix3<C64>) -> Blocks {
    c.map(|b| b * n)
}

/// `C_i ← Σ_j m[j][i] C_j`.
fn mix(c: &Blocks, m: &Matrix3<C64>) -> Blocks {
    let mut out = [Block::zeros(); 3];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..3 {
            *o += c[j] * m[(j, i)];
        }
    }
    out
}

/// A unitary whose first row is `x†/‖x‖`.
fn unitary_with_first_row(x: Vector2<C64>) -> Matrix2<C64> {
    let x = x.normalize();
    Matrix2::new(x[0].conj(), x[1].conj(), -x[1], x[0])
}

/// Combinations `C_1 + t C_3` (or `C_3` itself, `t = ∞`) with `am = dj`,
/// smallest `|t|` first.
fn step1_candidates(r: &CheckerboardRaw) -> Vec<Option<C64>> {
    let q2 = r.b * r.n - r.e * r.k;
    let q1 = r.a * r.n + r.b * r.m - r.d * r.k - r.e * r.j;
    let q0 = r.a * r.m - r.d * r.j;
    let scale = [q2, q1, q0].iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let small = |z: C64| z.norm() <= 1e-12 * scale;
    let mut out: Vec<Option<C64>> = Vec::new();
    if small(q0) {
        out.push(Some(re(0.0)));
    }
    if !small(q2) {
        let disc = (q1 * q1 - q2 * q0 * 4.0).sqrt();
        // Stable pair of roots.
        let s = if (q1.conj() * disc).re >= 0.0 { q1 + disc } else { q1 - disc };
        let mut roots = vec![-s / (q2 * 2.0)];
        if s.norm() > 0.0 {
            roots.push(-(q0 * 2.0) / s);
        }
        out.extend(roots.into_iter().map(Some));
    } else if !small(q1) {
        out.push(Some(-q0 / q1));
    }
    if small(q2) {
        out.push(None);
    }
    let mut out_sorted: Vec<Option<C64>> = Vec::new();
    for t in out {
        if !out_sorted.iter().any(|s| match (s, &t) {
            (Some(x), Some(y)) => (x - y).norm() <= 1e-12 * (1.0 + x.norm()),
            (None, None) => true,
            _ => false,
        }) {
            out_sorted.push(t);
        }
    }
    out_sorted.sort_by(|x, y| {
        let key = |t: &Option<C64>| t.map_or(f64::INFINITY, |z| z.norm());
        key(x).total_cmp(&key(y))
    });
    out_sorted
}

/// The reduction along one choice of combination in the first step.
fn reduce_branch(blocks: &Blocks, t: Option<C64>) -> Result<CheckerboardParams> {
    let one = re(1.0);
    let zero = re(0.0);

    // Step 1: replace C_1 so that its {0,2}×{0,2} part has rank one.
    let m = match t {
        Some(t) => Matrix3::new(one, zero, zero, zero, one, zero, t, zero, one),
        None => Matrix3::new(zero, zero, one, zero, one, zero, one, zero, zero),
    };
    let c = mix(blocks, &m);

    // Step 2: bring C_1 to diag(1, 1) on rows 0,1 with unitary row moves and
    // B-side column moves.
    let scale = scale_of(&c);
    let even = Matrix2::new(c[0][(0, 0)], c[0][(0, 2)], c[0][(2, 0)], c[0][(2, 2)]);
    let svd = crate::matrix::svd(
        &nalgebra::DMatrix::from_iterator(2, 2, even.iter().copied()),
        0.5,
    );
    let sigma = svd.values[0];
    if sigma <= STEP_RESIDUAL * scale || svd.values[1] > STEP_RESIDUAL * scale || svd.u.is_empty() {
        return Err(Error::DegenerateCombination);
    }
    let odd = Vector2::new(c[0][(1, 1)], c[0][(3, 1)]);
    if odd.norm() <= STEP_RESIDUAL * scale {
        return Err(Error::DegenerateCombination);
    }
    let ue = unitary_with_first_row(Vector2::new(svd.u[0][0], svd.u[0][1]));
    let uo = unitary_with_first_row(odd);
    let mut r = Matrix4::<C64>::zeros();
    for (a, ia) in [0usize, 2].iter().enumerate() {
        for (b, ib) in [0usize, 2].iter().enumerate() {
            r[(*ia, *ib)] = ue[(a, b)];
        }
    }
    for (a, ia) in [1usize, 3].iter().enumerate() {
        for (b, ib) in [1usize, 3].iter().enumerate() {
            r[(*ia, *ib)] = uo[(a, b)];
        }
    }
    let c = rows(&c, &r);
    expect_small("unitary rows", "C1[2,0]", c[0][(2, 0)], scale)?;
    expect_small("unitary rows", "C1[2,2]", c[0][(2, 2)], scale)?;
    expect_small("unitary rows", "C1[3,1]", c[0][(3, 1)], scale)?;
    // Row 0 of C_1 restricted to columns {0,2} goes to (1, 0).
    let (x0, x2) = (c[0][(0, 0)], c[0][(0, 2)]);
    let basis = if x0.norm() >= x2.norm() {
        Matrix2::new(x0, x2, zero, one)
    } else {
        Matrix2::new(x0, x2, one, zero)
    };
    let inv = basis.try_inverse().ok_or(Error::DegenerateCombination)?;
    let g = c[0][(1, 1)];
    let n = Matrix3::new(inv[(0, 0)], zero, inv[(0, 1)], zero, one / g, zero, inv[(1, 0)], zero, inv[(1, 1)]);
    let c = cols(&c, &n);

    // Step 3: PPT forces e = i = 0.
    let scale = scale_of(&c);
    let target_c1 = Block::from_row_slice(&[one, zero, zero, zero, one, zero, zero, zero, zero, zero, zero, zero]);
    if (c[0] - target_c1).iter().any(|z| z.norm() > STEP_RESIDUAL * scale) {
        return Err(step_error("normalize C1", format!("C1 = {}", c[0])));
    }
    CheckerboardRaw::from_blocks(&c, STEP_RESIDUAL).map_err(|e| step_error("pattern", e.to_string()))?;
    let (e, i) = (c[2][(0, 2)], c[1][(1, 2)]);
    if e.norm().max(i.norm()) > STEP_RESIDUAL * scale {
        return Err(Error::NotPpt(format!("e = {e}, i = {i} after normalization")));
    }

    // Step 4: b = 0, f = s = n = 1, p = 0.
    let b = c[2][(0, 0)];
    let c = mix(&c, &Matrix3::new(one, zero, -b, zero, one, zero, zero, zero, one));
    let (f, p, s) = (c[1][(1, 0)], c[1][(3, 0)], c[1][(3, 2)]);
    let nn = c[2][(2, 2)];
    for (name, z) in [("f", f), ("s", s), ("n", nn)] {
        if z.norm() <= STEP_RESIDUAL * scale {
            return Err(step_error("normalize C2, C3", format!("{name} vanishes")));
        }
    }
    let n = Matrix3::new(one, zero, zero, zero, one, zero, -p / s, zero, f / s);
    let c = cols(&c, &n);
    let c = mix(&c, &Matrix3::new(one, zero, zero, zero, one / f, zero, zero, zero, s / (f * nn)));
    let scale = scale_of(&c);
    for (what, z, want) in [
        ("f", c[1][(1, 0)], one),
        ("p", c[1][(3, 0)], zero),
        ("s", c[1][(3, 2)], one),
        ("b", c[2][(0, 0)], zero),
        ("n", c[2][(2, 2)], one),
    ] {
        expect_small("normalize C2, C3", what, z - want, scale)?;
    }
    let (cc, l) = (c[1][(0, 1)], c[1][(2, 1)]);
    let (h, k, r) = (c[2][(1, 1)], c[2][(2, 0)], c[2][(3, 1)]);

    // Step 5: the range is completely entangled only if chlr ≠ 0.
    if (cc * h * l * r).norm() <= STEP_RESIDUAL * scale.powi(4) {
        return Err(Error::NotEntangled("chlr = 0 in the reduced form".into()));
    }

    // Step 6: h = rk*, |c| = 1, l = c r* k / k*.
    let rel = |x: C64, y: C64| (x - y).norm() / (1.0 + y.norm());
    if rel(h, r * k.conj()) > STEP_RESIDUAL {
        return Err(step_error("relations", format!("h = {h}, rk* = {}", r * k.conj())));
    }
    if (cc.norm() - 1.0).abs() > STEP_RESIDUAL {
        return Err(step_error("relations", format!("|c| = {}", cc.norm())));
    }
    let l_expected = cc * r.conj() * k / k.conj();
    if rel(l, l_expected) > STEP_RESIDUAL {
        return Err(step_error("relations", format!("l = {l}, cr*k/k* = {l_expected}")));
    }

    let (rn, kn) = (r.norm(), k.norm());
    let u2 = cc.sqrt();
    let u3 = re(rn) * k.conj() / (r.conj() * k);
    let u4 = u2 * kn / k;
    let c = rows(&c, &Matrix4::from_diagonal(&nalgebra::Vector4::new(one, u2, u3, u4)));
    let c = cols(&c, &Matrix3::from_diagonal(&nalgebra::Vector3::new(one, u2.conj() / rn, re(kn) / k.conj())));
    let c = mix(&c, &Matrix3::from_diagonal(&nalgebra::Vector3::new(one, u2.conj(), re(rn * kn) / (r * k.conj()))));

    let params = CheckerboardParams::new(1.0 / rn, kn)?;
    let expected = params.to_raw().blocks();
    let gap = c
        .iter()
        .zip(&expected)
        .flat_map(|(x, y)| (x - y).iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    if gap > STEP_RESIDUAL * (1.0 + scale_of(&expected)) {
        return Err(step_error("final scaling", format!("distance to normal form {gap:.3e}")));
    }
    Ok(params)
}

/// Reduce a checkerboard PPT entangled state to the normal form.
pub fn checkerboard_reduce(raw: &CheckerboardRaw) -> Result<CheckerboardParams> {
    let rho = checkerboard_raw(raw)?;
    if !rho.is_ppt() {
        return Err(Error::NotPpt("partial transpose has a negative eigenvalue".into()));
    }
    if rho.birank() != (4, 4) {
        let (a, b) = rho.birank();
        return Err(Error::UnsupportedClass(format!("birank ({a},{b}), expected (4,4)")));
    }
    let range = SubspaceSpec::range_of(rho.matrix(), rho.tolerance())?;
    if !is_ces(&range)? {
        return Err(Error::NotEntangled("the range contains a product vector".into()));
    }
    let blocks = raw.blocks();
    let mut last = Error::DegenerateCombination;
    for t in step1_candidates(raw) {
        match reduce_branch(&blocks, t) {
            Ok(params) => {
                let verdict = is_equivalent(&rho, &checkerboard_canonical(&params)?)?;
                if verdict.equivalent {
                    return Ok(params);
                }
                last = Error::ReconstructionFailed(format!(
                    "normal form ({}, {}) is not equivalent to the input (gap {:.3e})",
                    params.u, params.v, verdict.residual
                ));
            }
            Err(e @ (Error::NotPpt(_) | Error::NotEntangled(_))) => return Err(e),
            Err(e) => last = e,
        }
    }
    Err(last)
}
