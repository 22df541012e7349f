#![allow(dead_code)]

use nalgebra::Matrix3;
use qutrit_ppt::builders::{omega, Block, CanonicalParams, CheckerboardParams, CheckerboardRaw};
use qutrit_ppt::equivalence::kernel_sextuple;
use qutrit_ppt::invariants::{classify_symbol, sextuple_invariants, InvariantQuadruple, Symbol};
use qutrit_ppt::matrix::c;
use qutrit_ppt::{BipartiteState, ProductVector, ToleranceProfile};
use rand::Rng;

pub fn log_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Log-uniform parameters in `[0.2, 5]`.
pub fn random_params(rng: &mut impl Rng) -> CanonicalParams {
    let mut x = || (rng.random_range(0.2f64.ln()..5f64.ln())).exp();
    CanonicalParams::new(x(), x(), x(), x()).unwrap()
}

pub fn random_omega(rng: &mut impl Rng) -> BipartiteState {
    omega(&random_params(rng)).unwrap()
}

/// A point of the box away from its faces.
pub fn random_box_point(rng: &mut impl Rng) -> InvariantQuadruple {
    InvariantQuadruple::new(
        rng.random_range(0.1..0.9),
        rng.random_range(0.1..0.9),
        -(rng.random_range(0.2f64.ln()..5f64.ln())).exp(),
        rng.random_range(0.1..0.9),
    )
}

/// A ppPNNp ordering of the kernel sextuple.
pub fn box_ordering(rho: &BipartiteState) -> [ProductVector; 6] {
    let tol = ToleranceProfile::default();
    let s = kernel_sextuple(rho).unwrap();
    qutrit_ppt::group::Permutation::all()
        .into_iter()
        .map(|p| p.apply(&s))
        .find(|o| {
            sextuple_invariants(o, &tol)
                .and_then(|t| classify_symbol(&t, &tol))
                .is_ok_and(|sym| sym == Symbol::box_type())
        })
        .expect("a ppPNNp ordering exists")
}

fn cplx(rng: &mut impl Rng, scale: f64) -> qutrit_ppt::C64 {
    c(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

/// The normal form conjugated by a random ILO that keeps the pattern: blocks
/// 1 and 3 mixed on the A side, columns {0,2} mixed and column 1 scaled on
/// the B side.
pub fn pattern_preserving_instance(p: &CheckerboardParams, rng: &mut impl Rng) -> CheckerboardRaw {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let b = p.to_raw().blocks();
    let m = Matrix3::new(
        one + cplx(rng, 0.4), zero, cplx(rng, 0.4),
        zero, one + cplx(rng, 0.4), zero,
        cplx(rng, 0.4), zero, one + cplx(rng, 0.4),
    );
    let n = Matrix3::new(
        one + cplx(rng, 0.4), zero, cplx(rng, 0.4),
        zero, one + cplx(rng, 0.4), zero,
        cplx(rng, 0.4), zero, one + cplx(rng, 0.4),
    );
    let mut out = [Block::zeros(); 3];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..3 {
            *o += b[j] * m[(j, i)];
        }
    }
    CheckerboardRaw::from_blocks(&out.map(|x| x * n), 1e-12).unwrap()
}
