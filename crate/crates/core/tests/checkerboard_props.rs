mod common;

use qutrit_ppt::action::phi;
use qutrit_ppt::builders::{checkerboard_canonical, checkerboard_raw, omega, CheckerboardParams};
use qutrit_ppt::checkerboard::{checkerboard_class, checkerboard_reduce, lambda_mu_of};
use qutrit_ppt::equivalence::is_equivalent;
use qutrit_ppt::invariants::sextuple_invariants;
use qutrit_ppt::{ProductVector, ToleranceProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

fn phi_t(p: &CheckerboardParams, t: f64) -> ProductVector {
    let (u, v) = (p.u, p.v);
    ProductVector::real([v, t * v, u * (t * t - 1.0)], [u * v * t * t, -t * v, u * (t * t - 1.0)]).unwrap()
}

/// `0 < x1 < 1 < x2` with `±x1, ±x2` the roots of the biquadratic.
fn biquadratic_roots(p: &CheckerboardParams) -> (f64, f64) {
    let (u2, v2) = (p.u * p.u, p.v * p.v);
    let (a, b, c) = (u2 * (1.0 + v2), -(u2 * v2 + 2.0 * u2 + v2), u2);
    let disc = (b * b - 4.0 * a * c).sqrt();
    (((-b - disc) / (2.0 * a)).sqrt(), ((-b + disc) / (2.0 * a)).sqrt())
}

#[test]
fn explicit_kernel_sextuple_of_the_normal_form() {
    let tol = ToleranceProfile::default();
    for u in GRID {
        for v in GRID {
            let p = CheckerboardParams::new(u, v).unwrap();
            let rho = checkerboard_canonical(&p).unwrap();
            let (x1, x2) = biquadratic_roots(&p);
            assert!(x1 < 1.0 && x2 > 1.0);
            // |φ5⟩ = |20⟩ − v|22⟩ = |2⟩ ⊗ (|0⟩ − v|2⟩).
            let six = [
                ProductVector::basis(0, 2),
                phi_t(&p, x1),
                phi_t(&p, -x1),
                phi_t(&p, x2),
                phi_t(&p, -x2),
                ProductVector::real([0.0, 0.0, 1.0], [1.0, 0.0, -v]).unwrap(),
            ];
            let norm = rho.matrix().spectral_norm();
            for pv in &six {
                assert!((rho.matrix().inner() * pv.unit_tensor()).norm() < 1e-10 * norm);
            }
            let t = sextuple_invariants(&six, &tol).unwrap();
            let (l, m) = lambda_mu_of(&p);
            let expected = [1.0 / (m * m), -m, -m, 1.0 / (l * l), l, l];
            assert!(ToleranceProfile::relative_gap(&t.as_array(), &expected) < 1e-9, "{t:?} vs {expected:?}");
            assert!(x1 * x1 * x2 * x2 < 1.0 && (x1 * x1 * x2 * x2 - 1.0 / (1.0 + v * v)).abs() < 1e-12);
        }
    }
}

#[test]
fn class_round_trips_on_the_grid_up_to_inverting_u() {
    let close = |p: &CheckerboardParams, u: f64, v: f64| (p.u - u).abs() < 1e-8 && (p.v - v).abs() < 1e-8;
    for u in GRID {
        for v in GRID {
            let verdict = checkerboard_class(&checkerboard_canonical(&CheckerboardParams::new(u, v).unwrap()).unwrap())
                .unwrap();
            assert!(verdict.is_checkerboard);
            let (p, alt) = (verdict.params.unwrap(), verdict.alternate.unwrap());
            assert!(p.u >= 1.0 - 1e-12);
            assert!(close(&p, u, v) || close(&alt, u, v), "({u},{v}) -> {p:?}, {alt:?}");
            let (l, m) = verdict.lambda_mu.unwrap();
            assert!(l > 1.0 && m > 0.0 && m < 1.0);
        }
    }
}

#[test]
fn inverting_u_gives_an_equivalent_state() {
    for (u, v) in [(0.5, 0.5), (5.0, 1.0), (0.2, 3.0)] {
        let a = checkerboard_canonical(&CheckerboardParams::new(u, v).unwrap()).unwrap();
        let b = checkerboard_canonical(&CheckerboardParams::new(1.0 / u, v).unwrap()).unwrap();
        assert!(is_equivalent(&a, &b).unwrap().equivalent);
    }
    let a = checkerboard_canonical(&CheckerboardParams::new(2.0, 1.0).unwrap()).unwrap();
    let b = checkerboard_canonical(&CheckerboardParams::new(2.0, 2.0).unwrap()).unwrap();
    assert!(!is_equivalent(&a, &b).unwrap().equivalent);
}

#[test]
fn box_coordinates_satisfy_the_rewritten_condition() {
    let tol = ToleranceProfile::default();
    let rho = checkerboard_canonical(&CheckerboardParams::new(2.0, 0.5).unwrap()).unwrap();
    let s = common::box_ordering(&rho);
    let t = sextuple_invariants(&s, &tol).unwrap();
    // In some box ordering J2 + J3 = 2 J2 J3 on both sides.
    let any = qutrit_ppt::group::stabilizer().into_iter().any(|g| {
        let t = sextuple_invariants(&g.apply(&s), &tol).unwrap();
        let a = (t.j2a * (1.0 - t.j1a * t.j2a) - (1.0 - t.j2a)).abs();
        let b = (t.j2b + t.j3b - 2.0 * t.j2b * t.j3b).abs();
        a < 1e-8 && b < 1e-8
    });
    assert!(any, "{t:?}");
}

#[test]
fn generic_states_are_not_checkerboard() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let rho = omega(&phi(&common::random_box_point(&mut rng)).unwrap()).unwrap();
        assert!(!checkerboard_class(&rho).unwrap().is_checkerboard);
    }
}

#[test]
fn reduction_of_conjugated_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (u, v) in [(1.0, 2.0), (0.5, 0.5), (5.0, 1.0), (2.0, 5.0)] {
        let p = CheckerboardParams::new(u, v).unwrap();
        for _ in 0..3 {
            let raw = common::pattern_preserving_instance(&p, &mut rng);
            let r = checkerboard_reduce(&raw).unwrap();
            let rho = checkerboard_raw(&raw).unwrap();
            assert!(is_equivalent(&rho, &checkerboard_canonical(&r).unwrap()).unwrap().equivalent);
            assert!((r.u - u).abs() < 1e-8 && (r.v - v).abs() < 1e-8, "({u},{v}) -> {r:?}");
        }
    }
}

#[test]
fn reduction_rejects_separable_pattern() {
    // All blocks diagonal-like: the range contains product vectors.
    let mut raw = CheckerboardParams::new(1.0, 1.0).unwrap().to_raw();
    raw.c = qutrit_ppt::C64::new(0.0, 0.0);
    raw.h = qutrit_ppt::C64::new(0.0, 0.0);
    let r = checkerboard_reduce(&raw);
    assert!(r.is_err(), "{r:?}");
}
