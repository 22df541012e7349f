mod common;

use proptest::prelude::*;
use qutrit_ppt::action::{act_word, phi};
use qutrit_ppt::builders::omega;
use qutrit_ppt::equivalence::{cubic_coefficients, cubic_discriminant, cubic_roots_check, kernel_sextuple};
use qutrit_ppt::group::{word_permutation, Generator, Permutation};
use qutrit_ppt::invariants::{
    classify_symbol, quintuple_invariants, sextuple_invariants, symbol_census, InvariantQuadruple, Symbol,
};
use qutrit_ppt::matrix::{c, ComplexMatrix};
use qutrit_ppt::upb::{pyramid_fixture, upb_state};
use qutrit_ppt::{ProductVector, ToleranceProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn words(max_len: usize) -> Vec<Vec<Generator>> {
    let mut all = vec![Vec::new()];
    let mut last = vec![Vec::new()];
    for _ in 0..max_len {
        last = last
            .iter()
            .flat_map(|w: &Vec<Generator>| {
                [Generator::Alpha, Generator::Beta].map(|g| {
                    let mut w = w.clone();
                    w.push(g);
                    w
                })
            })
            .collect();
        all.extend(last.iter().cloned());
    }
    all
}

#[test]
fn rational_maps_agree_with_permutations() {
    let tol = ToleranceProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let s = common::box_ordering(&common::random_omega(&mut rng));
        let q = sextuple_invariants(&s, &tol).unwrap().quadruple();
        for w in words(4) {
            let direct = sextuple_invariants(&word_permutation(&w).apply(&s), &tol).unwrap().quadruple();
            let mapped = act_word(&w, &q).unwrap();
            assert!(direct.approx_eq(&mapped, 1e-7), "{w:?}: {direct:?} vs {mapped:?}");
        }
    }
}

#[test]
fn census_of_canonical_and_pyramid_states() {
    let tol = ToleranceProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pyramid = upb_state(&pyramid_fixture().unwrap()).unwrap();
    let states = [common::random_omega(&mut rng), common::random_omega(&mut rng), pyramid];
    let mut reference = None;
    for rho in &states {
        let census = symbol_census(&kernel_sextuple(rho).unwrap(), &tol).unwrap();
        assert_eq!(census.len(), 12);
        assert!(census.values().all(|&n| n == 60));
        assert!(census.contains_key(&Symbol::box_type()));
        let keys: Vec<_> = census.keys().copied().collect();
        // The same twelve symbols appear for every state.
        assert_eq!(reference.get_or_insert(keys.clone()), &keys);
    }
}

#[test]
fn pyramid_state_kernel_gives_golden_point() {
    let tol = ToleranceProfile::default();
    let rho = upb_state(&pyramid_fixture().unwrap()).unwrap();
    let s = common::box_ordering(&rho);
    let q = sextuple_invariants(&s, &tol).unwrap().quadruple();
    let s5 = 5f64.sqrt();
    let g = InvariantQuadruple::new((s5 - 1.0) / 2.0, (s5 - 1.0) / 2.0, -(s5 + 1.0) / 2.0, (3.0 - s5) / 2.0);
    assert!(q.approx_eq(&g, 1e-9), "{q:?}");
}

#[test]
fn phi_round_trip_and_cubic() {
    let tol = ToleranceProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let q = common::random_box_point(&mut rng);
        let p = phi(&q).unwrap();
        let six = kernel_sextuple(&omega(&p).unwrap()).unwrap();
        let hit = Permutation::all().into_iter().any(|perm| {
            let t = sextuple_invariants(&perm.apply(&six), &tol).unwrap();
            classify_symbol(&t, &tol).is_ok_and(|s| s == Symbol::box_type()) && t.quadruple().approx_eq(&q, 1e-7)
        });
        assert!(hit, "{q:?}");
        let roots = cubic_roots_check(&p, &q).unwrap();
        assert!(roots[2] < 0.0);
        assert!(cubic_discriminant(&cubic_coefficients(&p)) > 0.0);
    }
}

fn product_strategy() -> impl Strategy<Value = ProductVector> {
    prop::array::uniform12(-1.0f64..1.0).prop_filter_map("nonzero sides", |x| {
        ProductVector::from_slices(
            [c(x[0], x[1]), c(x[2], x[3]), c(x[4], x[5])],
            [c(x[6], x[7]), c(x[8], x[9]), c(x[10], x[11])],
        )
        .ok()
    })
}

fn matrix_strategy() -> impl Strategy<Value = ComplexMatrix> {
    prop::array::uniform18(-0.3f64..0.3).prop_map(|x| {
        let data: Vec<_> = (0..9)
            .map(|k| c(x[2 * k] + if k % 4 == 0 { 1.0 } else { 0.0 }, x[2 * k + 1]))
            .collect();
        ComplexMatrix::from_row_slice(3, 3, &data)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complex_invariants_survive_local_maps(
        q in prop::array::uniform5(product_strategy()),
        v in matrix_strategy(),
        w in matrix_strategy(),
    ) {
        let tol = ToleranceProfile::default();
        let Ok(before) = qutrit_ppt::invariants::complex_invariants(&q, &tol) else {
            return Ok(());
        };
        let moved: Vec<ProductVector> = q.iter().map(|p| p.transformed(&v, &w).unwrap()).collect();
        let moved: [ProductVector; 5] = moved.try_into().unwrap();
        let Ok(after) = qutrit_ppt::invariants::complex_invariants(&moved, &tol) else {
            return Ok(());
        };
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).norm() <= 1e-6 * (1.0 + x.norm()), "{x} vs {y}");
        }
    }

    #[test]
    fn real_invariants_survive_local_maps_on_kernels(
        seed in any::<u64>(),
        v in matrix_strategy(),
        w in matrix_strategy(),
    ) {
        let tol = ToleranceProfile::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = kernel_sextuple(&common::random_omega(&mut rng)).unwrap();
        let five = [s[0], s[1], s[2], s[3], s[4]];
        let moved = five.map(|p| p.transformed(&v, &w).unwrap());
        let a = quintuple_invariants(&five, &tol).unwrap();
        let b = quintuple_invariants(&moved, &tol).unwrap();
        prop_assert!(ToleranceProfile::relative_gap(&a.as_array(), &b.as_array()) < tol.matching);
        prop_assert!(a.product_defect() < tol.matching);
    }
}
