//! The stabilizer acting on box coordinates, and the map from box coordinates
//! to canonical parameters.

use crate::builders::CanonicalParams;
use crate::error::{Error, Result};
use crate::group::Generator;
use crate::invariants::InvariantQuadruple;
use crate::tolerance::ToleranceProfile;

/// Denominators smaller than this in modulus are treated as vanishing.
pub const DENOMINATOR_FLOOR: f64 = 1e-7;

fn nonzero(v: f64, name: &'static str) -> Result<f64> {
    if v.abs() > DENOMINATOR_FLOOR && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::DenominatorVanishes(name))
    }
}

/// Box coordinates after reordering the sextuple by the involution.
pub fn act_beta(q: &InvariantQuadruple) -> Result<InvariantQuadruple> {
    let [a, b, c, d] = q.as_array();
    let one_c = nonzero(1.0 - c, "1-c")?;
    let one_abd = nonzero(1.0 - a * b * d, "1-abd")?;
    let one_cd = nonzero(1.0 - c * d, "1-cd")?;
    let b_c = nonzero(b - c, "b-c")?;
    let d = nonzero(d, "d")?;
    let one_a = nonzero(1.0 - a, "1-a")?;
    let one_ab = nonzero(1.0 - a * b, "1-ab")?;
    let one_acd = nonzero(1.0 - a * c * d, "1-acd")?;
    Ok(InvariantQuadruple::new(
        (1.0 - d) * b_c / (one_c * one_abd),
        b * one_c * one_acd / (one_cd * b_c),
        -(1.0 / d) * (1.0 - b) * one_acd / (one_a * b_c),
        one_a * one_abd / (one_ab * one_acd),
    ))
}

/// Box coordinates after reordering the sextuple by the 5-cycle, with
/// `e = (1-a) + ad(1-b)`.
pub fn act_alpha(q: &InvariantQuadruple) -> Result<InvariantQuadruple> {
    let [a, b, c, d] = q.as_array();
    let e = (1.0 - a) + a * d * (1.0 - b);
    let one_cd = nonzero(1.0 - c * d, "1-cd")?;
    let one_c = nonzero(1.0 - c, "1-c")?;
    let one_abd = nonzero(1.0 - a * b * d, "1-abd")?;
    let one_b = nonzero(1.0 - b, "1-b")?;
    let c = nonzero(c, "c")?;
    let f = nonzero((1.0 - a * b) - c * e, "(1-ab)-ce")?;
    Ok(InvariantQuadruple::new(
        d * one_c / one_cd,
        f / (one_c * one_abd),
        (b / c) * f / (one_b * one_abd),
        -c * (1.0 - a) * one_abd / f,
    ))
}

pub fn act(g: Generator, q: &InvariantQuadruple) -> Result<InvariantQuadruple> {
    match g {
        Generator::Alpha => act_alpha(q),
        Generator::Beta => act_beta(q),
    }
}

/// Image of a word, generators applied left to right.
pub fn act_word(word: &[Generator], q: &InvariantQuadruple) -> Result<InvariantQuadruple> {
    word.iter().try_fold(*q, |acc, &g| act(g, &acc))
}

/// Closure of `{q}` under both maps, deduplicated at `ε_match`.
pub fn orbit(q: &InvariantQuadruple, tol: &ToleranceProfile) -> Result<Vec<InvariantQuadruple>> {
    let mut points = vec![*q];
    let mut next = 0;
    while next < points.len() {
        let p = points[next];
        next += 1;
        for g in [Generator::Alpha, Generator::Beta] {
            let image = act(g, &p)?;
            if !points.iter().any(|x| x.approx_eq(&image, tol.matching)) {
                points.push(image);
                if points.len() > 60 {
                    return Err(Error::Defect("orbit larger than the group".into()));
                }
            }
        }
    }
    Ok(points)
}

fn positive_root(v: f64, name: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v.sqrt())
    } else {
        Err(Error::Defect(format!("nonpositive radicand for {name}: {v}")))
    }
}

/// Canonical parameters whose kernel has box coordinates `q` for a suitable
/// ordering.
pub fn phi(q: &InvariantQuadruple) -> Result<CanonicalParams> {
    if !q.in_box() {
        let [x, y, z, w] = q.as_array();
        return Err(Error::OutOfBox(x, y, z, w));
    }
    let [x, y, z, w] = q.as_array();
    let b2 = -(z * w / y) * (1.0 - y) * (1.0 - x * y) / ((1.0 - z * w) * (1.0 - x * z * w));
    let c2 = -(1.0 / z) * (1.0 - x * z) * (y - z * w) / ((1.0 - w) * (1.0 - x * y));
    let d2 = x * (1.0 - z) * (1.0 - w) / ((1.0 - x) * (1.0 - x * z * w));
    let b = positive_root(b2, "b")?;
    let c = positive_root(c2, "c")?;
    let d = positive_root(d2, "d")?;
    let a = (b * c * d / w) * (1.0 - x) * (1.0 - x * z * w) * (y - z * w) / ((1.0 - y) * (1.0 - x * z).powi(2));
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Defect(format!("nonpositive a: {a}")));
    }
    CanonicalParams::new(a, b, c, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn golden() -> InvariantQuadruple {
        let s5 = 5f64.sqrt();
        InvariantQuadruple::new((s5 - 1.0) / 2.0, (s5 - 1.0) / 2.0, -(s5 + 1.0) / 2.0, (3.0 - s5) / 2.0)
    }

    fn tiles() -> [InvariantQuadruple; 5] {
        [
            [0.5, 2.0 / 3.0, -1.0, 0.5],
            [0.5, 0.5, -2.0, 0.25],
            [2.0 / 3.0, 0.5, -2.0, 0.5],
            [2.0 / 3.0, 0.75, -3.0, 1.0 / 3.0],
            [0.75, 2.0 / 3.0, -1.0, 1.0 / 3.0],
        ]
        .map(InvariantQuadruple::from_array)
    }

    pub(crate) fn random_box_point(rng: &mut impl Rng) -> InvariantQuadruple {
        InvariantQuadruple::new(
            rng.random_range(0.05..0.95),
            rng.random_range(0.05..0.95),
            -rng.random_range(0.1..5.0),
            rng.random_range(0.05..0.95),
        )
    }

    #[test]
    fn golden_point_is_fixed() {
        let g = golden();
        assert!(act_alpha(&g).unwrap().approx_eq(&g, 1e-10));
        assert!(act_beta(&g).unwrap().approx_eq(&g, 1e-10));
        assert_eq!(orbit(&g, &ToleranceProfile::default()).unwrap().len(), 1);
    }

    #[test]
    fn tiles_orbit_has_five_points() {
        let t = tiles();
        let o = orbit(&t[0], &ToleranceProfile::default()).unwrap();
        assert_eq!(o.len(), 5);
        for p in &t {
            assert!(o.iter().any(|x| x.approx_eq(p, 1e-12)));
        }
        let image = act_alpha(&t[0]).unwrap();
        assert!(t.iter().any(|p| p.approx_eq(&image, 1e-12)));
    }

    #[test]
    fn generator_relations_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let q = random_box_point(&mut rng);
            let a5 = act_word(&[Generator::Alpha; 5], &q).unwrap();
            assert!(a5.approx_eq(&q, 1e-8), "{q:?} -> {a5:?}");
            let b2 = act_word(&[Generator::Beta; 2], &q).unwrap();
            assert!(b2.approx_eq(&q, 1e-8));
            assert!(act_alpha(&q).unwrap().in_box() && act_beta(&q).unwrap().in_box());
        }
    }

    #[test]
    fn generic_orbit_has_sixty_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = random_box_point(&mut rng);
        let o = orbit(&q, &ToleranceProfile::default()).unwrap();
        assert_eq!(o.len(), 60);
    }

    #[test]
    fn phi_of_tiles_point() {
        let p = phi(&tiles()[0]).unwrap().as_array();
        let s21 = 21f64.sqrt();
        let s5 = 5f64.sqrt();
        let expected = [7.0 * s21 / 27.0, 2.0 / (3.0 * s5), s21 / 2.0, 2.0 / s5];
        for (x, y) in p.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn phi_of_choi_quadruple() {
        let l: f64 = 0.7;
        let l3 = l.powi(3);
        let l6 = l3 * l3;
        let q = InvariantQuadruple::new((1.0 + l3) / 2.0, (1.0 - l3) / (1.0 + l3), -(1.0 + l3) / (1.0 - l3), 2.0 * l3 / (1.0 + l3));
        let [_, b, c, d] = phi(&q).unwrap().as_array();
        assert!((b * b - 2.0 * l6 / (1.0 + l6)).abs() < 1e-12);
        assert!((d * d - 2.0 / (1.0 + l6)).abs() < 1e-12);
        assert!((c * c - (3.0 + l6) * (1.0 + 3.0 * l6) / (1.0 - l6).powi(2)).abs() < 1e-10);
    }

    #[test]
    fn phi_rejects_points_outside_the_box() {
        let q = InvariantQuadruple::new(0.5, 0.5, 1.0, 0.5);
        assert!(matches!(phi(&q), Err(Error::OutOfBox(..))));
    }

    #[test]
    fn vanishing_denominator_is_named() {
        let q = InvariantQuadruple::new(0.5, 0.5, 0.5, 0.5);
        assert!(matches!(act_beta(&q), Err(Error::DenominatorVanishes("b-c"))));
    }
}
