//! Dense complex polynomials in one and two variables, companion-matrix root
//! finding with Newton polishing, and Sylvester resultants.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};

use crate::matrix::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Univariate polynomial, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly::new(vec![])
    }

    pub fn constant(c: C64) -> Self {
        Poly::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: C64) -> Self {
        Poly::new(vec![-r, ONE])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Formal length minus one; the zero polynomial reports 0.
    pub fn formal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Drop leading coefficients below `rel · max|c_i|`.
    pub fn trimmed(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|z| z.norm() <= cut) {
            c.pop();
        }
        Poly::new(c)
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).copied().unwrap_or(ZERO) + other.coeffs.get(k).copied().unwrap_or(ZERO))
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// All complex roots: eigenvalues of the companion matrix, each refined by
    /// a few Newton steps on the polynomial itself.
    pub fn roots(&self) -> Vec<C64> {
        let p = self.trimmed(1e-14);
        let n = p.formal_degree();
        if p.coeffs.is_empty() || n == 0 {
            return Vec::new();
        }
        let lead = p.coeffs[n];
        let companion = DMatrix::from_fn(n, n, |i, j| {
            if i == 0 {
                -p.coeffs[n - 1 - j] / lead
            } else if i == j + 1 {
                ONE
            } else {
                ZERO
            }
        });
        let eig = Schur::new(companion)
            .eigenvalues()
            .expect("complex Schur form is triangular");
        let dp = p.derivative();
        eig.iter().map(|&z| newton_polish(&p, &dp, z)).collect()
    }
}

/// Newton iteration on a univariate polynomial; keeps the best iterate.
fn newton_polish(p: &Poly, dp: &Poly, z0: C64) -> C64 {
    let mut z = z0;
    let mut best = (p.eval(z).norm(), z);
    for _ in 0..8 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        z -= p.eval(z) / d;
        let r = p.eval(z).norm();
        if !r.is_finite() {
            break;
        }
        if r < best.0 {
            best = (r, z);
        }
        if r == 0.0 {
            break;
        }
    }
    best.1
}

/// Bivariate polynomial `Σ c[p][q] x^p y^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    coeffs: Vec<Vec<C64>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { coeffs: vec![] }
    }

    /// `c0 + cx·x + cy·y`.
    pub fn affine(c0: C64, cx: C64, cy: C64) -> Self {
        BiPoly {
            coeffs: vec![vec![c0, cy], vec![cx, ZERO]],
        }
    }

    fn get(&self, p: usize, q: usize) -> C64 {
        self.coeffs.get(p).and_then(|r| r.get(q)).copied().unwrap_or(ZERO)
    }

    fn dims(&self) -> (usize, usize) {
        let px = self.coeffs.len();
        let qy = self.coeffs.iter().map(|r| r.len()).max().unwrap_or(0);
        (px, qy)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let (a, b) = self.dims();
        let (c, d) = other.dims();
        let (px, qy) = (a.max(c), b.max(d));
        BiPoly {
            coeffs: (0..px)
                .map(|p| (0..qy).map(|q| self.get(p, q) + other.get(p, q)).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> BiPoly {
        BiPoly {
            coeffs: self.coeffs.iter().map(|r| r.iter().map(|&c| c * s).collect()).collect(),
        }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let (a, b) = self.dims();
        let (c, d) = other.dims();
        if a == 0 || b == 0 || c == 0 || d == 0 {
            return BiPoly::zero();
        }
        let mut out = vec![vec![ZERO; b + d - 1]; a + c - 1];
        for (p1, r1) in self.coeffs.iter().enumerate() {
            for (q1, &x) in r1.iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                for (p2, r2) in other.coeffs.iter().enumerate() {
                    for (q2, &y) in r2.iter().enumerate() {
                        out[p1 + p2][q1 + q2] += x * y;
                    }
                }
            }
        }
        BiPoly { coeffs: out }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(ZERO, |acc, row| acc * x + row.iter().rev().fold(ZERO, |a, &c| a * y + c))
    }

    /// Highest power of `y` with a coefficient above `rel · ‖self‖`.
    pub fn degree_y(&self, rel: f64) -> usize {
        let cut = rel * self.norm();
        let (px, qy) = self.dims();
        (0..qy)
            .rev()
            .find(|&q| (0..px).any(|p| self.get(p, q).norm() > cut))
            .unwrap_or(0)
    }

    /// Highest total degree with a coefficient above `rel · ‖self‖`.
    pub fn total_degree(&self, rel: f64) -> usize {
        let cut = rel * self.norm();
        let mut deg = 0;
        for (p, row) in self.coeffs.iter().enumerate() {
            for (q, c) in row.iter().enumerate() {
                if c.norm() > cut {
                    deg = deg.max(p + q);
                }
            }
        }
        deg
    }

    /// Substitute `x`, leaving a polynomial in `y`.
    pub fn at_x(&self, x: C64) -> Poly {
        let (_, qy) = self.dims();
        Poly::new(
            (0..qy)
                .map(|q| self.coeffs.iter().rev().fold(ZERO, |acc, row| acc * x + row.get(q).copied().unwrap_or(ZERO)))
                .collect(),
        )
    }
}

/// Sylvester resultant of two univariate polynomials of given formal degrees.
pub fn sylvester_resultant(f: &[C64], m: usize, g: &[C64], n: usize) -> C64 {
    let size = m + n;
    if size == 0 {
        return ONE;
    }
    let fc = |k: usize| f.get(k).copied().unwrap_or(ZERO);
    let gc = |k: usize| g.get(k).copied().unwrap_or(ZERO);
    let s = DMatrix::from_fn(size, size, |i, j| {
        if i < n {
            // shifted copies of f, descending powers
            if j >= i && j - i <= m {
                fc(m - (j - i))
            } else {
                ZERO
            }
        } else {
            let r = i - n;
            if j >= r && j - r <= n {
                gc(n - (j - r))
            } else {
                ZERO
            }
        }
    });
    s.determinant()
}

/// Number of circle samples used to interpolate a resultant in `x`.
pub const RESULTANT_SAMPLES: usize = 32;

/// `Res_y(f, g)` as a polynomial in `x`, by evaluating the Sylvester
/// determinant on the unit circle and interpolating with an inverse DFT.
///
/// The degree of the result is at most `deg f · deg g` (total degrees), so
/// the sample count must exceed that; coefficients past the bound are
/// interpolation noise and are dropped.
pub fn resultant_y(f: &BiPoly, g: &BiPoly, rel: f64) -> Poly {
    let m = f.degree_y(rel);
    let n = g.degree_y(rel);
    let bound = f.total_degree(rel) * g.total_degree(rel);
    let k = RESULTANT_SAMPLES;
    assert!(bound < k, "resultant degree {bound} exceeds the sample count");
    let values: Vec<C64> = (0..k)
        .map(|s| {
            let x = C64::from_polar(1.0, 2.0 * PI * s as f64 / k as f64);
            let fy = f.at_x(x);
            let gy = g.at_x(x);
            sylvester_resultant(fy.coeffs(), m, gy.coeffs(), n)
        })
        .collect();
    let coeffs: Vec<C64> = (0..=bound)
        .map(|p| {
            values
                .iter()
                .enumerate()
                .map(|(s, &v)| v * C64::from_polar(1.0, -2.0 * PI * (p * s) as f64 / k as f64))
                .sum::<C64>()
                / k as f64
        })
        .collect();
    Poly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn roots_of_product_of_linears() {
        let rs = [C64::new(1.0, 0.5), C64::new(-2.0, 0.0), C64::new(0.0, 3.0), C64::new(0.25, -0.25)];
        let p = rs.iter().fold(Poly::constant(C64::new(2.0, 1.0)), |acc, &r| acc.mul(&Poly::linear_root(r)));
        let found = p.roots();
        assert_eq!(found.len(), 4);
        for r in rs {
            assert!(found.iter().any(|&z| close(z, r, 1e-12)), "missing {r}");
        }
    }

    #[test]
    fn leading_zeros_are_trimmed() {
        let p = Poly::new(vec![C64::new(-1.0, 0.0), ONE, ZERO, ZERO]);
        let r = p.roots();
        assert_eq!(r.len(), 1);
        assert!(close(r[0], ONE, 1e-15));
        assert!(Poly::constant(ONE).roots().is_empty());
    }

    #[test]
    fn sylvester_of_shared_root_vanishes() {
        let f = Poly::linear_root(ONE).mul(&Poly::linear_root(C64::new(2.0, 0.0)));
        let g = Poly::linear_root(ONE).mul(&Poly::linear_root(C64::new(-3.0, 0.0)));
        assert!(sylvester_resultant(f.coeffs(), 2, g.coeffs(), 2).norm() < 1e-12);
        let h = Poly::linear_root(C64::new(5.0, 0.0));
        // Res(f, x - 5) = ±f(5) = ±12
        let r = sylvester_resultant(f.coeffs(), 2, h.coeffs(), 1);
        assert!((r.norm() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn resultant_in_x_finds_common_zeros() {
        // f = y - x, g = y^2 - 1  ->  Res_y = x^2 - 1 (up to sign)
        let x = BiPoly::affine(ZERO, ONE, ZERO);
        let y = BiPoly::affine(ZERO, ZERO, ONE);
        let f = y.sub(&x);
        let g = y.mul(&y).sub(&BiPoly::affine(ONE, ZERO, ZERO));
        let r = resultant_y(&f, &g, 1e-14).trimmed(1e-12);
        assert_eq!(r.formal_degree(), 2);
        let mut roots: Vec<f64> = r.roots().iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] + 1.0).abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bipoly_eval_matches_substitution() {
        let p = BiPoly::affine(C64::new(1.0, 0.0), C64::new(2.0, 1.0), C64::new(-1.0, 0.5));
        let q = p.mul(&p).mul(&p);
        let (x, y) = (C64::new(0.3, -0.2), C64::new(-0.7, 0.1));
        assert!(close(q.eval(x, y), q.at_x(x).eval(y), 1e-13));
        assert!(close(q.eval(x, y), p.eval(x, y).powu(3), 1e-13));
        assert_eq!(q.degree_y(1e-14), 3);
    }
}
