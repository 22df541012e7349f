//! Product vectors in subspaces of C³⊗C³.
//!
//! A subspace is given by an orthonormal basis `w_1..w_k` of its orthogonal
//! complement. A product vector `a⊗b` lies in it iff `M(a) b = 0`, where
//! `M(a)[j][l] = Σ_i conj(w_j[3i+l]) a_i`, so the admissible `a` are the common
//! zeros of the 3×3 minors of `M(a)`. These are cubic in `a`; in the affine
//! chart `a = (1, x, y)` two of them are eliminated against each other with a
//! resultant in `y`, and the remaining charts `(0, 1, y)` and `(0, 0, 1)` are
//! handled directly. Before any of this the problem is rotated by a random
//! local unitary so that no solution sits on a chart boundary or at infinity
//! by accident.

use nalgebra::{DMatrix, DVector, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{column_space_split, random_unitary, svd, ComplexMatrix, C64};
use crate::poly::{resultant_y, BiPoly, Poly};
use crate::product::{ray_distance, ProductVector, Vec3, PROJECTIVE_DEDUP};
use crate::state::DIM;
use crate::tolerance::ToleranceProfile;

/// Accepted product vectors satisfy every constraint below this.
pub const ACCEPT_RESIDUAL: f64 = 1e-10;

/// Candidates between [`ACCEPT_RESIDUAL`] and this are treated as failed
/// convergence rather than as spurious roots.
pub const NEAR_MISS_RESIDUAL: f64 = 1e-6;

/// Random points checked before a vanishing resultant is taken to mean a
/// curve of solutions. A false positive needs every sample to land on the
/// zero set of the minors, which has measure zero off a genuine curve.
pub const CURVE_SAMPLES: usize = 20;

/// Gauss-Newton iteration cap on the minor system.
pub const MAX_POLISH_ITERATIONS: usize = 50;

pub const DEFAULT_SEED: u64 = 0x3a3b_5eed;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Polynomials with coefficient norm below this count as identically zero.
/// Constraint vectors are unit vectors, so minors have O(1) coefficients.
const ZERO_POLY: f64 = 1e-11;
/// Relative size of a resultant below which the pair is considered degenerate.
const DEGENERATE_RESULTANT: f64 = 1e-10;
/// Seeds from back-substitution worse than this are not polished. Roots of
/// high multiplicity come out of the companion matrix with errors of order
/// `ε^(1/m)`, so this is loose.
const SEED_RESIDUAL: f64 = 1e-1;
/// Polishing stops after this many iterations without a 1% improvement.
const STALL_ITERATIONS: usize = 6;
/// A near miss this close to an accepted vector is the same root.
const NEAR_MISS_MERGE: f64 = 1e-5;
/// `σ₂/σ₁` of `M(a)` below this means a whole line of `b`.
const NULLITY_GAP: f64 = 1e-8;

/// A subspace of C⁹ stored through its orthogonal complement.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSpec {
    constraints: Vec<DVector<C64>>,
}

impl SubspaceSpec {
    /// The subspace orthogonal to `vs`. The vectors are orthonormalized; a
    /// rank-deficient set is rejected.
    pub fn from_constraints(vs: &[DVector<C64>], tol: &ToleranceProfile) -> Result<Self> {
        check_lengths(vs)?;
        if vs.is_empty() {
            return Ok(Self::whole_space());
        }
        let m = columns(vs);
        let (range, _) = column_space_split(&m, tol);
        if range.len() < vs.len() {
            return Err(Error::DependentConstraints);
        }
        Ok(Self { constraints: range })
    }

    /// The span of `vs`.
    pub fn from_spanning(vs: &[DVector<C64>], tol: &ToleranceProfile) -> Result<Self> {
        check_lengths(vs)?;
        if vs.is_empty() {
            return Ok(Self {
                constraints: (0..DIM).map(unit).collect(),
            });
        }
        let (_, rest) = column_space_split(&columns(vs), tol);
        Ok(Self { constraints: rest })
    }

    /// `ker m` for a 9-column matrix.
    pub fn kernel_of(m: &ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        if m.cols() != DIM {
            return Err(Error::DimensionMismatch {
                expected: "9 columns".into(),
                found: m.cols().to_string(),
            });
        }
        // ker m is the orthogonal complement of the column space of m†.
        let (range, _) = column_space_split(&m.adjoint(), tol);
        Ok(Self { constraints: range })
    }

    /// Column space of a 9-row matrix.
    pub fn range_of(m: &ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        if m.rows() != DIM {
            return Err(Error::DimensionMismatch {
                expected: "9 rows".into(),
                found: m.rows().to_string(),
            });
        }
        let (_, rest) = column_space_split(m, tol);
        Ok(Self { constraints: rest })
    }

    pub fn whole_space() -> Self {
        Self { constraints: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        DIM - self.constraints.len()
    }

    pub fn constraints(&self) -> &[DVector<C64>] {
        &self.constraints
    }

    /// Norm of the component of `v/‖v‖` orthogonal to the subspace.
    pub fn residual(&self, v: &DVector<C64>) -> f64 {
        let n = v.norm();
        self.constraints
            .iter()
            .map(|w| w.dotc(v).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / n
    }

    pub fn contains_product(&self, p: &ProductVector) -> f64 {
        self.residual(&p.tensor())
    }

    /// `(V⊗W) S`. Constraints transform by the inverse adjoint.
    pub fn transformed(&self, v: &ComplexMatrix, w: &ComplexMatrix, tol: &ToleranceProfile) -> Result<Self> {
        let op = v.kron(w);
        let inv = op
            .inner()
            .clone()
            .try_inverse()
            .ok_or(Error::InvalidParameter {
                name: "local operator",
                value: 0.0,
                reason: "must be invertible",
            })?;
        let inv_adj = inv.adjoint();
        let moved: Vec<DVector<C64>> = self.constraints.iter().map(|c| &inv_adj * c).collect();
        Self::from_constraints(&moved, tol)
    }
}

fn unit(i: usize) -> DVector<C64> {
    let mut v = DVector::zeros(DIM);
    v[i] = ONE;
    v
}

fn check_lengths(vs: &[DVector<C64>]) -> Result<()> {
    if let Some(v) = vs.iter().find(|v| v.len() != DIM) {
        return Err(Error::DimensionMismatch {
            expected: "vectors in C^9".into(),
            found: format!("length {}", v.len()),
        });
    }
    Ok(())
}

fn columns(vs: &[DVector<C64>]) -> ComplexMatrix {
    ComplexMatrix::from_inner(DMatrix::from_fn(DIM, vs.len(), |i, j| vs[j][i]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PvStatus {
    Finite,
    Infinite,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct PvSearchResult {
    pub status: PvStatus,
    /// Distinct product vectors, sorted canonically. Complete only when the
    /// status is `Finite`.
    pub vectors: Vec<ProductVector>,
    /// Constraint residual of each reported vector.
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PvSearchResult {
    fn infinite(note: impl Into<String>) -> Self {
        Self {
            status: PvStatus::Infinite,
            vectors: Vec::new(),
            residuals: Vec::new(),
            note: Some(note.into()),
        }
    }

    /// The vectors of a finite result; other statuses become errors.
    pub fn into_finite(self) -> Result<Vec<ProductVector>> {
        match self.status {
            PvStatus::Finite => Ok(self.vectors),
            PvStatus::Infinite => Err(Error::Indeterminate(
                "subspace contains infinitely many product vectors".into(),
            )),
            PvStatus::Indeterminate => Err(Error::Indeterminate(self.note.unwrap_or_default())),
        }
    }
}

/// Search with the default seed.
pub fn find_product_vectors(s: &SubspaceSpec) -> PvSearchResult {
    Finder::default().search(s)
}

/// True iff the subspace contains no product vector.
pub fn is_ces(s: &SubspaceSpec) -> Result<bool> {
    let r = find_product_vectors(s);
    match r.status {
        PvStatus::Finite => Ok(r.vectors.is_empty()),
        PvStatus::Infinite => Ok(false),
        PvStatus::Indeterminate => Err(Error::Indeterminate(r.note.unwrap_or_default())),
    }
}

/// Every set of at most three A-sides, and of at most three B-sides, is
/// linearly independent.
pub fn in_general_position(vs: &[ProductVector], tol: &ToleranceProfile) -> bool {
    let sides: [Vec<Vec3>; 2] = [
        vs.iter().map(|p| p.a().normalize()).collect(),
        vs.iter().map(|p| p.b().normalize()).collect(),
    ];
    sides.iter().all(|side| independent_subsets(side, tol.rank))
}

fn independent_subsets(vs: &[Vec3], rel: f64) -> bool {
    let n = vs.len();
    let ok = |cols: &[&Vec3]| {
        let m = DMatrix::from_fn(3, cols.len(), |i, j| cols[j][i]);
        let s = svd(&m, f64::INFINITY).values;
        s[0] > 0.0 && s[s.len() - 1] > rel * s[0]
    };
    for i in 0..n {
        for j in i + 1..n {
            if !ok(&[&vs[i], &vs[j]]) {
                return false;
            }
            for k in j + 1..n {
                if !ok(&[&vs[i], &vs[j], &vs[k]]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Seeded product-vector search. The seed only picks the random frame, so any
/// seed gives the same answer up to rounding.
#[derive(Debug, Clone, Copy)]
pub struct Finder {
    seed: u64,
}

impl Default for Finder {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED }
    }
}

impl Finder {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn search(&self, s: &SubspaceSpec) -> PvSearchResult {
        let k = s.constraints.len();
        if k <= 3 {
            // A projective subspace of dimension ≥ 5 meets the 4-dimensional
            // Segre variety in P⁸ along a positive-dimensional set.
            return PvSearchResult::infinite(format!("subspace of dimension {} ≥ 6", DIM - k));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let ua = random_unitary(&mut rng, 3);
        let ub = random_unitary(&mut rng, 3);
        let rot = ua.kron(&ub);
        let rotated: Vec<DVector<C64>> = s.constraints.iter().map(|w| rot.apply(w)).collect();
        let sys = MinorSystem::new(&rotated);
        let original = MinorSystem::new(&s.constraints);

        let seeds = match sys.seeds(&mut rng) {
            Ok(seeds) => seeds,
            Err(Outcome::Infinite(note)) => return PvSearchResult::infinite(note),
            Err(Outcome::Indeterminate(note)) => {
                return PvSearchResult {
                    status: PvStatus::Indeterminate,
                    vectors: Vec::new(),
                    residuals: Vec::new(),
                    note: Some(note),
                }
            }
        };

        let ua_adj = ua.adjoint();
        let ub_adj = ub.adjoint();
        let mut accepted: Vec<(ProductVector, f64)> = Vec::new();
        let mut near: Vec<(ProductVector, f64)> = Vec::new();
        for seed in seeds {
            let a = sys.polish(seed);
            let (b, _) = sys.null_vector(&a);
            let a0 = apply3(&ua_adj, &a);
            let b0 = apply3(&ub_adj, &b);
            let (a0, b0, res) = polish_bilinear(&s.constraints, a0, b0);
            if res < ACCEPT_RESIDUAL && original.null_vector(&a0).1 < NULLITY_GAP {
                return PvSearchResult::infinite("a line of B-side vectors pairs with one A-side vector");
            }
            let Ok(pv) = ProductVector::new(a0, b0) else { continue };
            if res < ACCEPT_RESIDUAL {
                if !accepted.iter().any(|(q, _)| q.distance(&pv) < PROJECTIVE_DEDUP) {
                    accepted.push((pv, res));
                }
            } else if res < NEAR_MISS_RESIDUAL {
                near.push((pv, res));
            }
        }
        accepted.sort_by(|x, y| x.0.canonical_cmp(&y.0));

        let unresolved: Vec<f64> = near
            .iter()
            .filter(|(p, _)| !accepted.iter().any(|(q, _)| q.distance(p) < NEAR_MISS_MERGE))
            .map(|(_, r)| *r)
            .collect();
        let (status, note) = if unresolved.is_empty() {
            (PvStatus::Finite, None)
        } else {
            (
                PvStatus::Indeterminate,
                Some(format!(
                    "{} candidate(s) stalled with residuals {:?}",
                    unresolved.len(),
                    unresolved
                )),
            )
        };
        PvSearchResult {
            status,
            residuals: accepted.iter().map(|x| x.1).collect(),
            vectors: accepted.into_iter().map(|x| x.0).collect(),
            note,
        }
    }
}

enum Outcome {
    Infinite(String),
    Indeterminate(String),
}

fn apply3(m: &ComplexMatrix, v: &Vec3) -> Vec3 {
    let d = m.apply(&DVector::from_column_slice(v.as_slice()));
    Vec3::new(d[0], d[1], d[2])
}

/// The minors of `M(a) = Σ_i a_i W_i` for every triple of constraint rows.
struct MinorSystem {
    w: [DMatrix<C64>; 3],
    triples: Vec<[usize; 3]>,
}

impl MinorSystem {
    fn new(constraints: &[DVector<C64>]) -> Self {
        let k = constraints.len();
        let w = [0, 1, 2].map(|i| DMatrix::from_fn(k, 3, |j, l| constraints[j][3 * i + l].conj()));
        let mut triples = Vec::new();
        for p in 0..k {
            for q in p + 1..k {
                for r in q + 1..k {
                    triples.push([p, q, r]);
                }
            }
        }
        Self { w, triples }
    }

    fn m_of(&self, a: &Vec3) -> DMatrix<C64> {
        &self.w[0] * a[0] + &self.w[1] * a[1] + &self.w[2] * a[2]
    }

    fn block(m: &DMatrix<C64>, t: &[usize; 3]) -> Matrix3<C64> {
        Matrix3::from_fn(|r, c| m[(t[r], c)])
    }

    fn minors(&self, a: &Vec3) -> Vec<C64> {
        let m = self.m_of(a);
        self.triples.iter().map(|t| Self::block(&m, t).determinant()).collect()
    }

    /// Largest minor of `a/‖a‖∞`.
    fn scaled_residual(&self, a: &Vec3) -> f64 {
        let top = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if top == 0.0 {
            return f64::INFINITY;
        }
        let a = a / C64::new(top, 0.0);
        self.minors(&a).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Minors in the chart `a = base + x·dx + y·dy`, as bivariate polynomials.
    fn chart_minors(&self, base: usize, dx: Option<usize>, dy: Option<usize>) -> Vec<BiPoly> {
        let entry = |r: usize, l: usize| {
            BiPoly::affine(
                self.w[base][(r, l)],
                dx.map_or(ZERO, |i| self.w[i][(r, l)]),
                dy.map_or(ZERO, |i| self.w[i][(r, l)]),
            )
        };
        self.triples
            .iter()
            .map(|t| {
                let e: Vec<Vec<BiPoly>> = t.iter().map(|&r| (0..3).map(|l| entry(r, l)).collect()).collect();
                let cof = |a: usize, b: usize, c: usize, d: usize| e[1][a].mul(&e[2][b]).sub(&e[1][c].mul(&e[2][d]));
                e[0][0]
                    .mul(&cof(1, 2, 2, 1))
                    .sub(&e[0][1].mul(&cof(0, 2, 2, 0)))
                    .add(&e[0][2].mul(&cof(0, 1, 1, 0)))
            })
            .collect()
    }

    /// Candidate A-side vectors from all three charts.
    fn seeds(&self, rng: &mut ChaCha8Rng) -> std::result::Result<Vec<Vec3>, Outcome> {
        let mut seeds = Vec::new();
        let keep = |a: Vec3, seeds: &mut Vec<Vec3>| {
            if self.scaled_residual(&a) < SEED_RESIDUAL {
                seeds.push(a);
            }
        };

        // Chart (1, x, y).
        let minors = self.chart_minors(0, Some(1), Some(2));
        let mut order: Vec<usize> = (0..minors.len()).collect();
        order.sort_by(|&i, &j| minors[j].norm().total_cmp(&minors[i].norm()));
        if minors[order[0]].norm() < ZERO_POLY {
            return Err(Outcome::Infinite("every minor vanishes identically".into()));
        }
        match self.eliminate(&minors, &order, rng) {
            Some(res) => {
                for x in res.roots() {
                    let ys = minors.iter().map(|m| m.at_x(x)).max_by(|p, q| p.norm().total_cmp(&q.norm()));
                    let ys = ys.expect("at least four minors");
                    let scale = (1.0 + x.norm()).powi(3);
                    if ys.norm() < ZERO_POLY * scale {
                        if self.vertical_line(x, rng) {
                            return Err(Outcome::Infinite("a line of A-side vectors".into()));
                        }
                        continue;
                    }
                    for y in ys.roots() {
                        keep(Vec3::new(ONE, x, y), &mut seeds);
                    }
                }
            }
            None => {
                if self.curve_confirmed(&minors, rng) {
                    return Err(Outcome::Infinite("the minors share a curve of common zeros".into()));
                }
                return Err(Outcome::Indeterminate(
                    "all resultants vanish but no curve of solutions was confirmed".into(),
                ));
            }
        }

        // Chart (0, 1, y).
        let line: Vec<Poly> = self.chart_minors(1, None, Some(2)).iter().map(|m| m.at_x(ZERO)).collect();
        let top = line.iter().max_by(|p, q| p.norm().total_cmp(&q.norm())).expect("minors");
        if top.norm() < ZERO_POLY {
            return Err(Outcome::Infinite("every A-side vector on a line is a solution".into()));
        }
        for y in top.roots() {
            keep(Vec3::new(ZERO, ONE, y), &mut seeds);
        }

        // Chart (0, 0, 1).
        keep(Vec3::new(ZERO, ZERO, ONE), &mut seeds);
        Ok(seeds)
    }

    /// The best-conditioned resultant among pairs of large minors and random
    /// combinations of all of them, or `None` if every candidate degenerates.
    fn eliminate(&self, minors: &[BiPoly], order: &[usize], rng: &mut ChaCha8Rng) -> Option<Poly> {
        let mut pairs: Vec<(BiPoly, BiPoly)> = Vec::new();
        for (n, &i) in order.iter().enumerate() {
            for &j in &order[n + 1..] {
                if pairs.len() < 10 {
                    pairs.push((minors[i].clone(), minors[j].clone()));
                }
            }
        }
        for _ in 0..3 {
            let f = random_combination(minors, rng);
            let g = random_combination(minors, rng);
            pairs.push((f, g));
        }
        let mut best: Option<(f64, Poly)> = None;
        for (f, g) in pairs {
            let (fnorm, gnorm) = (f.norm(), g.norm());
            if fnorm < ZERO_POLY || gnorm < ZERO_POLY {
                continue;
            }
            let m = f.degree_y(1e-14) as i32;
            let n = g.degree_y(1e-14) as i32;
            let res = resultant_y(&f, &g, 1e-14);
            let quality = res.norm() / (fnorm.powi(n) * gnorm.powi(m));
            if quality > DEGENERATE_RESULTANT && best.as_ref().is_none_or(|b| quality > b.0) {
                best = Some((quality, res));
            }
        }
        best.map(|(_, res)| res.trimmed(1e-13))
    }

    /// Common zeros at random abscissae: the minors share a curve if every
    /// sample has a common root in y.
    fn curve_confirmed(&self, minors: &[BiPoly], rng: &mut ChaCha8Rng) -> bool {
        (0..CURVE_SAMPLES).all(|_| {
            let x = random_point(rng);
            let polys: Vec<Poly> = minors.iter().map(|m| m.at_x(x)).collect();
            let top = polys.iter().max_by(|p, q| p.norm().total_cmp(&q.norm())).expect("minors");
            if top.norm() < ZERO_POLY {
                return true;
            }
            top.roots().into_iter().any(|y| {
                let a = self.polish(Vec3::new(ONE, x, y));
                self.scaled_residual(&a) < 1e-10 && (a[1] / a[0]).is_finite()
            })
        })
    }

    /// Every `(1, x, y)` solves the system for fixed `x`.
    fn vertical_line(&self, x: C64, rng: &mut ChaCha8Rng) -> bool {
        (0..CURVE_SAMPLES).all(|_| self.scaled_residual(&Vec3::new(ONE, x, random_point(rng))) < 1e-8)
    }

    /// Gauss-Newton on all minors in the chart of the largest coordinate.
    fn polish(&self, a: Vec3) -> Vec3 {
        let pivot = (0..3).max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm())).unwrap_or(0);
        if a[pivot].norm() == 0.0 {
            return a;
        }
        let mut a = a / a[pivot];
        let free: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
        let scale = self.coefficient_scale();
        let mut best = (residual_norm(&self.minors(&a)), a);
        let mut stalled = 0;
        for _ in 0..MAX_POLISH_ITERATIONS {
            let m = self.m_of(&a);
            let n = self.triples.len();
            let mut f = DVector::<C64>::zeros(n);
            let mut jac = DMatrix::<C64>::zeros(n, 2);
            for (row, t) in self.triples.iter().enumerate() {
                let blk = Self::block(&m, t);
                f[row] = blk.determinant();
                let adj = adjugate(&blk);
                for (col, &i) in free.iter().enumerate() {
                    jac[(row, col)] = (adj * Self::block(&self.w[i], t)).trace();
                }
            }
            let r = f.norm();
            if r < 0.99 * best.0 {
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= STALL_ITERATIONS {
                    break;
                }
            }
            if r < best.0 {
                best = (r, a);
            }
            if r < 1e-12 * (1.0 + scale) || !r.is_finite() {
                break;
            }
            let Some(step) = least_squares(&jac, &f) else { break };
            for (col, &i) in free.iter().enumerate() {
                a[i] -= step[col];
            }
        }
        let r = residual_norm(&self.minors(&a));
        if r < best.0 {
            a
        } else {
            best.1
        }
    }

    fn coefficient_scale(&self) -> f64 {
        self.w.iter().map(|m| m.norm()).fold(0.0, f64::max).powi(3)
    }

    /// Smallest right singular vector of `M(a)` and the ratio `σ₂/σ₁`.
    fn null_vector(&self, a: &Vec3) -> (Vec3, f64) {
        let m = self.m_of(&a.normalize());
        let s = svd(&m, f64::INFINITY).values;
        let gap = if s[0] > 0.0 { s[1] / s[0] } else { 0.0 };
        // The null vector only seeds the bilinear polish, so the normal
        // equations are accurate enough here.
        let eig = nalgebra::SymmetricEigen::new(m.adjoint() * &m);
        let low = (0..3)
            .min_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]))
            .unwrap_or(0);
        let col = eig.eigenvectors.column(low);
        (Vec3::new(col[0], col[1], col[2]), gap)
    }
}

fn residual_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn adjugate(m: &Matrix3<C64>) -> Matrix3<C64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
    // adj[i][j] = cofactor[j][i]
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

/// Minimum-norm least-squares solution of `J δ = f`.
fn least_squares(j: &DMatrix<C64>, f: &DVector<C64>) -> Option<DVector<C64>> {
    let d = svd(j, 1e-13);
    if d.u.is_empty() {
        return None;
    }
    let mut out = DVector::<C64>::zeros(j.ncols());
    for i in 0..d.u.len() {
        out += &d.v[i] * (d.u[i].dotc(f) / d.values[i]);
    }
    Some(out)
}

fn random_point(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(rng.random_range(0.2..1.5), rng.random_range(0.0..std::f64::consts::TAU))
}

fn random_combination(minors: &[BiPoly], rng: &mut ChaCha8Rng) -> BiPoly {
    minors
        .iter()
        .fold(BiPoly::zero(), |acc, m| acc.add(&m.scale(random_point(rng))))
}

/// Gauss-Newton on `⟨w_j| a⊗b⟩ = 0` in both factors at once, keeping both
/// unit length. Returns the polished factors and their final residual.
fn polish_bilinear(constraints: &[DVector<C64>], a: Vec3, b: Vec3) -> (Vec3, Vec3, f64) {
    let k = constraints.len();
    let eval = |a: &Vec3, b: &Vec3| -> DVector<C64> {
        DVector::from_fn(k, |j, _| {
            let w = &constraints[j];
            let mut s = ZERO;
            for i in 0..3 {
                for l in 0..3 {
                    s += w[3 * i + l].conj() * a[i] * b[l];
                }
            }
            s
        })
    };
    let mut a = a.normalize();
    let mut b = b.normalize();
    let mut f = eval(&a, &b);
    let mut best = (f.norm(), a, b);
    for _ in 0..12 {
        if best.0 < 1e-15 {
            break;
        }
        let jac = DMatrix::from_fn(k, 6, |j, c| {
            let w = &constraints[j];
            if c < 3 {
                (0..3).map(|l| w[3 * c + l].conj() * b[l]).sum()
            } else {
                let l = c - 3;
                (0..3).map(|i| w[3 * i + l].conj() * a[i]).sum()
            }
        });
        let Some(step) = least_squares(&jac, &f) else { break };
        for i in 0..3 {
            a[i] -= step[i];
            b[i] -= step[3 + i];
        }
        if a.norm() == 0.0 || b.norm() == 0.0 {
            break;
        }
        a = a.normalize();
        b = b.normalize();
        f = eval(&a, &b);
        let r = f.norm();
        if !r.is_finite() {
            break;
        }
        if r < best.0 {
            best = (r, a, b);
        } else if r > 2.0 * best.0 {
            break;
        }
    }
    // The residual is measured on the normalized tensor, which is |a||b| = 1.
    let (r, a, b) = best;
    let t: Vec<C64> = (0..9).map(|n| a[n / 3] * b[n % 3]).collect();
    let check: f64 = constraints
        .iter()
        .map(|w| w.iter().zip(&t).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr())
        .sum::<f64>()
        .sqrt();
    debug_assert!((check - r).abs() <= 1e-12 + r);
    (a, b, check)
}

/// Whether the tensor of `p` is within `tol` of a vector in `vs`, as rays.
pub fn contains_ray(vs: &[ProductVector], p: &ProductVector, tol: f64) -> bool {
    vs.iter()
        .any(|q| ray_distance(q.tensor().as_slice(), p.tensor().as_slice()) < tol)
}
