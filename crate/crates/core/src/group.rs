//! Permutations of six product vectors and the order-60 group that preserves
//! the box type of invariants.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

/// A reordering of six items, applied as `out[i] = s[p[i]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(pub [usize; 6]);

/// The 5-cycle `(0 1 2 3 5)`: the sextuple becomes `(φ5, φ0, φ1, φ2, φ4, φ3)`.
pub const ALPHA: Permutation = Permutation([5, 0, 1, 2, 4, 3]);
/// The involution `(1 2)(4 5)`.
pub const BETA: Permutation = Permutation([0, 2, 1, 3, 5, 4]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2, 3, 4, 5]);

    /// `None` unless every index in `0..6` appears exactly once.
    pub fn new(p: [usize; 6]) -> Option<Self> {
        let mut seen = [false; 6];
        for &i in &p {
            if i >= 6 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(p))
    }

    pub fn apply<T: Copy>(&self, s: &[T; 6]) -> [T; 6] {
        self.0.map(|i| s[i])
    }

    /// `self` first, then `next`: `next.apply(self.apply(s)) = self.then(next).apply(s)`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation(next.0.map(|i| self.0[i]))
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = [0; 6];
        for (i, &p) in self.0.iter().enumerate() {
            out[p] = i;
        }
        Permutation(out)
    }

    /// All 720 permutations in lexicographic order.
    pub fn all() -> Vec<Permutation> {
        let mut p = [0, 1, 2, 3, 4, 5];
        let mut out = Vec::with_capacity(720);
        loop {
            out.push(Permutation(p));
            // Next permutation in lexicographic order.
            let Some(i) = (0..5).rev().find(|&i| p[i] < p[i + 1]) else {
                return out;
            };
            let j = (i + 1..6).rev().find(|&j| p[j] > p[i]).expect("exists");
            p.swap(i, j);
            p[i + 1..].reverse();
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A generator of the stabilizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Alpha,
    Beta,
}

impl Generator {
    pub fn permutation(self) -> Permutation {
        match self {
            Generator::Alpha => ALPHA,
            Generator::Beta => BETA,
        }
    }
}

/// The permutation of a word, applied left to right.
pub fn word_permutation(word: &[Generator]) -> Permutation {
    word.iter().fold(Permutation::IDENTITY, |acc, g| acc.then(&g.permutation()))
}

/// Closure of `{α, β}`, sorted.
pub fn stabilizer() -> Vec<Permutation> {
    let mut seen = BTreeSet::from([Permutation::IDENTITY]);
    let mut queue = VecDeque::from([Permutation::IDENTITY]);
    while let Some(p) = queue.pop_front() {
        for g in [ALPHA, BETA] {
            let q = p.then(&g);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(p: Permutation, n: usize) -> Permutation {
        (0..n).fold(Permutation::IDENTITY, |acc, _| acc.then(&p))
    }

    #[test]
    fn generator_orders() {
        assert_eq!(power(ALPHA, 5), Permutation::IDENTITY);
        assert_ne!(power(ALPHA, 1), Permutation::IDENTITY);
        assert_eq!(power(BETA, 2), Permutation::IDENTITY);
    }

    #[test]
    fn order_sixty_and_transitive() {
        let g = stabilizer();
        assert_eq!(g.len(), 60);
        let orbit: BTreeSet<usize> = g.iter().map(|p| p.0[0]).collect();
        assert_eq!(orbit.len(), 6);
        // Closed under composition and inverses.
        for p in &g {
            assert!(g.contains(&p.inverse()));
            for q in &g {
                assert!(g.binary_search(&p.then(q)).is_ok());
            }
        }
    }

    #[test]
    fn only_even_permutations() {
        let parity = |p: &Permutation| {
            let mut n = 0;
            for i in 0..6 {
                for j in i + 1..6 {
                    n += usize::from(p.0[i] > p.0[j]);
                }
            }
            n % 2
        };
        assert!(stabilizer().iter().all(|p| parity(p) == 0));
    }

    #[test]
    fn lexicographic_enumeration() {
        let all = Permutation::all();
        assert_eq!(all.len(), 720);
        assert_eq!(all[0], Permutation::IDENTITY);
        assert_eq!(all[719], Permutation([5, 4, 3, 2, 1, 0]));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn composition_matches_application() {
        let s = ['a', 'b', 'c', 'd', 'e', 'f'];
        assert_eq!(ALPHA.apply(&s), ['f', 'a', 'b', 'c', 'e', 'd']);
        assert_eq!(BETA.apply(&ALPHA.apply(&s)), ALPHA.then(&BETA).apply(&s));
        let w = word_permutation(&[Generator::Alpha, Generator::Beta, Generator::Alpha]);
        assert_eq!(w.apply(&s), ALPHA.apply(&BETA.apply(&ALPHA.apply(&s))));
        assert_eq!(Permutation::new([0, 0, 1, 2, 3, 4]), None);
    }
}
