use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every decision procedure in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Relative singular-value cutoff used for ranks.
    pub rank: f64,
    /// Relative eigenvalue floor used for positivity.
    pub psd: f64,
    /// Relative tolerance for matching invariants.
    pub matching: f64,
    /// Minimum distance of an invariant from 0 and 1 before it gets a letter.
    pub symbol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            psd: 1e-9,
            matching: 1e-6,
            symbol: 1e-7,
        }
    }
}

impl ToleranceProfile {
    pub fn new(rank: f64, psd: f64, matching: f64, symbol: f64) -> Result<Self> {
        let t = Self {
            rank,
            psd,
            matching,
            symbol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.rank) {
            return Err(Error::InvalidTolerance("rank cutoff must be positive"));
        }
        if !ok(self.psd) {
            return Err(Error::InvalidTolerance("psd floor must be positive"));
        }
        if !ok(self.matching) {
            return Err(Error::InvalidTolerance("matching tolerance must be positive"));
        }
        if !ok(self.symbol) {
            return Err(Error::InvalidTolerance("symbol band must be positive"));
        }
        Ok(())
    }

    pub fn with_rank(mut self, rank: f64) -> Result<Self> {
        self.rank = rank;
        self.validate().map(|_| self)
    }

    pub fn with_matching(mut self, matching: f64) -> Result<Self> {
        self.matching = matching;
        self.validate().map(|_| self)
    }

    /// Componentwise relative error `max |x - y| / (1 + |y|)`.
    pub fn relative_gap(xs: &[f64], ys: &[f64]) -> f64 {
        xs.iter()
            .zip(ys)
            .map(|(x, y)| (x - y).abs() / (1.0 + y.abs()))
            .fold(0.0, f64::max)
    }

    pub fn matches(&self, xs: &[f64], ys: &[f64]) -> bool {
        xs.len() == ys.len() && Self::relative_gap(xs, ys) < self.matching
    }
}
