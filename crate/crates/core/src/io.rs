//! JSON state files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::state::{BipartiteState, DIM, DIM_A, DIM_B};
use crate::tolerance::ToleranceProfile;

pub const SCHEMA_VERSION: u32 = 1;

/// How a state was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub constructor: String,
    pub params: Vec<f64>,
}

/// A 9×9 density matrix with entries stored as `[re, im]` at full precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub schema_version: u32,
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl StateFile {
    pub fn from_state(rho: &BipartiteState, provenance: Option<Provenance>) -> Self {
        let m = rho.matrix().inner();
        let matrix = (0..DIM)
            .map(|i| (0..DIM).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            dims: [DIM_A, DIM_B],
            matrix,
            provenance,
        }
    }

    pub fn to_state(&self, tol: ToleranceProfile) -> Result<BipartiteState> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("unsupported schema version {}", self.schema_version)));
        }
        if self.dims != [DIM_A, DIM_B] {
            return Err(Error::DimensionMismatch {
                expected: "dims [3, 3]".into(),
                found: format!("{:?}", self.dims),
            });
        }
        if self.matrix.len() != DIM || self.matrix.iter().any(|r| r.len() != DIM) {
            return Err(Error::DimensionMismatch {
                expected: "9x9 matrix".into(),
                found: format!("{} rows", self.matrix.len()),
            });
        }
        let data: Vec<C64> = self.matrix.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
        BipartiteState::with_tolerance(ComplexMatrix::from_row_slice(DIM, DIM, &data), tol)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}
