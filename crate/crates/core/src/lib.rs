//! Two-qutrit PPT entangled states of birank (4,4): constructions, product
//! vectors in the kernel and range, projective invariants and SLOCC
//! equivalence.

pub mod action;
pub mod builders;
pub mod checkerboard;
pub mod equivalence;
pub mod error;
pub mod finder;
pub mod group;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod product;
pub mod state;
pub mod tolerance;
pub mod upb;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use product::ProductVector;
pub use state::BipartiteState;
pub use tolerance::ToleranceProfile;
