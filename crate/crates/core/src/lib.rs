//! Exact character computations for reductive groups in positive characteristic:
//! root data, Weyl characters, the affine Weyl group, Kazhdan–Lusztig
//! polynomials, the Lusztig character formula, and p-filtration checks.

pub mod alcove;
pub mod characters;
pub mod engine;
pub mod error;
pub mod g1;
pub mod klpoly;
pub mod lcf;
pub mod matrix;
pub mod modchar;
pub mod pfilt;
pub mod rootdata;

pub use engine::Engine;
pub use error::{Error, ErrorKind, Result};
