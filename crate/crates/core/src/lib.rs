//! Exact arithmetic and verification tools for the deformation theory of
//! 2-dimensional mod `p^n` Galois representations.

pub mod cli;
pub mod coh;
pub mod error;
pub mod grp;
pub mod hyp;
pub mod ledger;
pub mod linalg;
pub mod localdef;
pub mod mat;
pub mod ring;
pub mod scenario;
pub mod suites;
pub mod templates;

pub use error::{Error, Result};
pub use mat::Mat2;
pub use ring::{GaloisRing, RingElem};
