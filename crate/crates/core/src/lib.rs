//! Exact graded decomposition numbers for blocks of type A Iwahori–Hecke
//! algebras, and certificates that a block has infinitely many Schurian
//! modules.

pub mod abacus;
pub mod cache;
pub mod certify;
pub mod charp;
pub mod error;
pub mod fock;
pub mod jantzen;
pub mod laurent;
pub mod llt;
pub mod partitions;
pub mod scopes;

pub use error::{HeckeError, Result};
pub use laurent::LaurentPoly;
pub use partitions::Partition;
