//! Decides, prime by prime, whether the field of invariants `Q(C_p)` can be
//! rational over `Q`, by looking for subfields `F` of `Q(zeta_{p-1})` in which
//! the norm equation `N_F(alpha) = ±p` has no integral solution.

pub mod abelian;
pub mod arith;
pub mod criteria;
pub mod cyclotomic;
mod error;
pub mod normsearch;
pub mod poly;
pub mod quadforms;
pub mod scanner;

pub use error::{Error, Result};
