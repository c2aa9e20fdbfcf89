//! Sign sequences for unit-ball vectors in normed spaces.
//!
//! Given `v_1, ..., v_n` with `|v_i| <= 1`, [`signer::sign_sequence`] picks
//! signs `ε_i` so that every partial sum `ε_1 v_1 + ... + ε_k v_k` has norm at
//! most 2 in any normed plane, and at most √3 in the Euclidean plane. The
//! crate also provides an exhaustive minimax oracle, a construction showing
//! that √3 cannot be improved, and admissible families in R^d whose sums
//! grow linearly with d.

pub mod admissible;
pub mod adversary;
pub mod error;
pub mod highdim;
pub mod io;
pub mod norms;
pub mod oracle;
pub mod signer;
pub mod svg;

pub use admissible::{AdmissibleSet, Atom, Sign, SignPattern};
pub use error::{Error, Result};
pub use norms::{NormSpec, Vector, DEFAULT_TOL};
pub use signer::{sign_sequence, SignResult};
