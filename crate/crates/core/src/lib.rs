//! Class-group and zeta-function reconstruction from the K-theoretic
//! invariants `Δ/Δ_F` of ax+b-semigroup C*-algebras over rings of integers.
//!
//! The crate is organised bottom-up:
//!
//! * [`abgroup`]: exact integer linear algebra (Smith/Hermite normal forms,
//!   cokernels) and finitely generated abelian groups.
//! * [`kdelta`]: the lattice `Δ ≅ Z[Cl]`, the operators `M_p`, the subgroups
//!   `Δ_F` and the inductive prediction of `Δ/Δ_F`.
//! * [`reconstruct`]: blind recovery of the class number, the prime-ideal
//!   norms, the truncated zeta function and the class group from an opaque
//!   [`reconstruct::InvariantBundle`].
//! * [`fields`]: ground-truth arithmetic data (imaginary quadratic fields via
//!   binary quadratic forms, and synthetic specifications).
//! * [`oracle`]: naive reference implementations used to certify the above.
//! * [`cli`]: file formats and the command implementations behind the
//!   `kclass` binary.

pub mod abgroup;
pub mod cli;
pub mod error;
pub mod fields;
pub mod kdelta;
pub mod oracle;
pub mod reconstruct;

pub use error::{Error, Result};
