//! Exact integer linear algebra and finitely generated abelian groups.
//!
//! Everything here uses arbitrary-precision integers: torsion orders such as
//! `N^k - 1` leave the 64-bit range in routine examples.

mod group;
mod matrix;
mod normal_form;

pub use group::{factorize, is_prime_power, iso_equal, p_part, FinGenAbGroup, GroupElement};
pub use matrix::IntMatrix;
pub use normal_form::{
    cokernel_of_columns, hermite_normal_form, lattice_membership, smith_normal_form, Cokernel,
    SmithForm,
};

/// Invariant factors of each primary component of a finite group.
pub fn primary_decomposition(
    g: &FinGenAbGroup,
) -> crate::Result<std::collections::BTreeMap<num_bigint::BigInt, Vec<num_bigint::BigInt>>> {
    g.primary_decomposition()
}
