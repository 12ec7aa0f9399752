//! Exact integer linear algebra and finitely generated abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{
    cokernel, ext1_torsion, hermite_basis, kernel_basis, quotient_by_element,
    reduce_modulo_lattice, solve_integer, FgAbelianGroup, GroupElement,
};
pub use matrix::{to_big, IntMatrix};
pub use snf::{smith_normal_form, SmithForm};
