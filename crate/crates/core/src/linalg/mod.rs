//! Exact linear algebra: scalars, matrices, and subspaces in canonical form.

mod field;
mod matrix;
mod subspace;

pub use field::{is_prime, Field, Scalar, MAX_PRIME};
pub use matrix::{rref, solve_particular, Echelon, Matrix};
pub use subspace::{image, kernel, map_image, map_preimage, sub_contains, sub_intersect, sub_sum, Subspace};
