//! Exact dense linear algebra over prime fields and the rationals.

mod field;
mod mat;
mod poly;

pub use field::{FieldSpec, Scalar};
pub use mat::Mat;
pub use poly::{
    coprime_split, factor_prime_field, integer_diagonalizable, minimal_polynomial,
    rational_roots, squarefree_decomposition, Poly,
};
