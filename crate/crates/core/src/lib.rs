//! Exact computations with graded modules over finite-dimensional graded path algebras.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod exactla;
pub mod functors;
pub mod gradability;
pub mod homalg;
pub mod io;
pub mod module_rep;
pub mod pplogic;
pub mod prufer;
pub mod suites;

pub use algebra::{GradedAlgebra, QuiverPresentation};
pub use error::{Error, Result};
pub use exactla::{FieldSpec, Mat, Poly, Scalar};
pub use module_rep::{GradedModule, HomSpace, Module, ModuleMap};
