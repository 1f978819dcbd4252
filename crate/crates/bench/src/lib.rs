//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use gradalib::corpus::{cyclic_module, kronecker, kronecker_band, linear_quiver, truncated_polynomial};
use gradalib::{FieldSpec, GradedAlgebra, Module};

pub const GF2: FieldSpec = FieldSpec::Prime(2);
pub const GF3: FieldSpec = FieldSpec::Prime(3);

pub fn kronecker_r1(field: FieldSpec) -> Module {
    kronecker_band(&kronecker(field), 1)
}

/// `k[x]/(x^2) ⊕ k[x]/(x^3)` over `k[x]/(x^3)`.
pub fn truncated_sum(field: FieldSpec) -> Module {
    let r = truncated_polynomial(field, 3);
    cyclic_module(&r, 2).direct_sum(&cyclic_module(&r, 3)).expect("same algebra")
}

pub fn a3(field: FieldSpec) -> Arc<GradedAlgebra> {
    linear_quiver(field, 3, 1)
}
