//! Modules, homomorphisms, endomorphism rings, decomposition and enumeration.

mod decompose;
mod endo;
mod enumerate;
mod hom;
mod module;

pub use decompose::{
    decompose, decompose_seeded, end_ring, is_isomorphic, iso_indecomposable, DecompositionReport,
    Representation, Summand, DEFAULT_SEED,
};
pub use endo::EndRing;
pub use enumerate::{enumerate_graded, enumerate_modules, GradedEnumeration, MAX_ENUM_DIM, MAX_TUPLES};
pub use hom::{
    hom, hom_graded, possible_degrees, retraction, section, solve_in_span, HomSpace, ModuleMap,
};
pub(crate) use module::blocks_of;
pub use module::{vector, GradedModule, Module};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::corpus::*;
    use crate::error::Error;
    use crate::exactla::{FieldSpec, Mat};

    const GF2: FieldSpec = FieldSpec::Prime(2);
    const GF3: FieldSpec = FieldSpec::Prime(3);

    #[test]
    fn check_examples() {
        let k = kronecker(GF3);
        assert!(Module::new(
            k.clone(),
            vec![1, 1],
            vec![Mat::from_i64(GF3, &[&[1]]), Mat::from_i64(GF3, &[&[1]])]
        )
        .is_ok());
        let r = truncated_polynomial(GF3, 3);
        let mut x = Mat::zeros(GF3, 3, 3);
        x.set(1, 0, GF3.one());
        x.set(2, 1, GF3.one());
        x.set(0, 2, GF3.one());
        assert_eq!(
            Module::new(r.clone(), vec![3], vec![x]),
            Err(Error::RelationViolated(0))
        );
        let spaces = vec![BTreeMap::from([(0, 1)])];
        let blocks = BTreeMap::from([((0, 0), Mat::from_i64(GF3, &[&[1]]))]);
        assert!(matches!(
            GradedModule::from_blocks(r, &spaces, &blocks),
            Err(Error::InhomogeneousBlock { .. })
        ));
    }

    #[test]
    fn hom_examples() {
        let r = truncated_polynomial(GF3, 3);
        let k = cyclic_module(&r, 1);
        assert_eq!(hom(&k, &k).unwrap().dim(), 1);
        let m2 = cyclic_module(&r, 2);
        let m3 = cyclic_module(&r, 3);
        assert_eq!(hom(&m2, &m3).unwrap().dim(), 2);
        let e = end_ring(&m2).unwrap();
        assert_eq!((e.dim(), e.radical_dim(), e.local), (2, 1, true));
        let other = cyclic_module(&truncated_polynomial(GF3, 2), 1);
        assert_eq!(hom(&k, &other).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn end_ring_examples() {
        let r = truncated_polynomial(GF3, 3);
        let k = cyclic_module(&r, 1);
        let e = end_ring(&k).unwrap();
        assert_eq!((e.dim(), e.radical_dim(), e.local), (1, 0, true));
        let kk = k.direct_sum(&k).unwrap();
        let e = end_ring(&kk).unwrap();
        assert_eq!((e.dim(), e.local), (4, false));
        assert_eq!(e.structure.len(), 4);
    }

    #[test]
    fn isomorphism_examples() {
        let r = truncated_polynomial(GF3, 3);
        let m = cyclic_module(&r, 2);
        let f = is_isomorphic(&m, &m).unwrap().unwrap();
        assert!(f.is_invertible() && f.is_homomorphism(&m, &m));
        assert!(is_isomorphic(&cyclic_module(&r, 1), &m).unwrap().is_none());
        let k = kronecker(GF3);
        let r1 = kronecker_band(&k, 1);
        let r2 = kronecker_band(&k, 2);
        assert!(is_isomorphic(&r1, &r2).unwrap().is_none());
    }

    #[test]
    fn isomorphism_of_decomposables() {
        let r = truncated_polynomial(GF2, 3);
        let a = cyclic_module(&r, 1).direct_sum(&cyclic_module(&r, 2)).unwrap();
        let b = cyclic_module(&r, 2).direct_sum(&cyclic_module(&r, 1)).unwrap();
        let f = is_isomorphic(&a, &b).unwrap().unwrap();
        assert!(f.is_invertible() && f.is_homomorphism(&a, &b));
        let c = cyclic_module(&r, 3);
        assert!(is_isomorphic(&a, &c).unwrap().is_none());
    }

    #[test]
    fn decompose_examples() {
        let r = truncated_polynomial(GF3, 3);
        let m = cyclic_module(&r, 1).direct_sum(&cyclic_module(&r, 2)).unwrap();
        let d = decompose(&m).unwrap();
        assert_eq!(d.num_summands(), 2);
        assert!(d.verify(&m));
        assert!(decompose(&cyclic_module(&r, 3)).unwrap().is_indecomposable());
        let k = kronecker(GF3);
        assert!(decompose(&kronecker_preinjective(&k)).unwrap().is_indecomposable());
    }

    #[test]
    fn decompose_multiplicities() {
        let r = truncated_polynomial(FieldSpec::Rationals, 3);
        let k = cyclic_module(&r, 1);
        let m3 = cyclic_module(&r, 3);
        let m = k.direct_sum(&m3).unwrap().direct_sum(&k).unwrap();
        let d = decompose(&m).unwrap();
        assert!(d.verify(&m));
        let mut mult: Vec<(usize, usize)> =
            d.classes.iter().map(|(c, n)| (c.total_dim(), *n)).collect();
        mult.sort();
        assert_eq!(mult, vec![(1, 2), (3, 1)]);
    }

    #[test]
    fn graded_decomposition_respects_degrees() {
        let r = truncated_polynomial(GF3, 3);
        let a = graded_cyclic_module(&r, 2, 0);
        let b = graded_cyclic_module(&r, 1, 5);
        let m = a.direct_sum(&b).unwrap();
        let d = decompose(&m).unwrap();
        assert_eq!(d.num_summands(), 2);
        assert!(d.verify(&m));
        let mut supports: Vec<_> = d.summands.iter().map(|s| s.module.support()).collect();
        supports.sort();
        assert_eq!(supports, vec![Some((0, 1)), Some((5, 5))]);
    }

    #[test]
    fn graded_hom_splits_ungraded_hom() {
        let r = truncated_polynomial(GF3, 3);
        let m = graded_cyclic_module(&r, 2, 0);
        let n = graded_cyclic_module(&r, 3, 0);
        let total: usize = possible_degrees(&m, &n)
            .into_iter()
            .map(|k| hom_graded(&m, &n, k).unwrap().dim())
            .sum();
        assert_eq!(total, hom(m.module(), n.module()).unwrap().dim());
    }

    #[test]
    fn enumerate_examples() {
        let r = truncated_polynomial(GF2, 3);
        assert_eq!(enumerate_modules(&r, 3).unwrap().len(), 3);
        assert_eq!(enumerate_modules(&semisimple_pair(GF2), 2).unwrap().len(), 2);
        assert_eq!(enumerate_modules(&kronecker(GF2), 2).unwrap().len(), 5);
        assert!(matches!(enumerate_modules(&r, 7), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn enumerate_graded_examples() {
        let r = truncated_polynomial(GF3, 3);
        let e = enumerate_graded(&r, 3, 3).unwrap();
        assert_eq!((e.classes.len(), e.max_graded_length), (3, 3));
        let k = kronecker(GF2);
        let e = enumerate_graded(&k, 2, 3).unwrap();
        assert!(e
            .classes
            .iter()
            .any(|m| m.module().dims() == [1, 2] && m.graded_length() == 2));
        let s = enumerate_graded(&semisimple_pair(GF2), 2, 2).unwrap();
        assert_eq!(s.max_graded_length, 1);
    }
}
