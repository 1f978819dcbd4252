mod common;

use common::*;
use gradalib::corpus::algebras;
use gradalib::io::{
    algebra_to_toml, graded_module_to_toml, is_algebra_document, module_to_toml, parse_algebra, parse_module,
    AnyModule,
};
use gradalib::gradability::{decide, Budget, GradabilityVerdict};
use gradalib::module_rep::enumerate_modules;
use gradalib::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn algebras_round_trip() {
    for f in [GF2, GF3, Q] {
        for (name, alg) in algebras(f) {
            let text = algebra_to_toml(alg.presentation());
            assert!(is_algebra_document(&text));
            let back = parse_algebra(&text, name).unwrap();
            assert_eq!(algebra_to_toml(&back), text, "{name}");
        }
    }
}

fn reparse(text: &str, alg: &std::sync::Arc<gradalib::GradedAlgebra>) -> AnyModule {
    parse_module(text, "m.toml", alg).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn graded_modules_round_trip(seed in any::<u64>(), ai in 0usize..5, rational in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, alg) = algebras(if rational { Q } else { GF3 }).swap_remove(ai);
        let g = random_graded(&alg, 2, 2, &mut rng).shift(rng_shift(seed));
        let text = graded_module_to_toml(&g, "algebra.toml");
        prop_assert!(!is_algebra_document(&text));
        let AnyModule::Graded(h) = reparse(&text, &alg) else {
            return Err(TestCaseError::fail("graded flag lost"));
        };
        prop_assert_eq!(h.module().dims(), g.module().dims());
        prop_assert_eq!(h.global_degrees(), g.global_degrees());
        prop_assert!(h.module() == g.module());
        let plain = module_to_toml(g.module(), "algebra.toml");
        let AnyModule::Plain(p) = reparse(&plain, &alg) else {
            return Err(TestCaseError::fail("plain file read as graded"));
        };
        prop_assert!(&p == g.module());
    }
}

fn rng_shift(seed: u64) -> i64 {
    (seed % 7) as i64 - 3
}

#[test]
fn certificates_round_trip() {
    for (name, alg) in algebras(GF3) {
        for m in enumerate_modules(&alg, 3).unwrap() {
            if let GradabilityVerdict::Gradable(c) = decide(&m, Budget::default()).unwrap() {
                let text = graded_module_to_toml(&c.graded, "algebra.toml");
                let AnyModule::Graded(h) = reparse(&text, &alg) else {
                    panic!("{name}: certificate read as ungraded");
                };
                assert!(c.verify(&m), "{name}");
                assert!(h.module() == c.graded.module(), "{name}");
            }
        }
    }
}

fn parse_error(text: &str) -> String {
    match parse_algebra(text, "bad.toml").and_then(gradalib::GradedAlgebra::build) {
        Err(Error::Parse(msg)) => msg,
        Err(e) => e.to_string(),
        Ok(_) => panic!("accepted: {text}"),
    }
}

#[test]
fn malformed_algebras_are_rejected_with_positions() {
    let head = "field = \"GF(3)\"\n\n[quiver]\nvertices = [\"1\"]\n";
    let e = parse_error(&format!("{head}arrows = [{{ name = \"x\", from = \"1\", to = \"2\", degree = 1 }}]\nrelations = []\n"));
    assert!(e.contains('2'), "{e}");
    let e = parse_error(&format!("{head}arrows = [{{ name = \"x\", from = \"1\", to = \"1\", degree = 1 }}]\nrelations = []\n"));
    assert!(e.to_lowercase().contains("infinite") || e.contains("dimension"), "{e}");
    let e = parse_error("field = \"GF(4)\"\n[quiver]\nvertices = []\narrows = []\nrelations = []\n");
    assert!(!e.is_empty());
    let e = parse_error("field = \"GF(3)\"\n[quiver\n");
    assert!(e.contains("bad.toml:2:"), "{e}");
}
