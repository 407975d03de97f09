use azed_core::registry::ParamType;
use azed_core::{default_registry, evaluate, load_registry, Expression, Path};
use azed_testkit::{gen, ALGEBRA_REGISTRY};
use proptest::prelude::*;

proptest! {
    #[test]
    fn generated_trees_type_check(seed in any::<u64>()) {
        for reg in [default_registry(), load_registry(ALGEBRA_REGISTRY).unwrap()] {
            let e = gen::well_typed(&mut gen::rng(seed), &reg, 5, 30);
            prop_assert_eq!(reg.type_check(&e), Ok(ParamType::Score));
        }
    }

    #[test]
    fn every_subtree_of_a_well_typed_tree_type_checks(seed in any::<u64>()) {
        let reg = default_registry();
        let e = gen::well_typed(&mut gen::rng(seed), &reg, 5, 30);
        for (path, node) in e.preorder() {
            let ty = reg.type_check(node);
            prop_assert!(ty.is_ok(), "{} at {}", node, path);
            if let Some((i, parent)) = path.indices().split_last().map(|(i, rest)| (*i, e.node_at(&Path(rest.to_vec())).unwrap())) {
                let def = reg.rule(parent.rule_name().unwrap()).unwrap();
                prop_assert_eq!(ty.unwrap(), def.slot_type(i).unwrap());
            }
        }
    }

    #[test]
    fn swapping_in_a_same_typed_subtree_keeps_the_tree_well_typed(a in any::<u64>(), b in any::<u64>()) {
        let reg = default_registry();
        let mut rng = gen::rng(a);
        let e = gen::well_typed(&mut rng, &reg, 4, 20);
        let other = gen::well_typed(&mut gen::rng(b), &reg, 2, 6);
        for (path, node) in e.preorder() {
            if reg.type_check(node) == Ok(ParamType::Score) {
                let swapped = e.replace_at(&path, other.clone()).unwrap();
                prop_assert_eq!(reg.type_check(&swapped), Ok(ParamType::Score));
            }
        }
    }

    #[test]
    fn arbitrary_trees_never_panic(seed in any::<u64>()) {
        let reg = default_registry();
        let e = gen::any_tree(&mut gen::rng(seed), 5);
        if let Err(err) = reg.type_check(&e) {
            prop_assert!(e.node_at(err.path()).is_ok());
        }
        if let Err(err) = evaluate(&reg, &e) {
            prop_assert!(e.node_at(err.path()).is_ok());
        }
    }

    #[test]
    fn errors_point_at_the_broken_node(seed in any::<u64>()) {
        let reg = default_registry();
        let e = gen::well_typed(&mut gen::rng(seed), &reg, 4, 20);
        let nodes = e.preorder();
        let (path, _) = &nodes[seed as usize % nodes.len()];
        let broken = e.replace_at(path, Expression::app("no-such-rule", vec![])).unwrap();
        let err = reg.type_check(&broken).unwrap_err();
        prop_assert_eq!(err.path(), path);
    }
}
