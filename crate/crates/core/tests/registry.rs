use azed_core::registry::{RegistryErrorKind, DEFAULT_REGISTRY};
use azed_core::{default_registry, load_registry, print_registry};
use azed_testkit::ALGEBRA_REGISTRY;

#[test]
fn printed_registries_load_back_unchanged() {
    for text in [DEFAULT_REGISTRY, ALGEBRA_REGISTRY] {
        let reg = load_registry(text).unwrap();
        let printed = print_registry(&reg);
        assert_eq!(load_registry(&printed).unwrap(), reg, "{printed}");
        assert_eq!(print_registry(&load_registry(&printed).unwrap()), printed);
    }
}

#[test]
fn default_registry_declares_the_core_vocabulary() {
    let reg = default_registry();
    for r in ["dog", "nice-kind", "non-subjectivity", "info-about", "context", "each-of", "localised-discourse", "scar-between"] {
        assert!(reg.rule(r).is_some(), "{r}");
    }
    assert_eq!(reg.templates.len(), 1);
}

#[test]
fn problems_are_reported_with_their_line() {
    let err = load_registry("rule dog() = block({rhand}, \"d\", 1)\nrule dog() = block({rhand}, \"d\", 1)\n").unwrap_err();
    assert_eq!(err.line, 2);
    assert!(matches!(err.kind, RegistryErrorKind::DuplicateRule(_)));

    let err = load_registry("rule a(x: number) = sync(x, x, 0)\n").unwrap_err();
    assert_eq!(err.line, 1);

    let err = load_registry("rule a() = block({rhand}, \"d\", 1)\ntemplate t = b(?x, ?y) glyph sidebyside \"U+2194\"\n").unwrap_err();
    assert_eq!(err.line, 2);
}
