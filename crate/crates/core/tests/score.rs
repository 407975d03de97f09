use azed_core::score::{SigningScore, Track};
use azed_core::{default_registry, evaluate, load_registry, Decimal, Expression, Registry};
use azed_testkit::oracle::{flatten, reference_score};
use azed_testkit::{gen, ALGEBRA_REGISTRY};
use proptest::prelude::*;

fn registries() -> [Registry; 2] {
    [default_registry(), load_registry(ALGEBRA_REGISTRY).unwrap()]
}

fn score_of(reg: &Registry, seed: u64) -> Option<SigningScore> {
    evaluate(reg, &gen::well_typed(&mut gen::rng(seed), reg, 3, 10)).ok()
}

fn d(s: &str) -> Decimal {
    s.parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn evaluation_agrees_with_the_reference(seed in any::<u64>()) {
        for reg in registries() {
            let e = gen::well_typed(&mut gen::rng(seed), &reg, 5, 30);
            let fast = evaluate(&reg, &e);
            let slow = reference_score(&reg, &e);
            prop_assert_eq!(fast.is_err(), slow.is_err(), "{}", e);
            if let (Ok(f), Ok(s)) = (fast, slow) {
                prop_assert_eq!(flatten(&f), s, "{}", e);
            }
        }
    }

    #[test]
    fn evaluation_output_is_well_formed(seed in any::<u64>()) {
        for reg in registries() {
            let e = gen::well_typed(&mut gen::rng(seed), &reg, 5, 30);
            if let Ok(s) = evaluate(&reg, &e) {
                prop_assert_eq!(s.check_invariants(), Ok(()), "{}", e);
                prop_assert_eq!(evaluate(&reg, &e).unwrap(), s);
            }
        }
    }

    #[test]
    fn seq_is_associative_with_silent_identity(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let reg = load_registry(ALGEBRA_REGISTRY).unwrap();
        let (Some(x), Some(y), Some(z)) = (score_of(&reg, a), score_of(&reg, b), score_of(&reg, c)) else {
            return Ok(());
        };
        // a silent middle operand only survives when it is not leading
        if !y.is_silent() || x.is_silent() || z.is_silent() {
            prop_assert_eq!(x.seq(&y).seq(&z), x.seq(&y.seq(&z)));
        }
        prop_assert_eq!(x.seq(&SigningScore::empty()), x.clone());
        prop_assert_eq!(SigningScore::empty().seq(&x), x.clone());
        let joined = x.seq(&y);
        prop_assert_eq!(joined.check_invariants(), Ok(()));
        if !x.is_silent() || y.is_silent() {
            prop_assert_eq!(joined.duration(), x.duration() + y.duration());
        }
        prop_assert_eq!(joined.block_count(), x.block_count() + y.block_count());
    }

    #[test]
    fn sync_with_silence_is_identity(a in any::<u64>(), off in -30i64..30) {
        let reg = load_registry(ALGEBRA_REGISTRY).unwrap();
        let Some(x) = score_of(&reg, a) else { return Ok(()) };
        let offset = Decimal::new(off, 1);
        prop_assert_eq!(x.sync(&SigningScore::empty(), offset).unwrap(), x.clone());
        if !x.is_silent() {
            prop_assert_eq!(SigningScore::empty().sync(&x, offset).unwrap(), x.clone());
        }
    }

    #[test]
    fn sync_keeps_every_block_or_fails(a in any::<u64>(), b in any::<u64>(), off in -30i64..30) {
        let reg = load_registry(ALGEBRA_REGISTRY).unwrap();
        let (Some(x), Some(y)) = (score_of(&reg, a), score_of(&reg, b)) else { return Ok(()) };
        if x.is_silent() || y.is_silent() {
            return Ok(());
        }
        let offset = Decimal::new(off, 1);
        match x.sync(&y, offset) {
            Ok(s) => {
                prop_assert_eq!(s.check_invariants(), Ok(()));
                prop_assert_eq!(s.block_count(), x.block_count() + y.block_count());
                let lo = Decimal::ZERO.min(offset);
                let hi = x.duration().max(offset + y.duration());
                prop_assert_eq!(s.duration(), hi - lo);
            }
            Err(_) => {
                let shared = Track::ALL.iter().any(|t| !x.track(*t).is_empty() && !y.track(*t).is_empty());
                prop_assert!(shared);
            }
        }
    }
}

#[test]
fn silent_pieces_and_leading_holds() {
    let reg = load_registry(ALGEBRA_REGISTRY).unwrap();
    let eval = |t: &str| evaluate(&reg, &azed_core::parse(t).unwrap());
    let s = eval("all()").unwrap();
    assert!(s.is_silent() && s.duration().is_zero());
    let s = eval("pad(a(), 0.5)").unwrap();
    assert_eq!(s.duration(), d("1.5"));
    assert_eq!(s.track(Track::Rhand)[0].start, d("0"));
    let s = eval("all(a(), pause(2), a())").unwrap();
    assert_eq!(s.duration(), d("4"));
    assert_eq!(s.track(Track::Rhand)[1].start, d("3"));
    assert!(eval("pause(-0.1)").is_err());
    assert!(eval("b(0)").is_err());
    assert!(eval("both(a(), a(), 0.5)").is_err());
    assert!(eval("both(a(), a(), 1)").is_ok());
    assert!(eval("both(a(), a(), -1)").is_ok());
    // the leading hold is dropped before the overlay is placed
    let s = eval("lead(a(), face(2))").unwrap();
    assert_eq!(s.duration(), d("3"));
    assert_eq!(s.track(Track::Mouth)[0].start, d("0"));
    assert_eq!(s.track(Track::Rhand)[0].start, d("2"));
    let s = eval("under(a(), all(pause(1), a()))").unwrap();
    assert_eq!(s.track(Track::Rhand)[1].start, d("1"));
    let s = eval("mark(tilt(#left), @Q)").unwrap();
    assert_eq!(s.track(Track::Head)[0].label, "tilt:left");
    assert_eq!(s.track(Track::Torso)[0].label, "t:Q");
}

#[test]
fn reference_matches_the_worked_example() {
    let reg = default_registry();
    let e: Expression = azed_core::parse("info-about(dog(), non-subjectivity(nice-kind()))").unwrap();
    let slow = reference_score(&reg, &e).unwrap();
    assert_eq!(slow.duration, d("2.3"));
    assert!(slow.blocks.contains(&(Track::Eyes, d("0.9"), d("1.1"), "el:cl".into())));
    assert_eq!(flatten(&evaluate(&reg, &e).unwrap()), slow);
}
