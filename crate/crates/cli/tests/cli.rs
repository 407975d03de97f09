use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use azed_core::{
    compile_pattern, default_registry, evaluate, export_score, layout, layout_document, parse_document, to_svg,
    Document, SigningScore,
};

const E1: &str = "info-about(dog(), non-subjectivity(nice-kind()))";

fn story() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/samples/story.azee")
}

fn azed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_azed")).args(args).output().unwrap()
}

fn file_with(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let s = story();
    let out = azed(&["check", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let bad = file_with(&dir, "bad.azee", "dog(\ndog()\ninfo-about(dog())\n");
    let out = azed(&["check", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let diags: Vec<String> = stderr(&out).lines().map(String::from).collect();
    assert_eq!(diags.len(), 2, "{diags:?}");
    assert!(diags[0].starts_with(&format!("{bad}:1:4: ")), "{}", diags[0]);
    assert!(diags[1].starts_with(&format!("{bad}:3:0: ")), "{}", diags[1]);

    let missing = dir.path().join("missing.azee");
    assert_eq!(azed(&["check", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn score_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let f = file_with(&dir, "e1.azee", &format!("{E1}\ndog()\n"));
    let reg = default_registry();
    let pieces = parse_document(&reg, &std::fs::read_to_string(&f).unwrap()).unwrap();

    let out = azed(&["score", &f, "--piece", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), export_score(&evaluate(&reg, &pieces[0]).unwrap()));
    assert!(stdout(&out).starts_with("duration 2.3\n"));
    assert_eq!(stdout(&out).lines().count(), 7);

    let out = azed(&["score", &f, "--piece", "1"]);
    assert_eq!(stdout(&out), "duration 1\nrhand 0 1 lsf:dog\nlhand 0 1 lsf:dog\n");

    let whole = evaluate(&reg, &pieces[0]).unwrap().seq(&evaluate(&reg, &pieces[1]).unwrap());
    assert_eq!(stdout(&azed(&["score", &f])), export_score(&whole));

    assert_eq!(azed(&["score", &f, "--piece", "2"]).status.code(), Some(1));
}

#[test]
fn collisions_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let reg_text = format!("{}\nrule clash(x: score) = sync(x, x, 0.5)\n", azed_core::registry::DEFAULT_REGISTRY);
    let reg = file_with(&dir, "clash.azr", &reg_text);
    let doc = file_with(&dir, "c.azee", "context(dog(), clash(dog()))\n");
    let out = azed(&["--registry", &reg, "score", &doc]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with(&format!("{doc}:1:15: ")), "{}", stderr(&out));
    assert!(stderr(&out).contains("`1`"));
    assert!(out.stdout.is_empty());
}

#[test]
fn render_matches_the_library_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let f = file_with(&dir, "e1.azee", &format!("{E1}\n"));
    let reg = default_registry();
    let e1 = azed_core::parse(E1).unwrap();
    let out = azed(&["render", &f, "--piece", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let svg = stdout(&out);
    assert_eq!(svg, to_svg(&layout(&reg, &e1)));
    for c in ["\u{1F415}", "=", "\u{2713}", "\u{1F493}"] {
        assert!(svg.contains(&format!(">{c}</text>")), "{c}");
    }

    let target = dir.path().join("out.svg");
    azed(&["render", &f, "--piece", "0", "--out", target.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), svg);
    assert_eq!(stdout(&azed(&["render", &f, "--piece", "0"])), svg);

    assert_eq!(azed(&["render", &f, "--piece", "5"]).status.code(), Some(1));

    let s = story();
    let pieces = parse_document(&reg, &std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(stdout(&azed(&["render", s.to_str().unwrap()])), to_svg(&layout_document(&reg, &pieces)));
}

#[test]
fn query_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let f = file_with(&dir, "e1.azee", &format!("{E1}\n"));
    let out = azed(&["query", &f, "_"]);
    assert_eq!(stdout(&out), "0:\n0:0\n0:1\n0:1.0\n");
    assert_eq!(stdout(&azed(&["query", &f, "nice-kind()"])), "0:1.0\n");
    assert_eq!(azed(&["query", &f, "???"]).status.code(), Some(1));

    let reg = default_registry();
    let s = story();
    let pieces = parse_document(&reg, &std::fs::read_to_string(&s).unwrap()).unwrap();
    let doc = Document::new(&reg, "story", pieces).unwrap();
    for pattern in ["dog()", "each-of(?a, ?a)", "info-about(_, non-subjectivity(?x))"] {
        let expected: String = doc
            .query(&compile_pattern(pattern).unwrap())
            .iter()
            .map(|m| format!("{}:{}\n", m.piece, m.path))
            .collect();
        let out = azed(&["query", s.to_str().unwrap(), pattern]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), expected, "{pattern}");
    }
}

#[test]
fn registry_check() {
    let dir = tempfile::tempdir().unwrap();
    let good = file_with(&dir, "good.azr", azed_core::registry::DEFAULT_REGISTRY);
    let out = azed(&["registry-check", &good, "--print"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), azed_core::print_registry(&default_registry()));

    let dup = file_with(&dir, "dup.azr", "rule dog() = block({rhand}, \"d\", 1)\nrule dog() = block({rhand}, \"d\", 1)\n");
    let out = azed(&["registry-check", &dup]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with(&format!("{dup}:2: ")), "{}", stderr(&out));

    let missing = dir.path().join("none.azr");
    assert_eq!(azed(&["registry-check", missing.to_str().unwrap()]).status.code(), Some(3));
    let doc = file_with(&dir, "d.azee", "dog()\n");
    assert_eq!(azed(&["--registry", &dup, "check", &doc]).status.code(), Some(1));
}

#[test]
fn whole_story_score_is_the_sequence_of_its_pieces() {
    let reg = default_registry();
    let s = story();
    let pieces = parse_document(&reg, &std::fs::read_to_string(&s).unwrap()).unwrap();
    let mut all = SigningScore::empty();
    for p in &pieces {
        all = all.seq(&evaluate(&reg, p).unwrap());
    }
    assert_eq!(stdout(&azed(&["score", s.to_str().unwrap()])), export_score(&all));
}
