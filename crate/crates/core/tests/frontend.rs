use jetvar::frontend::{parse, print_model, render, render_latex, ParseErrorKind};
use jetvar::models::{builtin, BUILTIN_NAMES};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}.theory", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn kind(src: &str) -> ParseErrorKind {
    parse(src).unwrap_err().kind
}

const HEADER: &str = "theory \"t\";\ndim 2;\nindex l, mu : base;\n";

#[test]
fn fixtures_match_builtins() {
    for name in BUILTIN_NAMES {
        let parsed = parse(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(parsed == builtin(name).unwrap(), "{name}");
    }
}

#[test]
fn printed_models_read_back() {
    for name in BUILTIN_NAMES {
        let m = builtin(name).unwrap();
        let text = print_model(&m);
        assert!(parse(&text).unwrap() == m, "{name}");
        assert_eq!(print_model(&parse(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn broken_fixture_parses_but_reports_jacobi() {
    let m = parse(&fixture("yang-mills-broken-jacobi")).unwrap();
    let problems = m.param("f").unwrap().validate();
    assert!(problems.iter().any(|p| p.contains("Jacobi")));
}

#[test]
fn rendering_is_deterministic() {
    let m = builtin("yang-mills-su2").unwrap();
    let a = render(&m.roster, &m.lagrangian);
    let b = render(&builtin("yang-mills-su2").unwrap().roster, &m.lagrangian);
    assert_eq!(a, b);
    let el = builtin("free-scalar").unwrap();
    let e = el.euler_lagrange().unwrap();
    let y = el.roster.get("y").unwrap().variable(&[]);
    assert_eq!(render_latex(&el.roster, &e.get(&y), false), "-y_{,00} + y_{,11}");
}

#[test]
fn empty_document_is_a_syntax_error() {
    let e = parse("").unwrap_err();
    assert!(matches!(e.kind, ParseErrorKind::Syntax { .. }));
    assert_eq!((e.line, e.column), (1, 1));
}

#[test]
fn missing_dimension_is_reported() {
    match kind("theory \"t\";\nfield y even;\n") {
        ParseErrorKind::Syntax { expected, .. } => assert!(expected.iter().any(|s| s.contains("dim"))),
        k => panic!("{k:?}"),
    }
}

#[test]
fn unknown_identifier() {
    let src = format!("{HEADER}field y even;\nlagrangian = z[;l] * y[;l];\n");
    let e = parse(&src).unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier { name: "z".into() });
    assert_eq!(e.line, 5);
    assert!(e.excerpt.ends_with("            ^"), "{}", e.excerpt);
}

#[test]
fn index_arity_mismatch() {
    let src = format!("{HEADER}field a[2] even;\nlagrangian = a[0,1] * a[0];\n");
    assert_eq!(
        kind(&src),
        ParseErrorKind::IndexArityMismatch { name: "a".into(), expected: 1, found: 2 }
    );
}

#[test]
fn odd_lagrangian_is_a_grading_error() {
    let src = format!("{HEADER}field y even;\nghost c odd;\nlagrangian = c * y;\n");
    assert!(matches!(kind(&src), ParseErrorKind::GradingInconsistency { .. }));
}

#[test]
fn even_gauge_image_is_a_grading_error() {
    let src = format!("{HEADER}field y even;\nghost c odd;\nlagrangian = y[;l] * y[;l];\ngauge {{ y -> y; }};\n");
    assert!(matches!(kind(&src), ParseErrorKind::GradingInconsistency { .. }));
}

#[test]
fn free_index_must_be_bound() {
    let src = format!("{HEADER}field y[2] even;\nlagrangian = y[l];\n");
    assert_eq!(kind(&src), ParseErrorKind::UnboundIndex { name: "l".into() });
}

#[test]
fn literal_index_out_of_range() {
    let src = format!("{HEADER}field y[2] even;\nlagrangian = y[2] * y[0];\n");
    assert!(matches!(kind(&src), ParseErrorKind::IndexOutOfRange { value: 2, bound: 2, .. }));
}

#[test]
fn errors_serialise_with_kind_tag() {
    let e = parse("").unwrap_err();
    let v = serde_json::to_value(&e).unwrap();
    assert_eq!(v["kind"], "syntax");
    assert!(v["offset"].is_u64());
    assert!(v["excerpt"].as_str().unwrap().contains('^'));
}
