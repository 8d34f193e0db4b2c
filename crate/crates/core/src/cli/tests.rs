use super::*;
use crate::coeffs::ParamRational;

fn gen(l: Letter) -> ExprKind {
    ExprKind::Gen(l)
}

fn kinds(e: &Expr) -> Vec<ExprKind> {
    match &e.kind {
        ExprKind::Product(v) | ExprKind::Sum(v) => v.iter().map(|e| e.kind.clone()).collect(),
        k => vec![k.clone()],
    }
}

#[test]
fn parses_products_and_powers() {
    let e = parse_expression("x*th").unwrap();
    assert_eq!(kinds(&e), vec![gen(Letter::X), gen(Letter::Theta)]);
    let e = parse_expression("th^2").unwrap();
    assert_eq!(kinds(&e), vec![gen(Letter::Theta), gen(Letter::Theta)]);
    let e = parse_expression("x^-2 dx").unwrap();
    assert_eq!(kinds(&e), vec![gen(Letter::XInv), gen(Letter::XInv), gen(Letter::Dx)]);
    assert_eq!(parse_expression("x^0").unwrap().kind, ExprKind::Scalar(ParamRational::one()));
}

#[test]
fn folds_scalars() {
    let e = parse_expression("(q^-1)*dx*th + (1-p)*dth*x").unwrap();
    let ExprKind::Sum(terms) = &e.kind else { panic!("{e:?}") };
    assert_eq!(terms.len(), 2);
    let q = ParamRational::param(Param::Q);
    let p = ParamRational::param(Param::P);
    assert_eq!(kinds(&terms[0])[0], ExprKind::Scalar(q.inv().unwrap()));
    assert_eq!(kinds(&terms[1])[0], ExprKind::Scalar(&ParamRational::one() - &p));
    assert_eq!(parse_scalar("q*r/2 - 1").unwrap().to_string(), "1/2*q*r - 1");
}

#[test]
fn errors_carry_positions() {
    let e = parse_expression("x * (th + ").unwrap_err();
    assert_eq!((e.line, e.column), (1, 11));
    assert!(!e.expected.is_empty());
    let e = parse_expression("x*foo").unwrap_err();
    assert_eq!(e.column, 3);
    assert!(e.message.contains("unknown token"));
    let e = parse_expression("x / th").unwrap_err();
    assert!(e.message.contains("scalar"));
    assert!(parse_expression("th^-1").is_err());
    assert!(parse_expression("x $ th").is_err());
}

#[test]
fn pretty_printing_round_trips() {
    for src in [
        "x*th",
        "-x*th + 2*dx",
        "(-q)*x - (x + th)*dx",
        "x*(-th)",
        "--x",
        "(1 - p)*dth*x - q^-1*dx*th",
        "x + (1 - p)",
        "(q + 1)/(p + 1)*x",
        "-(x + th)",
        "1/2*q",
    ] {
        let e = parse_expression(src).unwrap();
        let printed = e.to_string();
        assert_eq!(parse_expression(&printed).unwrap(), e, "{src} -> {printed}");
    }
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let cli = Cli::try_parse_from(std::iter::once("superplane").chain(args.iter().copied())).unwrap();
    let report = execute(&cli).unwrap();
    let mut out = Vec::new();
    let code = emit(&report, cli.opts.json, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn computation_commands() {
    assert_eq!(run_cli(&["normalize", "--family", "I", "--expr", "x*dx"]), (0, "p*dx*x\n".into()));
    assert_eq!(run_cli(&["diff", "--expr", "x*x"]).1, "(p + 1)*dx*x\n");
    assert_eq!(run_cli(&["coproduct", "--expr", "th"]).1, "th (x) x + x (x) th\n");
    assert_eq!(run_cli(&["normalize", "--expr", "x*w"]).1, "p*w*x\n");
    let (code, out) = run_cli(&["diff", "--expr", "w"]);
    assert_eq!(code, 1);
    assert!(out.contains("forms"));
}

#[test]
fn bindings_are_parsed() {
    let b = parse_bindings(&["s=q*r".into(), "p = 1".into()]).unwrap();
    assert_eq!(b.len(), 2);
    assert!(parse_bindings(&["t=1".into()]).is_err());
    assert!(parse_bindings(&["s=x".into()]).is_err());
}
