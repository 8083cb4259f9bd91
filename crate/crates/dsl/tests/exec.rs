use handlecalc_dsl::trace::parse_traces;
use handlecalc_dsl::{check_trace, exec_script, parse_script, render_traces, ExecOptions, FailureKind, RunReport};

fn run(text: &str) -> RunReport {
    exec_script(&parse_script(text).unwrap(), &ExecOptions::default())
}

fn results(r: &RunReport) -> Vec<&str> {
    r.entries.iter().map(|e| e.result.as_str()).collect()
}

#[test]
fn undefined_name_is_reported_before_running() {
    let r = run("surface w = \"a+ a-\"\nclassify w\nnormalize v\n");
    let f = r.failure.as_ref().unwrap();
    assert_eq!((f.line, f.column, f.kind), (3, 11, FailureKind::Name));
    assert!(r.entries.is_empty());
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn wrong_kind_is_a_name_error() {
    let r = run("kirby K = [[1]]\nclassify K\n");
    let f = r.failure.unwrap();
    assert_eq!(f.kind, FailureKind::Name);
    assert!(f.message.contains("kirby"), "{}", f.message);
}

#[test]
fn failed_assertion_exits_one() {
    let r = run("surface w = \"a+ a+\"\nassert class w == \"sphere\"\nclassify w\n");
    assert_eq!(r.exit_code(), 1);
    assert_eq!(r.failure.unwrap().line, 2);
    assert!(r.entries.is_empty());
}

#[test]
fn surface_slide_infers_side() {
    let r = run("surface w = \"a+ b+ a- b-\"\nslide w 1 over b\nslide w 3 over a side left\n");
    assert_eq!(r.failure, None, "{}", r.render());
    assert_eq!(r.entries.len(), 2);
    let r = run("surface w = \"a+ b+ a- b-\"\nslide w 1 over a\n");
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn kirby_slides_and_blow_down() {
    let r = run("kirby K = [[1, 1], [1, 0]]\nslide K 2 over 1 sign -\nform K\nblowdown K 1\nform K\n");
    assert_eq!(r.failure, None, "{}", r.render());
    assert_eq!(results(&r)[1], "[[1,0],[0,-1]]");
    assert_eq!(results(&r)[3], "[[-1]]");
}

#[test]
fn queries_on_each_kind() {
    let r = run(concat!(
        "heegaard H { genus = 1; relators = [\"x x\"] }\n",
        "h1 H\n",
        "pi1 H\n",
        "front F = [Lc0, Rc0]\n",
        "tb F\n",
        "stabilize F +\n",
        "tb F\n",
        "kirby U = fronts(F)\n",
        "openbook M = pages(U)\n",
        "identify M\n",
        "invariants M\n",
    ));
    assert_eq!(r.failure, None, "{}", r.render());
    let got = results(&r);
    assert_eq!(got[0], "Z/2");
    assert_eq!(got[1], "<x | x x>");
    assert_eq!(got[2], "tb=-1 rot=0");
    assert_eq!(got[4], "tb=-2 rot=1");
    assert_eq!(got[6], "S2x~S3");
    assert_eq!(got[7], "H = (Z, 0, Z, Z, 0, Z) w2=[1]");
}

#[test]
fn unsupported_query() {
    let r =
        run("kirby K { one_handles = 1; linking = [[0]]; incidence = [[1]] }\nopenbook M = pages(K)\ninvariants M\n");
    assert_eq!(r.failure.unwrap().kind, FailureKind::Unsupported);
}

#[test]
fn inconclusive_certificate_exits_two() {
    let r = run("kirby A = [[2]]\nkirby B = [[3]]\ncert A ~~ B budget 10\n");
    assert_eq!(r.failure.as_ref().unwrap().kind, FailureKind::Budget);
    assert_eq!(r.exit_code(), 2);
    let r = run("kirby A = [[2]]\nkirby B = [[3]]\nassert cert A ~~ B budget 10\n");
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn normalize_budget() {
    let s = parse_script("surface w = \"1+ 2+ 1- 2- 3+ 3+\"\nnormalize w\n").unwrap();
    let r = exec_script(&s, &ExecOptions { max_steps: 1 });
    assert_eq!(r.failure.unwrap().kind, FailureKind::Budget);
}

#[test]
fn emitted_traces_check() {
    let r = run(concat!(
        "surface w = \"a+ b+ a- b- c+ c-\"\n",
        "trace begin w\n",
        "cancel w c\n",
        "rotate w right\n",
        "create w d at 1 sign +\n",
        "cancel w d\n",
        "trace end w\n",
        "normalize w\n",
        "kirby A = [[0, 1], [1, 0]]\n",
        "kirby B = [[0, 1], [1, 2]]\n",
        "cert A ~~ B\n",
    ));
    assert_eq!(r.failure, None, "{}", r.render());
    let text = render_traces(&r.traces);
    assert_eq!(parse_traces(&text).unwrap().len(), 3);
    let outcomes = check_trace(&text, None, None).unwrap();
    assert!(outcomes.iter().all(|o| o.accepted()), "{outcomes:?}");
}

#[test]
fn render_is_stable() {
    let text = "surface w = \"a+ a+ b+ b+\"\nnormalize w\nclassify w\n";
    assert_eq!(run(text).render(), run(text).render());
    assert!(run(text).render().ends_with("status: ok (1 traces)\n"));
}
