use lcy_cli::{load_document, run, EXIT_INVALID, EXIT_OK};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn lcy(args: &[&str]) -> (i32, String) {
    run(std::iter::once("lcy").chain(args.iter().copied()))
}

const P2: &str = r#"{"fan": [[1, 0], [0, 1], [-1, -1]], "blowups": {"1": ["2"], "2": ["3"], "3": ["5+t"]}}"#;

#[test]
fn info_line() {
    assert_eq!(lcy(&["info", &fixture("p2_plus3.json")]), (EXIT_OK, "n=3 k=(1,1,1) Q=3 s=0 rank(Dperp)=1\n".into()));
    assert_eq!(lcy(&["info", &fixture("p2_wing.json")]).1, "n=3 k=(2,0,0) Q=2 s=1 rank(Dperp)=1\n");
    assert_eq!(lcy(&["info", &fixture("p2_toric.json")]).1, "n=3 k=(0,0,0) Q=0 s=2 rank(Dperp)=0\n");
}

#[test]
fn non_unit_parameter_is_rejected() {
    let (code, out) = lcy(&["validate", &fixture("p2_nonunit.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("blowup parameter must be a unit (valuation 0)"), "{out}");
}

#[test]
fn genericity_gate() {
    let file = fixture("p2_nongeneric.json");
    let (code, out) = lcy(&["validate", &file]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("--allow-nongeneric"), "{out}");
    assert_eq!(lcy(&["validate", "--allow-nongeneric", &file]).1, "valid (non-generic) n=3 blowups=4\n");
    let doc = r#"{"fan": [[1, 0], [0, 1], [-1, -1]], "blowups": {"1": ["2", "2+t"]}, "allow_nongeneric": true}"#;
    assert!(!load_document(doc, false).unwrap().is_generic());
}

#[test]
fn document_errors_are_positioned() {
    let bad = |doc: &str| load_document(doc, false).unwrap_err();
    assert!(bad(r#"{"fan": [[1, 0], [0, 1], [-1, -1]], "blowups": {"1": ["2+*t"]}}"#).starts_with("blowups[1][1]: syntax error at position 2"));
    assert_eq!(bad(r#"{"fan": [[1, 0], [0, 1], [-1, -1]], "blowups": {"4": ["2"]}}"#), "blowups: ray 4 out of range 1..=3");
    assert!(bad(r#"{"fan": [[1, 0], [0, 1], [-1, -1]], "blowup": {}}"#).contains("line 1 column"));
    assert!(bad(r#"{"fan": [[1, 0], [0, 1], [1, 1]]}"#).contains("det(v3, v1) = -1"));
}

#[test]
fn usage_errors_exit_invalid() {
    assert_eq!(lcy(&["info"]).0, EXIT_INVALID);
    assert_eq!(lcy(&["frobnicate"]).0, EXIT_INVALID);
    assert_eq!(lcy(&["--help"]).0, EXIT_OK);
    assert_eq!(lcy(&["info", "/nonexistent.json"]).0, EXIT_INVALID);
}

#[test]
fn class_commands() {
    let file = fixture("p2_plus3.json");
    let class = "E[1,1] + E[2,1] + E[3,1] - Dbar[1]";
    assert_eq!(lcy(&["tropicalize", "--class", class, &file]).1, format!("{class}: c[1,1]=1 c[2,1]=1 c[3,1]=1\n"));
    assert_eq!(lcy(&["periods", "--class", class, &file]).1, format!("{class}: period=30+6*t val=0\n"));
    let (code, out) = lcy(&["periods", "--class", "E[1,1]", &file]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("not orthogonal"), "{out}");
    assert_eq!(lcy(&["periods", "--class", "E[9,1]", &file]).0, EXIT_INVALID);
}

#[test]
fn dperp_and_homology() {
    assert_eq!(lcy(&["dperp", &fixture("p2_wing.json")]).1, "rank(Dperp)=1\nwing 1: -E[1,1] + E[1,2]\n");
    assert_eq!(lcy(&["homology", "--torsion", &fixture("f2_fibres.json")]).1, "free_rank=0 torsion=[2]\n");
    assert_eq!(
        lcy(&["homology", &fixture("p2_plus3.json")]).1,
        "free_rank=1 torsion=[]\ngenerator 1: c[1,1]=1 c[2,1]=1 c[3,1]=1\n"
    );
}

#[test]
fn monodromy_report() {
    let out = lcy(&["monodromy", &fixture("p2_wing.json")]).1;
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "vertex [1,1] at (1,0): int=[[1,1],[0,1]] kaffine=(a, b) -> ((1/2)*a, (1)*a*b)");
    assert_eq!(lines[2], "ray 1 slots 1..2: int=[[1,2],[0,1]] kaffine=(a, b) -> ((1/6)*a, (1/2)*a^2*b)");
    assert_eq!(lcy(&["monodromy", &fixture("p2_toric.json")]).1, "no singular vertices\n");
}

#[test]
fn local_fan() {
    let (code, out) = lcy(&["local-fan", "--b", "1,1", "--mult", "1,1,1,1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("relation u_0 + u_inf = sum b_i u_i: true"), "{out}");
    assert_eq!(lcy(&["local-fan", "--b", "1,2", "--mult", "1,1,1,1"]).0, EXIT_INVALID);
}

#[test]
fn compare_and_sweep_are_deterministic() {
    let dir = std::env::temp_dir().join(format!("lcy-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("p2.json");
    std::fs::write(&file, P2).unwrap();
    let file = file.to_str().unwrap();
    let first = lcy(&["compare", "--seed", "11", file]);
    assert_eq!(first.0, EXIT_OK);
    assert_eq!(first, lcy(&["compare", "--seed", "11", file]));
    assert_eq!(first.1, lcy(&["compare", "--seed", "12", file]).1);
    let sweep = lcy(&["sweep", "--count", "5", "--seed", "3"]);
    assert_eq!(sweep.0, EXIT_OK);
    assert_eq!(sweep, lcy(&["sweep", "--count", "5", "--seed", "3"]));
    assert!(sweep.1.ends_with("sweep: 5/5 PASS\n"));
    // Trial i uses seed S + i.
    assert!(sweep.1.lines().nth(2).unwrap().starts_with("trial 3 seed=5 "));
    std::fs::remove_dir_all(dir).unwrap();
}
