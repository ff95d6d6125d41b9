use std::path::PathBuf;
use std::process::{Command, Output};

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn pimodulo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pimodulo")).args(args).current_dir(crate_dir()).env_remove("PIMODULO_FUEL").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&pimodulo(&["check", "examples/stt.tm"])), 0);
    assert_eq!(code(&pimodulo(&["check", "--theory", "cc", "examples/cc.tm"])), 0);
    assert_eq!(code(&pimodulo(&["check", "examples/ill_typed.tm"])), 1);
    assert_eq!(code(&pimodulo(&["check", "examples/malformed.tm"])), 2);
    assert_eq!(code(&pimodulo(&["check", "examples/missing.tm"])), 4);
    assert_eq!(code(&pimodulo(&["check", "--theory", "theories/stt.th", "examples/stt.tm"])), 0);
}

#[test]
fn type_errors_point_at_the_source() {
    let o = pimodulo(&["check", "examples/ill_typed.tm"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("examples/ill_typed.tm:2:13"), "{err}");
    assert!(err.contains("not-a-function"), "{err}");
}

#[test]
fn normalize_prints_the_normal_form_and_trace() {
    let o = pimodulo(&["normalize", "eps (imp a b)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "eps a -> eps b");
    let o = pimodulo(&["normalize", "--trace", "--theory", "cc", "eps_Kind dType"]);
    assert_eq!(stdout(&o), "root\tR1\tU_Type\nU_Type\n");
    let o = pimodulo(&["normalize", "eps a"]);
    assert_eq!(stdout(&o).trim(), "eps a");
}

#[test]
fn fuel_comes_from_the_environment() {
    let omega = "(\\x : A. x x) (\\x : A. x x)";
    let o = Command::new(env!("CARGO_BIN_EXE_pimodulo")).args(["normalize", "--mode", "beta", omega]).env("PIMODULO_FUEL", "50").output().unwrap();
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8(o.stderr).unwrap().contains("after 50 steps"));
}

#[test]
fn model_check_accepts_the_shipped_theories_and_rejects_a_swapped_rule() {
    assert_eq!(code(&pimodulo(&["model-check", "--theory", "stt", "-n", "2", "--pairs", "20", "--subst", "50"])), 0);
    assert_eq!(code(&pimodulo(&["model-check", "--theory", "cc", "-n", "1", "--pairs", "20", "--subst", "50"])), 0);
    let dump = std::env::temp_dir().join(format!("pimodulo-cx-{}.alg", std::process::id()));
    let o = pimodulo(&["model-check", "--theory", "tests/data/stt_swapped.th", "--pairs", "5", "--subst", "5", "--dump", dump.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    let text = std::fs::read_to_string(&dump).unwrap();
    std::fs::remove_file(&dump).ok();
    assert!(text.contains("; left:  eps (imp X Y)"), "{text}");
    assert!(pimodulo::algebra::FiniteAlgebra::parse_alg(&text).is_ok());
    let o = pimodulo(&["model-check", "--theory", "tests/data/cc_swapped.th", "-n", "1", "--pairs", "5", "--subst", "5"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn consistency_and_sn_scans_pass() {
    for th in ["stt", "cc"] {
        let o = pimodulo(&["consistency-scan", "--theory", th, "--max-size", "8"]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains("control found"));
        assert_eq!(code(&pimodulo(&["sn-scan", "--theory", th, "--count", "500"])), 0);
        assert_eq!(code(&pimodulo(&["sn-scan", "--theory", th, "--count", "500", "--mode", "beta-r"])), 0);
    }
}

#[test]
fn json_output_is_reproducible_and_parseable() {
    let args = ["--format", "json", "--seed", "9", "model-check", "--pairs", "10", "--subst", "20"];
    let a = pimodulo(&args);
    let b = pimodulo(&[&["--jobs", "2"], &args[..]].concat());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for k in ["id", "kind", "status", "detail"] {
            assert!(v.get(k).is_some(), "{line}");
        }
    }
    let summary: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(summary["detail"]["seed"], 9);
    assert_eq!(summary["detail"]["algebras"], 513);
}

#[test]
fn json_mode_keeps_diagnostics_off_stdout() {
    let o = pimodulo(&["--format", "json", "check", "examples/ill_typed.tm"]);
    assert_eq!(code(&o), 1);
    for line in stdout(&o).lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
    assert!(!o.stderr.is_empty());
}
