use std::path::PathBuf;
use std::process::{Command, Output};

use latpath::enumerate::brute_force;
use latpath::model::parse_model;

fn model(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
    dir.join(name).to_string_lossy().into_owned()
}

fn latpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latpath")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table2_golden() {
    let o = latpath(&["table2", &model("dyck.model")]);
    assert_eq!(o.status.code(), Some(0));
    let expected = "\
# path\tuniform\tabsolute_value\treflection\tabsorption
UUDD\t1/6\t1/3\t1/3\t1/2
UDUD\t1/6\t2/3\t2/3\t1/2
UDDU\t1/6\t0\t0\t0
DUUD\t1/6\t0\t0\t0
DUDU\t1/6\t0\t0\t0
DDUU\t1/6\t0\t0\t0
";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn exact_counts_match_brute_force() {
    let path = model("motzkin_refl.model");
    let o = latpath(&["count", "--n", "4", "--what", "excursions", &path, "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let m = parse_model(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# n\texcursions"));
    for (n, line) in lines.enumerate() {
        let bf = brute_force(&m, n).unwrap();
        assert_eq!(line, format!("{n}\t{}", bf.excursion_mass));
    }
}

#[test]
fn gf_eval_residual_is_small() {
    for name in ["two_down.model", "motzkin_abs.model", "long_jump.model"] {
        let o = latpath(&["gf-eval", "--z", "0.3", &model(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let text = stdout(&o);
        let residual: f64 =
            text.lines().find_map(|l| l.strip_prefix("perturbation_residual\t")).unwrap().parse().unwrap();
        assert!(residual <= 1e-9, "{name}: {residual}");
    }
}

#[test]
fn exit_codes() {
    let dyck = model("dyck.model");
    assert_eq!(latpath(&["classify", &dyck]).status.code(), Some(1));
    assert_eq!(latpath(&["asym", "--n", "100", "--what", "excursions", &dyck]).status.code(), Some(1));
    assert_eq!(latpath(&["fit", "--n", "100", "--what", "returns", &dyck]).status.code(), Some(1));
    assert_eq!(latpath(&["count", "--n", "6", "--what", "excursions", &dyck, "--exact"]).status.code(), Some(0));
    assert_eq!(latpath(&["validate", &model("invalid.model")]).status.code(), Some(1));
    assert_eq!(latpath(&["classify", "no/such/file.model"]).status.code(), Some(1));
    assert_eq!(latpath(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(latpath(&["classify", &model("motzkin_abs.model")]).status.code(), Some(0));
    // a fit that misses the tolerance
    let o = latpath(&["fit", "--n", "20", "--what", "final-alt", &model("motzkin_abs.model")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn errors_go_to_stderr() {
    let o = latpath(&["classify", &model("dyck.model")]);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("periodic"));
}

#[test]
fn output_is_deterministic_tsv() {
    let runs = [
        format!("constants {}", model("supercritical.model")),
        format!("count --n 30 --what meanders {}", model("critical.model")),
        format!("dist --n 40 --what returns {}", model("motzkin_abs.model")),
        format!("asym --n 300 --what final-alt {}", model("positive_drift.model")),
        format!("fit --n 200 --what returns --plot {}", model("supercritical.model")),
    ];
    for args in runs {
        let args: Vec<&str> = args.split_whitespace().collect();
        let a = latpath(&args);
        let b = latpath(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let text = stdout(&a);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("# "), "{args:?}: {header}");
        let width = header.split('\t').count();
        for line in lines.filter(|l| !l.starts_with('#')) {
            assert_eq!(line.split('\t').count(), width, "{args:?}: {line}");
        }
    }
}

#[test]
fn verify_passes_on_model_files() {
    for name in ["motzkin_refl.model", "motzkin_abs.model", "positive_drift.model", "two_down.model", "dyck.model"] {
        let o = latpath(&["verify", &model(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}\n{}", stdout(&o));
        assert!(!stdout(&o).contains("\tFAIL\t"), "{name}");
    }
}

#[test]
fn presets_are_addressable() {
    let o = latpath(&["classify", "preset:motzkin_absorption"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("subcritical"));
}
