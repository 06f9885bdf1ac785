use std::path::PathBuf;
use std::process::Command;

const CASES: &[(&str, &[&str], i32)] = &[
    ("analyze_prufer.txt", &["analyze", "Z(2^inf)"], 0),
    ("cw_prufer_localized.txt", &["cw", "--moore", "Z[1/2]", "--space", "K(Z(2^inf),1)"], 0),
    ("cw_rationals_sphere.txt", &["cw", "--moore", "Q", "--space", "S^2"], 0),
    ("cw_counterexample.txt", &["cw", "--moore", "Z[1/3] * Z/3", "--space", "K(Z,2)"], 0),
    ("cellular_counterexample.txt", &["cellular", "--moore", "Z[1/2] * Z/2", "--space", "K(Z,2)"], 0),
    (
        "cellular_counterexample.json",
        &["--format", "structured", "cellular", "--moore", "Z[1/2] * Z/2", "--space", "K(Z,2)"],
        0,
    ),
    ("cellular_summand.txt", &["cellular", "--moore", "Z/2 + Z/9", "--space", "M(Z/9,1)"], 0),
    (
        "cellular_unknown_strict.txt",
        &["--strict-known", "cellular", "--moore", "Z/3 * Z/3", "--space", "space{pi1=Z/3 + Z/3; H=[Z/3 + Z/3]}"],
        3,
    ),
    ("ext_type_one.txt", &["ext", "type(1)", "Z"], 0),
    ("radical_prufer.txt", &["radical", "Z(3^inf)", "Z/3 + Z(3^inf) + Z/5"], 0),
    ("quasiradical_prufer.txt", &["quasiradical", "Z(3^inf)", "Z/3"], 0),
    ("moore_no.txt", &["moore", "Z + Z/3"], 0),
    ("moore_no_recipe.txt", &["moore", "Z(2^inf) + Z(2^inf)"], 3),
    ("moore_presentation.txt", &["moore", "Z[1/2,3]", "--check-presentation", "--prefix-length", "5"], 0),
    ("moore_finite_presentation.txt", &["moore", "type(0; 3:2)", "--check-presentation", "-n", "8"], 0),
    ("oracle_hom.json", &["--format", "structured", "oracle", "hom", "Z/4", "Z/6"], 0),
    ("oracle_genby.txt", &["oracle", "genby", "Z/9", "3:1"], 0),
    ("oracle_bound.txt", &["--oracle-bound", "16", "oracle", "radical", "Z/2", "Z/32"], 2),
    ("parse_error.txt", &["hom", "Z/4 + ", "Z"], 2),
    ("unknown_command.txt", &["frobnicate"], 2),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_moorecell")).args(args).output().expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8 output"), out.status.code().unwrap_or(-1))
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (file, args, code) in CASES {
        let (out, status) = run(args);
        assert_eq!(status, *code, "{file}: exit status\n{out}");
        let path = golden_dir().join(file);
        if update {
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        if out != expected {
            failures.push(format!("{file}:\n--- expected\n{expected}--- got\n{out}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn output_is_deterministic() {
    for (_, args, _) in CASES.iter().take(6) {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn verdicts_carry_citations() {
    for (_, args, _) in CASES {
        let (out, _) = run(args);
        if out.lines().any(|l| l == "answer: Yes" || l == "answer: No") {
            assert!(out.contains("trail:\n  ["), "{out}");
        }
    }
}
