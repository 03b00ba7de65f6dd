#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use nvqaoa_cli::{run, EXIT_DEGENERATE, EXIT_OK, EXIT_USAGE};
use nvqaoa_core::closed_form_cost_k2;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn nvqaoa(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nvqaoa").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn k2(dir: &Path) -> String {
    write(dir, "k2.txt", "n 2\n0 1\n")
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

fn value_of(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .to_string()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn ideal_landscape_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = nvqaoa(&[
        "landscape",
        "--graph",
        &k2(dir.path()),
        "--mode",
        "ideal",
        "--out",
        &s(&out),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let rows = csv_rows(&out.join("landscape.csv"));
    assert_eq!(rows.len(), 861);
    for row in &rows {
        let (b, g, f): (f64, f64, f64) = (
            row[0].parse().unwrap(),
            row[1].parse().unwrap(),
            row[3].parse().unwrap(),
        );
        assert!((f - closed_form_cost_k2(b, g)).abs() < 1e-9);
    }
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(value_of(&summary, "invalid_points"), "0");
    let manifest = fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert_eq!(value_of(&manifest, "command"), "landscape");
    assert!(manifest.contains("arg = --seed"));
    assert!(manifest.contains("artifact = "));
}

#[test]
fn sampled_landscape_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let graph = k2(dir.path());
    let run_once = |name: &str| {
        let out = dir.path().join(name);
        let r = nvqaoa(&[
            "landscape",
            "--graph",
            &graph,
            "--mode",
            "sampled",
            "--seed",
            "7",
            "--shots",
            "20000",
            "--realizations",
            "2",
            "--beta",
            "0.1pi:0.3pi:0.1pi",
            "--gamma",
            "0.5pi:1.5pi:0.5pi",
            "--out",
            &s(&out),
        ]);
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        fs::read(out.join("landscape.csv")).unwrap()
    };
    assert_eq!(run_once("a"), run_once("b"));
}

#[test]
fn missing_calibration_file_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = nvqaoa(&[
        "landscape",
        "--graph",
        &k2(dir.path()),
        "--cal",
        &s(&dir.path().join("nope.txt")),
        "--out",
        &s(&out),
    ]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("calibration"));
    assert!(!out.exists());
}

#[test]
fn sampled_mode_needs_calibration_beyond_two_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.txt", "n 3\n0 1\n0 2\n1 2\n");
    let out = dir.path().join("out");
    let r = nvqaoa(&["landscape", "--graph", &k3, "--out", &s(&out)]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(!out.exists());
}

#[test]
fn overwrite_requires_force() {
    let dir = tempfile::tempdir().unwrap();
    let out = s(&dir.path().join("out"));
    let graph = k2(dir.path());
    let args = [
        "landscape",
        "--graph",
        &graph,
        "--mode",
        "ideal",
        "--beta",
        "0.25pi",
        "--gamma",
        "pi",
        "--out",
        &out,
    ];
    assert_eq!(nvqaoa(&args).code, EXIT_OK);
    let again = nvqaoa(&args);
    assert_eq!(again.code, EXIT_USAGE);
    assert!(again.stderr.contains("--force"));
    let mut forced = args.to_vec();
    forced.push("--force");
    assert_eq!(nvqaoa(&forced).code, EXIT_OK);
}

#[test]
fn bad_configuration_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let graph = k2(dir.path());
    let noise = write(dir.path(), "noise.toml", "depolarising = 0.1\n");
    for extra in [
        vec!["--noise", noise.as_str()],
        vec!["--threads", "0"],
        vec!["--beta", "1:0:0.1"],
        vec!["--gamma", "twopi"],
        vec!["--realizations", "0"],
        vec!["--mode", "exact"],
    ] {
        let out = s(&dir.path().join("out"));
        let mut args = vec!["landscape", "--graph", &graph, "--shots", "100", "--out", &out];
        args.extend(extra.iter().copied());
        let r = nvqaoa(&args);
        assert_eq!(r.code, EXIT_USAGE, "{extra:?}: {}", r.stderr);
        assert!(!r.stderr.is_empty());
    }
    let r = nvqaoa(&["landscape", "--graph", &s(&dir.path().join("missing.txt"))]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn svg_heatmap_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = nvqaoa(&[
        "landscape",
        "--graph",
        &k2(dir.path()),
        "--mode",
        "ideal",
        "--svg",
        "--beta",
        "0.1pi:0.2pi:0.05pi",
        "--out",
        &s(&out),
    ]);
    assert_eq!(r.code, EXIT_OK);
    let svg = fs::read_to_string(out.join("landscape.svg")).unwrap();
    assert_eq!(svg.matches("<rect").count(), 3 * 41);
}

#[test]
fn optimize_k2_finds_the_maximum_cut() {
    let dir = tempfile::tempdir().unwrap();
    let r = nvqaoa(&["optimize", "--graph", &k2(dir.path()), "--mode", "ideal"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(value_of(&r.stdout, "best_F"), "-1.000000");
    assert_eq!(value_of(&r.stdout, "optimal_cuts"), "01,10");
    assert_eq!(value_of(&r.stdout, "approximation_ratio"), "1.000000");
}

#[test]
fn optimize_edgeless_graph_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "empty.txt", "n 2\n");
    let r = nvqaoa(&["optimize", "--graph", &graph, "--mode", "ideal"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(value_of(&r.stdout, "best_F"), "0.000000");
    assert!(value_of(&r.stdout, "note").contains("degenerate"));
}

#[test]
fn optimize_k3_matches_dense_grid() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "k3.txt", "n 3\n0 1\n0 2\n1 2\n");
    for strategy in ["grid-refine", "simplex"] {
        let r = nvqaoa(&["optimize", "--graph", &graph, "--mode", "ideal", "--strategy", strategy]);
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        let f: f64 = value_of(&r.stdout, "best_F").parse().unwrap();
        assert!((f - common::K3_DENSE_GRID_MIN).abs() < 1e-3, "{strategy}: {f}");
        assert_eq!(value_of(&r.stdout, "best_cost"), "-2.000000");
    }
}

fn reconstruct(dir: &Path, cal: [f64; 4], means: [f64; 4]) -> Outcome {
    let table = |v: [f64; 4]| format!("00 {}\n01 {}\n10 {}\n11 {}\n", v[0], v[1], v[2], v[3]);
    let cal = write(dir, "cal.txt", &table(cal));
    let means = write(dir, "means.txt", &table(means));
    nvqaoa(&["reconstruct", "--cal", &cal, "--means", &means])
}

#[test]
fn reconstruct_examples() {
    let dir = tempfile::tempdir().unwrap();
    let check = |r: &Outcome, expected: [f64; 4]| {
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        for (label, e) in ["00", "01", "10", "11"].iter().zip(expected) {
            let p: f64 = value_of(&r.stdout, &format!("p{label}")).parse().unwrap();
            assert!((p - e).abs() < 1e-9);
        }
        let norm: f64 = value_of(&r.stdout, "norm").parse().unwrap();
        assert!((norm - 1.0).abs() < 1e-9);
    };
    check(
        &reconstruct(dir.path(), [5.0, 3.0, 2.0, 1.0], [5.0, 3.0, 2.0, 1.0]),
        [1.0, 0.0, 0.0, 0.0],
    );
    let uniform = reconstruct(dir.path(), [5.0, 3.0, 2.0, 1.0], [2.75; 4]);
    check(&uniform, [0.25; 4]);
    let z00: f64 = value_of(&uniform.stdout, "z00").parse().unwrap();
    assert!((z00 - 1.0).abs() < 1e-12);

    let r = reconstruct(dir.path(), [4.0, 3.0, 2.0, 1.0], [1.0, 2.0, 3.0, 4.0]);
    assert_eq!(r.code, EXIT_DEGENERATE);
    assert!(r.stderr.contains("c_11"), "{}", r.stderr);
    assert!(r.stderr.contains("t = 11"), "{}", r.stderr);
}

#[test]
fn reconstruct_shape_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cal = write(dir.path(), "cal.txt", "00 5\n01 3\n10 2\n11 1\n");
    let short = write(dir.path(), "short.txt", "0 1\n1 2\n");
    let garbage = write(dir.path(), "garbage.txt", "00 x\n");
    for means in [&short, &garbage] {
        assert_eq!(
            nvqaoa(&["reconstruct", "--cal", &cal, "--means", means]).code,
            EXIT_USAGE
        );
    }
}

#[test]
fn convergence_writes_one_row_per_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = nvqaoa(&[
        "convergence",
        "--graph",
        &k2(dir.path()),
        "--shots",
        "300000",
        "--realizations",
        "4",
        "--seed",
        "3",
        "--checkpoint-every",
        "7000",
        "--out",
        &s(&out),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let text = fs::read_to_string(out.join("convergence.csv")).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("shots,p00,p01,p10,p11,norm"));
    assert!(header.contains("std_p00"));
    let rows = csv_rows(&out.join("convergence.csv"));
    assert_eq!(rows.len(), 300_000 / 7000);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    let norm: f64 = value_of(&summary, "final_norm_mean").parse().unwrap();
    assert!((0.97..=1.03).contains(&norm), "{norm}");
}

#[test]
fn convergence_rejects_ideal_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = nvqaoa(&[
        "convergence",
        "--graph",
        &k2(dir.path()),
        "--mode",
        "ideal",
        "--out",
        &s(&out),
    ]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("sampled"));
    assert!(!out.exists());
}

#[test]
fn replay_reproduces_outputs_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let noise = write(
        dir.path(),
        "noise.toml",
        "depolarizing_prob = 0.05\noverrotation_frac = 0.02\ntrajectories = 40\n",
    );
    let first = dir.path().join("first");
    let r = nvqaoa(&[
        "landscape",
        "--graph",
        &k2(dir.path()),
        "--shots",
        "5000",
        "--realizations",
        "2",
        "--seed",
        "11",
        "--noise",
        &noise,
        "--beta",
        "0.1pi:0.3pi:0.1pi",
        "--gamma",
        "0.5pi:1.5pi:0.5pi",
        "--threads",
        "1",
        "--out",
        &s(&first),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let second: PathBuf = dir.path().join("second");
    let r = nvqaoa(&[
        "replay",
        "--manifest",
        &s(&first.join("manifest.txt")),
        "--out",
        &s(&second),
        "--threads",
        "3",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(
        fs::read(first.join("landscape.csv")).unwrap(),
        fs::read(second.join("landscape.csv")).unwrap()
    );

    let refused = nvqaoa(&["replay", "--manifest", &s(&first.join("manifest.txt"))]);
    assert_eq!(refused.code, EXIT_USAGE);
    let forced = nvqaoa(&["replay", "--manifest", &s(&first.join("manifest.txt")), "--force"]);
    assert_eq!(forced.code, EXIT_OK, "{}", forced.stderr);
}

#[test]
fn binary_uses_seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let graph = k2(dir.path());
    let exe = env!("CARGO_BIN_EXE_nvqaoa");
    let run_with = |name: &str, env: Option<&str>, flag: Option<&str>| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(exe);
        cmd.args(["landscape", "--graph", &graph, "--shots", "2000", "--realizations", "1"])
            .args(["--beta", "0.15pi", "--gamma", "1.5pi", "--out", &s(&out)])
            .env_remove("NVQAOA_SEED");
        if let Some(seed) = env {
            cmd.env("NVQAOA_SEED", seed);
        }
        if let Some(seed) = flag {
            cmd.args(["--seed", seed]);
        }
        let output = cmd.output().unwrap();
        assert_eq!(output.status.code(), Some(EXIT_OK));
        fs::read(out.join("landscape.csv")).unwrap()
    };
    let from_env = run_with("env", Some("42"), None);
    assert_eq!(from_env, run_with("flag", None, Some("42")));
    assert_ne!(from_env, run_with("other", None, Some("43")));

    let missing = Command::new(exe).args(["landscape"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--graph"));
}

#[test]
fn angle_forms_are_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    let graph = k2(dir.path());
    let csv = |name: &str, beta: &str| {
        let out = dir.path().join(name);
        let r = nvqaoa(&[
            "landscape",
            "--graph",
            &graph,
            "--mode",
            "ideal",
            "--beta",
            beta,
            "--gamma",
            "1.5pi",
            "--out",
            &s(&out),
        ]);
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        csv_rows(&out.join("landscape.csv"))[0][3].parse::<f64>().unwrap()
    };
    let a = csv("pi", "0.125pi");
    let b = csv("rad", &format!("{:?}", PI / 8.0));
    assert!((a - b).abs() < 1e-12);
    assert!((a + 1.0).abs() < 1e-9);
}
