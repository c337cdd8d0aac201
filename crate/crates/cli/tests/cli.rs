use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symapprox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = dir.join(name).display().to_string();
    let mut args = vec!["--threads", "1", "generate", "--out", &out];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

const SEASON: &[&str] = &["--kind", "season", "--count", "60", "--length", "120", "--strength", "0.5", "--seed", "7"];

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "a", SEASON);
    let b = generate(dir.path(), "b", SEASON);
    let manifest = |p: &str| std::fs::read_to_string(Path::new(p).join("manifest.tsv")).unwrap();
    assert_eq!(manifest(&a), manifest(&b));
    for i in [0, 31, 59] {
        let f = |p: &str| std::fs::read(Path::new(p).join(format!("series/{i}.f64"))).unwrap();
        assert_eq!(f(&a), f(&b));
    }
    let o = run(&["generate", "--out", &a, "--kind", "trend", "--count", "3", "--length", "40", "--strength", "0.2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0.2"), "{}", stdout(&o));
}

#[test]
fn validation_errors_exit_one_without_side_effects() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("bad");
    let bad = target.display().to_string();
    let o = run(&["generate", "--kind", "season", "--count", "10", "--length", "120", "--strength", "1.5", "--out", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!target.exists());

    let o = run(&["generate", "--kind", "season", "--count", "10", "--length", "125", "--strength", "0.5", "--out", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let ds = generate(dir.path(), "ds", SEASON);
    let o = run(&["encode", "--data", &ds, "--technique", "ssax", "--w", "12", "--a-seas", "256", "--budget", "40"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
    let o = run(&["encode", "--data", &ds, "--technique", "sax", "--w", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("ds/index").exists());
}

#[test]
fn io_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none").display().to_string();
    let o = run(&["match", "--data", &missing, "--technique", "sax", "--w", "4", "--query-index", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let ds = generate(dir.path(), "ds", SEASON);
    std::fs::write(Path::new(&ds).join("series/3.f64"), [0u8; 16]).unwrap();
    let o = run(&["match", "--data", &ds, "--technique", "sax", "--w", "4", "--query-index", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn encode_resolves_budget_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate(dir.path(), "ds", &["--kind", "season", "--count", "30", "--length", "480", "--strength", "0.5"]);
    let args = ["encode", "--data", &ds, "--technique", "ssax", "--budget", "320", "--w", "24", "--a-seas", "256"];
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    // 320 - 10 * 8 bits leave 10 bits per segment.
    assert!(text.contains("sSAX W=24 L=10 A=256/1024"), "{text}");
    let files: Vec<_> = std::fs::read_dir(Path::new(&ds).join("index")).unwrap().collect();
    assert_eq!(files.len(), 1);
    let path = files[0].as_ref().unwrap().path();
    let first = std::fs::read(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), first);

    let o = run(&["encode", "--data", &ds, "--technique", "tsax", "--w", "40", "--a-tr", "128"]);
    assert!(stdout(&o).contains("tSAX W=40 A=128/226"), "{}", stdout(&o));
}

#[test]
fn match_finds_member_and_reports_fields() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate(dir.path(), "ds", SEASON);
    let o = run(&[
        "match", "--data", &ds, "--technique", "sax", "--w", "12", "--mode", "both", "--query", "series/5.f64",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(2).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r[2], "5");
        assert_eq!(r[3], "0.000000");
    }

    let tsv = dir.path().join("m.tsv");
    let o = run(&[
        "match", "--data", &ds, "--technique", "ssax", "--w", "6", "--a-seas", "16", "--query-index", "5",
        "--exclude-self", "--early-abandon", "--uncached", "--out", &tsv.display().to_string(),
    ]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&tsv).unwrap();
    let row: Vec<&str> = written.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[0], "#5");
    assert_ne!(row[2], "5");
    let evaluated: usize = row[5].parse().unwrap();
    let pruned: usize = row[6].parse().unwrap();
    assert_eq!(evaluated + pruned, 59);
}

#[test]
fn eval_report_has_one_line_per_config() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate(dir.path(), "ds", SEASON);
    let tsv = dir.path().join("r.tsv").display().to_string();
    let json = dir.path().join("r.json").display().to_string();
    let run_eval = || {
        run(&[
            "--threads", "1", "eval", "--data", &ds, "--config", "sax:w=12", "--config", "ssax:w=6,a_seas=16",
            "--config", "tsax:w=12,a_tr=32", "--out", &tsv, "--json", &json,
        ])
    };
    let o = run_eval();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(&tsv).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 4);
    for col in ["entropy", "mean_tlb", "pruning_power", "approx_accuracy", "time_repr", "time_raw"] {
        assert!(lines[0].split('\t').any(|c| c == col), "missing {col}");
    }
    assert!(std::fs::read_to_string(&json).unwrap().contains("\"records\""));

    // Everything except the timing columns is seed-determined.
    let strip = |s: &str| -> Vec<String> {
        s.lines().map(|l| l.split('\t').take(15).collect::<Vec<_>>().join("\t")).collect()
    };
    assert!(run_eval().status.success());
    assert_eq!(strip(&report), strip(&std::fs::read_to_string(&tsv).unwrap()));
}

#[test]
fn bench_table_has_runtime_columns_per_dataset_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "a", SEASON);
    let b = generate(dir.path(), "b", &["--kind", "season", "--count", "80", "--length", "120", "--strength", "0.3", "--large"]);
    let tsv = dir.path().join("b.tsv").display().to_string();
    let o = run(&[
        "bench", "--data", &a, "--data", &b, "--config", "sax:w=12,a=256", "--config", "ssax:w=6,a_seas=16",
        "--queries", "10", "--time-limit", "60", "--out", &tsv,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&tsv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    let header: Vec<&str> = lines[0].split('\t').collect();
    for col in ["repr", "raw", "sum"] {
        assert!(header.contains(&col));
    }
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split('\t').collect();
        assert_eq!(cells[3], "10");
        let repr: f64 = cells[7].parse().unwrap();
        let raw: f64 = cells[8].parse().unwrap();
        let sum: f64 = cells[9].parse().unwrap();
        assert!((repr + raw - sum).abs() < 2e-6);
    }
    let o = run(&["bench", "--data", &a, "--config", "sax:w=12", "--time-limit", "0"]);
    assert_eq!(o.status.code(), Some(1));
}
