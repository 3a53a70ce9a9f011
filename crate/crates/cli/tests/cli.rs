use std::path::Path;
use std::process::{Command, Output};

fn ptspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV document as string fields, header row first.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(table: &[Vec<String>], name: &str) -> usize {
    table[0].iter().position(|h| h == name).unwrap()
}

#[test]
fn wedges_openings() {
    let o = ptspec(&["wedges", "--eps", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["opening"]["deg"].as_f64().unwrap(), 90.0);
    let o = ptspec(&["wedges", "--eps", "-1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["opening"]["deg"].as_f64().unwrap() - 120.0).abs() < 1e-6);
    let text = stdout(&ptspec(&["wedges", "--eps", "0"]));
    assert!(text.contains("opening") && text.contains("90 deg"));
}

#[test]
fn exit_codes() {
    assert_eq!(ptspec(&["wedges", "--eps", "-4"]).status.code(), Some(1));
    assert_eq!(ptspec(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ptspec(&["wedges"]).status.code(), Some(1));
    assert_eq!(ptspec(&["--help"]).status.code(), Some(0));
    assert_eq!(
        ptspec(&["wedges", "--eps", "0", "--out", "/nonexistent/dir/w.txt"]).status.code(),
        Some(3)
    );
    assert_eq!(ptspec(&["shoot", "--eps", "0", "--emax", "100"]).status.code(), Some(1));
}

#[test]
fn shooting_with_config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# harmonic run\neps = -0.3\nemax = 6\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_config = stdout(&ptspec(&["shoot", "--config", cfg]));
    assert!(from_config.contains("# eps=-0.3"));
    let flag_wins = ptspec(&["shoot", "--config", cfg, "--eps", "0"]);
    assert!(flag_wins.status.success());
    let t = rows(&stdout(&flag_wins));
    let re = column(&t, "re_E");
    let values: Vec<f64> = t[1..].iter().map(|r| r[re].parse().unwrap()).collect();
    assert_eq!(values.len(), 3);
    for (v, e) in values.iter().zip([1.0, 3.0, 5.0]) {
        assert!((v - e).abs() < 1e-6);
    }

    std::fs::write(dir.path().join("bad.cfg"), "eps: 1\n").unwrap();
    let bad = ptspec(&["shoot", "--config", dir.path().join("bad.cfg").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn solve_tags_the_discrete_pair_and_is_reproducible() {
    let args = [
        "solve", "--eps", "-2.6", "--n", "4000", "--eta", "0.01", "--rect=-2.2,-1.4,3.9,4.7", "--nx", "1", "--ny", "1",
    ];
    let a = ptspec(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = ptspec(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# ptspec-csv v1\n"));
    let t = rows(&text);
    assert_eq!(t[0], ["re_E", "im_E", "residual", "tag"]);
    let hit = t[1..].iter().any(|r| {
        let (re, im): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        (re + 1.79).abs() < 0.05 && (im - 4.31).abs() < 0.05 && r[3] == "Discrete"
    });
    assert!(hit, "{text}");
}

#[test]
fn coulomb_case_has_no_discrete_tags() {
    let o = ptspec(&[
        "solve", "--eps", "-3", "--n", "4000", "--eta", "0.01", "--rect=-3,0,0,1.5", "--nx", "4", "--ny", "3",
    ]);
    assert!(o.status.success());
    let t = rows(&stdout(&o));
    assert!(t.len() > 1);
    assert!(t[1..].iter().all(|r| r[3] != "Discrete"));
}

#[test]
fn sweep_reports_the_merge() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = ptspec(&["sweep", "--from", "-0.7", "--to", "-0.5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(t[0], ["kind", "label", "eps_re", "eps_im", "re_E", "im_E"]);
    let merges: Vec<f64> = t[1..].iter().filter(|r| r[0] == "merge").map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(merges.len(), 1);
    assert!((merges[0] + 0.578).abs() < 1e-3, "{merges:?}");

    let svg = dir.path().join("sweep.svg");
    let plot = |path: &Path| {
        ptspec(&[
            "plot", "--input", out.to_str().unwrap(), "--x", "eps_re", "--y", "re_E", "--group", "label", "--out",
            path.to_str().unwrap(),
        ])
    };
    assert!(plot(&svg).status.success());
    let again = dir.path().join("again.svg");
    assert!(plot(&again).status.success());
    let first = std::fs::read(&svg).unwrap();
    assert_eq!(first, std::fs::read(&again).unwrap());
    assert!(String::from_utf8(first).unwrap().contains("<polyline"));
}

#[test]
fn asymptotic_table() {
    let o = ptspec(&["asympt", "--delta", "0.01", "--k", "0..12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = rows(&stdout(&o));
    let k = column(&t, "k");
    let err_re = column(&t, "rel_err_re_pct");
    let err_im = column(&t, "rel_err_im_pct");
    assert_eq!(t.len(), 14);
    let even: Vec<&Vec<String>> = t[1..].iter().filter(|r| r[k].parse::<u32>().unwrap() % 2 == 0).collect();
    assert_eq!(even.len(), 7);
    let im: Vec<f64> = even.iter().map(|r| r[err_im].parse().unwrap()).collect();
    let re0: f64 = even[0][err_re].parse().unwrap();
    assert!(re0 <= 9.0 && im[0] <= 9.0);
    assert!(im.windows(2).all(|w| w[1] < w[0]), "{im:?}");

    let formula_only = ptspec(&["asympt", "--delta", "0.01,0.02", "--k", "0..3", "--no-numeric"]);
    let t = rows(&stdout(&formula_only));
    assert_eq!(t.len(), 9);
    assert!(t[1..].iter().all(|r| r[2].is_empty()));
}

#[test]
fn near_minus_one_estimates() {
    let o = ptspec(&["asympt", "--near", "m1", "--delta", "0.05,0.02,0.01"]);
    assert!(o.status.success());
    let t = rows(&stdout(&o));
    let re = column(&t, "re_num");
    let values: Vec<f64> = t[1..].iter().map(|r| r[re].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
    assert_eq!(ptspec(&["asympt", "--near", "m1", "--delta", "0.01", "--index", "1"]).status.code(), Some(1));
}

#[test]
fn plot_rejects_empty_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "# ptspec-csv v1\nx,y\n").unwrap();
    let o = ptspec(&["plot", "--input", empty.to_str().unwrap(), "--x", "x", "--y", "y"]);
    assert_eq!(o.status.code(), Some(3));
    let o = ptspec(&["plot", "--input", empty.to_str().unwrap(), "--x", "x", "--y", "z"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn degenerate_circle_reports_identity() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("mono.json");
    let o = ptspec(&[
        "circle", "--radius", "0", "--points", "64", "--n", "600", "--report", report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let mono = v["monodromy"].as_array().unwrap();
    for (i, m) in mono.iter().enumerate() {
        assert_eq!(m.as_u64(), Some(i as u64));
    }
    assert_eq!(ptspec(&["circle", "--radius", "0.5"]).status.code(), Some(1));
}
