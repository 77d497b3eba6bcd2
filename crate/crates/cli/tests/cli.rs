use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn xizero(dir: &Path, args: &[&str]) -> Output {
    let out = dir.join("out");
    let cache = dir.join("cache");
    Command::new(env!("CARGO_BIN_EXE_xizero"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .arg("--cache-dir")
        .arg(&cache)
        .env_remove("XIZERO_CACHE_DIR")
        .output()
        .expect("xizero binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

#[test]
fn roots_for_n2_is_five_sixths() {
    let d = tempfile::tempdir().unwrap();
    let o = xizero(d.path(), &["roots", "--n", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(d.path(), "roots.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,k,root"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("2,1,0.83333333333333333333333333333"), "{row}");
    assert_eq!(lines.next(), None);
}

#[test]
fn duplicate_n_is_collapsed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(xizero(a.path(), &["roots", "--n", "2"]).status.success());
    assert!(xizero(b.path(), &["roots", "--n", "2,2"]).status.success());
    assert_eq!(read(a.path(), "roots.csv"), read(b.path(), "roots.csv"));
}

#[test]
fn n10_has_nine_rows_and_cache_hits_are_identical() {
    let d = tempfile::tempdir().unwrap();
    assert!(xizero(d.path(), &["roots", "--n", "10"]).status.success());
    let first = read(d.path(), "roots.csv");
    assert_eq!(first.lines().filter(|l| l.starts_with("10,")).count(), 9);
    assert!(d.path().join("cache/roots-n10-eps1e-30.txt").exists());
    assert!(xizero(d.path(), &["roots", "--n", "10"]).status.success());
    assert_eq!(first, read(d.path(), "roots.csv"));
}

#[test]
fn cache_version_mismatch_is_refused() {
    let d = tempfile::tempdir().unwrap();
    assert!(xizero(d.path(), &["roots", "--n", "3"]).status.success());
    let path = d.path().join("cache/roots-n3-eps1e-30.txt");
    let text = fs::read_to_string(&path).unwrap().replacen("roots v1", "roots v9", 1);
    fs::write(&path, text).unwrap();
    let o = xizero(d.path(), &["roots", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported cache version"));
}

#[test]
fn cdf_compare_grid_ks_and_svg() {
    let d = tempfile::tempdir().unwrap();
    let o = xizero(d.path(), &["cdf-compare", "--n", "2,8,16", "--svg"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(d.path(), "cdf_compare.csv");
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 512);
    for block in rows.chunks(512) {
        let first = &block[0];
        let last = &block[511];
        assert!(first[3].trim_end_matches('0') == "0." || first[3].parse::<f64>().unwrap() == 0.0);
        assert_eq!(last[3].parse::<f64>().unwrap(), 1.0);
        assert_eq!(last[2].parse::<f64>().unwrap(), 1.0);
    }
    let ks: Vec<f64> = read(d.path(), "ks_summary.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!((ks[0] - 0.5054).abs() < 1e-4);
    assert!(ks.windows(2).all(|w| w[1] < w[0]));
    let svg = read(d.path(), "cdf_compare.svg");
    assert_eq!(svg.matches("<polyline").count(), 4);
}

#[test]
fn outputs_are_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let run = || {
        assert!(xizero(d.path(), &["stieltjes", "--n", "2,5", "--re", "-1", "--im", "0.5"]).status.success());
        read(d.path(), "stieltjes.csv")
    };
    let a = run();
    assert_eq!(a, run());
    assert!(a.starts_with("n,z_re,z_im,"));
}

#[test]
fn config_file_and_flag_precedence() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.conf");
    fs::write(&cfg, "# test config\nn = 4\nprecision = 80\n").unwrap();
    let o = xizero(d.path(), &["roots", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = read(d.path(), "roots.csv");
    assert_eq!(csv.lines().count(), 4);
    // 80 bits give 25 significant digits
    let root = csv.lines().nth(1).unwrap().split(',').nth(2).unwrap();
    assert_eq!(root.trim_start_matches("0.").len(), 25);
    let o = xizero(d.path(), &["roots", "--config", cfg.to_str().unwrap(), "--n", "3"]);
    assert!(o.status.success());
    assert!(read(d.path(), "roots.csv").lines().nth(1).unwrap().starts_with("3,1,"));
}

#[test]
fn invalid_configuration_exits_nonzero() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        &["roots", "--n", ""][..],
        &["roots", "--eps", "0.01"],
        &["roots", "--precision", "32"],
        &["verify", "--n", ","],
    ] {
        let o = xizero(d.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn env_var_sets_cache_dir() {
    let d = tempfile::tempdir().unwrap();
    let envdir = d.path().join("envcache");
    let o = Command::new(env!("CARGO_BIN_EXE_xizero"))
        .args(["roots", "--n", "2", "--out"])
        .arg(d.path().join("out"))
        .env("XIZERO_CACHE_DIR", &envdir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(envdir.join("roots-n2-eps1e-30.txt").exists());
}

#[test]
fn verify_flags_escalation_at_64_bits_and_is_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let args = ["verify", "--n", "8,64", "--precision", "64"];
    let a = xizero(d.path(), &args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    let report = String::from_utf8(a.stdout.clone()).unwrap();
    assert!(report.contains("note right_edge n=64 adaptive precision escalated"));
    assert!(report.contains("note stieltjes confirmed variant"));
    assert_eq!(report, read(d.path(), "verify.txt"));
    let b = xizero(d.path(), &args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn asymptotics_report_rows() {
    let d = tempfile::tempdir().unwrap();
    let o = xizero(d.path(), &["asymptotics", "--n", "8,16"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(d.path(), "asymptotics.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("statistic,param,value,target"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4 + 4 + 2 + 2 + 2);
    assert!(rows.iter().any(|r| r.starts_with("s_ratio_x=1/e,400,2.00")));
    assert!(rows.iter().any(|r| r.starts_with("left_edge_k=1,16,6.03")));
}
