use std::path::Path;
use std::process::{Command, Output};

fn geostable(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geostable"))
        .args(args)
        .arg("--output-path")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_prints_the_class() {
    let dir = tempfile::tempdir().unwrap();
    let o = geostable(&["classify", "--alpha", "1.5", "--dim", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Recurrent");
    let o = geostable(&["classify", "--alpha", "1.5", "--dim", "2"], dir.path());
    assert_eq!(stdout(&o).trim(), "Transient");
    assert!(dir.path().join("classify.manifest.json").exists());
}

#[test]
fn inversion_below_threshold_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = geostable(&["density", "--alpha", "2", "--dim", "1", "--t", "0.4", "--method", "inversion"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("t > d/alpha"), "{}", stderr(&o));
    assert!(!dir.path().join("density.csv").exists());
}

#[test]
fn monte_carlo_needs_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["sample"][..], &["feynman-kac"], &["density", "--method", "mc"], &["verify"]] {
        let o = geostable(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("--seed"));
    }
}

#[test]
fn invalid_values_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["classify", "--alpha", "2.5"][..], &["groundstate", "--N", "100"], &["kato", "--times", "1,-1"]] {
        let o = geostable(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    // trivial μ⁻
    let o = geostable(&["groundstate", "--mu-minus", "indicator:width=1,height=0"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "alpha = 2\nt = 0.4\npoints = 11\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = geostable(&["density", "--config", cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = geostable(&["density", "--config", cfg, "--t", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("density.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.starts_with("x,p\n"));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("density.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["t"], 1.0);
    assert_eq!(manifest["config"]["alpha"], 2.0);
}

#[test]
fn rerun_from_recorded_config_is_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = geostable(&["sample", "--seed", "9", "--n-samples", "2000", "--alpha", "0.8"], a.path());
    assert_eq!(o.status.code(), Some(0));
    let recorded = a.path().join("sample.config");
    let o = geostable(&["sample", "--config", recorded.to_str().unwrap()], b.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let read = |d: &Path| std::fs::read(d.join("sample.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn groundstate_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = geostable(&["groundstate"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("groundstate.json")).unwrap()).unwrap();
    for key in ["alpha", "L", "N", "lambda", "residual", "iterations", "normalization_check", "h"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let lambda = v["lambda"].as_f64().unwrap();
    assert!(lambda > 0.0 && lambda <= 0.25);
    let csv = std::fs::read_to_string(dir.path().join("groundstate.csv")).unwrap();
    assert!(csv.starts_with("x,h\n"));
    assert_eq!(csv.lines().count(), 257);
}

#[test]
fn measure_from_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("mu.csv");
    std::fs::write(&m, "x,weight\n-0.5,0.25\n0.5,0.25\n").unwrap();
    let o = geostable(&["groundstate", "--mu-plus", m.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify", "--suite", "core", "--seed", "42", "--check", "5,6,8,11"];
    let (oa, ob) = (geostable(&args, a.path()), geostable(&args, b.path()));
    assert_eq!(oa.status.code(), Some(0), "{}", stdout(&oa));
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(stdout(&oa).lines().filter(|l| l.starts_with("PASS")).count(), 4);
    for f in ["verify.txt", "verify.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn tables_have_documented_headers() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str, &str); 4] = [
        (&["kfun", "--points", "8"], "kfun.csv", "r,k_value"),
        (&["levy", "--points", "8"], "levy.csv", "r,j"),
        (&["symbol", "--points", "8"], "symbol.csv", "xi,psi,phi"),
        (&["kato"], "kato.csv", "t,value"),
    ];
    for (args, file, header) in cases {
        let o = geostable(args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        assert_eq!(text.lines().next(), Some(header));
    }
}
