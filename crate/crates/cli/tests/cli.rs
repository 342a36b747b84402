use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adele-zeta")).args(args).env("RUST_BACKTRACE", "0").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn eval_json_lines() {
    let out = run(&["eval", "--char", "d=-4", "--s", "1,2", "--strip-gamma"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    let l1 = rows[0]["value"][0].as_f64().unwrap();
    let l2 = rows[1]["value"][0].as_f64().unwrap();
    assert!((l1 - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
    assert!((l2 - 0.915_965_594_177_219).abs() < 1e-9);
    assert_eq!(rows[0]["method"], "continued");
}

#[test]
fn eval_euler_csv() {
    let out = run(&["eval", "--char", "trivial", "--s", "3", "--method", "euler", "--cutoff", "100000", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s_re,s_im,value_re,value_im,err_bound,method");
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[5], "euler");
    let value: f64 = fields[2].parse().unwrap();
    let bound: f64 = fields[4].parse().unwrap();
    // Λ(3) = π^{-3/2} Γ(3/2) ζ(3)
    let expected = std::f64::consts::PI.powf(-1.5) * 0.886_226_925_452_758 * 1.202_056_903_159_594;
    assert!((value - expected).abs() <= bound + 1e-15);
}

#[test]
fn pole_is_a_domain_error() {
    let out = run(&["eval", "--char", "trivial", "--s", "1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn bad_configurations_exit_2() {
    for args in [
        &["eval", "--char", "q=4:0", "--s", "2"][..],
        &["eval", "--line", "2,5,1,1"],
        &["eval", "--s", "2", "--line", "2,0,1,1"],
        &["eval"],
        &["eval", "--s", "0.5", "--method", "euler"],
        &["check", "nonsense"],
        &["profile", "--tmin", "30", "--tmax", "20"],
        &["decompose", "--d", "12", "--pmax", "1"],
        &["decompose", "--d", "20"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
    }
}

#[test]
fn thread_count_must_be_positive() {
    let out = Command::new(env!("CARGO_BIN_EXE_adele-zeta"))
        .args(["eval", "--s", "2"])
        .env("ADELE_ZETA_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn check_suites_pass() {
    for suite in ["poisson", "generators", "residues"] {
        let out = run(&["check", suite, "--p", "2,3,5"]);
        assert_eq!(code(&out), 0, "{suite}: {}", stdout(&out));
        assert!(stdout(&out).lines().filter(|l| l.starts_with("FAIL")).count() == 0);
    }
}

#[test]
fn check_json_report() {
    let out = run(&["check", "generators", "--p", "2,3,5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(v["lines"].as_array().unwrap().len() >= 3);
}

#[test]
fn decompose_table() {
    let out = run(&["decompose", "--d", "-4", "--pmax", "229"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows[0].starts_with("2,ramified"));
    assert!(rows[1].starts_with("3,inert"));
    assert!(rows[2].starts_with("5,split"));
}

#[test]
fn decompose_abelian_cubic() {
    let out = run(&["decompose", "--abelian", "7:3", "--pmax", "100"]);
    assert_eq!(code(&out), 0);
    for row in stdout(&out).lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        let p: u64 = fields[0].parse().unwrap();
        let f: u64 = fields[1].parse().unwrap();
        if p != 7 {
            assert_eq!(f, if p % 7 == 1 || p % 7 == 6 { 1 } else { 3 }, "{row}");
        }
    }
}

#[test]
fn profile_csv_header() {
    let out = run(&["profile", "--char", "trivial", "--tmin", "10", "--tmax", "20", "--step", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("# fitted_rate")));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,re,im,log_abs,model,err_bound");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 12);

    let out = run(&["profile", "--gamma-only", "--tmax", "40"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l == "t,log_abs,model,deviation"));
}

#[test]
fn config_round_trip() {
    let dir = std::env::temp_dir().join(format!("adele-zeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    let printed = run(&["--print-config", "eval", "--char", "d=5", "--s", "2,0.5+3i", "--format", "csv"]);
    assert_eq!(code(&printed), 0);
    std::fs::write(&path, stdout(&printed)).unwrap();

    let from_file = run(&["--config", path.to_str().unwrap()]);
    let direct = run(&["eval", "--char", "d=5", "--s", "2,0.5+3i", "--format", "csv"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(stdout(&from_file), stdout(&direct));

    let both = run(&["--config", path.to_str().unwrap(), "eval", "--s", "2"]);
    assert_eq!(code(&both), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("adele-zeta-out-{}.csv", std::process::id()));
    let out = run(&["eval", "--s", "2", "--format", "csv", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    std::fs::remove_file(&path).ok();
}
