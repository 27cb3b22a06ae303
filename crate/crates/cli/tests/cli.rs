use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn mixsmooth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixsmooth")).args(args).env_remove("MIXSMOOTH_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Set `UPDATE_GOLDEN=1` to rewrite the help files after changing flags.
#[test]
fn help_matches_golden_files() {
    for sub in ["", "norm", "blocks", "modulus", "angle", "sweep", "verify"] {
        let mut args: Vec<&str> = Vec::new();
        if !sub.is_empty() {
            args.push(sub);
        }
        args.push("--help");
        let out = mixsmooth(&args);
        assert!(out.status.success());
        let name = if sub.is_empty() { "help.txt".to_string() } else { format!("help-{sub}.txt") };
        let path = golden_dir().join(name);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            fs::create_dir_all(golden_dir()).unwrap();
            fs::write(&path, stdout(&out)).unwrap();
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(stdout(&out), want, "{} is stale", path.display());
    }
}

#[test]
fn every_flag_documents_a_default() {
    // Optional inputs and outputs whose absence is the default.
    let optional = ["--fn", "--fn-file", "--json", "--output", "--corpus", "--golden", "--freeze-golden", "--kind"];
    for sub in ["norm", "blocks", "modulus", "angle", "sweep", "verify"] {
        let help = stdout(&mixsmooth(&[sub, "-h"]));
        for line in help.lines().map(str::trim_start).filter(|l| l.starts_with("-")) {
            let flag = line.split_whitespace().find(|w| w.starts_with("--")).unwrap().trim_end_matches(',');
            if !line.contains('<') || optional.contains(&flag) {
                continue;
            }
            assert!(line.contains("[default"), "{sub} {flag} has no documented default");
        }
    }
}

#[test]
fn norm_of_cosine() {
    let out = mixsmooth(&["norm", "--kind", "lorentz", "--p", "2", "--tau", "2", "--fn", "cos:1"]);
    assert!(out.status.success());
    let v: f64 = stdout(&out).split_whitespace().next().unwrap().parse().unwrap();
    assert!((v - 0.5f64.sqrt()).abs() < 1e-4);
}

#[test]
fn sequence_norm_of_zero_is_zero() {
    let out = mixsmooth(&["norm", "--kind", "seqB", "--b", "0", "--theta", "1", "--fn", "zero"]);
    assert!(out.status.success());
    let v: f64 = stdout(&out).split_whitespace().next().unwrap().parse().unwrap();
    assert_eq!(v, 0.0);
}

#[test]
fn bold_norm_rejects_nonzero_mean_with_axis() {
    let out = mixsmooth(&["norm", "--kind", "boldB", "--fn", "prod(cos:1,const:1)"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("axis 1"), "{err}");
}

#[test]
fn norm_json_and_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let fn_path = dir.path().join("f.json");
    fs::write(&fn_path, r#"{"dim":1,"degree":[2],"entries":[[[-2],0.5,0.0],[[2],0.5,0.0]]}"#).unwrap();
    let json_path = dir.path().join("out.json");
    let out = mixsmooth(&["norm", "--fn-file", fn_path.to_str().unwrap(), "--p", "3", "--tau", "1.5", "--json", json_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["kind"], "lorentz");
    assert!(doc["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["norm", "--fn", "tan:1"],
        vec!["norm", "--fn", "cos:1", "--p", "1"],
        vec!["norm", "--fn", "cos:1", "--kind", "seqB", "--theta", "1", "--b", "-2"],
        vec!["blocks", "--fn", "prod(cos:1,cos:1)", "--grid", "4,4,4"],
        vec!["verify", "--check", "no_such_check"],
        vec!["verify", "--m", "4"],
        vec!["norm"],
    ] {
        assert_eq!(mixsmooth(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn explicit_truncation_too_short_is_numeric_failure() {
    let out = mixsmooth(&["norm", "--kind", "boldB", "--fn", "cos:1", "--theta", "1", "--b", "1", "--nu-max", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn empty_sweep_is_header_only() {
    let out = mixsmooth(&["sweep", "--kind", "kernel-moment", "--from", "10", "--to", "9"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "l,mass,moment\n");
    let out = mixsmooth(&["sweep", "--kind", "modulus", "--fn", "cos:1", "--points", "0"]);
    assert_eq!(stdout(&out), "t,omega,tolerance\n");
}

#[test]
fn tables_have_headers_and_rows() {
    let blocks = stdout(&mixsmooth(&["blocks", "--fn", "prod(cos:3,cos:1)"]));
    assert_eq!(blocks.lines().next(), Some("s1,s2,norm"));
    assert!(blocks.lines().any(|l| l.starts_with("2,1,")));
    let modulus = stdout(&mixsmooth(&["modulus", "--fn", "cos:2", "--nu-max", "4"]));
    assert_eq!(modulus.lines().next(), Some("nu1,t1,omega,tolerance"));
    assert_eq!(modulus.lines().count(), 5);
    let angle = stdout(&mixsmooth(&["angle", "--fn", "prod(cos:2,cos:2)"]));
    assert_eq!(angle.lines().next(), Some("l1,l2,y,kernel"));
    let row = angle.lines().find(|l| l.starts_with("1,1,")).unwrap();
    let y: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((y - 0.5).abs() < 1e-3);
}

#[test]
fn verify_thm1_writes_reports_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = mixsmooth(&["verify", "--check", "thm1", "--m", "1", "--seed", "7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("thm1.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"]["pass"], true);
    assert!(report["window"].is_object());
    let csv = fs::read_to_string(dir.path().join("thm1.csv")).unwrap();
    assert!(csv.starts_with("id,lhs,rhs,ratio\n"));
}

#[test]
fn tight_golden_window_fails_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("golden.json");
    let fp = "m=1;deg=4;seed=7;families=single_block;k=2;h=17;grid=1024;lp=2/2,3/1.5,3/3;theta=1,2,inf;b=-0.25,0,1";
    fs::write(&golden, format!(r#"{{"configs":{{"{fp}":{{"thm1":{{"min":100.0,"max":101.0}}}}}}}}"#)).unwrap();
    let out = mixsmooth(&[
        "verify", "--check", "thm1", "--max-degree", "4", "--families", "single_block", "--golden", golden.to_str().unwrap(), "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stdout(&out));
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mixsmooth"))
        .args(["norm", "--fn", "cos:1"])
        .env("MIXSMOOTH_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_mixsmooth"))
        .args(["norm", "--fn", "cos:1"])
        .env("MIXSMOOTH_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
