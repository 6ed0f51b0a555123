use std::path::PathBuf;
use std::process::{Command, Output};

fn ualab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ualab")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ualab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn reruns_are_byte_identical() {
    let runs: &[&[&str]] = &[
        &["stats", "--n", "500", "--n", "800", "--k", "3", "--trials", "8", "--seed", "1"],
        &["expansion", "--n", "16", "--n", "300", "--trials", "3"],
        &["rho"],
        &["walk", "--n", "10", "--trials", "4", "--t-max", "30"],
        &["percolate", "--n", "400", "--k", "4", "--r", "2", "--p", "0.1"],
        &["scan", "--n", "300", "--k", "4", "--r", "2", "--p", "0.01", "--p", "0.1", "--trials", "6", "--format", "json"],
        &["oracle", "--n", "40", "--k", "2", "--trials", "500"],
        &["witness", "--n", "80", "--k", "4", "--r", "2", "--p", "0.3", "--trials", "3"],
    ];
    for args in runs {
        let a = ualab(args);
        let b = ualab(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["stats", "--n", "2000", "--trials", "16", "--seed", "5"];
    let one = Command::new(env!("CARGO_BIN_EXE_ualab")).args(args).env("UALAB_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_ualab")).args(args).env("UALAB_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn config_file_with_overrides() {
    let cfg = scratch("scan.cfg");
    std::fs::write(&cfg, "# threshold separation\nn = 500\nk = 5\nr = 2\np = 0.001\np = 0.2\ntrials = 10\nseed = 3\n").unwrap();
    let out = scratch("scan.csv");
    let o = ualab(&["scan", "--config", cfg.to_str().unwrap(), "--trials", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("n,p,full_prob,ci_lo,ci_hi,mean_final_fraction\n"));
    assert_eq!(csv.lines().count(), 3);
    let meta = std::fs::read_to_string(format!("{}.meta.json", out.display())).unwrap();
    assert!(meta.contains("\"trials\": 4"));
    assert!(meta.contains("xoshiro256++"));
    assert!(meta.contains("\"version\""));
}

#[test]
fn exit_codes() {
    assert_eq!(ualab(&["scan", "--n", "100", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(ualab(&["stats", "--n", "10", "--format", "xml"]).status.code(), Some(2));
    let bad = scratch("bad.cfg");
    std::fs::write(&bad, "n = 10\nflavour = odd\n").unwrap();
    let o = ualab(&["stats", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("flavour"));
    let o = ualab(&["expansion", "--n", "2", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
    let o = Command::new(env!("CARGO_BIN_EXE_ualab")).args(["rho"]).env("UALAB_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn witness_dump_and_verify() {
    let run = ["--n", "300", "--k", "4", "--r", "2", "--p", "0.15", "--seed", "3"];
    let table = ualab(&[&["percolate"], &run[..]].concat());
    let last_round = String::from_utf8_lossy(&table.stdout).lines().count() - 2;
    assert!(last_round >= 1);
    let w = scratch("w.json");
    let mut args = vec!["percolate", "--root", "300", "--witness-out", w.to_str().unwrap()];
    args.extend_from_slice(&run);
    let o = ualab(&args);
    if !o.status.success() {
        // Vertex 300 was initially infected or never infected in this run.
        assert_eq!(o.status.code(), Some(3));
        return;
    }
    let mut verify = vec!["witness", "verify", w.to_str().unwrap()];
    verify.extend_from_slice(&run);
    let v = ualab(&verify);
    assert_eq!(String::from_utf8_lossy(&v.stdout).trim(), r#"{"valid":true,"clause":null,"detail":null}"#);

    let mut other = verify.clone();
    *other.last_mut().unwrap() = "4";
    let v = ualab(&other);
    assert!(v.status.success());
    assert!(String::from_utf8_lossy(&v.stdout).contains("\"valid\":false"));
}
