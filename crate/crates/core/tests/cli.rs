use std::fs;
use std::path::Path;
use std::process::Command;

use hybrid_secrecy::cli::{self, emit_config, parse_config, plan, RunArgs, RunKind};
use hybrid_secrecy::digital_precoding::PrecodingFilter;
use hybrid_secrecy::montecarlo::{Band, ScenarioConfig, Sweep};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hybrid-secrecy"))
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

#[test]
fn mmwave_file_resolves_to_band_defaults() {
    let cfg = parse_config("band=mmwave\n").unwrap();
    assert_eq!(cfg.channel.n_clusters, 4);
    assert_eq!(cfg.channel.n_rays, 15);
    assert_eq!(cfg.trials, 1000);
    assert_eq!(cfg, ScenarioConfig::for_band(Band::MmWave));
}

#[test]
fn snr_flag_gives_eleven_points() {
    let args = RunArgs {
        snr: Some("0:10:1".into()),
        ..Default::default()
    };
    let p = plan(RunKind::SweepSnr, &args).unwrap();
    assert_eq!(p.config.sweep.points().len(), 11);
    assert_eq!(p.filters, PrecodingFilter::ALL.to_vec());
}

#[test]
fn flags_override_file_override_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.cfg");
    fs::write(&path, "band=sub6\nusers=3\ntrials=40\nseed=9\n").unwrap();
    let args = RunArgs {
        config: Some(path),
        trials: Some("12".into()),
        filter: Some("zf".into()),
        ..Default::default()
    };
    let p = plan(RunKind::Single, &args).unwrap();
    assert_eq!(p.config.n_t, 16);
    assert_eq!(p.config.users, 3);
    assert_eq!(p.config.trials, 12);
    assert_eq!(p.config.master_seed, 9);
    assert_eq!(p.filters, vec![PrecodingFilter::Zf]);
}

#[test]
fn negative_trials_is_a_validation_error() {
    let args = RunArgs {
        trials: Some("-5".into()),
        ..Default::default()
    };
    let err = plan(RunKind::Single, &args).unwrap_err();
    assert_eq!(cli::exit_code(&err), 1);
    assert!(err.to_string().starts_with("trials"), "{err}");

    let out = bin().args(["single", "--trials", "-5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn unknown_key_names_the_key() {
    let err = parse_config("channel.nclusters=3").unwrap_err().to_string();
    assert!(err.contains("channel.nclusters"), "{err}");
}

#[test]
fn resolved_config_round_trips() {
    let args = RunArgs {
        band: Some("sub6".into()),
        snr: Some("-3:7:0.5".into()),
        target_secrecy: Some("0.75".into()),
        ..Default::default()
    };
    let p = plan(RunKind::SweepSnr, &args).unwrap();
    assert_eq!(
        p.config.sweep,
        Sweep::Snr {
            start: -3.0,
            stop: 7.0,
            step: 0.5
        }
    );
    assert_eq!(parse_config(&emit_config(&p.config)).unwrap(), p.config);
}

#[test]
fn single_point_csv_has_two_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["single", "--band", "sub6", "--trials", "4", "--filter", "mmse", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("mmse.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "axis,mean_secrecy_bps_hz,mean_ee_bits_hz_mw,trials,failures");
    assert!(lines[1].ends_with(",4,0"), "{}", lines[1]);
    assert!(dir.path().join(cli::MANIFEST_FILE).exists());
    assert!(dir.path().join(cli::PLOT_FILE).exists());
}

#[test]
fn snr_sweep_writes_one_csv_per_filter_plus_benchmark() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["sweep-snr", "--band", "sub6", "--snr", "-2:2:2", "--trials", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_files(dir.path()), ["mmse.csv", "mrt.csv", "su.csv", "zf.csv"]);
    let plot = fs::read_to_string(dir.path().join(cli::PLOT_FILE)).unwrap();
    for f in ["zf.csv", "mmse.csv", "mrt.csv", "su.csv"] {
        assert!(plot.contains(f));
    }

    let single = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["sweep-users", "--band", "sub6", "--users", "1:2", "--trials", "2", "--filter", "mrt", "--out"])
        .arg(single.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(csv_files(single.path()), ["mrt.csv"]);
    let csv = fs::read_to_string(single.path().join("mrt.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn power_adapt_csv_has_cycle_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "power-adapt",
            "--band",
            "sub6",
            "--trials",
            "2",
            "--set",
            "users=2",
            "--target-secrecy",
            "0.2",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("mmse.csv")).unwrap();
    assert!(csv.starts_with("axis,mean_secrecy_bps_hz,mean_ee_bits_hz_mw,trials,failures,cycles,final_pb_db\n"));
    assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 7);
}

#[test]
fn replay_reproduces_csv_bytes() {
    let first = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["sweep-users", "--band", "sub6", "--users", "1:3", "--trials", "3", "--seed", "17", "--out"])
        .arg(first.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let second = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("replay")
        .arg(first.path().join(cli::MANIFEST_FILE))
        .arg("--out")
        .arg(second.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names = csv_files(first.path());
    assert_eq!(names, csv_files(second.path()));
    for n in names {
        assert_eq!(
            fs::read(first.path().join(&n)).unwrap(),
            fs::read(second.path().join(&n)).unwrap(),
            "{n}"
        );
    }
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = bin()
        .args(["single", "--trials", "1", "--out"])
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
