use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_evap");

fn evap(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn ten_thousand_steps_give_10001_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n5.csv");
    let o = evap(&[
        "--n",
        "5",
        "--steps",
        "10000",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "slice,time,entropy,p0,mean_occupation,decoupling_distance"
    );
    assert_eq!(lines.count(), 10_001);
}

#[test]
fn empty_black_hole_has_zero_entropy() {
    let o = evap(&["--n", "0", "--steps", "10"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 11);
    for row in rows {
        assert_eq!(row.split(',').nth(2).unwrap(), "0.0");
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# reference run\nn = 4\nsteps = 2000\nformat = json\n",
    )
    .unwrap();
    let outs: Vec<_> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("{i}.json"));
            let o = evap(&[
                "--config",
                cfg.to_str().unwrap(),
                "--output",
                out.to_str().unwrap(),
            ]);
            assert!(o.status.success());
            std::fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let v: serde_json::Value = serde_json::from_slice(&outs[0]).unwrap();
    assert_eq!(v["config"]["n"], 4);
    assert_eq!(v["records"].as_array().unwrap().len(), 2001);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "n = 4\nsteps = 50\n").unwrap();
    let o = evap(&["--config", cfg.to_str().unwrap(), "--n", "2"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    // slice 0 has mean occupation n
    let first = text.lines().nth(1).unwrap();
    assert_eq!(first.split(',').nth(4).unwrap(), "2.0");
    assert_eq!(text.lines().count(), 52);
}

#[test]
fn resume_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let rest = dir.path().join("rest.csv");
    let common = ["--n", "6", "--dt", "1/15"];

    let o = evap(
        &[
            &common[..],
            &["--steps", "3000", "--output", full.to_str().unwrap()],
        ]
        .concat(),
    );
    assert!(o.status.success());
    let o = evap(
        &[
            &common[..],
            &["--steps", "1200", "--checkpoint-every", "400"],
            &["--output", part.to_str().unwrap()],
        ]
        .concat(),
    );
    assert!(o.status.success());
    let ckpt = dir.path().join("part.csv.ckpt");
    assert!(read(&ckpt).contains("slice = 1200"));
    let o = evap(
        &[
            &common[..],
            &["--steps", "3000", "--resume", ckpt.to_str().unwrap()],
            &["--output", rest.to_str().unwrap()],
        ]
        .concat(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let full = read(&full);
    let rest = read(&rest);
    let full_rows: Vec<_> = full.lines().skip(1 + 1200).collect();
    let rest_rows: Vec<_> = rest.lines().skip(1).collect();
    assert_eq!(rest_rows.len(), 1801);
    assert_eq!(full_rows, rest_rows);
}

#[test]
fn resume_rejects_other_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let o = evap(&[
        "--n",
        "3",
        "--steps",
        "20",
        "--checkpoint-every",
        "10",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let ckpt = dir.path().join("a.csv.ckpt");
    let o = evap(&[
        "--n",
        "4",
        "--steps",
        "40",
        "--resume",
        ckpt.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes_are_distinct() {
    let config = evap(&["--n", "-3"]).status.code();
    let config2 = evap(&["--mode", "sideways"]).status.code();
    let tolerance = evap(&[
        "--mode",
        "oracle-compare",
        "--n",
        "2",
        "--steps",
        "5",
        "--tol",
        "oracle_agreement=1e-30",
    ])
    .status
    .code();
    let budget = evap(&["--mode", "oracle-compare", "--n", "3", "--steps", "400"])
        .status
        .code();
    assert_eq!(config, Some(2));
    assert_eq!(config2, Some(2));
    assert_eq!(tolerance, Some(3));
    assert_eq!(budget, Some(4));
    assert_eq!(evap(&["--n", "1", "--steps", "1"]).status.code(), Some(0));
}

#[test]
fn oracle_compare_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    for (n, steps, tol) in [("1", "5", 1e-12), ("3", "10", 1e-10), ("0", "4", 0.0)] {
        let out = dir.path().join(format!("cmp{n}.json"));
        let o = evap(&[
            "--mode",
            "oracle-compare",
            "--n",
            n,
            "--steps",
            steps,
            "--format",
            "json",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
        let s = &v["summary"];
        assert!(
            s["max_diagonal_deviation"].as_f64().unwrap() <= tol,
            "n={n}"
        );
        assert_eq!(s["max_off_diagonal"].as_f64().unwrap(), 0.0);
        let overlaps = s["overlaps"].as_array().unwrap();
        let k: usize = n.parse().unwrap();
        assert_eq!(overlaps.len(), (k + 1) * (k + 2) / 2);
    }
}

#[test]
fn auxiliary_modes() {
    let o = evap(&["--mode", "slice-dump", "--n", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "from,to,amplitude,probability"
    );
    assert_eq!(text.lines().count(), 1 + 1 + 2 + 3 + 4);

    let o = evap(&[
        "--mode",
        "semiclassical",
        "--squeezing",
        "0.7",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = v["summary"]["temperature"].as_f64().unwrap();
    assert!(((0.7f64).tanh().powi(2) - (-1.0 / t).exp()).abs() < 1e-12);

    let o = evap(&[
        "--mode",
        "semiclassical",
        "--squeezing",
        "1.5",
        "--reading",
        "inverse",
    ]);
    assert!(o.status.success());
}

#[test]
fn plot_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let o = evap(&[
        "--n",
        "3",
        "--steps",
        "500",
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = read(&svg);
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    for label in [
        "entanglement entropy",
        "vacuum probability p0",
        "decoupling distance",
    ] {
        assert!(text.contains(label));
    }
}
