use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use siirv::dist::{binomial_model, cosine_pbds, exact_pmf, tv_distance, KSiirv};
use siirv::hypothesis::Hypothesis;
use siirv::io;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_siirv"));
    c.env_remove("SIIRV_CALIBRATION");
    c
}

fn run(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn siirv");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("siirv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_fixture_models() {
    let a = tmp("cos_a.json");
    let b = tmp("cos_b.json");
    run(&["gen", "--family", "cosine", "--k", "2", "--out", s(&a)]);
    run(&[
        "gen",
        "--family",
        "cosine",
        "--k",
        "2",
        "--member",
        "b",
        "--out",
        s(&b),
    ]);
    let (x, y) = cosine_pbds(2).unwrap();
    assert_eq!(io::read_model(&a).unwrap(), x);
    assert_eq!(io::read_model(&b).unwrap(), y);

    let out = run(&["gen", "--family", "binomial", "--n", "7", "--p", "0.5"]);
    let m: KSiirv = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m, binomial_model(7, 0.5).unwrap());

    let r1 = run(&[
        "gen", "--family", "random", "--k", "4", "--n", "5", "--seed", "9",
    ])
    .stdout;
    let r2 = run(&[
        "gen", "--family", "random", "--k", "4", "--n", "5", "--seed", "9",
    ])
    .stdout;
    let r3 = run(&[
        "gen", "--family", "random", "--k", "4", "--n", "5", "--seed", "10",
    ])
    .stdout;
    assert_eq!(r1, r2);
    assert_ne!(r1, r3);
}

#[test]
fn learn_reports_the_true_distance() {
    let model = tmp("bin40.json");
    run(&[
        "gen",
        "--family",
        "binomial",
        "--n",
        "40",
        "--out",
        s(&model),
    ]);
    for algo in ["fourier", "empirical", "optimal2", "sparseft"] {
        let h = tmp(&format!("h_{algo}.json"));
        let rep = tmp(&format!("r_{algo}.json"));
        run(&[
            "learn",
            "--model",
            s(&model),
            "--algo",
            algo,
            "--eps",
            "0.2",
            "--seed",
            "4",
            "--out",
            s(&h),
            "--report",
            s(&rep),
        ]);
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
        let branch = report["branch"].as_str().unwrap();
        assert!([
            "empirical",
            "fourier",
            "mollified",
            "gaussian",
            "tournament"
        ]
        .contains(&branch));
        let hyp = io::read_hypothesis(&h).unwrap();
        let tv = tv_distance(&exact_pmf(&binomial_model(40, 0.5).unwrap()), &hyp.to_pmf());
        assert!(
            (report["tv"].as_f64().unwrap() - tv).abs() <= 1e-9,
            "{algo}"
        );
        assert_eq!(report["algorithm"], algo);
        assert_eq!(report["seed"], 4);
    }
}

#[test]
fn learning_is_reproducible() {
    let model = tmp("rep.json");
    run(&[
        "gen",
        "--family",
        "random",
        "--k",
        "3",
        "--n",
        "30",
        "--seed",
        "2",
        "--out",
        s(&model),
    ]);
    let a = run(&["learn", "--model", s(&model), "--seed", "8"]).stdout;
    let b = run(&["learn", "--model", s(&model), "--seed", "8"]).stdout;
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn learn_from_a_sample_file_omits_tv() {
    let samples = tmp("samples.txt");
    std::fs::write(&samples, "3\n4\n4\n5\n").unwrap();
    let rep = tmp("samples_report.json");
    let out = run(&[
        "learn",
        "--samples",
        s(&samples),
        "--algo",
        "empirical",
        "--k",
        "2",
        "--report",
        s(&rep),
    ]);
    let h: Hypothesis = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(h.evaluate(4), 0.5);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(report.get("tv").is_none());
    assert_eq!(report["n_samples"], 4);
}

#[test]
fn sweep_rows_are_sorted_and_counted() {
    let model = tmp("sweep.json");
    run(&[
        "gen",
        "--family",
        "binomial",
        "--n",
        "30",
        "--out",
        s(&model),
    ]);
    let out = run(&[
        "sweep",
        "--model",
        s(&model),
        "--eps",
        "0.3,0.2",
        "--trials",
        "3",
        "--seed",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algo,eps,n_samples,trial,tv,seconds");
    assert_eq!(lines.len(), 1 + 2 * 3);
    let keys: Vec<(String, String)> = lines[1..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].to_owned(), f[3].to_owned())
        })
        .collect();
    let expect: Vec<(String, String)> = ["0.3", "0.2"]
        .iter()
        .flat_map(|e| (0..3).map(move |t| (e.to_string(), t.to_string())))
        .collect();
    assert_eq!(keys, expect);

    // everything but the timing column is determined by the seed
    let again = run(&[
        "sweep",
        "--model",
        s(&model),
        "--eps",
        "0.3,0.2",
        "--trials",
        "3",
        "--seed",
        "1",
    ]);
    let strip = |t: &str| {
        t.lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_owned())
            .collect::<Vec<_>>()
    };
    assert_eq!(
        strip(&text),
        strip(&String::from_utf8(again.stdout).unwrap())
    );

    let empty = run(&[
        "sweep",
        "--model",
        s(&model),
        "--eps",
        "0.3",
        "--trials",
        "0",
    ]);
    assert_eq!(
        String::from_utf8(empty.stdout).unwrap(),
        "algo,eps,n_samples,trial,tv,seconds\n"
    );
}

#[test]
fn sample_and_eval_wrap_the_hypothesis() {
    let h = tmp("pmf.json");
    std::fs::write(&h, r#"{"lo": 2, "values": [0.25, 0.5, 0.25]}"#).unwrap();
    let out = run(&[
        "sample",
        "--hypothesis",
        s(&h),
        "--count",
        "500",
        "--seed",
        "3",
    ]);
    let draws = io::parse_samples(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(draws.len(), 500);
    assert!(draws.iter().all(|x| (2..=4).contains(x)));

    let out = run(&["eval", "--hypothesis", s(&h), "--at", "3,100,-5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "x,pmf,cdf\n3,0.5,0.75\n100,0,1\n-5,0,0\n");
}

#[test]
fn cover_matches_the_library() {
    let out = run(&[
        "cover",
        "--n",
        "2",
        "--k",
        "2",
        "--eps",
        "0.2",
        "--N",
        "4",
        "--verify",
        "--report",
        s(&tmp("cover_report.json")),
    ]);
    let models: Vec<KSiirv> = serde_json::from_slice(&out.stdout).unwrap();
    let cfg = siirv::cover::CoverConfig::desk(2, 2, 0.2, 4);
    let lib = siirv::cover::cover_siirv(&cfg).unwrap();
    assert_eq!(models, lib.models);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("cover_report.json")).unwrap()).unwrap();
    assert!(report["verification"]["max_min_tv"].as_f64().unwrap() <= 0.2);
}

#[test]
fn exit_codes() {
    let out = bin()
        .args([
            "cover", "--n", "30", "--k", "4", "--eps", "0.1", "--N", "50",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bin()
        .args(["learn", "--samples", "/nonexistent/file", "--k", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["learn", "--model", "x.json", "--eps", "1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // too few recorded samples for the requested learner
    let samples = tmp("short.txt");
    std::fs::write(&samples, "1\n2\n").unwrap();
    let out = bin()
        .args([
            "learn",
            "--samples",
            s(&samples),
            "--k",
            "2",
            "--algo",
            "fourier",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn calibration_file_is_honoured() {
    let cal = tmp("cal.json");
    let c = siirv::calibration::Calibration {
        learn_sample_mult: 0.5,
        ..Default::default()
    };
    std::fs::write(&cal, serde_json::to_string(&c).unwrap()).unwrap();
    let model = tmp("cal_model.json");
    run(&[
        "gen",
        "--family",
        "binomial",
        "--n",
        "20",
        "--out",
        s(&model),
    ]);
    let rep_default = tmp("cal_default.json");
    let rep_custom = tmp("cal_custom.json");
    run(&["learn", "--model", s(&model), "--report", s(&rep_default)]);
    let out = bin()
        .env("SIIRV_CALIBRATION", &cal)
        .args(["learn", "--model", s(&model), "--report", s(&rep_custom)])
        .output()
        .unwrap();
    assert!(out.status.success());
    let n = |p: &Path| -> u64 {
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["n_samples"].as_u64().unwrap()
    };
    assert!(n(&rep_custom) < n(&rep_default));
    let bad = bin()
        .env("SIIRV_CALIBRATION", "/nonexistent/cal.json")
        .args(["learn", "--model", s(&model)])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
