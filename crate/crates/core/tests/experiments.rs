mod common;

use std::fs;
use std::path::Path;

use modnmf_core::experiments::{
    run_experiment, Algorithm, ExperimentConfig, ExperimentOutput, Family, CSV_HEADER,
};
use modnmf_core::generators::sample_gn;
use modnmf_core::objectives::modularity_q;
use modnmf_core::rng::derive_seed;

fn run(text: &str) -> ExperimentOutput {
    run_experiment(&ExperimentConfig::parse(text).unwrap())
}

fn write_two_triangles(dir: &Path) -> std::path::PathBuf {
    fs::write(dir.join("net.dat"), "1 2\n2 3\n1 3\n4 5\n5 6\n4 6\n").unwrap();
    fs::write(dir.join("com.dat"), "1 1\n2 1\n3 1\n4 2\n5 2\n6 2\n").unwrap();
    let cfg = dir.join("toy.cfg");
    fs::write(
        &cfg,
        "family = d-frobenius\nnetwork = lfr-files\nlfr_files = net.dat|com.dat\nsigma = 2, 1\n",
    )
    .unwrap();
    cfg
}

#[test]
fn two_triangle_toy_network() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_file(write_two_triangles(dir.path())).unwrap();
    let out = run_experiment(&cfg);
    assert_eq!(out.records.len(), 2);
    let good = &out.records[0];
    assert_eq!(good.param, "2");
    assert_eq!(good.d, Some(4.0));
    assert!((good.frobenius.unwrap() - 34.0).abs() < 1e-12);
    assert!(good.residual.unwrap().abs() < 1e-12);
    // sigma = 1 is below the maximum degree 2
    let bad = &out.records[1];
    assert!(bad.status.as_deref().unwrap().contains("sigma"));
    assert!(out.failures() >= 1);
    assert!(out
        .records_csv()
        .lines()
        .nth(2)
        .unwrap()
        .contains("error: "));
}

#[test]
fn q_frobenius_sweep() {
    let out = run(
        "family = q-frobenius\nnetwork = sbm\nsizes = 40, 60\ntheta_out = 0.05\n\
                   theta_in = 0.6, 0.45, 0.3\nseed = 2\n",
    );
    assert_eq!(out.records.len(), 3);
    assert_eq!(out.failures(), 0);
    let qs: Vec<f64> = out.records.iter().map(|r| r.q.unwrap()).collect();
    let fs: Vec<f64> = out.records.iter().map(|r| r.frobenius.unwrap()).collect();
    let r = out.summary_value("pearson_q_frobenius", "").unwrap();
    assert!((r - common::pearson(&qs, &fs)).abs() < 1e-12);
    for (i, rec) in out.records.iter().enumerate() {
        assert_eq!(rec.seed, derive_seed(derive_seed(2, i as u64), 0));
        assert_eq!(rec.sweep, [0.6, 0.45, 0.3][i]);
    }
}

#[test]
fn single_network_sweep_keeps_records() {
    let out = run("family = q-frobenius\nnetwork = gn\nz_out = 3\n");
    assert_eq!(out.records.len(), 1);
    assert!(out.records[0].is_ok());
    assert!(out.summary[0]
        .value
        .as_ref()
        .unwrap_err()
        .contains("variance"));
    assert_eq!(out.failures(), 1);
}

#[test]
fn kl_records_match_direct_evaluation() {
    let out = run("family = q-rb-kl\nnetwork = gn\nz_out = 2, 6\ngamma = 0.5, 2\nseed = 8\n");
    assert_eq!(out.records.len(), 4);
    let params: Vec<&str> = out.records.iter().map(|r| r.param.as_str()).collect();
    assert_eq!(params, ["gamma=0.5", "gamma=2", "gamma=0.5", "gamma=2"]);
    let (g, p) = sample_gn(2.0, out.records[0].seed).unwrap();
    let q = common::generalized_q(&g, &p, 0.5, 0.0);
    assert!((out.records[0].q.unwrap() - q).abs() < 1e-12);
}

#[test]
fn afg_with_zero_shift_reproduces_base() {
    let base = run("family = q-kl\nnetwork = gn\nz_out = 1, 4, 9\nseed = 6\n");
    let afg = run("family = q-afg-kl\nnetwork = gn\nz_out = 1, 4, 9\nr = 0\nseed = 6\n");
    let strip = |out: &ExperimentOutput| -> Vec<String> {
        out.records_csv()
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                format!("{},{}", f[2..4].join(","), f[5..].join(","))
            })
            .collect()
    };
    assert_eq!(strip(&base), strip(&afg));
}

#[test]
fn benchmark_marks_failed_cells() {
    let dir = tempfile::tempdir().unwrap();
    // node 7 has no edges, which W* cannot handle
    fs::write(
        dir.path().join("net.dat"),
        "1 2\n2 3\n1 3\n4 5\n5 6\n4 6\n3 4\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("com.dat"),
        "1 1\n2 1\n3 1\n4 2\n5 2\n6 2\n7 2\n",
    )
    .unwrap();
    let cfg_path = dir.path().join("b.cfg");
    fs::write(
        &cfg_path,
        "family = benchmark\nnetwork = lfr-files\nlfr_files = net.dat|com.dat\n\
         algorithms = q-nmf, fast-greedy\nruns = 2\niters = 50\n",
    )
    .unwrap();
    let out = run_experiment(&ExperimentConfig::from_file(&cfg_path).unwrap());
    let rec = &out.records[0];
    assert_eq!(rec.nmi(Algorithm::QNmf), None);
    assert!(rec.nmi(Algorithm::FastGreedy).is_some());
    assert!(rec.status.as_deref().unwrap().starts_with("q-nmf"));
    assert!(out.summary[0].value.is_err());
    assert!(out.summary[1].value.is_ok());
}

#[test]
fn benchmark_on_gn() {
    let out = run(
        "family = benchmark\nnetwork = gn\nz_out = 1, 2\nrepeats = 2\nruns = 2\n\
                   iters = 200\nseed = 1\n",
    );
    assert_eq!(out.records.len(), 4);
    assert_eq!(out.failures(), 0);
    for rec in &out.records {
        for a in Algorithm::ALL {
            assert!(rec.nmi(a).unwrap() > 0.9);
        }
    }
    let mean = out
        .summary_value("mean_nmi_q-nmf", "sweep=1.0000000000000000e0")
        .unwrap();
    let by_hand = (out.records[0].nmi(Algorithm::QNmf).unwrap()
        + out.records[1].nmi(Algorithm::QNmf).unwrap())
        / 2.0;
    assert_eq!(mean, by_hand);
}

#[test]
fn audit_accepts_every_family() {
    for text in [
        "family = q-frobenius\nnetwork = sbm\nsizes = 20, 30\ntheta_out = 0.1\ntheta_in = 0.5, 0.3\n",
        "family = d-frobenius\nnetwork = gn\nz_out = 2, 5\n",
        "family = q-afg-kl\nnetwork = gn\nz_out = 2, 5\nr = 1, 2\n",
        "family = benchmark\nnetwork = gn\nz_out = 2\nruns = 1\niters = 50\nalgorithms = fast-greedy\n",
    ] {
        let out = run(&format!("{text}audit = true\n"));
        assert!(out.records.iter().all(|r| r.is_ok()), "{text}");
        for rec in &out.records {
            if let (Some(q), Family::QFrobenius) = (rec.q, rec.family) {
                let (g, p) = modnmf_core::generators::sample_sbm(
                    &modnmf_core::generators::SbmParams::planted(vec![20, 30], rec.sweep, 0.1).unwrap(),
                    rec.seed,
                );
                assert_eq!(q, modularity_q(&g, &p).unwrap());
            }
        }
    }
}

#[test]
fn common_seed_reuses_networks() {
    let out =
        run("family = q-frobenius\nnetwork = gn\nz_out = 2, 3, 4\ncommon_seed = true\nseed = 5\n");
    assert!(out.records.iter().all(|r| r.seed == out.records[0].seed));
    let plain = run("family = q-frobenius\nnetwork = gn\nz_out = 2, 3, 4\nseed = 5\n");
    assert_eq!(plain.records[0].seed, out.records[0].seed);
    assert_ne!(plain.records[1].seed, out.records[1].seed);
}

#[test]
fn outputs_are_written_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let text = "family = q-kl\nnetwork = gn\nz_out = 1, 2, 3\nseed = 4\n";
    let a = run(text);
    let written = a.write(&dir.path().join("a/out.csv"), true).unwrap();
    assert_eq!(written.len(), 3);
    let csv = fs::read_to_string(&written[0]).unwrap();
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(csv, run(text).records_csv());
    let summary = fs::read_to_string(&written[1]).unwrap();
    assert!(summary.starts_with("metric,key,value\npearson_q_kl,base,"));
    let dat = fs::read_to_string(&written[2]).unwrap();
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 3);
}
