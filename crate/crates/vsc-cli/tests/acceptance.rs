//! Acceptance suite: nine system-level checks covering benchmark
//! reproduction bands, locality, the confidence ablation, sweep
//! stability, the statistics and algebra oracles, geometric properties
//! of the pair features, and bitwise determinism.
//!
//! Each check prints one `criterion N: PASS - ...` line on success (run
//! with `cargo test --test acceptance -- --nocapture` to see them).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vsc::eval::{paired_t_test, two_tailed_p};
use vsc::linalg::{ridge_solve, Matrix, Vector};
use vsc::model::{feature_row, Hyperplane, Pair};

const SEED: &str = "7";

fn vsc_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vsc"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = vsc_bin().args(args).output().expect("spawning vsc");
    assert!(
        out.status.success(),
        "vsc {args:?} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// The five record-producing runs behind criteria 1-5, shared with the
/// determinism criterion, which replays them under different job counts.
fn record_commands(dir: &Path) -> Vec<(&'static str, Vec<String>)> {
    let data = |name: &str| dir.join(name).to_str().unwrap().to_string();
    let own = |args: &[&str]| args.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        (
            "cv_twonorm.jsonl",
            own(&[
                "cv", "--data", &data("twonorm.csv"), "--model", "vsc", "--k", "100",
                "--lambda", "1", "--folds", "10", "--seed", SEED,
            ]),
        ),
        (
            "cv_ringnorm.jsonl",
            own(&[
                "cv", "--data", &data("ringnorm.csv"), "--model", "vsc", "--k", "100",
                "--lambda", "1", "--folds", "10", "--seed", SEED,
            ]),
        ),
        (
            "cv_xor.jsonl",
            own(&[
                "cv", "--data", &data("xor.csv"), "--model", "vsc", "--k", "100",
                "--lambda", "1", "--folds", "10", "--seed", SEED,
            ]),
        ),
        (
            "cv_ringnorm_noconf.jsonl",
            own(&[
                "cv", "--data", &data("ringnorm.csv"), "--model", "vsc-noconf",
                "--k", "100", "--lambda", "1", "--folds", "10", "--seed", SEED,
            ]),
        ),
        (
            "sweep_twonorm.jsonl",
            own(&[
                "sweep", "--data", &data("twonorm.csv"), "--model", "vsc",
                "--folds", "10", "--seed", SEED,
            ]),
        ),
    ]
}

struct Harness {
    dir: tempfile::TempDir,
    /// Wall time of the twonorm cross-validation run.
    cv_twonorm_secs: f64,
}

impl Harness {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn record(&self, name: &str) -> serde_json::Value {
        let text = std::fs::read_to_string(self.path(name)).unwrap();
        serde_json::from_str(text.lines().next().expect("record file is empty")).unwrap()
    }

    fn records(&self, name: &str) -> Vec<serde_json::Value> {
        std::fs::read_to_string(self.path(name))
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect()
    }

    fn mean_f1(&self, name: &str) -> f64 {
        self.record(name)["mean_f1"].as_f64().unwrap()
    }

    fn fold_f1(&self, name: &str) -> Vec<f64> {
        self.record(name)["fold_f1"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect()
    }
}

fn harness() -> &'static Harness {
    static HARNESS: OnceLock<Harness> = OnceLock::new();
    HARNESS.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path();
        let out = |name: &str| d.join(name).to_str().unwrap().to_string();
        run_ok(&[
            "gen", "twonorm", "--n", "2000", "--dim", "20", "--seed", SEED,
            "--out", &out("twonorm.csv"),
        ]);
        run_ok(&[
            "gen", "ringnorm", "--n", "2000", "--dim", "20", "--seed", SEED,
            "--out", &out("ringnorm.csv"),
        ]);
        run_ok(&[
            "gen", "xor_blobs", "--n", "1000", "--noise", "0.2", "--seed", SEED,
            "--out", &out("xor.csv"),
        ]);

        let mut cv_twonorm_secs = 0.0;
        for (name, args) in record_commands(d) {
            let mut args: Vec<String> = args;
            args.extend(["--out".to_string(), out(name)]);
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let start = Instant::now();
            run_ok(&refs);
            if name == "cv_twonorm.jsonl" {
                cv_twonorm_secs = start.elapsed().as_secs_f64();
            }
        }
        Harness {
            dir,
            cv_twonorm_secs,
        }
    })
}

fn pass(n: u32, detail: &str) {
    println!("criterion {n}: PASS - {detail}");
}

#[test]
fn criterion_1_twonorm_reproduction_band() {
    let h = harness();
    let mean = h.mean_f1("cv_twonorm.jsonl");
    assert!(
        (0.94..=1.0).contains(&mean),
        "twonorm mean F1 {mean} outside [0.94, 1.0]"
    );
    assert!(
        h.cv_twonorm_secs < 60.0,
        "twonorm cross-validation took {:.1}s",
        h.cv_twonorm_secs
    );
    pass(
        1,
        &format!(
            "twonorm mean F1 {mean:.4} in [0.94, 1.00], cv wall time {:.2}s",
            h.cv_twonorm_secs
        ),
    );
}

#[test]
fn criterion_2_ringnorm_reproduction_band() {
    let mean = harness().mean_f1("cv_ringnorm.jsonl");
    assert!(mean >= 0.90, "ringnorm mean F1 {mean} below 0.90");
    pass(2, &format!("ringnorm mean F1 {mean:.4} >= 0.90"));
}

/// Best accuracy over every classifier of the form "threshold one linear
/// projection", sweeping the two axes and both diagonals, every midpoint
/// threshold, and both orientations.
fn best_single_threshold_accuracy(points: &[(f64, f64)], labels: &[f64]) -> f64 {
    let n = labels.len();
    let mut best = 0.0f64;
    for (dx, dy) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] {
        let mut projected: Vec<(f64, f64)> = points
            .iter()
            .zip(labels)
            .map(|(&(x, y), &l)| (dx * x + dy * y, l))
            .collect();
        projected.sort_by(|a, b| a.0.total_cmp(&b.0));
        // prefix_pos[i] = positives among the i smallest projections.
        let mut prefix_pos = vec![0usize; n + 1];
        for (i, &(_, l)) in projected.iter().enumerate() {
            prefix_pos[i + 1] = prefix_pos[i] + usize::from(l > 0.0);
        }
        let total_pos = prefix_pos[n];
        for (below, &below_pos) in prefix_pos.iter().enumerate() {
            let below_neg = below - below_pos;
            let above_pos = total_pos - below_pos;
            let above_neg = n - below - above_pos;
            // Orientation 1: predict +1 below the threshold.
            let acc_pos_below = (below_pos + above_neg) as f64 / n as f64;
            // Orientation 2: predict -1 below the threshold.
            let acc_neg_below = (below_neg + above_pos) as f64 / n as f64;
            best = best.max(acc_pos_below).max(acc_neg_below);
        }
    }
    best
}

#[test]
fn criterion_3_locality_beats_any_single_threshold() {
    let h = harness();
    let mean = h.mean_f1("cv_xor.jsonl");
    assert!(mean >= 0.90, "xor mean F1 {mean} below 0.90");

    let text = std::fs::read_to_string(h.path("xor.csv")).unwrap();
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        points.push((
            fields[0].parse::<f64>().unwrap(),
            fields[1].parse::<f64>().unwrap(),
        ));
        labels.push(fields[2].parse::<f64>().unwrap());
    }
    let oracle = best_single_threshold_accuracy(&points, &labels);
    assert!(
        oracle <= 0.75,
        "single-threshold oracle reached accuracy {oracle}"
    );
    pass(
        3,
        &format!("xor mean F1 {mean:.4} >= 0.90 while threshold oracle accuracy {oracle:.4} <= 0.75"),
    );
}

#[test]
fn criterion_4_confidence_ablation_direction_and_test() {
    let h = harness();
    let with = h.mean_f1("cv_ringnorm.jsonl");
    let without = h.mean_f1("cv_ringnorm_noconf.jsonl");
    assert!(
        with >= without - 0.01,
        "confidence hurt ringnorm: {with} vs {without}"
    );

    // The compare command's t statistic and p-value for the pair must
    // agree with a direct recomputation from the saved fold scores.
    let out = run_ok(&[
        "compare",
        h.path("cv_ringnorm.jsonl").to_str().unwrap(),
        h.path("cv_ringnorm_noconf.jsonl").to_str().unwrap(),
        "--format",
        "json-lines",
    ]);
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    let cell = &v["entries"][1]["vs_reference"];
    let reported_t = cell["t_stat"].as_f64().unwrap();
    let reported_p = cell["p_value"].as_f64().unwrap();

    let expected = paired_t_test(
        &h.fold_f1("cv_ringnorm_noconf.jsonl"),
        &h.fold_f1("cv_ringnorm.jsonl"),
    )
    .unwrap();
    assert!(
        (reported_t - expected.t_stat).abs() <= 1e-10,
        "t mismatch: {reported_t} vs {}",
        expected.t_stat
    );
    assert!(
        (reported_p - expected.p_value).abs() <= 1e-10,
        "p mismatch: {reported_p} vs {}",
        expected.p_value
    );
    pass(
        4,
        &format!(
            "ringnorm F1 with confidence {with:.4} >= {without:.4} - 0.01 without; \
             compare t={reported_t:.4}, p={reported_p:.4} match recomputation"
        ),
    );
}

#[test]
fn criterion_5_sweep_stability_band() {
    let h = harness();
    let records = h.records("sweep_twonorm.jsonl");
    assert_eq!(records.len(), 15, "expected the full 5x3 grid");
    let mut checked = 0;
    for r in &records {
        let lambda = r["sweep"]["lambda"].as_f64().unwrap();
        let normalized = r["sweep"]["normalized_mean_f1"].as_f64().unwrap();
        // Only the lambda in {1, 10} points carry the stability bound;
        // heavy shrinkage with many pairs is allowed to drift low.
        if lambda == 1.0 || lambda == 10.0 {
            assert!(
                (0.93..=1.07).contains(&normalized),
                "k={}, lambda={lambda}: normalized {normalized} outside [0.93, 1.07]",
                r["sweep"]["k"]
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 10);
    pass(
        5,
        "all 10 sweep points with lambda in {1, 10} normalized within [0.93, 1.07]",
    );
}

/// Two-tailed p-values for the paired t test, computed independently at
/// 40-digit precision from the regularized incomplete beta function.
const P_TABLE: [(usize, f64, f64); 20] = [
    (4, 0.5, 0.6433299631818633),
    (4, 1.0, 0.37390096630005887),
    (4, 2.0, 0.11611652351681559),
    (4, 3.0, 0.03994196807171883),
    (4, 4.0, 0.016130089900092532),
    (9, 0.5, 0.6290712998260265),
    (9, 1.0, 0.3434363961379135),
    (9, 2.0, 0.07655282377070104),
    (9, 3.0, 0.014956363910414215),
    (9, 4.0, 0.003110428310385855),
    (19, 0.5, 0.6228164912864417),
    (19, 1.0, 0.32987680092112504),
    (19, 2.0, 0.06000203638609836),
    (19, 3.0, 0.007361724183868642),
    (19, 4.0, 0.0007661923372286462),
    (29, 0.5, 0.6208480841937813),
    (29, 1.0, 0.32558198801619354),
    (29, 2.0, 0.05494363718296719),
    (29, 3.0, 0.0054991921339034066),
    (29, 4.0, 0.0004000639456524914),
];

/// A difference sample of length `n` whose paired t statistic against
/// zero is exactly `t` up to rounding: mean `t/sqrt(n)`, sample standard
/// deviation 1.
fn crafted_diffs(n: usize, t: f64) -> Vec<f64> {
    let base: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let mean = base.iter().sum::<f64>() / n as f64;
    let var = base.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    let shift = t / (n as f64).sqrt();
    base.iter().map(|v| shift + (v - mean) / sd).collect()
}

#[test]
fn criterion_6_statistics_oracle() {
    let mut worst: f64 = 0.0;
    for &(dof, t, expected_p) in &P_TABLE {
        let n = dof + 1;
        let diffs = crafted_diffs(n, t);
        let zeros = vec![0.0; n];
        let result = paired_t_test(&diffs, &zeros).unwrap();
        assert!(
            (result.t_stat - t).abs() < 1e-9,
            "crafted sample gave t={} instead of {t}",
            result.t_stat
        );
        assert_eq!(result.dof, dof);
        let err = (result.p_value - expected_p).abs();
        assert!(
            err <= 1e-3,
            "dof={dof}, t={t}: p={} vs reference {expected_p}",
            result.p_value
        );
        worst = worst.max(err);

        // The direct CDF route must hit the same table values.
        let err = (two_tailed_p(t, dof).unwrap() - expected_p).abs();
        assert!(err <= 1e-3);
        worst = worst.max(err);
    }

    // Zero difference vector: degenerate case pinned to p = 1.
    let same = [0.7, 0.8, 0.9, 0.6];
    let degenerate = paired_t_test(&same, &same).unwrap();
    assert_eq!(degenerate.p_value, 1.0);
    assert_eq!(degenerate.t_stat, 0.0);
    pass(
        6,
        &format!("20 table entries matched (worst |dp| = {worst:.2e}); zero-diff case gives p = 1"),
    );
}

/// Ridge oracle for the acceptance suite: builds the normal equations and
/// solves them by Gaussian elimination with partial pivoting. Written
/// independently of the library's Cholesky route.
fn elimination_ridge(x: &Matrix, y: &Vector, lambda: f64) -> Vec<f64> {
    let (rows, cols) = (x.rows(), x.cols());
    let mut a = vec![vec![0.0f64; cols + 1]; cols];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate().take(cols) {
            let mut s = 0.0;
            for k in 0..rows {
                s += x.get(k, i) * x.get(k, j);
            }
            *cell = s + if i == j { lambda } else { 0.0 };
        }
        let mut s = 0.0;
        for k in 0..rows {
            s += x.get(k, i) * y.get(k);
        }
        row[cols] = s;
    }
    for col in 0..cols {
        let pivot = (col..cols)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for row in (col + 1)..cols {
            let factor = a[row][col] / a[col][col];
            // Indexing two rows of `a` at once; index form mirrors the math.
            #[allow(clippy::needless_range_loop)]
            for j in col..=cols {
                let sub = factor * a[col][j];
                a[row][j] -= sub;
            }
        }
    }
    let mut w = vec![0.0; cols];
    for i in (0..cols).rev() {
        let mut s = a[i][cols];
        for j in (i + 1)..cols {
            s -= a[i][j] * w[j];
        }
        w[i] = s / a[i][i];
    }
    w
}

#[test]
fn criterion_7_algebra_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x52494447);
    let lambdas = [0.1, 1.0, 10.0];
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let rows = rng.random_range(1..=32);
        let cols = rng.random_range(1..=8);
        let lambda = lambdas[case % lambdas.len()];
        let data: Vec<f64> = (0..rows * cols).map(|_| rng.random_range(-2.0..2.0)).collect();
        let x = Matrix::new(rows, cols, data).unwrap();
        let y = Vector::new((0..rows).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap();

        let fast = ridge_solve(&x, &y, lambda).unwrap();
        let slow = elimination_ridge(&x, &y, lambda);
        for (f, s) in Vec::from(fast).iter().zip(&slow) {
            let err = (f - s).abs();
            assert!(err <= 1e-8, "case {case}: weight error {err}");
            worst = worst.max(err);
        }
    }
    // The solver also enforces an internal residual bound on every call
    // and fails loudly when it is violated, so the model-fitting runs
    // behind criteria 1-5 double as evidence that the bound held there.
    pass(
        7,
        &format!("100 random ridge systems matched elimination oracle (worst |dw| = {worst:.2e})"),
    );
}

fn lattice_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    // Multiples of 2^-16 up to +-16: exactly representable, with exact
    // pairwise midpoints.
    (0..dim)
        .map(|_| rng.random_range(-65536i64 * 16..=65536 * 16) as f64 / 65536.0)
        .collect()
}

#[test]
fn criterion_8_geometry_property_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x47454F4D);
    let epsilon = 0.01;

    for _ in 0..1000 {
        let dim = rng.random_range(1..=10);
        let (pair, probe) = loop {
            let x_plus = lattice_point(&mut rng, dim);
            let x_minus = lattice_point(&mut rng, dim);
            let probe = lattice_point(&mut rng, dim);
            if let Ok(pair) = Pair::new(x_plus, x_minus) {
                break (pair, probe);
            }
        };
        let h = Hyperplane::from_pair(pair);
        let d = h.half_dist();

        // Endpoints sit at signed value +-d.
        assert!((h.signed_value(h.pair().x_plus()) - d).abs() <= 1e-10);
        assert!((h.signed_value(h.pair().x_minus()) + d).abs() <= 1e-10);

        // The midpoint confidence is one half, exactly.
        let center = h.center().to_vec();
        assert_eq!(h.confidence(&center, epsilon), 0.5);

        // Features stay strictly inside (-1, 1), with and without the
        // confidence factor, even at saturating inputs.
        for x in [&probe, &center, &h.pair().x_plus().to_vec()] {
            for confidence_enabled in [true, false] {
                let row = feature_row(
                    std::slice::from_ref(&h),
                    x,
                    epsilon,
                    confidence_enabled,
                )
                .unwrap();
                assert_eq!(row[0], 1.0);
                assert!(
                    row[1] > -1.0 && row[1] < 1.0,
                    "feature {} outside the open interval",
                    row[1]
                );
            }
        }
    }

    // Confidence grows with the pair separation when the probe keeps a
    // fixed offset beyond the positive endpoint.
    for _ in 0..100 {
        let dim = rng.random_range(1..=10);
        let axis = rng.random_range(0..dim);
        let center = lattice_point(&mut rng, dim);
        let offset = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0][rng.random_range(0..6)];
        let mut previous = -1.0;
        for step in 0..12 {
            let d = 1.0 + 0.5 * step as f64;
            let mut x_plus = center.clone();
            let mut x_minus = center.clone();
            x_plus[axis] += d;
            x_minus[axis] -= d;
            let mut probe = x_plus.clone();
            probe[axis] += offset;
            let h = Hyperplane::from_pair(Pair::new(x_plus, x_minus).unwrap());
            let c = h.confidence(&probe, epsilon);
            assert!(
                c >= previous,
                "confidence fell from {previous} to {c} at d={d}, offset={offset}"
            );
            previous = c;
        }
    }

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "property suite took {secs:.1}s");
    pass(
        8,
        &format!(
            "1000 pairs in dims 1-10: endpoints at +-d, exact midpoint confidence, \
             open-interval features, monotone growth; {secs:.1}s"
        ),
    );
}

#[test]
fn criterion_9_bitwise_determinism() {
    let h = harness();
    let rerun_dir = tempfile::tempdir().unwrap();
    for (name, args) in record_commands(h.dir.path()) {
        let original = std::fs::read(h.path(name)).unwrap();
        for jobs in ["1", "4"] {
            let out_path = rerun_dir.path().join(format!("jobs{jobs}_{name}"));
            let mut args = args.clone();
            args.extend([
                "--jobs".to_string(),
                jobs.to_string(),
                "--out".to_string(),
                out_path.to_str().unwrap().to_string(),
            ]);
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            run_ok(&refs);
            let rerun = std::fs::read(&out_path).unwrap();
            assert_eq!(
                original, rerun,
                "{name} differs on rerun with --jobs {jobs}"
            );
        }
    }
    pass(
        9,
        "all five record files bitwise identical on rerun with --jobs 1 and --jobs 4",
    );
}
