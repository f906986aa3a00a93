//! Command-line interface: dataset generation, cross-validation,
//! parameter sweeps, model comparison, and confidence heat maps.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vsc::data::{
    gen_ringnorm, gen_twonorm, gen_xor_blobs, parse_csv, parse_keel, stratified_folds,
    write_csv, Dataset, FoldPlan,
};
use vsc::eval::{
    compare, confidence_grid, normalize_against, run_cv, sweep, BaselinePoint, ClassifierSpec,
    Comparison, CvResult, ScaleMode, SweepGrid,
};
use vsc::model::{Pair, PairMode, VscConfig};
use vsc::records::{parse_records, records_to_csv, to_cv_result, write_records, Record};

#[derive(Parser)]
#[command(
    name = "vsc",
    version,
    about = "Pair-feature classification: data generation, cross-validation, sweeps, and comparisons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic benchmark dataset as CSV.
    Gen(GenArgs),
    /// Cross-validate one classifier on a dataset.
    Cv(CvArgs),
    /// Evaluate a classifier over a k x lambda grid with shared folds.
    Sweep(SweepArgs),
    /// Compare saved results with paired significance tests and ranks.
    Compare(CompareArgs),
    /// Export a confidence heat map for one pair as CSV.
    Heatmap(HeatmapArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    JsonLines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    PerFold,
    Global,
}

impl From<ScaleArg> for ScaleMode {
    fn from(s: ScaleArg) -> Self {
        match s {
            ScaleArg::PerFold => ScaleMode::PerFold,
            ScaleArg::Global => ScaleMode::Global,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Dataset family: twonorm, ringnorm, or xor_blobs.
    dataset: String,
    /// Number of samples.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Feature dimension (twonorm/ringnorm; xor_blobs is always 2-D).
    #[arg(long, default_value_t = 20)]
    dim: usize,
    /// Blob standard deviation (xor_blobs only).
    #[arg(long, default_value_t = 0.2)]
    noise: f64,
    #[arg(long, env = "VSC_SEED", default_value_t = 42)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DataArgs {
    /// Input dataset (.csv, or KEEL header format otherwise).
    #[arg(long)]
    data: PathBuf,
    /// Label column name (CSV only).
    #[arg(long, default_value = "class")]
    label_column: String,
    /// Class treated as +1. CSV default: "1"; KEEL default: the first
    /// declared class.
    #[arg(long)]
    positive: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Number of cross-validation folds.
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Feature standardization mode.
    #[arg(long, value_enum, default_value_t = ScaleArg::PerFold)]
    scale: ScaleArg,
    /// Master seed for folds and per-fold model seeds.
    #[arg(long, env = "VSC_SEED", default_value_t = 42)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ModelArgs {
    /// vsc, vsc-noconf, vsc-uniform, elm, or knn.
    #[arg(long)]
    model: String,
    /// Number of pairs (vsc family).
    #[arg(long, default_value_t = 100)]
    k: usize,
    /// Ridge regularization strength (vsc family and elm).
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Confidence softening constant (vsc family).
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Hidden units (elm).
    #[arg(long, default_value_t = 100)]
    hidden: usize,
    /// Neighbor count (knn).
    #[arg(long, default_value_t = 5)]
    neighbors: usize,
}

#[derive(Args)]
struct CvArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Write result records (JSON lines) here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout rendering.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Grid of pair counts.
    #[arg(long, value_delimiter = ',', default_value = "25,50,100,250,500")]
    k_list: Vec<usize>,
    /// Grid of regularization strengths.
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
    lambda_list: Vec<f64>,
    /// Normalization reference point on the grid.
    #[arg(long, default_value_t = 100)]
    ref_k: usize,
    #[arg(long, default_value_t = 1.0)]
    ref_lambda: f64,
    /// Renormalize against records from this file instead of the
    /// reference grid point.
    #[arg(long)]
    normalize_against: Option<PathBuf>,
    /// Write result records (JSON lines) here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout rendering.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct CompareArgs {
    /// Record files (JSON lines) holding the results to compare.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Classifier id the significance marks refer to (default: the first
    /// record).
    #[arg(long)]
    reference: Option<String>,
    /// Stdout rendering (table or json-lines).
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also write the comparison (one JSON line) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeatmapArgs {
    /// The pair as "x1,y1:x2,y2" (positive point first).
    #[arg(long, default_value = "5,0:-5,0", allow_hyphen_values = true)]
    pair: String,
    /// Grid x extent as "lo:hi".
    #[arg(long, default_value = "-10:10", allow_hyphen_values = true)]
    x_range: String,
    /// Grid y extent as "lo:hi".
    #[arg(long, default_value = "-10:10", allow_hyphen_values = true)]
    y_range: String,
    /// Cells per axis.
    #[arg(long, default_value_t = 201)]
    resolution: usize,
    /// Confidence softening constant.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Cv(args) => cmd_cv(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Heatmap(args) => cmd_heatmap(args),
    }
}

/// Writes via a temp file in the destination directory plus an atomic
/// rename, so readers never observe a partial file.
fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn configure_jobs(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        if n == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    Ok(())
}

fn load_dataset(args: &DataArgs) -> Result<Dataset> {
    let path = &args.data;
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let dataset = if is_csv {
        let positive = args.positive.as_deref().unwrap_or("1");
        parse_csv(&text, &args.label_column, positive)
    } else {
        parse_keel(&text, args.positive.as_deref())
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    // Records should identify the file, not the parser; content identity
    // lives in the fingerprint.
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(dataset.with_source(name))
}

fn build_spec(args: &ModelArgs) -> Result<ClassifierSpec> {
    let vsc_config = |confidence_enabled: bool, pair_mode: PairMode| {
        ClassifierSpec::Vsc(VscConfig {
            k: args.k,
            lambda: args.lambda,
            epsilon: args.epsilon,
            confidence_enabled,
            pair_mode,
            seed: 0, // replaced per fold
        })
    };
    Ok(match args.model.as_str() {
        "vsc" => vsc_config(true, PairMode::FromData),
        "vsc-noconf" => vsc_config(false, PairMode::FromData),
        "vsc-uniform" => vsc_config(true, PairMode::UniformBox),
        "vsc-uniform-noconf" => vsc_config(false, PairMode::UniformBox),
        "elm" => ClassifierSpec::Elm {
            hidden: args.hidden,
            lambda: args.lambda,
        },
        "knn" => ClassifierSpec::Knn {
            neighbors: args.neighbors,
        },
        other => bail!(
            "unknown model '{other}' (expected vsc, vsc-noconf, vsc-uniform, \
             vsc-uniform-noconf, elm, or knn)"
        ),
    })
}

fn build_folds(data: &Dataset, folds: usize, seed: u64) -> Result<FoldPlan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plan = stratified_folds(data.y(), folds, &mut rng)?;
    if plan.is_degraded() {
        eprintln!(
            "warning: a class has fewer than {folds} members; some folds lack that class"
        );
    }
    Ok(plan)
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let dataset = match args.dataset.as_str() {
        "twonorm" => gen_twonorm(args.n, args.dim, args.seed)?,
        "ringnorm" => gen_ringnorm(args.n, args.dim, args.seed)?,
        "xor_blobs" => gen_xor_blobs(args.n, args.noise, args.seed)?,
        other => bail!("unknown dataset '{other}' (expected twonorm, ringnorm, or xor_blobs)"),
    };
    atomic_write(&args.out, &write_csv(&dataset))?;
    let (pos, neg) = dataset.class_counts();
    println!(
        "wrote {} to {}: {} samples, {} features, {pos} positive / {neg} negative",
        dataset.source(),
        args.out.display(),
        dataset.n_samples(),
        dataset.n_features(),
    );
    Ok(())
}

fn print_cv_table(result: &CvResult) {
    println!("classifier  {}", result.classifier_id);
    println!(
        "dataset     {} [{}]",
        result.dataset_source, result.dataset_id
    );
    println!(
        "folds       {} (seed {}, {} scaling)",
        result.n_folds,
        result.seed,
        result.scale_mode.as_str()
    );
    let params: Vec<String> = result
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    println!("params      {}", params.join(" "));
    let folds: Vec<String> = result.fold_f1.iter().map(|f| format!("{f:.4}")).collect();
    println!("fold F1     {}", folds.join(" "));
    println!("mean F1     {:.4}", result.mean_f1);
    println!("std F1      {:.4}", result.std_f1);
}

fn emit_records(records: &[Record], format: Format, out: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        atomic_write(path, &write_records(records))?;
        eprintln!("wrote {} record(s) to {}", records.len(), path.display());
    }
    match format {
        Format::Table => {} // caller prints its own table
        Format::Csv => print!("{}", records_to_csv(records)),
        Format::JsonLines => print!("{}", write_records(records)),
    }
    Ok(())
}

fn cmd_cv(args: CvArgs) -> Result<()> {
    configure_jobs(args.run.jobs)?;
    let data = load_dataset(&args.data)?;
    let spec = build_spec(&args.model)?;
    let folds = build_folds(&data, args.run.folds, args.run.seed)?;
    let result = run_cv(&data, &spec, &folds, args.run.scale.into(), args.run.seed)?;

    let records = [Record::from_cv(&result)];
    emit_records(&records, args.format, args.out.as_deref())?;
    if args.format == Format::Table {
        print_cv_table(&result);
    }
    Ok(())
}

fn print_sweep_table(grid: &SweepGrid) {
    let first = &grid.points[0].result;
    println!(
        "sweep on {} [{}], {} folds, seed {}, normalized by {}",
        first.dataset_source, first.dataset_id, first.n_folds, first.seed, grid.reference
    );
    println!("{:>6} {:>8} {:>9} {:>8} {:>11}", "k", "lambda", "mean F1", "std F1", "normalized");
    for p in &grid.points {
        println!(
            "{:>6} {:>8} {:>9.4} {:>8.4} {:>11.4}",
            p.k, p.lambda, p.result.mean_f1, p.result.std_f1, p.normalized_mean_f1
        );
    }
}

/// Turns saved records into normalization baselines: sweep records match
/// by grid point, and a single cv record broadcasts.
fn baselines_from_records(records: &[Record]) -> Vec<BaselinePoint> {
    records
        .iter()
        .map(|r| match &r.sweep {
            Some(s) => BaselinePoint {
                k: Some(s.k),
                lambda: Some(s.lambda),
                mean_f1: r.mean_f1,
            },
            None => BaselinePoint {
                k: None,
                lambda: None,
                mean_f1: r.mean_f1,
            },
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    configure_jobs(args.run.jobs)?;
    let data = load_dataset(&args.data)?;
    let spec = build_spec(&args.model)?;
    let folds = build_folds(&data, args.run.folds, args.run.seed)?;
    let mut grid = sweep(
        &data,
        &spec,
        &args.k_list,
        &args.lambda_list,
        &folds,
        args.run.scale.into(),
        args.run.seed,
        (args.ref_k, args.ref_lambda),
    )?;

    if let Some(path) = &args.normalize_against {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let records = parse_records(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        let description = format!(
            "{} ({} record{})",
            path.display(),
            records.len(),
            if records.len() == 1 { "" } else { "s" }
        );
        normalize_against(&mut grid, &baselines_from_records(&records), &description)?;
    }

    let records = Record::from_sweep(&grid);
    emit_records(&records, args.format, args.out.as_deref())?;
    if args.format == Format::Table {
        print_sweep_table(&grid);
    }
    Ok(())
}

/// Display name for a record in comparison output; sweep records carry
/// their grid point.
fn display_id(record: &Record) -> String {
    match &record.sweep {
        Some(s) => format!("{}(k={},lambda={})", record.classifier_id, s.k, s.lambda),
        None => record.classifier_id.clone(),
    }
}

fn comparison_json(c: &Comparison, ids: &[String], reference: usize) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = (0..ids.len())
        .map(|i| {
            let vs_reference = c.cells[i][reference].map(|cell| {
                serde_json::json!({
                    // Infinite t statistics serialize as null.
                    "t_stat": cell.test.t_stat,
                    "p_value": cell.test.p_value,
                    "dof": cell.test.dof,
                    "mean_diff": cell.test.mean_diff,
                    "significant": cell.test.significant,
                })
            });
            serde_json::json!({
                "classifier_id": ids[i],
                "mean_f1": c.mean_f1[i],
                "std_f1": c.std_f1[i],
                "rank": c.ranks[i],
                "mark": c.mark_against(i, reference),
                "vs_reference": vs_reference,
            })
        })
        .collect();
    serde_json::json!({
        "schema_version": vsc::records::SCHEMA_VERSION,
        "kind": "compare",
        "dataset_id": c.dataset_id,
        "dataset_source": c.dataset_source,
        "n_folds": c.n_folds,
        "seed": c.seed,
        "reference": ids[reference],
        "entries": entries,
    })
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let mut records = Vec::new();
    for path in &args.files {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let parsed =
            parse_records(&text).with_context(|| format!("parsing {}", path.display()))?;
        records.extend(parsed);
    }
    if records.len() < 2 {
        bail!(
            "need at least two records to compare, found {}",
            records.len()
        );
    }
    let ids: Vec<String> = records.iter().map(display_id).collect();
    let results: Vec<CvResult> = records.iter().map(to_cv_result).collect();
    let comparison = compare(&results)?;

    let reference = match &args.reference {
        None => 0,
        Some(wanted) => {
            let matches: Vec<usize> = ids
                .iter()
                .enumerate()
                .filter(|(_, id)| *id == wanted)
                .map(|(i, _)| i)
                .collect();
            match matches.as_slice() {
                [i] => *i,
                [] => bail!(
                    "reference '{wanted}' not found among: {}",
                    ids.join(", ")
                ),
                _ => bail!("reference '{wanted}' is ambiguous ({} matches)", matches.len()),
            }
        }
    };

    let json = comparison_json(&comparison, &ids, reference);
    if let Some(path) = &args.out {
        atomic_write(path, &format!("{json}\n"))?;
        eprintln!("wrote comparison to {}", path.display());
    }
    match args.format {
        Format::JsonLines | Format::Csv => println!("{json}"),
        Format::Table => {
            println!(
                "dataset {} [{}], {} folds, seed {}",
                comparison.dataset_source,
                comparison.dataset_id,
                comparison.n_folds,
                comparison.seed
            );
            println!("reference: {}", ids[reference]);
            let width = ids.iter().map(String::len).max().unwrap_or(10).max(10);
            println!(
                "{:<width$} {:>9} {:>8} {:>5} {:>5}",
                "classifier", "mean F1", "std F1", "mark", "rank"
            );
            for (i, id) in ids.iter().enumerate() {
                println!(
                    "{:<width$} {:>9.4} {:>8.4} {:>5} {:>5}",
                    id,
                    comparison.mean_f1[i],
                    comparison.std_f1[i],
                    comparison.mark_against(i, reference),
                    comparison.ranks[i],
                );
            }
        }
    }
    Ok(())
}

fn parse_point(s: &str) -> Result<Vec<f64>> {
    let coords: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| anyhow!("invalid point '{s}' (expected \"x,y\")"))?;
    if coords.len() != 2 {
        bail!("point '{s}' has {} coordinates, expected 2", coords.len());
    }
    Ok(coords)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        bail!("invalid range '{s}' (expected \"lo:hi\")");
    }
    let lo = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| anyhow!("invalid range bound '{}'", parts[0]))?;
    let hi = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| anyhow!("invalid range bound '{}'", parts[1]))?;
    Ok((lo, hi))
}

fn cmd_heatmap(args: HeatmapArgs) -> Result<()> {
    let parts: Vec<&str> = args.pair.split(':').collect();
    if parts.len() != 2 {
        bail!("invalid pair '{}' (expected \"x1,y1:x2,y2\")", args.pair);
    }
    let pair = Pair::new(parse_point(parts[0])?, parse_point(parts[1])?)?;
    let grid = confidence_grid(
        &pair,
        parse_range(&args.x_range)?,
        parse_range(&args.y_range)?,
        args.resolution,
        args.epsilon,
    )?;
    atomic_write(&args.out, &grid.to_csv())?;
    println!(
        "wrote {}x{} confidence grid to {}",
        grid.ys.len(),
        grid.xs.len(),
        args.out.display()
    );
    Ok(())
}
