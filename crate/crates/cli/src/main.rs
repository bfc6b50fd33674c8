mod config;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ohit::datasets::{binarize, load_series, save_series, BinaryDataset, DEFAULT_DELIMITER};
use ohit::drsnn::{DrsnnParams, DEFAULT_DRT, MIN_CLUSTER_SIZE};
use ohit::evaluation::{auc, benchmark, confusion, knn_classify, metrics, DEFAULT_K_CLS};
use ohit::pipeline::{resample, Eta, Method, Mode, OhitConfig};
use ohit::{shrinkage, OhitError};

/// Environment variable holding the log filter (`error` .. `trace`).
const LOG_ENV: &str = "OHIT_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "ohit",
    version,
    about = "Oversampling for imbalanced time-series classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Oversample the minority class of one dataset file.
    Resample(ResampleArgs),
    /// Resample a training set, classify a test set and print the metrics.
    Evaluate(EvaluateArgs),
    /// Run every method on every dataset listed in a TOML config.
    Benchmark(BenchmarkArgs),
    /// Print a benchmark config covering the catalog datasets found in a
    /// local copy of the UCR archive.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
struct MethodArgs {
    /// Class tags forming the minority class, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    minority: Vec<String>,
    #[arg(long, default_value = "ohit", value_parser = parse_method)]
    method: Method,
    /// OHIT variant; ignored by other methods.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// DRSNN neighborhood size (default: ceil(sqrt(n)), at least 5).
    #[arg(long)]
    k: Option<usize>,
    /// Neighbors used in the density ratio (default: k).
    #[arg(long)]
    kappa: Option<usize>,
    /// Core-point density-ratio threshold.
    #[arg(long, default_value_t = DEFAULT_DRT)]
    drt: f64,
    /// Number of synthetic samples, or `balance`.
    #[arg(long, default_value = "balance", value_parser = parse_eta)]
    eta: Eta,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Field delimiter: a character or `tab`, `comma`, `whitespace`.
    #[arg(long, default_value_t = DEFAULT_DELIMITER.to_string())]
    delimiter: String,
    /// Z-normalize every series before resampling.
    #[arg(long)]
    normalize: bool,
}

#[derive(Debug, Args)]
struct ResampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    /// Write per-point cluster assignments (OHIT only).
    #[arg(long)]
    dump_clusters: Option<PathBuf>,
    /// Write per-cluster shrinkage intensities (OHIT only).
    #[arg(long)]
    dump_shrinkage: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    /// Neighbors used by the k-NN classifier.
    #[arg(long, default_value_t = DEFAULT_K_CLS)]
    k_cls: usize,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    /// Archive root holding one directory per dataset.
    #[arg(long)]
    ucr_dir: PathBuf,
    /// Seeds listed in the generated config.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: OhitError| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: OhitError| e.to_string())
}

fn parse_eta(s: &str) -> Result<Eta, String> {
    s.parse().map_err(|e: OhitError| e.to_string())
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    /// Bad flags or config: exit 2.
    Usage(String),
    /// Bad data or a runtime error: exit 1.
    Data(String),
}

impl From<OhitError> for Failure {
    fn from(e: OhitError) -> Self {
        match e {
            OhitError::Parameter(msg) => Failure::Usage(msg),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl MethodArgs {
    fn delimiter(&self) -> Result<char, Failure> {
        config::parse_delimiter(&self.delimiter).map_err(Failure::Usage)
    }

    fn method(&self) -> Method {
        match (self.method, self.mode) {
            (Method::Ohit(_), Some(mode)) => Method::Ohit(mode),
            (m, _) => m,
        }
    }

    fn config(&self) -> Result<OhitConfig, Failure> {
        if self.drt.is_nan() || self.drt < 0.0 {
            return Err(Failure::Usage(format!(
                "--drt must be non-negative, got {}",
                self.drt
            )));
        }
        Ok(OhitConfig {
            drsnn: DrsnnParams {
                k: self.k,
                kappa: self.kappa,
                drt: self.drt,
                min_cluster_size: MIN_CLUSTER_SIZE,
            },
            eta: self.eta,
            seed: self.seed,
            mode: self.mode.unwrap_or_default(),
            normalize: self.normalize,
        })
    }

    fn load(&self, path: &Path) -> Result<BinaryDataset, Failure> {
        let set = load_series(path, self.delimiter()?)?;
        Ok(binarize(&set, &self.minority)?)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Data(format!("cannot write {}: {e}", path.display()))
}

fn cmd_resample(args: &ResampleArgs) -> Result<(), Failure> {
    let cfg = args.method.config()?;
    let method = args.method.method();
    let data = args.method.load(&args.input)?;

    if method == Method::None {
        // Validated above; the output is the input unchanged.
        fs::copy(&args.input, &args.output).map_err(write_err(&args.output))?;
        println!(
            "none: minority {} -> {} (majority {})",
            data.n_min(),
            data.n_min(),
            data.n_maj()
        );
        return Ok(());
    }

    let out = resample(&data, method, &cfg)?;
    save_series(
        &out.data.to_series_set(),
        &args.output,
        args.method.delimiter()?,
    )?;

    let delim = args.method.delimiter()?;
    if let Some(run) = &out.run {
        if let Some(path) = &args.dump_clusters {
            run.labeling.write_dump(create(path)?, delim)?;
        }
        if let Some(path) = &args.dump_shrinkage {
            shrinkage::write_dump(&run.estimates, create(path)?, delim)?;
        }
    } else if args.dump_clusters.is_some() || args.dump_shrinkage.is_some() {
        log::warn!("--dump-clusters and --dump-shrinkage only apply to OHIT");
    }
    println!("{method}: {}", out.summary);
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), Failure> {
    if args.k_cls == 0 {
        return Err(Failure::Usage("--k-cls must be at least 1".into()));
    }
    let cfg = args.method.config()?;
    let method = args.method.method();
    let train = args.method.load(&args.train)?;
    let mut test = args.method.load(&args.test)?;
    if cfg.normalize {
        test = test.map_rows(ohit::datasets::z_normalize_row);
    }
    let out = resample(&train, method, &cfg)?;
    let sp = knn_classify(&out.data, &test, args.k_cls)?;
    let c = confusion(&sp);
    let m = metrics(&c)?;
    println!("{method}: {}", out.summary);
    println!("tp {} fp {} tn {} fn {}", c.tp, c.fp, c.tn, c.fn_);
    println!(
        "f1 {:.4} gmean {:.4} auc {:.4} recall {:.4} specificity {:.4} precision {:.4}",
        m.f1,
        m.gmean,
        auc(&sp)?,
        m.recall,
        m.specificity,
        m.precision
    );
    Ok(())
}

fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.config.display())))?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let run = config::parse(&text, base)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;

    let report = benchmark(&run.datasets, &run.methods, &run.config)?;
    fs::create_dir_all(&args.out_dir).map_err(write_err(&args.out_dir))?;
    let path = |name: &str| args.out_dir.join(name);

    report.write_cells(create(&path("report.tsv"))?, '\t')?;
    report.write_wilcoxon(create(&path("wilcoxon.tsv"))?, '\t')?;
    report.write_averages(create(&path("averages.tsv"))?, '\t')?;
    let json_path = path("report.json");
    let mut json = create(&json_path)?;
    json.write_all(report.to_json()?.as_bytes())
        .and_then(|_| json.flush())
        .map_err(write_err(&json_path))?;

    let errors = report
        .cells
        .iter()
        .filter(|c| matches!(c.outcome, ohit::evaluation::CellOutcome::Error(_)))
        .count();
    println!(
        "{} datasets x {} methods, {} failed cells; reports in {}",
        run.datasets.len(),
        run.methods.len(),
        errors,
        args.out_dir.display()
    );
    Ok(())
}

/// Older archive names that newer releases spell differently.
const RENAMED: &[(&str, &str)] = &[
    ("Lighting2", "Lightning2"),
    ("Two_Patterns", "TwoPatterns"),
    ("FISH", "Fish"),
    ("Cricket_Z", "CricketZ"),
    ("NonInvasiveFatalECG_Thorax1", "NonInvasiveFetalECGThorax1"),
];

/// Finds `(train, test, delimiter)` for a dataset under `root`.
fn locate(root: &Path, name: &str) -> Option<(PathBuf, PathBuf, &'static str)> {
    let renamed = RENAMED
        .iter()
        .find(|(old, _)| *old == name)
        .map(|(_, new)| *new);
    for dir in std::iter::once(name).chain(renamed) {
        for (ext, delim) in [(".tsv", "tab"), ("", "comma"), (".txt", "comma")] {
            let train = root.join(dir).join(format!("{dir}_TRAIN{ext}"));
            let test = root.join(dir).join(format!("{dir}_TEST{ext}"));
            if train.is_file() && test.is_file() {
                return Some((train, test, delim));
            }
        }
    }
    None
}

fn cmd_catalog(args: &CatalogArgs) -> Result<(), Failure> {
    let seeds: Vec<String> = (0..args.seeds.max(1)).map(|s| s.to_string()).collect();
    let mut out = format!(
        "seeds = [{}]\nk_cls = {DEFAULT_K_CLS}\nmethods = [\"none\", \"ros\", \"smote\", \"ohit\", \
         \"ohit/no_drsnn\", \"ohit/no_shrinkage\", \"ohit/er\"]\nreference = \"ohit\"\n\n[ohit]\nnormalize = true\n",
        seeds.join(", ")
    );
    let mut found = 0;
    for entry in ohit::datasets::UCR_CATALOG {
        let Some((train, test, delim)) = locate(&args.ucr_dir, entry.name) else {
            log::warn!("{} not found under {}", entry.name, args.ucr_dir.display());
            continue;
        };
        let tags: Vec<String> = entry.minority.iter().map(|t| format!("{t:?}")).collect();
        out += &format!(
            "\n[[dataset]]\nname = {:?}\ntrain = {:?}\ntest = {:?}\ndelimiter = \"{delim}\"\nminority = [{}]\n",
            entry.abbreviation,
            train.display().to_string(),
            test.display().to_string(),
            tags.join(", ")
        );
        found += 1;
    }
    if found == 0 {
        return Err(Failure::Data(format!(
            "no catalog dataset found under {}",
            args.ucr_dir.display()
        )));
    }
    print!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Resample(a) => cmd_resample(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Catalog(a) => cmd_catalog(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
