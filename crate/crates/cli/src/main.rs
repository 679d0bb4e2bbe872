use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mfdma::config::{AnalysisConfig, Method, Mode, OutputFormat, Reference};
use mfdma::emit::{emit_results, summary};
use mfdma::error::{CliError, Result};
use mfdma::ingest::{self, SeriesFormat};
use mfdma::pipeline::{self, analyze, parse_input, Input, InputRecord, ResultBundle};
use mfdma_core::generators::{
    binomial_measure_1d, cascade_measure_2d, gaussian_noise, shuffle_surrogate, CascadeSpec1D,
    CascadeSpec2D,
};
use mfdma_core::spectrum::{cascade_alpha, cascade_f, cascade_hurst, cascade_tau, QGrid};

const SHOWN_QS: [f64; 5] = [-4.0, -2.0, 0.0, 2.0, 4.0];

#[derive(Parser)]
#[command(name = "mfdma", version, about = "Multifractal detrending moving average analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic measure or noise series.
    #[command(subcommand)]
    Generate(Generate),
    /// Analyze one series or surface.
    Analyze(AnalysisArgs),
    /// Analyze a series and a shuffled copy of it, and compare spectrum widths.
    Surrogate(AnalysisArgs),
    /// Run backward, centred and forward MFDMA and MFDFA against an analytic reference.
    Compare(AnalysisArgs),
    /// Print analytic tau, alpha, f and h of a cascade.
    Oracle(OracleArgs),
}

#[derive(Subcommand)]
enum Generate {
    /// 1D binomial cascade, 2^levels values.
    Binomial {
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        levels: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// 2D four-weight cascade, 2^levels x 2^levels values.
    Cascade2d {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        #[arg(long)]
        levels: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Standard Gaussian white noise.
    Noise {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct AnalysisArgs {
    /// TOML file with defaults; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    theta: Option<f64>,
    /// Detrending polynomial order for 1D MFDFA.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    q_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q_max: Option<f64>,
    #[arg(long)]
    q_step: Option<f64>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    n_count: Option<usize>,
    #[arg(long)]
    fit_lo: Option<usize>,
    #[arg(long)]
    fit_hi: Option<usize>,
    /// Half-width of the local slope window used for alpha.
    #[arg(long)]
    legendre_window: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_format: Option<SeriesFormat>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Binomial cascade weight p1 used as the analytic reference.
    #[arg(long, conflicts_with = "reference_weights")]
    reference_p1: Option<f64>,
    /// Four quadrant weights used as the analytic reference.
    #[arg(long, value_delimiter = ',')]
    reference_weights: Option<Vec<f64>>,
}

impl AnalysisArgs {
    fn to_config(&self) -> Result<AnalysisConfig> {
        let mut cfg = match &self.config {
            Some(path) => AnalysisConfig::from_toml_file(path)?,
            None => AnalysisConfig::default(),
        };
        macro_rules! overlay {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        overlay!(mode, method, theta, order, q_min, q_max, q_step, legendre_window, seed, format);
        macro_rules! overlay_opt {
            ($($field:ident),*) => {$(
                if self.$field.is_some() {
                    cfg.$field = self.$field.clone();
                }
            )*};
        }
        overlay_opt!(n_min, n_max, n_count, fit_lo, fit_hi, input, input_format, out_dir);
        if let Some(p1) = self.reference_p1 {
            cfg.reference = Some(Reference::Binomial { p1 });
        }
        if let Some(w) = &self.reference_weights {
            cfg.reference = Some(Reference::Quadrant { weights: four(w)? });
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, required_unless_present = "weights", conflicts_with = "weights")]
    p1: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true, default_value_t = -4.0)]
    q_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 4.0)]
    q_max: f64,
    #[arg(long, default_value_t = 0.5)]
    q_step: f64,
}

fn four(w: &[f64]) -> Result<[f64; 4]> {
    w.try_into()
        .map_err(|_| CliError::Validation(format!("expected 4 weights, got {}", w.len())))
}

fn write_or_print(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => ingest::write_file(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn generate(cmd: Generate) -> Result<()> {
    match cmd {
        Generate::Binomial { p1, levels, output } => {
            let s = binomial_measure_1d(&CascadeSpec1D::new(p1, levels)?)?;
            write_or_print(output.as_deref(), &ingest::series_to_string(s.values()))
        }
        Generate::Cascade2d { weights, levels, output } => {
            let s = cascade_measure_2d(&CascadeSpec2D::new(four(&weights)?, levels)?)?;
            write_or_print(output.as_deref(), &ingest::surface_to_string(&s))
        }
        Generate::Noise { length, seed, output } => {
            let s = gaussian_noise(length, seed)?;
            write_or_print(output.as_deref(), &ingest::series_to_string(s.values()))
        }
    }
}

fn emit_to(bundle: &ResultBundle, cfg: &AnalysisConfig, dir: Option<&Path>) -> Result<()> {
    if let Some(dir) = dir {
        for path in emit_results(bundle, cfg.format, dir)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn run_analyze(args: AnalysisArgs) -> Result<()> {
    let cfg = args.to_config()?;
    let bundle = pipeline::run_pipeline(&cfg)?;
    print!("{}", summary(&bundle, &SHOWN_QS));
    emit_to(&bundle, &cfg, cfg.out_dir.as_deref())
}

/// Reads the configured input, keeping the digest for provenance.
fn load(cfg: &AnalysisConfig) -> Result<(Input, InputRecord)> {
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| CliError::Validation("no input file given".into()))?;
    let bytes = ingest::read_bytes(path)?;
    let input = parse_input(cfg, path, &bytes)?;
    let record = InputRecord {
        path: Some(path.display().to_string()),
        sha256: ingest::sha256_hex(&bytes),
        shape: input.shape(),
    };
    Ok((input, record))
}

fn run_surrogate(args: AnalysisArgs) -> Result<()> {
    let cfg = args.to_config()?;
    if cfg.mode != Mode::Series {
        return Err(CliError::Validation("surrogate works on series only".into()));
    }
    let (input, record) = load(&cfg)?;
    let Input::Series(series) = &input else { unreachable!() };
    let raw = analyze(&cfg, &input, record)?;

    let shuffled = shuffle_surrogate(series, cfg.seed);
    let mut sorted_raw = series.values().to_vec();
    let mut sorted_shuffled = shuffled.values().to_vec();
    sorted_raw.sort_by(f64::total_cmp);
    sorted_shuffled.sort_by(f64::total_cmp);
    let multiset_preserved = sorted_raw == sorted_shuffled;

    let text = ingest::series_to_string(shuffled.values());
    let shuffled_path = cfg.out_dir.as_ref().map(|d| d.join("shuffled.txt"));
    if let Some(path) = &shuffled_path {
        ingest::write_file(path, &text)?;
    }
    let shuffled_record = InputRecord {
        path: shuffled_path.as_ref().map(|p| p.display().to_string()),
        sha256: ingest::sha256_hex(text.as_bytes()),
        shape: vec![shuffled.len()],
    };
    let shuffled_cfg = AnalysisConfig {
        input: shuffled_path.clone(),
        input_format: Some(SeriesFormat::Text),
        ..cfg.clone()
    };
    let shuffled_bundle = analyze(&shuffled_cfg, &Input::Series(shuffled), shuffled_record)?;

    println!("raw");
    print!("{}", summary(&raw, &SHOWN_QS));
    println!("shuffled (seed {})", cfg.seed);
    print!("{}", summary(&shuffled_bundle, &SHOWN_QS));
    println!(
        "width raw {:.3}, shuffled {:.3}, multiset preserved: {multiset_preserved}",
        raw.width(),
        shuffled_bundle.width()
    );

    if let Some(dir) = &cfg.out_dir {
        emit_to(&raw, &cfg, Some(&dir.join("raw")))?;
        emit_to(&shuffled_bundle, &cfg, Some(&dir.join("shuffled")))?;
        let report = serde_json::json!({
            "seed": cfg.seed,
            "width_raw": raw.width(),
            "width_shuffled": shuffled_bundle.width(),
            "multiset_preserved": multiset_preserved,
        });
        ingest::write_file(&dir.join("surrogate.json"), &format!("{report:#}\n"))?;
    }
    if !multiset_preserved {
        return Err(CliError::Validation("shuffled values differ from the input".into()));
    }
    Ok(())
}

/// The four estimators run by `compare`, in column order.
const COMPARED: [(&str, Method, f64); 4] = [
    ("backward", Method::Mfdma, 0.0),
    ("centered", Method::Mfdma, 0.5),
    ("forward", Method::Mfdma, 1.0),
    ("mfdfa", Method::Mfdfa, 0.0),
];

fn run_compare(args: AnalysisArgs) -> Result<()> {
    let cfg = args.to_config()?;
    if cfg.reference.is_none() {
        return Err(CliError::Validation(
            "compare needs --reference-p1 or --reference-weights".into(),
        ));
    }
    let (input, record) = load(&cfg)?;
    let mut bundles = Vec::with_capacity(COMPARED.len());
    for (name, method, theta) in COMPARED {
        let run_cfg = AnalysisConfig { method, theta, ..cfg.clone() };
        let bundle = analyze(&run_cfg, &input, record.clone())?;
        println!("{name}");
        print!("{}", summary(&bundle, &SHOWN_QS));
        bundles.push((name, bundle));
    }

    let totals: Vec<(&str, f64)> = bundles
        .iter()
        .map(|(name, b)| (*name, pipeline::total_tau_error(b).unwrap_or(f64::NAN)))
        .collect();
    let mut ranked = totals.clone();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
    let ranking: Vec<&str> = ranked.iter().map(|(n, _)| *n).collect();
    println!("ranking by sum |delta tau|: {}", ranking.join(" < "));

    if let Some(dir) = &cfg.out_dir {
        let qs = bundles[0].1.estimate.qs.values();
        let mut table = String::from("q");
        for (name, _) in &bundles {
            table.push(',');
            table.push_str(name);
        }
        table.push('\n');
        for (j, q) in qs.iter().enumerate() {
            table.push_str(&ingest::fmt_f64(*q));
            for (_, b) in &bundles {
                table.push(',');
                table.push_str(&ingest::fmt_f64(b.tau_error.as_ref().map_or(f64::NAN, |d| d[j])));
            }
            table.push('\n');
        }
        ingest::write_file(&dir.join("delta_tau.csv"), &table)?;
        let totals_json: serde_json::Map<String, serde_json::Value> =
            totals.iter().map(|(n, t)| (n.to_string(), (*t).into())).collect();
        let report = serde_json::json!({
            "sum_abs_delta_tau": totals_json,
            "ranking": ranking,
        });
        ingest::write_file(&dir.join("compare.json"), &format!("{report:#}\n"))?;
        for (name, b) in &bundles {
            emit_to(b, &cfg, Some(&dir.join(name)))?;
        }
    }
    Ok(())
}

fn run_oracle(args: OracleArgs) -> Result<()> {
    let (weights, dim) = match (&args.p1, &args.weights) {
        (Some(p1), _) => {
            CascadeSpec1D::new(*p1, 1)?;
            (vec![*p1, 1.0 - p1], 1.0)
        }
        (None, Some(w)) => {
            let w = four(w)?;
            CascadeSpec2D::new(w, 1)?;
            (w.to_vec(), 2.0)
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let qs = QGrid::uniform(args.q_min, args.q_max, args.q_step)
        .map_err(|e| CliError::Validation(format!("q grid: {e}")))?;
    let mut out = String::from("q,tau,alpha,f,h\n");
    for &q in qs.values() {
        let row = [
            q,
            cascade_tau(&weights, q),
            cascade_alpha(&weights, q),
            cascade_f(&weights, q),
            cascade_hurst(&weights, q, dim),
        ];
        let row: Vec<String> = row.iter().map(|v| ingest::fmt_f64(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    write_or_print(None, &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(g) => generate(g),
        Command::Analyze(a) => run_analyze(a),
        Command::Surrogate(a) => run_surrogate(a),
        Command::Compare(a) => run_compare(a),
        Command::Oracle(o) => run_oracle(o),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
