//! Writing result bundles as JSON, a set of CSV files, or gnuplot data blocks.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::OutputFormat;
use crate::error::{CliError, Result};
use crate::ingest::{fmt_f64, write_file};
use crate::pipeline::ResultBundle;

pub const JSON_FILE: &str = "results.json";
pub const PLOT_FILE: &str = "plot.dat";

pub fn to_json(bundle: &ResultBundle) -> Result<String> {
    let mut s = serde_json::to_string_pretty(bundle)
        .map_err(|e| CliError::Validation(format!("serializing results: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<ResultBundle> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("reading results: {e}")))
}

/// Writes `bundle` under `out_dir` and returns the files created.
pub fn emit_results(bundle: &ResultBundle, format: OutputFormat, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let files = match format {
        OutputFormat::Json => vec![(JSON_FILE, to_json(bundle)?)],
        OutputFormat::CsvSet => csv_set(bundle),
        OutputFormat::PlotData => vec![(PLOT_FILE, plot_data(bundle))],
    };
    let mut written = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let path = out_dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);
    }
    Ok(written)
}

fn csv_set(bundle: &ResultBundle) -> Vec<(&'static str, String)> {
    let table = &bundle.table;
    let est = &bundle.estimate;
    let qs = est.qs.values();

    let mut fq = String::from("n,q,fq\n");
    for (i, n) in table.scales().values().iter().enumerate() {
        for (j, q) in qs.iter().enumerate() {
            let _ = writeln!(fq, "{n},{},{}", fmt_f64(*q), fmt_f64(table.get(i, j)));
        }
    }

    let mut hurst = String::from("q,h,h_se\n");
    for (j, q) in qs.iter().enumerate() {
        let _ = writeln!(hurst, "{},{},{}", fmt_f64(*q), fmt_f64(est.h[j]), fmt_f64(est.h_se[j]));
    }

    let mut tau = String::from("q,tau,tau_se\n");
    for ((q, t), se) in qs.iter().zip(&est.tau).zip(est.tau_se()) {
        let _ = writeln!(tau, "{},{},{}", fmt_f64(*q), fmt_f64(*t), fmt_f64(se));
    }

    let spec = &bundle.spectrum;
    let mut spectrum = String::from("q,alpha,f\n");
    for ((q, a), f) in spec.qs.iter().zip(&spec.alpha).zip(&spec.f) {
        let _ = writeln!(spectrum, "{},{},{}", fmt_f64(*q), fmt_f64(*a), fmt_f64(*f));
    }

    let mut files = vec![
        ("fluctuations.csv", fq),
        ("hurst.csv", hurst),
        ("tau.csv", tau),
        ("spectrum.csv", spectrum),
    ];
    if let Some(delta) = &bundle.tau_error {
        let mut s = String::from("q,delta_tau\n");
        for (q, d) in qs.iter().zip(delta) {
            let _ = writeln!(s, "{},{}", fmt_f64(*q), fmt_f64(*d));
        }
        files.push(("tau_error.csv", s));
    }
    files
}

/// q values shown in the log-log panel: the grid ends and the point nearest 0.
fn panel_qs(qs: &[f64]) -> Vec<usize> {
    let mut idx = vec![0];
    let mid = (0..qs.len())
        .min_by(|&a, &b| qs[a].abs().total_cmp(&qs[b].abs()))
        .unwrap_or(0);
    idx.push(mid);
    idx.push(qs.len() - 1);
    idx.dedup();
    idx
}

/// Two-column blocks separated by two blank lines, addressable with
/// gnuplot's `index`.
pub fn plot_data(bundle: &ResultBundle) -> String {
    let est = &bundle.estimate;
    let qs = est.qs.values();
    let scales = bundle.table.scales().values();
    let mut blocks: Vec<String> = Vec::new();

    for j in panel_qs(qs) {
        let mut b = format!("# ln F_q(n) vs ln n, q = {}\n", fmt_f64(qs[j]));
        for (i, n) in scales.iter().enumerate() {
            let f = bundle.table.get(i, j);
            let _ = writeln!(b, "{} {}", fmt_f64((*n as f64).ln()), fmt_f64(f.ln()));
        }
        blocks.push(b);
    }

    let mut b = String::from("# tau vs q\n");
    for (q, t) in qs.iter().zip(&est.tau) {
        let _ = writeln!(b, "{} {}", fmt_f64(*q), fmt_f64(*t));
    }
    blocks.push(b);

    if let Some(delta) = &bundle.tau_error {
        let mut b = String::from("# delta tau vs q\n");
        for (q, d) in qs.iter().zip(delta) {
            let _ = writeln!(b, "{} {}", fmt_f64(*q), fmt_f64(*d));
        }
        blocks.push(b);
    }

    let spec = &bundle.spectrum;
    let mut b = String::from("# f vs alpha\n");
    for (a, f) in spec.alpha.iter().zip(&spec.f) {
        let _ = writeln!(b, "{} {}", fmt_f64(*a), fmt_f64(*f));
    }
    blocks.push(b);

    blocks.join("\n\n")
}

/// `0.874(6)`: three decimals, standard error in units of the last digit.
pub fn with_error(value: f64, se: f64) -> String {
    format!("{value:.3}({})", (se * 1000.0).round() as i64)
}

/// Human-readable summary of one bundle.
pub fn summary(bundle: &ResultBundle, shown_qs: &[f64]) -> String {
    let est = &bundle.estimate;
    let cfg = &bundle.provenance.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "input {} {:?}, {:?} {:?}, theta {}, scales {}..{} ({} points)",
        bundle.provenance.input.path.as_deref().unwrap_or("<memory>"),
        bundle.provenance.input.shape,
        cfg.mode,
        cfg.method,
        cfg.theta,
        cfg.n_min.unwrap_or(0),
        cfg.n_max.unwrap_or(0),
        cfg.n_count.unwrap_or(0),
    );
    let _ = writeln!(out, "{:>6}  {:>10}  {:>10}", "q", "h(q)", "tau(q)");
    for &q in shown_qs {
        if let Some(j) = est.qs.position(q) {
            let _ = writeln!(
                out,
                "{:>6}  {:>10}  {:>10.3}",
                format!("{q}"),
                with_error(est.h[j], est.h_se[j]),
                est.tau[j]
            );
        }
    }
    let _ = writeln!(out, "spectrum width {:.3}", bundle.spectrum.width);
    if let Some(total) = crate::pipeline::total_tau_error(bundle) {
        let _ = writeln!(out, "sum |delta tau| {total:.3}");
    }
    out
}
