//! Command-line front end: channel reports, channel-value computations,
//! network bounds, the advantage-parameter sweep, and the verification
//! suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 missing measure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{self, ChannelKind};
use crate::emax;
use crate::error::{Error, Result};
use crate::network::{self, Cut, CutBound, MeasureCache, MinCutMethod, NetworkFile, WeightPolicy};
use crate::verify;

#[derive(Parser)]
#[command(name = "qnetbound", version, about = "Entanglement-based upper bounds for quantum networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    #[value(name = "amplitude_damping")]
    AmplitudeDamping,
    #[value(name = "dephasing")]
    Dephasing,
    #[value(name = "erasure")]
    Erasure,
    #[value(name = "depolarizing")]
    Depolarizing,
}

impl From<KindArg> for ChannelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::AmplitudeDamping => ChannelKind::AmplitudeDamping,
            KindArg::Dephasing => ChannelKind::Dephasing,
            KindArg::Erasure => ChannelKind::Erasure,
            KindArg::Depolarizing => ChannelKind::Depolarizing,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Sdp,
    Reduced,
    Closed,
}

#[derive(Subcommand)]
pub enum Command {
    /// Report every available measure of one channel
    Channel {
        #[arg(long)]
        kind: KindArg,
        #[arg(long)]
        param: f64,
    },
    /// Max-relative entropy of entanglement of one channel
    Emax {
        #[arg(long)]
        kind: KindArg,
        #[arg(long)]
        param: f64,
        #[arg(long, value_enum, default_value = "sdp")]
        method: MethodArg,
    },
    /// Cut bounds for a network file
    Network {
        #[arg(long)]
        file: PathBuf,
        /// Override the error threshold from the file
        #[arg(long)]
        epsilon: Option<f64>,
        /// Report only the optimal cut
        #[arg(long = "min-cut")]
        min_cut: bool,
        /// Force exhaustive cut enumeration
        #[arg(long, conflicts_with = "maxflow")]
        exhaustive: bool,
        /// Force the max-flow search
        #[arg(long)]
        maxflow: bool,
    },
    /// Advantage-parameter sweep over (x, lambda), one CSV row per grid point
    Sweep {
        /// Dephasing channel counts, comma separated
        #[arg(long, value_delimiter = ',', default_value = "1,5,10,50")]
        k: Vec<u64>,
        /// Grid points per axis, endpoints included
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Output path; stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
        /// Re-verify a 5x5 subgrid against the solver
        #[arg(long = "sdp-check")]
        sdp_check: bool,
    },
    /// Run the verification suite; exits nonzero on any failure
    Verify,
}

/// Parses the process arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command, &mut std::io::stdout()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Maps failures onto the exit-code contract.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::MissingMeasure { .. } => 3,
        Error::Parse(_)
        | Error::InvalidNetwork(_)
        | Error::Domain(..)
        | Error::DimensionMismatch(_)
        | Error::UnsupportedDims { .. }
        | Error::UnsupportedKind(_)
        | Error::TooLarge { .. }
        | Error::Io(_) => 2,
        _ => 1,
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Channel { kind, param } => cmd_channel(kind.into(), param, out),
        Command::Emax { kind, param, method } => cmd_emax(kind.into(), param, method, out),
        Command::Network { file, epsilon, min_cut, exhaustive, maxflow } => {
            cmd_network(&file, epsilon, min_cut, exhaustive, maxflow, out)
        }
        Command::Sweep { k, grid, output, sdp_check } => {
            cmd_sweep(&SweepSpec { k_values: k, grid_points: grid, output_path: output }, sdp_check, out)
        }
        Command::Verify => cmd_verify(out),
    }
}

fn cmd_channel(kind: ChannelKind, param: f64, out: &mut dyn Write) -> Result<i32> {
    let ch = channels::make_channel(kind, param)?;
    let m = channels::closed_form_measures(kind, param)?;
    writeln!(out, "kind={}", kind.name())?;
    writeln!(out, "param={param:.6}")?;
    writeln!(out, "choi_simulable={}", ch.choi_simulable)?;
    if let Some((v, _)) = m.e_r {
        writeln!(out, "e_r={v:.6}")?;
    }
    if let Some(v) = m.e_sq_ub {
        writeln!(out, "e_sq_ub={v:.6}")?;
    }
    if let Some((v, _)) = m.e_max {
        writeln!(out, "e_max(closed)={v:.6}")?;
    }
    let sdp = emax::emax_sigma_sdp(&ch)?;
    writeln!(out, "e_max(sdp)={:.6}", sdp.value)?;
    Ok(0)
}

fn cmd_emax(kind: ChannelKind, param: f64, method: MethodArg, out: &mut dyn Write) -> Result<i32> {
    let ch = channels::make_channel(kind, param)?;
    let (value, label) = match method {
        MethodArg::Sdp => (emax::emax_sigma_sdp(&ch)?.value, "sdp"),
        MethodArg::Reduced => (emax::emax_reduced_auto(&ch)?.value, "reduced"),
        MethodArg::Closed => {
            let m = channels::closed_form_measures(kind, param)?;
            let v = m.e_max.map(|(v, _)| v).ok_or_else(|| Error::MissingMeasure {
                edge: format!("channel {}({param})", kind.name()),
                measure: "e_max closed form".into(),
            })?;
            (v, "closed")
        }
    };
    writeln!(out, "kind={}", kind.name())?;
    writeln!(out, "param={param:.6}")?;
    writeln!(out, "method={label}")?;
    writeln!(out, "e_max={value:.6}")?;
    Ok(0)
}

/// Extended-real JSON value: a number, or the string "inf".
fn ext(v: f64) -> serde_json::Value {
    match serde_json::Number::from_f64(v) {
        Some(n) => serde_json::Value::Number(n),
        None => serde_json::Value::String("inf".into()),
    }
}

#[derive(Serialize)]
struct CutJson {
    cut: Vec<String>,
    crossing_edges: Vec<usize>,
    e_versatile: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_emax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    ebit_versatile: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    ebit_emax: Option<serde_json::Value>,
}

impl CutJson {
    fn from_bound(b: &CutBound) -> Self {
        Self {
            cut: b.cut.names().map(String::from).collect(),
            crossing_edges: b.crossing_edges.clone(),
            e_versatile: b.e_versatile,
            e_emax: b.e_emax,
            mu: b.mu,
            ebit_versatile: ext(b.ebit_versatile.expect("cut evaluated with an error threshold")),
            ebit_emax: b.ebit_emax.map(ext),
        }
    }
}

#[derive(Serialize)]
struct NetworkJson {
    epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_cut: Option<CutJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cuts: Option<Vec<CutJson>>,
}

const LIST_ALL_CUTS_MAX: usize = 12;

fn cmd_network(
    file: &PathBuf,
    epsilon: Option<f64>,
    min_cut: bool,
    exhaustive: bool,
    maxflow: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let text = std::fs::read_to_string(file)?;
    let (graph, file_eps) = NetworkFile::from_json(&text)?.into_graph()?;
    let eps = epsilon.unwrap_or(file_eps);
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain("epsilon", eps));
    }
    let cache = MeasureCache::new();
    let method = if exhaustive {
        MinCutMethod::Exhaustive
    } else if maxflow {
        MinCutMethod::MaxFlow
    } else {
        MinCutMethod::Auto
    };

    let report = if min_cut {
        let best = network::min_cut(&graph, WeightPolicy::Versatile, method, &cache)?;
        let full = network::evaluate_cut(&graph, &best.cut, Some(eps), &cache)?;
        NetworkJson { epsilon: eps, min_cut: Some(CutJson::from_bound(&full)), cuts: None }
    } else {
        let inter = graph.intermediates();
        if inter.len() > LIST_ALL_CUTS_MAX {
            return Err(Error::TooLarge { nodes: inter.len(), max: LIST_ALL_CUTS_MAX });
        }
        let mut cuts = Vec::with_capacity(1 << inter.len());
        for mask in 0u64..(1u64 << inter.len()) {
            let names = inter
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &n)| n);
            let cut = Cut::new(&graph, names)?;
            let bound = network::evaluate_cut(&graph, &cut, Some(eps), &cache)?;
            cuts.push(CutJson::from_bound(&bound));
        }
        NetworkJson { epsilon: eps, min_cut: None, cuts: Some(cuts) }
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    Ok(0)
}

/// Sweep description: channel counts and the per-axis grid over the unit
/// square, endpoints included, rows emitted lexicographically in
/// `(k, x, lambda)`.
pub struct SweepSpec {
    pub k_values: Vec<u64>,
    pub grid_points: usize,
    pub output_path: Option<PathBuf>,
}

/// Formats with 9 significant digits, plain decimal point, no locale.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent parses");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_trailing_zeros(format!("{v:.decimals$}"))
    } else {
        let (mant, _) = sci.split_once('e').expect("scientific format");
        format!("{}e{exp}", trim_trailing_zeros(mant.to_string()))
    }
}

fn trim_trailing_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Renders the sweep CSV: header `k,x,lambda,mu`, LF line endings.
pub fn render_sweep(spec: &SweepSpec) -> Result<String> {
    if spec.grid_points < 2 {
        return Err(Error::Domain("grid points", spec.grid_points as f64));
    }
    let mut ks = spec.k_values.clone();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || ks[0] == 0 {
        return Err(Error::Domain("k", 0.0));
    }
    let g = spec.grid_points;
    let axis: Vec<f64> = (0..g).map(|i| i as f64 / (g - 1) as f64).collect();

    let mut points = Vec::with_capacity(ks.len() * g * g);
    for &k in &ks {
        for &x in &axis {
            for &l in &axis {
                points.push((k, x, l));
            }
        }
    }
    let rows: Vec<String> = points
        .par_iter()
        .map(|&(k, x, l)| {
            let mu = network::mu_dephasing_damping(k as f64, x, l);
            format!("{k},{},{},{}", fmt_sig9(x), fmt_sig9(l), fmt_sig9(mu))
        })
        .collect();

    let mut csv = String::with_capacity(rows.len() * 24 + 16);
    csv.push_str("k,x,lambda,mu\n");
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    Ok(csv)
}

fn cmd_sweep(spec: &SweepSpec, sdp_check: bool, out: &mut dyn Write) -> Result<i32> {
    let csv = render_sweep(spec)?;
    match &spec.output_path {
        Some(path) => std::fs::write(path, csv.as_bytes())?,
        None => out.write_all(csv.as_bytes())?,
    }

    if sdp_check {
        let mut max_dev: f64 = 0.0;
        let axis = [0.0, 0.25, 0.5, 0.75, 1.0];
        for &l in &axis {
            let ch = channels::make_channel(ChannelKind::AmplitudeDamping, l)?;
            let sdp = emax::emax_sigma_sdp(&ch)?.value;
            max_dev = max_dev.max((sdp - (2.0 - l).log2()).abs());
            let ad = channels::closed_form_measures(ChannelKind::AmplitudeDamping, l)?;
            let ad_sum = ad.e_sq_ub.expect("closed form") + ad.e_max.expect("closed form").0;
            for &x in &axis {
                let deph = channels::closed_form_measures(ChannelKind::Dephasing, x)?;
                let deph_sum = deph.e_sq_ub.expect("closed form") + deph.e_r.expect("closed form").0;
                for &k in &spec.k_values {
                    // near the corner where both cut weights vanish the ratio
                    // is defined by convention only; nothing to compare there
                    if k as f64 * deph_sum + ad_sum < 1e-9 {
                        continue;
                    }
                    let via_sdp = network::mu_dephasing_damping_with(k as f64, x, l, sdp);
                    let closed = network::mu_dephasing_damping(k as f64, x, l);
                    max_dev = max_dev.max((via_sdp - closed).abs());
                }
            }
        }
        if max_dev > 1e-4 {
            eprintln!("sdp check failed: max deviation {max_dev:.2e} exceeds 1e-4");
            return Ok(1);
        }
        eprintln!("sdp check ok: max deviation {max_dev:.2e} over the 5x5 subgrid");
    }
    Ok(0)
}

fn cmd_verify(out: &mut dyn Write) -> Result<i32> {
    let results = verify::run_all();
    write!(out, "{}", verify::render(&results))?;
    Ok(verify::exit_code(&results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(0.5), "0.5");
        assert_eq!(fmt_sig9(1.0), "1");
        assert_eq!(fmt_sig9(0.05), "0.05");
        assert_eq!(fmt_sig9(0.3052766235160333), "0.305276624");
        assert_eq!(fmt_sig9(-0.3052766235160333), "-0.305276624");
        assert_eq!(fmt_sig9(123456789.0), "123456789");
        assert_eq!(fmt_sig9(1e10), "1e10");
        assert_eq!(fmt_sig9(1.25e-7), "1.25e-7");
    }

    #[test]
    fn sweep_row_count_and_order() {
        let spec = SweepSpec { k_values: vec![5, 1], grid_points: 3, output_path: None };
        let csv = render_sweep(&spec).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,x,lambda,mu");
        assert_eq!(lines.len(), 1 + 2 * 3 * 3);
        // lexicographic in (k, x, lambda): k sorted ascending
        assert!(lines[1].starts_with("1,0,0,"));
        assert!(lines[2].starts_with("1,0,0.5,"));
        assert!(lines[10].starts_with("5,0,0,"));
        // identity channels give exactly zero
        assert_eq!(lines[1], "1,0,0,0");
    }

    #[test]
    fn sweep_known_point() {
        let spec = SweepSpec { k_values: vec![1], grid_points: 3, output_path: None };
        let csv = render_sweep(&spec).unwrap();
        // row (1, 0.5, 1.0)
        let row = csv.lines().find(|l| l.starts_with("1,0.5,1,")).expect("row exists");
        let mu: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((mu - 0.3052766235160333).abs() < 1e-8);
    }

    #[test]
    fn sweep_sign_pattern() {
        assert!(network::mu_dephasing_damping(1.0, 0.99, 0.2) < 0.0);
        assert!(network::mu_dephasing_damping(5.0, 0.5, 0.9) > 0.0);
    }

    #[test]
    fn sweep_rejects_degenerate_grid() {
        let spec = SweepSpec { k_values: vec![1], grid_points: 1, output_path: None };
        assert!(render_sweep(&spec).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            exit_code_for(&Error::MissingMeasure { edge: "0".into(), measure: "e_r".into() }),
            3
        );
        assert_eq!(exit_code_for(&Error::Parse("bad".into())), 2);
        assert_eq!(exit_code_for(&Error::Domain("param", 2.0)), 2);
        assert_eq!(exit_code_for(&Error::EigNoConvergence), 1);
    }
}
