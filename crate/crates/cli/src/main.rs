mod output;
mod verify;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use output::{emit, render, Format, Table};
use rmt_edge::fredholm::{fredholm_minor_density, nystrom_det_checked, KernelSpec};
use rmt_edge::hardedge::{
    a0_moment_closed, a0_moment_quadrature, hard_edge_state, hard_gap_fredholm, hard_to_soft_check, p1_hard, spacing_density_a,
};
use rmt_edge::quadrature::Domain;
use rmt_edge::painleve2::{p2_soft_painleve, tw2_painleve};
use rmt_edge::sampler::{empirical_vs_theory, histogram_csv, SampleBatch, SamplingMethod};
use rmt_edge::softedge::{
    largest_two_correlation_with, CorrelationMode, MomentSummary, SoftEdgeConfig, SpacingLaw, SpacingOptions,
};
use rmt_edge::Parallelism;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

/// Largest-eigenvalue statistics at the soft and hard edges of unitary ensembles.
#[derive(Debug, Parser, Serialize)]
#[command(name = "rmt-edge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Nyström order on semi-infinite soft-edge domains.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Tail tolerance of the spacing law; for tw2, the order-n against order-2n
    /// agreement required of the Fredholm determinant.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Omit the wall-clock timestamp from the metadata.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Route {
    Fredholm,
    Painleve,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Tridiagonal,
    Full,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Tracy–Widom F2(s).
    Tw2 {
        #[arg(long = "s", required = true, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<f64>,
        #[arg(long, value_enum, default_value = "fredholm")]
        route: Route,
    },
    /// Joint distribution F(x, y) of the two largest eigenvalues.
    Joint {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        /// Also report the joint density at x > y.
        #[arg(long)]
        density: bool,
    },
    /// Spacing density A(s) and distribution G(s) on a uniform grid.
    SpacingTable {
        #[arg(long, default_value_t = 8.95)]
        smax: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Chebyshev degree of the spacing law.
        #[arg(long, default_value_t = 64)]
        degree: usize,
        /// Three columns, 8 decimals.
        #[arg(long)]
        paper_format: bool,
    },
    /// Mean, variance, skewness and excess kurtosis of the spacing.
    Moments {
        #[arg(long)]
        paper_format: bool,
    },
    /// Correlation coefficient of the two largest eigenvalues.
    Corr {
        #[arg(long, value_enum, default_value = "fast")]
        mode: Mode,
    },
    /// Joint density of the two largest eigenvalues via Painlevé II.
    P2 {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        x: f64,
        /// Compare with the Fredholm minor.
        #[arg(long)]
        check: bool,
    },
    /// Hard-edge variables, gap probability and smallest-eigenvalue density.
    Hardedge {
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long = "s", value_delimiter = ',', default_value = "1,4,10")]
        s: Vec<f64>,
        /// Spacing density A_a(z) at these z (a ∈ {0, 1}).
        #[arg(long, value_delimiter = ',')]
        z: Vec<f64>,
        /// A0 moments, closed form against quadrature.
        #[arg(long)]
        moments: bool,
    },
    /// Hard-to-soft discrepancies along a sequence of a.
    H2sCheck {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        tau: Vec<f64>,
        #[arg(long = "a", value_delimiter = ',', default_value = "64,128,256")]
        a: Vec<u32>,
    },
    /// Monte Carlo spacings of the two largest GUE eigenvalues against G.
    Sample {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 10000)]
        draws: usize,
        #[arg(long, value_enum, default_value = "tridiagonal")]
        method: Method,
        /// Write the histogram CSV here.
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Run the invariant checks; exit 0 iff all pass.
    Verify,
}

fn soft_config(cli: &Cli) -> SoftEdgeConfig {
    cli.order.map(SoftEdgeConfig::with_order).unwrap_or_default()
}

fn spacing_options(cli: &Cli, degree: usize) -> SpacingOptions {
    let mut opts = SpacingOptions {
        degree,
        ..SpacingOptions::default()
    };
    if let Some(tol) = cli.tol {
        opts.tail_tol = tol;
    }
    opts
}

fn metadata(cli: &Cli) -> Map<String, Value> {
    let mut m = match serde_json::to_value(cli) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    m.remove("no_timestamp");
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    if !cli.no_timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        m.insert("timestamp_unix".into(), json!(secs));
    }
    m
}

fn execute(cli: &Cli) -> Result<(Table, bool)> {
    let cfg = soft_config(cli);
    let mut ok = true;
    let table = match &cli.command {
        Command::Tw2 { s, route } => {
            let mut t = Table::new(vec!["s", "fredholm", "painleve"]);
            for &s in s {
                let fredholm = || match cli.tol {
                    Some(tol) => nystrom_det_checked(KernelSpec::Soft, Domain::SemiInfinite { s, scale: cfg.scale }, cfg.order, tol),
                    None => cfg.gap(s),
                };
                let f = matches!(route, Route::Fredholm | Route::Both).then(fredholm).transpose()?;
                let p = matches!(route, Route::Painleve | Route::Both).then(|| tw2_painleve(s)).transpose()?;
                t.push(vec![json!(s), json!(f), json!(p)]);
            }
            t
        }
        Command::Joint { x, y, density } => {
            let mut t = Table::new(vec!["x", "y", "joint_cdf", "joint_density"]);
            let d = if *density { Some(cfg.joint_density(*x, *y)?) } else { None };
            t.push(vec![json!(x), json!(y), json!(cfg.joint_cdf(*x, *y)?), json!(d)]);
            t
        }
        Command::SpacingTable { smax, step, degree, .. } => {
            let law = SpacingLaw::new(&cfg, *smax, &spacing_options(cli, *degree))?;
            let table = law.table(*step)?;
            let mut t = Table::new(vec!["s", "A", "G"]);
            for i in 0..table.len() {
                t.push(vec![json!(table.s[i]), json!(table.density[i]), json!(table.cdf[i])]);
            }
            t.paper = Some(table.to_paper_format());
            t.extra = Some(serde_json::to_value(&table.metadata)?);
            t
        }
        Command::Moments { .. } => {
            let law = SpacingLaw::new(&cfg, 10.0, &spacing_options(cli, 64))?;
            let m = MomentSummary::from_raw(&law.raw_moments(4)?)?;
            let mut t = Table::new(vec!["statistic", "value", "rounded"]);
            let mut paper = String::new();
            for (name, v, digits) in [
                ("mean", m.mean, 8),
                ("variance", m.variance, 8),
                ("skewness", m.skewness, 6),
                ("excess_kurtosis", m.excess_kurtosis, 5),
            ] {
                let r = format!("{v:.digits$}");
                writeln!(paper, "{name:<16}{r}")?;
                t.push(vec![json!(name), json!(v), json!(r)]);
            }
            t.paper = Some(paper);
            t
        }
        Command::Corr { mode } => {
            let mode = match mode {
                Mode::Fast => CorrelationMode::Fast,
                Mode::Full => CorrelationMode::Full,
            };
            let r = largest_two_correlation_with(mode, Parallelism::default())?;
            let mut t = Table::new(vec!["rho", "covariance", "order", "tensor_order"]);
            t.push(vec![json!(r.rho), json!(r.covariance), json!(r.order), json!(r.tensor_order)]);
            t.extra = Some(serde_json::to_value(r)?);
            t
        }
        Command::P2 { t: top, x, check } => {
            let mut t = Table::new(vec!["t", "x", "painleve", "fredholm_minor", "relative_difference"]);
            let p = p2_soft_painleve(*top, *x)?;
            let (m, rel) = if *check {
                let m = fredholm_minor_density(KernelSpec::Soft, *top, top - x, 64, 10.0)?;
                (Some(m), Some(p / m - 1.0))
            } else {
                (None, None)
            };
            t.push(vec![json!(top), json!(x), json!(p), json!(m), json!(rel)]);
            t
        }
        Command::Hardedge { a, s, z, moments } => {
            let mut t = Table::new(vec!["quantity", "a", "s", "nu", "mu", "C", "xi", "q", "p", "bits", "value"]);
            let af = *a as f64;
            for &s in s {
                let r = hard_edge_state(*a, s)?;
                let h = r.state;
                t.push(vec![
                    json!("state"),
                    json!(a),
                    json!(s),
                    json!(h.nu),
                    json!(h.mu),
                    json!(h.c),
                    json!(h.xi),
                    json!(h.q),
                    json!(h.p),
                    json!(r.bits),
                    Value::Null,
                ]);
                for (name, v) in [("gap", hard_gap_fredholm(af, s)?), ("p1", p1_hard(af, s)?)] {
                    let mut row = vec![json!(name), json!(a), json!(s)];
                    row.extend(std::iter::repeat_n(Value::Null, 7));
                    row.push(json!(v));
                    t.push(row);
                }
            }
            for &z in z {
                let mut row = vec![json!("spacing_density"), json!(a), json!(z)];
                row.extend(std::iter::repeat_n(Value::Null, 7));
                row.push(json!(spacing_density_a(*a, z)?));
                t.push(row);
            }
            if *moments {
                for k in 1..=6 {
                    for (name, v) in [("moment_closed", a0_moment_closed(k)?), ("moment_quadrature", a0_moment_quadrature(k)?)] {
                        let mut row = vec![json!(name), json!(0), json!(k)];
                        row.extend(std::iter::repeat_n(Value::Null, 7));
                        row.push(json!(v));
                        t.push(row);
                    }
                }
            }
            t
        }
        Command::H2sCheck { tau, a } => {
            let mut t = Table::new(vec![
                "tau", "a", "s", "delta_nu", "delta_mu", "delta_c", "delta_xi", "bits", "nu_monotone", "c_monotone",
            ]);
            let mut reports = Vec::new();
            for &tau in tau {
                let r = hard_to_soft_check(a, tau)?;
                let (nm, cm) = (r.nu_monotone(), r.c_monotone());
                ok &= nm && cm;
                for row in &r.rows {
                    t.push(vec![
                        json!(tau),
                        json!(row.a),
                        json!(row.s),
                        json!(row.delta_nu),
                        json!(row.delta_mu),
                        json!(row.delta_c),
                        json!(row.delta_xi),
                        json!(row.bits),
                        json!(nm),
                        json!(cm),
                    ]);
                }
                reports.push(r);
            }
            t.extra = Some(serde_json::to_value(reports)?);
            t
        }
        Command::Sample { n, draws, method, histogram } => {
            let method = match method {
                Method::Tridiagonal => SamplingMethod::Tridiagonal,
                Method::Full => SamplingMethod::FullHermitian,
            };
            let batch = SampleBatch::generate(*n, *draws, cli.seed, method, Parallelism::default())?;
            let law = SpacingLaw::new(&cfg, 9.0, &spacing_options(cli, 64))?;
            let report = empirical_vs_theory(&batch, &law.table(0.05)?)?;
            if let Some(path) = histogram {
                emit(&histogram_csv(&report.histogram), Some(path))?;
            }
            let mut t = Table::new(vec!["n", "draws", "seed", "ks_distance", "spacing_mean", "spacing_std_error"]);
            t.push(vec![
                json!(n),
                json!(draws),
                json!(cli.seed),
                json!(report.ks_distance),
                json!(report.spacing_mean),
                json!(report.spacing_std_error),
            ]);
            t.extra = Some(serde_json::to_value(&report)?);
            t
        }
        Command::Verify => {
            let (t, pass) = verify::run(&cfg)?;
            ok &= pass;
            t
        }
    };
    Ok((table, ok))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<rmt_edge::Error>() {
        Some(rmt_edge::Error::InvalidArgument(_)) => 2,
        Some(_) => 3,
        None => 1,
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!(rmt_edge::Error::InvalidArgument("--threads must be positive".into()));
        }
        rmt_edge::parallel::configure_threads(n);
    }
    let paper = matches!(
        cli.command,
        Command::SpacingTable { paper_format: true, .. } | Command::Moments { paper_format: true }
    );
    let format = if paper { Format::PaperTable } else { cli.format };
    if format == Format::PaperTable && !matches!(cli.command, Command::SpacingTable { .. } | Command::Moments { .. }) {
        bail!(rmt_edge::Error::InvalidArgument(
            "paper-table output is only available for spacing-table and moments".into()
        ));
    }
    let meta = metadata(cli);
    let (table, ok) = execute(cli)?;
    if format == Format::PaperTable {
        eprintln!("{}", Value::Object(meta.clone()));
    }
    emit(&render(&table, format, &meta)?, cli.output.as_deref())?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
