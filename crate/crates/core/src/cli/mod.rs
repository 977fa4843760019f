//! Command-line surface of the `renyi` binary.
//!
//! Curves are written as CSV (`%.12e`, LF endings), reports as JSON with
//! fields in declaration order. Exit codes: 0 success, 1 hard failure or
//! runtime error, 2 usage error.

mod output;
mod suites;

pub use output::{csv_table, fmt_e12, json};
pub use suites::{
    diffusion_suite, properties_suite, property_battery, run_suite, specfun_suite,
    variational_suite, Suite, DIFFUSION_ALPHAS, IDENTITY_TOLERANCE, PRINTED_THRESHOLD,
    PROPERTY_ALPHAS,
};

use crate::diffusion::threshold_report;
use crate::error::{Error, Result};
use crate::functionals::{entropy_report, DensityField};
use crate::profiles::{AlphaRegime, MaxEntProfile, RadialShape, ZkbProfile};
use crate::report::ConformanceReport;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

/// Samples per figure curve.
pub const FIGURE_SAMPLES: usize = 1001;
/// Smallest accepted `--grid-n`.
pub const MIN_GRID_N: usize = 64;
/// Half-window in scale lengths for heavy-tailed curves.
pub const WINDOW_SCALES: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "renyi",
    version,
    about = "Maximum Rényi entropy profiles and diffusion diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the maximizer with mean mu1 and standard deviation mu2 along the first axis.
    Profile(RunArgs),
    /// Maximizer and source-type solution at --time (figure 1: alpha = 3/4, figure 2: alpha = 2.2).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Porous-medium threshold and the sup-norm crossing.
    Threshold {
        #[arg(long, default_value_t = 1)]
        dim: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy, Fisher information and moments of one maximizer.
    Report(RunArgs),
    /// Run conformance suites; exit 0 iff every hard check passes.
    Verify {
        /// Suites to run (repeat or comma-separate); all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub time: f64,
    /// Samples (profile) or quadrature nodes (report).
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Half-width of the window about mu1; automatic when absent.
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Validated settings for one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub alpha: f64,
    pub dim: u32,
    pub mu1: f64,
    pub mu2: f64,
    pub time: f64,
    pub grid_n: usize,
    pub x_max: Option<f64>,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    fn from_args(
        command: &str,
        a: &RunArgs,
        alpha: f64,
        dim: u32,
        grid_n: usize,
        format: Format,
    ) -> Result<Self> {
        AlphaRegime::new(alpha, dim)?;
        if grid_n < MIN_GRID_N {
            return Err(usage(format!(
                "--grid-n must be at least {MIN_GRID_N}, got {grid_n}"
            )));
        }
        if !(a.mu2 > 0.0
            && a.mu2.is_finite()
            && a.mu1.is_finite()
            && a.time > 0.0
            && a.time.is_finite())
        {
            return Err(usage("need finite --mu1, --mu2 > 0 and --time > 0"));
        }
        if let Some(x) = a.x_max {
            if !(x > 0.0 && x.is_finite()) {
                return Err(usage(format!("--x-max must be positive, got {x}")));
            }
        }
        Ok(Self {
            command: command.into(),
            alpha,
            dim,
            mu1: a.mu1,
            mu2: a.mu2,
            time: a.time,
            grid_n,
            x_max: a.x_max,
            out_path: a.out.clone(),
            format,
            seed: a.seed,
        })
    }
}

fn usage(detail: impl Into<String>) -> Error {
    Error::Domain {
        function: "cli",
        detail: detail.into(),
    }
}

/// Exit status for an error: invalid input is a usage error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AlphaOutOfRange { .. } | Error::Dimension(_) | Error::Domain { .. } => 2,
        _ => 1,
    }
}

/// Output of a command: text to write and the process status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub out_path: Option<PathBuf>,
    pub code: i32,
}

fn half_width(shape: RadialShape) -> f64 {
    match shape {
        RadialShape::Power { curv, .. } if curv < 0.0 => 1.0 / (-curv).sqrt(),
        RadialShape::Power { curv, .. } => WINDOW_SCALES / curv.sqrt(),
        RadialShape::Gaussian { var, .. } => WINDOW_SCALES * var.sqrt(),
    }
}

fn uniform(center: f64, half: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| center - half + 2.0 * half * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Serialize)]
struct Curves<'a> {
    alpha: f64,
    dim: u32,
    time: f64,
    columns: BTreeMap<&'a str, &'a [f64]>,
}

/// Sampled maximizer along the first coordinate axis.
pub fn cmd_profile(cfg: &RunConfig) -> Result<Outcome> {
    let p = MaxEntProfile::shifted(AlphaRegime::new(cfg.alpha, cfg.dim)?, cfg.mu1, cfg.mu2)?;
    let half = cfg.x_max.unwrap_or_else(|| half_width(p.shape()));
    let x = uniform(cfg.mu1, half, cfg.grid_n);
    let f: Vec<f64> = x
        .iter()
        .map(|&x| p.radial_pdf((x - cfg.mu1).abs()))
        .collect();
    let text = match cfg.format {
        Format::Csv => csv_table(&["x", "f_maxent"], &[&x, &f]),
        Format::Json => json(&Curves {
            alpha: cfg.alpha,
            dim: cfg.dim,
            time: cfg.time,
            columns: BTreeMap::from([("x", x.as_slice()), ("f_maxent", f.as_slice())]),
        }),
    };
    Ok(Outcome {
        text,
        out_path: cfg.out_path.clone(),
        code: 0,
    })
}

/// Default order for each figure.
pub fn figure_alpha(which: u8) -> f64 {
    if which == 1 {
        0.75
    } else {
        2.2
    }
}

/// `x, f_maxent, u_zkb` at `cfg.time` on [`FIGURE_SAMPLES`] points. The window
/// is [`WINDOW_SCALES`] scale lengths for heavy tails or the wider support.
pub fn cmd_figure(cfg: &RunConfig) -> Result<Outcome> {
    let regime = AlphaRegime::new(cfg.alpha, cfg.dim)?;
    let f = MaxEntProfile::at_time(regime, cfg.time)?.shape();
    let u = ZkbProfile::new(regime, cfg.time)?.shape();
    let half = cfg
        .x_max
        .unwrap_or_else(|| half_width(f).max(half_width(u)));
    let x = uniform(0.0, half, FIGURE_SAMPLES);
    let fv: Vec<f64> = x.iter().map(|x| f.value(x.abs())).collect();
    let uv: Vec<f64> = x.iter().map(|x| u.value(x.abs())).collect();
    let text = match cfg.format {
        Format::Csv => csv_table(&["x", "f_maxent", "u_zkb"], &[&x, &fv, &uv]),
        Format::Json => json(&Curves {
            alpha: cfg.alpha,
            dim: cfg.dim,
            time: cfg.time,
            columns: BTreeMap::from([
                ("x", x.as_slice()),
                ("f_maxent", fv.as_slice()),
                ("u_zkb", uv.as_slice()),
            ]),
        }),
    };
    Ok(Outcome {
        text,
        out_path: cfg.out_path.clone(),
        code: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdOutput {
    pub d: u32,
    pub alpha_th: Option<f64>,
    pub iterations: u32,
    pub companion_supnorm_root: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Bisection count for the bracket and `tol`.
fn bisection_steps(tol: f64) -> u32 {
    let (lo, hi) = crate::diffusion::THRESHOLD_BRACKET;
    ((hi - lo) / tol).log2().ceil().max(0.0) as u32
}

/// Exit 1 when the bracket holds no root of the constant condition.
pub fn cmd_threshold(dim: u32, tol: f64) -> Result<(ThresholdOutput, i32)> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(usage(format!("--tol must be positive, got {tol}")));
    }
    let r = threshold_report(dim, tol)?;
    let code = if r.constant_crossing.is_some() { 0 } else { 1 };
    Ok((
        ThresholdOutput {
            d: dim,
            alpha_th: r.constant_crossing,
            iterations: bisection_steps(tol),
            companion_supnorm_root: r.supnorm_crossing,
            note: r.note,
        },
        code,
    ))
}

/// Entropy report for the maximizer with `(μ₁, μ₂)`.
pub fn cmd_report(cfg: &RunConfig) -> Result<Outcome> {
    let p = MaxEntProfile::shifted(AlphaRegime::new(cfg.alpha, cfg.dim)?, cfg.mu1, cfg.mu2)?;
    let field = DensityField::from_maxent(&p, cfg.grid_n)?;
    let r = entropy_report(&field, cfg.alpha)?;
    let text = match cfg.format {
        Format::Json => json(&r),
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            let mut row = |k: &str, v: f64| s.push_str(&format!("{k},{}\n", fmt_e12(v)));
            row("h_alpha", r.h_alpha);
            row("s_alpha", r.s_alpha);
            row("n_alpha", r.n_alpha);
            row("i_alpha", r.i_alpha);
            row("g_alpha", r.g_alpha);
            row("sup_norm", r.sup_norm);
            for (k, v) in &r.moments {
                row(&format!("moment_{k}"), *v);
            }
            s
        }
    };
    Ok(Outcome {
        text,
        out_path: cfg.out_path.clone(),
        code: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOutput {
    pub seed: u64,
    pub pass: bool,
    pub hard_failures: Vec<String>,
    pub warnings: Vec<String>,
    pub suites: BTreeMap<&'static str, ConformanceReport>,
}

pub fn cmd_verify(suites: &[Suite], seed: u64) -> Result<VerifyOutput> {
    let mut chosen: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.to_vec()
    };
    chosen.sort();
    chosen.dedup();
    let mut out = VerifyOutput {
        seed,
        pass: true,
        hard_failures: Vec::new(),
        warnings: Vec::new(),
        suites: BTreeMap::new(),
    };
    for s in chosen {
        let r = run_suite(s, seed)?;
        for c in r.hard_failures() {
            out.hard_failures
                .push(format!("{}/{}", s.name(), c.identity_name));
        }
        for c in r.warnings() {
            out.warnings
                .push(format!("{}/{}", s.name(), c.identity_name));
        }
        out.suites.insert(s.name(), r);
    }
    out.pass = out.hard_failures.is_empty();
    Ok(out)
}

fn run_config(
    command: &str,
    a: &RunArgs,
    default_alpha: Option<f64>,
    default_grid: usize,
    default_format: Format,
) -> Result<RunConfig> {
    let alpha = a
        .alpha
        .or(default_alpha)
        .ok_or_else(|| usage("--alpha is required"))?;
    RunConfig::from_args(
        command,
        a,
        alpha,
        a.dim.unwrap_or(1),
        a.grid_n.unwrap_or(default_grid),
        a.format.unwrap_or(default_format),
    )
}

/// Runs a parsed command.
pub fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Profile(a) => cmd_profile(&run_config(
            "profile",
            &a,
            None,
            FIGURE_SAMPLES,
            Format::Csv,
        )?),
        Command::Figure { which, args } => {
            let mut cfg = run_config(
                "figure",
                &args,
                Some(figure_alpha(which)),
                FIGURE_SAMPLES,
                Format::Csv,
            )?;
            cfg.grid_n = FIGURE_SAMPLES;
            cmd_figure(&cfg)
        }
        Command::Threshold { dim, tol, out } => {
            let (t, code) = cmd_threshold(dim, tol)?;
            Ok(Outcome {
                text: json(&t),
                out_path: out,
                code,
            })
        }
        Command::Report(a) => cmd_report(&run_config("report", &a, None, 512, Format::Json)?),
        Command::Verify { suite, seed, out } => {
            let v = cmd_verify(&suite, seed)?;
            let code = if v.pass { 0 } else { 1 };
            Ok(Outcome {
                text: json(&v),
                out_path: out,
                code,
            })
        }
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(o) => {
            let written = match &o.out_path {
                Some(p) => std::fs::write(p, &o.text),
                None => std::io::stdout().write_all(o.text.as_bytes()),
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(alpha: f64) -> RunConfig {
        RunConfig {
            command: "figure".into(),
            alpha,
            dim: 1,
            mu1: 0.0,
            mu2: 1.0,
            time: 1.0,
            grid_n: FIGURE_SAMPLES,
            x_max: None,
            out_path: None,
            format: Format::Csv,
            seed: 42,
        }
    }

    fn columns(text: &str) -> Vec<Vec<f64>> {
        let mut cols = vec![Vec::new(); 3];
        for line in text.lines().skip(1) {
            for (c, v) in cols.iter_mut().zip(line.split(',')) {
                c.push(v.parse::<f64>().unwrap());
            }
        }
        cols
    }

    #[test]
    fn figure_peaks_and_masses() {
        for (which, maxent_higher) in [(1, true), (2, false)] {
            let o = cmd_figure(&cfg(figure_alpha(which))).unwrap();
            assert!(o.text.starts_with("x,f_maxent,u_zkb\n"));
            let c = columns(&o.text);
            assert_eq!(c[0].len(), FIGURE_SAMPLES);
            let dx = c[0][1] - c[0][0];
            for col in &c[1..] {
                assert!(col.iter().all(|&v| v >= 0.0));
                assert!((col.iter().sum::<f64>() * dx - 1.0).abs() < 1e-3);
            }
            let peak = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
            assert_eq!(peak(&c[1]) > peak(&c[2]), maxent_higher);
        }
    }

    #[test]
    fn figure_bytes_deterministic() {
        assert_eq!(
            cmd_figure(&cfg(0.75)).unwrap().text,
            cmd_figure(&cfg(0.75)).unwrap().text
        );
    }

    #[test]
    fn threshold_output() {
        let (t, code) = cmd_threshold(1, 1e-10).unwrap();
        assert_eq!(code, 0);
        assert!(json(&t).starts_with("{\n  \"d\": 1,\n  \"alpha_th\""));
        let (t3, code3) = cmd_threshold(3, 1e-10).unwrap();
        assert!(t3.alpha_th.is_none() && code3 == 1 && t3.companion_supnorm_root.is_some());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(
            main_with_args(["renyi", "verify", "--suite", "nonsense"]),
            2
        );
        assert_eq!(main_with_args(["renyi", "figure", "3"]), 2);
        assert_eq!(main_with_args(["renyi", "profile", "--alpha", "0.2"]), 2);
        assert_eq!(
            main_with_args(["renyi", "profile", "--alpha", "0.8", "--grid-n", "10"]),
            2
        );
    }

    #[test]
    fn window_in_error_text() {
        let e = run_config(
            "profile",
            &Cli::try_parse_from(["renyi", "profile", "--alpha", "0.2"])
                .map(|c| match c.command {
                    Command::Profile(a) => a,
                    _ => unreachable!(),
                })
                .unwrap(),
            None,
            1001,
            Format::Csv,
        )
        .unwrap_err();
        assert!(e.to_string().contains("valid window"));
    }

    #[test]
    fn report_formats() {
        let mut c = cfg(0.8);
        c.grid_n = 256;
        c.format = Format::Csv;
        assert!(cmd_report(&c)
            .unwrap()
            .text
            .starts_with("quantity,value\nh_alpha,"));
        c.format = Format::Json;
        assert!(cmd_report(&c).unwrap().text.contains("\"h_alpha\""));
    }

    #[test]
    fn specfun_suite_selection() {
        let v = cmd_verify(&[Suite::Specfun], 1).unwrap();
        assert_eq!(v.suites.len(), 1);
        assert!(v.pass, "{:?}", v.hard_failures);
    }
}
