//! `dke`: experiments with distance kernel embeddings of metric measure spaces.

mod config;
mod drivers;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use dke_core::mmspace::MetricMode;
use dke_core::AbStandardness;
use serde_json::json;

use crate::config::{parse_ks, parse_selector, ConfigError, ExperimentConfig, SelectorDefaults};
use crate::drivers::{KindSelection, NamedSpace, TransformSettings};
use crate::output::Output;

const DEFAULT_BOUNDS_KS: [usize; 7] = [2, 5, 10, 20, 50, 100, 200];

/// Spaces are selected as `sphere:2`, `sphere:3`, `torus`, `torus:R:r`,
/// `lens:p:q` or `file:PATH`; sampled spaces take an optional `@seed` suffix.
#[derive(Parser, Debug)]
#[command(name = "dke", version, about)]
struct Cli {
    /// Sampling seed for selectors without `@seed`, and the default direction seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample size.
    #[arg(long, global = true, default_value_t = 500)]
    n: usize,
    /// Embedding dimensions, e.g. `1-20,30`. Single-k commands use the first entry.
    #[arg(long, global = true)]
    k: Option<String>,
    /// Metric on sampled spheres: geodesic or chordal.
    #[arg(long, global = true, default_value = "geodesic")]
    metric: String,
    /// Rips scale for the intrinsic complex.
    #[arg(long, global = true)]
    rips_scale: Option<f64>,
    /// Number of sweep directions.
    #[arg(long, global = true, default_value_t = 64)]
    dirs: usize,
    /// Output directory [default: dke-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write sampled spaces as CSV and JSON.
    Sample {
        #[arg(required = true)]
        spaces: Vec<String>,
    },
    /// Normalized eigenvalues of one or more spaces.
    Spectrum {
        #[arg(required = true)]
        spaces: Vec<String>,
        /// Eigenvalues kept per space.
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Embedding coordinates, error summary and histograms [default k: 10].
    Embed {
        space: String,
        #[arg(long, default_value_t = 30)]
        bins: usize,
        /// 1-based eigenfunction indices to histogram.
        #[arg(long, value_delimiter = ',', default_value = "10,20")]
        eigenfunctions: Vec<usize>,
    },
    /// Pairwise Hausdorff distances between embeddings per k [default k: 1-20].
    Hausdorff {
        #[arg(num_args = 2.., required = true)]
        spaces: Vec<String>,
    },
    /// Measured A, B and their analytic bounds per k [default k: 2,5,10,20,50,100,200 up to n].
    Bounds {
        space: String,
        /// Standardness triple `a,b,r`; estimated from the space when absent.
        #[arg(long)]
        ab: Option<String>,
    },
    /// Persistence and Euler transforms; needs --rips-scale [default k: 5].
    Transform {
        space: String,
        #[arg(long, value_enum, default_value = "all")]
        kind: KindSelection,
        /// Rips scale on the embedded points [default: --rips-scale].
        #[arg(long)]
        embedded_scale: Option<f64>,
        #[arg(long, default_value_t = 2)]
        maxdim: usize,
        /// Direction seed [default: --seed].
        #[arg(long)]
        dir_seed: Option<u64>,
    },
    /// Distances and bounds between two spaces; transforms too with --rips-scale [default k: 4].
    Compare {
        left: String,
        right: String,
        #[arg(long, default_value_t = 2)]
        maxdim: usize,
        #[arg(long)]
        dir_seed: Option<u64>,
    },
    /// Run every section of a JSON experiment configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Directory-safe form of a space name.
fn slug(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect()
}

struct Flags {
    defaults: SelectorDefaults,
    ks: Option<Vec<usize>>,
}

impl Flags {
    fn spaces(&self, selectors: &[String]) -> Result<Vec<NamedSpace>, ConfigError> {
        selectors.iter().map(|s| parse_selector(s, &self.defaults)).collect()
    }

    fn single_k(&self, default: usize) -> usize {
        self.ks.as_ref().and_then(|k| k.first().copied()).unwrap_or(default)
    }
}

fn parse_ab(text: &str) -> Result<AbStandardness> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ConfigError(format!("--ab {text}: expected a,b,r")))?;
    match parts.as_slice() {
        [a, b, r] => AbStandardness::new(*a, *b, *r).map_err(|e| ConfigError(format!("--ab {text}: {e}")).into()),
        _ => Err(ConfigError(format!("--ab {text}: expected a,b,r")).into()),
    }
}

/// Runs the command and returns the exit code for a completed run.
fn run(cli: Cli) -> Result<u8> {
    let metric: MetricMode = cli
        .metric
        .parse()
        .map_err(|_| ConfigError(format!("--metric {}: expected geodesic or chordal", cli.metric)))?;
    let ks = cli.k.as_deref().map(parse_ks).transpose()?;
    let cx = Flags { defaults: SelectorDefaults { n: cli.n, seed: cli.seed, metric }, ks };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let root =
        |cfg: Option<&Path>| cli.out.clone().or_else(|| cfg.map(Path::to_path_buf)).unwrap_or_else(|| "dke-out".into());

    if let Command::Run { config } = &cli.command {
        let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
        let cfg = ExperimentConfig::parse(&text)?;
        let mut out = Output::create(&root(cfg.out.as_deref()))?;
        let code = run_config(&mut out, &cfg)?;
        out.finish("run", json!({ "args": args, "config": cfg }))?;
        return Ok(code);
    }

    let mut out = Output::create(&root(None))?;
    let mut code = 0;
    let (name, settings) = match &cli.command {
        Command::Sample { spaces } => {
            let spaces = cx.spaces(spaces)?;
            let single = spaces.len() == 1;
            for s in &spaces {
                let dir = if single { String::new() } else { slug(&s.name) };
                drivers::sample(&mut out, &dir, s)?;
            }
            ("sample", json!({ "spaces": spaces }))
        }
        Command::Spectrum { spaces, count } => {
            let spaces = cx.spaces(spaces)?;
            drivers::spectrum(&mut out, "", &spaces, *count)?;
            ("spectrum", json!({ "spaces": spaces, "count": count }))
        }
        Command::Embed { space, bins, eigenfunctions } => {
            let s = parse_selector(space, &cx.defaults)?;
            let k = cx.single_k(10);
            drivers::embedding(&mut out, "", &s, k, *bins, eigenfunctions)?;
            ("embed", json!({ "space": s, "k": k, "bins": bins, "eigenfunctions": eigenfunctions }))
        }
        Command::Hausdorff { spaces } => {
            let spaces = cx.spaces(spaces)?;
            let ks = cx.ks.clone().unwrap_or_else(|| (1..=20).collect());
            drivers::hausdorff(&mut out, "", &spaces, &ks)?;
            ("hausdorff", json!({ "spaces": spaces, "ks": ks }))
        }
        Command::Bounds { space, ab } => {
            let s = parse_selector(space, &cx.defaults)?;
            let ab = ab.as_deref().map(parse_ab).transpose()?;
            let ks = cx.ks.clone().unwrap_or_else(|| DEFAULT_BOUNDS_KS.into_iter().filter(|&k| k <= cli.n).collect());
            drivers::bounds(&mut out, "", &s, &ks, ab)?;
            ("bounds", json!({ "space": s, "ks": ks, "ab": ab }))
        }
        Command::Transform { space, kind, embedded_scale, maxdim, dir_seed } => {
            let s = parse_selector(space, &cx.defaults)?;
            let rips_scale = cli.rips_scale.ok_or_else(|| ConfigError("transform needs --rips-scale".into()))?;
            let t = TransformSettings {
                k: cx.single_k(5),
                rips_scale,
                embedded_scale: *embedded_scale,
                dirs: cli.dirs,
                direction_seed: dir_seed.unwrap_or(cli.seed),
                maxdim: *maxdim,
                kinds: kind.kinds(),
            };
            drivers::transform(&mut out, "", &s, &t)?;
            ("transform", json!({ "space": s, "transform": t }))
        }
        Command::Compare { left, right, maxdim, dir_seed } => {
            let (x, y) = (parse_selector(left, &cx.defaults)?, parse_selector(right, &cx.defaults)?);
            let k = cx.single_k(4);
            let t = cli.rips_scale.map(|rips_scale| TransformSettings {
                k,
                rips_scale,
                embedded_scale: None,
                dirs: cli.dirs,
                direction_seed: dir_seed.unwrap_or(cli.seed),
                maxdim: *maxdim,
                kinds: Vec::new(),
            });
            let report = drivers::compare(&mut out, "", &x, &y, k, t.as_ref())?;
            code = report_violations(&report);
            ("compare", json!({ "left": x, "right": y, "k": k, "transform": t }))
        }
        Command::Run { .. } => unreachable!("handled above"),
    };
    out.finish(name, json!({ "args": args, "settings": settings }))?;
    Ok(code)
}

fn report_violations(report: &drivers::CompareReport) -> u8 {
    let v = report.violations();
    for msg in &v {
        eprintln!("dke: {} vs {}: {msg}", report.left, report.right);
    }
    if v.is_empty() {
        0
    } else {
        3
    }
}

fn run_config(out: &mut Output, cfg: &ExperimentConfig) -> Result<u8> {
    let mut code = 0;
    if let Some(s) = &cfg.sample {
        for sp in cfg.select(&s.spaces) {
            drivers::sample(out, &format!("sample/{}", slug(&sp.name)), &sp)?;
        }
    }
    if let Some(s) = &cfg.spectrum {
        drivers::spectrum(out, "spectrum", &cfg.select(&s.spaces), s.count)?;
    }
    if let Some(s) = &cfg.embed {
        for sp in cfg.select(&s.spaces) {
            drivers::embedding(out, &format!("embed/{}", slug(&sp.name)), &sp, s.k, s.bins, &s.eigenfunctions)?;
        }
    }
    if let Some(s) = &cfg.hausdorff {
        drivers::hausdorff(out, "hausdorff", &cfg.select(&s.spaces), &s.ks)?;
    }
    if let Some(s) = &cfg.bounds {
        let ab = s.standardness()?;
        for sp in cfg.select(&s.spaces) {
            drivers::bounds(out, &format!("bounds/{}", slug(&sp.name)), &sp, &s.ks, ab)?;
        }
    }
    if let Some(s) = &cfg.transform {
        let t = s.settings();
        for sp in cfg.select(&s.spaces) {
            drivers::transform(out, &format!("transform/{}", slug(&sp.name)), &sp, &t)?;
        }
    }
    if let Some(s) = &cfg.compare {
        let t = s.transform_settings();
        for [a, b] in &s.pairs {
            let dir = format!("compare/{}__{}", slug(a), slug(b));
            let report = drivers::compare(out, &dir, cfg.space(a), cfg.space(b), s.k, t.as_ref())?;
            code = code.max(report_violations(&report));
        }
    }
    Ok(code)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(core) = e.downcast_ref::<dke_core::Error>() {
        return match core {
            dke_core::Error::Hypothesis { .. } => 3,
            dke_core::Error::EigenNonConvergence { .. } => 4,
            _ => 2,
        };
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("dke: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
