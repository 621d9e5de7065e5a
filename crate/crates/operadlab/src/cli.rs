//! The `operadlab` command line.
//!
//! Every command reads JSON from a file argument or standard input and
//! writes JSON (or SVG, or DOT) to standard output or `--out`. Exit status
//! is 0 on success, 1 on a domain error (an error report is written to
//! standard error as JSON), 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::color::Color;
use crate::config_space::{PointConfiguration, Tolerances};
use crate::error::{Error, Result};
use crate::fm_operad::{ChartPoint, ColoredChartPoint};
use crate::homotopy_map::{mu, nu, Bump, CollarParams};
use crate::little_disks::DiskConfiguration;
use crate::random::{
    random_decorated_tree, random_disks, random_points, random_sc, seeded, DEFAULT_MAX_ATTEMPTS,
};
use crate::render::{render_disks, render_sc, RenderOptions};
use crate::suites::{default_cases, run_suite, SUITES};
use crate::swiss_cheese::SCConfiguration;
use crate::trees::{enumerate_trees, face_poset, ColoredTree};

const RENDER_HELP: &str = "\
The unit disk is drawn as the circle inscribed in the square [margin, size - margin]^2, \
where size = min(width, height) and the square is centered in the image. \
The y-axis points up: the point (x, y) is drawn at pixel \
(width/2 + x*s, height/2 - y*s) with s = (size - 2*margin)/2. \
Disk configurations are labeled 1..n. Swiss-cheese configurations also draw \
the real axis; closed disks are labeled 1..n, their mirrors n+1..2n (shaded \
grey), open disks o1..om.";

#[derive(Debug, Parser)]
#[command(
    name = "operadlab",
    version,
    about = "Configuration spaces, little disks, and the map from the Fulton-MacPherson operad"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Tolerance for geometric predicates
    #[arg(long, global = true, env = "OPERADLAB_TOL_GEO", default_value_t = 1e-9)]
    tol_geo: f64,
    /// Tolerance for normal-form constraints
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_norm: f64,
    /// Collar width, overriding the one stored with a chart point
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Seed for random sampling and property suites
    #[arg(long, global = true, env = "OPERADLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form of a point configuration
    Normalize { file: Option<PathBuf> },
    /// Operadic composition A ∘_I B of disk configurations (I is 1-based)
    ComposeDisks { a: PathBuf, i: usize, b: PathBuf },
    /// Swiss-cheese composition: closed (c, B a disk configuration) or open (o, B a Swiss-cheese configuration)
    ComposeSc {
        a: PathBuf,
        #[arg(value_parser = parse_color)]
        color: Color,
        i: usize,
        b: PathBuf,
    },
    /// Reduced trees on N leaves with K internal edges
    EnumerateStrata {
        n: usize,
        k: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Dimension and codimension of the stratum of a (colored) tree
    StratumDim { file: Option<PathBuf> },
    /// Face poset of the compactified configuration space of N points
    Poset {
        n: usize,
        #[arg(long, value_enum, default_value_t = PosetFormat::Json)]
        format: PosetFormat,
    },
    /// Evaluate a chart point
    EvalChart {
        file: Option<PathBuf>,
        /// Contract edges one at a time instead of in one pass
        #[arg(long)]
        staged: bool,
    },
    /// Apply ν to a chart point
    ApplyNu {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = BumpArg::Linear)]
        bump: BumpArg,
    },
    /// Apply μ to a colored chart point
    ApplyMu {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = BumpArg::Linear)]
        bump: BumpArg,
    },
    /// Sample a random object of size N
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        n: usize,
        /// Number of open disks (sc only)
        #[arg(long, default_value_t = 0)]
        open: usize,
    },
    /// Draw a disk or Swiss-cheese configuration as SVG
    #[command(after_long_help = RENDER_HELP)]
    Render {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 400)]
        width: u32,
        #[arg(long, default_value_t = 400)]
        height: u32,
        #[arg(long, default_value_t = 10)]
        margin: u32,
        #[arg(long)]
        no_labels: bool,
        #[arg(long)]
        no_shade: bool,
    },
    /// Run a randomized property suite
    Check {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PosetFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BumpArg {
    Linear,
    Smooth,
}

impl From<BumpArg> for Bump {
    fn from(b: BumpArg) -> Bump {
        match b {
            BumpArg::Linear => Bump::Linear,
            BumpArg::Smooth => Bump::Smooth,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RandomKind {
    Points,
    Disks,
    Sc,
    DecoratedTree,
}

fn parse_color(s: &str) -> std::result::Result<Color, String> {
    match s {
        "c" | "closed" => Ok(Color::Closed),
        "o" | "open" => Ok(Color::Open),
        _ => Err(format!("expected c or o, got '{s}'")),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    global: &'a Global,
}

impl Io<'_> {
    fn read_text(&mut self, file: Option<&PathBuf>) -> Result<String> {
        match file {
            Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
                .map_err(|e| Error::Format(format!("cannot read {}: {e}", p.display()))),
            _ => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Format(format!("cannot read standard input: {e}")))?;
                Ok(s)
            }
        }
    }

    fn read<T: DeserializeOwned>(&mut self, file: Option<&PathBuf>) -> Result<T> {
        Ok(serde_json::from_str(&self.read_text(file)?)?)
    }

    fn tol(&self) -> Tolerances {
        Tolerances {
            geo: self.global.tol_geo,
            norm: self.global.tol_norm,
        }
    }
}

fn json<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

fn one_based(i: usize, what: &str) -> Result<usize> {
    i.checked_sub(1)
        .ok_or_else(|| Error::Parameter(format!("{what} is 1-based, got 0")))
}

fn with_epsilon(cp: ChartPoint, eps: Option<f64>) -> Result<ChartPoint> {
    match eps {
        Some(e) => ChartPoint::new(cp.point().clone(), cp.scales().t.clone(), e),
        None => Ok(cp),
    }
}

/// Output text and whether the command succeeded (a failing suite still
/// prints its report).
fn execute(cmd: &Command, io: &mut Io) -> Result<(String, bool)> {
    let tol = io.tol();
    let g = io.global;
    let text = match cmd {
        Command::Normalize { file } => {
            let c: PointConfiguration = io.read(file.as_ref())?;
            json(&c.normalize()?)?
        }
        Command::ComposeDisks { a, i, b } => {
            let a: DiskConfiguration = io.read(Some(a))?;
            let b: DiskConfiguration = io.read(Some(b))?;
            let d = a.compose(one_based(*i, "slot")?, &b)?;
            d.validate(tol.geo)?;
            json(&d)?
        }
        Command::ComposeSc { a, color, i, b } => {
            let a: SCConfiguration = io.read(Some(a))?;
            let i = one_based(*i, "slot")?;
            let sc = match color {
                Color::Closed => a.compose_closed(i, &io.read::<DiskConfiguration>(Some(b))?)?,
                Color::Open => a.compose_open(i, &io.read::<SCConfiguration>(Some(b))?)?,
            };
            sc.to_disks().validate(tol.geo)?;
            json(&sc)?
        }
        Command::EnumerateStrata { n, k, count_only } => {
            let trees = enumerate_trees(*n, *k)?;
            if *count_only {
                format!("{}\n", trees.len())
            } else {
                json(&trees)?
            }
        }
        Command::StratumDim { file } => {
            let t: ColoredTree = io.read(file.as_ref())?;
            json(&serde_json::json!({
                "dimension": t.stratum_dimension(),
                "codimension": t.internal_edge_count(),
            }))?
        }
        Command::Poset { n, format } => {
            let poset = face_poset(*n)?;
            match format {
                PosetFormat::Json => json(&poset)?,
                PosetFormat::Dot => poset.to_dot(),
            }
        }
        Command::EvalChart { file, staged } => {
            let cp = with_epsilon(io.read(file.as_ref())?, g.epsilon)?;
            let v = if *staged {
                cp.evaluate_staged(&tol)?
            } else {
                cp.evaluate(&tol)?
            };
            json(&v)?
        }
        Command::ApplyNu { file, bump } => {
            let cp = with_epsilon(io.read(file.as_ref())?, g.epsilon)?;
            let params = CollarParams {
                epsilon: g.epsilon.unwrap_or(cp.epsilon()),
                bump: (*bump).into(),
            };
            json(&nu(&cp, &params, &tol)?)?
        }
        Command::ApplyMu { file, bump } => {
            let cp: ColoredChartPoint = io.read(file.as_ref())?;
            let eps = match g.epsilon {
                Some(e) => e,
                None => cp.double()?.epsilon(),
            };
            let params = CollarParams {
                epsilon: eps,
                bump: (*bump).into(),
            };
            json(&mu(&cp, &params, &tol)?)?
        }
        Command::Random { kind, n, open } => {
            let mut rng = seeded(g.seed);
            match kind {
                RandomKind::Points => json(&random_points(&mut rng, *n, DEFAULT_MAX_ATTEMPTS)?)?,
                RandomKind::Disks => json(&random_disks(&mut rng, *n, DEFAULT_MAX_ATTEMPTS)?)?,
                RandomKind::Sc => json(&random_sc(&mut rng, *n, *open, DEFAULT_MAX_ATTEMPTS)?)?,
                RandomKind::DecoratedTree => {
                    json(&random_decorated_tree(&mut rng, *n, DEFAULT_MAX_ATTEMPTS)?)?
                }
            }
        }
        Command::Render {
            file,
            width,
            height,
            margin,
            no_labels,
            no_shade,
        } => {
            let opts = RenderOptions {
                width: *width,
                height: *height,
                margin: *margin,
                labels: !no_labels,
                shade_mirrors: !no_shade,
            };
            let v: Value = io.read(file.as_ref())?;
            if v.get("disks").is_some() {
                render_disks(&serde_json::from_value(v)?, &opts)?
            } else if v.get("closed_upper").is_some() {
                render_sc(&serde_json::from_value(v)?, &opts)?
            } else {
                return Err(Error::Format(
                    "expected a disk configuration (\"disks\") or a Swiss-cheese configuration (\"closed_upper\", \"open\")".into(),
                ));
            }
        }
        Command::Check { suite, cases } => {
            let cases = cases.unwrap_or_else(|| default_cases(suite));
            let report = run_suite(suite, g.seed, cases, &tol)?;
            return Ok((json(&report)?, report.failures.is_empty()));
        }
    };
    Ok((text, true))
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let to_stdout = !e.use_stderr();
            let rendered = e.render().to_string();
            let _ = if to_stdout {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return if to_stdout { 0 } else { 2 };
        }
    };
    let mut io = Io {
        stdin,
        global: &cli.global,
    };
    let outcome = execute(&cli.command, &mut io).and_then(|(text, ok)| {
        match &cli.global.out {
            Some(path) => fs::write(path, &text)
                .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))?,
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Format(format!("cannot write output: {e}")))?,
        }
        Ok(ok)
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let report = serde_json::to_string(&e.report()).unwrap_or_else(|_| e.to_string());
            let _ = writeln!(stderr, "{report}");
            1
        }
    }
}
