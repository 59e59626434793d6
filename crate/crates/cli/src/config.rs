//! Command-line flags, `key = value` config files, and their resolution into
//! a validated [`RunConfig`].

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use finsler_core::{ObjectId, VerifyOptions};
use finsler_symbolic::Coordinates;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Format as ValueEnum>::from_str(s, true).map_err(|_| CliError::Config(format!("unknown format `{s}`")))
    }
}

/// Compute Finsler objects from a metric function `F²`.
#[derive(Clone, Debug, Default, Parser)]
#[command(name = "finsler", version, about)]
pub struct Args {
    /// Dimension of the base manifold.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated base coordinate names (default x1,..,xn).
    #[arg(long)]
    pub coords: Option<String>,
    /// Comma-separated fiber coordinate names (default y1,..,yn).
    #[arg(long)]
    pub fibers: Option<String>,
    /// The metric function F².
    #[arg(long, conflicts_with = "given_f")]
    pub metric_function: Option<String>,
    /// F itself; it is squared before any computation.
    #[arg(long)]
    pub given_f: Option<String>,
    /// Domain constraints such as "x3!=0,y2>0".
    #[arg(long)]
    pub constraints: Option<String>,
    /// Comma-separated object ids, e.g. "g,C,P:cartan,hcov:g:chern".
    #[arg(long)]
    pub objects: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// List every nonzero component instead of one per symmetry orbit.
    #[arg(long)]
    pub full_table: bool,
    /// Display Cartan S and P through their lowered forms.
    #[arg(long)]
    pub lower_simplify: bool,
    /// Verify against the numeric oracle: "points=8,tol=1e-9,seed=42,box=1:2".
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub check: Option<String>,
    /// File of `key = value` lines using the flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Args {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Args, CliError> {
        let mut args = Args::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |message: String| CliError::ConfigLine { line: n + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| fail(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim().replace('_', "-");
            let value = unquote(value.trim()).to_string();
            let flag = |v: &str| match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(fail(format!("{key}: expected a boolean, got `{other}`"))),
            };
            match key.as_str() {
                "dim" => args.dim = Some(value.parse().map_err(|_| fail(format!("dim: not a number: `{value}`")))?),
                "coords" => args.coords = Some(value),
                "fibers" => args.fibers = Some(value),
                "metric-function" => args.metric_function = Some(value),
                "given-f" => args.given_f = Some(value),
                "constraints" => args.constraints = Some(value),
                "objects" => args.objects = Some(value),
                "format" => args.format = Some(value.parse().map_err(|e: CliError| fail(e.to_string()))?),
                "full-table" => args.full_table = flag(&value)?,
                "lower-simplify" => args.lower_simplify = flag(&value)?,
                "check" => args.check = Some(value),
                other => return Err(fail(format!("unknown key `{other}`"))),
            }
        }
        Ok(args)
    }

    /// Flags given on the command line take precedence over `file`.
    pub fn over(self, file: Args) -> Args {
        // a metric given on the command line replaces either form from the file
        let cli_metric = self.metric_function.is_some() || self.given_f.is_some();
        Args {
            dim: self.dim.or(file.dim),
            coords: self.coords.or(file.coords),
            fibers: self.fibers.or(file.fibers),
            metric_function: if cli_metric { self.metric_function } else { file.metric_function },
            given_f: if cli_metric { self.given_f } else { file.given_f },
            constraints: self.constraints.or(file.constraints),
            objects: self.objects.or(file.objects),
            format: self.format.or(file.format),
            full_table: self.full_table || file.full_table,
            lower_simplify: self.lower_simplify || file.lower_simplify,
            check: self.check.or(file.check),
            config: self.config,
        }
    }
}

fn unquote(s: &str) -> &str {
    s.strip_prefix('"').and_then(|r| r.strip_suffix('"')).unwrap_or(s)
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricSource {
    /// `F²` as written.
    FSquared(String),
    /// `F`, squared before canonicalization.
    F(String),
}

/// A validated run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub coords: Coordinates,
    pub metric: MetricSource,
    pub constraints: Option<String>,
    pub objects: Vec<ObjectId>,
    pub format: Format,
    pub full_table: bool,
    pub lower_simplify: bool,
    pub check: Option<VerifyOptions>,
}

fn names(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

impl RunConfig {
    /// Validates `args`; `seed` (from `FINSLER_SEED`) replaces any seed given in `--check`.
    pub fn resolve(args: Args, seed: Option<u64>) -> Result<RunConfig, CliError> {
        let base = args.coords.as_deref().map(names);
        let fiber = args.fibers.as_deref().map(names);
        let dim = args
            .dim
            .or_else(|| base.as_ref().map(Vec::len))
            .or_else(|| fiber.as_ref().map(Vec::len))
            .ok_or_else(|| CliError::Config("--dim is required unless --coords is given".into()))?;
        let standard = Coordinates::standard(dim);
        let base = base.unwrap_or_else(|| standard.base_names().to_vec());
        let fiber = fiber.unwrap_or_else(|| standard.fiber_names().to_vec());
        for (what, list) in [("--coords", &base), ("--fibers", &fiber)] {
            if list.len() != dim {
                return Err(CliError::Config(format!("{what} lists {} names for dimension {dim}", list.len())));
            }
        }
        let coords = Coordinates::new(&base, &fiber)?;
        let metric = match (args.metric_function, args.given_f) {
            (Some(f2), None) => MetricSource::FSquared(f2),
            (None, Some(f)) => MetricSource::F(f),
            (Some(_), Some(_)) => return Err(CliError::Config("give either --metric-function or --given-f, not both".into())),
            (None, None) => return Err(CliError::Config("one of --metric-function or --given-f is required".into())),
        };
        let objects = names(args.objects.as_deref().unwrap_or(""))
            .iter()
            .map(|s| s.parse::<ObjectId>())
            .collect::<Result<Vec<_>, _>>()?;
        if objects.is_empty() {
            return Err(CliError::Config("--objects lists nothing to compute".into()));
        }
        let check = args.check.as_deref().map(|spec| parse_check(spec, seed)).transpose()?;
        Ok(RunConfig {
            coords,
            metric,
            constraints: args.constraints,
            objects,
            format: args.format.unwrap_or_default(),
            full_table: args.full_table,
            lower_simplify: args.lower_simplify,
            check,
        })
    }
}

/// Parses `points=<n>,tol=<t>,seed=<s>,box=<lo>:<hi>`; omitted keys keep their defaults.
pub fn parse_check(spec: &str, seed: Option<u64>) -> Result<VerifyOptions, CliError> {
    let mut opts = VerifyOptions::default();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || CliError::Config(format!("--check: cannot read `{item}`"));
        let (key, value) = item.split_once('=').ok_or_else(bad)?;
        match key.trim() {
            "points" => opts.points = value.trim().parse().map_err(|_| bad())?,
            "tol" => opts.tol = value.trim().parse().map_err(|_| bad())?,
            "seed" => opts.seed = value.trim().parse().map_err(|_| bad())?,
            "box" => {
                let (lo, hi) = value.split_once(':').ok_or_else(bad)?;
                opts.lo = lo.trim().parse().map_err(|_| bad())?;
                opts.hi = hi.trim().parse().map_err(|_| bad())?;
            }
            _ => return Err(bad()),
        }
    }
    if opts.points == 0 || !(opts.tol > 0.0) || !(opts.lo < opts.hi) {
        return Err(CliError::Config(format!("--check: need points ≥ 1, tol > 0 and lo < hi in `{spec}`")));
    }
    if let Some(s) = seed {
        opts.seed = s;
    }
    Ok(opts)
}
