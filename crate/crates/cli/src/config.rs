//! Run configuration: TOML file keys and command-line flags share one shape,
//! and flags override the file.

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use ortho_diffeq_core::scalar::parse_rational;
use ortho_diffeq_core::search::SearchProblem;
use ortho_diffeq_core::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Verify,
    Search,
    Identities,
    Emit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StructureArg {
    Monomial,
    Divisible,
}

/// Every setting a run can take. All fields are optional so that a file and
/// the flags can each supply part of it.
#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    pub command: Option<CommandKind>,
    #[arg(skip)]
    pub target: Option<String>,

    /// Exact rational, e.g. `1/2`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Degree range `a..b` (inclusive) or a single degree.
    #[arg(long, global = true)]
    pub n: Option<String>,
    /// Evaluation point, exact rational.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, global = true)]
    pub terms: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub imax: Option<usize>,
    /// Evaluation at `x = +1` or `x = -1`; both when omitted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sign: Option<i32>,

    /// Order of a single unknown block.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Comma-separated block orders `M,N,MN`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum)]
    pub structure: Option<StructureArg>,
    #[arg(long, global = true)]
    pub normalize: Option<bool>,
    #[arg(long, global = true)]
    pub sum_vanishing: Option<bool>,
    #[arg(long, global = true)]
    pub n_train: Option<String>,
    #[arg(long, global = true)]
    pub n_holdout: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Full search problem, only read from a config file.
    #[arg(skip)]
    pub problem: Option<SearchProblem>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// `self` with every field that `top` sets replaced.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(base, top; command, target, alpha, beta, n, x, terms, tol, imax, sign,
            order, orders, structure, normalize, sum_vanishing, n_train, n_holdout,
            format, output, problem)
    }

    pub fn alpha(&self) -> Result<Option<Rational>> {
        rational_field("alpha", &self.alpha)
    }

    pub fn alpha_or(&self, default: Rational) -> Result<Rational> {
        Ok(self.alpha()?.unwrap_or(default))
    }

    pub fn beta(&self) -> Result<Option<Rational>> {
        rational_field("beta", &self.beta)
    }

    pub fn x(&self) -> Result<Option<Rational>> {
        rational_field("x", &self.x)
    }

    pub fn n_range(&self, default: RangeInclusive<usize>) -> Result<RangeInclusive<usize>> {
        self.n.as_deref().map_or(Ok(default), |s| parse_range("n", s))
    }

    pub fn n_train(&self, default: RangeInclusive<usize>) -> Result<Vec<usize>> {
        Ok(self.n_train.as_deref().map_or(Ok(default), |s| parse_range("n-train", s))?.collect())
    }

    pub fn n_holdout(&self, default: RangeInclusive<usize>) -> Result<Vec<usize>> {
        match self.n_holdout.as_deref() {
            Some("none") | Some("") => Ok(Vec::new()),
            Some(s) => Ok(parse_range("n-holdout", s)?.collect()),
            None => Ok(default.collect()),
        }
    }

    pub fn tol(&self) -> Result<f64> {
        let t = self.tol.unwrap_or(1e-8);
        if !(t.is_finite() && t > 0.0) {
            bail!("tol must be a positive number, got {t}");
        }
        Ok(t)
    }

    pub fn terms(&self) -> Result<usize> {
        match self.terms.unwrap_or(200) {
            0 => bail!("terms must be positive"),
            t => Ok(t),
        }
    }

    pub fn signs(&self) -> Result<Vec<i32>> {
        match self.sign {
            None => Ok(vec![1, -1]),
            Some(s @ (1 | -1)) => Ok(vec![s]),
            Some(s) => bail!("sign must be 1 or -1, got {s}"),
        }
    }
}

fn rational_field(name: &str, v: &Option<String>) -> Result<Option<Rational>> {
    v.as_deref()
        .map(|s| parse_rational(s).with_context(|| format!("{name} must be an exact rational such as 1/2")))
        .transpose()
}

/// `a..b` or `a..=b` (both inclusive), or a single `a`.
pub fn parse_range(name: &str, s: &str) -> Result<RangeInclusive<usize>> {
    let s = s.trim();
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .with_context(|| format!("{name}: {t:?} is not a non-negative integer"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a > b {
        bail!("{name}: empty range {s:?}");
    }
    Ok(a..=b)
}
