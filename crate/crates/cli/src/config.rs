//! Command-line flags, the optional `key=value` file, and their merge into a
//! validated [`RunConfig`]. Flags take precedence over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rhaudit_core::traces::{TraceParams, MAX_DIGITS, MIN_DIGITS};

use crate::record::Format;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "rhaudit", version, about = "Numerical audit of Laplace, Fresnel, theta and zeta-trace identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Report file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Decimal digits for extended-precision trace sums
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    /// Acceptance band for the hard identities
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Exit with status 3 when any claim is VIOLATED
    #[arg(long, global = true)]
    pub strict_claims: bool,
    /// Write zero instead of wall-clock times, for byte-identical reports
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// `key=value` configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Race,
    Reflection,
    Laplace,
    Fresnel,
    Theta,
    Newton,
    Imj,
    Traces,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hard identity suites
    Verify {
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
    /// Trace, moment and Poisson audits at one point
    Traces(PointArgs),
    /// Functional-equation residual at one point
    Rhfe(PointArgs),
    /// Gram matrix positivity and the adversarial search
    Gram {
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Complete-monotonicity scan of |z|⁻²
    Cm {
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Every audited claim over the default grid
    Ledger {
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Debug, Default, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub im: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Accept points outside the region where the claim is stated
    #[arg(long)]
    pub allow_outside: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Traces,
    Rhfe,
    Gram,
    Cm,
    Ledger,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub suite: Suite,
    pub re: f64,
    pub im: f64,
    pub n_max: usize,
    pub allow_outside: bool,
    pub points: usize,
    pub budget: usize,
    pub order: usize,
    /// Difference step; chosen from the order when absent
    pub step: Option<f64>,
    pub seed: u64,
    pub digits: u32,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub strict_claims: bool,
    pub timing: bool,
}

impl RunConfig {
    pub fn defaults(command: CommandKind) -> Self {
        RunConfig {
            command,
            suite: Suite::All,
            re: 0.75,
            im: -2.0,
            n_max: 3,
            allow_outside: false,
            points: 8,
            budget: 400,
            order: 2,
            step: None,
            seed: 0,
            digits: 60,
            tol: None,
            out: None,
            format: Format::Json,
            strict_claims: false,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if let Some(t) = self.tol {
            if !(t > 0.0 && t < 1.0) {
                return bad(format!("tol must lie in (0, 1), got {t}"));
            }
        }
        if !(MIN_DIGITS..=MAX_DIGITS).contains(&self.digits) {
            return bad(format!("digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {}", self.digits));
        }
        if matches!(self.command, CommandKind::Traces | CommandKind::Rhfe | CommandKind::Ledger) {
            let need = TraceParams::required_digits(self.n_max);
            if self.digits < need {
                return bad(format!("n-max {} needs at least {need} digits, got {}", self.n_max, self.digits));
            }
            if self.n_max > 12 {
                return bad(format!("n-max must be at most 12, got {}", self.n_max));
            }
        }
        if !(self.re.is_finite() && self.im.is_finite()) || self.im == 0.0 {
            return bad(format!("need finite re and nonzero im, got {} {}", self.re, self.im));
        }
        if !(1..=64).contains(&self.points) {
            return bad(format!("points must lie in 1..=64, got {}", self.points));
        }
        if self.budget == 0 {
            return bad("budget must be positive".into());
        }
        if !(1..=4).contains(&self.order) {
            return bad(format!("order must lie in 1..=4, got {}", self.order));
        }
        if let Some(h) = self.step {
            if !(h > 0.0 && h < 1.0) {
                return bad(format!("step must lie in (0, 1), got {h}"));
            }
        }
        Ok(())
    }

    /// Step for the difference scan: large enough that rounding stays far
    /// below the sign band, small enough to fit the default grid.
    pub fn cm_step(&self) -> f64 {
        self.step.unwrap_or(match self.order {
            1 | 2 => 0.01,
            3 => 0.03,
            _ => 0.08,
        })
    }
}

/// Parses a `key=value` file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("line {}: expected key=value, got {raw:?}", no + 1)));
        };
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn parsed<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Config(format!("bad value {v:?} for {key}")))
}

fn apply_file(cfg: &mut RunConfig, map: &BTreeMap<String, String>) -> Result<(), CliError> {
    for (k, v) in map {
        match k.as_str() {
            "out" => cfg.out = Some(PathBuf::from(v)),
            "format" => {
                cfg.format = Format::from_str(v, true).map_err(|_| CliError::Config(format!("bad format {v:?}")))?
            }
            "seed" => cfg.seed = parsed(k, v)?,
            "digits" => cfg.digits = parsed(k, v)?,
            "tol" => cfg.tol = Some(parsed(k, v)?),
            "strict-claims" => cfg.strict_claims = parsed(k, v)?,
            "no-timing" => cfg.timing = !parsed::<bool>(k, v)?,
            "suite" => cfg.suite = Suite::from_str(v, true).map_err(|_| CliError::Config(format!("bad suite {v:?}")))?,
            "re" => cfg.re = parsed(k, v)?,
            "im" => cfg.im = parsed(k, v)?,
            "n-max" => cfg.n_max = parsed(k, v)?,
            "allow-outside" => cfg.allow_outside = parsed(k, v)?,
            "points" => cfg.points = parsed(k, v)?,
            "budget" => cfg.budget = parsed(k, v)?,
            "order" => cfg.order = parsed(k, v)?,
            "step" => cfg.step = Some(parsed(k, v)?),
            other => return Err(CliError::Config(format!("unknown config key {other:?}"))),
        }
    }
    Ok(())
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text)
}

fn apply_point(cfg: &mut RunConfig, p: &PointArgs) {
    if let Some(v) = p.re {
        cfg.re = v;
    }
    if let Some(v) = p.im {
        cfg.im = v;
    }
    if let Some(v) = p.n_max {
        cfg.n_max = v;
    }
    cfg.allow_outside |= p.allow_outside;
}

impl Cli {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let kind = match self.command {
            Command::Verify { .. } => CommandKind::Verify,
            Command::Traces(_) => CommandKind::Traces,
            Command::Rhfe(_) => CommandKind::Rhfe,
            Command::Gram { .. } => CommandKind::Gram,
            Command::Cm { .. } => CommandKind::Cm,
            Command::Ledger { .. } => CommandKind::Ledger,
        };
        let mut cfg = RunConfig::defaults(kind);
        if let Some(path) = &self.global.config {
            apply_file(&mut cfg, &read_config(path)?)?;
        }
        let g = &self.global;
        if let Some(o) = &g.out {
            cfg.out = Some(o.clone());
        }
        if let Some(f) = g.format {
            cfg.format = f;
        }
        if let Some(s) = g.seed {
            cfg.seed = s;
        }
        if let Some(d) = g.digits {
            cfg.digits = d;
        }
        if let Some(t) = g.tol {
            cfg.tol = Some(t);
        }
        cfg.strict_claims |= g.strict_claims;
        if g.no_timing {
            cfg.timing = false;
        }
        match &self.command {
            Command::Verify { suite } => {
                if let Some(s) = suite {
                    cfg.suite = *s;
                }
            }
            Command::Traces(p) | Command::Rhfe(p) => apply_point(&mut cfg, p),
            Command::Gram { points, budget } => {
                cfg.points = points.unwrap_or(cfg.points);
                cfg.budget = budget.unwrap_or(cfg.budget);
            }
            Command::Cm { order, step } => {
                cfg.order = order.unwrap_or(cfg.order);
                cfg.step = step.or(cfg.step);
            }
            Command::Ledger { n_max } => cfg.n_max = n_max.unwrap_or(cfg.n_max),
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("rhaudit").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn file_parsing() {
        let m = parse_config_file("# header\ndigits = 80\nstrict_claims=true # trailing\n\n").unwrap();
        assert_eq!(m["digits"], "80");
        assert_eq!(m["strict-claims"], "true");
        assert!(parse_config_file("digits 80").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "digits=80\nseed=7\nim=-4\n").unwrap();
        let p = path.to_str().unwrap();
        let cfg = cli(&["rhfe", "--config", p, "--digits", "50", "--re", "0.6"]).resolve().unwrap();
        assert_eq!((cfg.digits, cfg.seed, cfg.re, cfg.im), (50, 7, 0.6, -4.0));
        std::fs::write(&path, "colour=blue\n").unwrap();
        assert!(matches!(cli(&["verify", "--config", p]).resolve(), Err(CliError::Config(_))));
    }

    #[test]
    fn validation() {
        assert!(cli(&["verify", "--tol", "1e-30"]).resolve().is_ok());
        assert!(cli(&["verify", "--tol", "2"]).resolve().is_err());
        assert!(cli(&["traces", "--digits", "20"]).resolve().is_err());
        assert!(cli(&["rhfe", "--im", "-2", "--re", "0.75"]).resolve().is_ok());
    }
}
