use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use qes_core::ratfun::rational_to_f64;
use qes_core::ratfun::text::{parse_rational, polynomial_from_strings};
use qes_core::{Builtin, OracleConfig, Rational, RationalFunction};
use serde::Deserialize;

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct JobArgs {
    /// TOML job file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for reports and CSV files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Use a builtin generator instead of one from the config file.
    #[arg(long, global = true, value_name = "NAME")]
    pub builtin: Option<String>,
    /// Builtin parameter as p/q; repeat for several.
    #[arg(
        long = "param",
        global = true,
        value_name = "P/Q",
        allow_hyphen_values = true
    )]
    pub params: Vec<String>,
    /// Energy eps as p/q; must agree with the generator.
    #[arg(long, global = true, value_name = "P/Q")]
    pub epsilon: Option<String>,
    /// Absolute eigenvalue tolerance as p/q.
    #[arg(long, global = true, value_name = "P/Q")]
    pub tolerance: Option<String>,
    /// Richardson-extrapolate eigenvalues from N and 2N-1 points.
    #[arg(long, global = true)]
    pub extrapolate: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub generator: Option<GeneratorSection>,
    pub epsilon: Option<String>,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub grid: GridSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub numerator: Option<Vec<String>>,
    pub denominator: Option<Vec<String>>,
    pub builtin: Option<String>,
    #[serde(default)]
    pub params: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub ladder: Option<Vec<f64>>,
    pub points: Option<usize>,
    pub margin: Option<f64>,
    pub tolerance: Option<String>,
    pub extrapolate: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub half_width: Option<f64>,
    pub points: Option<usize>,
}

impl JobConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

/// A fully resolved job: generator, optional energy, oracle and export grid.
#[derive(Debug, Clone)]
pub struct Job {
    pub label: String,
    pub wplus: RationalFunction,
    pub epsilon: Option<Rational>,
    pub oracle: OracleConfig,
    pub grid_half_width: Option<f64>,
    pub grid_points: usize,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_EXPORT_POINTS: usize = 1201;

fn parse_all(items: &[String]) -> anyhow::Result<Vec<Rational>> {
    items.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

fn builtin_generator(
    name: &str,
    params: &[String],
) -> anyhow::Result<(String, RationalFunction, Option<Rational>)> {
    let b = Builtin::from_name(name, &parse_all(params)?)?;
    let (w, eps) = b.generator()?;
    Ok((b.to_string(), w, eps))
}

impl Job {
    /// Merges the config file (if any) with command-line flags. Flags win.
    pub fn resolve(args: &JobArgs) -> anyhow::Result<Self> {
        let config = match &args.config {
            Some(p) => JobConfig::load(p)?,
            None => JobConfig::default(),
        };
        Self::from_parts(config, args)
    }

    pub fn from_parts(config: JobConfig, args: &JobArgs) -> anyhow::Result<Self> {
        if args.builtin.is_none() && !args.params.is_empty() {
            bail!("--param needs --builtin");
        }
        let (label, wplus, fixed_eps) = match (&config.generator, &args.builtin) {
            (Some(_), Some(_)) => bail!("generator given both in the config file and by --builtin"),
            (None, None) => bail!("no generator: pass --builtin NAME or a [generator] table"),
            (None, Some(name)) => builtin_generator(name, &args.params)?,
            (Some(g), None) => match (&g.builtin, &g.numerator) {
                (Some(_), Some(_)) => bail!("[generator] sets both builtin and numerator"),
                (None, None) => bail!("[generator] needs builtin or numerator"),
                (Some(name), None) => {
                    if g.denominator.is_some() {
                        bail!("[generator] denominator is only valid with numerator");
                    }
                    builtin_generator(name, &g.params)?
                }
                (None, Some(num)) => {
                    if !g.params.is_empty() {
                        bail!("[generator] params are only valid with builtin");
                    }
                    let num = polynomial_from_strings(num)?;
                    let den = match &g.denominator {
                        Some(d) => polynomial_from_strings(d)?,
                        None => qes_core::Polynomial::one(),
                    };
                    let w = RationalFunction::new(num, den).context("generator denominator")?;
                    ("config".to_string(), w, None)
                }
            },
        };
        let user_eps = match args.epsilon.as_ref().or(config.epsilon.as_ref()) {
            Some(s) => Some(parse_rational(s)?),
            None => None,
        };

        let defaults = OracleConfig::default();
        let o = config.oracle;
        let tolerance = match args.tolerance.as_ref().or(o.tolerance.as_ref()) {
            Some(s) => {
                let t = parse_rational(s)?;
                let t = rational_to_f64(&t);
                if t.is_nan() || t <= 0.0 {
                    bail!("tolerance must be positive, got {s}");
                }
                Some(t)
            }
            None => None,
        };
        let oracle = OracleConfig {
            ladder: o.ladder.unwrap_or(defaults.ladder),
            points: o.points.unwrap_or(defaults.points),
            margin: o.margin.unwrap_or(defaults.margin),
            tolerance,
            extrapolate: args.extrapolate || o.extrapolate.unwrap_or(false),
        };
        if let Some(w) = config.grid.half_width {
            if !(w > 0.0 && w.is_finite()) {
                bail!("[grid] half_width must be positive");
            }
        }
        let grid_points = config.grid.points.unwrap_or(DEFAULT_EXPORT_POINTS);
        if grid_points < 2 {
            bail!("[grid] points must be at least 2");
        }
        Ok(Job {
            label,
            wplus,
            epsilon: user_eps.or(fixed_eps),
            oracle,
            grid_half_width: config.grid.half_width,
            grid_points,
            out: args.out.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(builtin: Option<&str>, params: &[&str]) -> JobArgs {
        JobArgs {
            builtin: builtin.map(String::from),
            params: params.iter().map(|s| s.to_string()).collect(),
            ..JobArgs::default()
        }
    }

    #[test]
    fn raw_generator_from_toml() {
        let cfg = JobConfig::parse(
            r#"
            epsilon = "1"
            [generator]
            numerator = ["0", "-2", "0", "2"]
            denominator = ["1", "0", "1"]
            [oracle]
            ladder = [12, 16.5]
            tolerance = "1/1000"
            [grid]
            half_width = 6
            points = 1201
            "#,
        )
        .unwrap();
        let job = Job::from_parts(cfg, &JobArgs::default()).unwrap();
        assert_eq!(job.epsilon, Some(Rational::from_integer(1.into())));
        assert_eq!(job.oracle.ladder, vec![12.0, 16.5]);
        assert_eq!(job.oracle.tolerance, Some(1e-3));
        assert_eq!(job.grid_half_width, Some(6.0));
    }

    #[test]
    fn exactly_one_source() {
        let cfg = || JobConfig::parse("[generator]\nbuiltin = \"trivial\"\n").unwrap();
        assert!(Job::from_parts(cfg(), &JobArgs::default()).is_ok());
        assert!(Job::from_parts(cfg(), &args(Some("trivial"), &[])).is_err());
        assert!(Job::from_parts(JobConfig::default(), &JobArgs::default()).is_err());
        let both =
            JobConfig::parse("[generator]\nbuiltin = \"trivial\"\nnumerator = [\"1\"]\n").unwrap();
        assert!(Job::from_parts(both, &JobArgs::default()).is_err());
    }

    #[test]
    fn floats_are_rejected_in_exact_fields() {
        let cfg = JobConfig::parse("[generator]\nnumerator = [\"0.5\", \"1\"]\n").unwrap();
        assert!(Job::from_parts(cfg, &JobArgs::default()).is_err());
        assert!(Job::from_parts(JobConfig::default(), &args(Some("example1"), &["2.0"])).is_err());
        assert!(JobConfig::parse("[generator]\nnumerator = [0.5]\n").is_err());
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(JobConfig::parse("[oracle]\npoints = 4000\nwidth = 3\n").is_err());
    }

    #[test]
    fn builtin_energy_is_carried() {
        let job = Job::from_parts(JobConfig::default(), &args(Some("example2"), &["2"])).unwrap();
        assert_eq!(job.epsilon, Some(Rational::new(32.into(), 27.into())));
        assert_eq!(job.label, "example2(a=2)");
    }
}
