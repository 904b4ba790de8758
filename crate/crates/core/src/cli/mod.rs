//! The `are-lab` command-line tool.

pub mod check;
pub mod io;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::are_engine::{are_closed_result, are_numeric, AreResult, Side};
use crate::error::{Error, Result};
use crate::model_zoo::{model_by_name, MicdVariant};
use crate::power_sim::{run_experiment, PowerExperiment};
use crate::rank_stats::{kendall_t, spearman_s};
use crate::special::norm_sf;

pub use check::Suite;

#[derive(Debug, Parser)]
#[command(name = "are-lab", version, about = "Kendall vs Spearman: statistics, Pitman ARE and power simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    TwoSided,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
            SideArg::TwoSided => Side::TwoSided,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kendall's T and Spearman's S of an "x,y" CSV file with null z-tests.
    Stat {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// ARE of T relative to S at theta0, as JSON.
    Are {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        theta0: f64,
        #[arg(long, value_enum, default_value_t = Method::Numeric)]
        method: Method,
        #[arg(long, value_enum, default_value_t = SideArg::TwoSided)]
        side: SideArg,
    },
    /// ARE on an evenly spaced grid, written as a "theta,are" CSV.
    Curve {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Number of grid intervals; the grid has steps + 1 points.
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
        method: Method,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Draws a seeded sample and writes it as an "x,y" CSV.
    Sample {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo size, power and required n for both tests.
    Power {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        theta0: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        beta: f64,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Second (alpha, beta) pair for the invariance comparison.
        #[arg(long, requires = "beta2")]
        alpha2: Option<f64>,
        #[arg(long, requires = "alpha2")]
        beta2: Option<f64>,
    },
    /// Runs a verification suite; exit status 1 if any check fails.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

/// Runs a parsed command, writing its report to `out`. Returns the process
/// exit code for non-error outcomes.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Stat { input, format } => {
            let sample = io::read_pairs(&input)?;
            let n = sample.len();
            let t = kendall_t(&sample)?;
            let s = spearman_s(&sample)?;
            let rn = (n as f64).sqrt();
            // null standard deviations 2/3 and 1
            let zt = t * rn * 1.5;
            let zs = s * rn;
            let fields = [
                ("n", n as f64),
                ("T", t),
                ("S", s),
                ("z_T", zt),
                ("z_S", zs),
                ("p_T", norm_sf(zt)),
                ("p_S", norm_sf(zs)),
            ];
            match format {
                Format::Json => {
                    let mut m = serde_json::Map::new();
                    for (k, v) in fields {
                        m.insert(k.into(), if k == "n" { json!(n) } else { io::num(v) });
                    }
                    writeln!(out, "{}", serde_json::to_string_pretty(&Value::Object(m)).map_err(json_err)?)?;
                }
                Format::Csv => {
                    writeln!(out, "{}", fields.map(|f| f.0).join(","))?;
                    let vals: Vec<String> = fields
                        .iter()
                        .map(|&(k, v)| if k == "n" { n.to_string() } else { io::fmt_float(v) })
                        .collect();
                    writeln!(out, "{}", vals.join(","))?;
                }
            }
            Ok(0)
        }
        Command::Are {
            model,
            theta0,
            method,
            side,
        } => {
            let r = compute_are(&model, theta0, method, side.into())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&io::are_json(&r)).map_err(json_err)?)?;
            Ok(0)
        }
        Command::Curve {
            model,
            from,
            to,
            steps,
            method,
            out: path,
            format,
        } => {
            let grid = grid(from, to, steps)?;
            let mut rows = Vec::with_capacity(grid.len());
            for th in grid {
                rows.push((th, compute_are(&model, th, method, Side::TwoSided)?.value));
            }
            match format {
                Format::Csv => io::write_curve(&path, &rows)?,
                Format::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|&(t, a)| json!({"theta": io::num(t), "are": io::num(a)}))
                        .collect();
                    io::write_json(&path, &Value::Array(v))?;
                }
            }
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
            Ok(0)
        }
        Command::Sample {
            model,
            theta,
            n,
            seed,
            out: path,
        } => {
            let m = model_by_name::<f64>(&model)?;
            let s = m.sample(theta, n, seed)?;
            io::write_pairs(&path, s.pairs())?;
            writeln!(out, "wrote {n} pairs to {}", path.display())?;
            Ok(0)
        }
        Command::Power {
            model,
            theta0,
            theta,
            alpha,
            beta,
            reps,
            seed,
            alpha2,
            beta2,
        } => {
            let exp = PowerExperiment::<f64>::new(&model, theta0, theta, alpha, beta, reps, seed)?;
            let first = run_experiment(&exp)?;
            let mut v = serde_json::to_value(&first).map_err(json_err)?;
            if let (Some(a2), Some(b2)) = (alpha2, beta2) {
                let second = run_experiment(&exp.with_levels(a2, b2)?)?;
                let band = 2.0 * (first.ratio_se.powi(2) + second.ratio_se.powi(2)).sqrt();
                v["invariance"] = json!({
                    "second": serde_json::to_value(&second).map_err(json_err)?,
                    "difference": first.ratio - second.ratio,
                    "band_2se": band,
                    "within_band": (first.ratio - second.ratio).abs() <= band,
                });
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v).map_err(json_err)?)?;
            Ok(0)
        }
        Command::Check { suite } => {
            let lines = check::run_suite(suite)?;
            Ok(if check::report(&lines, out)? { 0 } else { 1 })
        }
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(e.to_string())
}

/// ARE by closed form (MICD only) or by the numeric engine.
pub fn compute_are(model: &str, theta0: f64, method: Method, side: Side) -> Result<AreResult<f64>> {
    match method {
        Method::ClosedForm => {
            let v: MicdVariant = model
                .parse()
                .map_err(|_| Error::Config(format!("closed-form ARE is only available for MICD models, not '{model}'")))?;
            let mut r = are_closed_result(v, theta0)?;
            r.side = side;
            Ok(r)
        }
        Method::Numeric => {
            let m = model_by_name::<f64>(model)?;
            are_numeric(m.as_ref(), theta0, side)
        }
    }
}

/// from, from + (to − from)/steps, …, to. A zero step count gives the single
/// point `from` and needs `to == from`.
pub fn grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::Config("grid ends must be finite".into()));
    }
    if steps == 0 {
        if to != from {
            return Err(Error::Config("steps = 0 needs --to equal to --from".into()));
        }
        return Ok(vec![from]);
    }
    if !(to > from) {
        return Err(Error::Config(format!("grid must increase: from {from} to {to}")));
    }
    let h = (to - from) / steps as f64;
    Ok((0..=steps)
        .map(|i| if i == steps { to } else { from + h * i as f64 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        assert_eq!(grid(0.0, 0.0, 0).unwrap(), vec![0.0]);
        let g = grid(0.0, 0.9, 9).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[9], 0.9);
        assert!(grid(0.5, 0.1, 3).is_err());
        assert!(grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn closed_form_needs_micd() {
        assert!(matches!(
            compute_are("fgm", 0.0, Method::ClosedForm, Side::TwoSided),
            Err(Error::Config(_))
        ));
        let r = compute_are("micd-ol", 0.0, Method::ClosedForm, Side::TwoSided).unwrap();
        assert_eq!(r.value, 2.25);
    }
}
