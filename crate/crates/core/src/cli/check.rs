//! Verification suites behind `are-lab check`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::are_engine::{are_closed_micd, are_numeric, theorem_check, Side, Verdict};
use crate::asymptotics::{association_means, sigma2_s, sigma2_t};
use crate::error::{Error, Result};
use crate::model_core::PairedSample;
use crate::model_zoo::{model_by_name, MicdVariant, MODEL_NAMES};
use crate::rank_stats::{kendall_t, ranks, spearman_s, spearman_u_tilde};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Constants,
    Micd,
    Theorem,
    Oracle,
}

/// One checked assertion.
#[derive(Debug, Clone)]
pub struct Line {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Line {
    fn close(name: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        let pass = if expected.is_infinite() {
            measured == expected
        } else {
            (measured - expected).abs() <= tol
        };
        Line {
            name: name.into(),
            measured,
            expected,
            tol,
            pass,
        }
    }

    fn relative(name: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        let mut l = Line::close(name, measured, expected, tol * expected.abs());
        l.tol = tol;
        l
    }

    fn flag(name: impl Into<String>, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Line {
            name: name.into(),
            measured: v,
            expected: 1.0,
            tol: 0.0,
            pass: ok,
        }
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<Line>> {
    match suite {
        Suite::Constants => constants(),
        Suite::Micd => micd(),
        Suite::Theorem => theorem(),
        Suite::Oracle => oracle(),
    }
}

/// Prints the report and returns whether every line passed.
pub fn report(lines: &[Line], out: &mut dyn Write) -> Result<bool> {
    for l in lines {
        writeln!(
            out,
            "{} {}: measured {} expected {} tol {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.name,
            l.measured,
            l.expected,
            l.tol
        )?;
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    writeln!(out, "{} checks, {} failed", lines.len(), failed)?;
    Ok(failed == 0)
}

fn constants() -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for name in MODEL_NAMES {
        let m = model_by_name::<f64>(name)?;
        out.push(Line::close(format!("{name} sigma2_T(0)"), sigma2_t(m.as_ref(), 0.0)?, 4.0 / 9.0, 1e-9));
        out.push(Line::close(format!("{name} sigma2_S(0)"), sigma2_s(m.as_ref(), 0.0)?, 1.0, 1e-9));
    }
    for (v, want) in [
        (MicdVariant::As, 1.0),
        (MicdVariant::Os, 1.0),
        (MicdVariant::Ol, 2.25),
        (MicdVariant::Al, f64::INFINITY),
    ] {
        out.push(Line::close(format!("closed ARE {v}(0)"), are_closed_micd(v, 0.0)?, want, 0.0));
    }
    Ok(out)
}

fn micd() -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for v in MicdVariant::ALL {
        let m = model_by_name::<f64>(v.registry_name())?;
        for k in 1..=9 {
            let th = k as f64 / 10.0;
            let num = are_numeric(m.as_ref(), th, Side::TwoSided)?.value;
            let closed = are_closed_micd(v, th)?;
            out.push(Line::relative(format!("{v} numeric vs closed at {th}"), num, closed, 5e-3));
        }
        let mut worst = f64::INFINITY;
        for k in -999..=999 {
            worst = worst.min(are_closed_micd(v, k as f64 / 1000.0)?);
        }
        out.push(Line {
            name: format!("{v} min closed ARE on the 1e-3 grid"),
            measured: worst,
            expected: 1.0,
            tol: 1e-12,
            pass: worst >= 1.0 - 1e-12,
        });
    }
    Ok(out)
}

fn theorem() -> Result<Vec<Line>> {
    let mut out = Vec::new();
    let grid: Vec<f64> = (1..=10).rev().map(|k| k as f64 * 0.05).collect();
    let ol = model_by_name::<f64>("micd-ol")?;
    let c = theorem_check(ol.as_ref(), &grid)?;
    for (t, r) in c.theta.iter().zip(&c.ratio_ii) {
        out.push(Line::close(format!("OL ratio II at {t}"), *r, 2.0, 1e-6));
    }
    out.push(Line::flag("OL verdict ARE-not-1", c.verdict == Verdict::AreNotOne));
    let al = model_by_name::<f64>("micd-al")?;
    for &t in &grid {
        let (et, e0) = association_means(al.as_ref(), t)?;
        out.push(Line::close(format!("AL E_0 a at {t}"), e0.value, t.powi(3) / 12.0, 1e-9));
        out.push(Line::close(format!("AL E_theta a at {t}"), et.value, (3.0 - t) * t * t / 12.0, 1e-9));
    }
    let c = theorem_check(al.as_ref(), &grid)?;
    for (t, r) in c.theta.iter().zip(&c.ratio_ii) {
        out.push(Line::relative(format!("AL ratio II at {t}"), *r, (3.0 - t) / t, 1e-9));
    }
    for name in ["plackett", "fgm"] {
        let m = model_by_name::<f64>(name)?;
        let c = theorem_check(m.as_ref(), &grid)?;
        let worst = c
            .ratio_ii
            .iter()
            .zip(&c.ratio_iii)
            .map(|(a, b)| (a - 1.0 - b).abs())
            .fold(0.0, f64::max);
        out.push(Line::close(format!("{name} ratio II - 1 - ratio III"), worst, 0.0, 1e-9));
        out.push(Line::flag(format!("{name} verdict ARE-is-1"), c.verdict == Verdict::AreIsOne));
    }
    Ok(out)
}

fn brute_kendall(p: &[(f64, f64)]) -> f64 {
    let n = p.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let c = (p[i].0 - p[j].0) * (p[i].1 - p[j].1);
            s += if c > 0.0 { 1 } else { -1 };
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

/// Direct enumeration of h₃ = Σ over the six orderings (a, b, c) of a triple
/// of 1{x_a > x_b}·1{y_a > y_c}.
fn brute_u_tilde(p: &[(f64, f64)]) -> f64 {
    let n = p.len();
    let mut total = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    total += u64::from(p[a].0 > p[b].0 && p[a].1 > p[c].1);
                }
            }
        }
    }
    total as f64 / (n * (n - 1) * (n - 2) / 6) as f64
}

fn random_sample(rng: &mut ChaCha8Rng, n: usize) -> Result<PairedSample<f64>> {
    let rho: f64 = rng.random_range(-0.9..0.9);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let x: f64 = rng.random();
            let e: f64 = rng.random();
            (x, rho * x + (1.0 - rho.abs()) * e)
        })
        .collect();
    PairedSample::from_pairs(pairs)
}

fn oracle() -> Result<Vec<Line>> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut kendall_bad, mut spear_worst, mut tilde_bad) = (0usize, 0.0f64, 0usize);
    let reps = 300;
    for r in 0..reps {
        let n = rng.random_range(3..=200);
        let s = random_sample(&mut rng, n)?;
        if kendall_t(&s)? != brute_kendall(s.pairs()) {
            kendall_bad += 1;
        }
        let rx: Vec<f64> = ranks(&s.pairs().iter().map(|p| p.0).collect::<Vec<_>>())?
            .as_slice()
            .iter()
            .map(|&r| r as f64)
            .collect();
        let ry: Vec<f64> = ranks(&s.pairs().iter().map(|p| p.1).collect::<Vec<_>>())?
            .as_slice()
            .iter()
            .map(|&r| r as f64)
            .collect();
        spear_worst = spear_worst.max((spearman_s(&s)? - pearson(&rx, &ry)).abs());
        if r % 5 == 0 {
            let m = rng.random_range(3..=40);
            let small = random_sample(&mut rng, m)?;
            if spearman_u_tilde(&small)? != brute_u_tilde(small.pairs()) {
                tilde_bad += 1;
            }
        }
    }
    Ok(vec![
        Line::close(format!("Kendall fast != brute force ({reps} samples)"), kendall_bad as f64, 0.0, 0.0),
        Line::close("Spearman vs Pearson of ranks, worst", spear_worst, 0.0, 1e-12),
        Line::close("S-tilde identity != triple enumeration", tilde_bad as f64, 0.0, 0.0),
    ])
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Suite as clap::ValueEnum>::from_str(s, false).map_err(|_| Error::Config(format!("unknown suite '{s}'")))
    }
}
