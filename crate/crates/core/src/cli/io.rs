//! CSV and JSON plumbing for the command-line tool.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::are_engine::AreResult;
use crate::error::{Error, Result};
use crate::model_core::PairedSample;

/// JSON number, or the strings "inf", "-inf", "nan" for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Shortest round-trip text of a float; infinities print as "inf"/"-inf".
pub fn fmt_float(x: f64) -> String {
    format!("{x}")
}

pub fn are_json(r: &AreResult<f64>) -> Value {
    let d = &r.diagnostics;
    let mut diag = Map::new();
    diag.insert("dmu_t".into(), opt(d.dmu_t));
    diag.insert("dmu_s".into(), opt(d.dmu_s));
    diag.insert("sigma2_t".into(), opt(d.sigma2_t));
    diag.insert("sigma2_s".into(), opt(d.sigma2_s));
    diag.insert("step".into(), opt(d.step));
    diag.insert("residual".into(), opt(d.residual));
    if !d.secants.is_empty() {
        let s: Vec<Value> = d.secants.iter().map(|&(h, q)| json!([num(h), num(q)])).collect();
        diag.insert("secants".into(), Value::Array(s));
    }
    if let Some((lo, hi)) = d.bracket {
        diag.insert("lower".into(), num(lo));
        diag.insert("upper".into(), num(hi));
    }
    json!({
        "model": r.model,
        "theta0": num(r.theta0),
        "side": r.side.as_str(),
        "value": num(r.value),
        "method": r.method.as_str(),
        "diagnostics": Value::Object(diag),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Reads an "x,y" CSV into a tie-free sample.
pub fn read_pairs(path: &Path) -> Result<PairedSample<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| parse_err(1, e))?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header \"x,y\", found \"{}\"", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut pairs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e)
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("");
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line,
                message: format!("'{s}' is not a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse {
                    line,
                    message: format!("'{s}' is not finite"),
                })
            }
        };
        pairs.push((field(0)?, field(1)?));
    }
    PairedSample::from_pairs(pairs)
}

fn parse_err(line: usize, e: csv::Error) -> Error {
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn write_pairs(path: &Path, pairs: &[(f64, f64)]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "x,y")?;
    for &(x, y) in pairs {
        writeln!(w, "{},{}", fmt_float(x), fmt_float(y))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a "theta,are" curve.
pub fn write_curve(path: &Path, rows: &[(f64, f64)]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "theta,are")?;
    for &(t, a) in rows {
        writeln!(w, "{},{}", fmt_float(t), fmt_float(a))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_curve(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| parse_err(1, e))?.clone();
    if headers.len() != 2 || &headers[0] != "theta" || &headers[1] != "are" {
        return Err(Error::Parse {
            line: 1,
            message: "expected header \"theta,are\"".into(),
        });
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(e.position().map_or(0, |p| p.line() as usize), e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let get = |i: usize| -> Result<f64> {
            rec.get(i).unwrap_or("").parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad number in column {}", i + 1),
            })
        };
        rows.push((get(0)?, get(1)?));
    }
    Ok(rows)
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_become_strings() {
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(2.25), json!(2.25));
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!("inf".parse::<f64>().unwrap(), f64::INFINITY);
        assert_eq!(fmt_float(0.1), "0.1");
    }
}
