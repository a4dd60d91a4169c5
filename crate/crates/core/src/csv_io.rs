//! CSV output. Floats are written with 17 significant digits so that every
//! value parses back to the same `f64`.

use std::io::{Read, Write};

use crate::asymptotics::{Family, RecordStatus, SweepRecord};
use crate::bounds::EigenBracket;
use crate::eigensolver::EigenResult;
use crate::error::{Error, Result};

pub const SWEEP_HEADER: [&str; 16] = [
    "family",
    "p",
    "N",
    "r",
    "R",
    "k",
    "lambda",
    "lower",
    "upper",
    "target",
    "gap",
    "q0",
    "q1",
    "qbar_minus",
    "qbar_plus",
    "status",
];

pub const WEIGHT_HEADER: [&str; 3] = ["t", "q", "dq"];
pub const EIGEN_HEADER: [&str; 6] = ["k", "lambda", "lower", "upper", "zero_count", "residual"];
pub const BRACKET_HEADER: [&str; 5] = ["k", "qbar_minus", "qbar_plus", "lower", "upper"];
pub const EIGENFUNCTION_HEADER: [&str; 2] = ["t", "v"];

/// `x` with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub fn write_sweep<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record([
            r.family.label().to_string(),
            fmt_float(r.p()),
            r.dim().to_string(),
            r.family.r().map(|v| v.to_string()).unwrap_or_default(),
            fmt_float(r.radius),
            r.k.to_string(),
            fmt_opt(r.lambda),
            fmt_float(r.lower),
            fmt_float(r.upper),
            fmt_float(r.target),
            fmt_opt(r.gap),
            fmt_float(r.q0),
            fmt_float(r.q1),
            fmt_float(r.qbar_minus),
            fmt_float(r.qbar_plus),
            r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(field: &str, name: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("column {name}: cannot parse {field:?} as a number")))
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>> {
    if field.trim().is_empty() {
        Ok(None)
    } else {
        parse_f64(field, name).map(Some)
    }
}

fn parse_u32(field: &str, name: &str) -> Result<u32> {
    field.trim().parse().map_err(|_| {
        Error::Format(format!(
            "column {name}: cannot parse {field:?} as an integer"
        ))
    })
}

/// Parse CSV produced by [`write_sweep`].
pub fn read_sweep<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER.iter().copied()) {
        return Err(Error::Format(format!("unexpected sweep header {header:?}")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let f = |i: usize| row.get(i).unwrap_or("");
        let p = parse_f64(f(1), "p")?;
        let dim = parse_u32(f(2), "N")?;
        let family = match f(0) {
            "pn" => Family::PEqualsN { p: dim },
            "p2" => Family::P2 { dim },
            "rfam" => Family::RFamily {
                r: parse_u32(f(3), "r")?,
            },
            other => return Err(Error::Format(format!("unknown family {other:?}"))),
        };
        if family.p() != p || family.dim() != dim {
            return Err(Error::Format(format!(
                "p = {p}, N = {dim} do not belong to family {family}"
            )));
        }
        let status = match f(15) {
            "ok" => RecordStatus::Ok,
            s => RecordStatus::Failed(s.strip_prefix("error: ").unwrap_or(s).to_string()),
        };
        out.push(SweepRecord {
            family,
            radius: parse_f64(f(4), "R")?,
            k: parse_u32(f(5), "k")? as usize,
            lambda: parse_opt(f(6), "lambda")?,
            lower: parse_f64(f(7), "lower")?,
            upper: parse_f64(f(8), "upper")?,
            target: parse_f64(f(9), "target")?,
            gap: parse_opt(f(10), "gap")?,
            q0: parse_f64(f(11), "q0")?,
            q1: parse_f64(f(12), "q1")?,
            qbar_minus: parse_f64(f(13), "qbar_minus")?,
            qbar_plus: parse_f64(f(14), "qbar_plus")?,
            status,
        });
    }
    Ok(out)
}

/// Rows `(t, q, q')`.
pub fn write_weight<W: Write>(out: W, rows: &[(f64, f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(WEIGHT_HEADER)?;
    for &(t, q, dq) in rows {
        w.write_record([fmt_float(t), fmt_float(q), fmt_float(dq)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_eigen<W: Write>(out: W, results: &[EigenResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EIGEN_HEADER)?;
    for r in results {
        w.write_record([
            r.k.to_string(),
            fmt_float(r.lambda),
            fmt_float(r.bracket.lower),
            fmt_float(r.bracket.upper),
            r.zero_count.to_string(),
            fmt_float(r.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bracket<W: Write>(out: W, brackets: &[EigenBracket]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BRACKET_HEADER)?;
    for b in brackets {
        w.write_record([
            b.k.to_string(),
            fmt_float(b.q_minus),
            fmt_float(b.q_plus),
            fmt_float(b.lower),
            fmt_float(b.upper),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_eigenfunction<W: Write>(out: W, samples: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EIGENFUNCTION_HEADER)?;
    for &(t, v) in samples {
        w.write_record([fmt_float(t), fmt_float(v)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_float(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(fmt_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn rejects_foreign_header() {
        let text = "a,b\n1,2\n";
        assert!(matches!(read_sweep(text.as_bytes()), Err(Error::Format(_))));
    }

    #[test]
    fn failed_rows_round_trip() {
        let rec = SweepRecord {
            family: Family::RFamily { r: 2 },
            radius: 10.0,
            k: 1,
            lambda: None,
            lower: 1.0,
            upper: 2.0,
            target: 1.5,
            gap: None,
            q0: 0.9,
            q1: 1.1,
            qbar_minus: 0.95,
            qbar_plus: 1.05,
            status: RecordStatus::Failed("bracket failure, k = 1".into()),
        };
        let mut buf = Vec::new();
        write_sweep(&mut buf, std::slice::from_ref(&rec)).unwrap();
        let back = read_sweep(buf.as_slice()).unwrap();
        assert_eq!(back, vec![rec]);
    }
}
