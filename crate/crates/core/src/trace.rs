//! Per-iteration run records and their CSV form.
//!
//! Schema: header `iter,evals,h,archive_size,sp,igd,elapsed_ms`, one row per
//! iteration. Reals are written in scientific notation with 17 significant
//! digits, which round-trips every `f64` exactly. An undefined metric is an
//! empty field.

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 7] = ["iter", "evals", "h", "archive_size", "sp", "igd", "elapsed_ms"];

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iter: u64,
    pub evals: u64,
    pub h: f64,
    pub archive_size: usize,
    pub sp: Option<f64>,
    pub igd: Option<f64>,
    /// Cumulative algorithm wall-clock time, metric computation excluded.
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
}

/// 17 significant digits, scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

impl RunTrace {
    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(TRACE_HEADER)?;
        for r in &self.rows {
            out.write_record([
                r.iter.to_string(),
                r.evals.to_string(),
                format_real(r.h),
                r.archive_size.to_string(),
                format_opt(r.sp),
                format_opt(r.igd),
                format_real(r.elapsed_ms),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Parses a trace CSV. `origin` names the source in error messages.
    pub fn read_csv<R: Read>(r: R, origin: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header = rdr.headers()?.clone();
        if header.iter().ne(TRACE_HEADER.iter().copied()) {
            return Err(Error::Schema {
                path: origin.to_string(),
                message: format!("expected header `{}`", TRACE_HEADER.join(",")),
            });
        }
        let mut rows = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<&str> {
                rec.get(i).ok_or_else(|| Error::Schema {
                    path: origin.to_string(),
                    message: format!("row {}: missing column `{}`", n + 1, TRACE_HEADER[i]),
                })
            };
            let bad = |i: usize| Error::Schema {
                path: origin.to_string(),
                message: format!("row {}: malformed column `{}`", n + 1, TRACE_HEADER[i]),
            };
            let real = |i: usize| -> Result<f64> { field(i)?.parse::<f64>().map_err(|_| bad(i)) };
            let opt = |i: usize| -> Result<Option<f64>> {
                let s = field(i)?;
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse::<f64>().map(Some).map_err(|_| bad(i))
                }
            };
            rows.push(TraceRow {
                iter: field(0)?.parse().map_err(|_| bad(0))?,
                evals: field(1)?.parse().map_err(|_| bad(1))?,
                h: real(2)?,
                archive_size: field(3)?.parse().map_err(|_| bad(3))?,
                sp: opt(4)?,
                igd: opt(5)?,
                elapsed_ms: real(6)?,
            });
        }
        Ok(Self { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunTrace {
        RunTrace {
            rows: vec![
                TraceRow {
                    iter: 0,
                    evals: 100,
                    h: 1.0,
                    archive_size: 12,
                    sp: None,
                    igd: Some(12.345678901234567),
                    elapsed_ms: 0.25,
                },
                TraceRow {
                    iter: 1,
                    evals: 200,
                    h: 0.9,
                    archive_size: 30,
                    sp: Some(0.1),
                    igd: Some(1.0 / 3.0),
                    elapsed_ms: 1.5,
                },
            ],
        }
    }

    #[test]
    fn header_and_format() {
        let text = sample().to_csv_string();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("iter,evals,h,archive_size,sp,igd,elapsed_ms"));
        assert_eq!(
            lines.next(),
            Some("0,100,1.0000000000000000e0,12,,1.2345678901234567e1,2.5000000000000000e-1")
        );
    }

    #[test]
    fn parse_and_rewrite_is_byte_identical() {
        let text = sample().to_csv_string();
        let parsed = RunTrace::read_csv(text.as_bytes(), "mem").unwrap();
        assert_eq!(parsed, sample());
        assert_eq!(parsed.to_csv_string(), text);
    }

    #[test]
    fn wrong_header_is_named() {
        let err = RunTrace::read_csv("iter,evals\n1,2\n".as_bytes(), "t.csv").unwrap_err();
        assert!(err.to_string().contains("t.csv"));
    }
}
