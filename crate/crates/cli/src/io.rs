//! Quote, trace and grid files.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use heston_calib::{OptionQuote, QuoteSet, TraceRecord};
use serde::{Deserialize, Serialize};

pub const QUOTE_HEADER: [&str; 7] = [
    "spot", "strike", "maturity", "rate", "style", "kind", "price",
];
pub const TRACE_HEADER: [&str; 9] = [
    "iteration",
    "best_fitness",
    "p_a",
    "n_evals",
    "sqrt_v0",
    "sigma",
    "kappa",
    "theta",
    "rho",
];

/// Decimal text with 12 significant digits and no trailing zeros.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    // Round in scientific form first so the exponent reflects any carry.
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let rounded: f64 = sci.parse().expect("round-trips");
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    s
}

#[derive(Debug, Deserialize)]
struct QuoteRow {
    spot: f64,
    strike: f64,
    maturity: f64,
    rate: f64,
    style: String,
    kind: String,
    price: f64,
}

pub fn quotes_to_csv(quotes: &QuoteSet<f64>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(QUOTE_HEADER)?;
    for q in quotes {
        w.write_record([
            fmt_sig12(q.spot),
            fmt_sig12(q.strike),
            fmt_sig12(q.maturity),
            fmt_sig12(q.rate),
            q.style.to_string(),
            q.kind.to_string(),
            fmt_sig12(q.price),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn read_quotes(path: &Path) -> Result<QuoteSet<f64>> {
    let file =
        fs::File::open(path).with_context(|| format!("cannot open dataset {}", path.display()))?;
    let label = path
        .file_stem()
        .map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned());
    parse_quotes(file, &path.display().to_string(), label)
}

/// Parses quote CSV from any reader; `source` prefixes error messages.
pub fn parse_quotes<R: Read>(reader: R, source: &str, label: String) -> Result<QuoteSet<f64>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != QUOTE_HEADER {
        return Err(anyhow!(
            "{source}: expected header `{}`, found `{}`",
            QUOTE_HEADER.join(","),
            header.join(",")
        ));
    }
    let mut quotes = Vec::new();
    for (i, row) in r.deserialize::<QuoteRow>().enumerate() {
        let line = i + 2;
        let row = row.with_context(|| format!("{source}: line {line}"))?;
        let parse_err = |e: String| anyhow!("{source}: line {line}: {e}");
        quotes.push(OptionQuote {
            spot: row.spot,
            strike: row.strike,
            maturity: row.maturity,
            rate: row.rate,
            style: row.style.parse().map_err(parse_err)?,
            kind: row.kind.parse().map_err(parse_err)?,
            price: row.price,
        });
    }
    QuoteSet::new(label, quotes).with_context(|| format!("invalid dataset {source}"))
}

pub fn trace_to_csv(trace: &[TraceRecord<f64>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER)?;
    for r in trace {
        let mut row = vec![
            r.iteration.to_string(),
            r.best_fitness.to_string(),
            r.p_a.to_string(),
            r.n_evals.to_string(),
        ];
        row.extend(r.best_position.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Files produced by one command, written together once all work is done.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: PathBuf, bytes: Vec<u8>) {
        self.files.push((path, bytes));
    }

    pub fn write_all(self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.files.len());
        for (path, bytes) in self.files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .with_context(|| format!("cannot create {}", dir.display()))?;
            }
            let mut f = fs::File::create(&path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            f.write_all(&bytes)
                .with_context(|| format!("cannot write {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use heston_calib::{ExerciseStyle, OptionKind};

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig12(100.0), "100");
        assert_eq!(fmt_sig12(0.05), "0.05");
        assert_eq!(fmt_sig12(1.0 / 12.0), "0.0833333333333");
        assert_eq!(fmt_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig12(12.345678901234567), "12.3456789012");
        assert_eq!(fmt_sig12(9.9999999999999), "10");
        assert_eq!(fmt_sig12(1.5e-7), "0.00000015");
        assert_eq!(fmt_sig12(-2.5), "-2.5");
        assert_eq!(fmt_sig12(0.0), "0");
        assert_eq!(fmt_sig12(123456789012345.0), "123456789012000");
    }

    #[test]
    fn quotes_round_trip_to_twelve_digits() {
        let q = QuoteSet::new(
            "t",
            vec![OptionQuote {
                spot: 100.0,
                strike: 98.0,
                maturity: 1.0 / 12.0,
                rate: 0.05,
                style: ExerciseStyle::American,
                kind: OptionKind::Put,
                price: 1.234_567_890_123_45,
            }],
        )
        .unwrap();
        let bytes = quotes_to_csv(&q).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert_eq!(
            text,
            "spot,strike,maturity,rate,style,kind,price\n\
             100,98,0.0833333333333,0.05,american,put,1.23456789012\n"
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.csv");
        fs::write(&path, bytes).unwrap();
        let back = read_quotes(&path).unwrap();
        assert_eq!(back.quotes()[0].price, 1.234_567_890_12);
        assert_eq!(back.label(), "q");
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(
            &path,
            "spot,strike,maturity,rate,style,kind,price\n100,90,1,0.05,american,put,1\n100,x,1,0.05,american,put,1\n",
        )
        .unwrap();
        let err = format!("{:#}", read_quotes(&path).unwrap_err());
        assert!(err.contains("line 3"), "{err}");

        fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(read_quotes(&path).is_err());
    }
}
