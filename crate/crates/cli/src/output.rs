//! Number formatting and the CSV/JSON writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::Value;

use crate::error::CliError;

pub const CSV_HEADER: &str = "# ptspec-csv v1";
const SIG_DIGITS: i32 = 10;

/// `x` with 10 significant digits, `%g` style: fixed notation for decimal
/// exponents in [-5, 10), scientific otherwise, trailing zeros removed.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Rounds every number in a JSON tree to 10 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            num(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Destination of a command's main output: a file or stdout.
pub fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

pub struct CsvOut {
    writer: csv::Writer<Box<dyn Write>>,
}

impl CsvOut {
    /// Writes the version line, one `# key=value` line per parameter, then
    /// the column names.
    pub fn create(out: Option<&Path>, params: &[(&str, String)], columns: &[&str]) -> Result<Self, CliError> {
        let mut sink = open_sink(out)?;
        writeln!(sink, "{CSV_HEADER}")?;
        for (k, v) in params {
            writeln!(sink, "# {k}={v}")?;
        }
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(columns)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush()?;
        Ok(())
    }
}

pub fn write_json(out: Option<&Path>, value: Value) -> Result<(), CliError> {
    let mut sink = open_sink(out)?;
    serde_json::to_writer_pretty(&mut sink, &round_json(value))?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-1.0352), "-1.0352");
        assert_eq!(num(1.0 / 3.0), "0.3333333333");
        assert_eq!(num(123456.789012345), "123456.789");
        assert_eq!(num(2.0e-7), "2e-7");
        assert_eq!(num(1.23456789012e12), "1.23456789e12");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(0.000123456789012), "0.000123456789");
    }

    #[test]
    fn json_rounding() {
        let v = round_json(serde_json::json!({"a": [1.0 / 3.0, 2], "b": "x"}));
        assert_eq!(v["a"][0].as_f64().unwrap(), 0.3333333333);
        assert_eq!(v["a"][1], 2);
        assert_eq!(v["b"], "x");
    }
}
