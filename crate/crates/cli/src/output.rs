//! Report documents and their JSON / CSV renderings.
//!
//! Every float is written with 17 significant digits, which is enough to
//! recover the exact `f64` on parsing.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "cglmp-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
}

impl OutputDocument {
    pub fn new(command: &str, inputs: impl Serialize, results: impl Serialize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs: serde_json::to_value(inputs).expect("inputs serialize"),
            results: serde_json::to_value(results).expect("results serialize"),
        }
    }
}

/// Tabular view of a report for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// A command's result: always a document, sometimes a table too.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub doc: OutputDocument,
    pub table: Option<Table>,
}

/// `x` with 17 significant digits; positional for exponents in `[-5, 15]`.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.to_string();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..=15).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

struct SigDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SigDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_f64(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with 17-digit floats and a trailing newline.
pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// CSV with a leading `schema_version` column.
pub fn to_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("schema_version").chain(table.header.iter().map(String::as_str));
    w.write_record(header).expect("in-memory write");
    for row in &table.rows {
        let record = std::iter::once(SCHEMA_VERSION).chain(row.iter().map(String::as_str));
        w.write_record(record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("CSV is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(4.0), "4.0000000000000000");
        assert_eq!(format_f64(2.0 * std::f64::consts::SQRT_2), "2.8284271247461903");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(format_f64(-3.0e20), "-3.0000000000000000e20");
        assert_eq!(format_f64(0.0), "0.0");
    }

    #[test]
    fn floats_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            3.414_213_562_373_095,
            1e-300,
            6.02e23,
            -2.5e-6,
            12345.678,
        ] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let v: Value = serde_json::from_str(&to_json(&x)).unwrap();
            assert_eq!(v.as_f64().unwrap(), x);
        }
    }

    #[test]
    fn document_round_trip() {
        let doc = OutputDocument::new("demo", serde_json::json!({"d": 2}), serde_json::json!({"s": 1.0 / 7.0}));
        let back: OutputDocument = serde_json::from_str(&to_json(&doc)).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn csv_has_schema_column() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        let text = to_csv(&t);
        assert_eq!(text, format!("schema_version,a,b\n{SCHEMA_VERSION},1,\"x,y\"\n"));
    }
}
