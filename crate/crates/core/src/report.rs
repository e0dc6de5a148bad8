//! Report serialization: pretty JSON with every real written to 17
//! significant digits, and a flat CSV projection (quantity, re, im, err).

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

/// JSON formatter that prints f64 values as `d.dddddddddddddddde±x`.
struct Digits17<'a>(PrettyFormatter<'a>);

fn write_real<W: ?Sized + io::Write>(w: &mut W, v: f64) -> io::Result<()> {
    if v == 0.0 {
        // keeps the sign of −0.0 out of the reports
        return w.write_all(b"0.0");
    }
    write!(w, "{:.16e}", v)
}

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write_real(w, v)
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write_real(w, v as f64)
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
    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::with_indent(b"  ")));
    report.serialize(&mut ser).expect("reports serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub quantity: String,
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

fn real(v: &Value) -> Option<f64> {
    v.as_f64()
}

/// Complex numbers are serialized as [re, im], so two-element numeric
/// arrays become complex rows; {value, err} objects become real rows with
/// an error; other numbers are real rows.
fn flatten(path: &str, v: &Value, out: &mut Vec<CsvRow>) {
    let row = |re: f64, im: f64, err: f64| CsvRow {
        quantity: path.to_string(),
        re,
        im,
        err,
    };
    match v {
        Value::Number(n) => out.push(row(n.as_f64().unwrap_or(f64::NAN), 0.0, f64::NAN)),
        Value::Bool(b) => out.push(row(if *b { 1.0 } else { 0.0 }, 0.0, f64::NAN)),
        Value::Object(m) => {
            if let (Some(val), Some(err), true) =
                (m.get("value").and_then(real), m.get("err").and_then(real), m.len() == 2)
            {
                out.push(row(val, 0.0, err));
                return;
            }
            for (k, x) in m {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) => {
            if let [Some(re), Some(im)] = [a.first().and_then(real), a.get(1).and_then(real)] {
                if a.len() == 2 {
                    out.push(row(re, im, f64::NAN));
                    return;
                }
            }
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        Value::Null | Value::String(_) => {}
    }
}

pub fn csv_rows<T: Serialize>(report: &T) -> Vec<CsvRow> {
    let v = serde_json::to_value(report).expect("reports serialize");
    let mut out = Vec::new();
    flatten("", &v, &mut out);
    out
}

fn csv_real(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v == 0.0 {
        "0.0".to_string()
    } else {
        format!("{:.16e}", v)
    }
}

pub fn to_csv<T: Serialize>(report: &T) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["quantity", "re", "im", "err"])
        .expect("in-memory write");
    for r in csv_rows(report) {
        w.write_record([r.quantity, csv_real(r.re), csv_real(r.im), csv_real(r.err)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Demo {
        x: f64,
        z: [f64; 2],
        n: usize,
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let d = Demo {
            x: 0.1,
            z: [1.0 / 3.0, -2.5e-300],
            n: 3,
        };
        let s = to_json(&d);
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["x"].as_f64().unwrap(), 0.1);
        assert_eq!(v["z"][0].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(v["z"][1].as_f64().unwrap(), -2.5e-300);
    }

    #[test]
    fn csv_projection() {
        let v = serde_json::json!({"w": [1.0, -2.0], "J": [{"value": 0.5, "err": 1e-9}], "ok": true});
        let rows = csv_rows(&v);
        assert!(rows.iter().any(|r| r.quantity == "w" && r.im == -2.0));
        assert!(rows.iter().any(|r| r.quantity == "J[0]" && r.err == 1e-9));
        let text = to_csv(&v);
        assert!(text.starts_with("quantity,re,im,err\n"));
    }
}
