//! On-disk formats: JSON with 17 significant digits, line-delimited traces,
//! oracle files and CSV series.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use serde_json::Value;

use crate::covering::CurveId;
use crate::error::FormatError;
use crate::teich::iteration::{IterationTrace, WOracle};

/// Serializes finite values as numbers and infinities as `"inf"` / `"-inf"`.
pub fn extended_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    }
}

/// Reads a number written by [`extended_f64`].
pub fn value_to_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

/// Formatter writing every float with 17 significant digits.
struct Digits17<F>(F);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

fn write_with<F: Formatter, T: Serialize + ?Sized>(value: &T, formatter: F) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(formatter));
    value.serialize(&mut ser).expect("serialization to memory does not fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Single-line JSON with 17-digit floats.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> String {
    write_with(value, CompactFormatter)
}

/// Indented JSON with 17-digit floats, newline terminated.
pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = write_with(value, PrettyFormatter::with_indent(b"  "));
    s.push('\n');
    s
}

/// One JSON record per line.
pub fn trace_to_jsonl(trace: &IterationTrace) -> String {
    let mut out = String::new();
    for r in &trace.records {
        out.push_str(&to_json_line(r));
        out.push('\n');
    }
    out
}

/// What the extraction needs from a trace file.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedTrace {
    /// `w` of the universe curves, per record.
    pub w: Vec<BTreeMap<CurveId, f64>>,
    /// `dT_est` of the first record.
    pub first_dt: Option<f64>,
}

pub fn parse_trace_jsonl(text: &str) -> Result<ParsedTrace, FormatError> {
    let mut out = Vec::new();
    let mut first_dt = None;
    for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let err = |msg: &str| FormatError::Parse {
            line: k + 1,
            msg: msg.into(),
        };
        let v: Value = serde_json::from_str(line).map_err(|e| err(&e.to_string()))?;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| err("missing n"))?;
        if n as usize != out.len() {
            return Err(err("record indices are not contiguous from 0"));
        }
        if n == 0 {
            first_dt = v.get("dT_est").and_then(value_to_f64);
        }
        let lengths = v.get("lengths").and_then(Value::as_object).ok_or_else(|| err("missing lengths"))?;
        let mut snap = BTreeMap::new();
        for (id, l) in lengths {
            if id.starts_with('~') {
                continue;
            }
            let w = l.get("w").and_then(value_to_f64).ok_or_else(|| err("length without w"))?;
            snap.insert(CurveId(id.clone()), w);
        }
        out.push(snap);
    }
    Ok(ParsedTrace { w: out, first_dt })
}

/// Settings an oracle file may carry in its header.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleOverrides {
    pub w_max_threshold: Option<f64>,
    #[serde(rename = "J")]
    pub j_grid: Option<Vec<f64>>,
    pub delta0: Option<f64>,
    pub eps0: Option<f64>,
    #[serde(rename = "D")]
    pub d_est: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleFile {
    pub spec: Option<String>,
    pub overrides: OracleOverrides,
    pub series: Vec<WOracle>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleHeader {
    oracle: u32,
    spec: Option<String>,
    #[serde(default)]
    overrides: OracleOverrides,
}

/// Parses a synthetic `w`-oracle.
///
/// The first line is a header `{"oracle": 1, "spec": ..., "overrides": {...}}`; each further
/// line is `{"trace": label, "n": k, "w": {curve: value}}`, with `n` counting from 0 per trace.
pub fn parse_oracle(text: &str) -> Result<OracleFile, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| FormatError::Invalid("oracle file is empty".into()))?;
    let header: OracleHeader = serde_json::from_str(first).map_err(|e| FormatError::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    if header.oracle != 1 {
        return Err(FormatError::Invalid(format!("unsupported oracle version {}", header.oracle)));
    }
    let mut series: Vec<WOracle> = Vec::new();
    for (k, line) in lines {
        let err = |msg: String| FormatError::Parse { line: k + 1, msg };
        let v: Value = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let label = v.get("trace").and_then(Value::as_str).unwrap_or("x0").to_string();
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| err("missing n".into()))? as usize;
        let w = v.get("w").and_then(Value::as_object).ok_or_else(|| err("missing w".into()))?;
        let mut snap = BTreeMap::new();
        for (id, x) in w {
            let x = value_to_f64(x).ok_or_else(|| err(format!("w of {id} is not a number")))?;
            snap.insert(CurveId(id.clone()), x);
        }
        let idx = match series.iter().position(|s| s.label == label) {
            Some(i) => i,
            None => {
                series.push(WOracle {
                    label: label.clone(),
                    records: vec![],
                });
                series.len() - 1
            }
        };
        if series[idx].records.len() != n {
            return Err(err(format!("trace {label}: expected n = {}, got {n}", series[idx].records.len())));
        }
        series[idx].records.push(snap);
    }
    if series.is_empty() {
        return Err(FormatError::Invalid("oracle file has no records".into()));
    }
    Ok(OracleFile {
        spec: header.spec,
        overrides: header.overrides,
        series,
    })
}

fn csv_string(rows: impl IntoIterator<Item = [String; 3]>, header: [&str; 3]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv writes UTF-8")
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x > 0.0 {
        "inf".into()
    } else if x < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

/// `n,curve,w` rows.
pub fn w_series_csv(trace: &IterationTrace) -> String {
    let rows = trace.records.iter().flat_map(|r| {
        r.lengths
            .iter()
            .map(move |(id, l)| [r.n.to_string(), id.to_string(), num(l.w)])
    });
    csv_string(rows, ["n", "curve", "w"])
}

/// `n,stat,value` rows.
pub fn bg_series_csv(trace: &IterationTrace) -> String {
    let rows = trace.records.iter().flat_map(|r| {
        r.bg_stats
            .iter()
            .flat_map(|s| s.named())
            .map(move |(name, v)| [r.n.to_string(), name.to_string(), num(v)])
    });
    csv_string(rows, ["n", "stat", "value"])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_17_digits() {
        let x = [0.1f64, 1.0 / 3.0, -2.5e-300, 6.02e23];
        let s = to_json_line(&x);
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(s.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn oracle_parsing() {
        let text = "{\"oracle\":1,\"spec\":\"levy_cycle\",\"overrides\":{\"w_max_threshold\":15}}\n\
                    {\"trace\":\"a\",\"n\":0,\"w\":{\"gamma1\":0.0}}\n\
                    {\"trace\":\"b\",\"n\":0,\"w\":{\"gamma1\":\"inf\"}}\n\
                    {\"trace\":\"a\",\"n\":1,\"w\":{\"gamma1\":0.1}}\n";
        let o = parse_oracle(text).unwrap();
        assert_eq!(o.series.len(), 2);
        assert_eq!(o.series[0].records.len(), 2);
        assert_eq!(o.series[1].records[0][&CurveId::from("gamma1")], f64::INFINITY);
        assert_eq!(o.overrides.w_max_threshold, Some(15.0));
        let gap = "{\"oracle\":1}\n{\"n\":1,\"w\":{}}\n";
        assert!(matches!(parse_oracle(gap), Err(FormatError::Parse { line: 2, .. })));
    }
}
