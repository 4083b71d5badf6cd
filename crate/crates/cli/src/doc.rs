use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use qproj_core::{ClusterFrame, DeltaVector, IntMatrix, Seed, Sign};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
        v.trim().parse::<BigInt>().map(JsonInt).map_err(|_| E::custom(format!("'{v}' is not an integer")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(JsonIntVisitor)
    }
}

pub type JsonMatrix = Vec<Vec<JsonInt>>;

pub fn matrix_to_json(m: &IntMatrix) -> JsonMatrix {
    m.to_rows().into_iter().map(vec_to_json).collect()
}

pub fn vec_to_json(v: Vec<BigInt>) -> Vec<JsonInt> {
    v.into_iter().map(JsonInt).collect()
}

pub fn delta_to_json(d: &DeltaVector) -> Vec<JsonInt> {
    vec_to_json(d.0.clone())
}

pub fn json_to_matrix(rows: &JsonMatrix, what: &str) -> CliResult<IntMatrix> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(CliError::Dimension(format!("{what} has rows of different lengths")));
    }
    let data = rows.iter().flat_map(|r| r.iter().map(|x| x.0.clone())).collect();
    Ok(IntMatrix::from_vec(rows.len(), width, data)?)
}

pub fn json_to_delta(v: &[JsonInt]) -> DeltaVector {
    DeltaVector(v.iter().map(|x| x.0.clone()).collect())
}

/// Sign written as `"+"` or `"-"`; `"−"` is accepted on input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignDoc(pub Sign);

impl Serialize for SignDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self.0 {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl<'de> Deserialize<'de> for SignDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_sign(&s).map(SignDoc).ok_or_else(|| de::Error::custom(format!("'{s}' is not a sign")))
    }
}

pub fn parse_sign(s: &str) -> Option<Sign> {
    match s {
        "+" | "plus" => Some(Sign::Plus),
        "-" | "−" | "minus" => Some(Sign::Minus),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    #[serde(rename = "Delta")]
    pub delta: JsonMatrix,
    /// Inverse of `Delta`; computed when omitted.
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<JsonMatrix>,
    /// 1-based row of the weight when the frame is a completion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_row: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignDoc>,
}

impl FrameDoc {
    pub fn from_frame(f: &ClusterFrame) -> Self {
        FrameDoc { delta: matrix_to_json(f.delta()), c: Some(matrix_to_json(f.c())), eps_row: None, sign: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceStep {
    pub step: usize,
    /// 1-based vertex mutated to reach this step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutated: Option<usize>,
    #[serde(rename = "B")]
    pub b: JsonMatrix,
    #[serde(rename = "Delta")]
    pub delta: JsonMatrix,
    #[serde(rename = "C")]
    pub c: JsonMatrix,
}

impl TraceStep {
    pub fn new(step: usize, mutated: Option<usize>, seed: &Seed, f: &ClusterFrame) -> Self {
        TraceStep {
            step,
            mutated: mutated.map(|k| k + 1),
            b: matrix_to_json(seed.b()),
            delta: matrix_to_json(f.delta()),
            c: matrix_to_json(f.c()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedDocument {
    pub format_version: u32,
    pub n: usize,
    #[serde(rename = "B")]
    pub b: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub deltas: BTreeMap<String, Vec<JsonInt>>,
    /// 1-based mutation sequence, applied left to right.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

impl SeedDocument {
    pub fn parse(text: &str) -> CliResult<Self> {
        let doc: SeedDocument = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if doc.format_version != FORMAT_VERSION {
            return Err(CliError::Parse(format!("unsupported format_version {}", doc.format_version)));
        }
        doc.check_shapes()?;
        Ok(doc)
    }

    fn check_shapes(&self) -> CliResult<()> {
        let n = self.n;
        if self.b.len() != n || self.b.iter().any(|r| r.len() != n) {
            return Err(CliError::Dimension(format!("B is not {n}×{n}")));
        }
        for (name, v) in &self.deltas {
            if v.len() != n {
                return Err(CliError::Dimension(format!("weight '{name}' has length {}, expected {n}", v.len())));
            }
        }
        if let Some(seq) = &self.sequence {
            parse_steps(seq, n)?;
        }
        Ok(())
    }

    pub fn seed(&self) -> CliResult<Seed> {
        let b = json_to_matrix(&self.b, "B")?;
        let seed = match &self.labels {
            Some(l) => Seed::with_labels(b, l.clone()),
            None => Seed::new(b),
        };
        seed.map_err(|e| match e {
            qproj_core::Error::NotSkewSymmetric(i, j) => {
                CliError::Parse(format!("B is not skew-symmetric at ({}, {})", i + 1, j + 1))
            }
            other => other.into(),
        })
    }

    pub fn steps(&self) -> CliResult<Vec<usize>> {
        parse_steps(self.sequence.as_deref().unwrap_or(&[]), self.n)
    }

    /// Named weight, or an inline comma-separated vector if no weight has
    /// that name.
    pub fn weight(&self, name: &str) -> CliResult<DeltaVector> {
        if let Some(v) = self.deltas.get(name) {
            return Ok(json_to_delta(v));
        }
        let parsed: Option<Vec<BigInt>> = name.split(',').map(|t| t.trim().parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == self.n => Ok(DeltaVector(v)),
            Some(v) => Err(CliError::Dimension(format!("weight '{name}' has length {}, expected {}", v.len(), self.n))),
            None => Err(CliError::Parse(format!("no weight named '{name}'"))),
        }
    }
}

/// Converts 1-based indices to 0-based, rejecting anything outside `1..=n`.
pub fn parse_steps(steps: &[usize], n: usize) -> CliResult<Vec<usize>> {
    steps
        .iter()
        .map(|&k| {
            if k == 0 || k > n {
                Err(CliError::Index(format!("vertex {k} is not in 1..={n}")))
            } else {
                Ok(k - 1)
            }
        })
        .collect()
}

pub fn parse_sequence_arg(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| CliError::Parse(format!("'{t}' is not a vertex number"))))
        .collect()
}

pub fn to_one_based(steps: &[usize]) -> Vec<usize> {
    steps.iter().map(|k| k + 1).collect()
}

/// Writes any document as pretty JSON with a trailing newline; arrays of
/// scalars stay on one line so matrices read row by row.
pub fn render<T: Serialize>(doc: &T) -> String {
    let pretty = serde_json::to_string_pretty(doc).expect("documents serialize");
    let mut s = collapse_scalar_arrays(&pretty);
    s.push('\n');
    s
}

fn collapse_scalar_arrays(pretty: &str) -> String {
    let chars: Vec<char> = pretty.chars().collect();
    let mut out = String::with_capacity(pretty.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '"' {
            let end = string_end(&chars, i);
            out.extend(&chars[i..end]);
            i = end;
            continue;
        }
        if c == '[' {
            if let Some((end, items)) = scalar_array(&chars, i) {
                out.push('[');
                out.push_str(&items.join(", "));
                out.push(']');
                i = end;
                continue;
            }
        }
        out.push(c);
        i += 1;
    }
    out
}

/// Index just past the string literal starting at `start`.
fn string_end(chars: &[char], start: usize) -> usize {
    let mut j = start + 1;
    while j < chars.len() {
        match chars[j] {
            '\\' => j += 2,
            '"' => return j + 1,
            _ => j += 1,
        }
    }
    chars.len()
}

/// If the array opening at `start` holds only scalars, its end and items.
fn scalar_array(chars: &[char], start: usize) -> Option<(usize, Vec<String>)> {
    let mut items = Vec::new();
    let mut current = String::new();
    let mut j = start + 1;
    while j < chars.len() {
        match chars[j] {
            '[' | '{' => return None,
            ']' => {
                if !current.trim().is_empty() {
                    items.push(current.trim().to_string());
                }
                return Some((j + 1, items));
            }
            ',' => {
                items.push(current.trim().to_string());
                current.clear();
                j += 1;
            }
            '"' => {
                let end = string_end(chars, j);
                current.extend(&chars[j..end]);
                j = end;
            }
            c => {
                current.push(c);
                j += 1;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_int_switches_to_strings_beyond_i64() {
        let small = JsonInt(BigInt::from(-7));
        let big: BigInt = "-123456789012345678901234567890".parse().unwrap();
        assert_eq!(serde_json::to_string(&small).unwrap(), "-7");
        assert_eq!(serde_json::to_string(&JsonInt(big.clone())).unwrap(), format!("\"{big}\""));
        let back: Vec<JsonInt> = serde_json::from_str(&format!("[-7, \"{big}\", 18446744073709551615]")).unwrap();
        assert_eq!(back[0], small);
        assert_eq!(back[1].0, big);
        assert_eq!(back[2].0, BigInt::from(u64::MAX));
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
        assert!(serde_json::from_str::<JsonInt>("\"x\"").is_err());
    }

    #[test]
    fn collapsing_keeps_strings_intact() {
        let text = "[\n  \"a, [b]\",\n  \"c\\\"]\"\n]";
        assert_eq!(collapse_scalar_arrays(text), "[\"a, [b]\", \"c\\\"]\"]");
        assert_eq!(collapse_scalar_arrays("[]"), "[]");
        assert_eq!(collapse_scalar_arrays("[\n  [\n    1,\n    2\n  ]\n]"), "[\n  [1, 2]\n]");
    }

    #[test]
    fn seed_document_round_trips() {
        let text = r#"{"format_version": 1, "n": 2, "B": [[0, 3], [-3, 0]], "labels": ["x", "y"],
            "deltas": {"w": [1, -1]}, "sequence": [2, 1],
            "frame": {"Delta": [[1, 0], [0, 1]], "eps_row": 1, "sign": "−"}}"#;
        let doc = SeedDocument::parse(text).unwrap();
        assert_eq!(doc.frame.as_ref().unwrap().sign, Some(SignDoc(Sign::Minus)));
        let again = SeedDocument::parse(&render(&doc)).unwrap();
        assert_eq!(again, doc);
        assert_eq!(render(&again), render(&doc));
    }

    #[test]
    fn inline_weights() {
        let doc = SeedDocument::parse(r#"{"format_version": 1, "n": 2, "B": [[0, 1], [-1, 0]]}"#).unwrap();
        assert_eq!(doc.weight("-1, 2").unwrap(), DeltaVector::from_i64(&[-1, 2]));
        assert!(matches!(doc.weight("1"), Err(CliError::Dimension(_))));
        assert!(matches!(doc.weight("w"), Err(CliError::Parse(_))));
    }
}
