//! Experiment configuration: a flat `key = value` file or a flat JSON
//! object, both checked against the same per-kind schema before anything
//! runs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Catalog,
    Render,
    Classify,
    CircleStats,
    Periodic,
    BoundaryClass,
    Dimension,
    Probe,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Catalog,
        ExperimentKind::Render,
        ExperimentKind::Classify,
        ExperimentKind::CircleStats,
        ExperimentKind::Periodic,
        ExperimentKind::BoundaryClass,
        ExperimentKind::Dimension,
        ExperimentKind::Probe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Catalog => "catalog",
            ExperimentKind::Render => "render",
            ExperimentKind::Classify => "classify",
            ExperimentKind::CircleStats => "circle-stats",
            ExperimentKind::Periodic => "periodic",
            ExperimentKind::BoundaryClass => "boundary-class",
            ExperimentKind::Dimension => "dimension",
            ExperimentKind::Probe => "probe",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Float,
    UInt,
    Str,
    List,
}

/// A checked configuration value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    UInt(u64),
    Float(f64),
    Str(String),
    List(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::UInt(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Str(s) => f.write_str(s),
            Value::List(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| format!("{x:?}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Keys accepted by every kind.
const COMMON: &[(&str, Ty, &str)] = &[("seed", Ty::UInt, "0"), ("output_dir", Ty::Str, "")];

const BUDGETS: &[(&str, Ty, &str)] = &[
    ("n_max", Ty::UInt, "1000"),
    ("escape_radius", Ty::Float, "1e6"),
    ("bounded_radius", Ty::Float, "1e3"),
];

/// Orbits in a parabolic Baker domain gain about one unit per step, so a
/// picture needs a much smaller escape radius than orbit classification.
const RENDER_BUDGETS: &[(&str, Ty, &str)] = &[
    ("n_max", Ty::UInt, "300"),
    ("escape_radius", Ty::Float, "200"),
    ("bounded_radius", Ty::Float, "100"),
];

fn schema(kind: ExperimentKind) -> Vec<(&'static str, Ty, &'static str)> {
    use Ty::*;
    let specific: &[(&str, Ty, &str)] = match kind {
        ExperimentKind::Catalog => &[],
        ExperimentKind::Render => &[
            ("map", Str, "fatou"),
            ("re_min", Float, "-5"),
            ("re_max", Float, "15"),
            ("im_min", Float, "-10"),
            ("im_max", Float, "10"),
            ("width", UInt, "800"),
            ("height", UInt, "800"),
        ],
        ExperimentKind::Classify => &[
            ("map", Str, "fatou"),
            ("depth", UInt, "48"),
            ("probe_budget", UInt, "8192"),
        ],
        ExperimentKind::CircleStats => &[
            ("inner", Str, "blaschke_baker"),
            ("lambda", Float, "2"),
            ("shift", Float, "1"),
            ("samples", UInt, "10000"),
            ("iterations", UInt, "1000"),
            ("arc_eps", Float, "1e-3"),
            ("arc_start", Float, "0.30"),
            ("arc_end", Float, "0.35"),
            ("halves_samples", UInt, "100000"),
        ],
        ExperimentKind::Periodic => &[
            ("map", Str, "bargmann"),
            ("re_min", Float, "0"),
            ("re_max", Float, "3"),
            ("im_min", Float, "-8"),
            ("im_max", Float, "8"),
            ("count", UInt, "20"),
            ("max_period", UInt, "3"),
            ("disk_radius", Float, "0.5"),
        ],
        ExperimentKind::BoundaryClass => &[
            ("map", Str, "bargmann"),
            ("re_min", Float, "-2"),
            ("re_max", Float, "4"),
            ("im_min", Float, "-6"),
            ("im_max", Float, "6"),
            ("width", UInt, "48"),
            ("height", UInt, "96"),
            ("label_steps", UInt, "200"),
            ("horizon", UInt, "200"),
        ],
        ExperimentKind::Dimension => &[
            ("map", Str, "bargmann"),
            ("center_re", Float, "1.2165"),
            ("center_im", Float, "2.4894"),
            ("radius", Float, "3.8"),
            ("steps", UInt, "1"),
            ("anchor1_re", Float, "0.792059968430677"),
            ("anchor1_im", Float, "0"),
            ("anchor2_re", Float, "1.64111905093834"),
            ("anchor2_im", Float, "4.97883130492897"),
        ],
        ExperimentKind::Probe => &[
            ("inner", Str, "blaschke_baker"),
            ("depth", UInt, "12"),
            ("budget", UInt, "65536"),
            ("eps", Float, "0.01"),
            ("target", Float, "0.3"),
            ("windows", List, "10,100,1000"),
            ("count", UInt, "4"),
        ],
    };
    let mut keys: Vec<(&str, Ty, &str)> = COMMON.to_vec();
    keys.extend_from_slice(specific);
    match kind {
        ExperimentKind::Render => keys.extend_from_slice(RENDER_BUDGETS),
        ExperimentKind::BoundaryClass => keys.extend_from_slice(BUDGETS),
        _ => {}
    }
    keys
}

/// Values as read from a file, before the schema assigns types.
#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    Text(String),
    Number(f64),
    Numbers(Vec<f64>),
}

fn coerce(key: &str, ty: Ty, raw: &RawValue) -> Result<Value> {
    let bad = |what: &str| Error::Config(format!("key `{key}` expects {what}"));
    let float = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite());
    match (ty, raw) {
        (Ty::Float, RawValue::Number(x)) if x.is_finite() => Ok(Value::Float(*x)),
        (Ty::Float, RawValue::Text(s)) => float(s).map(Value::Float).ok_or_else(|| bad("a finite number")),
        (Ty::UInt, RawValue::Number(x)) if *x >= 0.0 && x.fract() == 0.0 && *x < 2f64.powi(53) => {
            Ok(Value::UInt(*x as u64))
        }
        (Ty::UInt, RawValue::Text(s)) => s
            .trim()
            .parse::<u64>()
            .map(Value::UInt)
            .map_err(|_| bad("a non-negative integer")),
        (Ty::Str, RawValue::Text(s)) => Ok(Value::Str(s.trim().to_string())),
        (Ty::List, RawValue::Numbers(xs)) if xs.iter().all(|x| x.is_finite()) => Ok(Value::List(xs.clone())),
        (Ty::List, RawValue::Number(x)) if x.is_finite() => Ok(Value::List(vec![*x])),
        (Ty::List, RawValue::Text(s)) => s
            .split(',')
            .map(|p| float(p).ok_or_else(|| bad("a comma-separated list of numbers")))
            .collect::<Result<Vec<f64>>>()
            .map(Value::List),
        (Ty::Float, _) => Err(bad("a finite number")),
        (Ty::UInt, _) => Err(bad("a non-negative integer")),
        (Ty::Str, _) => Err(bad("a string")),
        (Ty::List, _) => Err(bad("a list of numbers")),
    }
}

/// A schema-checked experiment with every key resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub values: BTreeMap<String, Value>,
}

impl ExperimentConfig {
    /// Checks `raw` against the schema of `kind` and fills in defaults.
    pub fn from_raw(kind: ExperimentKind, raw: &BTreeMap<String, RawValue>) -> Result<Self> {
        let keys = schema(kind);
        for key in raw.keys() {
            if key != "kind" && !keys.iter().any(|(k, _, _)| k == key) {
                return Err(Error::Config(format!(
                    "unknown key `{key}` for experiment `{kind}`"
                )));
            }
        }
        let mut values = BTreeMap::new();
        for (key, ty, default) in keys {
            let v = match raw.get(key) {
                Some(r) => coerce(key, ty, r)?,
                None => coerce(key, ty, &RawValue::Text(default.to_string()))?,
            };
            values.insert(key.to_string(), v);
        }
        if let Some(Value::Str(dir)) = values.get_mut("output_dir") {
            if dir.is_empty() {
                *dir = format!("out/{kind}");
            }
        }
        Ok(ExperimentConfig { kind, values })
    }

    /// Parses a config file; `expected` is the subcommand it was given to,
    /// if any. A `kind` key, when present, has to agree with it.
    pub fn parse(text: &str, json: bool, expected: Option<ExperimentKind>) -> Result<Self> {
        let raw = if json { parse_json(text)? } else { parse_key_value(text)? };
        Self::resolve(raw, expected)
    }

    pub fn load(path: &Path, expected: Option<ExperimentKind>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e == "json");
        Self::parse(&text, json, expected)
    }

    /// Kind from `raw` or `expected`, then [`ExperimentConfig::from_raw`].
    pub fn resolve(raw: BTreeMap<String, RawValue>, expected: Option<ExperimentKind>) -> Result<Self> {
        let declared = match raw.get("kind") {
            Some(RawValue::Text(s)) => Some(s.trim().parse::<ExperimentKind>()?),
            Some(_) => return Err(Error::Config("key `kind` expects a string".into())),
            None => None,
        };
        let kind = match (declared, expected) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!("config is for `{a}`, not `{b}`")))
            }
            (Some(k), _) | (None, Some(k)) => k,
            (None, None) => return Err(Error::Config("missing key `kind`".into())),
        };
        Self::from_raw(kind, &raw)
    }

    /// Replaces or adds one `key=value` pair and checks the result.
    pub fn with_override(&self, assignment: &str) -> Result<Self> {
        let (key, value) = split_assignment(assignment)?;
        let mut raw: BTreeMap<String, RawValue> = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), RawValue::Text(v.to_string())))
            .collect();
        raw.insert(key, RawValue::Text(value));
        Self::from_raw(self.kind, &raw)
    }

    /// Sorted `key=value` lines, the form that is hashed.
    pub fn canonical(&self) -> String {
        let mut out = format!("kind={}\n", self.kind);
        for (k, v) in &self.values {
            if k != "output_dir" {
                out.push_str(&format!("{k}={v}\n"));
            }
        }
        out
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn float(&self, key: &str) -> f64 {
        match &self.values[key] {
            Value::Float(x) => *x,
            Value::UInt(n) => *n as f64,
            v => panic!("`{key}` is not numeric: {v:?}"),
        }
    }

    pub fn uint(&self, key: &str) -> usize {
        match &self.values[key] {
            Value::UInt(n) => *n as usize,
            v => panic!("`{key}` is not an integer: {v:?}"),
        }
    }

    pub fn str(&self, key: &str) -> &str {
        match &self.values[key] {
            Value::Str(s) => s,
            v => panic!("`{key}` is not a string: {v:?}"),
        }
    }

    pub fn list(&self, key: &str) -> &[f64] {
        match &self.values[key] {
            Value::List(xs) => xs,
            v => panic!("`{key}` is not a list: {v:?}"),
        }
    }

    pub fn seed(&self) -> u64 {
        self.uint("seed") as u64
    }
}

fn split_assignment(line: &str) -> Result<(String, String)> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected key=value, got `{line}`")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(Error::Config(format!("empty key in `{line}`")));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

pub fn parse_key_value(text: &str) -> Result<BTreeMap<String, RawValue>> {
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_assignment(line)?;
        if out.insert(k.clone(), RawValue::Text(v)).is_some() {
            return Err(Error::Config(format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

pub fn parse_json(text: &str) -> Result<BTreeMap<String, RawValue>> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    let mut out = BTreeMap::new();
    for (k, v) in obj {
        let raw = match v {
            serde_json::Value::String(s) => RawValue::Text(s.clone()),
            serde_json::Value::Number(n) => RawValue::Number(n.as_f64().unwrap_or(f64::NAN)),
            serde_json::Value::Array(xs) => RawValue::Numbers(
                xs.iter()
                    .map(|x| {
                        x.as_f64()
                            .ok_or_else(|| Error::Config(format!("key `{k}` expects numbers")))
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(Error::Config(format!("key `{k}` has an unsupported value"))),
        };
        out.insert(k.clone(), raw);
    }
    Ok(out)
}
