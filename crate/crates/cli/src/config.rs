use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

/// Experiments dispatched by the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Cigar,
    Bryant,
    SurfaceFlow,
    ConeAngle,
    Verify,
    Wing,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Cigar, Command::Bryant, Command::SurfaceFlow, Command::ConeAngle, Command::Verify, Command::Wing];

    pub fn name(self) -> &'static str {
        match self {
            Command::Cigar => "cigar",
            Command::Bryant => "bryant",
            Command::SurfaceFlow => "surface-flow",
            Command::ConeAngle => "cone-angle",
            Command::Verify => "verify",
            Command::Wing => "wing",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Accepted keys with their defaults and ranges.
    pub fn keys(self) -> &'static [Key] {
        match self {
            Command::Cigar => CIGAR_KEYS,
            Command::Bryant => BRYANT_KEYS,
            Command::SurfaceFlow => FLOW_KEYS,
            Command::ConeAngle => CONE_KEYS,
            Command::Verify => VERIFY_KEYS,
            Command::Wing => WING_KEYS,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Model geometries addressable from `cone-angle` and `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LineCigar,
    Cigar,
    Bryant,
}

impl ModelKind {
    fn parse(s: &str) -> Option<ModelKind> {
        match s {
            "line-cigar" => Some(ModelKind::LineCigar),
            "cigar" => Some(ModelKind::Cigar),
            "bryant" => Some(ModelKind::Bryant),
            _ => None,
        }
    }
}

/// Type and admissible range of a key.
#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Real { check: fn(f64) -> bool, range: &'static str },
    Int { min: u64, max: u64 },
    Bool,
    Word(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
}

const fn real(name: &'static str, default: &'static str, check: fn(f64) -> bool, range: &'static str) -> Key {
    Key { name, kind: Kind::Real { check, range }, default }
}

const fn int(name: &'static str, default: &'static str, min: u64, max: u64) -> Key {
    Key { name, kind: Kind::Int { min, max }, default }
}

const SVG: Key = Key { name: "svg", kind: Kind::Bool, default: "false" };
const MODELS: &[&str] = &["line-cigar", "cigar", "bryant"];

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

const CIGAR_KEYS: &[Key] = &[
    real("r_max", "50", positive, "> 0"),
    real("step", "1e-3", |x| x > 0.0 && x <= 1.0, "in (0, 1]"),
    SVG,
];

const BRYANT_KEYS: &[Key] = &[
    int("n", "3", 3, 16),
    real("r_max", "100", |x| (1.0..=1e4).contains(&x), "in [1, 1e4]"),
    real("step", "1e-2", |x| x > 0.0 && x <= 0.1, "in (0, 0.1]"),
    SVG,
];

const FLOW_KEYS: &[Key] = &[
    real("i", "2", |x| (0.1..=100.0).contains(&x), "in [0.1, 100]"),
    int("cells", "256", 16, 1 << 16),
    real("grading", "0.6", |x| (0.0..1.0).contains(&x), "in [0, 1)"),
    real("smoothing", "0.5", |x| x > 0.0 && x <= 2.0, "in (0, 2]"),
    real("stop_roundness", "1.05", |x| x > 1.0 && x.is_finite(), "> 1"),
    SVG,
];

const CONE_KEYS: &[Key] = &[
    Key { name: "model", kind: Kind::Word(MODELS), default: "line-cigar" },
    real("s_max", "1000", |x| (1.0..=1e4).contains(&x), "in [1, 1e4]"),
    int("samples", "16", 4, 1024),
    SVG,
];

const VERIFY_KEYS: &[Key] = &[
    Key { name: "model", kind: Kind::Word(MODELS), default: "line-cigar" },
    real("s_max", "1000", |x| (1.0..=1e4).contains(&x), "in [1, 1e4]"),
    int("stations", "100", 8, 100_000),
    SVG,
];

const WING_KEYS: &[Key] = &[
    real("alpha0", "2.5", |x| x > 0.0 && x < PI, "in (0, π)"),
    real("half_length", "16", positive, "> 0"),
    int("nodes_u", "257", 9, 1 << 14),
    int("nodes_v", "129", 5, 1 << 14),
    real("bend_scale", "1", positive, "> 0"),
    real("tol", "1e-8", positive, "> 0"),
    int("max_iter", "20", 1, 1000),
    SVG,
];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(u64),
    Bool(bool),
    Word(&'static str),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => write!(f, "{x:e}"),
            Value::Int(x) => write!(f, "{x}"),
            Value::Bool(x) => write!(f, "{x}"),
            Value::Word(x) => f.write_str(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}` for command {command}")]
    UnknownKey { line: usize, key: String, command: Command },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: `{key} = {value}` out of range ({expected})")]
    OutOfRange { line: usize, key: String, value: String, expected: String },
}

/// A parsed configuration: every key of the command, defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub values: BTreeMap<&'static str, Value>,
    pub seed: u64,
}

impl RunConfig {
    pub fn real(&self, key: &str) -> f64 {
        match self.values.get(key) {
            Some(Value::Real(x)) => *x,
            Some(Value::Int(x)) => *x as f64,
            other => panic!("`{key}` is not numeric for {}: {other:?}", self.command),
        }
    }

    pub fn int(&self, key: &str) -> usize {
        match self.values.get(key) {
            Some(Value::Int(x)) => *x as usize,
            other => panic!("`{key}` is not an integer for {}: {other:?}", self.command),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.values.get(key), Some(Value::Bool(true)))
    }

    pub fn model(&self) -> ModelKind {
        match self.values.get("model") {
            Some(Value::Word(w)) => ModelKind::parse(w).expect("validated"),
            other => panic!("no model for {}: {other:?}", self.command),
        }
    }

    /// Normalized `key = value` listing, keys sorted, seed last.
    pub fn render(&self) -> String {
        let mut s = format!("# {}\n", self.command);
        for (k, v) in &self.values {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s.push_str(&format!("seed = {}\n", self.seed));
        s
    }
}

fn parse_value(key: &Key, raw: &str) -> Option<Value> {
    match key.kind {
        Kind::Real { check, .. } => raw.parse::<f64>().ok().filter(|x| check(*x)).map(Value::Real),
        Kind::Int { min, max } => raw.parse::<u64>().ok().filter(|x| (min..=max).contains(x)).map(Value::Int),
        Kind::Bool => match raw {
            "true" | "1" | "yes" => Some(Value::Bool(true)),
            "false" | "0" | "no" => Some(Value::Bool(false)),
            _ => None,
        },
        Kind::Word(words) => words.iter().find(|w| **w == raw).map(|w| Value::Word(w)),
    }
}

fn expected(key: &Key) -> String {
    match key.kind {
        Kind::Real { range, .. } => range.to_string(),
        Kind::Int { min, max } => format!("integer in [{min}, {max}]"),
        Kind::Bool => "true or false".into(),
        Kind::Word(words) => format!("one of {}", words.join(", ")),
    }
}

/// Parse `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str, command: Command, seed: u64) -> Result<RunConfig, ConfigError> {
    let keys = command.keys();
    let mut values = BTreeMap::new();
    for key in keys {
        values.insert(key.name, parse_value(key, key.default).expect("defaults are in range"));
    }
    let mut seen = BTreeMap::new();
    for (k, raw_line) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw_line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((name, raw)) = body.split_once('=') else {
            return Err(ConfigError::Malformed { line, text: raw_line.to_string() });
        };
        let (name, raw) = (name.trim(), raw.trim());
        if name.is_empty() || raw.is_empty() || name.contains(char::is_whitespace) {
            return Err(ConfigError::Malformed { line, text: raw_line.to_string() });
        }
        let Some(key) = keys.iter().find(|x| x.name == name) else {
            return Err(ConfigError::UnknownKey { line, key: name.to_string(), command });
        };
        if seen.insert(key.name, line).is_some() {
            return Err(ConfigError::Duplicate { line, key: name.to_string() });
        }
        let Some(v) = parse_value(key, raw) else {
            return Err(ConfigError::OutOfRange {
                line,
                key: name.to_string(),
                value: raw.to_string(),
                expected: expected(key),
            });
        };
        values.insert(key.name, v);
    }
    Ok(RunConfig { command, values, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let c = parse_config("", Command::Cigar, 0).unwrap();
        assert_eq!(c.real("r_max"), 50.0);
        assert_eq!(c.real("step"), 1e-3);
        assert!(!c.flag("svg"));
    }

    #[test]
    fn comments_and_spacing() {
        let c = parse_config("# flow\n  i = 2   # family member\n\ncells=64\n", Command::SurfaceFlow, 0).unwrap();
        assert_eq!(c.real("i"), 2.0);
        assert_eq!(c.int("cells"), 64);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("\nalpha0 = 4.0\n", Command::Wing, 0).unwrap_err();
        assert!(matches!(e, ConfigError::OutOfRange { line: 2, .. }), "{e}");
        assert!(e.to_string().contains("(0, π)"));
        assert!(parse_config("alpha0 = 3.141592653589793", Command::Wing, 0).is_err());
        let e = parse_config("r_max = 5\nfoo = 1", Command::Cigar, 0).unwrap_err();
        assert_eq!(e, ConfigError::UnknownKey { line: 2, key: "foo".into(), command: Command::Cigar });
        let e = parse_config("x y", Command::Cigar, 0).unwrap_err();
        assert!(matches!(e, ConfigError::Malformed { line: 1, .. }));
        let e = parse_config("step = 0.1\nstep = 0.2", Command::Cigar, 0).unwrap_err();
        assert!(matches!(e, ConfigError::Duplicate { line: 2, .. }));
        let e = parse_config("model = torus", Command::Verify, 0).unwrap_err();
        assert!(matches!(e, ConfigError::OutOfRange { line: 1, .. }));
        assert!(parse_config("cells = 2.5", Command::SurfaceFlow, 0).is_err());
    }

    #[test]
    fn render_round_trips() {
        for cmd in Command::ALL {
            let c = parse_config("", cmd, 7).unwrap();
            let text = c.render();
            let body: String = text.lines().filter(|l| !l.starts_with("seed")).map(|l| format!("{l}\n")).collect();
            assert_eq!(parse_config(&body, cmd, 7).unwrap(), c);
            assert_eq!(Command::parse(cmd.name()), Some(cmd));
        }
    }
}
