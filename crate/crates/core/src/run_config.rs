//! `key=value` run descriptions and the group backends they name.
//!
//! Everything is validated here, so the dispatcher never sees a malformed
//! parameter. Parsing collects every problem instead of stopping at the
//! first.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::group::{
    FreeGroup, Group, GroupError, Heisenberg, Lamplighter, Lattice, SymmetricSet, MAX_FREE_RANK,
};

const MAX_LATTICE_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSpec {
    Lattice(usize),
    Heisenberg,
    Free(u8),
    Lamplighter,
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Accepts `Z`, `Zd`, `Z^d`, `H`, `H3`, `Fk`, `L`, `L2`.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownGroup(s.to_string());
        match s {
            "Z" => return Ok(Self::Lattice(1)),
            "H" | "H3" => return Ok(Self::Heisenberg),
            "L" | "L2" => return Ok(Self::Lamplighter),
            _ => {}
        }
        if let Some(d) = s.strip_prefix('Z') {
            let d: usize = d.trim_start_matches('^').parse().map_err(|_| unknown())?;
            return (1..=MAX_LATTICE_DIM)
                .contains(&d)
                .then_some(Self::Lattice(d))
                .ok_or_else(unknown);
        }
        if let Some(k) = s.strip_prefix('F') {
            let k: u8 = k.parse().map_err(|_| unknown())?;
            return (1..=MAX_FREE_RANK)
                .contains(&k)
                .then_some(Self::Free(k))
                .ok_or_else(unknown);
        }
        Err(unknown())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lattice(d) => write!(f, "Z{d}"),
            Self::Heisenberg => f.write_str("H3"),
            Self::Free(k) => write!(f, "F{k}"),
            Self::Lamplighter => f.write_str("L2"),
        }
    }
}

/// Code that is generic over the backend, run against a concrete group.
pub trait GroupVisitor {
    type Output;
    fn visit<G: Group>(self, group: &G) -> Self::Output;
}

impl GroupSpec {
    pub fn visit<V: GroupVisitor>(self, v: V) -> V::Output {
        match self {
            Self::Lattice(d) => v.visit(&Lattice::new(d)),
            Self::Heisenberg => v.visit(&Heisenberg::new()),
            Self::Free(k) => v.visit(&FreeGroup::new(k)),
            Self::Lamplighter => v.visit(&Lamplighter::new()),
        }
    }
}

/// Parses a space-separated element list.
pub fn parse_elements<G: Group>(group: &G, text: &str) -> Result<Vec<G::Element>, GroupError> {
    text.split_whitespace().map(|t| group.decode(t)).collect()
}

/// Parses `X`, which must be symmetric and contain the identity.
pub fn parse_x<G: Group>(group: &G, text: &str) -> Result<SymmetricSet<G::Element>, String> {
    let items = parse_elements(group, text).map_err(|e| e.to_string())?;
    let x = SymmetricSet::new(group, items).map_err(|e| e.to_string())?;
    if !x.contains(&group.identity()) {
        return Err("X must contain the identity".into());
    }
    Ok(x)
}

struct CheckElements<'a> {
    text: &'a str,
    as_x: bool,
}

impl GroupVisitor for CheckElements<'_> {
    type Output = Result<(), String>;

    fn visit<G: Group>(self, group: &G) -> Result<(), String> {
        if self.as_x {
            parse_x(group, self.text).map(|_| ())
        } else {
            parse_elements(group, self.text).map(|_| ()).map_err(|e| e.to_string())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Operation {
    SampleField,
    WitnessSample,
    WitnessVerify,
    PackSaturate,
    PackGlue,
    PackMerge,
    GlueSample,
    GlueVerify,
    ProxCheck,
    ProxMinimal,
    ProxTprime,
    ProxObstruct,
    ProxFaithful,
    BoundEval,
}

impl Operation {
    pub const ALL: [Operation; 14] = [
        Self::SampleField,
        Self::WitnessSample,
        Self::WitnessVerify,
        Self::PackSaturate,
        Self::PackGlue,
        Self::PackMerge,
        Self::GlueSample,
        Self::GlueVerify,
        Self::ProxCheck,
        Self::ProxMinimal,
        Self::ProxTprime,
        Self::ProxObstruct,
        Self::ProxFaithful,
        Self::BoundEval,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::SampleField => "sample-field",
            Self::WitnessSample => "witness-sample",
            Self::WitnessVerify => "witness-verify",
            Self::PackSaturate => "pack-saturate",
            Self::PackGlue => "pack-glue",
            Self::PackMerge => "pack-merge",
            Self::GlueSample => "glue-sample",
            Self::GlueVerify => "glue-verify",
            Self::ProxCheck => "prox-check",
            Self::ProxMinimal => "prox-minimal",
            Self::ProxTprime => "prox-tprime",
            Self::ProxObstruct => "prox-obstruct",
            Self::ProxFaithful => "prox-faithful",
            Self::BoundEval => "bound-eval",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Self::SampleField | Self::ProxTprime => &["group"],
            Self::WitnessSample => &["group", "out"],
            Self::WitnessVerify => &["group", "plan", "input"],
            Self::PackSaturate => &["group"],
            Self::PackGlue => &["group", "input", "input2", "e1", "e2"],
            Self::PackMerge | Self::ProxCheck | Self::ProxMinimal => &["group", "input", "input2"],
            Self::GlueSample => &["group", "plan", "s_config"],
            Self::GlueVerify => &["group", "plan", "input", "input2"],
            Self::ProxObstruct => &["group", "g", "input"],
            Self::ProxFaithful => &["group", "g", "input"],
            Self::BoundEval => &["y_size"],
        }
    }
}

impl FromStr for Operation {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|o| o.id() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Coarse,
    Fine,
}

pub const KEYS: &[&str] = &[
    "group",
    "op",
    "seed",
    "seeds",
    "x_ball",
    "x",
    "k",
    "c_den",
    "frac",
    "y1_size",
    "switch_radius",
    "window_radius",
    "epsilon",
    "epsilon_inv",
    "max_attempts",
    "override_admissibility",
    "shape",
    "shape_kind",
    "shuffle",
    "e1",
    "e2",
    "search_radius",
    "depth",
    "conj_radius",
    "g",
    "extra",
    "spread",
    "x_size",
    "y_size",
    "y_pow_k_size",
    "plan",
    "input",
    "input2",
    "s_config",
    "out",
    "workers",
];

/// A fully validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub group: Option<GroupSpec>,
    pub op: Operation,
    pub seed: u64,
    pub seeds: Option<(u64, u64)>,
    pub x_ball: usize,
    /// Explicit `X`, space separated; overrides `x_ball`.
    pub x: Option<String>,
    pub k: u32,
    pub c_den: Option<u64>,
    pub frac: Option<u64>,
    pub y1_size: usize,
    pub switch_radius: usize,
    /// Unset means the operation's own default.
    pub window_radius: Option<usize>,
    pub epsilon_inv: usize,
    pub max_attempts: u64,
    pub override_admissibility: bool,
    pub shape: Option<String>,
    pub shape_kind: Option<ShapeKind>,
    pub shuffle: bool,
    pub e1: Option<String>,
    pub e2: Option<String>,
    pub search_radius: usize,
    pub depth: usize,
    pub conj_radius: usize,
    pub g: Option<String>,
    pub extra: usize,
    pub spread: usize,
    pub x_size: Option<u64>,
    pub y_size: Option<u64>,
    pub y_pow_k_size: Option<f64>,
    pub plan: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub input2: Option<PathBuf>,
    pub s_config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunConfigError {
    #[error("line {line}: expected `key=value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
    #[error("missing required key `{key}` for {op}")]
    Missing { key: String, op: String },
}

struct Fields {
    values: BTreeMap<String, String>,
    errors: Vec<RunConfigError>,
}

impl Fields {
    fn invalid(&mut self, key: &str, message: impl Into<String>) {
        self.errors.push(RunConfigError::Invalid {
            key: key.to_string(),
            message: message.into(),
        });
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Option<T> {
        let raw = self.values.get(key)?.clone();
        match raw.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.invalid(key, format!("cannot parse `{raw}`"));
                None
            }
        }
    }

    fn or<T: FromStr>(&mut self, key: &str, default: T) -> T {
        self.get(key).unwrap_or(default)
    }

    fn positive(&mut self, key: &str, default: usize) -> usize {
        let v = self.or(key, default);
        if v == 0 {
            self.invalid(key, "must be positive");
            return default;
        }
        v
    }

    fn flag(&mut self, key: &str) -> bool {
        let Some(raw) = self.raw(key).map(str::to_string) else {
            return false;
        };
        parse_bool(&raw).unwrap_or_else(|| {
            self.invalid(key, format!("expected true or false, found `{raw}`"));
            false
        })
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }
}

/// `1/m`, a bare `m` is rejected to keep the reading unambiguous.
fn parse_epsilon(s: &str) -> Result<usize, String> {
    let m = s
        .strip_prefix("1/")
        .ok_or_else(|| format!("epsilon must be written 1/m, found `{s}`"))?;
    match m.trim().parse::<usize>() {
        Ok(0) => Err("epsilon must be positive".into()),
        Ok(m) => Ok(m),
        Err(_) => Err(format!("cannot parse `{m}` as a positive integer")),
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

pub fn parse_run_config(text: &str) -> Result<RunConfig, Vec<RunConfigError>> {
    let mut f = Fields {
        values: BTreeMap::new(),
        errors: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            f.errors.push(RunConfigError::Syntax { line: line_no });
            continue;
        };
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            f.errors.push(RunConfigError::UnknownKey { line: line_no, key });
            continue;
        }
        if f.values.insert(key.clone(), value.trim().to_string()).is_some() {
            f.errors.push(RunConfigError::Duplicate { line: line_no, key });
        }
    }

    let op = match f.raw("op") {
        None => {
            f.errors.push(RunConfigError::Missing {
                key: "op".into(),
                op: "any run".into(),
            });
            None
        }
        Some(s) => match s.parse::<Operation>() {
            Ok(op) => Some(op),
            Err(()) => {
                let s = s.to_string();
                f.invalid("op", format!("unknown operation `{s}`"));
                None
            }
        },
    };
    if let Some(op) = op {
        for key in op.required() {
            if !f.values.contains_key(*key) {
                f.errors.push(RunConfigError::Missing {
                    key: key.to_string(),
                    op: op.id().to_string(),
                });
            }
        }
    }

    let group = match f.raw("group").map(str::parse::<GroupSpec>) {
        None => None,
        Some(Ok(g)) => Some(g),
        Some(Err(e)) => {
            f.invalid("group", e.to_string());
            None
        }
    };
    for (key, as_x) in [("x", true), ("shape", false), ("e1", false), ("e2", false), ("g", false)] {
        let (Some(spec), Some(text)) = (group, f.raw(key).map(str::to_string)) else {
            continue;
        };
        if let Err(e) = spec.visit(CheckElements { text: &text, as_x }) {
            f.invalid(key, e);
        }
    }
    if let Some(g) = f.raw("g") {
        if g.split_whitespace().count() != 1 {
            f.invalid("g", "expected exactly one element");
        }
    }

    let from_epsilon = f.raw("epsilon").map(parse_epsilon);
    let from_inv: Option<usize> = f.get("epsilon_inv");
    let epsilon_inv = match (from_epsilon, from_inv) {
        (Some(Err(e)), _) => {
            f.invalid("epsilon", e);
            4
        }
        (_, Some(0)) => {
            f.invalid("epsilon_inv", "must be positive");
            4
        }
        (Some(Ok(a)), Some(b)) if a != b => {
            f.invalid("epsilon", format!("1/{a} disagrees with epsilon_inv={b}"));
            a
        }
        (Some(Ok(m)), _) | (None, Some(m)) => m,
        (None, None) => 4,
    };

    let seeds = f.raw("seeds").map(str::to_string).and_then(|s| {
        let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<u64>()).collect();
        match parts.as_slice() {
            [Ok(a), Ok(b)] => Some((*a, *b)),
            _ => {
                f.invalid("seeds", format!("expected two seeds `a,b`, found `{s}`"));
                None
            }
        }
    });
    let shape_kind = match f.raw("shape_kind") {
        None => None,
        Some("coarse") => Some(ShapeKind::Coarse),
        Some("fine") => Some(ShapeKind::Fine),
        Some(other) => {
            let msg = format!("expected coarse or fine, found `{other}`");
            f.invalid("shape_kind", msg);
            None
        }
    };
    let override_admissibility = f.flag("override_admissibility");
    let shuffle = f.flag("shuffle");
    if op == Some(Operation::PackSaturate)
        && f.raw("shape").is_none()
        && (f.raw("plan").is_none() || shape_kind.is_none())
    {
        f.invalid("shape", "pack-saturate needs `shape`, or `plan` with `shape_kind`");
    }

    if op == Some(Operation::BoundEval)
        && group.is_none()
        && (f.raw("x_size").is_none() || f.raw("c_den").is_none())
    {
        f.invalid("group", "bound-eval needs `group`, or both `x_size` and `c_den`");
    }

    let k = f.or("k", 1u32);
    if k == 0 {
        f.invalid("k", "must be positive");
    }
    let y_pow_k_size: Option<f64> = f.get("y_pow_k_size");
    if matches!(y_pow_k_size, Some(v) if !(v.is_finite() && v >= 1.0)) {
        f.invalid("y_pow_k_size", "must be a finite number >= 1");
    }

    let cfg = RunConfig {
        group,
        op: op.unwrap_or(Operation::BoundEval),
        seed: f.or("seed", 0),
        seeds,
        x_ball: f.or("x_ball", 1),
        x: f.raw("x").map(str::to_string),
        k,
        c_den: f.get("c_den"),
        frac: f.get("frac"),
        y1_size: f.or("y1_size", 12),
        switch_radius: f.or("switch_radius", 4),
        window_radius: f.get("window_radius"),
        epsilon_inv,
        max_attempts: f.positive("max_attempts", 100) as u64,
        override_admissibility,
        shape: f.raw("shape").map(str::to_string),
        shape_kind,
        shuffle,
        e1: f.raw("e1").map(str::to_string),
        e2: f.raw("e2").map(str::to_string),
        search_radius: f.or("search_radius", 4),
        depth: f.or("depth", 4),
        conj_radius: f.or("conj_radius", 3),
        g: f.raw("g").map(str::to_string),
        extra: f.or("extra", 0),
        spread: f.or("spread", 6),
        x_size: f.get("x_size"),
        y_size: f.get("y_size"),
        y_pow_k_size,
        plan: f.path("plan"),
        input: f.path("input"),
        input2: f.path("input2"),
        s_config: f.path("s_config"),
        out: f.path("out"),
        workers: f.positive("workers", 1),
    };
    if f.errors.is_empty() {
        Ok(cfg)
    } else {
        Err(f.errors)
    }
}
