//! Line-oriented text formats for configurations, packings, plans and
//! reports.
//!
//! Every file starts with `format<TAB><kind>/<version>`, continues with
//! `key<TAB>value` header lines, a `---` separator, then body lines.
//! Element lists inside header values are space separated. Encoding is
//! byte-deterministic and decoding is strict.

use thiserror::Error;

use crate::configuration::{Alphabet, WindowConfiguration};
use crate::group::{ElementSet, Group, SymmetricSet};
use crate::packing::{PackingWindow, Shape};
use crate::witness::{WitnessParams, WitnessPlan};

pub const FORMAT_VERSION: u32 = 1;
const SEPARATOR: &str = "---";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// Free-form `key value` pairs carried in a header (seeds, provenance).
pub type Meta = Vec<(String, String)>;

struct Writer {
    out: String,
}

impl Writer {
    fn new(kind: &str) -> Self {
        let mut w = Self { out: String::new() };
        w.line(&["format", &format!("{kind}/{FORMAT_VERSION}")]);
        w
    }

    fn line(&mut self, fields: &[&str]) {
        for (i, f) in fields.iter().enumerate() {
            debug_assert!(!f.contains(['\t', '\n']), "field {f:?} breaks the format");
            if i > 0 {
                self.out.push('\t');
            }
            self.out.push_str(f);
        }
        self.out.push('\n');
    }

    fn meta(&mut self, meta: &Meta) {
        for (k, v) in meta {
            self.line(&["meta", k, v]);
        }
    }

    fn separator(&mut self) {
        self.out.push_str(SEPARATOR);
        self.out.push('\n');
    }
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn open(text: &'a str, kind: &str) -> Result<Self, FormatError> {
        let mut r = Self {
            lines: text.lines().collect(),
            pos: 0,
        };
        let (line, value) = r.header("format")?;
        let want = format!("{kind}/{FORMAT_VERSION}");
        if value != want {
            return err(line, format!("expected format `{want}`, found `{value}`"));
        }
        Ok(r)
    }

    fn line_no(&self) -> usize {
        self.pos + 1
    }

    fn next(&mut self) -> Result<(usize, &'a str), FormatError> {
        let n = self.line_no();
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok((n, l))
            }
            None => err(n, "unexpected end of file"),
        }
    }

    fn header(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (n, l) = self.next()?;
        match l.split_once('\t') {
            Some((k, v)) if k == key => Ok((n, v)),
            _ => err(n, format!("expected header `{key}`")),
        }
    }

    fn count(&mut self, key: &str) -> Result<usize, FormatError> {
        let (n, v) = self.header(key)?;
        v.parse().or_else(|_| err(n, format!("`{key}` must be a count, found `{v}`")))
    }

    fn meta(&mut self) -> Result<Meta, FormatError> {
        let mut meta = Meta::new();
        while let Some(l) = self.lines.get(self.pos) {
            let Some(rest) = l.strip_prefix("meta\t") else {
                break;
            };
            let n = self.line_no();
            let (k, v) = rest
                .split_once('\t')
                .ok_or_else(|| FormatError {
                    line: n,
                    message: "meta needs a key and a value".into(),
                })?;
            meta.push((k.to_string(), v.to_string()));
            self.pos += 1;
        }
        Ok(meta)
    }

    fn separator(&mut self) -> Result<(), FormatError> {
        let (n, l) = self.next()?;
        if l != SEPARATOR {
            return err(n, format!("expected `{SEPARATOR}`"));
        }
        Ok(())
    }

    fn body(&mut self, expected: usize) -> Result<Vec<(usize, &'a str)>, FormatError> {
        let rest: Vec<(usize, &str)> = self.lines[self.pos..]
            .iter()
            .enumerate()
            .map(|(i, l)| (self.pos + i + 1, *l))
            .collect();
        if rest.len() < expected {
            return err(
                self.lines.len() + 1,
                format!("truncated: expected {expected} body lines, found {}", rest.len()),
            );
        }
        if rest.len() > expected {
            return err(rest[expected].0, format!("extra line beyond the declared {expected}"));
        }
        self.pos = self.lines.len();
        Ok(rest)
    }
}

/// Value of the `group` header, read without decoding the rest.
pub fn peek_group(text: &str) -> Result<String, FormatError> {
    for (i, l) in text.lines().enumerate().take(8) {
        if let Some(v) = l.strip_prefix("group\t") {
            return Ok(v.to_string());
        }
        if l == SEPARATOR {
            return err(i + 1, "no `group` header");
        }
    }
    err(1, "no `group` header")
}

fn check_group<G: Group>(group: &G, line: usize, label: &str) -> Result<(), FormatError> {
    if label != group.label() {
        return err(line, format!("file is for group {label}, expected {}", group.label()));
    }
    Ok(())
}

pub fn encode_elements<G: Group>(group: &G, items: &ElementSet<G::Element>) -> String {
    items
        .iter()
        .map(|g| group.encode(g))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn decode_elements<G: Group>(
    group: &G,
    text: &str,
    line: usize,
) -> Result<ElementSet<G::Element>, FormatError> {
    let mut items = Vec::new();
    for tok in text.split(' ').filter(|t| !t.is_empty()) {
        items.push(group.decode(tok).or_else(|e| err(line, e.to_string()))?);
    }
    let n = items.len();
    let set = ElementSet::from_iter_in(group, items);
    if set.len() != n {
        return err(line, "duplicate element in list");
    }
    Ok(set)
}

fn decode_symmetric<G: Group>(
    group: &G,
    text: &str,
    line: usize,
) -> Result<SymmetricSet<G::Element>, FormatError> {
    let set = decode_elements(group, text, line)?;
    SymmetricSet::new(group, set.iter().cloned()).or_else(|e| err(line, e.to_string()))
}

pub fn encode_configuration<G: Group>(
    group: &G,
    c: &WindowConfiguration<G::Element>,
    meta: &Meta,
) -> String {
    let mut w = Writer::new("config");
    w.line(&["group", &group.label()]);
    w.line(&["alphabet", &c.alphabet().symbols().join(" ")]);
    let bg = c.background().map_or("-", |b| c.alphabet().name(b));
    w.line(&["background", bg]);
    w.meta(meta);
    w.line(&["sites", &c.window().len().to_string()]);
    w.separator();
    for (g, v) in c.iter() {
        w.line(&[&group.encode(g), c.alphabet().name(v)]);
    }
    w.out
}

pub fn decode_configuration<G: Group>(
    group: &G,
    text: &str,
) -> Result<(WindowConfiguration<G::Element>, Meta), FormatError> {
    let mut r = Reader::open(text, "config")?;
    let (n, label) = r.header("group")?;
    check_group(group, n, label)?;
    let (n, symbols) = r.header("alphabet")?;
    let alphabet = Alphabet::new(symbols.split(' ').map(str::to_string).collect())
        .or_else(|e| err(n, e.to_string()))?;
    let (n, bg) = r.header("background")?;
    let background = match bg {
        "-" => None,
        name => Some(
            alphabet
                .lookup(name)
                .ok_or_else(|| FormatError {
                    line: n,
                    message: format!("background `{name}` is not in the alphabet"),
                })?,
        ),
    };
    let meta = r.meta()?;
    let count = r.count("sites")?;
    r.separator()?;
    let mut entries = Vec::with_capacity(count);
    let mut seen = rustc_hash::FxHashSet::default();
    for (n, l) in r.body(count)? {
        let (site, sym) = l.split_once('\t').ok_or_else(|| FormatError {
            line: n,
            message: "expected `site<TAB>symbol`".into(),
        })?;
        let g = group.decode(site).or_else(|e| err(n, e.to_string()))?;
        let v = alphabet
            .lookup(sym)
            .ok_or_else(|| FormatError {
                line: n,
                message: format!("symbol `{sym}` is not in the alphabet"),
            })?;
        if !seen.insert(g.clone()) {
            return err(n, format!("duplicate site {site}"));
        }
        entries.push((g, v));
    }
    entries.sort_by(|a, b| group.canonical_cmp(&a.0, &b.0));
    let (sites, values): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
    let c = WindowConfiguration::new(ElementSet::from_canonical(sites), values, alphabet)
        .expect("validated above");
    Ok((
        match background {
            Some(b) => c.with_background(b),
            None => c,
        },
        meta,
    ))
}

pub fn encode_packing<G: Group>(group: &G, p: &PackingWindow<G::Element>, meta: &Meta) -> String {
    let mut w = Writer::new("packing");
    w.line(&["group", &group.label()]);
    w.line(&["shapes", &p.shapes().len().to_string()]);
    for s in p.shapes() {
        w.line(&["shape", s.id(), &encode_elements(group, s.cells())]);
    }
    w.meta(meta);
    w.line(&["centers", &p.window().len().to_string()]);
    w.separator();
    for c in p.window().iter() {
        let id = p.shape_at(c).map_or("-", |s| p.shapes()[s].id());
        w.line(&[&group.encode(c), id]);
    }
    w.out
}

pub fn decode_packing<G: Group>(
    group: &G,
    text: &str,
) -> Result<(PackingWindow<G::Element>, Meta), FormatError> {
    let mut r = Reader::open(text, "packing")?;
    let (n, label) = r.header("group")?;
    check_group(group, n, label)?;
    let count = r.count("shapes")?;
    let mut shapes = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, l) = r.header("shape")?;
        let (id, cells) = l.split_once('\t').ok_or_else(|| FormatError {
            line: n,
            message: "expected `shape<TAB>id<TAB>cells`".into(),
        })?;
        if id == "-" || shapes.iter().any(|s: &Shape<G::Element>| s.id() == id) {
            return err(n, format!("invalid or repeated shape id `{id}`"));
        }
        let cells = decode_elements(group, cells, n)?;
        shapes.push(Shape::new(id, cells).or_else(|e| err(n, e.to_string()))?);
    }
    let meta = r.meta()?;
    let centers = r.count("centers")?;
    r.separator()?;
    let mut window = Vec::with_capacity(centers);
    let mut blocks = Vec::new();
    let mut seen = rustc_hash::FxHashSet::default();
    let mut last_line = 0;
    for (n, l) in r.body(centers)? {
        last_line = n;
        let (c, id) = l.split_once('\t').ok_or_else(|| FormatError {
            line: n,
            message: "expected `center<TAB>shape`".into(),
        })?;
        let g = group.decode(c).or_else(|e| err(n, e.to_string()))?;
        if !seen.insert(g.clone()) {
            return err(n, format!("duplicate center {c}"));
        }
        if id != "-" {
            let s = shapes
                .iter()
                .position(|s| s.id() == id)
                .ok_or_else(|| FormatError {
                    line: n,
                    message: format!("unknown shape `{id}`"),
                })?;
            blocks.push((g.clone(), s));
        }
        window.push(g);
    }
    let window = ElementSet::from_iter_in(group, window);
    let p = PackingWindow::from_blocks(group, window, shapes, blocks)
        .or_else(|e| err(last_line, e.to_string()))?;
    Ok((p, meta))
}

pub fn encode_plan<G: Group>(group: &G, plan: &WitnessPlan<G::Element>) -> String {
    let mut w = Writer::new("plan");
    let p = plan.params();
    w.line(&["group", &group.label()]);
    w.line(&["k", &p.k().to_string()]);
    w.line(&["c_den", &p.c_den().to_string()]);
    w.line(&["frac", &p.frac().to_string()]);
    w.line(&["x", &encode_elements(group, p.x())]);
    let gs = plan.switching_element().map_or("-".to_string(), |g| group.encode(g));
    w.line(&["g_s", &gs]);
    w.line(&["y1", &encode_elements(group, plan.y1())]);
    w.line(&["y", &encode_elements(group, plan.y())]);
    w.line(&["y_pow_k_size", &format!("{:?}", plan.y_pow_k_size())]);
    w.line(&["bound_exact_ln", &format!("{:?}", plan.bound().exact_ln)]);
    w.line(&["bound_loose_ln", &format!("{:?}", plan.bound().loose_ln)]);
    w.line(&["admissible", &plan.is_admissible().to_string()]);
    w.separator();
    w.out
}

pub fn decode_plan<G: Group>(group: &G, text: &str) -> Result<WitnessPlan<G::Element>, FormatError> {
    let mut r = Reader::open(text, "plan")?;
    let (n, label) = r.header("group")?;
    check_group(group, n, label)?;
    let k = r.count("k")?;
    let c_den = r.count("c_den")?;
    let (n_frac, _) = (r.line_no(), ());
    let frac = r.count("frac")?;
    let (n, x) = r.header("x")?;
    let x = decode_symmetric(group, x, n)?;
    let params = WitnessParams::with_constants(group, x, k as u32, c_den as u64, frac as u64)
        .or_else(|e| err(n_frac, e.to_string()))?;
    let (n, gs) = r.header("g_s")?;
    let g_s = match gs {
        "-" => None,
        t => Some(group.decode(t).or_else(|e| err(n, e.to_string()))?),
    };
    let (n, y1) = r.header("y1")?;
    let y1 = decode_elements(group, y1, n)?;
    let (n, y) = r.header("y")?;
    let y = decode_symmetric(group, y, n)?;
    let plan = WitnessPlan::from_parts(group, params, g_s, y1, y).or_else(|e| err(n, e.to_string()))?;
    for (key, want) in [
        ("y_pow_k_size", plan.y_pow_k_size()),
        ("bound_exact_ln", plan.bound().exact_ln),
        ("bound_loose_ln", plan.bound().loose_ln),
    ] {
        let (n, v) = r.header(key)?;
        if v != format!("{want:?}") {
            return err(n, format!("`{key}` is {v} but the plan gives {want:?}"));
        }
    }
    let (n, v) = r.header("admissible")?;
    if v != plan.is_admissible().to_string() {
        return err(n, "admissibility flag disagrees with the bound");
    }
    r.separator()?;
    r.body(0)?;
    Ok(plan)
}

/// Key-value report; keys may repeat and keep their order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub kind: String,
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn encode(&self) -> String {
        let mut w = Writer::new("report");
        w.line(&["kind", &self.kind]);
        w.line(&["entries", &self.entries.len().to_string()]);
        w.separator();
        for (k, v) in &self.entries {
            w.line(&[k, v]);
        }
        w.out
    }

    pub fn decode(text: &str) -> Result<Self, FormatError> {
        let mut r = Reader::open(text, "report")?;
        let (_, kind) = r.header("kind")?;
        let count = r.count("entries")?;
        r.separator()?;
        let mut entries = Vec::with_capacity(count);
        for (n, l) in r.body(count)? {
            let (k, v) = l.split_once('\t').ok_or_else(|| FormatError {
                line: n,
                message: "expected `key<TAB>value`".into(),
            })?;
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Self {
            kind: kind.to_string(),
            entries,
        })
    }
}
