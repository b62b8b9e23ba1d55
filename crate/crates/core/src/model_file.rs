//! Text format for threefold and surface models, and the preset registry.
//!
//! ```text
//! kstab-model v1
//! name = bl_p3_quintic
//! kind = threefold
//! [basis]
//! H E
//! [triple]
//! H H H = 1
//! H E E = -5
//! ...
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::exact::linalg::Matrix;
use crate::exact::rational::{fmt_rational, parse_rational, Rational};
use crate::intersect::{
    self, AffineClass, Chamber, FlagSpec, IntersectError, NamedClass, SurfaceModel, TestDivisor, ThreefoldModel,
};

pub const HEADER: &str = "kstab-model v1";

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing section [{0}]")]
    MissingSection(&'static str),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error(transparent)]
    Intersect(#[from] IntersectError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelFile {
    Threefold(ThreefoldModel),
    Surface(SurfaceModel),
}

impl ModelFile {
    pub fn name(&self) -> &str {
        match self {
            ModelFile::Threefold(m) => &m.name,
            ModelFile::Surface(s) => &s.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelFile::Threefold(_) => "threefold",
            ModelFile::Surface(_) => "surface",
        }
    }
}

fn fmt_vec(v: &[Rational]) -> String {
    v.iter().map(fmt_rational).collect::<Vec<_>>().join(" ")
}

fn write_named(out: &mut String, section: &str, items: &[NamedClass]) {
    if items.is_empty() {
        return;
    }
    let _ = writeln!(out, "[{section}]");
    for c in items {
        let _ = writeln!(out, "{}: {}", c.label, fmt_vec(&c.vector));
    }
}

fn write_chamber(out: &mut String, label: &str, c: &Chamber) {
    let _ = writeln!(
        out,
        "{label}: {} {} | {} | {}",
        fmt_rational(&c.lo),
        fmt_rational(&c.hi),
        fmt_vec(&c.positive.constant),
        fmt_vec(&c.positive.slope)
    );
}

/// Canonical text form; `parse(&serialize(m)) == m`.
pub fn serialize(model: &ModelFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "name = {}", model.name());
    let _ = writeln!(out, "kind = {}", model.kind());
    match model {
        ModelFile::Threefold(m) => {
            if let Some(note) = &m.note {
                let _ = writeln!(out, "note = {note}");
            }
            let _ = writeln!(out, "[basis]\n{}", m.basis.join(" "));
            let _ = writeln!(out, "[triple]");
            for ((i, j, k), v) in m.entries() {
                let _ = writeln!(out, "{} {} {} = {}", m.basis[i], m.basis[j], m.basis[k], fmt_rational(&v));
            }
            let _ = writeln!(out, "[anticanonical]\n{}", fmt_vec(&m.anticanonical));
            write_named(&mut out, "curves", &m.curves);
            write_named(&mut out, "exceptional", &m.exceptional);
            if !m.divisors.is_empty() {
                let _ = writeln!(out, "[divisors]");
                for d in &m.divisors {
                    let _ = writeln!(out, "{}: {} | A = {}", d.label, fmt_vec(&d.class), fmt_rational(&d.log_discrepancy));
                }
                let _ = writeln!(out, "[chambers]");
                for d in &m.divisors {
                    for c in &d.chambers {
                        write_chamber(&mut out, &d.label, c);
                    }
                }
            }
            if !m.flags.is_empty() {
                let _ = writeln!(out, "[flags]");
                for f in &m.flags {
                    for c in &f.chambers {
                        write_chamber(&mut out, &f.surface, c);
                    }
                }
            }
        }
        ModelFile::Surface(s) => {
            let _ = writeln!(out, "[basis]\n{}", s.basis.join(" "));
            let _ = writeln!(out, "[gram]");
            for row in &s.gram {
                let _ = writeln!(out, "{}", fmt_vec(row));
            }
            if let Some(k) = &s.canonical {
                let _ = writeln!(out, "[canonical]\n{}", fmt_vec(k));
            }
            write_named(&mut out, "negative_curves", &s.negative_curves);
            write_named(&mut out, "eff_cone", &s.eff_cone);
            write_named(&mut out, "nef_witness", &s.nef_witnesses);
        }
    }
    out
}

struct Parser {
    line: usize,
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ModelFileError> {
        Err(ModelFileError::Syntax {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn rat(&self, s: &str) -> Result<Rational, ModelFileError> {
        parse_rational(s).or_else(|_| self.err(format!("bad rational {s:?}")))
    }

    fn vec(&self, s: &str, n: usize) -> Result<Vec<Rational>, ModelFileError> {
        let v: Vec<Rational> = s.split_whitespace().map(|x| self.rat(x)).collect::<Result<_, _>>()?;
        if v.len() != n {
            return self.err(format!("expected {n} entries, got {}", v.len()));
        }
        Ok(v)
    }

    fn labelled<'a>(&self, s: &'a str) -> Result<(&'a str, &'a str), ModelFileError> {
        match s.split_once(':') {
            Some((l, rest)) if !l.trim().is_empty() => Ok((l.trim(), rest.trim())),
            _ => self.err("expected `label: ...`"),
        }
    }

    fn chamber(&self, s: &str, n: usize) -> Result<(String, Chamber), ModelFileError> {
        let (label, rest) = self.labelled(s)?;
        let parts: Vec<&str> = rest.split('|').collect();
        if parts.len() != 3 {
            return self.err("expected `label: lo hi | constant | slope`");
        }
        let bounds = self.vec(parts[0], 2)?;
        Ok((
            label.to_string(),
            Chamber {
                lo: bounds[0].clone(),
                hi: bounds[1].clone(),
                positive: AffineClass::new(self.vec(parts[1], n)?, self.vec(parts[2], n)?),
            },
        ))
    }
}

/// Parses a model file. Blank lines and `#` comments are ignored.
pub fn parse(text: &str) -> Result<ModelFile, ModelFileError> {
    let mut p = Parser { line: 0 };
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        Some((i, _)) => {
            p.line = i;
            return p.err(format!("expected header `{HEADER}`"));
        }
        None => return p.err("empty model file"),
    }
    let mut keys: Vec<(String, String)> = Vec::new();
    let mut sections: Vec<(String, Vec<(usize, String)>)> = Vec::new();
    for (i, l) in lines {
        p.line = i;
        if let Some(name) = l.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            sections.push((name.trim().to_string(), Vec::new()));
        } else if let Some(sec) = sections.last_mut() {
            sec.1.push((i, l.to_string()));
        } else if let Some((k, v)) = l.split_once('=') {
            keys.push((k.trim().to_string(), v.trim().to_string()));
        } else {
            return p.err("expected `key = value` before the first section");
        }
    }
    let key = |k: &str| keys.iter().find(|(kk, _)| kk == k).map(|(_, v)| v.clone());
    let section = |name: &str| sections.iter().find(|(n, _)| n == name).map(|(_, b)| b.clone());
    let name = key("name").unwrap_or_else(|| "unnamed".into());
    let kind = key("kind").unwrap_or_else(|| "threefold".into());

    let basis: Vec<String> = match section("basis") {
        Some(b) => b.iter().flat_map(|(_, l)| l.split_whitespace().map(str::to_string)).collect(),
        None => return Err(ModelFileError::MissingSection("basis")),
    };
    let labels: Vec<&str> = basis.iter().map(String::as_str).collect();
    let r = basis.len();
    let index = |p: &Parser, s: &str| -> Result<usize, ModelFileError> {
        if let Some(i) = basis.iter().position(|b| b == s) {
            return Ok(i);
        }
        match s.parse::<usize>() {
            Ok(i) if i < r => Ok(i),
            _ => p.err(format!("unknown basis element {s:?}")),
        }
    };
    let named = |p: &mut Parser, sec: &str| -> Result<Vec<NamedClass>, ModelFileError> {
        let mut out = Vec::new();
        for (i, l) in section(sec).unwrap_or_default() {
            p.line = i;
            let (label, rest) = p.labelled(&l)?;
            out.push(NamedClass::new(label, p.vec(rest, r)?));
        }
        Ok(out)
    };

    match kind.as_str() {
        "threefold" => {
            let mut entries = Vec::new();
            for (i, l) in section("triple").ok_or(ModelFileError::MissingSection("triple"))? {
                p.line = i;
                let Some((idx, val)) = l.split_once('=') else {
                    return p.err("expected `i j k = value`");
                };
                let idx: Vec<&str> = idx.split_whitespace().collect();
                if idx.len() != 3 {
                    return p.err("expected three indices");
                }
                let mut ijk = [index(&p, idx[0])?, index(&p, idx[1])?, index(&p, idx[2])?];
                ijk.sort_unstable();
                entries.push(((ijk[0], ijk[1], ijk[2]), p.rat(val.trim())?));
            }
            let anti = section("anticanonical").ok_or(ModelFileError::MissingSection("anticanonical"))?;
            let anti_line = anti.first().map(|(_, l)| l.clone()).unwrap_or_default();
            let anticanonical = p.vec(&anti_line, r)?;
            let mut m = ThreefoldModel::new(&name, &labels, &entries, anticanonical)?;
            m.note = key("note");
            m.curves = named(&mut p, "curves")?;
            m.exceptional = named(&mut p, "exceptional")?;
            for (i, l) in section("divisors").unwrap_or_default() {
                p.line = i;
                let (label, rest) = p.labelled(&l)?;
                let (class, a) = match rest.split_once('|') {
                    Some((c, a)) => {
                        let a = a.trim().strip_prefix("A").map(|x| x.trim_start().trim_start_matches('=').trim());
                        let Some(a) = a else {
                            return p.err("expected `| A = value`");
                        };
                        (c, p.rat(a)?)
                    }
                    None => (rest, Rational::from_integer(1.into())),
                };
                m.divisors.push(TestDivisor {
                    label: label.to_string(),
                    class: p.vec(class, r)?,
                    log_discrepancy: a,
                    chambers: Vec::new(),
                });
            }
            for (i, l) in section("chambers").unwrap_or_default() {
                p.line = i;
                let (label, ch) = p.chamber(&l, r)?;
                match m.divisors.iter_mut().find(|d| d.label == label) {
                    Some(d) => d.chambers.push(ch),
                    None => return p.err(format!("chamber for undeclared divisor {label:?}")),
                }
            }
            for (i, l) in section("flags").unwrap_or_default() {
                p.line = i;
                let (label, _) = p.labelled(&l)?;
                let n = preset_surface(label).map(|s| s.rank()).ok_or_else(|| ModelFileError::Syntax {
                    line: i,
                    msg: format!("flags must name a surface preset, got {label:?}"),
                })?;
                let (label, ch) = p.chamber(&l, n)?;
                match m.flags.iter_mut().find(|f| f.surface == label) {
                    Some(f) => f.chambers.push(ch),
                    None => m.flags.push(FlagSpec {
                        surface: label,
                        chambers: vec![ch],
                    }),
                }
            }
            Ok(ModelFile::Threefold(m))
        }
        "surface" => {
            let mut gram: Matrix = Vec::new();
            for (i, l) in section("gram").ok_or(ModelFileError::MissingSection("gram"))? {
                p.line = i;
                gram.push(p.vec(&l, r)?);
            }
            let mut s = SurfaceModel::new(&name, &labels, gram)?;
            if let Some(k) = section("canonical") {
                if let Some((i, l)) = k.first() {
                    p.line = *i;
                    s.canonical = Some(p.vec(l, r)?);
                }
            }
            s.negative_curves = named(&mut p, "negative_curves")?;
            s.eff_cone = named(&mut p, "eff_cone")?;
            s.nef_witnesses = named(&mut p, "nef_witness")?;
            Ok(ModelFile::Surface(s))
        }
        other => p.err(format!("unknown kind {other:?}")),
    }
}

/// Names accepted by [`preset`]; `sing_line` also takes `sing_line(g,k)`.
pub const PRESET_NAMES: [&str; 6] = ["bl_p3_quintic", "bl_node_22", "bl_v4_conic", "sing_line(g,k)", "dp4", "quadric"];

pub fn preset_surface(name: &str) -> Option<SurfaceModel> {
    match name {
        "dp4" => Some(intersect::dp4_surface()),
        "quadric" => Some(intersect::quadric_surface()),
        _ => None,
    }
}

pub fn preset(name: &str) -> Result<ModelFile, ModelFileError> {
    let unknown = || ModelFileError::UnknownPreset(name.to_string());
    if let Some(s) = preset_surface(name) {
        return Ok(ModelFile::Surface(s));
    }
    let m = match name {
        "bl_p3_quintic" => intersect::bl_p3_quintic(),
        "bl_node_22" => intersect::blowup_node(22)?,
        "bl_v4_conic" => intersect::blowup_v4_conic(),
        "sing_line" => intersect::sing_line_model(12, 0)?,
        _ => {
            let args = name
                .strip_prefix("sing_line(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(unknown)?;
            let (g, k) = args.split_once(',').ok_or_else(unknown)?;
            let g = g.trim().parse::<i64>().map_err(|_| unknown())?;
            let k = k.trim().parse::<i64>().map_err(|_| unknown())?;
            intersect::sing_line_model(g, k)?
        }
    };
    Ok(ModelFile::Threefold(m))
}
