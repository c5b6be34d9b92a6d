//! Declarative manifold specs: a line-oriented file with bracketed
//! sections.
//!
//! ```text
//! name = s4-theta
//! rank = 2
//!
//! [generators]
//! x1 = (1,0) star x1'
//! [phases]
//! x1 x2 = -2
//! [relations]
//! x1'*x1 + x2'*x2 + x0^2 = 1
//! [frame]
//! coordinates = y0 y1 y2 y3 y4
//! orientation = 1
//! x1 = y1 + i*y2
//! [instanton]
//! kind = projection
//! ```

use std::fmt::Write as _;

use crate::algebra::{AlgebraSpec, GeneratorSpec, MultiDegree, PhaseTable};
use crate::error::AlgebraError;
use crate::expr;
use crate::hodge::AmbientFrame;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameDecl {
    pub coordinates: Vec<String>,
    pub orientation: i8,
    /// `(generator, linear combination of coordinates)`.
    pub rows: Vec<(String, String)>,
}

/// The parsed document, kept verbatim enough to render back byte-exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecDocument {
    pub header: Vec<String>,
    pub name: String,
    pub rank: usize,
    pub generators: Vec<GeneratorSpec>,
    pub phases: Vec<(String, String, i32)>,
    pub relations: Vec<(String, String)>,
    pub frame: Option<FrameDecl>,
    pub instanton: Option<String>,
}

/// A validated manifold: algebra, optional ambient frame, instanton kind.
#[derive(Debug)]
pub struct ManifoldSpec {
    doc: SpecDocument,
    algebra: AlgebraSpec,
    frame: Option<AmbientFrame>,
}

fn bad(line: usize, msg: impl std::fmt::Display) -> AlgebraError {
    AlgebraError::InvalidSpec(format!("line {line}: {msg}"))
}

fn key_value(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim(), v.trim()))
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl SpecDocument {
    pub fn parse(src: &str) -> Result<Self, AlgebraError> {
        let mut doc = SpecDocument {
            header: Vec::new(),
            name: String::new(),
            rank: 0,
            generators: Vec::new(),
            phases: Vec::new(),
            relations: Vec::new(),
            frame: None,
            instanton: None,
        };
        let mut section = String::new();
        let mut seen_content = false;
        let mut coords: Option<Vec<String>> = None;
        let mut orientation: Option<i8> = None;
        let mut frame_rows = Vec::new();
        let mut seen_rank = false;
        for (idx, raw) in src.lines().enumerate() {
            let ln = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if !seen_content {
                    doc.header.push(raw.to_string());
                }
                continue;
            }
            seen_content = true;
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if !matches!(name, "generators" | "phases" | "relations" | "frame" | "instanton") {
                    return Err(bad(ln, format!("unknown section [{name}]")));
                }
                section = name.to_string();
                continue;
            }
            match section.as_str() {
                "" => {
                    let (k, v) = key_value(line).ok_or_else(|| bad(ln, "expected `key = value`"))?;
                    match k {
                        "name" => doc.name = v.to_string(),
                        "rank" => {
                            doc.rank = v.parse().map_err(|_| bad(ln, "rank must be a non-negative integer"))?;
                            seen_rank = true;
                        }
                        _ => return Err(bad(ln, format!("unknown key `{k}`"))),
                    }
                }
                "generators" => {
                    let (name, rest) = key_value(line).ok_or_else(|| bad(ln, "expected `name = (degree) star partner`"))?;
                    if !is_identifier(name) || expr::is_reserved(name) || name.starts_with('d') {
                        return Err(bad(ln, format!("`{name}` cannot name a generator")));
                    }
                    let (deg, partner) = rest
                        .split_once("star")
                        .ok_or_else(|| bad(ln, "missing `star <partner>`"))?;
                    let deg = deg
                        .trim()
                        .strip_prefix('(')
                        .and_then(|d| d.strip_suffix(')'))
                        .ok_or_else(|| bad(ln, "degree must be a parenthesized tuple"))?;
                    let comps = if deg.trim().is_empty() {
                        Vec::new()
                    } else {
                        deg.split(',')
                            .map(|c| c.trim().parse::<i32>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|_| bad(ln, "degree components must be integers"))?
                    };
                    doc.generators.push(GeneratorSpec {
                        name: name.to_string(),
                        degree: MultiDegree::from_slice(&comps),
                        star_partner: partner.trim().to_string(),
                    });
                }
                "phases" => {
                    let (pair, k) = key_value(line).ok_or_else(|| bad(ln, "expected `g h = exponent`"))?;
                    let names: Vec<&str> = pair.split_whitespace().collect();
                    let [a, b] = names[..] else {
                        return Err(bad(ln, "a phase entry names two generators"));
                    };
                    let k: i32 = k.parse().map_err(|_| bad(ln, "phase exponent must be an integer"))?;
                    doc.phases.push((a.to_string(), b.to_string(), k));
                }
                "relations" => {
                    let (l, r) = key_value(line).ok_or_else(|| bad(ln, "expected `lhs = rhs`"))?;
                    doc.relations.push((l.to_string(), r.to_string()));
                }
                "frame" => {
                    let (k, v) = key_value(line).ok_or_else(|| bad(ln, "expected `key = value`"))?;
                    match k {
                        "coordinates" => coords = Some(v.split_whitespace().map(str::to_string).collect()),
                        "orientation" => {
                            orientation = Some(match v {
                                "1" => 1,
                                "-1" => -1,
                                _ => return Err(bad(ln, "orientation must be 1 or -1")),
                            })
                        }
                        g => frame_rows.push((g.to_string(), v.to_string())),
                    }
                }
                "instanton" => {
                    let (k, v) = key_value(line).ok_or_else(|| bad(ln, "expected `kind = ...`"))?;
                    if k != "kind" {
                        return Err(bad(ln, format!("unknown key `{k}`")));
                    }
                    doc.instanton = Some(v.to_string());
                }
                _ => unreachable!(),
            }
        }
        if doc.name.is_empty() {
            return Err(AlgebraError::InvalidSpec("missing `name`".into()));
        }
        if !seen_rank {
            return Err(AlgebraError::InvalidSpec("missing `rank`".into()));
        }
        if coords.is_some() || orientation.is_some() || !frame_rows.is_empty() {
            doc.frame = Some(FrameDecl {
                coordinates: coords.ok_or_else(|| AlgebraError::InvalidSpec("frame without coordinates".into()))?,
                orientation: orientation.unwrap_or(1),
                rows: frame_rows,
            });
        }
        Ok(doc)
    }

    /// Canonical text form; `parse(render(d)) == d`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for h in &self.header {
            let _ = writeln!(s, "{h}");
        }
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "rank = {}", self.rank);
        let _ = writeln!(s, "\n[generators]");
        for g in &self.generators {
            let _ = writeln!(s, "{} = {} star {}", g.name, g.degree, g.star_partner);
        }
        if !self.phases.is_empty() {
            let _ = writeln!(s, "\n[phases]");
            for (a, b, k) in &self.phases {
                let _ = writeln!(s, "{a} {b} = {k}");
            }
        }
        if !self.relations.is_empty() {
            let _ = writeln!(s, "\n[relations]");
            for (l, r) in &self.relations {
                let _ = writeln!(s, "{l} = {r}");
            }
        }
        if let Some(f) = &self.frame {
            let _ = writeln!(s, "\n[frame]");
            let _ = writeln!(s, "coordinates = {}", f.coordinates.join(" "));
            let _ = writeln!(s, "orientation = {}", f.orientation);
            for (g, row) in &f.rows {
                let _ = writeln!(s, "{g} = {row}");
            }
        }
        if let Some(k) = &self.instanton {
            let _ = writeln!(s, "\n[instanton]");
            let _ = writeln!(s, "kind = {k}");
        }
        s
    }
}

impl ManifoldSpec {
    pub fn parse(src: &str) -> Result<Self, AlgebraError> {
        Self::from_document(SpecDocument::parse(src)?, None)
    }

    /// Like [`ManifoldSpec::parse`] with a custom rewriting step cap.
    pub fn parse_with_cap(src: &str, max_steps: usize) -> Result<Self, AlgebraError> {
        Self::from_document(SpecDocument::parse(src)?, Some(max_steps))
    }

    pub fn from_document(doc: SpecDocument, max_steps: Option<usize>) -> Result<Self, AlgebraError> {
        let phases = PhaseTable::fit(doc.rank, &doc.generators, doc.phases.clone())?;
        let mut alg = AlgebraSpec::new(doc.rank, doc.generators.clone(), phases)?;
        if let Some(cap) = max_steps {
            alg = alg.with_max_steps(cap);
        }
        for (l, r) in &doc.relations {
            let lhs = expr::parse_free(&alg, l)?;
            let rhs = expr::parse_free(&alg, r)?;
            alg = alg.with_relation(&lhs, &rhs)?;
        }
        let frame = match &doc.frame {
            None => None,
            Some(f) => {
                let mut rows = Vec::with_capacity(alg.num_generators());
                for g in alg.generators() {
                    let row = f
                        .rows
                        .iter()
                        .find(|(name, _)| *name == g.name)
                        .ok_or_else(|| AlgebraError::InvalidSpec(format!("frame has no row for {}", g.name)))?;
                    rows.push(row.1.clone());
                }
                if f.rows.len() != rows.len() {
                    return Err(AlgebraError::InvalidSpec("frame rows must name each generator once".into()));
                }
                Some(AmbientFrame::new(&alg, f.coordinates.clone(), rows, f.orientation)?)
            }
        };
        if let Some(kind) = &doc.instanton {
            if !matches!(kind.as_str(), "projection" | "hopf") {
                return Err(AlgebraError::InvalidSpec(format!("unknown instanton kind `{kind}`")));
            }
        }
        Ok(ManifoldSpec { doc, algebra: alg, frame })
    }

    pub fn name(&self) -> &str {
        &self.doc.name
    }

    pub fn document(&self) -> &SpecDocument {
        &self.doc
    }

    pub fn render(&self) -> String {
        self.doc.render()
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn frame(&self) -> Result<&AmbientFrame, AlgebraError> {
        self.frame.as_ref().ok_or(AlgebraError::NoFrame)
    }

    pub fn instanton_kind(&self) -> Option<&str> {
        self.doc.instanton.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "name = plane\nrank = 2\n\n[generators]\na = (1,0) star a'\na' = (-1,0) star a\nb = (0,1) star b'\nb' = (0,-1) star b\n\n[phases]\na b = 1\n";

    #[test]
    fn minimal_roundtrip() {
        let doc = SpecDocument::parse(MINIMAL).unwrap();
        assert_eq!(doc.render(), MINIMAL);
        let m = ManifoldSpec::parse(MINIMAL).unwrap();
        assert!(m.frame().is_err());
        let alg = m.algebra();
        assert_eq!(alg.commutation_phase("a", "b").unwrap(), crate::coeff::Coefficient::mu_pow(-1));
    }

    #[test]
    fn rejects_malformed() {
        assert!(ManifoldSpec::parse("rank = 1\n").is_err());
        assert!(ManifoldSpec::parse("name = x\nrank = 1\n[bogus]\n").is_err());
        let wrong_star = "name = x\nrank = 1\n[generators]\na = (1) star a\n";
        assert!(ManifoldSpec::parse(wrong_star).is_err());
        let bad_deg = "name = x\nrank = 1\n[generators]\na = 1 star a\n";
        assert!(ManifoldSpec::parse(bad_deg).is_err());
        let inhomogeneous = "name = x\nrank = 1\n[generators]\na = (1) star b\nb = (-1) star a\n[relations]\na = 1\n";
        assert!(ManifoldSpec::parse(inhomogeneous).is_err());
    }
}
