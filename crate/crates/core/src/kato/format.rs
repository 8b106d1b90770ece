//! Datum files:
//!
//! ```text
//! base quotient 7 3
//! free E2 as E3'
//! free E3' as E4'
//! free E4' as D1'
//! mark E2,E3',E4'
//! glue C1: E1 -> E1
//! glue C3: E3 -> E1
//! glue D1: D1' -> E3@free
//! ```
//!
//! `base smooth | base quotient p q` comes first; blow-up lines follow the
//! step-script syntax; `mark origin | mark E | mark E,F | mark E,F,G,...`;
//! `glue [tag:] owner -> target[@free|@node]`, the tag defaulting to the owner.

use std::fmt::Write as _;

use super::{base_sequence, Glue, GlueSite, KatoBase, KatoDatum, KatoError, MarkedRegion};
use crate::blowup::parse_step_line;

fn parse_err(line: usize, message: impl Into<String>) -> KatoError {
    KatoError::Parse { line, message: message.into() }
}

impl KatoDatum {
    pub fn parse(text: &str) -> Result<KatoDatum, KatoError> {
        let mut base = None;
        let mut seq = None;
        let mut mark = None;
        let mut gluing = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words[0] {
                "base" => {
                    if base.is_some() {
                        return Err(parse_err(line, "duplicate base line"));
                    }
                    let b = match words[1..] {
                        ["smooth"] => KatoBase::Smooth,
                        ["quotient", p, q] => {
                            let num = |s: &str| s.parse::<u64>().map_err(|_| parse_err(line, format!("bad integer `{s}`")));
                            KatoBase::Quotient { p: num(p)?, q: num(q)? }
                        }
                        _ => return Err(parse_err(line, "expected `base smooth` or `base quotient p q`")),
                    };
                    seq = Some(base_sequence(b)?);
                    base = Some(b);
                }
                "mark" => {
                    if mark.is_some() {
                        return Err(parse_err(line, "duplicate mark line"));
                    }
                    let rest = content["mark".len()..].trim();
                    let names: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                    if names.iter().any(String::is_empty) {
                        return Err(parse_err(line, "empty prime name in mark"));
                    }
                    mark = Some((line, names));
                }
                "glue" => gluing.push(parse_glue(content["glue".len()..].trim(), line)?),
                _ => {
                    let Some(current) = seq.as_mut() else {
                        return Err(parse_err(line, "blow-up before the base line"));
                    };
                    let (step, name) = parse_step_line(content, line)?.expect("nonempty line");
                    current.push_step(step, name.as_deref()).map_err(|e| parse_err(line, e.to_string()))?;
                }
            }
        }
        let (Some(base), Some(seq)) = (base, seq) else {
            return Err(parse_err(0, "missing base line"));
        };
        let marked = match mark {
            None => return Err(parse_err(0, "missing mark line")),
            Some((_, names)) => match (base, &names[..]) {
                (KatoBase::Smooth, [o]) if o == "origin" => MarkedRegion::Origin,
                (KatoBase::Smooth, [e]) => MarkedRegion::FreePoint(e.clone()),
                (KatoBase::Smooth, [e, f]) => MarkedRegion::Point(e.clone(), f.clone()),
                (KatoBase::Smooth, _) => return Err(KatoError::BadMark("a smooth base marks one or two primes".into())),
                (KatoBase::Quotient { .. }, _) => MarkedRegion::Chain(names),
            },
        };
        KatoDatum::new(base, seq, marked, gluing)
    }

    /// Serialize in the datum file format; [`KatoDatum::parse`] reads it back.
    /// Contracted chains are not part of the format.
    pub fn to_text(&self) -> String {
        let mut out = format!("base {}\n", self.base);
        out.push_str(&self.modification.to_script());
        let mark = match &self.marked {
            MarkedRegion::Origin => "origin".to_string(),
            MarkedRegion::FreePoint(e) => e.clone(),
            MarkedRegion::Point(e, f) => format!("{e},{f}"),
            MarkedRegion::Chain(c) => c.join(","),
        };
        let _ = writeln!(out, "mark {mark}");
        for g in &self.gluing {
            let site = match g.site {
                GlueSite::Free => "",
                GlueSite::Node => "@node",
            };
            let _ = writeln!(out, "glue {}: {} -> {}{site}", g.tag, g.owner, g.target);
        }
        out
    }
}

fn parse_glue(rest: &str, line: usize) -> Result<Glue, KatoError> {
    let (tag, body) = match rest.split_once(':') {
        Some((t, b)) => (Some(t.trim()), b.trim()),
        None => (None, rest),
    };
    let (owner, target) = body.split_once("->").ok_or_else(|| parse_err(line, "expected `owner -> target`"))?;
    let owner = owner.trim();
    let (target, site) = match target.trim().split_once('@') {
        None => (target.trim(), GlueSite::Free),
        Some((t, "free")) => (t.trim(), GlueSite::Free),
        Some((t, "node")) => (t.trim(), GlueSite::Node),
        Some((_, s)) => return Err(parse_err(line, format!("unknown site `@{s}`"))),
    };
    if owner.is_empty() || target.is_empty() || owner.contains(char::is_whitespace) || target.contains(char::is_whitespace) {
        return Err(parse_err(line, "expected single prime names around `->`"));
    }
    let tag = tag.filter(|t| !t.is_empty()).unwrap_or(owner);
    Ok(Glue { tag: tag.into(), owner: owner.into(), target: target.into(), site })
}
