//! Step scripts: one step per line, `init`, `free <p>` or `sat <p> <q>`,
//! optionally followed by `as <name>`. `#` starts a comment.

use std::fmt::Write;

use super::{BlowupError, BlowupSequence, Step};

/// Parse one script line. `Ok(None)` for blank and comment lines.
pub(crate) fn parse_step_line(content: &str, line: usize) -> Result<Option<(Step, Option<String>)>, BlowupError> {
    let content = content.split('#').next().unwrap_or("").trim();
    if content.is_empty() {
        return Ok(None);
    }
    let tokens: Vec<&str> = content.split_whitespace().collect();
    let (body, name) = match tokens.as_slice() {
        [body @ .., "as", name] => (body, Some(name.to_string())),
        body => (body, None),
    };
    let step = match body {
        ["init"] => Step::Initial,
        ["free", p] => Step::Free(p.to_string()),
        ["sat", p, q] => Step::Satellite(p.to_string(), q.to_string()),
        _ => return Err(BlowupError::Parse { line, message: format!("cannot parse step `{content}`") }),
    };
    Ok(Some((step, name)))
}

impl BlowupSequence {
    /// Apply every step of a script to `self`.
    pub fn run_script(&self, text: &str) -> Result<BlowupSequence, BlowupError> {
        let mut seq = self.clone();
        for (idx, raw) in text.lines().enumerate() {
            if let Some((step, name)) = parse_step_line(raw, idx + 1)? {
                seq.push_step(step, name.as_deref())
                    .map_err(|e| BlowupError::Parse { line: idx + 1, message: e.to_string() })?;
            }
        }
        Ok(seq)
    }

    /// Script reproducing the steps, with explicit names.
    pub fn to_script(&self) -> String {
        let mut out = String::new();
        for rec in &self.steps {
            let _ = writeln!(out, "{} as {}", rec.step, rec.created);
        }
        out
    }
}
