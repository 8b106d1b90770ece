//! Line-oriented text format and DOT export.
//!
//! ```text
//! # comment
//! vertex E1 genus=0 self=-3
//! vertex E2 genus=0 self=-2
//! edge E1 E2
//! ```

use std::fmt::Write;

use super::{DualGraph, GraphError, Vertex};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, message: message.into() }
}

fn key_value<'a>(line: usize, token: &'a str, key: &str) -> Result<&'a str, GraphError> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<value>`, found `{token}`")))
}

impl DualGraph {
    /// Parse the text format. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<DualGraph, GraphError> {
        let mut g = DualGraph::empty();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                ["vertex", id, rest @ ..] => {
                    let (mut genus, mut self_int) = (None, None);
                    for tok in rest {
                        if tok.starts_with("genus=") {
                            let v = key_value(line, tok, "genus")?;
                            genus = Some(v.parse::<u32>().map_err(|_| parse_err(line, format!("bad genus `{v}`")))?);
                        } else if tok.starts_with("self=") {
                            let v = key_value(line, tok, "self")?;
                            self_int =
                                Some(v.parse::<i64>().map_err(|_| parse_err(line, format!("bad self-intersection `{v}`")))?);
                        } else {
                            return Err(parse_err(line, format!("unexpected token `{tok}`")));
                        }
                    }
                    let self_intersection = self_int.ok_or_else(|| parse_err(line, "vertex needs `self=<n>`"))?;
                    let v = Vertex { id: id.to_string(), genus: genus.unwrap_or(0), self_intersection };
                    g.push_vertex(v).map_err(|e| parse_err(line, e.to_string()))?;
                }
                ["edge", a, b] => g.push_edge(a, b).map_err(|e| parse_err(line, e.to_string()))?,
                _ => return Err(parse_err(line, format!("cannot parse `{content}`"))),
            }
        }
        Ok(g)
    }

    /// Render in the format accepted by [`DualGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "vertex {} genus={} self={}", v.id, v.genus, v.self_intersection);
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "edge {} {}", self.vertices[a].id, self.vertices[b].id);
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dual {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{0}\" [label=\"{0} [{1}, {2}]\"];", v.id, v.genus, v.self_intersection);
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.vertices[a].id, self.vertices[b].id);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = "# chain\nvertex E1 genus=0 self=-3\nvertex E2 self=-2\n\nvertex E3 genus=0 self=-2 # tail\nedge E1 E2\nedge E2 E3\n";
        let g = DualGraph::parse(text).unwrap();
        assert_eq!(g, DualGraph::chain(&[-3, -2, -2]));
        assert_eq!(DualGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = DualGraph::parse("vertex a self=-1\nvertx b self=-2\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        let err = DualGraph::parse("vertex a self=-1\nedge a b\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        let err = DualGraph::parse("vertex a self=x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
        let err = DualGraph::parse("vertex a genus=0\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn dot_labels() {
        let dot = DualGraph::chain(&[-1]).to_dot();
        assert!(dot.contains("\"E1\" [label=\"E1 [0, -1]\"];"));
    }
}
