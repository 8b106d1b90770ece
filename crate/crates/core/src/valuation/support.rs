use std::collections::BTreeSet;
use std::fmt;

use super::ValuationError;

/// Support `{(i, j) : a_ij ≠ 0}` of a power series in two variables. The
/// empty support stands for zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolySupport(BTreeSet<(u32, u32)>);

impl PolySupport {
    pub fn zero() -> Self {
        PolySupport(BTreeSet::new())
    }

    pub fn monomial(i: u32, j: u32) -> Self {
        PolySupport(BTreeSet::from([(i, j)]))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32)>) -> Self {
        PolySupport(terms.into_iter().collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = &(u32, u32)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Support of a product without cancellation: the Minkowski sum.
    pub fn product(&self, other: &PolySupport) -> PolySupport {
        PolySupport(self.0.iter().flat_map(|&(a, b)| other.0.iter().map(move |&(c, d)| (a + c, b + d))).collect())
    }

    /// Support of a sum without cancellation: the union.
    pub fn sum(&self, other: &PolySupport) -> PolySupport {
        PolySupport(self.0.union(&other.0).copied().collect())
    }

    /// Parse `z^i w^j` terms joined by `+`; `1`, `z`, `w`, `z^2w` and `0` are accepted.
    pub fn parse(text: &str) -> Result<PolySupport, ValuationError> {
        let text = text.trim();
        if text == "0" {
            return Ok(PolySupport::zero());
        }
        let mut out = BTreeSet::new();
        for term in text.split('+') {
            out.insert(parse_term(term.trim()).ok_or_else(|| ValuationError::Parse(format!("bad monomial `{}`", term.trim())))?);
        }
        Ok(PolySupport(out))
    }
}

fn parse_term(term: &str) -> Option<(u32, u32)> {
    if term == "1" {
        return Some((0, 0));
    }
    let compact: String = term.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if compact.is_empty() {
        return None;
    }
    let (mut i, mut j) = (0u32, 0u32);
    let mut rest = compact.as_str();
    while let Some(var) = rest.chars().next() {
        rest = &rest[1..];
        let exp = if let Some(after) = rest.strip_prefix('^') {
            let digits: String = after.chars().take_while(char::is_ascii_digit).collect();
            rest = &after[digits.len()..];
            digits.parse().ok()?
        } else {
            1
        };
        match var {
            'z' => i += exp,
            'w' => j += exp,
            _ => return None,
        }
    }
    Some((i, j))
}

impl fmt::Display for PolySupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mono = |&(i, j): &(u32, u32)| {
            let part = |v: &str, e: u32| match e {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{e}"),
            };
            match (i, j) {
                (0, 0) => "1".to_string(),
                (_, 0) => part("z", i),
                (0, _) => part("w", j),
                _ => format!("{} {}", part("z", i), part("w", j)),
            }
        };
        let mut sorted: Vec<&(u32, u32)> = self.0.iter().collect();
        sorted.sort_by_key(|&&(i, j)| (i + j, std::cmp::Reverse(i)));
        let terms: Vec<String> = sorted.into_iter().map(mono).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = PolySupport::parse("z^2 + z w^3").unwrap();
        assert_eq!(p, PolySupport::from_terms([(2, 0), (1, 3)]));
        assert_eq!(p.to_string(), "z^2 + z w^3");
        assert_eq!(PolySupport::parse("1 + z*w").unwrap(), PolySupport::from_terms([(0, 0), (1, 1)]));
        assert_eq!(PolySupport::parse("zw^2").unwrap(), PolySupport::monomial(1, 2));
        assert!(PolySupport::parse("z + x").is_err());
        assert!(PolySupport::parse("z^ + w").is_err());
        assert!(PolySupport::parse("0").unwrap().is_zero());
    }

    #[test]
    fn product_is_minkowski_sum() {
        let a = PolySupport::parse("z + w").unwrap();
        assert_eq!(a.product(&a), PolySupport::parse("z^2 + z w + w^2").unwrap());
        assert!(a.product(&PolySupport::zero()).is_zero());
    }
}
