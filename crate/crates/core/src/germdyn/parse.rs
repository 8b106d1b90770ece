//! Germ spec lines:
//!
//! ```text
//! class6 1 1 1 2
//! class4 a=2 c=1 P=1 special=false eps=false
//! class2 c=2 P=1
//! ```

use std::collections::BTreeSet;
use std::str::FromStr;

use super::{GermError, GermNormalForm};

fn err(msg: impl Into<String>) -> GermError {
    GermError::Parse(msg.into())
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, GermError> {
    v.parse().map_err(|_| err(format!("bad value `{v}` for `{key}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, GermError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(err(format!("bad boolean `{v}` for `{key}`"))),
    }
}

fn parse_set(v: &str) -> Result<BTreeSet<u32>, GermError> {
    let inner = v.trim_start_matches('{').trim_end_matches('}');
    inner.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_num("P", t.trim())).collect()
}

impl FromStr for GermNormalForm {
    type Err = GermError;

    fn from_str(line: &str) -> Result<Self, GermError> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else {
            return Err(err("empty germ spec"));
        };
        if head == "class6" {
            let nums: Vec<i64> = rest.iter().map(|t| parse_num("matrix entry", t)).collect::<Result<_, _>>()?;
            let [a, b, c, d] = nums[..] else {
                return Err(err(format!("class6 needs 4 entries, got {}", nums.len())));
            };
            return Ok(GermNormalForm::class6(a, b, c, d));
        }
        let (mut a, mut c, mut p) = (None, None, BTreeSet::new());
        let (mut special, mut eps) = (false, false);
        for tok in rest {
            let (key, v) = tok.split_once('=').ok_or_else(|| err(format!("expected key=value, found `{tok}`")))?;
            match (head, key) {
                ("class4", "a") => a = Some(parse_num(key, v)?),
                (_, "c") => c = Some(parse_num(key, v)?),
                (_, "P") => p = parse_set(v)?,
                ("class4", "special") => special = parse_bool(key, v)?,
                ("class4", "eps") => eps = parse_bool(key, v)?,
                _ => return Err(err(format!("unknown key `{key}` for {head}"))),
            }
        }
        let c = c.ok_or_else(|| err("missing `c=`"))?;
        match head {
            "class2" => Ok(GermNormalForm::Class2 { c, p_support: p, lambda_modulus_lt_one: true }),
            "class4" => {
                let a = a.ok_or_else(|| err("missing `a=`"))?;
                Ok(GermNormalForm::Class4 { a, c, p_support: p, special, epsilon_nonzero: eps })
            }
            _ => Err(err(format!("unknown class `{head}`"))),
        }
    }
}
