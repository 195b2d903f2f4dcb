//! Function literals `3*g(e1@1) - g(e1@w + 1)` and measure literals
//! `2*d(e1@w + 5) - 1/2*d(e1@3)`. The empty combination is written `0`.

use num_traits::{One, Signed};

use super::{AtomicMeasure, FunctionError, Scalar, StepFunction};
use crate::space::{PointAddr, ScaffoldTree};

fn syntax(msg: impl Into<String>) -> FunctionError {
    FunctionError::Syntax(msg.into())
}

/// Splits `text` into signed terms at `+`/`-` outside parentheses.
fn signed_terms(text: &str) -> Result<Vec<(bool, &str)>, FunctionError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut negative = false;
    let mut start = 0;
    let mut seen_body = false;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                if seen_body {
                    out.push((negative, text[start..i].trim()));
                } else if !text[start..i].trim().is_empty() {
                    return Err(syntax(format!("unexpected '{}'", &text[start..i])));
                }
                negative = c == '-';
                start = i + 1;
                seen_body = false;
                continue;
            }
            _ => {}
        }
        if !c.is_whitespace() {
            seen_body = true;
        }
    }
    if depth != 0 {
        return Err(syntax("unbalanced parentheses"));
    }
    if !seen_body {
        return Err(syntax("missing term"));
    }
    out.push((negative, text[start..].trim()));
    Ok(out)
}

fn parse_combination(
    tree: &ScaffoldTree,
    text: &str,
    symbol: char,
) -> Result<Vec<(Scalar, PointAddr)>, FunctionError> {
    if text.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (negative, term) in signed_terms(text)? {
        let open = format!("{symbol}(");
        let (coeff, rest) = match term.split_once('*') {
            Some((c, r)) if r.trim_start().starts_with(&open) => {
                let c: Scalar = c
                    .trim()
                    .parse()
                    .map_err(|_| syntax(format!("bad coefficient '{}'", c.trim())))?;
                (c, r.trim())
            }
            _ => (Scalar::one(), term),
        };
        let inner = rest
            .strip_prefix(&open)
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| syntax(format!("expected {symbol}(point) in '{term}'")))?;
        let p = tree.parse_point(inner)?;
        out.push((if negative { -coeff } else { coeff }, p));
    }
    Ok(out)
}

fn format_combination<'a>(
    tree: &ScaffoldTree,
    terms: impl Iterator<Item = (&'a PointAddr, &'a Scalar)>,
    symbol: char,
) -> String {
    let mut out = String::new();
    for (p, c) in terms {
        let body = format!("{symbol}({})", tree.format_point(p));
        let mag = c.abs();
        let term = if mag.is_one() {
            body
        } else {
            format!("{mag}*{body}")
        };
        match (out.is_empty(), c.is_negative()) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl ScaffoldTree {
    pub fn parse_function(&self, text: &str) -> Result<StepFunction, FunctionError> {
        StepFunction::from_terms(self, parse_combination(self, text, 'g')?)
    }

    pub fn parse_measure(&self, text: &str) -> Result<AtomicMeasure, FunctionError> {
        AtomicMeasure::from_atoms(self, parse_combination(self, text, 'd')?)
    }

    pub fn format_function(&self, f: &StepFunction) -> String {
        format_combination(self, f.terms(), 'g')
    }

    pub fn format_measure(&self, mu: &AtomicMeasure) -> String {
        format_combination(self, mu.atoms(), 'd')
    }
}

/// Parses an exact rational such as `3`, `-2` or `3/2`.
pub fn parse_scalar(text: &str) -> Result<Scalar, FunctionError> {
    text.trim()
        .parse()
        .map_err(|_| syntax(format!("bad rational '{}'", text.trim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::builtin_space;

    #[test]
    fn round_trips() {
        let t = ScaffoldTree::segment(&crate::Ordinal::parse("w2").unwrap()).unwrap();
        for s in ["0", "g(root)", "3*g(root) - g(w + 1)", "-1/2*g(5) + 7*g(w1 + 1)"] {
            let f = t.parse_function(s).unwrap();
            assert_eq!(t.format_function(&f), s);
        }
        for s in ["d(w)", "2*d(3) - d(w1)", "-d(root)"] {
            let mu = t.parse_measure(s).unwrap();
            assert_eq!(t.format_measure(&mu), s);
        }
    }

    #[test]
    fn tree_literals() {
        let t = builtin_space("r1").unwrap();
        let f = t.parse_function("3*g(e1@1) - g(e3[x]@w + 1)");
        assert!(f.is_err(), "e1 needs a copy name");
        let f = t.parse_function("3*g(e1[x]@1) - g(e3[x]@w + 1)").unwrap();
        assert_eq!(f.len(), 2);
        assert!(t.parse_measure("d(e5[*]@2)").is_err());
    }

    #[test]
    fn rejects_garbage() {
        let t = ScaffoldTree::segment(&crate::Ordinal::parse("w").unwrap()).unwrap();
        for s in ["", "g(1) +", "x*g(1)", "g(1", "3g(1)", "d(1)"] {
            assert!(t.parse_function(s).is_err(), "{s}");
        }
        assert_eq!(parse_scalar("3/2").unwrap(), Scalar::new(3.into(), 2.into()));
    }
}
