//! Recursive-descent parser for the ASCII ordinal grammar:
//!
//! ```text
//! expr    := term ("+" term)*
//! term    := nat | atom ("*" factor)*
//! factor  := nat | atom
//! atom    := "w1" | "w2" | "w" ("^" primary)?
//! primary := "(" expr ")" | atom | nat
//! ```
//!
//! Whitespace is insignificant. Sums are evaluated with ordinal addition, so
//! `3 + w` parses to `w`.

use super::{Ordinal, OrdinalError};

struct Parser {
    /// Non-whitespace characters with their byte offsets in the input.
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

pub(super) fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalError> {
    let mut p = Parser {
        chars: text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        pos: 0,
        end: text.len(),
    };
    if p.chars.is_empty() {
        return Err(p.error("empty ordinal expression"));
    }
    let value = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn error(&self, msg: &str) -> OrdinalError {
        OrdinalError::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let rhs = self.term()?;
            acc = acc.checked_add(&rhs).ok_or(OrdinalError::Overflow)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from(self.nat()?)),
            Some('w') => {
                let mut acc = self.atom()?;
                while self.eat('*') {
                    acc = match self.peek() {
                        Some('w') => {
                            let rhs = self.atom()?;
                            acc.checked_mul_power(&rhs).ok_or(OrdinalError::Overflow)?
                        }
                        _ => {
                            let n = self.nat()?;
                            acc.checked_mul_nat(n).ok_or(OrdinalError::Overflow)?
                        }
                    };
                }
                Ok(acc)
            }
            Some(_) => Err(self.error("expected a natural number or 'w'")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        if !self.eat('w') {
            return Err(self.error("expected 'w'"));
        }
        if self.eat('1') {
            return Ok(Ordinal::omega1());
        }
        if self.eat('2') {
            return Ok(Ordinal::omega2());
        }
        if let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                return Err(self.error("only w1 and w2 are supported as indexed atoms"));
            }
        }
        if self.eat('^') {
            let exp = self.primary()?;
            return Ok(Ordinal::omega_pow(exp));
        }
        Ok(Ordinal::omega())
    }

    fn primary(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some('w') => self.atom(),
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from(self.nat()?)),
            _ => Err(self.error("expected an exponent")),
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek() {
            let Some(d) = c.to_digit(10) else { break };
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d)))
                .ok_or(OrdinalError::Overflow)?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a natural number"));
        }
        Ok(value)
    }
}
