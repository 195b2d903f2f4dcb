//! Ordinals below ω₃ in Cantor normal form over the atoms ω, ω₁ and ω₂.
//!
//! An [`Ordinal`] is a finite sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with strictly
//! decreasing exponents and positive coefficients. Exponents are ordinals
//! themselves, except that the epsilon-numbers ω₁ = ω^ω₁ and ω₂ = ω^ω₂ are
//! fixed points and are therefore carried by the dedicated markers
//! [`Exponent::Omega1`] and [`Exponent::Omega2`]. Normal forms are unique, so
//! structural equality is ordinal equality.

mod classes;
mod parse;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use classes::{CardClass, CofClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient overflow")]
    Overflow,
    #[error("{0} is not a limit of countable cofinality")]
    NotCountableLimit(Ordinal),
    #[error("cannot subtract {0} from the left of the smaller ordinal {1}")]
    Underflow(Ordinal, Ordinal),
}

/// The exponent of a single Cantor-normal-form term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Exponent {
    /// An ordinary exponent; never equal to ω₁ or ω₂ (those use the markers).
    Ord(Ordinal),
    Omega1,
    Omega2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    exp: Exponent,
    coeff: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Exponent {
    fn from_ordinal(value: Ordinal) -> Exponent {
        if value == Ordinal::omega1() {
            Exponent::Omega1
        } else if value == Ordinal::omega2() {
            Exponent::Omega2
        } else {
            Exponent::Ord(value)
        }
    }

    /// The exponent as an ordinal value.
    pub fn value(&self) -> Ordinal {
        match self {
            Exponent::Ord(o) => o.clone(),
            Exponent::Omega1 => Ordinal::omega1(),
            Exponent::Omega2 => Ordinal::omega2(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Exponent::Ord(o) if o.is_zero())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        use Exponent::*;
        match (self, other) {
            (Omega1, Omega1) | (Omega2, Omega2) => Ordering::Equal,
            (Omega1, Omega2) => Ordering::Less,
            (Omega2, Omega1) => Ordering::Greater,
            (Ord(a), Ord(b)) => a.cmp(b),
            // the leading exponent of `a` is structurally smaller than `a`,
            // so the recursion through `value()` terminates
            (Ord(a), m) => a.cmp(&m.value()),
            (m, Ord(b)) => m.value().cmp(b),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Term {
    pub fn exponent(&self) -> &Exponent {
        &self.exp
    }

    pub fn coefficient(&self) -> u64 {
        self.coeff
    }
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Ordinal {
        Ordinal::from(1u64)
    }

    pub fn omega() -> Ordinal {
        Ordinal::omega_pow(Ordinal::one())
    }

    pub fn omega1() -> Ordinal {
        Ordinal {
            terms: vec![Term {
                exp: Exponent::Omega1,
                coeff: 1,
            }],
        }
    }

    pub fn omega2() -> Ordinal {
        Ordinal {
            terms: vec![Term {
                exp: Exponent::Omega2,
                coeff: 1,
            }],
        }
    }

    /// ω^exp.
    pub fn omega_pow(exp: Ordinal) -> Ordinal {
        Ordinal {
            terms: vec![Term {
                exp: Exponent::from_ordinal(exp),
                coeff: 1,
            }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exp.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exp.is_zero())
    }

    /// Zero or a successor, i.e. an isolated point of every segment.
    pub fn is_isolated(&self) -> bool {
        !self.is_limit()
    }

    /// ω^e·c for a single term, used when peeling terms apart.
    fn monomial(exp: Exponent, coeff: u64) -> Ordinal {
        if coeff == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term { exp, coeff }],
            }
        }
    }

    /// Ordinal multiplication by a natural number on the right.
    pub fn checked_mul_nat(&self, n: u64) -> Option<Ordinal> {
        if n == 0 || self.is_zero() {
            return Some(Ordinal::zero());
        }
        // (ω^e₁·c₁ + rest)·n = ω^e₁·(c₁·n) + rest: each later copy absorbs
        // the previous tail
        let mut terms = self.terms.clone();
        terms[0].coeff = terms[0].coeff.checked_mul(n)?;
        Some(Ordinal { terms })
    }

    /// Ordinal product `self·rhs` where `rhs = ω^β` with `β ≥ 1`.
    pub fn checked_mul_power(&self, rhs: &Ordinal) -> Option<Ordinal> {
        let [t] = rhs.terms.as_slice() else {
            return None;
        };
        if t.coeff != 1 || t.exp.is_zero() {
            return None;
        }
        let Some(lead) = self.terms.first() else {
            return Some(Ordinal::zero());
        };
        // (ω^e₁·c₁ + …)·ω^β = ω^(e₁+β) for β ≥ 1
        Some(Ordinal::omega_pow(lead.exp.value().checked_add(&t.exp.value())?))
    }

    pub fn checked_add(&self, rhs: &Ordinal) -> Option<Ordinal> {
        let Some(head) = rhs.terms.first() else {
            return Some(self.clone());
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut rest = rhs.terms.iter();
        for t in &self.terms {
            match t.exp.cmp(&head.exp) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term {
                        exp: t.exp.clone(),
                        coeff: t.coeff.checked_add(head.coeff)?,
                    });
                    rest.next();
                    break;
                }
                Ordering::Less => break,
            }
        }
        terms.extend(rest.cloned());
        Some(Ordinal { terms })
    }

    pub fn successor(&self) -> Ordinal {
        self + &Ordinal::one()
    }

    /// The immediate predecessor, or `None` for 0 and limits.
    pub fn predecessor(&self) -> Option<Ordinal> {
        let last = self.terms.last()?;
        if !last.exp.is_zero() {
            return None;
        }
        let mut terms = self.terms.clone();
        let n = terms.len() - 1;
        if terms[n].coeff == 1 {
            terms.pop();
        } else {
            terms[n].coeff -= 1;
        }
        Some(Ordinal { terms })
    }

    /// The unique `d` with `self + d == larger`.
    pub fn left_sub(&self, larger: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self > larger {
            return Err(OrdinalError::Underflow(self.clone(), larger.clone()));
        }
        for (i, (a, b)) in self.terms.iter().zip(&larger.terms).enumerate() {
            if a == b {
                continue;
            }
            let tail = larger.terms[i + 1..].iter().cloned();
            let terms = if a.exp == b.exp {
                // a ≤ b forces a.coeff < b.coeff here
                std::iter::once(Term {
                    exp: b.exp.clone(),
                    coeff: b.coeff - a.coeff,
                })
                .chain(tail)
                .collect()
            } else {
                larger.terms[i..].to_vec()
            };
            return Ok(Ordinal { terms });
        }
        Ok(Ordinal {
            terms: larger.terms[self.terms.len()..].to_vec(),
        })
    }

    /// Splits `self = λ + n` with `λ` zero or a limit and `n` finite.
    pub fn split_finite_tail(&self) -> (Ordinal, u64) {
        match self.terms.last() {
            Some(t) if t.exp.is_zero() => (
                Ordinal {
                    terms: self.terms[..self.terms.len() - 1].to_vec(),
                },
                t.coeff,
            ),
            _ => (self.clone(), 0),
        }
    }

    /// Splits a nonzero ordinal as `prefix + ω^e` where ω^e is one copy of
    /// the last term.
    pub fn split_last(&self) -> Option<(Ordinal, Ordinal)> {
        let last = self.terms.last()?;
        let mut prefix = self.terms.clone();
        let n = prefix.len() - 1;
        if prefix[n].coeff == 1 {
            prefix.pop();
        } else {
            prefix[n].coeff -= 1;
        }
        Some((
            Ordinal { terms: prefix },
            Ordinal::monomial(last.exp.clone(), 1),
        ))
    }

    pub fn cofinality(&self) -> CofClass {
        match self.terms.last() {
            None => CofClass::Zero,
            Some(t) => exponent_cofinality(&t.exp),
        }
    }

    pub fn cardinality_class(&self) -> CardClass {
        if let Some(n) = self.as_finite() {
            return CardClass::Finite(n);
        }
        let lead = &self.terms[0].exp;
        if *lead >= Exponent::Omega2 {
            CardClass::Aleph2
        } else if *lead >= Exponent::Omega1 {
            CardClass::Aleph1
        } else {
            CardClass::Aleph0
        }
    }

    /// Standard fundamental sequence for limits of cofinality ω:
    /// `(γ + ω^(β+1))[n] = γ + ω^β·n` and `(γ + ω^λ)[n] = γ + ω^(λ[n])`.
    pub fn fundamental_sequence(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if self.cofinality() != CofClass::Omega {
            return Err(OrdinalError::NotCountableLimit(self.clone()));
        }
        let (prefix, last) = self.split_last().expect("limit is nonzero");
        let exp = last.terms[0].exp.value();
        let step = match exp.predecessor() {
            Some(beta) => Ordinal::omega_pow(beta)
                .checked_mul_nat(n)
                .ok_or(OrdinalError::Overflow)?,
            None => Ordinal::omega_pow(exp.fundamental_sequence(n)?),
        };
        prefix.checked_add(&step).ok_or(OrdinalError::Overflow)
    }

    pub fn parse(text: &str) -> Result<Ordinal, OrdinalError> {
        parse::parse_ordinal(text)
    }
}

fn exponent_cofinality(exp: &Exponent) -> CofClass {
    match exp {
        Exponent::Omega1 => CofClass::Omega1,
        Exponent::Omega2 => CofClass::Omega2,
        Exponent::Ord(e) if e.is_zero() => CofClass::One,
        Exponent::Ord(e) if e.is_successor() => CofClass::Omega,
        Exponent::Ord(e) => e.cofinality(),
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Ordinal {
        Ordinal::monomial(Exponent::Ord(Ordinal::zero()), n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.exp.cmp(&b.exp).then(a.coeff.cmp(&b.coeff));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add<&Ordinal> for &Ordinal {
    type Output = Ordinal;

    /// Panics on coefficient overflow; use [`Ordinal::checked_add`] where the
    /// operands come from user input.
    fn add(self, rhs: &Ordinal) -> Ordinal {
        self.checked_add(rhs).expect("ordinal coefficient overflow")
    }
}

impl std::ops::Add for Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: Ordinal) -> Ordinal {
        &self + &rhs
    }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse(s)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let base = match &t.exp {
                Exponent::Omega1 => "w1".to_string(),
                Exponent::Omega2 => "w2".to_string(),
                Exponent::Ord(e) if e.is_zero() => {
                    write!(f, "{}", t.coeff)?;
                    continue;
                }
                Exponent::Ord(e) => match e.as_finite() {
                    Some(1) => "w".to_string(),
                    Some(n) => format!("w^{n}"),
                    None if *e == Ordinal::omega() => "w^w".to_string(),
                    None => format!("w^({e})"),
                },
            };
            f.write_str(&base)?;
            if t.coeff > 1 {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Ordinal::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(o("5").cmp(&o("5")), Ordering::Equal);
        assert!(o("w^w") < o("w1"));
        assert!(o("w1*w") < o("w2"));
        assert!(o("w^(w1 + 1)") == o("w1*w"));
        assert!(o("w1 + w") < o("w1*2"));
        assert!(o("w2") < o("w2 + 1"));
    }

    #[test]
    fn add_examples() {
        assert_eq!(&o("w") + &o("5"), o("w + 5"));
        assert_eq!(&o("5") + &o("w"), o("w"));
        assert_eq!(&o("w1 + w") + &o("w1"), o("w1*2"));
        assert_eq!(&o("w*2 + 3") + &o("0"), o("w*2 + 3"));
    }

    #[test]
    fn successor_and_predecessor() {
        assert_eq!(o("w").successor(), o("w + 1"));
        assert_eq!(o("w").predecessor(), None);
        assert_eq!(o("0").predecessor(), None);
        assert_eq!(o("w1 + 3").predecessor(), Some(o("w1 + 2")));
    }

    #[test]
    fn cofinality_examples() {
        assert_eq!(o("7").cofinality(), CofClass::One);
        assert_eq!(o("0").cofinality(), CofClass::Zero);
        assert_eq!(o("w2 + w1*3").cofinality(), CofClass::Omega1);
        assert_eq!(o("w^w").cofinality(), CofClass::Omega);
        assert_eq!(o("w1*w").cofinality(), CofClass::Omega);
        assert_eq!(o("w^(w1*2)").cofinality(), CofClass::Omega1);
        assert_eq!(o("w2").cofinality(), CofClass::Omega2);
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(o("12").cardinality_class(), CardClass::Finite(12));
        assert_eq!(o("w*5 + 2").cardinality_class(), CardClass::Aleph0);
        assert_eq!(o("w1*w").cardinality_class(), CardClass::Aleph1);
        assert_eq!(o("w2 + w1").cardinality_class(), CardClass::Aleph2);
    }

    #[test]
    fn fundamental_sequence_examples() {
        assert_eq!(o("w").fundamental_sequence(7).unwrap(), o("7"));
        assert_eq!(o("w*2").fundamental_sequence(3).unwrap(), o("w + 3"));
        assert_eq!(o("w^2").fundamental_sequence(3).unwrap(), o("w*3"));
        assert_eq!(o("w^w").fundamental_sequence(3).unwrap(), o("w^3"));
        assert_eq!(o("w1*w").fundamental_sequence(2).unwrap(), o("w1*2"));
        assert!(matches!(
            o("w1").fundamental_sequence(0),
            Err(OrdinalError::NotCountableLimit(_))
        ));
        assert!(o("w + 1").fundamental_sequence(0).is_err());
    }

    #[test]
    fn finite_tails() {
        assert_eq!(o("w1 + 3").split_finite_tail(), (o("w1"), 3));
        assert_eq!(o("w").split_finite_tail(), (o("w"), 0));
        assert_eq!(o("4").split_finite_tail(), (o("0"), 4));
    }

    #[test]
    fn left_subtraction() {
        assert_eq!(o("5").left_sub(&o("w + 2")).unwrap(), o("w + 2"));
        assert_eq!(o("w1 + 1").left_sub(&o("w1 + 5")).unwrap(), o("4"));
        assert_eq!(o("w*2").left_sub(&o("w*5 + 1")).unwrap(), o("w*3 + 1"));
        assert!(o("w").left_sub(&o("3")).is_err());
    }

    #[test]
    fn display_examples() {
        assert_eq!(o("0").to_string(), "0");
        assert_eq!(Ordinal::omega1().to_string(), "w1");
        assert_eq!(o("w^2*2 + w + 1").to_string(), "w^2*2 + w + 1");
        assert_eq!(o("w^(w^2)").to_string(), "w^(w^2)");
        assert_eq!(o("w^(w1+1)").to_string(), "w^(w1 + 1)");
    }

    #[test]
    fn mul_nat() {
        assert_eq!(o("w + 1").checked_mul_nat(3).unwrap(), o("w*3 + 1"));
        assert_eq!(o("w^2 + w").checked_mul_nat(2).unwrap(), o("w^2*2 + w"));
        assert_eq!(o("4").checked_mul_nat(3).unwrap(), o("12"));
    }
}
