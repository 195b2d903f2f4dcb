use std::fmt;

use serde::{Deserialize, Serialize};

/// Cofinality of an ordinal, coarsened to the values that occur below ω₃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CofClass {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "w")]
    Omega,
    #[serde(rename = "w1")]
    Omega1,
    #[serde(rename = "w2")]
    Omega2,
}

impl CofClass {
    pub fn is_uncountable(self) -> bool {
        matches!(self, CofClass::Omega1 | CofClass::Omega2)
    }

    pub fn is_countable(self) -> bool {
        !self.is_uncountable()
    }

    pub fn parse(text: &str) -> Option<CofClass> {
        Some(match text.trim() {
            "0" => CofClass::Zero,
            "1" => CofClass::One,
            "w" => CofClass::Omega,
            "w1" => CofClass::Omega1,
            "w2" => CofClass::Omega2,
            _ => return None,
        })
    }
}

impl fmt::Display for CofClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CofClass::Zero => "0",
            CofClass::One => "1",
            CofClass::Omega => "w",
            CofClass::Omega1 => "w1",
            CofClass::Omega2 => "w2",
        })
    }
}

/// Cardinality of a set of points: a natural number or one of ℵ₀, ℵ₁, ℵ₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CardClass {
    Finite(u64),
    Aleph0,
    Aleph1,
    Aleph2,
}

impl CardClass {
    pub fn is_finite(self) -> bool {
        matches!(self, CardClass::Finite(_))
    }

    pub fn is_countable(self) -> bool {
        self <= CardClass::Aleph0
    }

    pub fn is_zero(self) -> bool {
        self == CardClass::Finite(0)
    }

    /// Parses `7`, `w`, `w1`, `w2` (the multiplicity syntax of space files).
    pub fn parse(text: &str) -> Option<CardClass> {
        let t = text.trim();
        match t {
            "w" | "w0" => Some(CardClass::Aleph0),
            "w1" => Some(CardClass::Aleph1),
            "w2" => Some(CardClass::Aleph2),
            _ => t.parse().ok().map(CardClass::Finite),
        }
    }
}

impl std::iter::Sum for CardClass {
    fn sum<I: Iterator<Item = CardClass>>(iter: I) -> CardClass {
        iter.fold(CardClass::Finite(0), |a, b| a + b)
    }
}

impl fmt::Display for CardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardClass::Finite(n) => write!(f, "{n}"),
            CardClass::Aleph0 => f.write_str("w"),
            CardClass::Aleph1 => f.write_str("w1"),
            CardClass::Aleph2 => f.write_str("w2"),
        }
    }
}

/// Cardinal sum; finite parts saturate into ℵ₀ rather than wrapping.
impl std::ops::Add for CardClass {
    type Output = CardClass;

    fn add(self, other: CardClass) -> CardClass {
        match (self, other) {
            (CardClass::Finite(a), CardClass::Finite(b)) => {
                a.checked_add(b).map_or(CardClass::Aleph0, CardClass::Finite)
            }
            (a, b) => a.max(b),
        }
    }
}

impl std::ops::Mul for CardClass {
    type Output = CardClass;

    fn mul(self, other: CardClass) -> CardClass {
        match (self, other) {
            (CardClass::Finite(0), _) | (_, CardClass::Finite(0)) => CardClass::Finite(0),
            (CardClass::Finite(a), CardClass::Finite(b)) => {
                a.checked_mul(b).map_or(CardClass::Aleph0, CardClass::Finite)
            }
            (a, b) => a.max(b),
        }
    }
}
