use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::BasisError;
use crate::ordinal::{CofClass, Ordinal};
use crate::space::{AdmissibleSet, ClosurePolicy, ScaffoldTree};

/// One piece of a block permutation: `λ + from ↦ λ + to` for every limit
/// `λ` whose cofinality is listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiClause {
    pub cofinalities: Vec<CofClass>,
    pub from: u64,
    pub to: u64,
}

/// A bijection of the isolated points of a segment onto themselves that
/// fixes `0` and permutes finite blocks `λ+1, …, λ+b` above selected limits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiRule {
    pub name: String,
    #[serde(default)]
    pub clauses: Vec<XiClause>,
}

impl XiRule {
    pub fn identity() -> XiRule {
        XiRule {
            name: "identity".into(),
            clauses: Vec::new(),
        }
    }

    /// Swaps `λ+1` and `λ+2` above every limit of uncountable cofinality.
    pub fn mbaze_divna_swap() -> XiRule {
        let unc = vec![CofClass::Omega1, CofClass::Omega2];
        XiRule {
            name: "mbaze-divna-swap".into(),
            clauses: vec![
                XiClause {
                    cofinalities: unc.clone(),
                    from: 1,
                    to: 2,
                },
                XiClause {
                    cofinalities: unc,
                    from: 2,
                    to: 1,
                },
            ],
        }
    }

    /// `identity`, `mbaze-divna-swap`, or a JSON rule.
    pub fn parse(text: &str) -> Result<XiRule, BasisError> {
        let rule = match text.trim() {
            "identity" => XiRule::identity(),
            "mbaze-divna-swap" => XiRule::mbaze_divna_swap(),
            t if t.starts_with('{') => {
                serde_json::from_str(t).map_err(|e| BasisError::Rule(e.to_string()))?
            }
            t => return Err(BasisError::Rule(format!("unknown rule '{t}'"))),
        };
        rule.validate()?;
        Ok(rule)
    }

    fn blocks(&self) -> BTreeMap<CofClass, BTreeMap<u64, u64>> {
        let mut out: BTreeMap<CofClass, BTreeMap<u64, u64>> = BTreeMap::new();
        for c in &self.clauses {
            for cf in &c.cofinalities {
                out.entry(*cf).or_default().insert(c.from, c.to);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), BasisError> {
        let bad = |m: String| Err(BasisError::Rule(m));
        for c in &self.clauses {
            if c.from == 0 || c.to == 0 {
                return bad("block offsets start at 1".into());
            }
            if c.cofinalities.iter().any(|cf| *cf < CofClass::Omega) {
                return bad("clauses apply above limits only".into());
            }
        }
        let mut seen = BTreeSet::new();
        for c in &self.clauses {
            for cf in &c.cofinalities {
                if !seen.insert((*cf, c.from)) {
                    return bad(format!("two clauses move {cf}+{}", c.from));
                }
            }
        }
        for (cf, perm) in self.blocks() {
            let from: BTreeSet<_> = perm.keys().collect();
            let to: BTreeSet<_> = perm.values().collect();
            if from != to {
                return bad(format!("clauses for cofinality {cf} do not form a permutation"));
            }
        }
        Ok(())
    }

    /// Splits `α = λ + j` with `λ` zero or a limit and `j` finite, and
    /// returns the block permutation in force above `λ`.
    fn block_at(&self, alpha: &Ordinal) -> (Ordinal, u64, Option<BTreeMap<u64, u64>>) {
        let (lam, j) = alpha.split_finite_tail();
        let perm = if lam.is_zero() {
            None
        } else {
            self.blocks().remove(&lam.cofinality())
        };
        (lam, j, perm)
    }

    fn check_block(&self, lam: &Ordinal, perm: &BTreeMap<u64, u64>, eta: &Ordinal) -> Result<(), BasisError> {
        let size = perm.keys().max().copied().unwrap_or(0);
        let end = lam.checked_add(&Ordinal::from(size)).ok_or(crate::OrdinalError::Overflow)?;
        if lam < eta && end > *eta {
            return Err(BasisError::Closure(format!(
                "the block above {lam} does not fit below {eta}"
            )));
        }
        Ok(())
    }

    /// `ξ(α)` for an isolated `α ≤ η`.
    pub fn apply(&self, alpha: &Ordinal, eta: &Ordinal) -> Result<Ordinal, BasisError> {
        if alpha.is_limit() || alpha > eta {
            return Err(BasisError::NotIndex(alpha.to_string()));
        }
        let (lam, j, perm) = self.block_at(alpha);
        let Some(perm) = perm else {
            return Ok(alpha.clone());
        };
        self.check_block(&lam, &perm, eta)?;
        Ok(match perm.get(&j) {
            Some(to) => &lam + &Ordinal::from(*to),
            None => alpha.clone(),
        })
    }

    /// `ξ⁻¹(y)` for an isolated `y ≤ η`.
    pub fn invert(&self, y: &Ordinal, eta: &Ordinal) -> Result<Ordinal, BasisError> {
        if y.is_limit() || y > eta {
            return Err(BasisError::NotIndex(y.to_string()));
        }
        let (lam, j, perm) = self.block_at(y);
        let Some(perm) = perm else {
            return Ok(y.clone());
        };
        self.check_block(&lam, &perm, eta)?;
        Ok(match perm.iter().find(|(_, to)| **to == j) {
            Some((from, _)) => &lam + &Ordinal::from(*from),
            None => y.clone(),
        })
    }

    /// `closure(ξ(I ∩ [0, β]))` as an admissible subset of the segment.
    pub fn image_closure(&self, tree: &ScaffoldTree, beta: &Ordinal) -> Result<AdmissibleSet, BasisError> {
        let (_, eta) = tree.as_segment().ok_or(crate::SpaceError::NotSegment)?;
        let eta = eta.clone();
        if beta > &eta {
            return Err(BasisError::NotIndex(beta.to_string()));
        }
        let point = |x: &Ordinal| tree.segment_point(x);
        let (lam, j, perm) = self.block_at(beta);
        let mut intervals = Vec::new();
        match perm {
            Some(perm) if j >= 1 && j < perm.keys().max().copied().unwrap_or(0) => {
                self.check_block(&lam, &perm, &eta)?;
                intervals.push((point(&Ordinal::one())?, point(&lam)?));
                for i in 1..=j {
                    let to = perm.get(&i).copied().unwrap_or(i);
                    let y = point(&(&lam + &Ordinal::from(to)))?;
                    intervals.push((y.clone(), y));
                }
            }
            _ if beta.is_zero() => {}
            _ => intervals.push((point(&Ordinal::one())?, point(beta)?)),
        }
        Ok(tree.make_admissible(&intervals, ClosurePolicy::Require)?)
    }
}
