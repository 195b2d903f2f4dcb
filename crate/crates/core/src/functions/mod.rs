//! Step functions `Σ c·χ_{V_x}` and finitely supported measures `Σ c·δ_x`
//! over a scaffold tree, with exact rational coefficients.
//!
//! `V_x` is the set of points above `x` (inclusive). For `x` of isolated
//! height it is clopen, so every step function is continuous. Pairing a
//! step function with a measure is integration.

mod literal;

pub use literal::parse_scalar;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::space::{AdmissibleSet, PointAddr, ScaffoldTree, SpaceError};

pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionError {
    #[error("generator {0} has limit height")]
    LimitGenerator(String),
    #[error("measure atom {0} lies on an anonymous copy")]
    AnonymousAtom(String),
    #[error("measure has an atom of uncountable cofinality at {0}")]
    NotInD(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// `Σ c_x·χ_{V_x}` with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepFunction {
    terms: BTreeMap<PointAddr, Scalar>,
}

/// `Σ c_x·δ_x` with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicMeasure {
    atoms: BTreeMap<PointAddr, Scalar>,
}

fn accumulate(map: &mut BTreeMap<PointAddr, Scalar>, p: PointAddr, c: Scalar) {
    match map.entry(p) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
    }
}

impl StepFunction {
    pub fn zero() -> StepFunction {
        StepFunction::default()
    }

    /// `χ_{V_x}`; `x` must have isolated height.
    pub fn indicator(tree: &ScaffoldTree, x: &PointAddr) -> Result<StepFunction, FunctionError> {
        StepFunction::from_terms(tree, [(Scalar::from_integer(1.into()), x.clone())])
    }

    pub fn from_terms(
        tree: &ScaffoldTree,
        terms: impl IntoIterator<Item = (Scalar, PointAddr)>,
    ) -> Result<StepFunction, FunctionError> {
        let mut map = BTreeMap::new();
        for (c, x) in terms {
            tree.check_point(&x)?;
            if !x.is_isolated() {
                return Err(FunctionError::LimitGenerator(tree.format_point(&x)));
            }
            accumulate(&mut map, x, c);
        }
        Ok(StepFunction { terms: map })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PointAddr, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, x: &PointAddr) -> Scalar {
        self.terms.get(x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn generators(&self) -> impl Iterator<Item = &PointAddr> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> StepFunction {
        if c.is_zero() {
            return StepFunction::zero();
        }
        StepFunction {
            terms: self.terms.iter().map(|(x, v)| (x.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        let mut terms = self.terms.clone();
        for (x, c) in &other.terms {
            accumulate(&mut terms, x.clone(), c.clone());
        }
        StepFunction { terms }
    }

    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        self.add(&other.scale(&-Scalar::from_integer(1.into())))
    }

    pub fn linear_combine<'a>(
        parts: impl IntoIterator<Item = (Scalar, &'a StepFunction)>,
    ) -> StepFunction {
        parts
            .into_iter()
            .fold(StepFunction::zero(), |acc, (c, f)| acc.add(&f.scale(&c)))
    }
}

impl AtomicMeasure {
    pub fn zero() -> AtomicMeasure {
        AtomicMeasure::default()
    }

    pub fn delta(tree: &ScaffoldTree, x: &PointAddr) -> Result<AtomicMeasure, FunctionError> {
        AtomicMeasure::from_atoms(tree, [(Scalar::from_integer(1.into()), x.clone())])
    }

    pub fn from_atoms(
        tree: &ScaffoldTree,
        atoms: impl IntoIterator<Item = (Scalar, PointAddr)>,
    ) -> Result<AtomicMeasure, FunctionError> {
        let mut map = BTreeMap::new();
        for (c, x) in atoms {
            tree.check_point(&x)?;
            if x.uses_anonymous() {
                return Err(FunctionError::AnonymousAtom(tree.format_point(&x)));
            }
            accumulate(&mut map, x, c);
        }
        Ok(AtomicMeasure { atoms: map })
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&PointAddr, &Scalar)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &PointAddr> {
        self.atoms.keys()
    }

    pub fn mass_at(&self, x: &PointAddr) -> Scalar {
        self.atoms.get(x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_variation(&self) -> Scalar {
        self.atoms.values().map(|c| c.abs()).sum()
    }

    pub fn scale(&self, c: &Scalar) -> AtomicMeasure {
        if c.is_zero() {
            return AtomicMeasure::zero();
        }
        AtomicMeasure {
            atoms: self.atoms.iter().map(|(x, v)| (x.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &AtomicMeasure) -> AtomicMeasure {
        let mut atoms = self.atoms.clone();
        for (x, c) in &other.atoms {
            accumulate(&mut atoms, x.clone(), c.clone());
        }
        AtomicMeasure { atoms }
    }
}

/// Result of the membership test for the induced subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DCheck {
    pub ok: bool,
    pub witness: Option<PointAddr>,
}

impl ScaffoldTree {
    /// `f(p) = Σ_{x ≤ p} c_x`.
    pub fn evaluate(&self, f: &StepFunction, p: &PointAddr) -> Result<Scalar, FunctionError> {
        self.check_point(p)?;
        Ok(f
            .terms
            .iter()
            .filter(|(x, _)| self.leq(x, p))
            .map(|(_, c)| c.clone())
            .sum())
    }

    /// Points at which `f` attains each of its values: the set of
    /// generators below `p` is determined by its largest element.
    pub fn plateau_points(&self, f: &StepFunction) -> Vec<PointAddr> {
        let mut pts = vec![PointAddr::Root];
        pts.extend(f.terms.keys().filter(|x| !x.is_root()).cloned());
        pts
    }

    pub fn sup_norm(&self, f: &StepFunction) -> Scalar {
        self.plateau_points(f)
            .iter()
            .map(|p| self.evaluate(f, p).expect("plateau points are valid").abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// The least point of `A ∩ V_x`, if any.
    pub fn least_above(
        &self,
        set: &AdmissibleSet,
        x: &PointAddr,
    ) -> Result<Option<PointAddr>, FunctionError> {
        if set.contains(x) {
            return Ok(Some(x.clone()));
        }
        let candidates: Vec<PointAddr> = set
            .atoms()
            .iter()
            .filter(|a| self.leq(x, &a.hi_point()))
            .map(|a| a.lo_point())
            .filter(|lo| self.leq(x, lo))
            .collect();
        if candidates.is_empty() {
            return Ok(None);
        }
        candidates
            .iter()
            .find(|c| candidates.iter().all(|d| self.leq(c, d)))
            .cloned()
            .map(Some)
            .ok_or_else(|| {
                FunctionError::Internal(format!(
                    "no least point of the set above {}",
                    self.format_point(x)
                ))
            })
    }

    /// `P_A f = f∘r_A`, computed generator by generator and cross-checked
    /// pointwise.
    pub fn project(
        &self,
        set: &AdmissibleSet,
        f: &StepFunction,
    ) -> Result<StepFunction, FunctionError> {
        let mut terms = BTreeMap::new();
        for (x, c) in &f.terms {
            if let Some(m) = self.least_above(set, x)? {
                accumulate(&mut terms, m, c.clone());
            }
        }
        let out = StepFunction { terms };
        let mut probes = set.endpoints();
        probes.extend(self.plateau_points(f));
        probes.extend(out.terms.keys().cloned());
        let n = probes.len();
        for i in 0..n {
            for j in i + 1..n {
                probes.push(self.wedge(&probes[i], &probes[j])?);
            }
        }
        for p in &probes {
            let direct = self.evaluate(f, &self.retract(set, p)?)?;
            if self.evaluate(&out, p)? != direct {
                return Err(FunctionError::Internal(format!(
                    "projection disagrees with f∘r_A at {}",
                    self.format_point(p)
                )));
            }
        }
        Ok(out)
    }

    /// The image measure under the retraction onto `A`.
    pub fn adjoint(
        &self,
        set: &AdmissibleSet,
        mu: &AtomicMeasure,
    ) -> Result<AtomicMeasure, FunctionError> {
        let mut atoms = BTreeMap::new();
        for (x, c) in &mu.atoms {
            accumulate(&mut atoms, self.retract(set, x)?, c.clone());
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn pair(&self, f: &StepFunction, mu: &AtomicMeasure) -> Result<Scalar, FunctionError> {
        let mut total = Scalar::zero();
        for (x, c) in &mu.atoms {
            total += c * self.evaluate(f, x)?;
        }
        Ok(total)
    }

    /// Membership in the induced subspace: no atom of uncountable cofinality.
    pub fn in_induced_d(&self, mu: &AtomicMeasure) -> Result<DCheck, FunctionError> {
        for x in mu.atoms.keys() {
            if self.point_cofinality(x)?.is_uncountable() {
                return Ok(DCheck {
                    ok: false,
                    witness: Some(x.clone()),
                });
            }
        }
        Ok(DCheck {
            ok: true,
            witness: None,
        })
    }
}
