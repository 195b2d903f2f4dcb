use super::{CopySel, EdgeId, PointAddr, ScaffoldTree, SpaceError};
use crate::ordinal::{CardClass, Ordinal};

/// A closed interval of offsets `[lo, hi]` on one named edge copy.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub edge: EdgeId,
    pub copies: Vec<CopySel>,
    pub lo: Ordinal,
    pub hi: Ordinal,
}

impl Atom {
    pub fn lo_point(&self) -> PointAddr {
        PointAddr::on(self.edge, self.copies.clone(), self.lo.clone())
    }

    pub fn hi_point(&self) -> PointAddr {
        PointAddr::on(self.edge, self.copies.clone(), self.hi.clone())
    }

    fn chain_key(&self) -> (EdgeId, &[CopySel]) {
        (self.edge, &self.copies)
    }
}

/// A member of the admissible family: the root together with finitely many
/// chain intervals whose left endpoints have isolated height, closed under
/// wedges. Atoms are kept sorted and merged, so equal sets compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleSet {
    atoms: Vec<Atom>,
}

/// What to do when the wedge of two atoms is missing from the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosurePolicy {
    /// Report the missing wedge as an error.
    Require,
    /// Adjoin missing wedges of isolated height; fail on limit wedges.
    Strict,
    /// Also adjoin a limit wedge `w`, together with the final block
    /// `[γ+1, w]` of its edge so that the new left endpoint is isolated.
    Interval,
}

/// Outcome of the σ-continuity test for an admissible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaCheck {
    pub ok: bool,
    /// A point of the set with uncountable cofinality and an immediate
    /// successor outside the set.
    pub witness: Option<PointAddr>,
    /// That successor; it retracts onto the witness.
    pub escape: Option<PointAddr>,
}

impl AdmissibleSet {
    /// The set `{root}`.
    pub fn root_only() -> AdmissibleSet {
        AdmissibleSet::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_root_only(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Left and right endpoints of every atom, plus the root.
    pub fn endpoints(&self) -> Vec<PointAddr> {
        let mut out = vec![PointAddr::Root];
        for a in &self.atoms {
            out.push(a.lo_point());
            if a.hi != a.lo {
                out.push(a.hi_point());
            }
        }
        out
    }

    pub fn contains(&self, p: &PointAddr) -> bool {
        match p {
            PointAddr::Root => true,
            PointAddr::On {
                edge,
                copies,
                offset,
            } => self
                .atoms
                .iter()
                .any(|a| a.edge == *edge && a.copies == *copies && a.lo <= *offset && *offset <= a.hi),
        }
    }

    pub fn is_subset(&self, other: &AdmissibleSet) -> bool {
        self.atoms.iter().all(|a| {
            other
                .atoms
                .iter()
                .any(|b| a.chain_key() == b.chain_key() && b.lo <= a.lo && a.hi <= b.hi)
        })
    }

    fn normalize(mut atoms: Vec<Atom>) -> AdmissibleSet {
        atoms.sort();
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            if let Some(last) = out.last_mut() {
                if last.chain_key() == a.chain_key() && a.lo <= last.hi.successor() {
                    if a.hi > last.hi {
                        last.hi = a.hi;
                    }
                    continue;
                }
            }
            out.push(a);
        }
        AdmissibleSet { atoms: out }
    }
}

impl ScaffoldTree {
    /// Splits the chain interval `[p, q]` into per-edge atoms.
    fn interval_atoms(&self, p: &PointAddr, q: &PointAddr) -> Result<Vec<Atom>, SpaceError> {
        self.check_point(p)?;
        self.check_point(q)?;
        let PointAddr::On {
            edge: qe,
            copies: qc,
            offset: qo,
        } = q
        else {
            // [root, root]
            return Ok(Vec::new());
        };
        if !self.leq(p, q) {
            if self.leq(q, p) {
                return Err(SpaceError::EmptyInterval(self.format_point(p), self.format_point(q)));
            }
            return Err(SpaceError::NotOneChain(self.format_point(p), self.format_point(q)));
        }
        if let PointAddr::On { offset, .. } = p {
            if offset.is_limit() {
                return Err(SpaceError::LimitLeftEndpoint(self.format_point(p)));
            }
        }
        if qc.contains(&CopySel::Anon) {
            return Err(SpaceError::AnonymousCopy(self.format_point(q)));
        }
        let path = &self.edges[qe.0].path;
        let start = match p {
            PointAddr::Root => 0,
            PointAddr::On { edge, .. } => path.iter().position(|e| e == edge).expect("p ≤ q"),
        };
        let mut atoms = Vec::new();
        for (i, e) in path.iter().enumerate().skip(start) {
            let k = self.edges[e.0].bundle_path.len();
            let lo = match p {
                PointAddr::On { offset, .. } if i == start => offset.clone(),
                _ => Ordinal::one(),
            };
            let hi = if e == qe {
                qo.clone()
            } else {
                self.edges[e.0].length.clone()
            };
            atoms.push(Atom {
                edge: *e,
                copies: qc[..k].to_vec(),
                lo,
                hi,
            });
        }
        Ok(atoms)
    }

    /// Builds an admissible set from chain intervals `[p, q]`.
    pub fn make_admissible(
        &self,
        intervals: &[(PointAddr, PointAddr)],
        policy: ClosurePolicy,
    ) -> Result<AdmissibleSet, SpaceError> {
        let mut atoms = Vec::new();
        for (p, q) in intervals {
            atoms.extend(self.interval_atoms(p, q)?);
        }
        self.wedge_close(AdmissibleSet::normalize(atoms), policy)
    }

    fn missing_wedges(&self, set: &AdmissibleSet) -> Vec<PointAddr> {
        let tops: Vec<PointAddr> = set.atoms.iter().map(Atom::hi_point).collect();
        let mut missing = Vec::new();
        for (i, a) in tops.iter().enumerate() {
            for b in &tops[i + 1..] {
                let w = self.wedge(a, b).expect("atom endpoints are valid");
                if !set.contains(&w) && !missing.contains(&w) {
                    missing.push(w);
                }
            }
        }
        missing
    }

    fn wedge_close(
        &self,
        mut set: AdmissibleSet,
        policy: ClosurePolicy,
    ) -> Result<AdmissibleSet, SpaceError> {
        loop {
            let missing = self.missing_wedges(&set);
            if missing.is_empty() {
                return Ok(set);
            }
            let mut atoms = set.atoms.clone();
            for w in missing {
                let PointAddr::On {
                    edge,
                    copies,
                    offset,
                } = &w
                else {
                    unreachable!("the root is always present")
                };
                let lo = match policy {
                    ClosurePolicy::Require => {
                        return Err(SpaceError::WedgeNotClosed(self.format_point(&w)))
                    }
                    _ if offset.is_successor() => offset.clone(),
                    ClosurePolicy::Strict => {
                        return Err(SpaceError::LimitWedge(self.format_point(&w)))
                    }
                    ClosurePolicy::Interval => {
                        let (gamma, _) = offset.split_last().expect("wedge offset is nonzero");
                        gamma.successor()
                    }
                };
                atoms.push(Atom {
                    edge: *edge,
                    copies: copies.clone(),
                    lo,
                    hi: offset.clone(),
                });
            }
            set = AdmissibleSet::normalize(atoms);
        }
    }

    /// The smallest admissible set in this representation containing both.
    pub fn union_admissible(&self, a: &AdmissibleSet, b: &AdmissibleSet) -> AdmissibleSet {
        let atoms = a.atoms.iter().chain(&b.atoms).cloned().collect();
        self.wedge_close(AdmissibleSet::normalize(atoms), ClosurePolicy::Interval)
            .expect("interval closure always succeeds")
    }

    pub fn intersect_admissible(&self, a: &AdmissibleSet, b: &AdmissibleSet) -> AdmissibleSet {
        let mut atoms = Vec::new();
        for x in &a.atoms {
            for y in b.atoms.iter().filter(|y| y.chain_key() == x.chain_key()) {
                let lo = (&x.lo).max(&y.lo);
                let hi = (&x.hi).min(&y.hi);
                if lo <= hi {
                    atoms.push(Atom {
                        edge: x.edge,
                        copies: x.copies.clone(),
                        lo: lo.clone(),
                        hi: hi.clone(),
                    });
                }
            }
        }
        AdmissibleSet::normalize(atoms)
    }

    /// `max(A ∩ p̂)`, the retraction onto `A`.
    pub fn retract(&self, set: &AdmissibleSet, p: &PointAddr) -> Result<PointAddr, SpaceError> {
        self.check_point(p)?;
        let PointAddr::On {
            edge,
            copies,
            offset,
        } = p
        else {
            return Ok(PointAddr::Root);
        };
        let path = &self.edges[edge.0].path;
        let mut best: Option<(usize, Ordinal, &Atom)> = None;
        for a in &set.atoms {
            let Some(depth) = path.iter().position(|e| *e == a.edge) else {
                continue;
            };
            if !copies.starts_with(&a.copies) {
                continue;
            }
            let top = if a.edge == *edge {
                if a.lo > *offset {
                    continue;
                }
                (&a.hi).min(offset).clone()
            } else {
                a.hi.clone()
            };
            let better = match &best {
                None => true,
                Some((d, o, _)) => (depth, &top) > (*d, o),
            };
            if better {
                best = Some((depth, top, a));
            }
        }
        Ok(match best {
            None => PointAddr::Root,
            Some((_, top, a)) => PointAddr::on(a.edge, a.copies.clone(), top),
        })
    }

    /// Cardinality of the isolated-height points of `A`.
    pub fn set_weight(&self, set: &AdmissibleSet) -> CardClass {
        set.atoms
            .iter()
            .map(|a| {
                let d = a.lo.left_sub(&a.hi).expect("lo ≤ hi");
                match d.as_finite() {
                    Some(n) => CardClass::Finite(n + 1),
                    None => d.cardinality_class(),
                }
            })
            .fold(CardClass::Finite(1), |a, b| a + b)
    }

    pub fn is_countable_member(&self, set: &AdmissibleSet) -> bool {
        self.set_weight(set).is_countable()
    }

    /// Every point of `A` with uncountable cofinality must have all of its
    /// immediate successors in `A`. Only right endpoints of atoms can fail.
    pub fn sigma_continuity_ok(&self, set: &AdmissibleSet) -> SigmaCheck {
        for a in &set.atoms {
            let q = a.hi_point();
            if !a.hi.cofinality().is_uncountable() {
                continue;
            }
            let succ = self.immediate_successors(&q).expect("atom endpoint is valid");
            if let Some(y) = succ.into_iter().find(|y| !set.contains(y)) {
                return SigmaCheck {
                    ok: false,
                    witness: Some(q),
                    escape: Some(y),
                };
            }
        }
        SigmaCheck {
            ok: true,
            witness: None,
            escape: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    fn seg(eta: &str) -> ScaffoldTree {
        ScaffoldTree::segment(&o(eta)).unwrap()
    }

    fn at(t: &ScaffoldTree, x: &str) -> PointAddr {
        t.segment_point(&o(x)).unwrap()
    }

    fn set(t: &ScaffoldTree, ivs: &[(&str, &str)]) -> AdmissibleSet {
        let ivs: Vec<_> = ivs.iter().map(|(a, b)| (at(t, a), at(t, b))).collect();
        t.make_admissible(&ivs, ClosurePolicy::Require).unwrap()
    }

    #[test]
    fn rejects_limit_left_endpoint() {
        let t = seg("w2");
        let r = t.make_admissible(&[(at(&t, "w"), at(&t, "w*2"))], ClosurePolicy::Require);
        assert!(matches!(r, Err(SpaceError::LimitLeftEndpoint(_))));
        let r = t.make_admissible(&[(at(&t, "5"), at(&t, "3"))], ClosurePolicy::Require);
        assert!(matches!(r, Err(SpaceError::EmptyInterval(..))));
    }

    #[test]
    fn retract_on_segment() {
        let t = seg("w2");
        let a = set(&t, &[("1", "w1")]);
        assert_eq!(t.retract(&a, &at(&t, "w1 + 1")).unwrap(), at(&t, "w1"));
        assert_eq!(t.retract(&a, &at(&t, "w")).unwrap(), at(&t, "w"));
        let root = AdmissibleSet::root_only();
        assert_eq!(t.retract(&root, &at(&t, "w1")).unwrap(), PointAddr::Root);
    }

    #[test]
    fn union_and_intersection() {
        let t = seg("w2");
        let a = set(&t, &[("1", "w")]);
        let b = set(&t, &[("5", "w*2")]);
        assert_eq!(t.union_admissible(&a, &a), a);
        assert_eq!(t.intersect_admissible(&a, &b), set(&t, &[("5", "w")]));
        assert_eq!(
            t.intersect_admissible(&a, &AdmissibleSet::root_only()),
            AdmissibleSet::root_only()
        );
        assert_eq!(t.union_admissible(&a, &b), set(&t, &[("1", "w*2")]));
        assert!(a.is_subset(&t.union_admissible(&a, &b)));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn adjacent_atoms_merge() {
        let t = seg("w2");
        assert_eq!(set(&t, &[("1", "w"), ("w + 1", "w + 3")]), set(&t, &[("1", "w + 3")]));
    }

    #[test]
    fn weights() {
        let t = seg("w2");
        assert_eq!(t.set_weight(&set(&t, &[("1", "w")])), CardClass::Aleph0);
        assert_eq!(t.set_weight(&set(&t, &[("1", "w1")])), CardClass::Aleph1);
        assert_eq!(t.set_weight(&set(&t, &[("3", "5")])), CardClass::Finite(4));
        assert!(t.is_countable_member(&set(&t, &[("1", "w")])));
    }

    #[test]
    fn sigma_continuity_on_segment() {
        let t = seg("w2");
        let c = t.sigma_continuity_ok(&set(&t, &[("1", "w1")]));
        assert!(!c.ok);
        assert_eq!(c.witness, Some(at(&t, "w1")));
        assert_eq!(c.escape, Some(at(&t, "w1 + 1")));
        assert!(t.sigma_continuity_ok(&set(&t, &[("1", "w1 + 1")])).ok);
        assert!(t.sigma_continuity_ok(&AdmissibleSet::root_only()).ok);
        // the top of the segment has no successors
        let t = seg("w1");
        assert!(t.sigma_continuity_ok(&set(&t, &[("1", "w1")])).ok);
    }
}
