//! Brute-force answers over a finite suborder. Points are unfolded into
//! explicit step lists from the root, built from the parent links alone,
//! and every query is answered by scanning the finite universe.

use std::cmp::Ordering;

use crate::functions::{Scalar, StepFunction};
use crate::ordinal::Ordinal;
use crate::space::{AdmissibleSet, CopySel, EdgeId, PointAddr, ScaffoldTree};

/// One traversed edge: which copy, and how far along it.
type Step = (EdgeId, Option<CopySel>, Ordinal);

fn step_list(tree: &ScaffoldTree, p: &PointAddr) -> Vec<Step> {
    let PointAddr::On {
        edge,
        copies,
        offset,
    } = p
    else {
        return Vec::new();
    };
    let mut chain = vec![*edge];
    let mut e = *edge;
    while let Some(pe) = tree.node(tree.edge(e).parent).parent_edge {
        chain.push(pe);
        e = pe;
    }
    chain.reverse();
    let mut sels = copies.iter();
    let last = chain.len() - 1;
    chain
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let edge = tree.edge(e);
            let sel = if edge.is_bundle() { sels.next().copied() } else { None };
            let off = if i == last { offset.clone() } else { edge.length.clone() };
            (e, sel, off)
        })
        .collect()
}

fn steps_leq(a: &[Step], b: &[Step]) -> bool {
    let Some((last, init)) = a.split_last() else {
        return true;
    };
    if a.len() > b.len() || init != &b[..init.len()] {
        return false;
    }
    let other = &b[init.len()];
    last.0 == other.0 && last.1 == other.1 && last.2 <= other.2
}

/// The finite suborder: root, endpoints of `A`, the queries and every
/// branch point below a query.
pub struct FiniteModel {
    universe: Vec<(PointAddr, Vec<Step>)>,
    intervals: Vec<(Vec<Step>, Vec<Step>)>,
}

/// Builds the finite model for `set` and `queries`.
pub fn finite_model_oracle(
    tree: &ScaffoldTree,
    set: &AdmissibleSet,
    queries: &[PointAddr],
) -> FiniteModel {
    let mut points = vec![PointAddr::Root];
    let mut intervals = Vec::new();
    for a in set.atoms() {
        let (lo, hi) = (a.lo_point(), a.hi_point());
        intervals.push((step_list(tree, &lo), step_list(tree, &hi)));
        points.push(lo);
        points.push(hi);
    }
    for q in queries {
        points.push(q.clone());
        let PointAddr::On { copies, .. } = q else {
            continue;
        };
        let steps = step_list(tree, q);
        let mut k = 0;
        for (e, sel, _) in &steps[..steps.len() - 1] {
            if sel.is_some() {
                k += 1;
            }
            points.push(tree.edge_end(*e, copies[..k].to_vec()));
        }
    }
    points.sort();
    points.dedup();
    let universe = points
        .into_iter()
        .map(|p| {
            let s = step_list(tree, &p);
            (p, s)
        })
        .collect();
    FiniteModel {
        universe,
        intervals,
    }
}

impl FiniteModel {
    fn steps_of(&self, p: &PointAddr) -> &[Step] {
        &self
            .universe
            .iter()
            .find(|(q, _)| q == p)
            .expect("query points belong to the model")
            .1
    }

    fn member(&self, s: &[Step]) -> bool {
        s.is_empty()
            || self
                .intervals
                .iter()
                .any(|(lo, hi)| steps_leq(lo, s) && steps_leq(s, hi))
    }

    /// The largest element of a chain of universe points.
    fn max_of<'a>(&'a self, chain: Vec<&'a (PointAddr, Vec<Step>)>) -> PointAddr {
        chain
            .iter()
            .find(|(_, s)| chain.iter().all(|(_, t)| steps_leq(t, s)))
            .map(|(p, _)| p.clone())
            .expect("a nonempty finite chain has a maximum")
    }

    pub fn leq(&self, p: &PointAddr, q: &PointAddr) -> bool {
        steps_leq(self.steps_of(p), self.steps_of(q))
    }

    pub fn compare(&self, p: &PointAddr, q: &PointAddr) -> Option<Ordering> {
        match (self.leq(p, q), self.leq(q, p)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// `max(A ∩ p̂)` by scanning the universe.
    pub fn retract(&self, p: &PointAddr) -> PointAddr {
        let sp = self.steps_of(p);
        let below = self
            .universe
            .iter()
            .filter(|(_, s)| steps_leq(s, sp) && self.member(s))
            .collect();
        self.max_of(below)
    }

    /// The largest common lower bound in the universe.
    pub fn wedge(&self, p: &PointAddr, q: &PointAddr) -> PointAddr {
        let (sp, sq) = (self.steps_of(p), self.steps_of(q));
        let below = self
            .universe
            .iter()
            .filter(|(_, s)| steps_leq(s, sp) && steps_leq(s, sq))
            .collect();
        self.max_of(below)
    }

    /// `Σ c_x` over generators `x ≤ p`; `p` must be in the universe, the
    /// generators need not be.
    pub fn evaluate(&self, tree: &ScaffoldTree, f: &StepFunction, p: &PointAddr) -> Scalar {
        let sp = self.steps_of(p);
        f.terms()
            .filter(|(x, _)| steps_leq(&step_list(tree, x), sp))
            .map(|(_, c)| c.clone())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{builtin_space, ClosurePolicy};

    fn seg(eta: &str) -> ScaffoldTree {
        ScaffoldTree::segment(&Ordinal::parse(eta).unwrap()).unwrap()
    }

    #[test]
    fn root_only_retracts_to_root() {
        let t = seg("w2");
        let p = t.parse_point("w1 + 3").unwrap();
        let m = finite_model_oracle(&t, &AdmissibleSet::root_only(), std::slice::from_ref(&p));
        assert_eq!(m.retract(&p), PointAddr::Root);
    }

    #[test]
    fn comparable_wedge_is_smaller() {
        let t = seg("w2");
        let p = t.parse_point("5").unwrap();
        let q = t.parse_point("w").unwrap();
        let m = finite_model_oracle(&t, &AdmissibleSet::root_only(), &[p.clone(), q.clone()]);
        assert_eq!(m.wedge(&p, &q), p);
        assert_eq!(m.compare(&q, &p), Some(Ordering::Greater));
    }

    #[test]
    fn tree_answers() {
        let t = builtin_space("r1").unwrap();
        let p = t.parse_point("e3[x]@w + 1").unwrap();
        let q = t.parse_point("e4[x]@5").unwrap();
        let r = t.parse_point("e2[y]@2").unwrap();
        let a = t.parse_set("{[e0@1, e1[x]@w1]}", ClosurePolicy::Require).unwrap();
        let m = finite_model_oracle(&t, &a, &[p.clone(), q.clone(), r.clone()]);
        assert_eq!(m.wedge(&p, &q), t.parse_point("c[x]").unwrap());
        assert_eq!(m.wedge(&p, &r), t.parse_point("a").unwrap());
        assert_eq!(m.retract(&p), t.parse_point("e1[x]@w1").unwrap());
        assert_eq!(m.retract(&r), t.parse_point("a").unwrap());
        assert_eq!(m.compare(&p, &q), None);
    }
}
