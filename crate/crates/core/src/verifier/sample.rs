//! Seeded random instances: points, admissible sets, step functions and
//! measures drawn from a fixed symbolic pool of offsets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::functions::{AtomicMeasure, Scalar, StepFunction};
use crate::ordinal::Ordinal;
use crate::space::{AdmissibleSet, ClosurePolicy, EdgeId, PointAddr, ScaffoldTree};

const LIMITS: [&str; 14] = [
    "w",
    "w*2",
    "w*3",
    "w^2",
    "w^2 + w",
    "w1",
    "w1 + w",
    "w1*2",
    "w1*2 + w",
    "w1*w",
    "w2",
    "w2 + w",
    "w2 + w1",
    "w2*2",
];

const TAILS: [u64; 5] = [0, 1, 2, 3, 5];

/// Offsets in `[1, length]` used for sampling on an edge of that length.
pub fn offset_pool(length: &Ordinal) -> Vec<Ordinal> {
    let mut pool: Vec<Ordinal> = (1..=12).map(Ordinal::from).collect();
    for l in LIMITS {
        let base = Ordinal::parse(l).expect("pool literals parse");
        pool.extend(TAILS.iter().map(|&n| &base + &Ordinal::from(n)));
    }
    pool.push(length.clone());
    if let Some(p) = length.predecessor() {
        pool.push(p);
    }
    if length.cofinality() == crate::CofClass::Omega {
        for n in 0..4 {
            if let Ok(x) = length.fundamental_sequence(n) {
                pool.push(x.successor());
                pool.push(x);
            }
        }
    }
    pool.retain(|o| !o.is_zero() && o <= length);
    pool.sort();
    pool.dedup();
    pool
}

pub struct Sampler<'a> {
    tree: &'a ScaffoldTree,
    rng: ChaCha8Rng,
    pools: Vec<Vec<Ordinal>>,
    named_edges: Vec<EdgeId>,
}

impl<'a> Sampler<'a> {
    pub fn new(tree: &'a ScaffoldTree, seed: u64) -> Sampler<'a> {
        let pools = tree.edges().iter().map(|e| offset_pool(&e.length)).collect();
        let named_edges = (0..tree.edges().len())
            .map(EdgeId)
            .filter(|e| !tree.copy_paths(*e).is_empty())
            .collect();
        Sampler {
            tree,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pools,
            named_edges,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn pool(&self, edge: EdgeId) -> &[Ordinal] {
        &self.pools[edge.0]
    }

    fn offset(&mut self, edge: EdgeId, isolated: bool, at_most: Option<&Ordinal>) -> Ordinal {
        let choices: Vec<&Ordinal> = self.pools[edge.0]
            .iter()
            .filter(|o| !isolated || o.is_successor())
            .filter(|o| at_most.is_none_or(|m| *o <= m))
            .collect();
        (*choices.choose(&mut self.rng).expect("1 is always in the pool")).clone()
    }

    /// Any point, possibly on an anonymous copy.
    pub fn point(&mut self) -> PointAddr {
        let edges = self.tree.edges().len();
        if edges == 0 || self.rng.gen_ratio(1, 16) {
            return PointAddr::Root;
        }
        let edge = EdgeId(self.rng.gen_range(0..edges));
        let paths = self.tree.copy_paths_with(edge, true);
        match paths.choose(&mut self.rng).cloned() {
            None => PointAddr::Root,
            Some(copies) => {
                let offset = self.offset(edge, false, None);
                PointAddr::on(edge, copies, offset)
            }
        }
    }

    /// A point on named copies only.
    pub fn named_point(&mut self, isolated: bool) -> PointAddr {
        let Some(&edge) = self.named_edges.choose(&mut self.rng) else {
            return PointAddr::Root;
        };
        let copies = self
            .tree
            .copy_paths(edge)
            .choose(&mut self.rng)
            .cloned()
            .expect("edge has named copies");
        let offset = self.offset(edge, isolated, None);
        PointAddr::on(edge, copies, offset)
    }

    /// A chain interval `[p, q]` with `p` of isolated height.
    fn interval(&mut self) -> Option<(PointAddr, PointAddr)> {
        let q = self.named_point(false);
        let PointAddr::On { edge, copies, offset } = &q else {
            return None;
        };
        let path = self.tree.edge(*edge).path.clone();
        let lower = *path.choose(&mut self.rng).expect("path contains the edge");
        let k = self.tree.edge(lower).bundle_path.len();
        let lo = if lower == *edge {
            self.offset(lower, true, Some(offset))
        } else {
            self.offset(lower, true, None)
        };
        let p = PointAddr::on(lower, copies[..k].to_vec(), lo);
        Some((p, q))
    }

    /// An admissible set with at most `max_atoms` generating intervals.
    pub fn set(&mut self, max_atoms: usize) -> AdmissibleSet {
        let n = self.rng.gen_range(0..=max_atoms);
        let ivs: Vec<_> = (0..n).filter_map(|_| self.interval()).collect();
        self.tree
            .make_admissible(&ivs, ClosurePolicy::Interval)
            .expect("named intervals close under the interval policy")
    }

    /// A set of countable weight.
    pub fn countable_set(&mut self, max_atoms: usize) -> AdmissibleSet {
        for _ in 0..64 {
            let s = self.set(max_atoms);
            if self.tree.is_countable_member(&s) {
                return s;
            }
        }
        AdmissibleSet::root_only()
    }

    fn coefficient(&mut self) -> Scalar {
        let mut c = 0i64;
        while c == 0 {
            c = self.rng.gen_range(-5..=5);
        }
        let d = self.rng.gen_range(1..=3i64);
        Scalar::new(c.into(), d.into())
    }

    /// A step function with at most `max_terms` generators on named copies.
    pub fn function(&mut self, max_terms: usize) -> StepFunction {
        let n = self.rng.gen_range(0..=max_terms);
        let terms: Vec<_> = (0..n)
            .map(|_| {
                let x = if self.rng.gen_ratio(1, 6) {
                    PointAddr::Root
                } else {
                    self.named_point(true)
                };
                (self.coefficient(), x)
            })
            .collect();
        StepFunction::from_terms(self.tree, terms).expect("isolated generators")
    }

    /// A step function whose generators are isolated points of `set`.
    pub fn function_in(&mut self, set: &AdmissibleSet, max_terms: usize) -> StepFunction {
        let n = self.rng.gen_range(1..=max_terms);
        let mut terms = Vec::new();
        for _ in 0..n {
            let x = match set.atoms().choose(&mut self.rng) {
                Some(a) if !self.rng.gen_ratio(1, 6) => {
                    let offs: Vec<Ordinal> = self.pools[a.edge.0]
                        .iter()
                        .filter(|o| o.is_successor() && a.lo <= **o && **o <= a.hi)
                        .cloned()
                        .chain(std::iter::once(a.lo.clone()))
                        .collect();
                    let off = offs.choose(&mut self.rng).expect("nonempty").clone();
                    PointAddr::on(a.edge, a.copies.clone(), off)
                }
                _ => PointAddr::Root,
            };
            terms.push((self.coefficient(), x));
        }
        StepFunction::from_terms(self.tree, terms).expect("isolated generators")
    }

    /// An atomic measure on named copies; with `in_d` its atoms have
    /// countable cofinality.
    pub fn measure(&mut self, max_atoms: usize, in_d: bool) -> AtomicMeasure {
        let n = self.rng.gen_range(1..=max_atoms);
        let mut atoms = Vec::new();
        while atoms.len() < n {
            let x = self.named_point(false);
            let cof = self.tree.point_cofinality(&x).expect("sampled point is valid");
            if in_d && cof.is_uncountable() {
                continue;
            }
            atoms.push((self.coefficient(), x));
        }
        AtomicMeasure::from_atoms(self.tree, atoms).expect("named atoms")
    }

    /// Up to `n` distinct isolated points on named copies, the root first.
    /// Offsets are `β + k` for `β` zero or a pool limit and `1 ≤ k ≤ 20`.
    pub fn distinct_isolated(&mut self, n: usize) -> Vec<PointAddr> {
        let mut all = vec![PointAddr::Root];
        for &e in &self.named_edges {
            let length = &self.tree.edge(e).length;
            let mut bases = vec![Ordinal::zero()];
            bases.extend(self.pools[e.0].iter().filter(|o| o.is_limit()).cloned());
            let offs: Vec<Ordinal> = bases
                .iter()
                .flat_map(|b| (1..=20).map(move |k| b + &Ordinal::from(k)))
                .filter(|o| o <= length)
                .collect();
            for copies in self.tree.copy_paths(e) {
                all.extend(offs.iter().map(|o| PointAddr::on(e, copies.clone(), o.clone())));
            }
        }
        all[1..].shuffle(&mut self.rng);
        all.truncate(n);
        all
    }
}
