use std::fmt;

use serde::Serialize;

use super::{EdgeId, EdgeSpec, NodeId, ScaffoldTree, SpaceError, SpaceSpec};
use crate::ordinal::{CardClass, Ordinal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_r_tree: bool,
    pub is_r1_tree: bool,
}

/// Answer of the sufficient test for the Valdivia property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Valdivia {
    Yes,
    NoDecision,
    HypothesisFails,
}

impl fmt::Display for Valdivia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Valdivia::Yes => "yes",
            Valdivia::NoDecision => "no-decision",
            Valdivia::HypothesisFails => "hypothesis-fails",
        })
    }
}

impl ScaffoldTree {
    /// Branch nodes of uncountable cofinality together with the number of
    /// their immediate successors. Chain-interior points have exactly one
    /// successor and leaf ends none, so nothing else can violate.
    fn uncountable_branchings(&self) -> Vec<(NodeId, CardClass)> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.height.cofinality().is_uncountable())
            .map(|(i, n)| {
                let ims = n
                    .children
                    .iter()
                    .map(|c| self.edges[c.0].multiplicity)
                    .sum();
                (NodeId(i), ims)
            })
            .collect()
    }

    pub fn classify(&self) -> Classification {
        let b = self.uncountable_branchings();
        Classification {
            is_r_tree: b.iter().all(|(_, m)| m.is_finite()),
            is_r1_tree: b.iter().all(|(_, m)| *m <= CardClass::Finite(1)),
        }
    }

    pub(crate) fn require_r_tree(&self) -> Result<(), SpaceError> {
        match self.uncountable_branchings().iter().find(|(_, m)| !m.is_finite()) {
            Some((n, _)) => Err(SpaceError::NotRTree(self.nodes[n.0].name.clone())),
            None => Ok(()),
        }
    }

    /// Serializes the immediate successors of every violating branch node
    /// into a chain, producing an r₁-tree with the same points.
    pub fn reorder_to_r1(&self) -> Result<ScaffoldTree, SpaceError> {
        self.require_r_tree()?;
        let mut tree = self.clone();
        loop {
            let violator = tree
                .uncountable_branchings()
                .into_iter()
                .find(|(_, m)| *m > CardClass::Finite(1));
            let Some((z, CardClass::Finite(n))) = violator else {
                return Ok(tree);
            };
            tree = ScaffoldTree::build(serialize_children(tree.spec(), &tree.nodes[z.0].name, n))?;
        }
    }

    /// Cardinality of the isolated points, the weight of the tree.
    pub fn weight(&self) -> CardClass {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let per_copy = match e.length.as_finite() {
                    Some(n) => CardClass::Finite(n),
                    None => e.length.cardinality_class(),
                };
                self.copy_factor(EdgeId(i)) * per_copy
            })
            .fold(CardClass::Finite(1), |a, b| a + b)
    }

    /// Cardinality of the points of countable cofinality. Every edge has as
    /// many of them as it has successor offsets, so this equals the weight.
    pub fn countable_cf_weight(&self) -> CardClass {
        self.weight()
    }

    /// Sufficient test for the Valdivia property; exact on segments.
    pub fn valdivia_sufficient(&self) -> Result<Valdivia, SpaceError> {
        self.require_r_tree()?;
        if self.max_height() >= Ordinal::omega2() {
            return Ok(Valdivia::HypothesisFails);
        }
        if self.as_segment().is_some() {
            return Ok(Valdivia::Yes);
        }
        // with at most ℵ₁ points the set of uncountable-cofinality branch
        // points splits into ω₁ singletons
        if self.weight() <= CardClass::Aleph1 {
            Ok(Valdivia::Yes)
        } else {
            Ok(Valdivia::NoDecision)
        }
    }
}

fn fresh(taken: impl Fn(&str) -> bool, base: &str) -> String {
    (0..)
        .map(|i| if i == 0 { base.to_string() } else { format!("{base}{i}") })
        .find(|s| !taken(s))
        .expect("unbounded name supply")
}

/// Rewrites the spec so that the `n` immediate successors of `z` form a
/// chain `z < z[1] < … < z[n]` with everything above them hanging from
/// `z[n]`.
fn serialize_children(spec: &SpaceSpec, z: &str, n: u64) -> SpaceSpec {
    let mut spec = spec.clone();
    let top = fresh(|s| spec.nodes.iter().any(|x| x == s), &format!("{z}.top"));
    let chain = fresh(|s| spec.edges.iter().any(|e| e.id == s), &format!("{z}.chain"));
    let children: Vec<usize> = (0..spec.edges.len())
        .filter(|&i| spec.edges[i].parent == z)
        .collect();
    let mut removed_nodes = Vec::new();
    let mut removed_edges = Vec::new();
    for i in children {
        let c = spec.edges[i].clone();
        if c.length != Ordinal::one() {
            let e = &mut spec.edges[i];
            e.parent = top.clone();
            e.length = Ordinal::one().left_sub(&c.length).expect("length ≥ 1");
            continue;
        }
        removed_edges.push(c.id.clone());
        if let Some(w) = &c.child {
            for f in spec.edges.iter_mut().filter(|f| f.parent == *w) {
                f.parent = top.clone();
                if c.multiplicity != CardClass::Finite(1) {
                    f.multiplicity = c.multiplicity * f.multiplicity;
                    f.copies.clear();
                }
            }
            removed_nodes.push(w.clone());
        }
    }
    spec.edges.retain(|e| !removed_edges.contains(&e.id));
    spec.nodes.retain(|x| !removed_nodes.contains(x));
    spec.nodes.push(top.clone());
    spec.edges.push(EdgeSpec {
        id: chain,
        parent: z.to_string(),
        child: Some(top),
        length: Ordinal::from(n),
        multiplicity: CardClass::Finite(1),
        copies: Vec::new(),
    });
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    fn edge(id: &str, parent: &str, child: Option<&str>, len: &str, m: CardClass) -> EdgeSpec {
        EdgeSpec {
            id: id.into(),
            parent: parent.into(),
            child: child.map(Into::into),
            length: o(len),
            multiplicity: m,
            copies: vec![],
        }
    }

    fn branch_at_w1(children: Vec<EdgeSpec>) -> ScaffoldTree {
        let mut edges = vec![edge("e0", "r", Some("b"), "w1", CardClass::Finite(1))];
        edges.extend(children);
        let mut nodes = vec!["r".to_string(), "b".to_string()];
        for e in &edges {
            if let Some(c) = &e.child {
                if !nodes.contains(c) {
                    nodes.push(c.clone());
                }
            }
        }
        ScaffoldTree::build(SpaceSpec {
            root: "r".into(),
            nodes,
            edges,
        })
        .unwrap()
    }

    #[test]
    fn classification_examples() {
        let seg = ScaffoldTree::segment(&o("w2")).unwrap();
        assert_eq!(
            seg.classify(),
            Classification {
                is_r_tree: true,
                is_r1_tree: true
            }
        );
        let two = branch_at_w1(vec![
            edge("c1", "b", None, "5", CardClass::Finite(1)),
            edge("c2", "b", None, "5", CardClass::Finite(1)),
        ]);
        assert_eq!(
            two.classify(),
            Classification {
                is_r_tree: true,
                is_r1_tree: false
            }
        );
        let many = branch_at_w1(vec![edge("c", "b", None, "5", CardClass::Aleph0)]);
        assert!(!many.classify().is_r_tree);
        assert!(matches!(many.reorder_to_r1(), Err(SpaceError::NotRTree(_))));
    }

    #[test]
    fn reorder_serializes_children() {
        let t = branch_at_w1(vec![
            edge("c1", "b", Some("d"), "1", CardClass::Finite(1)),
            edge("c2", "b", None, "w", CardClass::Finite(2)),
            edge("f", "d", None, "3", CardClass::Finite(2)),
        ]);
        let r = t.reorder_to_r1().unwrap();
        assert!(r.classify().is_r1_tree);
        assert_eq!(r.weight(), t.weight());
        assert_eq!(r.countable_cf_weight(), t.countable_cf_weight());
        let top = r.node(r.node_id("b.top").unwrap());
        assert_eq!(top.height, o("w1 + 3"));
        assert_eq!(top.children.len(), 2);
    }

    #[test]
    fn reorder_is_identity_on_r1_trees() {
        let t = branch_at_w1(vec![edge("c", "b", None, "w", CardClass::Finite(1))]);
        assert_eq!(t.reorder_to_r1().unwrap(), t);
        let countable = ScaffoldTree::build(SpaceSpec {
            root: "r".into(),
            nodes: vec!["r".into(), "b".into()],
            edges: vec![
                edge("e0", "r", Some("b"), "w", CardClass::Finite(1)),
                edge("c", "b", None, "2", CardClass::Finite(3)),
            ],
        })
        .unwrap();
        assert_eq!(countable.reorder_to_r1().unwrap(), countable);
    }

    #[test]
    fn weights_and_valdivia() {
        let seg = ScaffoldTree::segment(&o("w2")).unwrap();
        assert_eq!(seg.weight(), CardClass::Aleph2);
        assert_eq!(seg.valdivia_sufficient().unwrap(), Valdivia::HypothesisFails);
        let seg = ScaffoldTree::segment(&o("w1")).unwrap();
        assert_eq!(seg.valdivia_sufficient().unwrap(), Valdivia::Yes);
        let t = branch_at_w1(vec![edge("c", "b", None, "w1", CardClass::Finite(1))]);
        assert_eq!(t.max_height(), o("w1*2"));
        assert_eq!(t.valdivia_sufficient().unwrap(), Valdivia::Yes);
        let small = ScaffoldTree::segment(&o("5")).unwrap();
        assert_eq!(small.weight(), CardClass::Finite(6));
    }
}
