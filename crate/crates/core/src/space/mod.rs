//! Finitely described rooted trees under the coarse wedge topology.
//!
//! A [`ScaffoldTree`] is a finite rooted tree of branch nodes whose edges are
//! ordinal-length chains. An edge of length `L` from node `n` contributes the
//! points at offsets `1..=L` above `n`; the point at offset `L` is the child
//! node. An edge with multiplicity greater than one stands for that many
//! isomorphic copies of the edge together with the subtree above it. Copies
//! are addressed by name; at most one further "anonymous" representative is
//! available when the multiplicity exceeds the number of named copies.
//!
//! Ordinal segments `[0, η]` are the one-edge special case built by
//! [`ScaffoldTree::segment`].

mod admissible;
mod analysis;
mod literal;
mod point;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{CardClass, Ordinal, OrdinalError};

pub use admissible::{AdmissibleSet, Atom, ClosurePolicy, SigmaCheck};
pub use analysis::{Classification, Valdivia};
pub use literal::{builtin_space, load_space, parse_space_spec, BUILTIN_SPACES};
pub use point::{CopySel, PointAddr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("malformed space description: {0}")]
    Malformed(String),
    #[error("cycle or unreachable node detected at '{0}'")]
    Cycle(String),
    #[error("edge '{0}' has zero length")]
    ZeroLength(String),
    #[error("invalid point address: {0}")]
    InvalidPoint(String),
    #[error("atom endpoints {0} and {1} do not lie on one edge copy")]
    NotOneChain(String, String),
    #[error("empty interval [{0}, {1}]")]
    EmptyInterval(String, String),
    #[error("left endpoint {0} has limit height")]
    LimitLeftEndpoint(String),
    #[error("atom touches the anonymous copy at {0}; only named copies may carry atoms")]
    AnonymousCopy(String),
    #[error("set is not wedge-closed: missing {0}")]
    WedgeNotClosed(String),
    #[error("cannot adjoin wedge {0}: it has limit height")]
    LimitWedge(String),
    #[error("not an r-tree: {0} has uncountable cofinality and infinitely many immediate successors")]
    NotRTree(String),
    #[error("segment length must be at least 1")]
    EmptySegment,
    #[error("{0} belongs to the set")]
    PointInSet(String),
    #[error("operation requires an ordinal segment")]
    NotSegment,
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

/// Serializable description of a scaffold, the input of [`ScaffoldTree::build`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub root: String,
    #[serde(default)]
    pub nodes: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub parent: String,
    /// `None` for an edge ending in a leaf.
    #[serde(default)]
    pub child: Option<String>,
    pub length: Ordinal,
    #[serde(default = "one_copy", with = "multiplicity_serde")]
    pub multiplicity: CardClass,
    #[serde(default)]
    pub copies: Vec<String>,
}

fn one_copy() -> CardClass {
    CardClass::Finite(1)
}

mod multiplicity_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::ordinal::CardClass;

    pub fn serialize<S: Serializer>(m: &CardClass, s: S) -> Result<S::Ok, S::Error> {
        match m {
            CardClass::Finite(n) => s.serialize_u64(*n),
            other => s.collect_str(other),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CardClass, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let parsed = match &v {
            serde_json::Value::Number(n) => n.as_u64().map(CardClass::Finite),
            serde_json::Value::String(s) => CardClass::parse(s),
            _ => None,
        };
        parsed.ok_or_else(|| serde::de::Error::custom(format!("bad multiplicity {v}")))
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub name: String,
    pub parent_edge: Option<EdgeId>,
    pub children: Vec<EdgeId>,
    pub height: Ordinal,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub name: String,
    pub parent: NodeId,
    pub child: Option<NodeId>,
    pub length: Ordinal,
    pub multiplicity: CardClass,
    pub copies: Vec<String>,
    /// Edges from the root up to and including this one.
    pub path: Vec<EdgeId>,
    /// The bundle edges (multiplicity ≠ 1) among `path`.
    pub bundle_path: Vec<EdgeId>,
}

impl Edge {
    pub fn is_bundle(&self) -> bool {
        self.multiplicity != CardClass::Finite(1)
    }

    pub fn has_anonymous(&self) -> bool {
        self.is_bundle() && CardClass::Finite(self.copies.len() as u64) < self.multiplicity
    }
}

#[derive(Debug, Clone)]
pub struct ScaffoldTree {
    spec: SpaceSpec,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    root: NodeId,
    edge_names: BTreeMap<String, EdgeId>,
    node_names: BTreeMap<String, NodeId>,
}

impl PartialEq for ScaffoldTree {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl ScaffoldTree {
    pub fn build(spec: SpaceSpec) -> Result<ScaffoldTree, SpaceError> {
        let mut spec = spec;
        let mut node_names = BTreeMap::new();
        if !spec.nodes.contains(&spec.root) {
            spec.nodes.insert(0, spec.root.clone());
        }
        for (i, n) in spec.nodes.iter().enumerate() {
            if n == "root" && *n != spec.root {
                return Err(SpaceError::Malformed("'root' is reserved for the root node".into()));
            }
            if node_names.insert(n.clone(), NodeId(i)).is_some() {
                return Err(SpaceError::Malformed(format!("duplicate node '{n}'")));
            }
        }
        let mut nodes: Vec<Node> = spec
            .nodes
            .iter()
            .map(|n| Node {
                name: n.clone(),
                parent_edge: None,
                children: Vec::new(),
                height: Ordinal::zero(),
            })
            .collect();
        let root = node_names[&spec.root];

        let mut edge_names = BTreeMap::new();
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (i, e) in spec.edges.iter_mut().enumerate() {
            if e.id.is_empty() || e.id == "root" || e.id.contains(['@', '[', ']', ',', '(', ')']) {
                return Err(SpaceError::Malformed(format!("bad edge id '{}'", e.id)));
            }
            if edge_names.insert(e.id.clone(), EdgeId(i)).is_some() {
                return Err(SpaceError::Malformed(format!("duplicate edge '{}'", e.id)));
            }
            if e.length.is_zero() {
                return Err(SpaceError::ZeroLength(e.id.clone()));
            }
            match e.multiplicity {
                CardClass::Finite(0) | CardClass::Aleph2 => {
                    return Err(SpaceError::Malformed(format!(
                        "edge '{}' has unsupported multiplicity {}",
                        e.id, e.multiplicity
                    )))
                }
                CardClass::Finite(1) if !e.copies.is_empty() => {
                    return Err(SpaceError::Malformed(format!(
                        "edge '{}' names copies but has multiplicity 1",
                        e.id
                    )))
                }
                CardClass::Finite(n) if n > 1 && e.copies.is_empty() => {
                    e.copies = (1..=n).map(|k| k.to_string()).collect();
                }
                _ => {}
            }
            if CardClass::Finite(e.copies.len() as u64) > e.multiplicity {
                return Err(SpaceError::Malformed(format!(
                    "edge '{}' names more copies than its multiplicity",
                    e.id
                )));
            }
            let distinct: BTreeSet<_> = e.copies.iter().collect();
            if distinct.len() != e.copies.len()
                || e.copies.iter().any(|c| c.is_empty() || c == "*" || c.contains(['/', '[', ']', '@']))
            {
                return Err(SpaceError::Malformed(format!("bad copy names on edge '{}'", e.id)));
            }
            let parent = *node_names
                .get(&e.parent)
                .ok_or_else(|| SpaceError::Malformed(format!("unknown node '{}'", e.parent)))?;
            let child = match &e.child {
                None => None,
                Some(c) => Some(
                    *node_names
                        .get(c)
                        .ok_or_else(|| SpaceError::Malformed(format!("unknown node '{c}'")))?,
                ),
            };
            if let Some(c) = child {
                if nodes[c.0].parent_edge.is_some() || c == root {
                    return Err(SpaceError::Cycle(nodes[c.0].name.clone()));
                }
                nodes[c.0].parent_edge = Some(EdgeId(i));
            }
            nodes[parent.0].children.push(EdgeId(i));
            edges.push(Edge {
                name: e.id.clone(),
                parent,
                child,
                length: e.length.clone(),
                multiplicity: e.multiplicity,
                copies: e.copies.clone(),
                path: Vec::new(),
                bundle_path: Vec::new(),
            });
        }

        // walk from the root; anything unvisited sits on a cycle or is detached
        let mut visited = vec![false; nodes.len()];
        let mut stack = vec![(root, Vec::<EdgeId>::new())];
        while let Some((n, path)) = stack.pop() {
            if visited[n.0] {
                return Err(SpaceError::Cycle(nodes[n.0].name.clone()));
            }
            visited[n.0] = true;
            for &eid in &nodes[n.0].children.clone() {
                let mut p = path.clone();
                p.push(eid);
                let bundle_path = p.iter().copied().filter(|x| edges[x.0].is_bundle()).collect();
                edges[eid.0].path = p.clone();
                edges[eid.0].bundle_path = bundle_path;
                if let Some(c) = edges[eid.0].child {
                    let h = nodes[n.0]
                        .height
                        .checked_add(&edges[eid.0].length)
                        .ok_or(OrdinalError::Overflow)?;
                    nodes[c.0].height = h;
                    stack.push((c, p));
                }
            }
        }
        if let Some(i) = visited.iter().position(|v| !v) {
            return Err(SpaceError::Cycle(nodes[i].name.clone()));
        }

        Ok(ScaffoldTree {
            spec,
            nodes,
            edges,
            root,
            edge_names,
            node_names,
        })
    }

    /// The ordinal segment `[0, η]` as a single edge of length η.
    pub fn segment(eta: &Ordinal) -> Result<ScaffoldTree, SpaceError> {
        if eta.is_zero() {
            return Err(SpaceError::EmptySegment);
        }
        ScaffoldTree::build(SpaceSpec {
            root: "root".into(),
            nodes: vec!["root".into()],
            edges: vec![EdgeSpec {
                id: "e".into(),
                parent: "root".into(),
                child: None,
                length: eta.clone(),
                multiplicity: CardClass::Finite(1),
                copies: Vec::new(),
            }],
        })
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_names.get(name).copied()
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.node_names.get(name).copied()
    }

    /// `Some((edge, η))` when the tree is the segment `[0, η]`.
    pub fn as_segment(&self) -> Option<(EdgeId, &Ordinal)> {
        match self.edges.as_slice() {
            [e] if e.parent == self.root
                && !e.is_bundle()
                && e.child.is_none_or(|c| self.nodes[c.0].children.is_empty()) =>
            {
                Some((EdgeId(0), &e.length))
            }
            _ => None,
        }
    }

    /// The point of a segment at ordinal `x` (`0` is the root).
    pub fn segment_point(&self, x: &Ordinal) -> Result<PointAddr, SpaceError> {
        let (edge, eta) = self.as_segment().ok_or(SpaceError::NotSegment)?;
        if x.is_zero() {
            return Ok(PointAddr::Root);
        }
        if x > eta {
            return Err(SpaceError::InvalidPoint(format!("{x} exceeds {eta}")));
        }
        Ok(PointAddr::on(edge, Vec::new(), x.clone()))
    }

    /// Inverse of [`ScaffoldTree::segment_point`].
    pub fn segment_ordinal(&self, p: &PointAddr) -> Ordinal {
        match p {
            PointAddr::Root => Ordinal::zero(),
            PointAddr::On { offset, .. } => offset.clone(),
        }
    }

    /// All points at which the tree branches or ends, plus the root.
    pub fn node_points(&self) -> Vec<PointAddr> {
        let mut out = vec![PointAddr::Root];
        for (i, e) in self.edges.iter().enumerate() {
            for copies in self.copy_paths(EdgeId(i)) {
                out.push(PointAddr::on(EdgeId(i), copies, e.length.clone()));
            }
        }
        out
    }

    /// Every copy-selection vector for points on `edge` that use named copies
    /// only, plus (when `with_anon`) the anonymous representative.
    pub fn copy_paths_with(&self, edge: EdgeId, with_anon: bool) -> Vec<Vec<CopySel>> {
        let mut acc: Vec<Vec<CopySel>> = vec![Vec::new()];
        for b in &self.edges[edge.0].bundle_path {
            let be = &self.edges[b.0];
            let mut sels: Vec<CopySel> = (0..be.copies.len() as u32).map(CopySel::Named).collect();
            if with_anon && be.has_anonymous() {
                sels.push(CopySel::Anon);
            }
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    sels.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.push(*s);
                        v
                    })
                })
                .collect();
        }
        acc
    }

    pub fn copy_paths(&self, edge: EdgeId) -> Vec<Vec<CopySel>> {
        self.copy_paths_with(edge, false)
    }

    /// Total number of copies of `edge` in the denoted tree.
    pub fn copy_factor(&self, edge: EdgeId) -> CardClass {
        self.edges[edge.0]
            .path
            .iter()
            .fold(CardClass::Finite(1), |acc, e| acc * self.edges[e.0].multiplicity)
    }

    /// Height of the whole tree: the largest height of any point.
    pub fn max_height(&self) -> Ordinal {
        self.edges
            .iter()
            .map(|e| &self.nodes[e.parent.0].height + &e.length)
            .max()
            .unwrap_or_default()
    }
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

    #[test]
    fn builds_three_node_scaffold() {
        let t = ScaffoldTree::build(SpaceSpec {
            root: "r".into(),
            nodes: vec!["r".into(), "b".into()],
            edges: vec![
                edge("e1", "r", Some("b"), "w", CardClass::Finite(1)),
                edge("e2", "b", None, "5", CardClass::Finite(1)),
                edge("e3", "b", None, "5", CardClass::Finite(1)),
            ],
        })
        .unwrap();
        assert_eq!(t.nodes().len(), 2);
        assert_eq!(t.node(t.node_id("b").unwrap()).height, o("w"));
        assert!(t.as_segment().is_none());
    }

    #[test]
    fn segment_is_degenerate_tree() {
        let t = ScaffoldTree::segment(&o("w2")).unwrap();
        assert_eq!(t.as_segment().map(|(_, l)| l.clone()), Some(o("w2")));
        assert_eq!(ScaffoldTree::segment(&o("0")), Err(SpaceError::EmptySegment));
    }

    #[test]
    fn rejects_bad_scaffolds() {
        let zero = ScaffoldTree::build(SpaceSpec {
            root: "r".into(),
            nodes: vec![],
            edges: vec![edge("e", "r", None, "0", CardClass::Finite(1))],
        });
        assert!(matches!(zero, Err(SpaceError::ZeroLength(_))));
        let cycle = ScaffoldTree::build(SpaceSpec {
            root: "r".into(),
            nodes: vec!["r".into(), "a".into(), "b".into()],
            edges: vec![
                edge("e1", "a", Some("b"), "1", CardClass::Finite(1)),
                edge("e2", "b", Some("a"), "1", CardClass::Finite(1)),
            ],
        });
        assert!(matches!(cycle, Err(SpaceError::Cycle(_))));
    }

    #[test]
    fn bundle_copies_default_to_numbers() {
        let t = ScaffoldTree::build(SpaceSpec {
            root: "r".into(),
            nodes: vec![],
            edges: vec![edge("e", "r", None, "3", CardClass::Finite(3))],
        })
        .unwrap();
        assert_eq!(t.edge(EdgeId(0)).copies, vec!["1", "2", "3"]);
        assert!(!t.edge(EdgeId(0)).has_anonymous());
        let t = ScaffoldTree::build(SpaceSpec {
            root: "r".into(),
            nodes: vec![],
            edges: vec![edge("e", "r", None, "3", CardClass::Aleph0)],
        })
        .unwrap();
        assert!(t.edge(EdgeId(0)).has_anonymous());
        assert_eq!(t.copy_factor(EdgeId(0)), CardClass::Aleph0);
    }
}
