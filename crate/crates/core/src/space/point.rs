use std::cmp::Ordering;

use super::{EdgeId, ScaffoldTree, SpaceError};
use crate::ordinal::{CardClass, CofClass, Ordinal};

/// Which copy of a bundle edge a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CopySel {
    /// Index into the edge's named copies.
    Named(u32),
    /// The representative of the copies that carry no name.
    Anon,
}

/// A point of a scaffold tree.
///
/// `copies` holds one selection per bundle edge on the path from the root to
/// `edge` (inclusive), ordered root-outward.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointAddr {
    Root,
    On {
        edge: EdgeId,
        copies: Vec<CopySel>,
        offset: Ordinal,
    },
}

impl PointAddr {
    pub fn on(edge: EdgeId, copies: Vec<CopySel>, offset: Ordinal) -> PointAddr {
        PointAddr::On {
            edge,
            copies,
            offset,
        }
    }

    pub fn is_root(&self) -> bool {
        matches!(self, PointAddr::Root)
    }

    pub fn offset(&self) -> Option<&Ordinal> {
        match self {
            PointAddr::Root => None,
            PointAddr::On { offset, .. } => Some(offset),
        }
    }

    pub fn uses_anonymous(&self) -> bool {
        match self {
            PointAddr::Root => false,
            PointAddr::On { copies, .. } => copies.contains(&CopySel::Anon),
        }
    }

    /// Isolated height: the root, or a successor offset.
    pub fn is_isolated(&self) -> bool {
        match self {
            PointAddr::Root => true,
            PointAddr::On { offset, .. } => offset.is_successor(),
        }
    }
}

impl ScaffoldTree {
    pub fn check_point(&self, p: &PointAddr) -> Result<(), SpaceError> {
        let PointAddr::On {
            edge,
            copies,
            offset,
        } = p
        else {
            return Ok(());
        };
        let bad = |why: &str| Err(SpaceError::InvalidPoint(why.to_string()));
        let Some(e) = self.edges.get(edge.0) else {
            return bad("unknown edge");
        };
        if offset.is_zero() || *offset > e.length {
            return bad(&format!("offset {offset} outside 1..={}", e.length));
        }
        if copies.len() != e.bundle_path.len() {
            return bad(&format!(
                "edge '{}' needs {} copy selections, got {}",
                e.name,
                e.bundle_path.len(),
                copies.len()
            ));
        }
        for (sel, b) in copies.iter().zip(&e.bundle_path) {
            let be = &self.edges[b.0];
            match sel {
                CopySel::Named(i) if (*i as usize) < be.copies.len() => {}
                CopySel::Anon if be.has_anonymous() => {}
                _ => return bad(&format!("no such copy on edge '{}'", be.name)),
            }
        }
        Ok(())
    }

    /// Path from the root as (edge, copy-selection) steps, with the offset
    /// on the last edge.
    pub(crate) fn steps(&self, p: &PointAddr) -> Vec<(EdgeId, Option<CopySel>)> {
        let PointAddr::On { edge, copies, .. } = p else {
            return Vec::new();
        };
        let mut sels = copies.iter();
        self.edges[edge.0]
            .path
            .iter()
            .map(|e| {
                let sel = if self.edges[e.0].is_bundle() {
                    sels.next().copied()
                } else {
                    None
                };
                (*e, sel)
            })
            .collect()
    }

    /// The point at the top of `edge` (its child node or leaf end).
    pub fn edge_end(&self, edge: EdgeId, copies: Vec<CopySel>) -> PointAddr {
        PointAddr::on(edge, copies, self.edges[edge.0].length.clone())
    }

    /// The point at the bottom of the edge a point lies on (its parent node).
    fn edge_base(&self, edge: EdgeId, copies: &[CopySel]) -> PointAddr {
        let parent = self.edges[edge.0].parent;
        match self.nodes[parent.0].parent_edge {
            None => PointAddr::Root,
            Some(pe) => {
                let k = self.edges[pe.0].bundle_path.len();
                self.edge_end(pe, copies[..k].to_vec())
            }
        }
    }

    pub fn height(&self, p: &PointAddr) -> Result<Ordinal, SpaceError> {
        self.check_point(p)?;
        Ok(match p {
            PointAddr::Root => Ordinal::zero(),
            PointAddr::On { edge, offset, .. } => {
                let base = &self.nodes[self.edges[edge.0].parent.0].height;
                base + offset
            }
        })
    }

    /// `p ≤ q` in the tree order.
    pub fn leq(&self, p: &PointAddr, q: &PointAddr) -> bool {
        match (p, q) {
            (PointAddr::Root, _) => true,
            (_, PointAddr::Root) => false,
            (
                PointAddr::On {
                    edge: pe,
                    copies: pc,
                    offset: po,
                },
                PointAddr::On {
                    edge: qe,
                    copies: qc,
                    offset: qo,
                },
            ) => {
                if !self.edges[qe.0].path.contains(pe) || !qc.starts_with(pc) {
                    return false;
                }
                pe != qe || po <= qo
            }
        }
    }

    /// `Some(ordering)` for comparable points, `None` otherwise.
    pub fn compare(&self, p: &PointAddr, q: &PointAddr) -> Option<Ordering> {
        if p == q {
            Some(Ordering::Equal)
        } else if self.leq(p, q) {
            Some(Ordering::Less)
        } else if self.leq(q, p) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// The largest common lower bound of `p` and `q`.
    pub fn wedge(&self, p: &PointAddr, q: &PointAddr) -> Result<PointAddr, SpaceError> {
        self.check_point(p)?;
        self.check_point(q)?;
        if self.leq(p, q) {
            return Ok(p.clone());
        }
        if self.leq(q, p) {
            return Ok(q.clone());
        }
        let sp = self.steps(p);
        let sq = self.steps(q);
        let common = sp.iter().zip(&sq).take_while(|(a, b)| a == b).count();
        if common == 0 {
            return Ok(PointAddr::Root);
        }
        let (edge, _) = sp[common - 1];
        let k = self.edges[edge.0].bundle_path.len();
        let PointAddr::On { copies, .. } = p else {
            unreachable!("root is comparable with everything")
        };
        Ok(self.edge_end(edge, copies[..k].to_vec()))
    }

    /// Cardinality of the set of immediate successors.
    pub fn ims_count(&self, p: &PointAddr) -> Result<CardClass, SpaceError> {
        self.check_point(p)?;
        let node = match p {
            PointAddr::Root => Some(self.root),
            PointAddr::On { edge, offset, .. } => {
                let e = &self.edges[edge.0];
                if *offset < e.length {
                    return Ok(CardClass::Finite(1));
                }
                e.child
            }
        };
        Ok(node.map_or(CardClass::Finite(0), |n| {
            self.nodes[n.0]
                .children
                .iter()
                .map(|c| self.edges[c.0].multiplicity)
                .sum()
        }))
    }

    /// The immediate successors of `p`, restricted to named copies (plus the
    /// anonymous representative where one exists).
    pub fn immediate_successors(&self, p: &PointAddr) -> Result<Vec<PointAddr>, SpaceError> {
        self.check_point(p)?;
        let (node, prefix) = match p {
            PointAddr::Root => (Some(self.root), Vec::new()),
            PointAddr::On {
                edge,
                copies,
                offset,
            } => {
                let e = &self.edges[edge.0];
                if *offset < e.length {
                    return Ok(vec![PointAddr::on(*edge, copies.clone(), offset.successor())]);
                }
                (e.child, copies.clone())
            }
        };
        let Some(node) = node else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for &c in &self.nodes[node.0].children {
            let e = &self.edges[c.0];
            if e.is_bundle() {
                let mut sels: Vec<CopySel> =
                    (0..e.copies.len() as u32).map(CopySel::Named).collect();
                if e.has_anonymous() {
                    sels.push(CopySel::Anon);
                }
                for s in sels {
                    let mut cp = prefix.clone();
                    cp.push(s);
                    out.push(PointAddr::on(c, cp, Ordinal::one()));
                }
            } else {
                out.push(PointAddr::on(c, prefix.clone(), Ordinal::one()));
            }
        }
        Ok(out)
    }

    pub fn point_cofinality(&self, p: &PointAddr) -> Result<CofClass, SpaceError> {
        Ok(self.height(p)?.cofinality())
    }

    /// The immediate predecessor of a non-root point of isolated height.
    pub fn predecessor(&self, p: &PointAddr) -> Result<Option<PointAddr>, SpaceError> {
        self.check_point(p)?;
        let PointAddr::On {
            edge,
            copies,
            offset,
        } = p
        else {
            return Ok(None);
        };
        Ok(match offset.predecessor() {
            None => None,
            Some(prev) if prev.is_zero() => Some(self.edge_base(*edge, copies)),
            Some(prev) => Some(PointAddr::on(*edge, copies.clone(), prev)),
        })
    }
}
