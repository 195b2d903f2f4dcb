//! Text forms of spaces, points and admissible sets.
//!
//! Points are written `root`, `edge@offset` or `edge[c1/c2]@offset`, with one
//! copy name per bundle edge on the path and `*` for the anonymous copy. A
//! branch node may be written by name, and on a segment a bare ordinal
//! denotes the point at that height. Sets are written
//! `{root, [p, q], r}` where `r` abbreviates `[r, r]`.
//!
//! Space descriptions are JSON (see [`SpaceSpec`]) or line based:
//!
//! ```text
//! root r
//! node b
//! edge e0 r -> b length w1
//! edge e1 b -> leaf length 5 mult w copies x,y
//! ```

use super::{
    AdmissibleSet, ClosurePolicy, CopySel, EdgeId, EdgeSpec, PointAddr, ScaffoldTree, SpaceError,
    SpaceSpec,
};
use crate::ordinal::{CardClass, Ordinal};

fn malformed(msg: impl Into<String>) -> SpaceError {
    SpaceError::Malformed(msg.into())
}

/// Splits on commas that are not nested inside brackets or parentheses.
pub(crate) fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

impl ScaffoldTree {
    pub fn format_point(&self, p: &PointAddr) -> String {
        let PointAddr::On {
            edge,
            copies,
            offset,
        } = p
        else {
            return "root".to_string();
        };
        if self.as_segment().is_some() {
            return offset.to_string();
        }
        let e = &self.edges[edge.0];
        if copies.is_empty() {
            return format!("{}@{offset}", e.name);
        }
        let names: Vec<&str> = copies
            .iter()
            .zip(&e.bundle_path)
            .map(|(sel, b)| match sel {
                CopySel::Named(i) => self.edges[b.0]
                    .copies
                    .get(*i as usize)
                    .map_or("?", String::as_str),
                CopySel::Anon => "*",
            })
            .collect();
        format!("{}[{}]@{offset}", e.name, names.join("/"))
    }

    pub fn parse_point(&self, text: &str) -> Result<PointAddr, SpaceError> {
        let text = text.trim();
        if text == "root" {
            return Ok(PointAddr::Root);
        }
        let (head, offset) = match text.split_once('@') {
            Some((h, o)) => (h.trim(), Some(Ordinal::parse(o)?)),
            None => (text, None),
        };
        let (name, copy_names) = match head.split_once('[') {
            Some((n, rest)) => {
                let inner = rest
                    .strip_suffix(']')
                    .ok_or_else(|| SpaceError::InvalidPoint(format!("missing ']' in '{text}'")))?;
                (n.trim(), inner.split('/').map(str::trim).collect::<Vec<_>>())
            }
            None => (head, Vec::new()),
        };
        let (edge, offset) = match offset {
            Some(off) => {
                let edge = self
                    .edge_id(name)
                    .ok_or_else(|| SpaceError::InvalidPoint(format!("unknown edge '{name}'")))?;
                (edge, off)
            }
            None => {
                if let Some(node) = self.node_id(name) {
                    match self.nodes[node.0].parent_edge {
                        None => return Ok(PointAddr::Root),
                        Some(pe) => (pe, self.edges[pe.0].length.clone()),
                    }
                } else if self.as_segment().is_some() && copy_names.is_empty() {
                    return self.segment_point(&Ordinal::parse(name)?);
                } else {
                    return Err(SpaceError::InvalidPoint(format!("unknown point '{text}'")));
                }
            }
        };
        let bundles = &self.edges[edge.0].bundle_path;
        if copy_names.len() != bundles.len() {
            return Err(SpaceError::InvalidPoint(format!(
                "'{text}' needs {} copy names",
                bundles.len()
            )));
        }
        let copies = copy_names
            .iter()
            .zip(bundles)
            .map(|(c, b)| {
                if *c == "*" {
                    return Ok(CopySel::Anon);
                }
                self.edges[b.0]
                    .copies
                    .iter()
                    .position(|x| x == c)
                    .map(|i| CopySel::Named(i as u32))
                    .ok_or_else(|| SpaceError::InvalidPoint(format!("unknown copy '{c}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = PointAddr::on(edge, copies, offset);
        self.check_point(&p)?;
        Ok(p)
    }

    pub fn format_set(&self, set: &AdmissibleSet) -> String {
        let mut parts = vec!["root".to_string()];
        for a in set.atoms() {
            if a.lo == a.hi {
                parts.push(self.format_point(&a.lo_point()));
            } else {
                parts.push(format!(
                    "[{}, {}]",
                    self.format_point(&a.lo_point()),
                    self.format_point(&a.hi_point())
                ));
            }
        }
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses the intervals of a set literal without validating them.
    pub fn parse_intervals(&self, text: &str) -> Result<Vec<(PointAddr, PointAddr)>, SpaceError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| malformed(format!("set literal must be braced: '{t}'")))?;
        let mut out = Vec::new();
        for item in split_top_level(inner) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            if let Some(body) = item.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                match split_top_level(body).as_slice() {
                    [p, q] => out.push((self.parse_point(p)?, self.parse_point(q)?)),
                    _ => return Err(malformed(format!("interval needs two endpoints: '{item}'"))),
                }
            } else {
                let p = self.parse_point(item)?;
                out.push((p.clone(), p));
            }
        }
        Ok(out)
    }

    pub fn parse_set(&self, text: &str, policy: ClosurePolicy) -> Result<AdmissibleSet, SpaceError> {
        let intervals = self.parse_intervals(text)?;
        self.make_admissible(&intervals, policy)
    }

    /// The line-based description of this tree.
    pub fn to_lines(&self) -> String {
        let mut out = format!("root {}\n", self.spec.root);
        for n in &self.spec.nodes {
            if *n != self.spec.root {
                out.push_str(&format!("node {n}\n"));
            }
        }
        for e in &self.spec.edges {
            out.push_str(&format!(
                "edge {} {} -> {} length {}",
                e.id,
                e.parent,
                e.child.as_deref().unwrap_or("leaf"),
                e.length
            ));
            if e.multiplicity != CardClass::Finite(1) {
                out.push_str(&format!(" mult {}", e.multiplicity));
            }
            if !e.copies.is_empty() {
                out.push_str(&format!(" copies {}", e.copies.join(",")));
            }
            out.push('\n');
        }
        out
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, SpaceError> {
        self.edge_id(name)
            .ok_or_else(|| SpaceError::InvalidPoint(format!("unknown edge '{name}'")))
    }
}

/// Parses a space description in either the JSON or the line format.
pub fn parse_space_spec(text: &str) -> Result<SpaceSpec, SpaceError> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| malformed(e.to_string()));
    }
    let mut root = None;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| malformed(format!("line {}: {msg}", lineno + 1));
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["root", id] => root = Some(id.to_string()),
            ["node", id] => nodes.push(id.to_string()),
            ["edge", id, parent, "->", child, "length", rest @ ..] => {
                let mut length = Vec::new();
                let mut multiplicity = CardClass::Finite(1);
                let mut copies = Vec::new();
                let mut it = rest.iter();
                while let Some(w) = it.next() {
                    match *w {
                        "mult" => {
                            let m = it.next().ok_or_else(|| bad("missing multiplicity"))?;
                            multiplicity = CardClass::parse(m)
                                .ok_or_else(|| bad(&format!("bad multiplicity '{m}'")))?;
                        }
                        "copies" => {
                            let c = it.next().ok_or_else(|| bad("missing copy names"))?;
                            copies = c.split(',').map(str::to_string).collect();
                        }
                        w => length.push(w),
                    }
                }
                if length.is_empty() {
                    return Err(bad("missing length"));
                }
                edges.push(EdgeSpec {
                    id: id.to_string(),
                    parent: parent.to_string(),
                    child: (*child != "leaf").then(|| child.to_string()),
                    length: Ordinal::parse(&length.join(" "))?,
                    multiplicity,
                    copies,
                });
            }
            _ => return Err(bad(&format!("cannot parse '{line}'"))),
        }
    }
    let root = root.ok_or_else(|| malformed("missing 'root' line"))?;
    if !nodes.contains(&root) {
        nodes.insert(0, root.clone());
    }
    Ok(SpaceSpec { root, nodes, edges })
}

const R1_TREE: &str = "\
root root
node a
node b
node c
edge e0 root -> a length w
edge e1 a -> b length w1 mult 2 copies x,y
edge e2 b -> c length 3
edge e3 c -> leaf length w*2
edge e4 c -> leaf length w1 + 5
edge e5 a -> leaf length 7 mult w copies p,q
";

const R_TREE: &str = "\
root root
node b
edge e0 root -> b length w1
edge e1 b -> leaf length w
edge e2 b -> leaf length 5 mult 2
";

const NON_R_TREE: &str = "\
root root
node b
edge e0 root -> b length w1
edge e1 b -> leaf length 3 mult w
";

/// Names of the bundled example trees.
pub const BUILTIN_SPACES: [&str; 3] = ["r1", "r", "non-r"];

/// Example trees: an r₁-tree, an r-tree that is not r₁, and a tree that is
/// not an r-tree.
pub fn builtin_space(name: &str) -> Result<ScaffoldTree, SpaceError> {
    let text = match name {
        "r1" => R1_TREE,
        "r" => R_TREE,
        "non-r" => NON_R_TREE,
        _ => return Err(malformed(format!("unknown builtin space '{name}'"))),
    };
    ScaffoldTree::build(parse_space_spec(text)?)
}

/// Resolves `seg:<ordinal>`, `builtin:<name>` or a path to a space file.
pub fn load_space(desc: &str) -> Result<ScaffoldTree, SpaceError> {
    if let Some(eta) = desc.strip_prefix("seg:") {
        return ScaffoldTree::segment(&Ordinal::parse(eta)?);
    }
    if let Some(name) = desc.strip_prefix("builtin:") {
        return builtin_space(name);
    }
    let text = std::fs::read_to_string(desc)
        .map_err(|e| malformed(format!("cannot read '{desc}': {e}")))?;
    ScaffoldTree::build(parse_space_spec(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load() {
        let t = builtin_space("r1").unwrap();
        assert!(t.classify().is_r1_tree);
        let t = builtin_space("r").unwrap();
        assert!(t.classify().is_r_tree && !t.classify().is_r1_tree);
        let t = builtin_space("non-r").unwrap();
        assert!(!t.classify().is_r_tree);
        assert!(builtin_space("nope").is_err());
    }

    #[test]
    fn point_round_trip() {
        let t = builtin_space("r1").unwrap();
        for text in ["root", "e0@5", "e1[y]@w1", "e3[x]@w + 1", "e5[*]@3", "e5[q]@7"] {
            let p = t.parse_point(text).unwrap();
            assert_eq!(t.format_point(&p), text);
        }
        assert_eq!(t.parse_point("a").unwrap(), t.parse_point("e0@w").unwrap());
        assert!(t.parse_point("e1@3").is_err());
        assert!(t.parse_point("e1[z]@3").is_err());
        assert!(t.parse_point("e0@w + 1").is_err());
    }

    #[test]
    fn segment_points_are_ordinals() {
        let t = load_space("seg:w2").unwrap();
        let p = t.parse_point("w1 + 1").unwrap();
        assert_eq!(t.format_point(&p), "w1 + 1");
        assert_eq!(t.parse_point("e@w1 + 1").unwrap(), p);
    }

    #[test]
    fn set_round_trip() {
        let t = load_space("seg:w2").unwrap();
        let a = t.parse_set("{root, [1, w1], w1 + 5}", ClosurePolicy::Require).unwrap();
        assert_eq!(t.format_set(&a), "{root, [1, w1], w1 + 5}");
        assert_eq!(t.parse_set(&t.format_set(&a), ClosurePolicy::Require).unwrap(), a);
        let t = builtin_space("r1").unwrap();
        let s = "{root, [e0@1, e0@w], e1[x]@1, e5[p]@3}";
        let a = t.parse_set(s, ClosurePolicy::Require).unwrap();
        assert_eq!(t.format_set(&a), s);
    }

    #[test]
    fn line_format_round_trip() {
        let t = builtin_space("r1").unwrap();
        let again = ScaffoldTree::build(parse_space_spec(&t.to_lines()).unwrap()).unwrap();
        assert_eq!(again, t);
        let json = serde_json::to_string(t.spec()).unwrap();
        let from_json = ScaffoldTree::build(parse_space_spec(&json).unwrap()).unwrap();
        assert_eq!(from_json, t);
    }

    #[test]
    fn sibling_singletons_need_isolated_wedge() {
        let t = builtin_space("r1").unwrap();
        // the two copies of e1 meet at a, which has limit height w
        let r = t.parse_set("{e2[x]@1, e2[y]@1}", ClosurePolicy::Strict);
        assert!(matches!(r, Err(SpaceError::LimitWedge(_))));
        let r = t.parse_set("{e2[x]@1, e2[y]@1}", ClosurePolicy::Require);
        assert!(matches!(r, Err(SpaceError::WedgeNotClosed(_))));
        let r = t.parse_set("{e2[x]@1, e2[y]@1}", ClosurePolicy::Interval).unwrap();
        assert!(r.contains(&t.parse_point("e0@w").unwrap()));
        // siblings under c (height w1 + 3) meet at an isolated point
        let r = t.parse_set("{e3[x]@1, e4[x]@1}", ClosurePolicy::Strict).unwrap();
        assert!(r.contains(&t.parse_point("c[x]").unwrap()));
    }
}
