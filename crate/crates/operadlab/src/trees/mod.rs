//! Rooted trees with labeled leaves, indexing the boundary strata of the
//! compactified configuration spaces.
//!
//! Trees are non-planar and reduced. They are stored canonically: vertex `0`
//! is the root, vertices are numbered in pre-order, and the children of each
//! vertex are sorted by their smallest leaf label. Internal edge `e` joins
//! vertex `e + 1` to its parent. Leaf labels are zero-based.

mod colored;
mod enumerate;
mod json;

use std::collections::BTreeSet;
use std::fmt;

pub use colored::ColoredTree;
pub use enumerate::{
    enumerate_trees, face_poset, Enumerator, FacePoset, DEFAULT_ENUMERATION_BOUND,
};

use crate::error::{Error, Result};
use crate::permutation::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Child {
    Leaf(usize),
    Vertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTree {
    leaves: usize,
    /// Empty only for the unit tree (a single leaf and no vertex).
    children: Vec<Vec<Child>>,
}

/// Result of canonicalizing a raw tree: the canonical tree plus, for each
/// canonical vertex, the raw vertex it came from and the raw child index of
/// each of its (reordered) children.
#[derive(Debug, Clone)]
pub(crate) struct Canonical {
    pub tree: LabeledTree,
    pub source: Vec<usize>,
    pub order: Vec<Vec<usize>>,
}

/// Canonicalizes a raw tree given as child lists with an explicit root.
/// Checks that leaves `0..leaves` each occur once and that every vertex is
/// reached exactly once from the root; arity is not checked here.
pub(crate) fn canonicalize(leaves: usize, raw: &[Vec<Child>], root: usize) -> Result<Canonical> {
    if raw.is_empty() {
        if leaves == 1 {
            return Ok(Canonical {
                tree: LabeledTree::unit(),
                source: vec![],
                order: vec![],
            });
        }
        return Err(Error::InvalidTree(
            "a tree without vertices has exactly one leaf".into(),
        ));
    }
    if root >= raw.len() {
        return Err(Error::InvalidTree(format!("root {root} out of range")));
    }
    let mut leaf_seen = vec![false; leaves];
    let mut vertex_seen = vec![false; raw.len()];
    let mut min_leaf = vec![usize::MAX; raw.len()];
    // post-order pass for validation and minimum leaves
    let mut stack = vec![(root, false)];
    vertex_seen[root] = true;
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            let m = raw[v]
                .iter()
                .map(|c| match *c {
                    Child::Leaf(l) => l,
                    Child::Vertex(w) => min_leaf[w],
                })
                .min()
                .ok_or_else(|| Error::InvalidTree(format!("vertex {v} has no children")))?;
            min_leaf[v] = m;
            continue;
        }
        stack.push((v, true));
        for c in &raw[v] {
            match *c {
                Child::Leaf(l) => {
                    if l >= leaves || leaf_seen[l] {
                        return Err(Error::InvalidTree(format!(
                            "leaf label {} is out of range or repeated",
                            l + 1
                        )));
                    }
                    leaf_seen[l] = true;
                }
                Child::Vertex(w) => {
                    if w >= raw.len() || vertex_seen[w] {
                        return Err(Error::InvalidTree(format!(
                            "vertex {w} is out of range or shared"
                        )));
                    }
                    vertex_seen[w] = true;
                    stack.push((w, false));
                }
            }
        }
    }
    if let Some(l) = leaf_seen.iter().position(|s| !s) {
        return Err(Error::InvalidTree(format!(
            "leaf label {} is missing",
            l + 1
        )));
    }
    if vertex_seen.iter().any(|s| !s) {
        return Err(Error::InvalidTree("unreachable vertex".into()));
    }

    let key = |c: &Child| match *c {
        Child::Leaf(l) => l,
        Child::Vertex(w) => min_leaf[w],
    };
    let mut source = Vec::with_capacity(raw.len());
    let mut order = Vec::with_capacity(raw.len());
    let mut children = Vec::with_capacity(raw.len());
    // pre-order numbering with sorted children
    fn visit(
        v: usize,
        raw: &[Vec<Child>],
        key: &dyn Fn(&Child) -> usize,
        source: &mut Vec<usize>,
        order: &mut Vec<Vec<usize>>,
        children: &mut Vec<Vec<Child>>,
    ) {
        let id = source.len();
        let mut idx: Vec<usize> = (0..raw[v].len()).collect();
        idx.sort_by_key(|&k| key(&raw[v][k]));
        source.push(v);
        order.push(idx.clone());
        children.push(Vec::new());
        let mut out = Vec::with_capacity(idx.len());
        for &k in &idx {
            match raw[v][k] {
                Child::Leaf(l) => out.push(Child::Leaf(l)),
                Child::Vertex(w) => {
                    let wid = source.len();
                    visit(w, raw, key, source, order, children);
                    out.push(Child::Vertex(wid));
                }
            }
        }
        children[id] = out;
    }
    visit(root, raw, &key, &mut source, &mut order, &mut children);
    Ok(Canonical {
        tree: LabeledTree { leaves, children },
        source,
        order,
    })
}

impl LabeledTree {
    /// The tree with one leaf and no vertex: the operad unit.
    pub fn unit() -> Self {
        LabeledTree {
            leaves: 1,
            children: Vec::new(),
        }
    }

    /// The tree with a single vertex carrying all `n` leaves.
    pub fn corolla(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::Arity("a tree needs at least one leaf".into())),
            1 => Ok(Self::unit()),
            _ => Ok(LabeledTree {
                leaves: n,
                children: vec![(0..n).map(Child::Leaf).collect()],
            }),
        }
    }

    /// Builds a reduced tree (every vertex of arity at least two).
    pub fn from_raw(leaves: usize, raw: &[Vec<Child>], root: usize) -> Result<Self> {
        let tree = canonicalize(leaves, raw, root)?.tree;
        tree.check_reduced()?;
        Ok(tree)
    }

    pub(crate) fn check_reduced(&self) -> Result<()> {
        match self.children.iter().position(|c| c.len() < 2) {
            Some(v) => Err(Error::InvalidTree(format!(
                "vertex {v} has arity {} < 2",
                self.children[v].len()
            ))),
            None => Ok(()),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn vertex_count(&self) -> usize {
        self.children.len()
    }

    /// `|T|`, the number of internal edges.
    pub fn internal_edge_count(&self) -> usize {
        self.children.len().saturating_sub(1)
    }

    pub fn children(&self, v: usize) -> &[Child] {
        &self.children[v]
    }

    pub fn arity(&self, v: usize) -> usize {
        self.children[v].len()
    }

    /// The lower vertex of internal edge `e`.
    pub fn edge_vertex(&self, e: usize) -> Result<usize> {
        if e + 1 < self.children.len() {
            Ok(e + 1)
        } else {
            Err(Error::NotInternalEdge(e))
        }
    }

    /// `(parent, slot)` of a non-root vertex.
    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        self.position_of(Child::Vertex(v))
    }

    /// `(vertex, slot)` holding leaf `l`, or `None` for the unit tree.
    pub fn leaf_position(&self, l: usize) -> Option<(usize, usize)> {
        self.position_of(Child::Leaf(l))
    }

    fn position_of(&self, target: Child) -> Option<(usize, usize)> {
        self.children
            .iter()
            .enumerate()
            .find_map(|(u, cs)| cs.iter().position(|&c| c == target).map(|slot| (u, slot)))
    }

    pub fn is_corolla(&self) -> bool {
        self.children.len() == 1
    }

    /// Sorted leaf labels below vertex `v`.
    pub fn leaves_under(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for c in &self.children[u] {
                match *c {
                    Child::Leaf(l) => out.push(l),
                    Child::Vertex(w) => stack.push(w),
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn child_leaf_count(&self, c: Child) -> usize {
        match c {
            Child::Leaf(_) => 1,
            Child::Vertex(w) => self.leaves_under(w).len(),
        }
    }

    /// Leaf labels in depth-first order (the order in which nested
    /// substitution lays them out).
    pub fn leaves_in_traversal_order(&self) -> Vec<usize> {
        if self.is_unit() {
            return vec![0];
        }
        let mut out = Vec::with_capacity(self.leaves);
        fn walk(t: &LabeledTree, v: usize, out: &mut Vec<usize>) {
            for c in &t.children[v] {
                match *c {
                    Child::Leaf(l) => out.push(l),
                    Child::Vertex(w) => walk(t, w, out),
                }
            }
        }
        walk(self, 0, &mut out);
        out
    }

    /// Leaf sets of all vertices; two trees on the same leaves are equal iff
    /// their cluster sets are.
    pub fn clusters(&self) -> BTreeSet<Vec<usize>> {
        (0..self.children.len())
            .map(|v| self.leaves_under(v))
            .collect()
    }

    /// `self → coarser`: `coarser` is obtained from `self` by contracting
    /// internal edges.
    pub fn degenerates_to(&self, coarser: &LabeledTree) -> bool {
        self.leaves == coarser.leaves && coarser.clusters().is_subset(&self.clusters())
    }

    /// `Σ_v (2·arity(v) − 3)`, which equals `2n − 3 − |T|`.
    pub fn stratum_dimension(&self) -> usize {
        if self.is_unit() {
            return 0;
        }
        self.children.iter().map(|c| 2 * c.len() - 3).sum()
    }

    pub(crate) fn raw_children(&self) -> &[Vec<Child>] {
        &self.children
    }

    /// `self ∘_i other`: the root of `other` replaces leaf `i`. Leaves of
    /// `other` are renumbered `i..i + m`, later leaves of `self` shift by `m − 1`.
    pub fn graft(&self, i: usize, other: &LabeledTree) -> Result<LabeledTree> {
        Ok(graft_raw(self, i, other)?.tree)
    }

    /// Merges the endpoints of internal edge `e`.
    pub fn contract(&self, e: usize) -> Result<LabeledTree> {
        Ok(contract_raw(self, e)?.tree)
    }

    /// Inverse of contraction: moves the children of `v` at positions
    /// `group` under a new vertex.
    pub fn split_vertex(&self, v: usize, group: &[usize]) -> Result<LabeledTree> {
        Ok(split_raw(self, v, group)?.tree)
    }

    /// Right action: leaf `σ(l)` of `self` becomes leaf `l`.
    pub fn act_permutation(&self, sigma: &Permutation) -> Result<LabeledTree> {
        Ok(relabel_raw(self, sigma)?.tree)
    }
}

pub(crate) fn graft_raw(outer: &LabeledTree, i: usize, inner: &LabeledTree) -> Result<Canonical> {
    let (n1, n2) = (outer.leaves, inner.leaves);
    if i >= n1 {
        return Err(Error::IndexOutOfRange {
            index: i,
            arity: n1,
        });
    }
    let outer_label = |l: usize| if l < i { l } else { l + n2 - 1 };
    let leaves = n1 + n2 - 1;
    if inner.is_unit() {
        let raw: Vec<Vec<Child>> = outer
            .children
            .iter()
            .map(|cs| {
                cs.iter()
                    .map(|&c| relabel_child(c, outer_label, 0))
                    .collect()
            })
            .collect();
        return canonicalize(leaves, &raw, 0);
    }
    if outer.is_unit() {
        return canonicalize(leaves, &inner.children, 0);
    }
    let offset = outer.children.len();
    let (host, slot) = outer.leaf_position(i).expect("leaf exists");
    let mut raw: Vec<Vec<Child>> = outer
        .children
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|&c| relabel_child(c, outer_label, 0))
                .collect()
        })
        .collect();
    raw[host][slot] = Child::Vertex(offset);
    raw.extend(inner.children.iter().map(|cs| {
        cs.iter()
            .map(|&c| relabel_child(c, |l| l + i, offset))
            .collect()
    }));
    canonicalize(leaves, &raw, 0)
}

fn relabel_child(c: Child, leaf: impl Fn(usize) -> usize, vertex_offset: usize) -> Child {
    match c {
        Child::Leaf(l) => Child::Leaf(leaf(l)),
        Child::Vertex(w) => Child::Vertex(w + vertex_offset),
    }
}

/// Contraction of edge `e`; the merged vertex keeps the parent's id and lists
/// the parent's children with the lower vertex's children spliced in at its slot.
pub(crate) fn contract_raw(tree: &LabeledTree, e: usize) -> Result<Canonical> {
    let v = tree.edge_vertex(e)?;
    let (u, slot) = tree.parent(v).expect("non-root vertex has a parent");
    let mut raw = tree.children.clone();
    let lower = std::mem::take(&mut raw[v]);
    raw[u].splice(slot..=slot, lower);
    // drop vertex v and renumber
    let renumber = |w: usize| if w > v { w - 1 } else { w };
    raw.remove(v);
    for cs in &mut raw {
        for c in cs.iter_mut() {
            if let Child::Vertex(w) = c {
                *w = renumber(*w);
            }
        }
    }
    canonicalize(tree.leaves, &raw, 0)
}

pub(crate) fn split_raw(tree: &LabeledTree, v: usize, group: &[usize]) -> Result<Canonical> {
    if v >= tree.children.len() {
        return Err(Error::InvalidTree(format!("no vertex {v}")));
    }
    let arity = tree.children[v].len();
    let mut picked: Vec<usize> = group.to_vec();
    picked.sort_unstable();
    picked.dedup();
    if picked.len() < 2 || picked.len() >= arity || picked.iter().any(|&k| k >= arity) {
        return Err(Error::InvalidTree(format!(
            "cannot split {} of the {arity} children of vertex {v}",
            picked.len()
        )));
    }
    let mut raw = tree.children.clone();
    let new_id = raw.len();
    let moved: Vec<Child> = picked.iter().map(|&k| raw[v][k]).collect();
    let kept: Vec<Child> = (0..arity)
        .filter(|k| !picked.contains(k))
        .map(|k| raw[v][k])
        .collect();
    raw[v] = kept;
    raw[v].push(Child::Vertex(new_id));
    raw.push(moved);
    canonicalize(tree.leaves, &raw, 0)
}

pub(crate) fn relabel_raw(tree: &LabeledTree, sigma: &Permutation) -> Result<Canonical> {
    sigma.check_len(tree.leaves)?;
    let inv = sigma.inverse();
    let raw: Vec<Vec<Child>> = tree
        .children
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|&c| relabel_child(c, |l| inv.apply(l), 0))
                .collect()
        })
        .collect();
    canonicalize(tree.leaves, &raw, 0)
}

impl fmt::Display for LabeledTree {
    /// Nested parentheses with one-based leaf labels, e.g. `((1 2) 3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(t: &LabeledTree, v: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("(")?;
            for (k, c) in t.children[v].iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                match *c {
                    Child::Leaf(l) => write!(f, "{}", l + 1)?,
                    Child::Vertex(w) => walk(t, w, f)?,
                }
            }
            f.write_str(")")
        }
        if self.is_unit() {
            return f.write_str("1");
        }
        walk(self, 0, f)
    }
}
