use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{canonicalize, Child, LabeledTree};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// A tree shape over a set of leaves, children ordered by smallest leaf.
#[derive(Clone)]
enum Shape {
    Leaf(usize),
    Node(Vec<Shape>),
}

/// Exhaustive tree enumeration with an explicit size bound.
#[derive(Debug, Clone, Copy)]
pub struct Enumerator {
    pub bound: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            bound: DEFAULT_ENUMERATION_BOUND,
        }
    }
}

impl Enumerator {
    fn check(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Arity("a tree needs at least one leaf".into()));
        }
        if n > self.bound {
            return Err(Error::BoundExceeded {
                n,
                bound: self.bound,
            });
        }
        Ok(())
    }

    /// All reduced trees with `n` leaves and `k` internal edges, in canonical
    /// order. Out-of-range `k` gives an empty list.
    pub fn trees(&self, n: usize, k: usize) -> Result<Vec<LabeledTree>> {
        self.check(n)?;
        if n == 1 {
            return Ok(if k == 0 {
                vec![LabeledTree::unit()]
            } else {
                vec![]
            });
        }
        if k + 2 > n {
            return Ok(Vec::new());
        }
        let full = (1u32 << n) - 1;
        let mut memo = HashMap::new();
        let mut out: Vec<LabeledTree> = forests(full, k, true, &mut memo)
            .into_iter()
            .map(|children| to_tree(n, &Shape::Node(children)))
            .collect();
        out.sort();
        Ok(out)
    }

    /// All trees with `n` leaves, grouped by codimension `|T|`.
    pub fn all_trees(&self, n: usize) -> Result<Vec<Vec<LabeledTree>>> {
        self.check(n)?;
        if n == 1 {
            return Ok(vec![vec![LabeledTree::unit()]]);
        }
        (0..=n - 2).map(|k| self.trees(n, k)).collect()
    }

    pub fn face_poset(&self, n: usize) -> Result<FacePoset> {
        let grades = self.all_trees(n)?;
        let mut elements = Vec::new();
        let mut grade = Vec::new();
        for (k, trees) in grades.into_iter().enumerate() {
            for t in trees {
                elements.push(t);
                grade.push(k);
            }
        }
        let index: HashMap<&LabeledTree, usize> =
            elements.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut covers = Vec::new();
        for (i, t) in elements.iter().enumerate() {
            let mut targets: Vec<usize> = (0..t.internal_edge_count())
                .map(|e| index[&t.contract(e).expect("edge is internal")])
                .collect();
            targets.sort_unstable();
            targets.dedup();
            covers.extend(targets.into_iter().map(|j| (i, j)));
        }
        Ok(FacePoset {
            leaves: n,
            elements,
            grade,
            covers,
        })
    }
}

pub fn enumerate_trees(n: usize, k: usize) -> Result<Vec<LabeledTree>> {
    Enumerator::default().trees(n, k)
}

pub fn face_poset(n: usize) -> Result<FacePoset> {
    Enumerator::default().face_poset(n)
}

type Memo = HashMap<(u32, usize, bool), Vec<Vec<Shape>>>;

/// Ordered child lists partitioning `mask` into blocks with `k` internal
/// edges in total. With `split`, the whole mask may not form one block.
fn forests(mask: u32, k: usize, split: bool, memo: &mut Memo) -> Vec<Vec<Shape>> {
    if mask == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if let Some(hit) = memo.get(&(mask, k, split)) {
        return hit.clone();
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    // iterate over all submasks of `rest`, block = low ∪ sub
    let mut sub = rest;
    loop {
        let block = low | sub;
        if !(split && block == mask) {
            let remaining = mask & !block;
            let size = block.count_ones() as usize;
            let mut options: Vec<(Shape, usize)> = Vec::new();
            if size == 1 {
                options.push((Shape::Leaf(low.trailing_zeros() as usize), 0));
            } else {
                for kb in 0..=(size - 2) {
                    if kb + 1 > k {
                        break;
                    }
                    for children in forests(block, kb, true, memo) {
                        options.push((Shape::Node(children), kb + 1));
                    }
                }
            }
            for (shape, used) in options {
                if used > k {
                    continue;
                }
                for tail in forests(remaining, k - used, false, memo) {
                    let mut list = Vec::with_capacity(tail.len() + 1);
                    list.push(shape.clone());
                    list.extend(tail);
                    out.push(list);
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    memo.insert((mask, k, split), out.clone());
    out
}

fn to_tree(n: usize, shape: &Shape) -> LabeledTree {
    fn push(shape: &Shape, raw: &mut Vec<Vec<Child>>) -> Child {
        match shape {
            Shape::Leaf(l) => Child::Leaf(*l),
            Shape::Node(children) => {
                let id = raw.len();
                raw.push(Vec::new());
                let cs = children.iter().map(|c| push(c, raw)).collect();
                raw[id] = cs;
                Child::Vertex(id)
            }
        }
    }
    let mut raw = Vec::new();
    push(shape, &mut raw);
    canonicalize(n, &raw, 0)
        .expect("enumerated shapes are valid")
        .tree
}

/// All trees with a fixed leaf count, ordered by contraction.
#[derive(Debug, Clone, Serialize)]
pub struct FacePoset {
    pub leaves: usize,
    pub elements: Vec<LabeledTree>,
    /// `|T|` of each element.
    pub grade: Vec<usize>,
    /// Hasse relation `(finer, coarser)`: the coarser tree is a single-edge
    /// contraction of the finer one.
    pub covers: Vec<(usize, usize)>,
}

impl FacePoset {
    pub fn grade_sizes(&self) -> Vec<usize> {
        let top = self.grade.iter().copied().max().unwrap_or(0);
        let mut sizes = vec![0; top + 1];
        for &g in &self.grade {
            sizes[g] += 1;
        }
        sizes
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph face_poset_{} {{", self.leaves);
        let _ = writeln!(s, "  rankdir=BT;");
        for (i, t) in self.elements.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{t}\", grade={}];", self.grade[i]);
        }
        for (a, b) in &self.covers {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }
}
