use super::{canonicalize, Canonical, Child, LabeledTree};
use crate::color::Color;
use crate::error::{Error, Result};

/// A tree indexing a stratum of a compactified half-plane configuration
/// space (output color `o`) or of `C(p)` (output color `c`).
///
/// Leaves `0..closed` are closed (interior points) and leaves
/// `closed..closed + open` are open (boundary points). Each vertex carries a
/// color: closed vertices only take closed inputs and have arity at least
/// two; an open vertex with `p` closed and `q` open inputs has `2p + q ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredTree {
    tree: LabeledTree,
    colors: Vec<Color>,
    closed: usize,
    /// Output color of the unit trees, which have no vertex.
    unit_color: Option<Color>,
}

impl ColoredTree {
    pub fn new(
        closed: usize,
        open: usize,
        raw: &[Vec<Child>],
        colors: &[Color],
        root: usize,
    ) -> Result<Self> {
        if raw.len() != colors.len() {
            return Err(Error::SizeMismatch {
                expected: raw.len(),
                found: colors.len(),
            });
        }
        if raw.is_empty() {
            return match (closed, open) {
                (1, 0) => Ok(Self::unit(Color::Closed)),
                (0, 1) => Ok(Self::unit(Color::Open)),
                _ => Err(Error::InvalidTree("only unit trees have no vertex".into())),
            };
        }
        let Canonical { tree, source, .. } = canonicalize(closed + open, raw, root)?;
        let colors: Vec<Color> = source.iter().map(|&v| colors[v]).collect();
        let out = ColoredTree {
            tree,
            colors,
            closed,
            unit_color: None,
        };
        out.check()?;
        Ok(out)
    }

    /// `H₂(1,0;c)` or `H₂(0,1;o)`.
    pub fn unit(color: Color) -> Self {
        let closed = usize::from(color == Color::Closed);
        ColoredTree {
            tree: LabeledTree::unit(),
            colors: Vec::new(),
            closed,
            unit_color: Some(color),
        }
    }

    /// A single open vertex carrying `closed` closed and `open` open leaves.
    pub fn open_corolla(closed: usize, open: usize) -> Result<Self> {
        let raw = vec![(0..closed + open).map(Child::Leaf).collect::<Vec<_>>()];
        Self::new(closed, open, &raw, &[Color::Open], 0)
    }

    /// Reads an uncolored tree as one with all vertices and leaves closed.
    pub fn closed(tree: LabeledTree) -> Self {
        let colors = vec![Color::Closed; tree.vertex_count()];
        let closed = tree.leaf_count();
        ColoredTree {
            unit_color: tree.is_unit().then_some(Color::Closed),
            tree,
            colors,
            closed,
        }
    }

    fn check(&self) -> Result<()> {
        for v in 0..self.tree.vertex_count() {
            let (p, q) = self.input_counts(v);
            match self.colors[v] {
                Color::Closed => {
                    if q > 0 {
                        return Err(Error::InvalidTree(format!(
                            "closed vertex {v} has an open input"
                        )));
                    }
                    if p < 2 {
                        return Err(Error::InvalidTree(format!(
                            "closed vertex {v} has arity {p} < 2"
                        )));
                    }
                }
                Color::Open => {
                    if 2 * p + q < 2 {
                        return Err(Error::InvalidTree(format!(
                            "open vertex {v} has 2p + q = {} < 2",
                            2 * p + q
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tree(&self) -> &LabeledTree {
        &self.tree
    }

    pub fn closed_leaves(&self) -> usize {
        self.closed
    }

    pub fn open_leaves(&self) -> usize {
        self.tree.leaf_count() - self.closed
    }

    pub fn leaf_color(&self, l: usize) -> Color {
        if l < self.closed {
            Color::Closed
        } else {
            Color::Open
        }
    }

    pub fn vertex_color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn child_color(&self, c: Child) -> Color {
        match c {
            Child::Leaf(l) => self.leaf_color(l),
            Child::Vertex(w) => self.colors[w],
        }
    }

    pub fn output_color(&self) -> Color {
        self.unit_color.unwrap_or_else(|| self.colors[0])
    }

    /// `(p, q)`: closed and open inputs of vertex `v`.
    pub fn input_counts(&self, v: usize) -> (usize, usize) {
        self.tree
            .children(v)
            .iter()
            .fold((0, 0), |(p, q), &c| match self.child_color(c) {
                Color::Closed => (p + 1, q),
                Color::Open => (p, q + 1),
            })
    }

    /// Closed vertices contribute `2·arity − 3`, open ones `2p + q − 2`.
    pub fn stratum_dimension(&self) -> usize {
        (0..self.tree.vertex_count())
            .map(|v| {
                let (p, q) = self.input_counts(v);
                match self.colors[v] {
                    Color::Closed => 2 * p - 3,
                    Color::Open => 2 * p + q - 2,
                }
            })
            .sum()
    }

    pub fn internal_edge_count(&self) -> usize {
        self.tree.internal_edge_count()
    }
}
