//! Nested JSON encoding of trees: a leaf is its one-based label (or
//! `{"color": "c"|"o", "leaf": k}` with `k` one-based within its color),
//! a vertex is `{"color": "c"|"o", "children": [...]}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Child, ColoredTree, LabeledTree};
use crate::color::Color;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum NestedTree {
    Label(usize),
    ColoredLeaf {
        color: Color,
        leaf: usize,
    },
    Vertex {
        #[serde(default = "closed")]
        color: Color,
        children: Vec<NestedTree>,
    },
}

fn closed() -> Color {
    Color::Closed
}

/// Flattened raw form of a nested tree.
struct Flat {
    closed_leaves: Vec<usize>,
    open_leaves: Vec<usize>,
    /// Child lists; leaves are encoded as `(color, one-based label)`.
    children: Vec<Vec<FlatChild>>,
    colors: Vec<Color>,
}

enum FlatChild {
    Leaf(Color, usize),
    Vertex(usize),
}

impl NestedTree {
    fn flatten(&self) -> Result<Flat> {
        let mut flat = Flat {
            closed_leaves: Vec::new(),
            open_leaves: Vec::new(),
            children: Vec::new(),
            colors: Vec::new(),
        };
        match self {
            NestedTree::Vertex { .. } => {
                self.push(&mut flat)?;
            }
            _ => {
                // a bare leaf is a unit tree
                let (color, label) = self.leaf()?;
                match color {
                    Color::Closed => flat.closed_leaves.push(label),
                    Color::Open => flat.open_leaves.push(label),
                }
            }
        }
        Ok(flat)
    }

    fn leaf(&self) -> Result<(Color, usize)> {
        let (color, label) = match *self {
            NestedTree::Label(l) => (Color::Closed, l),
            NestedTree::ColoredLeaf { color, leaf } => (color, leaf),
            NestedTree::Vertex { .. } => unreachable!("not a leaf"),
        };
        if label == 0 {
            return Err(Error::Format("leaf labels are one-based".into()));
        }
        Ok((color, label))
    }

    fn push(&self, flat: &mut Flat) -> Result<FlatChild> {
        match self {
            NestedTree::Vertex { color, children } => {
                let id = flat.children.len();
                flat.children.push(Vec::new());
                flat.colors.push(*color);
                let mut cs = Vec::with_capacity(children.len());
                for c in children {
                    cs.push(c.push(flat)?);
                }
                flat.children[id] = cs;
                Ok(FlatChild::Vertex(id))
            }
            _ => {
                let (color, label) = self.leaf()?;
                match color {
                    Color::Closed => flat.closed_leaves.push(label),
                    Color::Open => flat.open_leaves.push(label),
                }
                Ok(FlatChild::Leaf(color, label))
            }
        }
    }

    pub(crate) fn to_colored(&self) -> Result<ColoredTree> {
        let flat = self.flatten()?;
        let (p, q) = (flat.closed_leaves.len(), flat.open_leaves.len());
        let raw: Vec<Vec<Child>> = flat
            .children
            .iter()
            .map(|cs| {
                cs.iter()
                    .map(|c| match *c {
                        FlatChild::Leaf(Color::Closed, l) => Child::Leaf(l - 1),
                        // out-of-range open labels are caught by canonicalization
                        FlatChild::Leaf(Color::Open, l) => Child::Leaf(p + l - 1),
                        FlatChild::Vertex(w) => Child::Vertex(w),
                    })
                    .collect()
            })
            .collect();
        if flat.children.is_empty() {
            let ok = match (p, q) {
                (1, 0) => flat.closed_leaves[0] == 1,
                (0, 1) => flat.open_leaves[0] == 1,
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidTree(
                    "a unit tree is the single leaf 1".into(),
                ));
            }
        }
        if flat.open_leaves.iter().any(|&l| l > q) || flat.closed_leaves.iter().any(|&l| l > p) {
            return Err(Error::InvalidTree(
                "leaf labels must be 1..count within each color".into(),
            ));
        }
        ColoredTree::new(p, q, &raw, &flat.colors, 0)
    }

    pub(crate) fn to_labeled(&self) -> Result<LabeledTree> {
        let colored = self.to_colored()?;
        if colored.open_leaves() > 0
            || (0..colored.tree().vertex_count()).any(|v| colored.vertex_color(v) == Color::Open)
        {
            return Err(Error::InvalidTree(
                "an uncolored tree has only closed vertices and leaves".into(),
            ));
        }
        let tree = colored.tree().clone();
        tree.check_reduced()?;
        Ok(tree)
    }

    pub(crate) fn from_labeled(tree: &LabeledTree) -> NestedTree {
        Self::build(tree, &|_| Color::Closed, &|l| NestedTree::Label(l + 1))
    }

    pub(crate) fn from_colored(tree: &ColoredTree) -> NestedTree {
        let p = tree.closed_leaves();
        let leaf = |l: usize| {
            if l < p {
                NestedTree::ColoredLeaf {
                    color: Color::Closed,
                    leaf: l + 1,
                }
            } else {
                NestedTree::ColoredLeaf {
                    color: Color::Open,
                    leaf: l - p + 1,
                }
            }
        };
        Self::build(tree.tree(), &|v| tree.vertex_color(v), &leaf)
    }

    fn build(
        tree: &LabeledTree,
        color: &dyn Fn(usize) -> Color,
        leaf: &dyn Fn(usize) -> NestedTree,
    ) -> NestedTree {
        fn walk(
            t: &LabeledTree,
            v: usize,
            color: &dyn Fn(usize) -> Color,
            leaf: &dyn Fn(usize) -> NestedTree,
        ) -> NestedTree {
            NestedTree::Vertex {
                color: color(v),
                children: t
                    .children(v)
                    .iter()
                    .map(|c| match *c {
                        Child::Leaf(l) => leaf(l),
                        Child::Vertex(w) => walk(t, w, color, leaf),
                    })
                    .collect(),
            }
        }
        if tree.is_unit() {
            return leaf(0);
        }
        walk(tree, 0, color, leaf)
    }
}

impl Serialize for LabeledTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        NestedTree::from_labeled(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        NestedTree::deserialize(deserializer)?
            .to_labeled()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for ColoredTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        NestedTree::from_colored(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ColoredTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        NestedTree::deserialize(deserializer)?
            .to_colored()
            .map_err(serde::de::Error::custom)
    }
}
