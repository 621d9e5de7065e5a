//! Points of the compactified configuration spaces `C(n)‾` as decorated
//! trees, and the chart maps pushing a boundary point into the interior.
//!
//! A [`DecoratedTree`] carries one normalized configuration per vertex, its
//! points indexed by the vertex's children in canonical order. A
//! [`ChartPoint`] adds a scale `t_e ≥ 0` per internal edge. Evaluating the
//! chart substitutes, at every vertex, each child cluster with positive scale
//! as `x_s + t·M(child)` and re-normalizes; zero-scale edges stay as
//! boundary edges.

use std::collections::BTreeMap;
use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::color::Color;
use crate::config_space::{
    is_conjugation_symmetric, normalize_points, NormalizedConfiguration, Pairing, PlanePoint,
    PointConfiguration, Tolerances,
};
use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::trees::{
    canonicalize, graft_raw, relabel_raw, Canonical, Child, ColoredTree, LabeledTree,
};

/// Upper bound on the default collar width.
pub const DEFAULT_EPSILON_CAP: f64 = 0.1;

/// Outcome of a single insertion `γ_i(x, y, t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaResult {
    Interior(PointConfiguration),
    /// `t = 0`: the inserted cluster has collapsed onto `x_i`.
    Boundary {
        points: Vec<PlanePoint>,
        cluster: Range<usize>,
    },
}

/// `γ_i(x, y, t)`: slot `i` of `x` is replaced by the points `x_i + t·y_j`,
/// spliced in at positions `i..i + |y|`.
pub fn gamma_insert(
    x: &NormalizedConfiguration,
    y: &NormalizedConfiguration,
    i: usize,
    t: f64,
    tol: &Tolerances,
) -> Result<GammaResult> {
    if i >= x.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            arity: x.len(),
        });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!(
            "scale {t} must be finite and >= 0"
        )));
    }
    let points = splice(x.points(), i, y.points(), t);
    if t == 0.0 {
        return Ok(GammaResult::Boundary {
            points,
            cluster: i..i + y.len(),
        });
    }
    check_collisions(&points, &cluster_groups(points.len(), i..i + y.len()), tol)?;
    Ok(GammaResult::Interior(PointConfiguration::new(points)?))
}

fn splice(x: &[PlanePoint], i: usize, y: &[PlanePoint], t: f64) -> Vec<PlanePoint> {
    let mut out = Vec::with_capacity(x.len() + y.len() - 1);
    out.extend_from_slice(&x[..i]);
    out.extend(y.iter().map(|&z| x[i] + z * t));
    out.extend_from_slice(&x[i + 1..]);
    out
}

/// Points from different groups must be `tol.norm` apart. Within a group
/// the points come from one normalized configuration, scaled down, and
/// only an exact coincidence (underflow of the scale) is a collision.
fn check_collisions(points: &[PlanePoint], groups: &[usize], tol: &Tolerances) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let distance = (points[i] - points[j]).norm();
            let threshold = if groups[i] == groups[j] {
                0.0
            } else {
                tol.norm
            };
            if distance <= threshold {
                return Err(Error::ChartDomain { i, j, distance });
            }
        }
    }
    Ok(())
}

fn cluster_groups(len: usize, cluster: Range<usize>) -> Vec<usize> {
    (0..len)
        .map(|k| usize::from(cluster.contains(&k)))
        .collect()
}

/// Reorders raw per-vertex point lists into the canonical vertex and child
/// order recorded by `canon`.
fn reorder(canon: &Canonical, raw: &[Vec<PlanePoint>]) -> Vec<NormalizedConfiguration> {
    canon
        .source
        .iter()
        .zip(&canon.order)
        .map(|(&r, order)| {
            NormalizedConfiguration::from_normalized_unchecked(
                order.iter().map(|&j| raw[r][j]).collect(),
            )
        })
        .collect()
}

fn reorder_scales(canon: &Canonical, raw: &[f64]) -> Vec<f64> {
    canon.source.iter().skip(1).map(|&r| raw[r]).collect()
}

/// A point of a boundary stratum `C(n)(T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedTree {
    tree: LabeledTree,
    decorations: Vec<NormalizedConfiguration>,
}

impl DecoratedTree {
    pub fn new(tree: LabeledTree, decorations: Vec<NormalizedConfiguration>) -> Result<Self> {
        if decorations.len() != tree.vertex_count() {
            return Err(Error::SizeMismatch {
                expected: tree.vertex_count(),
                found: decorations.len(),
            });
        }
        for (v, d) in decorations.iter().enumerate() {
            if d.len() != tree.arity(v) {
                return Err(Error::SizeMismatch {
                    expected: tree.arity(v),
                    found: d.len(),
                });
            }
        }
        Ok(DecoratedTree { tree, decorations })
    }

    pub fn unit() -> Self {
        DecoratedTree {
            tree: LabeledTree::unit(),
            decorations: Vec::new(),
        }
    }

    /// The interior point `c` of `C(n)`, seen as a decorated corolla.
    pub fn corolla(c: NormalizedConfiguration) -> Self {
        let tree = LabeledTree::corolla(c.len()).expect("normalized configurations have n >= 2");
        DecoratedTree {
            tree,
            decorations: vec![c],
        }
    }

    pub fn tree(&self) -> &LabeledTree {
        &self.tree
    }

    pub fn decorations(&self) -> &[NormalizedConfiguration] {
        &self.decorations
    }

    pub fn decoration(&self, v: usize) -> &NormalizedConfiguration {
        &self.decorations[v]
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaf_count()
    }

    fn raw_points(&self) -> Vec<Vec<PlanePoint>> {
        self.decorations
            .iter()
            .map(|d| d.points().to_vec())
            .collect()
    }

    /// Operad composition of `ℱ₂`: grafts `other` at leaf `i`.
    pub fn graft(&self, i: usize, other: &DecoratedTree) -> Result<DecoratedTree> {
        let canon = graft_raw(&self.tree, i, &other.tree)?;
        let raw = graft_sources(self, other, self.raw_points(), other.raw_points());
        let decorations = reorder(&canon, &raw);
        Ok(DecoratedTree {
            tree: canon.tree,
            decorations,
        })
    }

    /// Right action: leaf `σ(l)` becomes leaf `l`.
    pub fn act_permutation(&self, sigma: &Permutation) -> Result<DecoratedTree> {
        let canon = relabel_raw(&self.tree, sigma)?;
        let decorations = reorder(&canon, &self.raw_points());
        Ok(DecoratedTree {
            tree: canon.tree,
            decorations,
        })
    }

    pub fn conjugate(&self) -> DecoratedTree {
        DecoratedTree {
            tree: self.tree.clone(),
            decorations: self.decorations.iter().map(|d| d.conjugate()).collect(),
        }
    }

    /// Largest decoration distance, or infinity if the trees differ.
    pub fn distance(&self, other: &DecoratedTree) -> f64 {
        if self.tree != other.tree {
            return f64::INFINITY;
        }
        self.decorations
            .iter()
            .zip(&other.decorations)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// Largest admissible collar width for this point: for every internal edge,
    /// half the distance from its slot to the other points of the parent
    /// decoration, divided by the largest norm a normalized configuration of
    /// the child's leaf count can have. Infinite on a corolla.
    pub fn epsilon_max(&self) -> f64 {
        (1..self.tree.vertex_count())
            .map(|w| {
                let (u, s) = self.tree.parent(w).expect("non-root vertex");
                let x = self.decorations[u].points();
                let gap = x
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != s)
                    .map(|(_, z)| (z - x[s]).norm())
                    .fold(f64::INFINITY, f64::min);
                let l = self.tree.leaves_under(w).len() as f64;
                0.5 * gap / ((l - 1.0) / l).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `min(0.1, ε_max / 4)`.
    pub fn default_epsilon(&self) -> f64 {
        DEFAULT_EPSILON_CAP.min(self.epsilon_max() / 4.0)
    }
}

/// Raw vertex data for `graft_raw(outer, i, inner)`: outer vertices first,
/// then inner ones, matching its raw numbering.
fn graft_sources<T: Clone>(
    outer: &DecoratedTree,
    inner: &DecoratedTree,
    a: Vec<T>,
    b: Vec<T>,
) -> Vec<T> {
    if inner.tree.is_unit() {
        a
    } else if outer.tree.is_unit() {
        b
    } else {
        let mut raw = a;
        raw.extend(b);
        raw
    }
}

/// Per-edge scales `t_e ≥ 0` with the collar width `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleVector {
    pub t: Vec<f64>,
    pub epsilon: f64,
}

impl ScaleVector {
    pub fn max(&self) -> f64 {
        self.t.iter().copied().fold(0.0, f64::max)
    }

    pub fn all_zero(&self) -> bool {
        self.t.iter().all(|&t| t == 0.0)
    }

    pub fn all_positive(&self) -> bool {
        self.t.iter().all(|&t| t > 0.0)
    }
}

/// Value of a chart: an interior configuration, or a point of a (possibly
/// smaller) boundary stratum when some scales vanish.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartValue {
    Interior(NormalizedConfiguration),
    Boundary(DecoratedTree),
}

impl ChartValue {
    pub fn interior(&self) -> Option<&NormalizedConfiguration> {
        match self {
            ChartValue::Interior(c) => Some(c),
            ChartValue::Boundary(_) => None,
        }
    }

    pub fn act_permutation(&self, sigma: &Permutation) -> Result<ChartValue> {
        Ok(match self {
            ChartValue::Interior(c) => ChartValue::Interior(c.act_permutation(sigma)?),
            ChartValue::Boundary(p) => ChartValue::Boundary(p.act_permutation(sigma)?),
        })
    }

    pub fn distance(&self, other: &ChartValue) -> f64 {
        match (self, other) {
            (ChartValue::Interior(a), ChartValue::Interior(b)) if a.len() == b.len() => {
                a.distance(b)
            }
            (ChartValue::Boundary(a), ChartValue::Boundary(b)) => a.distance(b),
            _ => f64::INFINITY,
        }
    }
}

/// A decorated tree with scales: a point in a chart around its stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    point: DecoratedTree,
    scales: ScaleVector,
}

/// A merged vertex during evaluation: its children (leaves or kept boundary
/// vertices of the old tree) and their points.
struct Merged {
    items: Vec<Child>,
    points: Vec<PlanePoint>,
}

impl ChartPoint {
    /// Requires one finite `t_e ≥ 0` per internal edge and `0 < ε ≤ ε_max`.
    pub fn new(point: DecoratedTree, t: Vec<f64>, epsilon: f64) -> Result<Self> {
        let edges = point.tree.internal_edge_count();
        if t.len() != edges {
            return Err(Error::SizeMismatch {
                expected: edges,
                found: t.len(),
            });
        }
        if let Some(bad) = t.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(Error::Parameter(format!(
                "scale {bad} must be finite and >= 0"
            )));
        }
        let eps_max = point.epsilon_max();
        if !(epsilon > 0.0 && epsilon.is_finite()) || epsilon > eps_max {
            return Err(Error::Parameter(format!(
                "collar width {epsilon} must lie in (0, {eps_max}]"
            )));
        }
        Ok(ChartPoint {
            point,
            scales: ScaleVector { t, epsilon },
        })
    }

    /// Uses the default collar width of `point`.
    pub fn with_default_epsilon(point: DecoratedTree, t: Vec<f64>) -> Result<Self> {
        let eps = point.default_epsilon();
        Self::new(point, t, eps)
    }

    /// The boundary point itself: all scales zero.
    pub fn boundary(point: DecoratedTree) -> Self {
        let t = vec![0.0; point.tree.internal_edge_count()];
        Self::with_default_epsilon(point, t).expect("zero scales are admissible")
    }

    /// The same scale `t` on every edge.
    pub fn uniform(point: DecoratedTree, t: f64) -> Result<Self> {
        let scales = vec![t; point.tree.internal_edge_count()];
        Self::with_default_epsilon(point, scales)
    }

    pub fn point(&self) -> &DecoratedTree {
        &self.point
    }

    pub fn scales(&self) -> &ScaleVector {
        &self.scales
    }

    pub fn tree(&self) -> &LabeledTree {
        &self.point.tree
    }

    pub fn epsilon(&self) -> f64 {
        self.scales.epsilon
    }

    /// Scale of the edge above vertex `w ≥ 1`.
    fn scale_above(&self, w: usize) -> f64 {
        self.scales.t[w - 1]
    }

    /// One-pass evaluation of the chart map.
    pub fn evaluate(&self, tol: &Tolerances) -> Result<ChartValue> {
        let tree = &self.point.tree;
        if tree.is_unit() {
            return Ok(ChartValue::Boundary(self.point.clone()));
        }
        let root = self.merge(0, tol)?;
        if root.items.iter().all(|c| matches!(c, Child::Leaf(_))) {
            let mut points = vec![PlanePoint::new(0.0, 0.0); tree.leaf_count()];
            for (c, z) in root.items.iter().zip(&root.points) {
                if let Child::Leaf(l) = *c {
                    points[l] = *z;
                }
            }
            return Ok(ChartValue::Interior(
                NormalizedConfiguration::from_normalized_unchecked(points),
            ));
        }
        // surviving vertices: the root plus every zero-scale vertex, each merged
        let mut raw_children = Vec::new();
        let mut raw_points = Vec::new();
        let mut raw_id = vec![usize::MAX; tree.vertex_count()];
        let mut queue = vec![(0usize, root)];
        raw_id[0] = 0;
        let mut next = 1;
        while let Some((v, merged)) = queue.pop() {
            let id = raw_id[v];
            if raw_children.len() <= id {
                raw_children.resize(id + 1, Vec::new());
                raw_points.resize(id + 1, Vec::new());
            }
            let mut children = Vec::with_capacity(merged.items.len());
            for c in &merged.items {
                match *c {
                    Child::Leaf(l) => children.push(Child::Leaf(l)),
                    Child::Vertex(w) => {
                        raw_id[w] = next;
                        next += 1;
                        children.push(Child::Vertex(raw_id[w]));
                        queue.push((w, self.merge(w, tol)?));
                    }
                }
            }
            raw_children[id] = children;
            raw_points[id] = merged.points;
        }
        let canon = canonicalize(tree.leaf_count(), &raw_children, 0)?;
        let decorations = reorder(&canon, &raw_points);
        Ok(ChartValue::Boundary(DecoratedTree {
            tree: canon.tree,
            decorations,
        }))
    }

    /// The configuration at `v` after absorbing all positive-scale subtrees.
    /// Zero-scale children appear as `Child::Vertex` items.
    fn merge(&self, v: usize, tol: &Tolerances) -> Result<Merged> {
        let tree = &self.point.tree;
        let x = self.point.decorations[v].points();
        let mut items = Vec::new();
        let mut points = Vec::new();
        let mut groups = Vec::new();
        let mut absorbed = false;
        for (s, &c) in tree.children(v).iter().enumerate() {
            match c {
                Child::Vertex(w) if self.scale_above(w) > 0.0 => {
                    let t = self.scale_above(w);
                    let sub = self.merge(w, tol)?;
                    items.extend(sub.items);
                    groups.extend(std::iter::repeat_n(s, sub.points.len()));
                    points.extend(sub.points.iter().map(|&z| x[s] + z * t));
                    absorbed = true;
                }
                _ => {
                    items.push(c);
                    groups.push(s);
                    points.push(x[s]);
                }
            }
        }
        if absorbed {
            check_collisions(&points, &groups, tol)?;
            points = normalize_points(&points)?.0;
        }
        Ok(Merged { items, points })
    }

    /// Contracts internal edge `e` at its positive scale: the child cluster
    /// is inserted into the parent decoration, which is re-normalized by
    /// `z ↦ (z − c)/s`; the other positive scales at the parent are divided
    /// by `s`, so that the chart value is unchanged. Only edges whose lower
    /// vertex has no positive-scale edges below it can be contracted.
    pub fn contract_edge(&self, e: usize, tol: &Tolerances) -> Result<ChartPoint> {
        let tree = &self.point.tree;
        let v = tree.edge_vertex(e)?;
        let t = self.scales.t[e];
        if t <= 0.0 {
            return Err(Error::Parameter(format!(
                "edge {e} has zero scale and lies on the boundary"
            )));
        }
        if tree
            .children(v)
            .iter()
            .any(|c| matches!(*c, Child::Vertex(w) if self.scale_above(w) > 0.0))
        {
            return Err(Error::Parameter(format!(
                "edge {e} has positive-scale edges below it; contract bottom-up"
            )));
        }
        let (u, s) = tree.parent(v).expect("non-root vertex");
        let spliced = splice(
            self.point.decorations[u].points(),
            s,
            self.point.decorations[v].points(),
            t,
        );
        let inserted = s..s + self.point.decorations[v].len();
        check_collisions(&spliced, &cluster_groups(spliced.len(), inserted), tol)?;
        let (merged, map) = normalize_points(&spliced)?;

        // raw numbering of contract_raw: old vertex v removed, later ids shift down
        let old = |r: usize| if r < v { r } else { r + 1 };
        let count = tree.vertex_count() - 1;
        let mut raw_points = Vec::with_capacity(count);
        let mut raw_scales = Vec::with_capacity(count);
        for r in 0..count {
            let w = old(r);
            raw_points.push(if w == u {
                merged.clone()
            } else {
                self.point.decorations[w].points().to_vec()
            });
            raw_scales.push(match w {
                0 => 0.0,
                w if tree.parent(w).map(|p| p.0) == Some(u) => self.scale_above(w) / map.scale,
                w => self.scale_above(w),
            });
        }
        let canon = crate::trees::contract_raw(tree, e)?;
        let decorations = reorder(&canon, &raw_points);
        let t = reorder_scales(&canon, &raw_scales);
        Ok(ChartPoint {
            point: DecoratedTree {
                tree: canon.tree,
                decorations,
            },
            scales: ScaleVector {
                t,
                epsilon: self.scales.epsilon,
            },
        })
    }

    /// Staged evaluation: contracts positive-scale edges one at a time,
    /// deepest first, re-normalizing after each step.
    pub fn evaluate_staged(&self, tol: &Tolerances) -> Result<ChartValue> {
        let mut cp = self.clone();
        while let Some(e) = cp.scales.t.iter().rposition(|&t| t > 0.0) {
            cp = cp.contract_edge(e, tol)?;
        }
        if cp.point.tree.is_corolla() {
            // a corolla's children are its leaves in label order
            return Ok(ChartValue::Interior(cp.point.decorations[0].clone()));
        }
        Ok(ChartValue::Boundary(cp.point))
    }

    /// Grafts `other` at leaf `i`; the new edge gets scale `t`. The collar
    /// width is the smallest of the two widths and the grafted `ε_max`.
    pub fn graft(&self, i: usize, other: &ChartPoint, t: f64) -> Result<ChartPoint> {
        let point = self.point.graft(i, &other.point)?;
        let canon = graft_raw(&self.point.tree, i, &other.point.tree)?;
        // raw vertex scales: roots get 0 (outer) and `t` (inner)
        let outer: Vec<f64> = std::iter::once(0.0)
            .chain(self.scales.t.iter().copied())
            .collect();
        let inner: Vec<f64> = std::iter::once(t)
            .chain(other.scales.t.iter().copied())
            .collect();
        let outer = if self.point.tree.is_unit() {
            Vec::new()
        } else {
            outer
        };
        let inner = if other.point.tree.is_unit() {
            Vec::new()
        } else {
            inner
        };
        let raw = graft_sources(&self.point, &other.point, outer, inner);
        let scales = reorder_scales(&canon, &raw);
        let eps = self
            .scales
            .epsilon
            .min(other.scales.epsilon)
            .min(point.epsilon_max());
        ChartPoint::new(point, scales, eps)
    }

    pub fn act_permutation(&self, sigma: &Permutation) -> Result<ChartPoint> {
        let canon = relabel_raw(&self.point.tree, sigma)?;
        let decorations = reorder(&canon, &self.point.raw_points());
        let raw: Vec<f64> = std::iter::once(0.0)
            .chain(self.scales.t.iter().copied())
            .collect();
        let t = if self.point.tree.is_unit() {
            Vec::new()
        } else {
            reorder_scales(&canon, &raw)
        };
        Ok(ChartPoint {
            point: DecoratedTree {
                tree: canon.tree,
                decorations,
            },
            scales: ScaleVector {
                t,
                epsilon: self.scales.epsilon,
            },
        })
    }

    pub fn conjugate(&self) -> ChartPoint {
        ChartPoint {
            point: self.point.conjugate(),
            scales: self.scales.clone(),
        }
    }

    /// The same point with all scales set to zero: the foot of its collar fiber.
    pub fn foot(&self) -> ChartPoint {
        ChartPoint {
            point: self.point.clone(),
            scales: ScaleVector {
                t: vec![0.0; self.scales.t.len()],
                epsilon: self.scales.epsilon,
            },
        }
    }

    /// The same point with new scales and the same collar width.
    pub fn with_scales(&self, t: Vec<f64>) -> Result<ChartPoint> {
        ChartPoint::new(self.point.clone(), t, self.scales.epsilon)
    }
}

pub fn evaluate_chart(cp: &ChartPoint, tol: &Tolerances) -> Result<ChartValue> {
    cp.evaluate(tol)
}

pub fn graft_decorated(p: &DecoratedTree, i: usize, q: &DecoratedTree) -> Result<DecoratedTree> {
    p.graft(i, q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub samples: usize,
    pub max_error: f64,
}

/// `max |M(p·σ) − M(p)·σ|` over the samples.
pub fn check_equivariance(
    samples: &[ChartPoint],
    sigma: &Permutation,
    tol: &Tolerances,
) -> Result<EquivarianceReport> {
    let mut max_error: f64 = 0.0;
    for cp in samples {
        let lhs = cp.act_permutation(sigma)?.evaluate(tol)?;
        let rhs = cp.evaluate(tol)?.act_permutation(sigma)?;
        max_error = max_error.max(lhs.distance(&rhs));
    }
    Ok(EquivarianceReport {
        samples: samples.len(),
        max_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeParams {
    /// Perturbed decorations per scale value (the base decoration is always included).
    pub decorations: usize,
    /// Size of each decoration perturbation before re-normalizing.
    pub perturbation: f64,
    /// Uniform scales to sample, as fractions of `ε`; all must be positive.
    pub scale_fractions: Vec<f64>,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams {
            decorations: 4,
            perturbation: 1e-3,
            scale_fractions: vec![0.125, 0.25, 0.5, 0.75],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub samples: usize,
    pub epsilon: f64,
    pub epsilon_max: f64,
    /// Smallest distance between the images of two sampled chart points.
    pub min_separation: f64,
    /// Smallest ratio of image distance to parameter distance over pairs of
    /// distinct chart points.
    pub min_ratio: f64,
    pub worst_pair: Option<(usize, usize)>,
}

/// Samples chart points around `base` and measures how well the chart
/// separates them. A small ratio is reported, not treated as an error.
pub fn injectivity_probe<R: Rng + ?Sized>(
    base: &ChartPoint,
    params: &ProbeParams,
    tol: &Tolerances,
    rng: &mut R,
) -> Result<ProbeReport> {
    if params.scale_fractions.iter().any(|&f| !(f > 0.0)) {
        return Err(Error::Parameter("probe scales must be positive".into()));
    }
    let eps = base.scales.epsilon;
    let mut points = vec![base.point.clone()];
    for _ in 0..params.decorations {
        points.push(perturb(&base.point, params.perturbation, rng)?);
    }
    let mut samples: Vec<(usize, f64, NormalizedConfiguration)> = Vec::new();
    for (k, p) in points.iter().enumerate() {
        for &f in &params.scale_fractions {
            let t = f * eps;
            let cp = ChartPoint {
                point: p.clone(),
                scales: ScaleVector {
                    t: vec![t; p.tree.internal_edge_count()],
                    epsilon: eps,
                },
            };
            let image = cp
                .evaluate(tol)?
                .interior()
                .cloned()
                .expect("positive scales evaluate to the interior");
            samples.push((k, t, image));
        }
    }
    let mut min_separation = f64::INFINITY;
    let mut min_ratio = f64::INFINITY;
    let mut worst_pair = None;
    for a in 0..samples.len() {
        for b in a + 1..samples.len() {
            let (ka, ta, ref ia) = samples[a];
            let (kb, tb, ref ib) = samples[b];
            let image = ia.distance(ib);
            min_separation = min_separation.min(image);
            let param = (ta - tb).abs().max(points[ka].distance(&points[kb]));
            if param > 0.0 && image / param < min_ratio {
                min_ratio = image / param;
                worst_pair = Some((a, b));
            }
        }
    }
    Ok(ProbeReport {
        samples: samples.len(),
        epsilon: eps,
        epsilon_max: base.point.epsilon_max(),
        min_separation,
        min_ratio,
        worst_pair,
    })
}

fn perturb<R: Rng + ?Sized>(p: &DecoratedTree, size: f64, rng: &mut R) -> Result<DecoratedTree> {
    let decorations = p
        .decorations
        .iter()
        .map(|d| {
            let moved: Vec<PlanePoint> = d
                .points()
                .iter()
                .map(|&z| {
                    z + PlanePoint::new(rng.gen_range(-size..=size), rng.gen_range(-size..=size))
                })
                .collect();
            Ok(NormalizedConfiguration::from_normalized_unchecked(
                normalize_points(&moved)?.0,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    DecoratedTree::new(p.tree.clone(), decorations)
}

/// A point of a stratum of `C(p,q)‾` (or of `C(p)‾` for a closed root).
///
/// Closed vertices carry a normalized configuration of their arity. An open
/// vertex with `a` closed and `b` open children carries the doubling of a
/// half-plane configuration: `2a + b` points listing, for each closed child
/// in canonical order, the pair `(z, z̄)` with `im z > 0`, followed by one
/// real point per open child in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredDecoratedTree {
    tree: ColoredTree,
    decorations: Vec<NormalizedConfiguration>,
}

impl ColoredDecoratedTree {
    pub fn new(
        tree: ColoredTree,
        decorations: Vec<NormalizedConfiguration>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let shape = tree.tree();
        if decorations.len() != shape.vertex_count() {
            return Err(Error::SizeMismatch {
                expected: shape.vertex_count(),
                found: decorations.len(),
            });
        }
        for (v, d) in decorations.iter().enumerate() {
            let expected = Self::decoration_size(&tree, v);
            if d.len() != expected {
                return Err(Error::SizeMismatch {
                    expected,
                    found: d.len(),
                });
            }
            if tree.vertex_color(v) == Color::Open {
                let (a, b) = tree.input_counts(v);
                let pts = d.points();
                if !is_conjugation_symmetric(pts, &Pairing::doubling(a, b), tol.geo)? {
                    return Err(Error::Symmetry(format!(
                        "decoration of open vertex {v} is not conjugation-symmetric"
                    )));
                }
                if (0..a).any(|k| pts[2 * k].im <= tol.geo) {
                    return Err(Error::Symmetry(format!(
                        "closed inputs of open vertex {v} must lie in the upper half-plane"
                    )));
                }
            }
        }
        Ok(ColoredDecoratedTree { tree, decorations })
    }

    pub fn unit(color: Color) -> Self {
        ColoredDecoratedTree {
            tree: ColoredTree::unit(color),
            decorations: Vec::new(),
        }
    }

    /// The decorated corolla of the interior point `h ∈ C(p,q)`.
    pub fn from_half_plane(
        h: &crate::config_space::HalfPlaneConfiguration,
        tol: &Tolerances,
    ) -> Result<Self> {
        let (p, q) = (h.interior().len(), h.boundary().len());
        let tree = ColoredTree::open_corolla(p, q)?;
        let doubled = h.doubling_embedding().normalize()?;
        ColoredDecoratedTree::new(tree, vec![symmetrize(doubled, p, q)?], tol)
    }

    /// `arity` for closed vertices, `2a + b` for open ones.
    pub fn decoration_size(tree: &ColoredTree, v: usize) -> usize {
        let (a, b) = tree.input_counts(v);
        match tree.vertex_color(v) {
            Color::Closed => a,
            Color::Open => 2 * a + b,
        }
    }

    pub fn tree(&self) -> &ColoredTree {
        &self.tree
    }

    pub fn decorations(&self) -> &[NormalizedConfiguration] {
        &self.decorations
    }

    pub fn conjugate(&self) -> ColoredDecoratedTree {
        ColoredDecoratedTree {
            tree: self.tree.clone(),
            decorations: self.decorations.iter().map(|d| d.conjugate()).collect(),
        }
    }

    /// The image under the doubling: a decorated tree on `2p + q` leaves,
    /// closed leaf `k` becoming `2k` and its mirror `2k + 1`, open leaf `j`
    /// becoming `2p + j`. Closed-rooted trees are returned as they are.
    /// Also returns, per vertex of the doubled tree, the colored vertex it
    /// comes from.
    fn double_with_sources(&self) -> Result<(DecoratedTree, Vec<usize>)> {
        let shape = self.tree.tree();
        if self.tree.output_color() == Color::Closed || shape.is_unit() {
            let tree = shape.clone();
            let src = (0..tree.vertex_count()).collect();
            return Ok((
                DecoratedTree {
                    tree,
                    decorations: self.decorations.clone(),
                },
                src,
            ));
        }
        let p = self.tree.closed_leaves();
        let mut builder = Doubler {
            source: self,
            p,
            raw: Vec::new(),
            points: Vec::new(),
            origin: Vec::new(),
        };
        builder.vertex(0, false);
        let leaves = 2 * p + self.tree.open_leaves();
        let canon = canonicalize(leaves, &builder.raw, 0)?;
        let decorations = reorder(&canon, &builder.points);
        let origin = canon.source.iter().map(|&r| builder.origin[r]).collect();
        Ok((
            DecoratedTree {
                tree: canon.tree,
                decorations,
            },
            origin,
        ))
    }

    pub fn double(&self) -> Result<DecoratedTree> {
        Ok(self.double_with_sources()?.0)
    }
}

struct Doubler<'a> {
    source: &'a ColoredDecoratedTree,
    p: usize,
    raw: Vec<Vec<Child>>,
    points: Vec<Vec<PlanePoint>>,
    origin: Vec<usize>,
}

impl Doubler<'_> {
    fn leaf(&self, l: usize, mirror: bool) -> Child {
        if l < self.p {
            Child::Leaf(2 * l + usize::from(mirror))
        } else {
            Child::Leaf(self.p + l)
        }
    }

    fn child(&mut self, c: Child, mirror: bool) -> Child {
        match c {
            Child::Leaf(l) => self.leaf(l, mirror),
            Child::Vertex(w) => Child::Vertex(self.vertex(w, mirror)),
        }
    }

    fn vertex(&mut self, v: usize, mirror: bool) -> usize {
        let id = self.raw.len();
        self.raw.push(Vec::new());
        self.origin.push(v);
        let deco = self.source.decorations[v].points();
        let tree = &self.source.tree;
        let children = tree.tree().children(v).to_vec();
        let mut out = Vec::new();
        let points = match tree.vertex_color(v) {
            Color::Closed => {
                for &c in &children {
                    out.push(self.child(c, mirror));
                }
                if mirror {
                    deco.iter().map(|z| z.conj()).collect()
                } else {
                    deco.to_vec()
                }
            }
            Color::Open => {
                for &c in children
                    .iter()
                    .filter(|&&c| tree.child_color(c) == Color::Closed)
                {
                    out.push(self.child(c, false));
                    out.push(self.child(c, true));
                }
                for &c in children
                    .iter()
                    .filter(|&&c| tree.child_color(c) == Color::Open)
                {
                    out.push(self.child(c, false));
                }
                deco.to_vec()
            }
        };
        self.raw[id] = out;
        self.points.push(Vec::new());
        self.points.resize(self.raw.len(), Vec::new());
        self.points[id] = points;
        id
    }
}

/// Makes a normalized doubled configuration exactly conjugation-symmetric:
/// pairs `(2k, 2k+1)` become `(a, ā)` with `a` their average, and the last
/// `q` points are put on the real axis.
pub fn symmetrize(
    c: NormalizedConfiguration,
    p: usize,
    q: usize,
) -> Result<NormalizedConfiguration> {
    if c.len() != 2 * p + q {
        return Err(Error::SizeMismatch {
            expected: 2 * p + q,
            found: c.len(),
        });
    }
    let mut pts = c.points().to_vec();
    for k in 0..p {
        let a = (pts[2 * k] + pts[2 * k + 1].conj()) * 0.5;
        pts[2 * k] = a;
        pts[2 * k + 1] = a.conj();
    }
    for z in &mut pts[2 * p..] {
        z.im = 0.0;
    }
    Ok(NormalizedConfiguration::from_normalized_unchecked(pts))
}

/// A colored decorated tree with one scale per internal edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredChartPoint {
    point: ColoredDecoratedTree,
    scales: ScaleVector,
}

impl ColoredChartPoint {
    /// The collar width must not exceed `ε_max` of the doubled point.
    pub fn new(point: ColoredDecoratedTree, t: Vec<f64>, epsilon: f64) -> Result<Self> {
        let cp = ColoredChartPoint {
            point,
            scales: ScaleVector { t, epsilon },
        };
        cp.double()?;
        Ok(cp)
    }

    pub fn with_default_epsilon(point: ColoredDecoratedTree, t: Vec<f64>) -> Result<Self> {
        let eps = point.double()?.default_epsilon();
        Self::new(point, t, eps)
    }

    pub fn point(&self) -> &ColoredDecoratedTree {
        &self.point
    }

    pub fn scales(&self) -> &ScaleVector {
        &self.scales
    }

    /// The uncolored chart point of the doubling; both copies of a closed
    /// subtree keep the scales of the original edges.
    pub fn double(&self) -> Result<ChartPoint> {
        let edges = self.point.tree.internal_edge_count();
        if self.scales.t.len() != edges {
            return Err(Error::SizeMismatch {
                expected: edges,
                found: self.scales.t.len(),
            });
        }
        let (point, origin) = self.point.double_with_sources()?;
        let t = origin
            .iter()
            .skip(1)
            .map(|&v| self.scales.t[v - 1])
            .collect();
        ChartPoint::new(point, t, self.scales.epsilon)
    }

    pub fn conjugate(&self) -> ColoredChartPoint {
        ColoredChartPoint {
            point: self.point.conjugate(),
            scales: self.scales.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawChart<T> {
    tree: T,
    #[serde(default)]
    decorations: BTreeMap<usize, NormalizedConfiguration>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scales: Option<BTreeMap<usize, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
}

fn indexed<T>(map: BTreeMap<usize, T>, count: usize, what: &str) -> Result<Vec<T>> {
    if map.len() != count || map.keys().enumerate().any(|(k, &id)| k != id) {
        return Err(Error::Format(format!(
            "expected {what} for ids 0..{count}, got {:?}",
            map.keys().collect::<Vec<_>>()
        )));
    }
    Ok(map.into_values().collect())
}

fn to_map<T: Clone>(items: &[T]) -> BTreeMap<usize, T> {
    items.iter().cloned().enumerate().collect()
}

impl Serialize for DecoratedTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawChart {
            tree: &self.tree,
            decorations: to_map(&self.decorations),
            scales: None,
            epsilon: None,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DecoratedTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawChart::<LabeledTree>::deserialize(deserializer)?;
        let count = raw.tree.vertex_count();
        indexed(raw.decorations, count, "decorations")
            .and_then(|d| DecoratedTree::new(raw.tree, d))
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for ChartPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawChart {
            tree: &self.point.tree,
            decorations: to_map(&self.point.decorations),
            scales: Some(to_map(&self.scales.t)),
            epsilon: Some(self.scales.epsilon),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChartPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawChart::<LabeledTree>::deserialize(deserializer)?;
        let (count, edges) = (raw.tree.vertex_count(), raw.tree.internal_edge_count());
        let build = || -> Result<ChartPoint> {
            let point =
                DecoratedTree::new(raw.tree, indexed(raw.decorations, count, "decorations")?)?;
            let t = match raw.scales {
                Some(s) => indexed(s, edges, "scales")?,
                None => vec![0.0; edges],
            };
            let eps = raw.epsilon.unwrap_or_else(|| point.default_epsilon());
            ChartPoint::new(point, t, eps)
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl Serialize for ColoredChartPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawChart {
            tree: &self.point.tree,
            decorations: to_map(&self.point.decorations),
            scales: Some(to_map(&self.scales.t)),
            epsilon: Some(self.scales.epsilon),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ColoredChartPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawChart::<ColoredTree>::deserialize(deserializer)?;
        let (count, edges) = (
            raw.tree.tree().vertex_count(),
            raw.tree.internal_edge_count(),
        );
        let build = || -> Result<ColoredChartPoint> {
            let decorations = indexed(raw.decorations, count, "decorations")?;
            let point = ColoredDecoratedTree::new(raw.tree, decorations, &Tolerances::default())?;
            let t = match raw.scales {
                Some(s) => indexed(s, edges, "scales")?,
                None => vec![0.0; edges],
            };
            match raw.epsilon {
                Some(eps) => ColoredChartPoint::new(point, t, eps),
                None => ColoredChartPoint::with_default_epsilon(point, t),
            }
        };
        build().map_err(serde::de::Error::custom)
    }
}
