//! Seeded samplers for every domain type.
//!
//! Samplers that can fail use rejection with an explicit attempt budget and
//! return [`Error::SamplingExhausted`] when it runs out. All randomness comes
//! from the caller's generator, so a fixed seed reproduces the output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::color::Color;
use crate::config_space::{
    min_pairwise_distance, normalize_points, NormalizedConfiguration, PlanePoint,
    PointConfiguration, Tolerances,
};
use crate::error::{Error, Result};
use crate::fm_operad::{
    symmetrize, ChartPoint, ColoredChartPoint, ColoredDecoratedTree, DecoratedTree,
};
use crate::little_disks::{Disk, DiskConfiguration};
use crate::swiss_cheese::SCConfiguration;
use crate::trees::{Child, ColoredTree, LabeledTree};

pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

/// Points closer than this are rejected by the samplers.
pub const MIN_SEPARATION: f64 = 1e-3;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn point_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> PlanePoint {
    // uniform by area
    let r = radius * rng.gen::<f64>().sqrt();
    PlanePoint::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn separated<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_attempts: usize,
    mut draw: impl FnMut(&mut R) -> Vec<PlanePoint>,
) -> Result<Vec<PlanePoint>> {
    for _ in 0..max_attempts.max(1) {
        let pts = draw(rng);
        if n < 2 || min_pairwise_distance(&pts) > MIN_SEPARATION {
            return Ok(pts);
        }
    }
    Err(Error::SamplingExhausted {
        attempts: max_attempts,
    })
}

/// `n` distinct points, uniform in the unit disk.
pub fn random_points<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_attempts: usize,
) -> Result<PointConfiguration> {
    if n == 0 {
        return Err(Error::Arity(
            "a configuration needs at least one point".into(),
        ));
    }
    let pts = separated(rng, n, max_attempts, |rng| {
        (0..n).map(|_| point_in_disk(rng, 1.0)).collect()
    })?;
    PointConfiguration::new(pts)
}

/// The normal form of [`random_points`].
pub fn random_normalized<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_attempts: usize,
) -> Result<NormalizedConfiguration> {
    if n < 2 {
        return Err(Error::Arity(format!(
            "normal form needs n >= 2 points, got {n}"
        )));
    }
    random_points(rng, n, max_attempts)?.normalize()
}

/// Radii for fixed centers: each disk takes a random fraction in `[0.3, 1]`
/// of its largest admissible radius, so the result is always valid.
fn radii_for<R: Rng + ?Sized>(rng: &mut R, centers: &[PlanePoint]) -> Vec<f64> {
    centers
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let room = centers
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, d)| (c - d).norm() / 2.0)
                .fold(1.0 - c.norm(), f64::min);
            room * rng.gen_range(0.3..=1.0)
        })
        .collect()
}

/// A valid configuration of `n` disks.
pub fn random_disks<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_attempts: usize,
) -> Result<DiskConfiguration> {
    if n == 0 {
        return Err(Error::Arity(
            "a disk configuration needs at least one disk".into(),
        ));
    }
    let centers = separated(rng, n, max_attempts, |rng| {
        (0..n).map(|_| point_in_disk(rng, 0.9)).collect()
    })?;
    let radii = radii_for(rng, &centers);
    let disks = centers
        .into_iter()
        .zip(radii)
        .map(|(c, r)| Disk::new(c, r))
        .collect();
    DiskConfiguration::validated(disks, Tolerances::default().geo)
}

/// A valid Swiss-cheese configuration with `n` closed pairs and `m` open disks.
pub fn random_sc<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    max_attempts: usize,
) -> Result<SCConfiguration> {
    if n + m == 0 {
        return Err(Error::Arity(
            "a Swiss-cheese configuration needs a disk".into(),
        ));
    }
    let centers = separated(rng, 2 * n + m, max_attempts, |rng| {
        let upper: Vec<PlanePoint> = (0..n)
            .map(|_| loop {
                let z = point_in_disk(rng, 0.9);
                if z.im > 0.05 {
                    break z;
                }
            })
            .collect();
        let mut all = upper.clone();
        all.extend(upper.iter().map(|z| z.conj()));
        all.extend((0..m).map(|_| PlanePoint::new(rng.gen_range(-0.9..0.9), 0.0)));
        all
    })?;
    // conjugation preserves distances, so mirrors get the same room
    let radii = radii_for(rng, &centers);
    let closed = (0..n)
        .map(|k| Disk::new(centers[k], radii[k].min(radii[k + n])))
        .collect();
    let open = (0..m)
        .map(|k| Disk::new(centers[2 * n + k], radii[2 * n + k]))
        .collect();
    SCConfiguration::new(closed, open, &Tolerances::default())
}

/// A uniformly chosen non-trivial split of vertex `v`, or `None` if `v` has
/// arity two.
fn random_split<R: Rng + ?Sized>(rng: &mut R, tree: &LabeledTree, v: usize) -> Option<Vec<usize>> {
    let a = tree.arity(v);
    if a < 3 {
        return None;
    }
    let size = rng.gen_range(2..a);
    let mut idx: Vec<usize> = (0..a).collect();
    idx.shuffle(rng);
    idx.truncate(size);
    Some(idx)
}

/// A random reduced tree on `n` leaves with exactly `k` internal edges,
/// obtained by `k` random vertex splits of the corolla.
pub fn random_tree_with_edges<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
) -> Result<LabeledTree> {
    let mut tree = LabeledTree::corolla(n)?;
    if (n < 2 && k > 0) || (n >= 2 && k > n - 2) {
        return Err(Error::Parameter(format!(
            "no tree on {n} leaves has {k} internal edges"
        )));
    }
    for _ in 0..k {
        let splittable: Vec<usize> = (0..tree.vertex_count())
            .filter(|&v| tree.arity(v) >= 3)
            .collect();
        let v = *splittable
            .choose(rng)
            .expect("fewer than n - 2 edges leave a splittable vertex");
        let group = random_split(rng, &tree, v).expect("arity at least three");
        tree = tree.split_vertex(v, &group)?;
    }
    Ok(tree)
}

/// A random tree on `n ≥ 2` leaves: `k` uniform in `0..=n−2`, then random splits.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<LabeledTree> {
    if n < 2 {
        return Err(Error::Arity(format!(
            "random trees need n >= 2 leaves, got {n}"
        )));
    }
    let k = rng.gen_range(0..=n - 2);
    random_tree_with_edges(rng, n, k)
}

pub fn random_decorations<R: Rng + ?Sized>(
    rng: &mut R,
    tree: &LabeledTree,
    max_attempts: usize,
) -> Result<DecoratedTree> {
    let decorations = (0..tree.vertex_count())
        .map(|v| random_normalized(rng, tree.arity(v), max_attempts))
        .collect::<Result<Vec<_>>>()?;
    DecoratedTree::new(tree.clone(), decorations)
}

/// A random point of `C(n)‾`, on a random stratum.
pub fn random_decorated_tree<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_attempts: usize,
) -> Result<DecoratedTree> {
    if n == 1 {
        return Ok(DecoratedTree::unit());
    }
    let tree = random_tree(rng, n)?;
    random_decorations(rng, &tree, max_attempts)
}

/// A chart point in the collar: every scale uniform in `(0, ε)` with the
/// default collar width.
pub fn random_collar_sample<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_attempts: usize,
) -> Result<ChartPoint> {
    let point = random_decorated_tree(rng, n, max_attempts)?;
    let eps = point.default_epsilon();
    let t = (0..point.tree().internal_edge_count())
        .map(|_| eps * (1.0 - rng.gen::<f64>()))
        .collect();
    ChartPoint::new(point, t, eps)
}

/// A random colored tree with `p` closed and `q` open leaves and output
/// color `o`. Vertices over closed leaves only are colored at random
/// (closed below a closed vertex), and an open vertex with a single closed
/// child is inserted above closed clusters at random.
pub fn random_colored_tree<R: Rng + ?Sized>(
    rng: &mut R,
    p: usize,
    q: usize,
) -> Result<ColoredTree> {
    if p + q == 0 {
        return Err(Error::Arity("a colored tree needs a leaf".into()));
    }
    if p + q == 1 {
        return if q == 1 {
            Ok(ColoredTree::unit(Color::Open))
        } else {
            ColoredTree::open_corolla(1, 0)
        };
    }
    let shape = random_tree(rng, p + q)?;
    let raw = shape.raw_children();
    let mut children: Vec<Vec<Child>> = raw.to_vec();
    let mut colors = Vec::with_capacity(raw.len());
    // pre-order: parents are colored before their children
    let mut parent_color = vec![Color::Open; raw.len()];
    for v in 0..raw.len() {
        let all_closed = shape.leaves_under(v).iter().all(|&l| l < p);
        let c = if !all_closed {
            Color::Open
        } else if parent_color[v] == Color::Closed {
            Color::Closed
        } else if v == 0 {
            // an open root over a closed cluster, possibly through a unary vertex below
            if rng.gen_bool(0.5) {
                Color::Open
            } else {
                Color::Closed
            }
        } else if rng.gen_bool(0.5) {
            Color::Open
        } else {
            Color::Closed
        };
        colors.push(c);
        for ch in &raw[v] {
            if let Child::Vertex(w) = *ch {
                parent_color[w] = c;
            }
        }
    }
    // unary open vertices above closed vertices with an open parent (or none)
    let mut root = 0;
    let count = raw.len();
    for v in 0..count {
        if colors[v] != Color::Closed {
            continue;
        }
        let parent = shape.parent(v);
        let open_above = parent.is_none_or(|(u, _)| colors[u] == Color::Open);
        if !open_above {
            continue;
        }
        if v == 0 || rng.gen_bool(0.3) {
            let id = children.len();
            children.push(vec![Child::Vertex(v)]);
            colors.push(Color::Open);
            match parent {
                Some((u, s)) => children[u][s] = Child::Vertex(id),
                None => root = id,
            }
        }
    }
    ColoredTree::new(p, q, &children, &colors, root)
}

/// A conjugation-symmetric normalized configuration for an open vertex
/// with `a` closed and `b` open inputs.
pub fn random_doubled<R: Rng + ?Sized>(
    rng: &mut R,
    a: usize,
    b: usize,
    max_attempts: usize,
) -> Result<NormalizedConfiguration> {
    let pts = separated(rng, 2 * a + b, max_attempts, |rng| {
        let mut out = Vec::with_capacity(2 * a + b);
        for _ in 0..a {
            let z = PlanePoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.05..1.0));
            out.push(z);
            out.push(z.conj());
        }
        out.extend((0..b).map(|_| PlanePoint::new(rng.gen_range(-1.0..1.0), 0.0)));
        out
    })?;
    let normal = NormalizedConfiguration::from_normalized_unchecked(normalize_points(&pts)?.0);
    symmetrize(normal, a, b)
}

pub fn random_colored_decorated<R: Rng + ?Sized>(
    rng: &mut R,
    tree: &ColoredTree,
    max_attempts: usize,
) -> Result<ColoredDecoratedTree> {
    let decorations = (0..tree.tree().vertex_count())
        .map(|v| {
            let (a, b) = tree.input_counts(v);
            match tree.vertex_color(v) {
                Color::Closed => random_normalized(rng, a, max_attempts),
                Color::Open => random_doubled(rng, a, b, max_attempts),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ColoredDecoratedTree::new(tree.clone(), decorations, &Tolerances::default())
}

/// A colored chart point with output color `o`: all scales zero with
/// probability `boundary`, otherwise all uniform in `(0, ε)`.
pub fn random_colored_chart<R: Rng + ?Sized>(
    rng: &mut R,
    p: usize,
    q: usize,
    boundary: f64,
    max_attempts: usize,
) -> Result<ColoredChartPoint> {
    let tree = random_colored_tree(rng, p, q)?;
    let point = random_colored_decorated(rng, &tree, max_attempts)?;
    let eps = point.double()?.default_epsilon();
    let edges = tree.internal_edge_count();
    let t = if rng.gen_bool(boundary) {
        vec![0.0; edges]
    } else {
        (0..edges).map(|_| eps * (1.0 - rng.gen::<f64>())).collect()
    };
    ColoredChartPoint::new(point, t, eps)
}
