//! The map `ν : ℱ₂ → 𝒟₂` and its colored restriction `μ : ℋ₂ → 𝒮𝒞`.
//!
//! On the interior, `ν₁` puts a disk of common radius around each point. On a
//! boundary stratum, `ν₂` composes the `ν₁`-images of the vertex decorations
//! along the tree, so it is an operad morphism. Inside the collar the two are
//! blended by a bump function of the chart scales, `ν₂` being evaluated at
//! the foot of the collar fiber.

use serde::{Deserialize, Serialize};

use crate::color::Color;
use crate::config_space::{NormalizedConfiguration, Tolerances};
use crate::error::{Error, Result};
use crate::fm_operad::{ChartPoint, ChartValue, ColoredChartPoint, DecoratedTree};
use crate::little_disks::{convex_blend, Disk, DiskConfiguration};
use crate::permutation::Permutation;
use crate::swiss_cheese::{doubling_to_flattened, SCConfiguration, SwissCheeseValue};
use crate::trees::Child;

/// Disks of radius `min(min_{i<j} |x_i − x_j| / 2, min_i (1 − |x_i|))`
/// centered at the points of `c`.
pub fn nu_interior(c: &NormalizedConfiguration) -> DiskConfiguration {
    let r = interior_radius(c);
    let disks = c.points().iter().map(|&z| Disk::new(z, r)).collect();
    DiskConfiguration::from_disks_unchecked(disks)
}

pub fn interior_radius(c: &NormalizedConfiguration) -> f64 {
    let x = c.points();
    let mut r = f64::INFINITY;
    for (i, a) in x.iter().enumerate() {
        r = r.min(1.0 - a.norm());
        for b in &x[i + 1..] {
            r = r.min((a - b).norm() / 2.0);
        }
    }
    r
}

/// `ν₂`: the composite in `𝒟₂` of the interior images of all vertex
/// decorations, the subtree at each slot glued into that slot's disk.
pub fn nu_boundary(p: &DecoratedTree) -> DiskConfiguration {
    let tree = p.tree();
    if tree.is_unit() {
        return DiskConfiguration::identity();
    }
    fn build(p: &DecoratedTree, v: usize) -> DiskConfiguration {
        let mut d = nu_interior(p.decoration(v));
        // right to left, so that earlier slots keep their positions
        for (s, c) in p.tree().children(v).iter().enumerate().rev() {
            if let Child::Vertex(w) = *c {
                d = d.compose(s, &build(p, w)).expect("slot exists");
            }
        }
        d
    }
    let d = build(p, 0);
    // `d` lists the leaves in traversal order; move leaf `l` to position `l`
    let order = tree.leaves_in_traversal_order();
    let mut position = vec![0; order.len()];
    for (k, &l) in order.iter().enumerate() {
        position[l] = k;
    }
    let sigma = Permutation::new(position).expect("traversal visits every leaf once");
    d.act_permutation(&sigma).expect("sizes agree")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bump {
    /// `1 − s`
    #[default]
    Linear,
    /// `1 − (3s² − 2s³)`
    Smooth,
}

/// Collar width and bump profile, with `s = clamp(max_e t_e / ε, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollarParams {
    pub epsilon: f64,
    #[serde(default)]
    pub bump: Bump,
}

impl CollarParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Parameter(format!(
                "collar width {epsilon} must be positive"
            )));
        }
        Ok(CollarParams {
            epsilon,
            bump: Bump::Linear,
        })
    }

    /// The collar width stored with the chart point.
    pub fn for_chart(cp: &ChartPoint) -> Self {
        CollarParams {
            epsilon: cp.epsilon(),
            bump: Bump::Linear,
        }
    }
}

/// `u = 1` on the boundary, `0` once some scale reaches `ε`.
pub fn bump(cp: &ChartPoint, params: &CollarParams) -> f64 {
    let s = (cp.scales().max() / params.epsilon).clamp(0.0, 1.0);
    match params.bump {
        Bump::Linear => 1.0 - s,
        Bump::Smooth => 1.0 - s * s * (3.0 - 2.0 * s),
    }
}

/// `ν = u·ν₂ + (1 − u)·ν₁`, with `ν₂` taken at the foot of the fiber.
/// Scale vectors mixing zero and positive entries are rejected.
pub fn nu(cp: &ChartPoint, params: &CollarParams, tol: &Tolerances) -> Result<DiskConfiguration> {
    if params.epsilon > cp.point().epsilon_max() {
        return Err(Error::Parameter(format!(
            "collar width {} exceeds the chart bound {}",
            params.epsilon,
            cp.point().epsilon_max()
        )));
    }
    let scales = cp.scales();
    let boundary = nu_boundary(cp.point());
    if scales.all_zero() {
        return Ok(boundary);
    }
    if !scales.all_positive() {
        return Err(Error::MixedScales);
    }
    let interior = match cp.evaluate(tol)? {
        ChartValue::Interior(c) => nu_interior(&c),
        ChartValue::Boundary(_) => unreachable!("positive scales reach the interior"),
    };
    convex_blend(&boundary, &interior, bump(cp, params), tol)
}

/// `ν` on the doubling of `cp`, with the disks of an open-rooted point put
/// in Swiss-cheese order: closed disks, their mirrors, then open disks.
pub fn mu_disks(
    cp: &ColoredChartPoint,
    params: &CollarParams,
    tol: &Tolerances,
) -> Result<DiskConfiguration> {
    let tree = cp.point().tree();
    let d = nu(&cp.double()?, params, tol)?;
    if tree.output_color() == Color::Closed {
        return Ok(d);
    }
    d.act_permutation(&doubling_to_flattened(
        tree.closed_leaves(),
        tree.open_leaves(),
    ))
}

/// `μ`: `ν` on the doubling, read back as a Swiss-cheese configuration.
/// Closed-rooted points give plain disk configurations.
pub fn mu(
    cp: &ColoredChartPoint,
    params: &CollarParams,
    tol: &Tolerances,
) -> Result<SwissCheeseValue> {
    let tree = cp.point().tree();
    let d = mu_disks(cp, params, tol)?;
    if tree.output_color() == Color::Closed {
        return Ok(SwissCheeseValue::Closed(d));
    }
    let (p, q) = (tree.closed_leaves(), tree.open_leaves());
    Ok(SwissCheeseValue::Open(SCConfiguration::from_disks(
        &d, p, q, tol,
    )?))
}
