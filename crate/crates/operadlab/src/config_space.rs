//! Planar point configurations, the affine quotient `C(n)` and its normal
//! form, and the doubling embedding of half-plane configurations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::Permutation;

pub type PlanePoint = Complex64;

/// Numerical tolerances shared by the whole crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Geometric predicates (containment, disjointness, symmetry).
    pub geo: f64,
    /// Normal-form constraints.
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geo: 1e-9,
            norm: 1e-12,
        }
    }
}

pub(crate) fn check_finite(points: &[PlanePoint]) -> Result<()> {
    match points
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(i) => Err(Error::Parameter(format!("point {i} is not finite"))),
        None => Ok(()),
    }
}

/// First pair `(i, j)` with `z_i == z_j`, if any.
pub(crate) fn find_coincidence(
    points: &[PlanePoint],
    threshold: f64,
) -> Option<(usize, usize, f64)> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = (points[i] - points[j]).norm();
            if d <= threshold {
                return Some((i, j, d));
            }
        }
    }
    None
}

pub fn min_pairwise_distance(points: &[PlanePoint]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

/// Largest pointwise distance between two equally long point lists.
pub fn max_point_distance(a: &[PlanePoint], b: &[PlanePoint]) -> f64 {
    assert_eq!(a.len(), b.len(), "point lists differ in length");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `n ≥ 1` pairwise distinct, finite plane points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoints", into = "RawPoints")]
pub struct PointConfiguration {
    points: Vec<PlanePoint>,
}

#[derive(Serialize, Deserialize)]
struct RawPoints {
    points: Vec<PlanePoint>,
}

impl TryFrom<RawPoints> for PointConfiguration {
    type Error = Error;
    fn try_from(raw: RawPoints) -> Result<Self> {
        PointConfiguration::new(raw.points)
    }
}

impl From<PointConfiguration> for RawPoints {
    fn from(c: PointConfiguration) -> Self {
        RawPoints { points: c.points }
    }
}

impl PointConfiguration {
    pub fn new(points: Vec<PlanePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Arity(
                "a configuration needs at least one point".into(),
            ));
        }
        check_finite(&points)?;
        if let Some((i, j, _)) = find_coincidence(&points, 0.0) {
            return Err(Error::Degenerate { i, j });
        }
        Ok(PointConfiguration { points })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(re, im)| PlanePoint::new(re, im))
                .collect(),
        )
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Applies `z ↦ a·z + b` to every point.
    pub fn act_affine(&self, a: f64, b: PlanePoint) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Parameter(format!(
                "dilation must be positive, got {a}"
            )));
        }
        Self::new(self.points.iter().map(|z| z * a + b).collect())
    }

    pub fn act_permutation(&self, sigma: &Permutation) -> Result<Self> {
        Ok(PointConfiguration {
            points: sigma.act(&self.points)?,
        })
    }

    pub fn conjugate(&self) -> Self {
        PointConfiguration {
            points: conjugate_points(&self.points),
        }
    }

    pub fn normalize(&self) -> Result<NormalizedConfiguration> {
        normalize(self)
    }
}

/// The representative of a point of `C(n)` with zero sum and unit second moment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoints", into = "RawPoints")]
pub struct NormalizedConfiguration {
    points: Vec<PlanePoint>,
}

impl TryFrom<RawPoints> for NormalizedConfiguration {
    type Error = Error;
    fn try_from(raw: RawPoints) -> Result<Self> {
        NormalizedConfiguration::new(raw.points, &Tolerances::default())
    }
}

impl From<NormalizedConfiguration> for RawPoints {
    fn from(c: NormalizedConfiguration) -> Self {
        RawPoints { points: c.points }
    }
}

impl NormalizedConfiguration {
    /// Wraps points that already satisfy the normal-form constraints.
    pub fn new(points: Vec<PlanePoint>, tol: &Tolerances) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Arity(format!(
                "normal form needs n >= 2 points, got {}",
                points.len()
            )));
        }
        check_finite(&points)?;
        if let Some((i, j, _)) = find_coincidence(&points, 0.0) {
            return Err(Error::Degenerate { i, j });
        }
        let sum: PlanePoint = points.iter().sum();
        let moment: f64 = points.iter().map(|z| z.norm_sqr()).sum();
        if sum.norm() > tol.norm || (moment - 1.0).abs() > tol.norm {
            return Err(Error::Parameter(format!(
                "not in normal form: |sum| = {:e}, second moment = {moment}",
                sum.norm()
            )));
        }
        Ok(NormalizedConfiguration { points })
    }

    pub(crate) fn from_normalized_unchecked(points: Vec<PlanePoint>) -> Self {
        debug_assert!(points.len() >= 2);
        NormalizedConfiguration { points }
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_configuration(&self) -> PointConfiguration {
        PointConfiguration {
            points: self.points.clone(),
        }
    }

    /// Permuting a normal form keeps it normal.
    pub fn act_permutation(&self, sigma: &Permutation) -> Result<Self> {
        Ok(NormalizedConfiguration {
            points: sigma.act(&self.points)?,
        })
    }

    pub fn conjugate(&self) -> Self {
        NormalizedConfiguration {
            points: conjugate_points(&self.points),
        }
    }

    pub fn distance(&self, other: &NormalizedConfiguration) -> f64 {
        max_point_distance(&self.points, &other.points)
    }
}

/// Translation and scale removed by [`normalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizingMap {
    pub centroid: PlanePoint,
    pub scale: f64,
}

impl NormalizingMap {
    pub fn apply(&self, z: PlanePoint) -> PlanePoint {
        (z - self.centroid) / self.scale
    }
}

/// Subtracts the centroid and divides by the root second moment.
pub(crate) fn normalize_points(points: &[PlanePoint]) -> Result<(Vec<PlanePoint>, NormalizingMap)> {
    if points.len() < 2 {
        return Err(Error::Arity(format!(
            "normal form needs n >= 2 points, got {}",
            points.len()
        )));
    }
    check_finite(points)?;
    if let Some((i, j, _)) = find_coincidence(points, 0.0) {
        return Err(Error::Degenerate { i, j });
    }
    let n = points.len() as f64;
    let centroid = points.iter().sum::<PlanePoint>() / n;
    let scale = points
        .iter()
        .map(|z| (z - centroid).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let map = NormalizingMap { centroid, scale };
    let out: Vec<PlanePoint> = points.iter().map(|&z| map.apply(z)).collect();
    if let Some((i, j, _)) = find_coincidence(&out, 0.0) {
        return Err(Error::Degenerate { i, j });
    }
    Ok((out, map))
}

pub fn normalize(cfg: &PointConfiguration) -> Result<NormalizedConfiguration> {
    let (points, _) = normalize_points(&cfg.points)?;
    debug_assert!(points.iter().all(|z| z.norm() < 1.0));
    Ok(NormalizedConfiguration { points })
}

pub fn conjugate_points(points: &[PlanePoint]) -> Vec<PlanePoint> {
    points.iter().map(|z| z.conj()).collect()
}

/// An involution on `0..n` pairing each point with its expected mirror image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    partner: Vec<usize>,
}

impl Pairing {
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        let n = partner.len();
        for (i, &j) in partner.iter().enumerate() {
            if j >= n || partner[j] != i {
                return Err(Error::Parameter(format!(
                    "malformed pairing: {i} -> {j} is not part of an involution"
                )));
            }
        }
        Ok(Pairing { partner })
    }

    /// Every point is its own mirror.
    pub fn identity(n: usize) -> Self {
        Pairing {
            partner: (0..n).collect(),
        }
    }

    /// The pairing of the doubling embedding: `2k ↔ 2k+1` for `k < p`,
    /// with the trailing `q` entries fixed.
    pub fn doubling(p: usize, q: usize) -> Self {
        let mut partner: Vec<usize> = (0..2 * p + q).collect();
        for k in 0..p {
            partner.swap(2 * k, 2 * k + 1);
        }
        Pairing { partner }
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }
}

/// Checks `z_{pair(i)} = conj(z_i)` within `tol`, which for fixed points
/// means `|im z_i| ≤ tol`.
pub fn is_conjugation_symmetric(
    points: &[PlanePoint],
    pairing: &Pairing,
    tol: f64,
) -> Result<bool> {
    if pairing.len() != points.len() {
        return Err(Error::SizeMismatch {
            expected: points.len(),
            found: pairing.len(),
        });
    }
    Ok(conjugation_defect(points, pairing) <= tol)
}

/// Largest `|z_{pair(i)} − conj(z_i)|`.
pub fn conjugation_defect(points: &[PlanePoint], pairing: &Pairing) -> f64 {
    points
        .iter()
        .enumerate()
        .map(|(i, z)| (points[pairing.partner(i)] - z.conj()).norm())
        .fold(0.0, f64::max)
}

/// `p` interior points (`im > 0`) and `q` boundary points (`im = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHalfPlane", into = "RawHalfPlane")]
pub struct HalfPlaneConfiguration {
    interior: Vec<PlanePoint>,
    boundary: Vec<PlanePoint>,
}

#[derive(Serialize, Deserialize)]
struct RawHalfPlane {
    interior: Vec<PlanePoint>,
    boundary: Vec<PlanePoint>,
}

impl TryFrom<RawHalfPlane> for HalfPlaneConfiguration {
    type Error = Error;
    fn try_from(raw: RawHalfPlane) -> Result<Self> {
        HalfPlaneConfiguration::new(raw.interior, raw.boundary)
    }
}

impl From<HalfPlaneConfiguration> for RawHalfPlane {
    fn from(h: HalfPlaneConfiguration) -> Self {
        RawHalfPlane {
            interior: h.interior,
            boundary: h.boundary,
        }
    }
}

impl HalfPlaneConfiguration {
    pub fn new(interior: Vec<PlanePoint>, boundary: Vec<PlanePoint>) -> Result<Self> {
        if 2 * interior.len() + boundary.len() < 2 {
            return Err(Error::Arity(format!(
                "half-plane configuration needs 2p + q >= 2, got p = {}, q = {}",
                interior.len(),
                boundary.len()
            )));
        }
        check_finite(&interior)?;
        check_finite(&boundary)?;
        if let Some(k) = interior.iter().position(|z| z.im <= 0.0) {
            return Err(Error::Parameter(format!(
                "interior point {k} is not in the open upper half-plane"
            )));
        }
        if let Some(k) = boundary.iter().position(|z| z.im != 0.0) {
            return Err(Error::Parameter(format!("boundary point {k} is not real")));
        }
        if let Some((i, j, _)) = find_coincidence(&interior, 0.0) {
            return Err(Error::Degenerate { i, j });
        }
        if let Some((i, j, _)) = find_coincidence(&boundary, 0.0) {
            return Err(Error::Degenerate { i, j });
        }
        Ok(HalfPlaneConfiguration { interior, boundary })
    }

    pub fn interior(&self) -> &[PlanePoint] {
        &self.interior
    }

    pub fn boundary(&self) -> &[PlanePoint] {
        &self.boundary
    }

    /// `(z₁, z̄₁, …, z_p, z̄_p, x₁, …, x_q)`.
    pub fn doubling_embedding(&self) -> PointConfiguration {
        let mut points = Vec::with_capacity(2 * self.interior.len() + self.boundary.len());
        for z in &self.interior {
            points.push(*z);
            points.push(z.conj());
        }
        points.extend_from_slice(&self.boundary);
        PointConfiguration { points }
    }

    pub fn pairing(&self) -> Pairing {
        Pairing::doubling(self.interior.len(), self.boundary.len())
    }
}
