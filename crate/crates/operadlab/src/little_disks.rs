//! The little disks operad: configurations of disjoint disks inside the unit
//! disk, glued by affine substitution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config_space::{normalize_points, NormalizedConfiguration, PlanePoint, Tolerances};
use crate::error::{Error, Result};
use crate::permutation::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(rename = "c")]
    pub center: PlanePoint,
    #[serde(rename = "r")]
    pub radius: f64,
}

impl Disk {
    pub fn new(center: PlanePoint, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn at(re: f64, im: f64, radius: f64) -> Self {
        Disk::new(PlanePoint::new(re, im), radius)
    }

    /// The image of `inner` under the affine map sending the unit disk onto `self`.
    #[inline]
    pub fn image_of(&self, inner: &Disk) -> Disk {
        Disk {
            center: self.center + inner.center * self.radius,
            radius: self.radius * inner.radius,
        }
    }

    pub fn conj(&self) -> Disk {
        Disk {
            center: self.center.conj(),
            radius: self.radius,
        }
    }

    fn distance(&self, other: &Disk) -> f64 {
        (self.center - other.center)
            .norm()
            .max((self.radius - other.radius).abs())
    }
}

/// A violated constraint, with the offending indices (zero-based) and the
/// amount by which the inequality fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `|c| + r − 1 > tol`
    Containment { disk: usize, excess: f64 },
    /// `r_i + r_j − |c_i − c_j| > tol`
    Overlap { i: usize, j: usize, overlap: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Containment { disk, excess } => {
                write!(f, "disk {disk} leaves the unit disk by {excess:e}")
            }
            Violation::Overlap { i, j, overlap } => {
                write!(f, "disks {i} and {j} overlap by {overlap:e}")
            }
        }
    }
}

/// An ordered configuration of `n ≥ 1` little disks.
///
/// Construction only checks that radii are positive and coordinates finite;
/// containment and disjointness are checked by [`DiskConfiguration::validate`],
/// and every operation of the operad returns validated output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDisks", into = "RawDisks")]
pub struct DiskConfiguration {
    disks: Vec<Disk>,
}

#[derive(Serialize, Deserialize)]
struct RawDisks {
    disks: Vec<Disk>,
}

impl TryFrom<RawDisks> for DiskConfiguration {
    type Error = Error;
    fn try_from(raw: RawDisks) -> Result<Self> {
        DiskConfiguration::new(raw.disks)
    }
}

impl From<DiskConfiguration> for RawDisks {
    fn from(d: DiskConfiguration) -> Self {
        RawDisks { disks: d.disks }
    }
}

impl DiskConfiguration {
    pub fn new(disks: Vec<Disk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::Arity("D2(0) is empty".into()));
        }
        for (k, d) in disks.iter().enumerate() {
            if !(d.center.re.is_finite() && d.center.im.is_finite()) {
                return Err(Error::Parameter(format!(
                    "disk {k} has a non-finite center"
                )));
            }
            if !(d.radius > 0.0 && d.radius.is_finite()) {
                return Err(Error::Parameter(format!(
                    "disk {k} has non-positive radius {}",
                    d.radius
                )));
            }
        }
        Ok(DiskConfiguration { disks })
    }

    /// Constructs and validates in one step.
    pub fn validated(disks: Vec<Disk>, tol: f64) -> Result<Self> {
        let d = Self::new(disks)?;
        d.validate(tol)?;
        Ok(d)
    }

    pub(crate) fn from_disks_unchecked(disks: Vec<Disk>) -> Self {
        debug_assert!(!disks.is_empty());
        DiskConfiguration { disks }
    }

    /// The unit of the operad: the unit disk itself.
    pub fn identity() -> Self {
        DiskConfiguration {
            disks: vec![Disk::at(0.0, 0.0, 1.0)],
        }
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn centers(&self) -> Vec<PlanePoint> {
        self.disks.iter().map(|d| d.center).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.disks.iter().map(|d| d.radius).collect()
    }

    /// Every violated containment or disjointness constraint. Both are closed
    /// conditions: tangency is allowed, and `tol` relaxes each inequality.
    pub fn violations(&self, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for (k, d) in self.disks.iter().enumerate() {
            let excess = d.center.norm() + d.radius - 1.0;
            if excess > tol {
                out.push(Violation::Containment { disk: k, excess });
            }
        }
        for i in 0..self.disks.len() {
            for j in i + 1..self.disks.len() {
                let (a, b) = (&self.disks[i], &self.disks[j]);
                let overlap = a.radius + b.radius - (a.center - b.center).norm();
                if overlap > tol {
                    out.push(Violation::Overlap { i, j, overlap });
                }
            }
        }
        out
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let v = self.violations(tol);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfiguration(v))
        }
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.violations(tol).is_empty()
    }

    /// `self ∘_slot inner`: disk `slot` is replaced by the image of `inner`,
    /// whose disks occupy positions `slot..slot + inner.len()`.
    pub fn compose(&self, slot: usize, inner: &DiskConfiguration) -> Result<Self> {
        let host = self.disks.get(slot).ok_or(Error::IndexOutOfRange {
            index: slot,
            arity: self.disks.len(),
        })?;
        let mut disks = Vec::with_capacity(self.disks.len() + inner.len() - 1);
        disks.extend_from_slice(&self.disks[..slot]);
        disks.extend(inner.disks.iter().map(|d| host.image_of(d)));
        disks.extend_from_slice(&self.disks[slot + 1..]);
        Ok(DiskConfiguration { disks })
    }

    /// Renumbering: disk `i` of the output is disk `σ(i)` of the input.
    pub fn act_permutation(&self, sigma: &Permutation) -> Result<Self> {
        Ok(DiskConfiguration {
            disks: sigma.act(&self.disks)?,
        })
    }

    pub fn conjugate(&self) -> Self {
        DiskConfiguration {
            disks: self.disks.iter().map(Disk::conj).collect(),
        }
    }

    /// The centers modulo translation and dilation.
    pub fn project_centers(&self) -> Result<NormalizedConfiguration> {
        if self.disks.len() < 2 {
            return Err(Error::Arity(format!(
                "projection to C(n) needs n >= 2 disks, got {}",
                self.disks.len()
            )));
        }
        let (points, _) = normalize_points(&self.centers())?;
        Ok(NormalizedConfiguration::from_normalized_unchecked(points))
    }

    /// Largest per-disk difference in center or radius.
    pub fn distance(&self, other: &DiskConfiguration) -> f64 {
        assert_eq!(self.len(), other.len(), "arity mismatch");
        self.disks
            .iter()
            .zip(&other.disks)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// `δ·d₁ + (1 − δ)·d₂`, componentwise in centers and radii. The result is
/// validated; failure is reported, never clamped.
pub fn convex_blend(
    d1: &DiskConfiguration,
    d2: &DiskConfiguration,
    delta: f64,
    tol: &Tolerances,
) -> Result<DiskConfiguration> {
    if d1.len() != d2.len() {
        return Err(Error::SizeMismatch {
            expected: d1.len(),
            found: d2.len(),
        });
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Parameter(format!(
            "blend weight {delta} outside [0, 1]"
        )));
    }
    let blended = if delta == 1.0 {
        d1.disks.clone()
    } else if delta == 0.0 {
        d2.disks.clone()
    } else {
        d1.disks
            .iter()
            .zip(&d2.disks)
            .map(|(a, b)| Disk {
                center: a.center * delta + b.center * (1.0 - delta),
                radius: delta * a.radius + (1.0 - delta) * b.radius,
            })
            .collect()
    };
    let out = DiskConfiguration { disks: blended };
    let violations = out.violations(tol.geo);
    if violations.is_empty() {
        Ok(out)
    } else {
        Err(Error::BlendInvalid { delta, violations })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn two_disks() -> DiskConfiguration {
        DiskConfiguration::validated(
            vec![Disk::at(0.5, 0.0, 0.25), Disk::at(-0.5, 0.0, 0.25)],
            TOL,
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_single_unit_disk() {
        let id = DiskConfiguration::identity();
        assert_eq!(id.disks(), &[Disk::at(0.0, 0.0, 1.0)]);
        assert!(id.is_valid(TOL));
    }

    #[test]
    fn arity_zero_is_unrepresentable() {
        assert!(matches!(
            DiskConfiguration::new(vec![]),
            Err(Error::Arity(_))
        ));
        assert!(DiskConfiguration::new(vec![Disk::at(0.0, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn overlapping_unit_disks_report_both_kinds() {
        let d = DiskConfiguration::new(vec![Disk::at(0.5, 0.0, 1.0), Disk::at(-0.5, 0.0, 1.0)])
            .unwrap();
        let v = d.violations(TOL);
        assert!(v.contains(&Violation::Containment {
            disk: 0,
            excess: 0.5
        }));
        assert!(v.contains(&Violation::Containment {
            disk: 1,
            excess: 0.5
        }));
        assert!(v.contains(&Violation::Overlap {
            i: 0,
            j: 1,
            overlap: 1.0
        }));
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn tangency_is_allowed() {
        let d = DiskConfiguration::new(vec![Disk::at(0.5, 0.0, 0.5), Disk::at(-0.5, 0.0, 0.5)])
            .unwrap();
        assert!(d.is_valid(0.0));
    }

    #[test]
    fn compose_example() {
        let d = two_disks();
        let out = d.compose(0, &d).unwrap();
        let expected = [
            Disk::at(0.625, 0.0, 0.0625),
            Disk::at(0.375, 0.0, 0.0625),
            Disk::at(-0.5, 0.0, 0.25),
        ];
        assert_eq!(out.disks(), &expected);
        assert!(out.is_valid(TOL));
        assert!(matches!(
            d.compose(2, &d),
            Err(Error::IndexOutOfRange { index: 2, arity: 2 })
        ));
    }

    #[test]
    fn units() {
        let d = two_disks();
        let id = DiskConfiguration::identity();
        assert_eq!(d.compose(1, &id).unwrap(), d);
        assert_eq!(id.compose(0, &d).unwrap(), d);
    }

    #[test]
    fn permutation_action() {
        let d = two_disks();
        assert_eq!(d.act_permutation(&Permutation::identity(2)).unwrap(), d);
        let swapped = d
            .act_permutation(&Permutation::transposition(2, 0, 1).unwrap())
            .unwrap();
        assert_eq!(swapped.disks(), &[d.disks()[1], d.disks()[0]]);
    }

    #[test]
    fn projection_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d =
            DiskConfiguration::new(vec![Disk::at(-s, 0.0, 0.2), Disk::at(s, 0.0, 0.2)]).unwrap();
        let p = d.project_centers().unwrap();
        assert!((p.points()[0] - PlanePoint::new(-s, 0.0)).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = crate::random::random_disks(&mut rng, 4, 1000).unwrap();
        let a = 0.37;
        let b = PlanePoint::new(0.1, -0.2);
        let moved = DiskConfiguration::new(
            d.disks()
                .iter()
                .map(|x| Disk::new(x.center * a + b, x.radius * a))
                .collect(),
        )
        .unwrap();
        assert!(
            d.project_centers()
                .unwrap()
                .distance(&moved.project_centers().unwrap())
                < 1e-12
        );
        assert!(DiskConfiguration::identity().project_centers().is_err());
    }

    #[test]
    fn blend_examples() {
        let tol = Tolerances::default();
        let d1 = two_disks();
        let d2 = DiskConfiguration::new(vec![Disk::at(0.5, 0.0, 0.1), Disk::at(-0.5, 0.0, 0.2)])
            .unwrap();
        assert_eq!(convex_blend(&d1, &d2, 1.0, &tol).unwrap(), d1);
        assert_eq!(convex_blend(&d1, &d2, 0.0, &tol).unwrap(), d2);
        let mid = convex_blend(&d1, &d2, 0.5, &tol).unwrap();
        assert!((mid.disks()[0].radius - 0.175).abs() < 1e-15);
        assert!((mid.disks()[1].radius - 0.225).abs() < 1e-15);
        assert_eq!(mid.centers(), d1.centers());

        assert!(matches!(
            convex_blend(&d1, &DiskConfiguration::identity(), 0.5, &tol),
            Err(Error::SizeMismatch { .. })
        ));

        // Centers not related by an affine map: the midpoint collides.
        let a = DiskConfiguration::new(vec![Disk::at(-0.5, 0.0, 0.3), Disk::at(0.5, 0.0, 0.3)])
            .unwrap();
        let b = DiskConfiguration::new(vec![Disk::at(0.5, 0.0, 0.3), Disk::at(-0.5, 0.0, 0.3)])
            .unwrap();
        assert!(matches!(
            convex_blend(&a, &b, 0.5, &tol),
            Err(Error::BlendInvalid { .. })
        ));
    }

    #[test]
    fn blend_with_affine_image_is_valid_on_a_grid() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let d1 = crate::random::random_disks(&mut rng, n, 1000).unwrap();
            let a = rng.gen_range(0.2..1.0);
            let shift = PlanePoint::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2));
            // shrink about the origin, then shift while staying inside the unit disk
            let img: Vec<Disk> = d1
                .disks()
                .iter()
                .map(|x| Disk::new(x.center * a + shift * (1.0 - a), x.radius * a))
                .collect();
            let d2 = DiskConfiguration::validated(img, TOL).unwrap();
            for k in 0..=20 {
                convex_blend(&d1, &d2, k as f64 / 20.0, &tol).unwrap();
            }
        }
    }
}
