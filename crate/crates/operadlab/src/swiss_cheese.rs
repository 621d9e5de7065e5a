//! The 2-colored Swiss-cheese operad.
//!
//! Only the upper closed disks and the open disks are stored; mirror disks
//! are implicit. Flattened label order is: closed `0..n`, their mirrors
//! `n..2n` (mirror of `i` is `i + n`), open disks `2n..2n+m`.

use serde::{Deserialize, Serialize};

use crate::color::Color;
use crate::config_space::{Pairing, Tolerances};
use crate::error::{Error, Result};
use crate::little_disks::{Disk, DiskConfiguration};
use crate::permutation::Permutation;

/// A point of `SC(n, m; o)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSc", into = "RawSc")]
pub struct SCConfiguration {
    closed_upper: Vec<Disk>,
    open: Vec<Disk>,
}

#[derive(Serialize, Deserialize)]
struct RawSc {
    closed_upper: Vec<Disk>,
    open: Vec<Disk>,
}

impl TryFrom<RawSc> for SCConfiguration {
    type Error = Error;
    fn try_from(raw: RawSc) -> Result<Self> {
        SCConfiguration::new(raw.closed_upper, raw.open, &Tolerances::default())
    }
}

impl From<SCConfiguration> for RawSc {
    fn from(sc: SCConfiguration) -> Self {
        RawSc {
            closed_upper: sc.closed_upper,
            open: sc.open,
        }
    }
}

/// A label in the colored numbering: closed labels run over `0..2n`
/// (mirrors included), open labels over `0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredLabel {
    pub color: Color,
    pub index: usize,
}

/// An output of the colored operad: `SC(n, m; o)` or `SC(n, 0; c) = D₂(n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SwissCheeseValue {
    Open(SCConfiguration),
    Closed(DiskConfiguration),
}

impl SCConfiguration {
    pub fn new(closed_upper: Vec<Disk>, open: Vec<Disk>, tol: &Tolerances) -> Result<Self> {
        if closed_upper.is_empty() && open.is_empty() {
            return Err(Error::Arity("SC(0, 0; o) is empty".into()));
        }
        if let Some(k) = closed_upper.iter().position(|d| !(d.center.im > 0.0)) {
            return Err(Error::Parameter(format!(
                "closed disk {k} is not centered in the upper half-plane"
            )));
        }
        if let Some(k) = open.iter().position(|d| !(d.center.im.abs() <= tol.geo)) {
            return Err(Error::Parameter(format!(
                "open disk {k} is not centered on the real axis"
            )));
        }
        let sc = SCConfiguration { closed_upper, open };
        sc.to_disks_unvalidated()?.validate(tol.geo)?;
        Ok(sc)
    }

    /// The open unit disk: unit for the open color.
    pub fn open_identity() -> Self {
        SCConfiguration {
            closed_upper: Vec::new(),
            open: vec![Disk::at(0.0, 0.0, 1.0)],
        }
    }

    pub fn closed_upper(&self) -> &[Disk] {
        &self.closed_upper
    }

    pub fn open(&self) -> &[Disk] {
        &self.open
    }

    /// `(n, m)`: closed pairs and open disks.
    pub fn arity(&self) -> (usize, usize) {
        (self.closed_upper.len(), self.open.len())
    }

    pub fn disk(&self, label: ColoredLabel) -> Result<Disk> {
        let (n, m) = self.arity();
        match label.color {
            Color::Closed if label.index < n => Ok(self.closed_upper[label.index]),
            Color::Closed if label.index < 2 * n => Ok(self.closed_upper[label.index - n].conj()),
            Color::Open if label.index < m => Ok(self.open[label.index]),
            Color::Closed => Err(Error::IndexOutOfRange {
                index: label.index,
                arity: 2 * n,
            }),
            Color::Open => Err(Error::IndexOutOfRange {
                index: label.index,
                arity: m,
            }),
        }
    }

    fn to_disks_unvalidated(&self) -> Result<DiskConfiguration> {
        let mut disks = Vec::with_capacity(2 * self.closed_upper.len() + self.open.len());
        disks.extend_from_slice(&self.closed_upper);
        disks.extend(self.closed_upper.iter().map(Disk::conj));
        disks.extend_from_slice(&self.open);
        DiskConfiguration::new(disks)
    }

    /// The underlying `2n + m` disk configuration in flattened label order.
    pub fn to_disks(&self) -> DiskConfiguration {
        self.to_disks_unvalidated()
            .expect("an SC configuration has at least one disk with positive radius")
    }

    /// Reads a flattened configuration back, checking that slot `n + i`
    /// mirrors slot `i` and that the last `m` slots are real-centered.
    pub fn from_disks(d: &DiskConfiguration, n: usize, m: usize, tol: &Tolerances) -> Result<Self> {
        if d.len() != 2 * n + m {
            return Err(Error::SizeMismatch {
                expected: 2 * n + m,
                found: d.len(),
            });
        }
        let disks = d.disks();
        for i in 0..n {
            let (a, b) = (disks[i], disks[n + i]);
            let defect = (b.center - a.center.conj())
                .norm()
                .max((a.radius - b.radius).abs());
            if defect > tol.geo {
                return Err(Error::Symmetry(format!(
                    "disk {} is not the mirror of disk {i} (defect {defect:e})",
                    n + i
                )));
            }
        }
        Self::new(disks[..n].to_vec(), disks[2 * n..].to_vec(), tol)
    }

    /// The canonical mirror pairing `i ↔ i + n` on the flattened configuration.
    pub fn pairing(&self) -> Pairing {
        flattened_pairing(self.closed_upper.len(), self.open.len())
    }

    /// `∘ᵢᶜ`: glue `d` into closed disk `i` and `conj(d)` into its mirror.
    pub fn compose_closed(&self, i: usize, d: &DiskConfiguration) -> Result<Self> {
        let host = self.closed_upper.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            arity: self.closed_upper.len(),
        })?;
        let mut closed = Vec::with_capacity(self.closed_upper.len() + d.len() - 1);
        closed.extend_from_slice(&self.closed_upper[..i]);
        closed.extend(d.disks().iter().map(|x| host.image_of(x)));
        closed.extend_from_slice(&self.closed_upper[i + 1..]);
        Ok(SCConfiguration {
            closed_upper: closed,
            open: self.open.clone(),
        })
    }

    /// `∘ᵢᵒ`: glue `other` into open disk `i`. The closed disks of `other`
    /// are numbered after those of `self`; its open disks take the place of
    /// open disk `i`.
    pub fn compose_open(&self, i: usize, other: &SCConfiguration) -> Result<Self> {
        let host = self.open.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            arity: self.open.len(),
        })?;
        let mut closed = self.closed_upper.clone();
        closed.extend(other.closed_upper.iter().map(|x| host.image_of(x)));
        let mut open = Vec::with_capacity(self.open.len() + other.open.len() - 1);
        open.extend_from_slice(&self.open[..i]);
        open.extend(other.open.iter().map(|x| host.image_of(x)));
        open.extend_from_slice(&self.open[i + 1..]);
        Ok(SCConfiguration {
            closed_upper: closed,
            open,
        })
    }

    /// `σ` permutes closed pairs (a disk and its mirror together), `τ` the open disks.
    pub fn act(&self, sigma: &Permutation, tau: &Permutation) -> Result<Self> {
        Ok(SCConfiguration {
            closed_upper: sigma.act(&self.closed_upper)?,
            open: tau.act(&self.open)?,
        })
    }

    pub fn distance(&self, other: &SCConfiguration) -> f64 {
        self.to_disks().distance(&other.to_disks())
    }
}

pub fn flattened_pairing(n: usize, m: usize) -> Pairing {
    let mut partner: Vec<usize> = (0..2 * n + m).collect();
    for i in 0..n {
        partner[i] = i + n;
        partner[i + n] = i;
    }
    Pairing::new(partner).expect("mirror pairing is an involution")
}

/// Reindexing from the interleaved doubling order `(z₁, z̄₁, …, x₁, …)` to
/// the flattened Swiss-cheese order: `flat = interleaved · table`.
pub fn doubling_to_flattened(p: usize, q: usize) -> Permutation {
    let mut images = Vec::with_capacity(2 * p + q);
    images.extend((0..p).map(|k| 2 * k));
    images.extend((0..p).map(|k| 2 * k + 1));
    images.extend(2 * p..2 * p + q);
    Permutation::new(images).expect("reindexing table is a bijection")
}
