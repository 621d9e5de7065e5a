//! Permutations of `0..n` acting on the right of ordered sequences.
//!
//! The action convention is `(x·σ)[i] = x[σ(i)]`, so `(x·σ)·τ = x·(σ∘τ)`
//! with `(σ∘τ)(i) = σ(τ(i))`. Indices are zero-based in the API and
//! one-based in JSON.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &k in &images {
            if k >= n || seen[k] {
                return Err(Error::Parameter(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[k] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                arity: n,
            });
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &k) in self.images.iter().enumerate() {
            inv[k] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        self.check_len(other.len())?;
        Ok(Permutation {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &k)| i == k)
    }

    /// Right action on a sequence: output `i` is input `σ(i)`.
    pub fn act<T: Clone>(&self, items: &[T]) -> Result<Vec<T>> {
        self.check_len(items.len())?;
        Ok(self.images.iter().map(|&k| items[k].clone()).collect())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.images.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: self.images.len(),
            });
        }
        Ok(())
    }

    /// The block permutation `σ ∘_slot id_m` induced on the output of an
    /// insertion of `m` items at position `slot` of a sequence permuted by `σ`:
    ///
    /// `insert(x·σ, slot, y) = insert(x, σ(slot), y) · block_insert(σ, slot, m)`.
    pub fn block_insert(&self, slot: usize, m: usize) -> Result<Self> {
        let n = self.images.len();
        if slot >= n {
            return Err(Error::IndexOutOfRange {
                index: slot,
                arity: n,
            });
        }
        if m == 0 {
            return Err(Error::Arity("cannot insert an empty block".into()));
        }
        let target = self.images[slot];
        let shift = |k: usize| if k < target { k } else { k + m - 1 };
        let mut images = Vec::with_capacity(n + m - 1);
        for p in 0..slot {
            images.push(shift(self.images[p]));
        }
        for q in 0..m {
            images.push(target + q);
        }
        for p in slot + 1..n {
            images.push(shift(self.images[p]));
        }
        Ok(Permutation { images })
    }

    /// `id_n ∘_slot τ`: permutes only the inserted block.
    pub fn inner_block(n: usize, slot: usize, inner: &Permutation) -> Result<Self> {
        if slot >= n {
            return Err(Error::IndexOutOfRange {
                index: slot,
                arity: n,
            });
        }
        let m = inner.len();
        let mut images: Vec<usize> = (0..slot).collect();
        images.extend(inner.images.iter().map(|&k| slot + k));
        images.extend(slot + m..n + m - 1);
        Ok(Permutation { images })
    }

    /// Block sum `self ⊕ other` acting on `0..n+m`.
    pub fn direct_sum(&self, other: &Permutation) -> Self {
        let n = self.len();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&k| k + n));
        Permutation { images }
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.images.iter().map(|k| k + 1).collect();
        one_based.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let one_based = Vec::<usize>::deserialize(deserializer)?;
        if one_based.contains(&0) {
            return Err(serde::de::Error::custom("permutation images are 1-based"));
        }
        Permutation::new(one_based.into_iter().map(|k| k - 1).collect())
            .map_err(serde::de::Error::custom)
    }
}
