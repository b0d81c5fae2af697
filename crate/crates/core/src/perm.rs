//! Permutations of `{1, …, n}` and their cycle structure.
//!
//! The public surface is 1-based: `apply(1)` is the image of the first
//! point, and cycles list 1-based points. Storage is 0-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection of `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    /// `images[i] = σ(i + 1) - 1`.
    images: Vec<usize>,
}

/// Disjoint cycles of a permutation, fixed points included as 1-cycles.
///
/// Canonical form: every cycle starts at its smallest point and cycles are
/// sorted by that point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "degree must be positive"));
        }
        Ok(Permutation {
            images: (0..n).collect(),
        })
    }

    /// The cyclic shift `i ↦ i + k (mod n)`.
    pub fn tau(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "degree must be positive"));
        }
        if k == 0 || k > n {
            return Err(Error::param(
                "k",
                format!("offset {k} outside 1..={n}"),
            ));
        }
        Ok(Permutation {
            images: (0..n).map(|i| (i + k) % n).collect(),
        })
    }

    /// Builds a permutation from its 1-based image list `(σ(1), …, σ(n))`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::param("images", "empty image list"));
        }
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for (pos, &img) in images.iter().enumerate() {
            if img == 0 || img > n {
                return Err(Error::param(
                    "images",
                    format!("image {img} at position {} outside 1..={n}", pos + 1),
                ));
            }
            if seen[img - 1] {
                return Err(Error::param(
                    "images",
                    format!("value {img} appears more than once"),
                ));
            }
            seen[img - 1] = true;
            zero_based.push(img - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    /// Rebuilds a permutation of degree `n` from 1-based cycles. Points not
    /// mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<Option<usize>> = vec![None; n];
        for cycle in cycles {
            for (j, &point) in cycle.iter().enumerate() {
                let next = cycle[(j + 1) % cycle.len()];
                if point == 0 || point > n || next == 0 || next > n {
                    return Err(Error::param("cycles", format!("point outside 1..={n}")));
                }
                if images[point - 1].is_some() {
                    return Err(Error::param(
                        "cycles",
                        format!("point {point} appears in two cycles"),
                    ));
                }
                images[point - 1] = Some(next);
            }
        }
        let list: Vec<usize> = images
            .iter()
            .enumerate()
            .map(|(i, img)| img.unwrap_or(i + 1))
            .collect();
        Permutation::from_images(&list)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// `σ⁻¹(i)` for 1-based `i`.
    pub fn preimage(&self, i: usize) -> usize {
        self.images.iter().position(|&x| x == i - 1).expect("bijection") + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub(crate) fn at(&self, i: usize) -> usize {
        self.images[i]
    }

    pub(crate) fn inverse_table(&self) -> Vec<usize> {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img] = i;
        }
        inv
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            images: self.inverse_table(),
        }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::param(
                "sigma",
                format!("degrees {} and {} differ", self.degree(), other.degree()),
            ));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn cycle_decompose(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                cycle.push(i + 1);
                i = self.images[i];
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    /// `(l_min, l_max)` over the disjoint cycle decomposition.
    pub fn min_max_cycle_length(&self) -> (usize, usize) {
        let lengths = self.cycle_decompose().lengths();
        let min = *lengths.iter().min().expect("nonempty");
        let max = *lengths.iter().max().expect("nonempty");
        (min, max)
    }

    pub fn is_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| self.images[x] == i)
    }

    /// 1-based fixed points.
    pub fn fixed_points(&self) -> BTreeSet<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// True when σ is a single cycle through all `n` points.
    pub fn is_full_cycle(&self) -> bool {
        self.cycle_decompose().cycles.len() == 1
    }
}

impl CycleDecomposition {
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn degree(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in &self.cycles {
            let parts: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(usize::to_string).collect();
        write!(f, "images:{}", parts.join(","))
    }
}

fn parse_usize(field: &str, text: &str) -> Result<usize> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| Error::param(field, format!("`{text}` is not a non-negative integer")))
}

/// Accepts `tau:n:k`, `images:2,1,4,3` and `id:n`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::param("sigma", format!("`{s}` has no `kind:` prefix")))?;
        match kind {
            "tau" => {
                let (n, k) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::param("sigma", "expected `tau:n:k`"))?;
                Permutation::tau(parse_usize("sigma", n)?, parse_usize("sigma", k)?)
            }
            "id" => Permutation::identity(parse_usize("sigma", rest)?),
            "images" => {
                let images = rest
                    .split(',')
                    .map(|t| parse_usize("sigma", t))
                    .collect::<Result<Vec<_>>>()?;
                Permutation::from_images(&images)
            }
            other => Err(Error::param(
                "sigma",
                format!("unknown permutation kind `{other}` (expected tau, id or images)"),
            )),
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
