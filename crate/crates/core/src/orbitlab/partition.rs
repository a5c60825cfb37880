use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("cannot parse partition from {0:?}")]
    Parse(String),
}

/// A partition, stored with parts in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts, counted with multiplicity.
    pub fn num_parts(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.parts.iter().filter(|&&x| x == part).count() as u32
    }

    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &x in &self.parts {
            *m.entry(x).or_insert(0) += 1;
        }
        m
    }

    /// Distinct odd parts in ascending order, with multiplicities.
    pub fn odd_parts(&self) -> Vec<(u32, u32)> {
        self.multiplicities()
            .into_iter()
            .filter(|(i, _)| i % 2 == 1)
            .collect()
    }

    /// Distinct even parts in ascending order, with multiplicities.
    pub fn even_parts(&self) -> Vec<(u32, u32)> {
        self.multiplicities()
            .into_iter()
            .filter(|(i, _)| i % 2 == 0)
            .collect()
    }

    /// Whether every even part has even multiplicity.
    pub fn has_even_mult(&self) -> bool {
        self.even_parts().iter().all(|(_, m)| m % 2 == 0)
    }

    pub fn is_very_even(&self) -> bool {
        !self.parts.is_empty() && self.parts.iter().all(|x| x % 2 == 0) && self.has_even_mult()
    }

    /// Numbers of odd parts with multiplicity 1, 2 and at least 3.
    pub fn abc(&self) -> (u32, u32, u32) {
        let mut abc = (0, 0, 0);
        for (_, m) in self.odd_parts() {
            match m {
                1 => abc.0 += 1,
                2 => abc.1 += 1,
                _ => abc.2 += 1,
            }
        }
        abc
    }

    /// Total multiplicity of the odd parts.
    pub fn odd_mult_total(&self) -> u32 {
        self.odd_parts().iter().map(|(_, m)| m).sum()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = PartitionError;
    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Accepts `5,3,1`, `(1,3,5)` or `[5 3 1]`.
impl FromStr for Partition {
    type Err = PartitionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        if parts.is_empty() {
            return Err(PartitionError::Parse(s.to_string()));
        }
        Partition::new(parts)
    }
}

/// All partitions of `n` in reverse-lexicographic order, starting from `(n)`.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for x in (1..=max.min(remaining)).rev() {
            cur.push(x);
            rec(remaining - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Partitions of `n` whose even parts occur with even multiplicity.
pub fn partitions_even_mult(n: u32) -> Vec<Partition> {
    partitions(n).into_iter().filter(Partition::has_even_mult).collect()
}
