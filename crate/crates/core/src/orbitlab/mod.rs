//! Partitions, orbit labels `(λ, qtup)`, orbit counts and enumeration.

mod count;
mod enumerate;
mod partition;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadform::{QFormClass, WittClass, WittLaw};

pub use count::{count_brute, count_closed, count_for_partition, count_n1, count_n2, tuple_class};
pub use enumerate::enumerate_tuples;
pub use partition::{partitions, partitions_even_mult, Partition, PartitionError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    O,
    SO,
}

impl std::str::FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "O" => Ok(Group::O),
            "SO" => Ok(Group::SO),
            _ => Err(format!("unknown group {s:?} (expected O or SO)")),
        }
    }
}

/// Which of the two `SO(q)`-orbits of a very even partition.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VeTag {
    I,
    II,
}

/// A rational nilpotent orbit: partition, forms on the odd multiplicity
/// spaces (ascending odd part), and the very even tag where needed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub lambda: Partition,
    pub qtup: Vec<QFormClass>,
    pub ve: Option<VeTag>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("partition {0} has an even part of odd multiplicity")]
    NotInLambda(Partition),
    #[error("partition {lambda} sums to {got}, expected {expected}")]
    WrongSize { lambda: Partition, got: u32, expected: u32 },
    #[error("expected {expected} forms (one per distinct odd part), got {got}")]
    TupleLength { expected: usize, got: usize },
    #[error("form {form} does not have degree {mult} for part {part}")]
    TupleDegree { part: u32, mult: u32, form: QFormClass },
    #[error("forms sum to {got} in the Witt group, expected {expected}")]
    WittSum { got: WittClass, expected: WittClass },
    #[error("very even tag is {0}")]
    VeTag(&'static str),
}

impl OrbitLabel {
    /// `(odd part, form)` pairs in ascending part order.
    pub fn odd_forms(&self) -> impl Iterator<Item = (u32, QFormClass)> + '_ {
        self.lambda
            .odd_parts()
            .into_iter()
            .map(|(i, _)| i)
            .zip(self.qtup.iter().copied())
    }

    pub fn form_of_part(&self, part: u32) -> Option<QFormClass> {
        self.odd_forms().find(|&(i, _)| i == part).map(|(_, q)| q)
    }

    pub fn witt_sum(&self, law: WittLaw) -> WittClass {
        tuple_class(&self.qtup, law)
    }

    /// Checks membership in `N(⟨q⟩, n)` (or `N^hyp(n)`) for the given group.
    pub fn validate(&self, q: QFormClass, group: Group, law: WittLaw) -> Result<(), LabelError> {
        let l = &self.lambda;
        if l.n() != q.degree {
            return Err(LabelError::WrongSize {
                lambda: l.clone(),
                got: l.n(),
                expected: q.degree,
            });
        }
        if !l.has_even_mult() {
            return Err(LabelError::NotInLambda(l.clone()));
        }
        let odd = l.odd_parts();
        if odd.len() != self.qtup.len() {
            return Err(LabelError::TupleLength {
                expected: odd.len(),
                got: self.qtup.len(),
            });
        }
        for (&(part, mult), &form) in odd.iter().zip(&self.qtup) {
            if form.degree != mult || QFormClass::new(form.degree, form.cls).is_err() {
                return Err(LabelError::TupleDegree { part, mult, form });
            }
        }
        let got = self.witt_sum(law);
        if got != q.cls {
            return Err(LabelError::WittSum { got, expected: q.cls });
        }
        let needs_tag = l.is_very_even() && group == Group::SO && q.cls.is_zero();
        match (needs_tag, self.ve) {
            (true, None) => Err(LabelError::VeTag("required for very even SO orbits")),
            (false, Some(_)) => Err(LabelError::VeTag("only allowed for very even SO orbits")),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.lambda)?;
        for (k, q) in self.qtup.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("]")?;
        if let Some(t) = self.ve {
            write!(f, " {t:?}")?;
        }
        Ok(())
    }
}

/// Labels contributed by one partition.
pub fn labels_for_partition(lambda: &Partition, q: QFormClass, group: Group, law: WittLaw) -> Vec<OrbitLabel> {
    let tuples = enumerate_tuples(lambda, q.cls, law);
    if lambda.is_very_even() && group == Group::SO && q.cls.is_zero() {
        return [VeTag::I, VeTag::II]
            .into_iter()
            .map(|t| OrbitLabel {
                lambda: lambda.clone(),
                qtup: Vec::new(),
                ve: Some(t),
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|qtup| OrbitLabel {
            lambda: lambda.clone(),
            qtup,
            ve: None,
        })
        .collect()
}

/// Every nilpotent orbit of `O(q)` or `SO(q)`, partitions in reverse-lex order.
pub fn orbit_labels(q: QFormClass, group: Group, law: WittLaw) -> Vec<OrbitLabel> {
    partitions_even_mult(q.degree)
        .iter()
        .flat_map(|l| labels_for_partition(l, q, group, law))
        .collect()
}

/// One row of an orbit count table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub lambda: Partition,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub closed: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute: Option<u128>,
    /// Orbit count for `SO(q)` (differs only for very even partitions).
    pub so: u128,
}

pub fn count_row(lambda: &Partition, u: WittClass, law: WittLaw, check: bool) -> CountRow {
    let (a, b, c) = lambda.abc();
    let closed = count_for_partition(lambda, u);
    let so = if lambda.is_very_even() && u.is_zero() { 2 * closed } else { closed };
    CountRow {
        lambda: lambda.clone(),
        a,
        b,
        c,
        closed,
        brute: check.then(|| count_brute(lambda, u, law)),
        so,
    }
}
