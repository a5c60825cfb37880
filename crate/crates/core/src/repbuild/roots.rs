//! Root vectors of `so(q)` relative to the split torus of the Witt basis.
//!
//! Witt indices are 0-based here; the basis order is `v_0..v_{m-1}`,
//! `w_0..w_{m-1}`, `z_0..z_{d-1}`.

use std::fmt;

use serde::Serialize;

use crate::matrix::SparseMatrix;
use crate::padic::PadicNum;

use super::BasisMap;

/// A root of `so(q)`, labelled the way its root vector is written.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Root {
    /// `e_i - e_j`, vector `X_{i,j}`.
    Diff { i: usize, j: usize },
    /// `e_i + e_j` (`i < j`), vector `X_{i,-j}`.
    Sum { i: usize, j: usize },
    /// `-e_i - e_j` (`i < j`), vector `X_{-i,j}`.
    NegSum { i: usize, j: usize },
    /// `e_i`, vector `X_i^ℓ`.
    Short { i: usize, l: usize },
    /// `-e_i`, vector `X_{-i}^ℓ`.
    NegShort { i: usize, l: usize },
}

impl Root {
    /// Coefficients of the root as a functional on `R^m`.
    pub fn functional(self) -> Vec<(usize, i64)> {
        match self {
            Root::Diff { i, j } => vec![(i, 1), (j, -1)],
            Root::Sum { i, j } => vec![(i, 1), (j, 1)],
            Root::NegSum { i, j } => vec![(i, -1), (j, -1)],
            Root::Short { i, .. } => vec![(i, 1)],
            Root::NegShort { i, .. } => vec![(i, -1)],
        }
    }

    /// The opposite root (same kernel slot for short roots).
    pub fn negate(self) -> Root {
        match self {
            Root::Diff { i, j } => Root::Diff { i: j, j: i },
            Root::Sum { i, j } => Root::NegSum { i, j },
            Root::NegSum { i, j } => Root::Sum { i, j },
            Root::Short { i, l } => Root::NegShort { i, l },
            Root::NegShort { i, l } => Root::Short { i, l },
        }
    }

    pub fn is_short(self) -> bool {
        matches!(self, Root::Short { .. } | Root::NegShort { .. })
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Root::Diff { i, j } => write!(f, "e{}-e{}", i + 1, j + 1),
            Root::Sum { i, j } => write!(f, "e{}+e{}", i + 1, j + 1),
            Root::NegSum { i, j } => write!(f, "-e{}-e{}", i + 1, j + 1),
            Root::Short { i, l } => write!(f, "e{}[z{}]", i + 1, l + 1),
            Root::NegShort { i, l } => write!(f, "-e{}[z{}]", i + 1, l + 1),
        }
    }
}

impl BasisMap {
    pub fn v(&self, i: usize) -> usize {
        i
    }

    pub fn w(&self, i: usize) -> usize {
        self.m + i
    }

    pub fn z(&self, l: usize) -> usize {
        2 * self.m + l
    }

    pub fn dim(&self) -> usize {
        2 * self.m + self.d
    }

    /// Entry of the root vector's defining matrix that carries its coefficient.
    pub fn root_anchor(&self, root: Root) -> (usize, usize) {
        match root {
            Root::Diff { i, j } => (self.v(i), self.v(j)),
            Root::Sum { i, j } => (self.v(i), self.w(j)),
            Root::NegSum { i, j } => (self.w(j), self.v(i)),
            Root::Short { i, l } => (self.z(l), self.w(i)),
            Root::NegShort { i, l } => (self.z(l), self.v(i)),
        }
    }

    /// The defining matrix of the root vector.
    pub fn root_matrix(&self, root: Root) -> SparseMatrix {
        let ctx = self.ctx();
        let one = ctx.one();
        let mut x = SparseMatrix::zeros(ctx, self.dim(), self.dim());
        let mut put = |r: usize, c: usize, a: &PadicNum| x.add_at(r, c, a);
        match root {
            Root::Diff { i, j } => {
                put(self.v(i), self.v(j), &one);
                put(self.w(j), self.w(i), &-&one);
            }
            Root::Sum { i, j } => {
                put(self.v(i), self.w(j), &one);
                put(self.v(j), self.w(i), &-&one);
            }
            Root::NegSum { i, j } => {
                put(self.w(j), self.v(i), &one);
                put(self.w(i), self.v(j), &-&one);
            }
            Root::Short { i, l } => {
                put(self.z(l), self.w(i), &one);
                put(self.v(i), self.z(l), &-&self.r_list[l]);
            }
            Root::NegShort { i, l } => {
                put(self.z(l), self.v(i), &one);
                put(self.w(i), self.z(l), &-&self.r_list[l]);
            }
        }
        x
    }

    /// Every root of `so(q)` for this basis.
    pub fn all_roots(&self) -> Vec<Root> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.m {
                if i != j {
                    out.push(Root::Diff { i, j });
                }
                if i < j {
                    out.push(Root::Sum { i, j });
                    out.push(Root::NegSum { i, j });
                }
            }
            for l in 0..self.d {
                out.push(Root::Short { i, l });
                out.push(Root::NegShort { i, l });
            }
        }
        out
    }

    /// `Σ c_α X_α` for a list of `(α, c_α)`.
    pub fn combine(&self, terms: &[(Root, PadicNum)]) -> SparseMatrix {
        let ctx = self.ctx();
        let mut acc = SparseMatrix::zeros(ctx, self.dim(), self.dim());
        for (root, c) in terms {
            acc = acc.add(&self.root_matrix(*root).scale(c));
        }
        acc
    }
}
