//! Sparse matrices over `PadicNum`, plus the dense valuation-aware
//! elimination used for ranks, kernels and inverses.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::padic::{PadicCtx, PadicNum};

/// Coordinate-list matrix; absent entries are exact zeros.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    ctx: Arc<PadicCtx>,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), PadicNum>,
}

impl PartialEq for SparseMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl SparseMatrix {
    pub fn zeros(ctx: &Arc<PadicCtx>, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            ctx: Arc::clone(ctx),
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(ctx: &Arc<PadicCtx>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_dense(ctx: &Arc<PadicCtx>, rows: &[Vec<PadicNum>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(ctx, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> PadicNum {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, x: PadicNum) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of bounds");
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
    }

    /// `self[i][j] += x`.
    pub fn add_at(&mut self, i: usize, j: usize, x: &PadicNum) {
        if x.is_zero() {
            return;
        }
        let sum = &self.get(i, j) + x;
        self.set(i, j, sum);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &PadicNum)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (usize, &PadicNum)> {
        self.entries
            .range((i, 0)..(i + 1, 0))
            .map(|(&(_, j), v)| (j, v))
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = SparseMatrix::zeros(&self.ctx, self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for (j, b) in other.row(k) {
                out.add_at(i, j, &(a * b));
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(i, j), x) in &other.entries {
            out.add_at(i, j, x);
        }
        out
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scale(&-self.ctx.one()))
    }

    pub fn scale(&self, c: &PadicNum) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(&self.ctx, self.rows, self.cols);
        for (&(i, j), x) in &self.entries {
            out.set(i, j, x * c);
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(&self.ctx, self.cols, self.rows);
        for (&(i, j), x) in &self.entries {
            out.set(j, i, x.clone());
        }
        out
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Smallest valuation among nonzero entries; `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.entries.values().filter_map(PadicNum::valuation).min()
    }

    /// All entries vanish to within the zero threshold.
    pub fn is_negligible(&self) -> bool {
        self.entries.values().all(PadicNum::is_negligible)
    }

    pub fn to_dense(&self) -> Vec<Vec<PadicNum>> {
        let mut d = vec![vec![self.ctx.zero(); self.cols]; self.rows];
        for (&(i, j), x) in &self.entries {
            d[i][j] = x.clone();
        }
        d
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[PadicNum]) -> Vec<PadicNum> {
        let mut out = vec![self.ctx.zero(); self.rows];
        for (&(i, j), x) in &self.entries {
            out[i] = &out[i] + &(x * &v[j]);
        }
        out
    }

    pub fn pow(&self, e: u32) -> SparseMatrix {
        let mut acc = SparseMatrix::identity(&self.ctx, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Serialized as `[[row, col, val, "unit"], …]` with a balanced decimal unit.
impl Serialize for SparseMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for (&(i, j), x) in &self.entries {
            let val = x.valuation().unwrap_or(0);
            seq.serialize_element(&(i, j, val, x.signed_unit().to_string()))?;
        }
        seq.end()
    }
}

fn is_zeroish(x: &PadicNum) -> bool {
    x.is_negligible()
}

/// Row echelon data from full-pivot elimination.
struct Echelon {
    /// Reduced rows (pivot rows first), each pivot normalized to 1.
    rows: Vec<Vec<PadicNum>>,
    /// Pivot column of each of the first `rank` rows.
    pivots: Vec<usize>,
}

/// Gauss–Jordan elimination choosing, at every step, the remaining entry of
/// minimal valuation; entries within the zero threshold count as zero.
fn eliminate(ctx: &Arc<PadicCtx>, a: &[Vec<PadicNum>], cols: usize) -> Echelon {
    let mut rows: Vec<Vec<PadicNum>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut used_cols = vec![false; cols];
    let mut r = 0;
    while r < rows.len() {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate() {
                if used_cols[j] || is_zeroish(x) {
                    continue;
                }
                let v = x.valuation().expect("nonzero");
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        rows.swap(r, pi);
        let inv = rows[r][pj].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[pj].is_zero() {
                continue;
            }
            let f = row[pj].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
            row[pj] = ctx.zero();
        }
        used_cols[pj] = true;
        pivots.push(pj);
        r += 1;
    }
    Echelon { rows, pivots }
}

pub fn rank(a: &SparseMatrix) -> usize {
    eliminate(a.ctx(), &a.to_dense(), a.cols()).pivots.len()
}

/// Basis of the right null space `{x : A x = 0}`.
pub fn kernel(a: &SparseMatrix) -> Vec<Vec<PadicNum>> {
    let ctx = a.ctx();
    let ech = eliminate(ctx, &a.to_dense(), a.cols());
    let pivot_of_col: BTreeMap<usize, usize> =
        ech.pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    (0..a.cols())
        .filter(|c| !pivot_of_col.contains_key(c))
        .map(|free| {
            let mut x = vec![ctx.zero(); a.cols()];
            x[free] = ctx.one();
            for (&c, &r) in &pivot_of_col {
                x[c] = -&ech.rows[r][free];
            }
            x
        })
        .collect()
}

/// Inverse of a square matrix, or `None` if it is singular to working precision.
pub fn inverse(a: &SparseMatrix) -> Option<SparseMatrix> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of a non-square matrix");
    let ctx = a.ctx();
    let mut aug = a.to_dense();
    for (i, row) in aug.iter_mut().enumerate() {
        row.extend((0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }));
    }
    // Only the left block may supply pivots.
    let mut rows = aug;
    for k in 0..n {
        let (_, pi) = (k..n)
            .filter(|&i| !is_zeroish(&rows[i][k]))
            .map(|i| (rows[i][k].valuation().expect("nonzero"), i))
            .min()?;
        rows.swap(k, pi);
        let inv = rows[k][k].inv().ok()?;
        for x in rows[k].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[k].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
    }
    let right: Vec<Vec<PadicNum>> = rows.into_iter().map(|r| r[n..].to_vec()).collect();
    Some(SparseMatrix::from_dense(ctx, &right))
}

/// Diagonal of a congruent diagonalization `PᵀGP` of a symmetric matrix.
///
/// Pivots on the entry of least valuation; when that entry is off the
/// diagonal the pair `u_a + u_b` is used instead, which keeps the pivot's
/// valuation because 2 is a unit.
pub fn diagonalize_symmetric(g: &SparseMatrix) -> Vec<PadicNum> {
    let n = g.rows();
    assert_eq!(n, g.cols(), "Gram matrix must be square");
    let mut a = g.to_dense();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut diag = Vec::new();
    while !alive.is_empty() {
        let mut best: Option<(i64, usize, usize)> = None;
        for &i in &alive {
            for &j in &alive {
                if j < i || is_zeroish(&a[i][j]) {
                    continue;
                }
                let v = a[i][j].valuation().expect("nonzero");
                // prefer diagonal pivots at equal valuation
                let key = (v, usize::from(i != j));
                if best.is_none_or(|(bv, bi, bj)| key < (bv, usize::from(bi != bj))) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else {
            diag.extend(alive.iter().map(|_| g.ctx().zero()));
            break;
        };
        if i != j {
            // u_i <- u_i + u_j
            for &k in &alive {
                let t = &a[i][k] + &a[j][k];
                a[i][k] = t;
            }
            for &k in &alive {
                let t = &a[k][i] + &a[k][j];
                a[k][i] = t;
            }
        }
        let piv = a[i][i].clone();
        let inv = piv.inv().expect("pivot is nonzero");
        let rest: Vec<usize> = alive.iter().copied().filter(|&k| k != i).collect();
        for &r in &rest {
            let f = &a[r][i] * &inv;
            if f.is_zero() {
                continue;
            }
            for &c in &rest {
                let t = &a[r][c] - &(&f * &a[i][c]);
                a[r][c] = t;
            }
        }
        diag.push(piv);
        alive = rest;
    }
    diag
}
