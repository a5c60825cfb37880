//! Root-space profile of a representative and the affine facet it cuts out
//! in the standard apartment.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gammapart::{Gamma, GammaKind};
use crate::matrix::SparseMatrix;
use crate::orbitlab::OrbitLabel;
use crate::repbuild::{BasisMap, LieTriple, Root};

pub type Q = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildingError {
    #[error("matrix has a component at ({0},{1}) outside every root space and the torus centralizer")]
    Corrupt(usize, usize),
    #[error("facet system is inconsistent")]
    Infeasible,
}

fn ser_q<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_qs<S: Serializer>(qs: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(Q::to_string))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootTerm {
    pub root: Root,
    #[serde(serialize_with = "ser_q")]
    pub valuation: Q,
}

fn half_val(basis: &BasisMap, root: Root) -> Q {
    match root {
        Root::Short { l, .. } | Root::NegShort { l, .. } => {
            Q::new(basis.r_list[l].valuation().expect("kernel scalars are nonzero"), 2)
        }
        _ => Q::zero(),
    }
}

/// Root-space components of `a` with the valuation of each, pinned so that
/// every root vector has valuation 0 except `X^ℓ_{±i}`, which has `½·val(r_ℓ)`.
pub fn root_terms(basis: &BasisMap, a: &SparseMatrix) -> Result<Vec<RootTerm>, BuildingError> {
    let mut terms = Vec::new();
    let mut combo = Vec::new();
    for root in basis.all_roots() {
        let (r, c) = basis.root_anchor(root);
        let coef = a.get(r, c);
        if coef.is_negligible() {
            continue;
        }
        let v = coef.valuation().expect("nonzero");
        terms.push(RootTerm {
            root,
            valuation: Q::from_integer(v) + half_val(basis, root),
        });
        combo.push((root, coef));
    }
    let rest = a.sub(&basis.combine(&combo));
    let m = basis.m;
    for ((r, c), x) in rest.iter() {
        let in_torus = r == c || (r >= 2 * m && c >= 2 * m);
        if !x.is_negligible() && !in_torus {
            return Err(BuildingError::Corrupt(r, c));
        }
    }
    Ok(terms)
}

/// `Φ_X` with valuations.
pub fn phi_x(t: &LieTriple) -> Result<Vec<RootTerm>, BuildingError> {
    root_terms(&t.basis, &t.x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetSolution {
    pub dim: usize,
    #[serde(serialize_with = "ser_qs")]
    pub point: Vec<Q>,
    /// Primitive integer basis of the directions along which the facet extends.
    pub lineality: Vec<Vec<i64>>,
}

/// Solves `α(x) = -val(X_α)` over `R^m` exactly.
///
/// The sample point sets every free coordinate to 0.
pub fn facet_solve(terms: &[RootTerm], m: usize) -> Result<FacetSolution, BuildingError> {
    let mut rows: Vec<Vec<Q>> = terms
        .iter()
        .map(|t| {
            let mut row = vec![Q::zero(); m + 1];
            for (i, c) in t.root.functional() {
                row[i] += Q::from_integer(c);
            }
            row[m] = -t.valuation;
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[m].is_zero()) {
        return Err(BuildingError::Infeasible);
    }

    let mut point = vec![Q::zero(); m];
    for (k, &c) in pivots.iter().enumerate() {
        point[c] = rows[k][m];
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let lineality = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); m];
            v[f] = Q::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = -rows[k][f];
            }
            primitive(&v)
        })
        .collect();
    Ok(FacetSolution {
        dim: free.len(),
        point,
        lineality,
    })
}

fn primitive(v: &[Q]) -> Vec<i64> {
    use num_integer::Integer;
    let lcm = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x)).max(1);
    ints.iter().map(|x| x / g).collect()
}

/// `|Γ_even| + |Γ_hyp|`.
pub fn dim_formula_gamma(g: &Gamma) -> usize {
    g.count(GammaKind::Even) + g.count(GammaKind::Hyp)
}

/// `(number of parts - Σ_i dim aniso(q_i)) / 2`.
pub fn dim_formula_theorem(label: &OrbitLabel) -> usize {
    let aniso: u32 = label.qtup.iter().map(|q| q.aniso_dim()).sum();
    ((label.lambda.num_parts() - aniso) / 2) as usize
}

/// Split rank of the centralizer: `Σ_even m_i/2 + Σ_odd witt_index(q_i)`.
pub fn centralizer_split_rank(label: &OrbitLabel) -> usize {
    let even: u32 = label.lambda.even_parts().iter().map(|(_, m)| m / 2).sum();
    let odd: u32 = label.qtup.iter().map(|q| q.witt_index()).sum();
    (even + odd) as usize
}

/// Predicted valuation of a component of `X` by root type and coefficient kind.
fn valuation_allowed(basis: &BasisMap, t: &RootTerm) -> bool {
    let v = t.valuation;
    match t.root {
        Root::Diff { .. } => v.is_zero(),
        Root::Sum { .. } => v.is_zero() || v.is_one(),
        Root::Short { .. } => v == half_val(basis, t.root),
        Root::NegSum { .. } | Root::NegShort { .. } => false,
    }
}

/// Violations of the valuation table: every component of `X` has its
/// predicted valuation, and `Y` is supported on the opposite roots with
/// `val(Y_{-α}) = -val(X_α)`.
pub fn valuation_violations(t: &LieTriple) -> Result<Vec<String>, BuildingError> {
    let xs = phi_x(t)?;
    let ys = root_terms(&t.basis, &t.y)?;
    let mut bad = Vec::new();
    for term in &xs {
        if !valuation_allowed(&t.basis, term) {
            bad.push(format!("X component {} has valuation {}", term.root, term.valuation));
        }
        match ys.iter().find(|y| y.root == term.root.negate()) {
            None => bad.push(format!("Y has no component on {}", term.root.negate())),
            Some(y) if y.valuation != -term.valuation => bad.push(format!(
                "Y component {} has valuation {}, expected {}",
                y.root, y.valuation, -term.valuation
            )),
            Some(_) => {}
        }
    }
    for y in &ys {
        if !xs.iter().any(|x| x.root == y.root.negate()) {
            bad.push(format!("Y component {} has no partner in X", y.root));
        }
    }
    Ok(bad)
}

/// The facet of a triple together with the three dimension predictions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetReport {
    pub facet: FacetSolution,
    pub dim_gamma: usize,
    pub dim_theorem: usize,
    pub split_rank: usize,
    pub agree: bool,
}

pub fn facet_report(t: &LieTriple) -> Result<FacetReport, BuildingError> {
    let facet = facet_solve(&phi_x(t)?, t.basis.m)?;
    let dim_gamma = dim_formula_gamma(&t.gamma);
    let dim_theorem = dim_formula_theorem(&t.label);
    let split_rank = centralizer_split_rank(&t.label);
    let agree = facet.dim == dim_gamma && dim_gamma == dim_theorem && dim_theorem == split_rank;
    Ok(FacetReport {
        facet,
        dim_gamma,
        dim_theorem,
        split_rank,
        agree,
    })
}

/// Half-integrality of a sample point.
pub fn in_half_lattice(point: &[Q]) -> bool {
    point.iter().all(|x| (x * Q::from_integer(2)).is_integer())
}
