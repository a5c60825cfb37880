//! Independent checks that a Lie triple represents its label: brackets,
//! membership in `so(q)`, Jordan type, and the forms on the multiplicity
//! spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{diagonalize_symmetric, kernel, rank, SparseMatrix};
use crate::orbitlab::{OrbitLabel, Partition};
use crate::padic::{PadicCtx, PadicError, PadicNum, SquareClass};
use crate::quadform::{DiagonalForm, QFormClass, WittLaw};
use crate::repbuild::{represent, LieTriple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("matrix is not nilpotent to working precision")]
    NotNilpotent,
    #[error("ranks of powers {0:?} are not those of a nilpotent matrix")]
    InconsistentRanks(Vec<usize>),
    #[error("lowest weight space for part {part} has dimension {got}, expected {expected}")]
    DimensionMismatch { part: u32, got: usize, expected: u32 },
    #[error("multiplicity space for part {0} is degenerate")]
    Degenerate(u32),
    #[error("no very even block to swap")]
    NotVeryEven,
    #[error("conjugation witness fails: {0}")]
    Witness(&'static str),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InSo {
    #[serde(rename = "X")]
    pub x: bool,
    #[serde(rename = "H")]
    pub h: bool,
    #[serde(rename = "Y")]
    pub y: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub in_so: InSo,
    pub triple_ok: bool,
    pub jordan: Partition,
    pub mult_forms: BTreeMap<u32, QFormClass>,
    pub matches_label: bool,
    /// Smallest valuation among all residual entries (precision if none).
    pub precision_margin: i64,
}

fn margin_of(m: &SparseMatrix) -> i64 {
    m.min_valuation().unwrap_or(i64::from(m.ctx().precision()))
}

fn so_residual(a: &SparseMatrix, gram: &SparseMatrix) -> SparseMatrix {
    a.transpose().mul(gram).add(&gram.mul(a))
}

/// Bracket and `so(q)` residuals: `(all pass, margin, per-matrix membership)`.
fn residuals(t: &LieTriple) -> (bool, i64, InSo) {
    let ctx = t.ctx();
    let two = ctx.from_int(2);
    let thr = ctx.zero_threshold();
    let brackets = [
        t.h.bracket(&t.x).sub(&t.x.scale(&two)),
        t.h.bracket(&t.y).add(&t.y.scale(&two)),
        t.x.bracket(&t.y).sub(&t.h),
    ];
    let so = [&t.x, &t.h, &t.y].map(|a| margin_of(&so_residual(a, &t.gram)));
    let margin = brackets.iter().map(margin_of).chain(so).min().expect("nonempty");
    let in_so = InSo {
        x: so[0] >= thr,
        h: so[1] >= thr,
        y: so[2] >= thr,
    };
    (margin >= thr, margin, in_so)
}

/// Evaluates the three bracket relations and `AᵀM + MA = 0` for `X, H, Y`.
pub fn check_triple(t: &LieTriple) -> (bool, i64) {
    let (ok, margin, _) = residuals(t);
    (ok, margin)
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn jordan_type(x: &SparseMatrix) -> Result<Partition, VerifyError> {
    let n = x.rows();
    let mut ranks = vec![n];
    let mut pw = SparseMatrix::identity(x.ctx(), n);
    for _ in 0..n {
        pw = pw.mul(x);
        ranks.push(rank(&pw));
    }
    if *ranks.last().expect("nonempty") != 0 {
        return Err(VerifyError::NotNilpotent);
    }
    ranks.push(0);
    // blocks of size >= k: ranks[k-1] - ranks[k]
    let inconsistent = || VerifyError::InconsistentRanks(ranks.clone());
    let at_least = (1..=n)
        .map(|k| ranks[k - 1].checked_sub(ranks[k]))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(inconsistent)?;
    let mut parts = Vec::new();
    for k in 1..=n {
        let next = at_least.get(k).copied().unwrap_or(0);
        let count = at_least[k - 1].checked_sub(next).ok_or_else(inconsistent)?;
        parts.extend(std::iter::repeat_n(k as u32, count));
    }
    if parts.is_empty() {
        return Ok(Partition::new(vec![]).expect("empty partition"));
    }
    Ok(Partition::new(parts).expect("positive parts"))
}

/// Lowest weight vectors of weight `1 - i`.
pub fn lowest_weight_space(t: &LieTriple, i: u32) -> Vec<Vec<PadicNum>> {
    let ctx = t.ctx();
    let n = t.n();
    let shift = SparseMatrix::identity(ctx, n).scale(&ctx.from_int(i64::from(i) - 1));
    let hs = t.h.add(&shift);
    let mut stacked = SparseMatrix::zeros(ctx, 2 * n, n);
    for ((r, c), a) in t.y.iter() {
        stacked.set(r, c, a.clone());
    }
    for ((r, c), a) in hs.iter() {
        stacked.set(n + r, c, a.clone());
    }
    kernel(&stacked)
}

/// Unnormalized diagonal of `B(u_a, X^{i-1} u_b)` on the lowest weight space.
fn raw_multiplicity_diagonal(t: &LieTriple, i: u32) -> Result<Vec<PadicNum>, VerifyError> {
    let basis = lowest_weight_space(t, i);
    let expected = t.label.lambda.multiplicity(i);
    if basis.len() != expected as usize {
        return Err(VerifyError::DimensionMismatch {
            part: i,
            got: basis.len(),
            expected,
        });
    }
    let top = t.x.pow(i - 1);
    let images: Vec<Vec<PadicNum>> = basis.iter().map(|u| t.gram.apply(&top.apply(u))).collect();
    let ctx = t.ctx();
    let mut g = SparseMatrix::zeros(ctx, basis.len(), basis.len());
    for (a, u) in basis.iter().enumerate() {
        for (b, img) in images.iter().enumerate() {
            let dot = u.iter().zip(img).fold(ctx.zero(), |acc, (x, y)| &acc + &(x * y));
            g.set(a, b, dot);
        }
    }
    Ok(diagonalize_symmetric(&g))
}

/// Normalizing square class `s_i`: the class of the raw multiplicity form of
/// the single module `U_i` carrying `⟨1⟩ ⊕ kH` with `r = 1`.
pub fn normalizer(ctx: &Arc<PadicCtx>, i: u32) -> Result<SquareClass, VerifyError> {
    let law = WittLaw::of(ctx);
    let one = QFormClass::of_diagonal(&DiagonalForm::new(vec![SquareClass::One]), law);
    let model = OrbitLabel {
        lambda: Partition::new(vec![i]).expect("positive part"),
        qtup: vec![one],
        ve: None,
    };
    let t = represent(&model, ctx).expect("the model module always builds");
    let d = raw_multiplicity_diagonal(&t, i)?;
    Ok(d[0].square_class()?)
}

/// Class of the form carried by the multiplicity space of the odd part `i`.
pub fn multiplicity_form(t: &LieTriple, i: u32) -> Result<QFormClass, VerifyError> {
    let s = normalizer(t.ctx(), i)?;
    let diag = raw_multiplicity_diagonal(t, i)?;
    let classes = diag
        .iter()
        .map(|x| {
            if x.is_negligible() {
                Err(VerifyError::Degenerate(i))
            } else {
                Ok(x.square_class()?.mul(s))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QFormClass::of_diagonal(&DiagonalForm::new(classes), WittLaw::of(t.ctx())))
}

/// Runs every check against the triple's own label.
pub fn verify(t: &LieTriple) -> Result<VerifyReport, VerifyError> {
    let (triple_ok, precision_margin, in_so) = residuals(t);
    let jordan = jordan_type(&t.x)?;
    let mut mult_forms = BTreeMap::new();
    for (i, _) in t.label.lambda.odd_parts() {
        mult_forms.insert(i, multiplicity_form(t, i)?);
    }
    for (i, _) in t.label.lambda.even_parts() {
        // dimension check only; the form there is alternating
        lowest_weight_dim_check(t, i)?;
    }
    let forms_match = t.label.odd_forms().all(|(i, q)| mult_forms.get(&i) == Some(&q));
    Ok(VerifyReport {
        matches_label: triple_ok && jordan == t.label.lambda && forms_match,
        in_so,
        triple_ok,
        jordan,
        mult_forms,
        precision_margin,
    })
}

fn lowest_weight_dim_check(t: &LieTriple, i: u32) -> Result<(), VerifyError> {
    let got = lowest_weight_space(t, i).len();
    let expected = t.label.lambda.multiplicity(i);
    if got == expected as usize {
        Ok(())
    } else {
        Err(VerifyError::DimensionMismatch { part: i, got, expected })
    }
}

/// Determinant `-1` element of `O(q)` swapping `v_i ↔ w_i` on the modified
/// very even block; conjugates the first triple's `X` to the second's.
pub fn ve_conjugation_witness(t1: &LieTriple, t2: &LieTriple) -> Result<SparseMatrix, VerifyError> {
    let pb = t2
        .basis
        .parts
        .iter()
        .find(|pb| pb.very_even)
        .ok_or(VerifyError::NotVeryEven)?;
    let a = *pb.witt.last().expect("nonempty block");
    let (va, wa) = (t2.basis.v(a), t2.basis.w(a));
    let ctx = t2.ctx();
    let n = t2.n();
    let mut g = SparseMatrix::zeros(ctx, n, n);
    for k in 0..n {
        let image = if k == va {
            wa
        } else if k == wa {
            va
        } else {
            k
        };
        g.set(image, k, ctx.one());
    }
    if !g.transpose().mul(&t2.gram).mul(&g).sub(&t2.gram).is_negligible() {
        return Err(VerifyError::Witness("g is not orthogonal"));
    }
    // g is an involution
    if !g.mul(&t1.x).mul(&g).sub(&t2.x).is_negligible() {
        return Err(VerifyError::Witness("g X1 g^-1 != X2"));
    }
    Ok(g)
}

/// Sign of a permutation matrix; `None` if the matrix is not one.
pub fn permutation_sign(g: &SparseMatrix) -> Option<i64> {
    let n = g.rows();
    let mut perm = vec![usize::MAX; n];
    for ((r, c), a) in g.iter() {
        if *a != g.ctx().one() || perm[c] != usize::MAX {
            return None;
        }
        perm[c] = r;
    }
    if perm.contains(&usize::MAX) {
        return None;
    }
    let mut seen = vec![false; n];
    let mut sign = 1;
    for start in 0..n {
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    Some(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitlab::VeTag;
    use crate::quadform::WittClass;

    fn ctx(p: u64) -> Arc<PadicCtx> {
        PadicCtx::with_default_precision(p).unwrap()
    }

    fn lab(parts: &[u32], qtup: Vec<QFormClass>, ve: Option<VeTag>) -> OrbitLabel {
        OrbitLabel {
            lambda: Partition::new(parts.to_vec()).unwrap(),
            qtup,
            ve,
        }
    }

    #[test]
    fn jordan_examples() {
        let c = ctx(5);
        let z = SparseMatrix::zeros(&c, 3, 3);
        assert_eq!(jordan_type(&z).unwrap().parts(), &[1, 1, 1]);
        for ve in [VeTag::I, VeTag::II] {
            let t = represent(&lab(&[2, 2], vec![], Some(ve)), &c).unwrap();
            assert_eq!(jordan_type(&t.x).unwrap().parts(), &[2, 2]);
        }
        assert_eq!(
            jordan_type(&SparseMatrix::identity(&c, 2)),
            Err(VerifyError::NotNilpotent)
        );
    }

    #[test]
    fn perturbation_is_caught() {
        let c = ctx(7);
        let mut t = represent(&lab(&[2, 2], vec![], Some(VeTag::I)), &c).unwrap();
        assert_eq!(check_triple(&t), (true, 64));
        let bumped = &t.x.get(0, 1) + &c.p_power(32);
        t.x.set(0, 1, bumped);
        let (ok, margin) = check_triple(&t);
        assert!(!ok);
        assert_eq!(margin, 32);
    }

    #[test]
    fn recovered_forms() {
        let c = ctx(5);
        let law = WittLaw::of(&c);
        let rho = QFormClass::new(1, WittClass::of_class(SquareClass::Rho)).unwrap();
        let t = represent(&lab(&[1], vec![rho], None), &c).unwrap();
        assert_eq!(multiplicity_form(&t, 1).unwrap(), rho);
        let one = QFormClass::of_diagonal(&DiagonalForm::new(vec![SquareClass::One]), law);
        let t = represent(&lab(&[3], vec![one], None), &c).unwrap();
        assert_eq!(multiplicity_form(&t, 3).unwrap(), one);
        assert!(verify(&t).unwrap().matches_label);
    }

    #[test]
    fn very_even_witness() {
        let c = ctx(7);
        let t1 = represent(&lab(&[2, 2], vec![], Some(VeTag::I)), &c).unwrap();
        let t2 = represent(&lab(&[2, 2], vec![], Some(VeTag::II)), &c).unwrap();
        let g = ve_conjugation_witness(&t1, &t2).unwrap();
        assert_eq!(permutation_sign(&g), Some(-1));
        // v_2 (index 1) <-> w_2 (index 3)
        assert_eq!(g.get(3, 1), c.one());
        assert_eq!(g.get(1, 3), c.one());
        assert!(ve_conjugation_witness(&t1, &t1).is_err());
    }
}
