//! Explicit Lie triples `{Y, H, X}` for an orbit label, built block by block
//! from a `Γ`-partition on a Witt basis of `q`.

mod cases;
pub mod roots;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gammapart::{validate_gamma, Gamma, GammaKind};
use crate::matrix::{inverse, SparseMatrix};
use crate::orbitlab::{OrbitLabel, VeTag};
use crate::padic::{PadicCtx, PadicNum};
use crate::quadform::WittLaw;

pub use cases::{formula_x, CaseConsts};
pub use roots::Root;

use cases::{part_modules, witt_len, Module};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("invalid Γ-partition: {0:?}")]
    InvalidGamma(Vec<String>),
    #[error("block {block} does not span its basis range ({vectors} vectors on {coords} coordinates)")]
    RangeMismatch { block: usize, vectors: usize, coords: usize },
    #[error("block {0} has a singular change of basis")]
    Singular(usize),
}

/// Basis range of one block: 0-based Witt indices and kernel slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartBasis {
    pub kind: GammaKind,
    pub witt: Vec<usize>,
    pub z: Vec<usize>,
    /// Built with the second very even module pair.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub very_even: bool,
}

/// Ordered basis `v_0..v_{m-1}, w_0..w_{m-1}, z_0..z_{d-1}` of `V` and its
/// split into blocks.
#[derive(Clone, Debug, Serialize)]
pub struct BasisMap {
    #[serde(skip)]
    ctx: Arc<PadicCtx>,
    pub m: usize,
    pub d: usize,
    pub r_list: Vec<PadicNum>,
    pub parts: Vec<PartBasis>,
}

impl BasisMap {
    pub fn new(ctx: &Arc<PadicCtx>, m: usize, r_list: Vec<PadicNum>, parts: Vec<PartBasis>) -> Self {
        BasisMap {
            ctx: Arc::clone(ctx),
            m,
            d: r_list.len(),
            r_list,
            parts,
        }
    }

    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }
}

/// `[[0, I, 0], [I, 0, 0], [0, 0, diag(r)]]`.
pub fn build_gram(basis: &BasisMap) -> SparseMatrix {
    let ctx = basis.ctx();
    let mut g = SparseMatrix::zeros(ctx, basis.dim(), basis.dim());
    for i in 0..basis.m {
        g.set(basis.v(i), basis.w(i), ctx.one());
        g.set(basis.w(i), basis.v(i), ctx.one());
    }
    for (l, r) in basis.r_list.iter().enumerate() {
        g.set(basis.z(l), basis.z(l), r.clone());
    }
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct LieTriple {
    #[serde(rename = "X")]
    pub x: SparseMatrix,
    #[serde(rename = "H")]
    pub h: SparseMatrix,
    #[serde(rename = "Y")]
    pub y: SparseMatrix,
    pub gram: SparseMatrix,
    pub basis: BasisMap,
    pub label: OrbitLabel,
    pub gamma: Gamma,
}

impl LieTriple {
    pub fn ctx(&self) -> &Arc<PadicCtx> {
        self.basis.ctx()
    }

    pub fn n(&self) -> usize {
        self.basis.dim()
    }
}

/// Assigns consecutive Witt ranges to the blocks of `Γ` in order.
pub fn allocate_basis(ctx: &Arc<PadicCtx>, label: &OrbitLabel, gamma: &Gamma) -> BasisMap {
    let mut next = 0;
    let mut ve_pending = label.ve == Some(VeTag::II);
    let parts = gamma
        .parts
        .iter()
        .map(|gp| {
            let len = witt_len(gp);
            let very_even = ve_pending && gp.kind == GammaKind::Even;
            if very_even {
                ve_pending = false;
            }
            let pb = PartBasis {
                kind: gp.kind,
                witt: (next..next + len).collect(),
                z: gp.kernel_slots.clone(),
                very_even,
            };
            next += len;
            pb
        })
        .collect();
    let r_list = gamma
        .kernel
        .entries
        .iter()
        .map(|&c| ctx.class_representative(c))
        .collect();
    BasisMap::new(ctx, next, r_list, parts)
}

/// Adds the matrices of `X`, `H`, `Y` defined by a set of module bases.
fn assemble(
    basis: &BasisMap,
    block: usize,
    modules: &[Module],
    out: &mut [SparseMatrix; 3],
) -> Result<(), RepError> {
    let ctx = basis.ctx();
    // (module, position) of every basis vector
    let slots: Vec<(usize, usize)> = modules
        .iter()
        .enumerate()
        .flat_map(|(mi, m)| (0..m.len()).map(move |t| (mi, t)))
        .collect();

    // connected components of vectors sharing coordinates
    let mut comp_of_coord: BTreeMap<usize, usize> = BTreeMap::new();
    let mut parent: Vec<usize> = (0..slots.len()).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for (vi, &(mi, t)) in slots.iter().enumerate() {
        for (coord, _) in &modules[mi][t] {
            match comp_of_coord.get(coord) {
                Some(&other) => {
                    let (ra, rb) = (find(&mut parent, vi), find(&mut parent, other));
                    parent[ra] = rb;
                }
                None => {
                    comp_of_coord.insert(*coord, vi);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for vi in 0..slots.len() {
        let root = find(&mut parent, vi);
        groups.entry(root).or_default().0.push(vi);
    }
    for (&coord, &vi) in &comp_of_coord {
        let root = find(&mut parent, vi);
        groups.get_mut(&root).expect("component exists").1.push(coord);
    }

    let vec_of = |vi: usize| -> &Vec<(usize, PadicNum)> {
        let (mi, t) = slots[vi];
        &modules[mi][t]
    };
    for (vecs, coords) in groups.values() {
        if vecs.len() != coords.len() {
            return Err(RepError::RangeMismatch {
                block,
                vectors: vecs.len(),
                coords: coords.len(),
            });
        }
        let local: BTreeMap<usize, usize> = coords.iter().enumerate().map(|(a, &c)| (c, a)).collect();
        let mut p = SparseMatrix::zeros(ctx, coords.len(), vecs.len());
        for (col, &vi) in vecs.iter().enumerate() {
            for (coord, x) in vec_of(vi) {
                p.add_at(local[coord], col, x);
            }
        }
        let pinv = inverse(&p).ok_or(RepError::Singular(block))?;
        for (col, &vi) in vecs.iter().enumerate() {
            let (mi, t) = slots[vi];
            let len = modules[mi].len();
            let dual: Vec<(usize, PadicNum)> = (0..coords.len())
                .map(|a| (coords[a], pinv.get(col, a)))
                .filter(|(_, x)| !x.is_zero())
                .collect();
            let mut put = |target: usize, image: &[(usize, PadicNum)], coef: &PadicNum| {
                for (row, a) in image {
                    let ac = a * coef;
                    for (c, f) in &dual {
                        out[target].add_at(*row, *c, &(&ac * f));
                    }
                }
            };
            if t > 0 {
                put(0, &modules[mi][t - 1], &ctx.one());
            }
            let weight = len as i64 - 1 - 2 * t as i64;
            put(1, &modules[mi][t], &ctx.from_int(weight));
            if t + 1 < len {
                let mu = ((t + 1) * (len - t - 1)) as i64;
                put(2, &modules[mi][t + 1], &ctx.from_int(mu));
            }
        }
    }
    Ok(())
}

/// Builds the Lie triple attached to `label` on the Witt basis laid out by `gamma`.
pub fn build_triple(label: &OrbitLabel, gamma: &Gamma, ctx: &Arc<PadicCtx>) -> Result<LieTriple, RepError> {
    let law = WittLaw::of(ctx);
    let bad = validate_gamma(gamma, label, law);
    if !bad.is_empty() {
        return Err(RepError::InvalidGamma(bad));
    }
    let basis = allocate_basis(ctx, label, gamma);
    let consts = CaseConsts::new(ctx);
    let n = basis.dim();
    let mut out = [
        SparseMatrix::zeros(ctx, n, n),
        SparseMatrix::zeros(ctx, n, n),
        SparseMatrix::zeros(ctx, n, n),
    ];
    for (b, (gp, pb)) in gamma.parts.iter().zip(&basis.parts).enumerate() {
        let modules = part_modules(&basis, gp, pb, &consts);
        assemble(&basis, b, &modules, &mut out)?;
    }
    let [x, h, y] = out;
    Ok(LieTriple {
        x,
        h,
        y,
        gram: build_gram(&basis),
        basis,
        label: label.clone(),
        gamma: gamma.clone(),
    })
}

/// Convenience: `Γ_max` followed by [`build_triple`].
pub fn represent(label: &OrbitLabel, ctx: &Arc<PadicCtx>) -> Result<LieTriple, RepError> {
    let gamma = crate::gammapart::build_gamma(label, WittLaw::of(ctx), true);
    build_triple(label, &gamma, ctx)
}
