//! Per-block `sl2`-module bases, and the closed root-vector expansions of
//! `X` used to cross-check them.
//!
//! Local Witt positions are 1-based (`t = 1..=len`), matching the way the
//! constructions are usually written; `PartBasis::witt[t - 1]` is the global
//! 0-based index.

use std::sync::Arc;

use crate::gammapart::{GammaKind, GammaPart};
use crate::padic::{PadicCtx, PadicNum, SquareClass};

use super::roots::Root;
use super::{BasisMap, PartBasis};

/// Sparse vector in global coordinates.
pub(crate) type Vector = Vec<(usize, PadicNum)>;

/// Ordered `sl2`-basis `e_1, …, e_i` of one irreducible module, highest weight first.
pub(crate) type Module = Vec<Vector>;

/// The per-context constants `c, s` with `c² + s² = -1`, and `1/2`.
#[derive(Clone, Debug)]
pub struct CaseConsts {
    pub c: PadicNum,
    pub s: PadicNum,
    pub half: PadicNum,
}

impl CaseConsts {
    pub fn new(ctx: &Arc<PadicCtx>) -> Self {
        let (c, s) = ctx.sum_of_squares_minus_one();
        let half = ctx.from_int(2).inv().expect("p is odd");
        CaseConsts { c, s, half }
    }
}

/// `k` with `i = 2k + 1`.
pub(crate) fn half_rank(i: u32) -> usize {
    debug_assert!(i % 2 == 1);
    ((i - 1) / 2) as usize
}

/// Members of a block with their scalars, largest part first.
pub(crate) fn sorted_members(gp: &GammaPart) -> Vec<(u32, Option<SquareClass>, Option<usize>)> {
    let mut v: Vec<_> = gp
        .members
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let slot = (gp.kind == GammaKind::Ani).then(|| gp.kernel_slots[k]);
            (m.part, gp.scalars.get(k).copied(), slot)
        })
        .collect();
    v.sort_by(|a, b| b.0.cmp(&a.0));
    v
}

/// Number of Witt pairs a block consumes.
pub(crate) fn witt_len(gp: &GammaPart) -> usize {
    let ks: Vec<usize> = sorted_members(gp).iter().map(|m| half_rank_or_part(gp.kind, m.0)).collect();
    match gp.kind {
        GammaKind::Even | GammaKind::Hyp => gp.members[0].part as usize,
        GammaKind::Pairs | GammaKind::Trip => ks.iter().sum::<usize>() + 1,
        GammaKind::Quad => ks.iter().sum::<usize>() + 2,
        GammaKind::Sign | GammaKind::Ani => ks.iter().sum(),
    }
}

fn half_rank_or_part(kind: GammaKind, part: u32) -> usize {
    match kind {
        GammaKind::Even => part as usize,
        _ if part % 2 == 1 => half_rank(part),
        _ => part as usize,
    }
}

struct Ctx<'a> {
    basis: &'a BasisMap,
    pb: &'a PartBasis,
    k: &'a CaseConsts,
}

impl Ctx<'_> {
    fn v(&self, t: usize) -> usize {
        self.basis.v(self.pb.witt[t - 1])
    }

    fn w(&self, t: usize) -> usize {
        self.basis.w(self.pb.witt[t - 1])
    }

    fn z(&self, l: usize) -> usize {
        self.basis.z(l)
    }

    fn one(&self) -> PadicNum {
        self.basis.ctx().one()
    }

    fn sign(&self, s: i64) -> PadicNum {
        self.basis.ctx().from_int(s)
    }

    /// `[a·v_{t_1}, …, a·v_{t_k}, x, s·w_{t_k}, -s·w_{t_{k-1}}, …]`.
    fn chain(&self, scale: &PadicNum, ts: std::ops::RangeInclusive<usize>, x: Vector, first_sign: i64) -> Module {
        let ts: Vec<usize> = ts.collect();
        let mut e: Module = ts.iter().map(|&t| vec![(self.v(t), scale.clone())]).collect();
        e.push(x);
        let mut s = first_sign;
        for &t in ts.iter().rev() {
            e.push(vec![(self.w(t), self.sign(s))]);
            s = -s;
        }
        e
    }

    /// `[v_1..v_i]` and `[-w_i, w_{i-1}, …, (-1)^i w_1]`.
    fn hyperbolic(&self, i: usize) -> Vec<Module> {
        let b1 = (1..=i).map(|t| vec![(self.v(t), self.one())]).collect();
        let b2 = (1..=i)
            .map(|t| vec![(self.w(i + 1 - t), self.sign(if t % 2 == 0 { 1 } else { -1 }))])
            .collect();
        vec![b1, b2]
    }

    /// The hyperbolic pair with `v_i ↔ w_i` swapped.
    fn very_even(&self, i: usize) -> Vec<Module> {
        let mut b1: Module = (1..i).map(|t| vec![(self.v(t), self.one())]).collect();
        b1.push(vec![(self.w(i), self.one())]);
        let mut b2: Module = vec![vec![(self.v(i), self.one())]];
        for j in 1..i {
            b2.push(vec![(self.w(i - j), self.sign(if j % 2 == 0 { 1 } else { -1 }))]);
        }
        vec![b1, b2]
    }
}

fn rep(basis: &BasisMap, class: SquareClass) -> PadicNum {
    basis.ctx().class_representative(class)
}

/// The irreducible `sl2`-modules spanning a block.
pub(crate) fn part_modules(basis: &BasisMap, gp: &GammaPart, pb: &PartBasis, k: &CaseConsts) -> Vec<Module> {
    let cx = Ctx { basis, pb, k };
    let members = sorted_members(gp);
    let ks: Vec<usize> = members.iter().map(|m| half_rank_or_part(gp.kind, m.0)).collect();
    let (c, s, half) = (&cx.k.c, &cx.k.s, &cx.k.half);
    match gp.kind {
        GammaKind::Even | GammaKind::Hyp => {
            let i = gp.members[0].part as usize;
            if pb.very_even {
                cx.very_even(i)
            } else {
                cx.hyperbolic(i)
            }
        }
        GammaKind::Pairs => {
            let (k1, k2) = (ks[0], ks[1]);
            let p = k1 + k2 + 1;
            let r = rep(basis, members[0].1.expect("pairs carry scalars"));
            let rh = &r * half;
            let xp = vec![(cx.v(p), rh.clone()), (cx.w(p), cx.one())];
            let xm = vec![(cx.v(p), rh), (cx.w(p), -cx.one())];
            vec![cx.chain(&r, 1..=k1, xp, -1), cx.chain(&r, k1 + 1..=k1 + k2, xm, 1)]
        }
        GammaKind::Quad => {
            let p = ks.iter().sum::<usize>() + 2;
            let r = rep(basis, members[0].1.expect("quad carries scalars"));
            let rh = &r * half;
            let (a, b, wa, wb) = (cx.v(p - 1), cx.v(p), cx.w(p - 1), cx.w(p));
            let xs = [
                vec![(a, rh.clone()), (wa, cx.one())],
                vec![(b, rh.clone()), (wb, cx.one())],
                vec![(a, c * &rh), (b, s * &rh), (wa, -c), (wb, -s)],
                vec![(a, -(s * &rh)), (b, c * &rh), (wa, s.clone()), (wb, -c)],
            ];
            let mut lo = 1;
            xs.into_iter()
                .zip(&ks)
                .map(|(x, &kt)| {
                    let m = cx.chain(&r, lo..=lo + kt - 1, x, -1);
                    lo += kt;
                    m
                })
                .collect()
        }
        GammaKind::Trip => {
            let p = ks.iter().sum::<usize>() + 1;
            let l = gp.kernel_slots[0];
            let r = basis.r_list[l].clone();
            let rh = &r * half;
            let (vp, wp, z) = (cx.v(p), cx.w(p), cx.z(l));
            let xs = [
                vec![(vp, c * &rh), (wp, c.clone()), (z, s.clone())],
                vec![(vp, rh.clone()), (wp, -cx.one())],
                vec![(vp, -(s * &rh)), (wp, -s), (z, c.clone())],
            ];
            let neg_r = -&r;
            let mut lo = 1;
            xs.into_iter()
                .zip(&ks)
                .map(|(x, &kt)| {
                    let m = cx.chain(&neg_r, lo..=lo + kt - 1, x, -1);
                    lo += kt;
                    m
                })
                .collect()
        }
        GammaKind::Sign => {
            let (l, kap) = (gp.kernel_slots[0], gp.kernel_slots[1]);
            let r = basis.r_list[l].clone();
            let (zl, zk) = (cx.z(l), cx.z(kap));
            let x1 = vec![(zl, c.clone()), (zk, -s)];
            let x2 = vec![(zl, s.clone()), (zk, c.clone())];
            let neg_r = -&r;
            vec![
                cx.chain(&neg_r, 1..=ks[0], x1, -1),
                cx.chain(&neg_r, ks[0] + 1..=ks[0] + ks[1], x2, -1),
            ]
        }
        GammaKind::Ani => {
            let mut lo = 1;
            members
                .iter()
                .zip(&ks)
                .map(|(mem, &kt)| {
                    let l = mem.2.expect("ani members carry slots");
                    let r = basis.r_list[l].clone();
                    let m = cx.chain(&r, lo..=lo + kt - 1, vec![(cx.z(l), cx.one())], -1);
                    lo += kt;
                    m
                })
                .collect()
        }
    }
}

/// Closed-form expansion of `X` restricted to a block as root vectors.
pub fn formula_x(basis: &BasisMap, gp: &GammaPart, pb: &PartBasis, k: &CaseConsts) -> Vec<(Root, PadicNum)> {
    let at = |t: usize| pb.witt[t - 1];
    let one = basis.ctx().one();
    let (c, s, half) = (&k.c, &k.s, &k.half);
    let mut out: Vec<(Root, PadicNum)> = Vec::new();
    let diff = |out: &mut Vec<(Root, PadicNum)>, a: usize, b: usize, x: PadicNum| {
        out.push((Root::Diff { i: at(a), j: at(b) }, x));
    };
    // X_{a,-b} = -X_{b,-a}
    let sum = |out: &mut Vec<(Root, PadicNum)>, a: usize, b: usize, x: PadicNum| {
        if a < b {
            out.push((Root::Sum { i: at(a), j: at(b) }, x));
        } else {
            out.push((Root::Sum { i: at(b), j: at(a) }, -x));
        }
    };
    let short = |out: &mut Vec<(Root, PadicNum)>, a: usize, l: usize, x: PadicNum| {
        out.push((Root::Short { i: at(a), l }, x));
    };
    let members = sorted_members(gp);
    let ks: Vec<usize> = members.iter().map(|m| half_rank_or_part(gp.kind, m.0)).collect();
    match gp.kind {
        GammaKind::Even | GammaKind::Hyp => {
            let i = gp.members[0].part as usize;
            if pb.very_even {
                for j in 1..=i.saturating_sub(2) {
                    diff(&mut out, j, j + 1, one.clone());
                }
                sum(&mut out, i - 1, i, one.clone());
            } else {
                for t in 1..i {
                    diff(&mut out, t, t + 1, one.clone());
                }
            }
        }
        GammaKind::Pairs => {
            let (k1, k2) = (ks[0], ks[1]);
            let p = k1 + k2 + 1;
            let rh = &rep(basis, members[0].1.expect("scalars")) * half;
            for j in (1..k1 + k2).filter(|&j| j != k1) {
                diff(&mut out, j, j + 1, one.clone());
            }
            diff(&mut out, k1, p, one.clone());
            sum(&mut out, k1, p, rh.clone());
            if k2 > 0 {
                diff(&mut out, k1 + k2, p, one.clone());
                sum(&mut out, k1 + k2, p, -&rh);
            }
        }
        GammaKind::Quad => {
            let p = ks.iter().sum::<usize>() + 2;
            let (p1, p2, p3) = (ks[0], ks[0] + ks[1], ks[0] + ks[1] + ks[2]);
            let p4 = p - 2;
            let rh = &rep(basis, members[0].1.expect("scalars")) * half;
            for j in (1..p - 2).filter(|j| ![p1, p2, p3].contains(j)) {
                diff(&mut out, j, j + 1, one.clone());
            }
            diff(&mut out, p1, p - 1, one.clone());
            diff(&mut out, p2, p, one.clone());
            diff(&mut out, p3, p - 1, -c);
            diff(&mut out, p3, p, -s);
            sum(&mut out, p1, p - 1, rh.clone());
            sum(&mut out, p2, p, rh.clone());
            sum(&mut out, p3, p - 1, c * &rh);
            sum(&mut out, p3, p, s * &rh);
            if ks[3] > 0 {
                diff(&mut out, p4, p - 1, s.clone());
                diff(&mut out, p4, p, -c);
                sum(&mut out, p4, p - 1, -(s * &rh));
                sum(&mut out, p4, p, c * &rh);
            }
        }
        GammaKind::Trip => {
            let (k1, k2, k3) = (ks[0], ks[1], ks[2]);
            let p = k1 + k2 + k3 + 1;
            let l = gp.kernel_slots[0];
            let rh = &basis.r_list[l] * half;
            for j in (1..p - 1).filter(|&j| j != k1 && j != k1 + k2) {
                diff(&mut out, j, j + 1, one.clone());
            }
            diff(&mut out, k1, p, c.clone());
            diff(&mut out, k1 + k2, p, -&one);
            sum(&mut out, k1, p, c * &rh);
            sum(&mut out, k1 + k2, p, rh.clone());
            short(&mut out, k1, l, -s);
            // the three terms coming from the third module
            if k3 > 0 {
                diff(&mut out, p - 1, p, -s);
                sum(&mut out, p - 1, p, -(s * &rh));
                short(&mut out, p - 1, l, -c);
            }
        }
        GammaKind::Sign => {
            let (k1, k2) = (ks[0], ks[1]);
            let (l, kap) = (gp.kernel_slots[0], gp.kernel_slots[1]);
            for j in (1..k1 + k2).filter(|&j| j != k1) {
                diff(&mut out, j, j + 1, one.clone());
            }
            short(&mut out, k1, l, -c);
            short(&mut out, k1, kap, s.clone());
            if k2 > 0 {
                short(&mut out, k1 + k2, l, -s);
                short(&mut out, k1 + k2, kap, -c);
            }
        }
        GammaKind::Ani => {
            let mut lo = 0;
            for (mem, &kt) in members.iter().zip(&ks) {
                if kt > 0 {
                    for j in lo + 1..lo + kt {
                        diff(&mut out, j, j + 1, one.clone());
                    }
                    short(&mut out, lo + kt, mem.2.expect("slot"), -&one);
                }
                lo += kt;
            }
        }
    }
    out
}
