//! Partition of the index set `{(i, j) : i ∈ λ, 1 ≤ j ≤ m_i}` into the seven
//! block types from which representatives are assembled.
//!
//! Only the maximal partition `Γ_max` is produced: every even part and every
//! hyperbolic pad of an odd part becomes its own block, and the anisotropic
//! kernel entries are resolved by `PAIRS`, sign rewrites, `QUAD` and a
//! terminal `TRIP`/`SIGN`/`ANI` block per residue column.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::orbitlab::OrbitLabel;
use crate::padic::SquareClass;
use crate::quadform::{aniso_representative, canonical_diagonal, witt_of_diagonal, DiagonalForm, WittLaw};

/// `(part, slot)` with `slot` counted from 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexPair {
    pub part: u32,
    pub slot: u32,
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.part, self.slot)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaKind {
    Even,
    Hyp,
    Pairs,
    Quad,
    Trip,
    Sign,
    Ani,
}

impl GammaKind {
    pub fn is_anisotropic(self) -> bool {
        matches!(self, GammaKind::Trip | GammaKind::Sign | GammaKind::Ani)
    }
}

/// One block of `Γ`.
///
/// `scalars[k]` is the square class `r_{i,j}` of `members[k]` after sign
/// rewrites (empty for `EVEN`). `kernel_slots` index (from 0) into the fixed
/// kernel diagonal `⟨r_1, …, r_d⟩` of `q∘`: one per member for `ANI`, the
/// slot `ℓ` for `TRIP`, and `(ℓ, κ)` with `ℓ < κ` for `SIGN`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaPart {
    pub kind: GammaKind,
    pub members: Vec<IndexPair>,
    pub scalars: Vec<SquareClass>,
    pub kernel_slots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma {
    pub parts: Vec<GammaPart>,
    /// Final diagonal of each odd part's form, keyed by part.
    pub diagonals: BTreeMap<u32, DiagonalForm>,
    /// The anisotropic kernel `⟨r_1, …, r_d⟩` of `q`.
    pub kernel: DiagonalForm,
}

impl Gamma {
    pub fn count(&self, kind: GammaKind) -> usize {
        self.parts.iter().filter(|g| g.kind == kind).count()
    }
}

/// Canonical diagonal of each `q_i`: kernel first, `(1, -1)` pads after.
pub fn initial_diagonals(label: &OrbitLabel, law: WittLaw) -> BTreeMap<u32, DiagonalForm> {
    label
        .odd_forms()
        .map(|(i, q)| (i, canonical_diagonal(q, law)))
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    at: IndexPair,
    class: SquareClass,
}

struct Builder<'a> {
    law: WittLaw,
    kernel: &'a DiagonalForm,
    diagonals: BTreeMap<u32, DiagonalForm>,
    parts: Vec<GammaPart>,
    used_slots: BTreeSet<usize>,
}

impl Builder<'_> {
    fn push(&mut self, kind: GammaKind, members: &[Entry], kernel_slots: Vec<usize>) {
        self.used_slots.extend(kernel_slots.iter().copied());
        self.parts.push(GammaPart {
            kind,
            members: members.iter().map(|e| e.at).collect(),
            scalars: members.iter().map(|e| e.class).collect(),
            kernel_slots,
        });
    }

    fn set_class(&mut self, e: &mut Entry, class: SquareClass) {
        e.class = class;
        self.diagonals.get_mut(&e.at.part).expect("odd part")
            .entries[(e.at.slot - 1) as usize] = class;
    }

    /// First unused kernel slots of the given class.
    fn free_slots(&self, class: SquareClass, count: usize) -> Vec<usize> {
        let slots: Vec<usize> = (0..self.kernel.degree())
            .filter(|s| !self.used_slots.contains(s) && self.kernel.entries[*s] == class)
            .take(count)
            .collect();
        assert_eq!(slots.len(), count, "kernel has no free slot of class {class}");
        slots
    }

    /// Greedy cross-part matching of `⟨r⟩` with `⟨-r⟩`; returns the leftovers.
    fn match_pairs(&mut self, entries: Vec<Entry>) -> Vec<Entry> {
        let mut taken = vec![false; entries.len()];
        for a in 0..entries.len() {
            if taken[a] {
                continue;
            }
            let want = self.law.neg_class(entries[a].class);
            let hit = (a + 1..entries.len()).find(|&b| {
                !taken[b] && entries[b].class == want && entries[b].at.part != entries[a].at.part
            });
            if let Some(b) = hit {
                taken[a] = true;
                taken[b] = true;
                self.push(GammaKind::Pairs, &[entries[a], entries[b]], Vec::new());
            }
        }
        entries
            .into_iter()
            .zip(taken)
            .filter_map(|(e, t)| (!t).then_some(e))
            .collect()
    }

    /// Residue column of a noar kernel: all leftovers share one class `σ`.
    fn resolve_cyclic_column(&mut self, mut s: Vec<Entry>) {
        // Same-part rewrites ⟨σ,σ⟩ ≅ ⟨-σ,-σ⟩, then re-pair with other parts.
        while s.len() > 2 {
            let Some(part) = s
                .iter()
                .map(|e| e.at.part)
                .find(|&i| s.iter().filter(|e| e.at.part == i).count() >= 2)
            else {
                break;
            };
            let (mut flipped, rest): (Vec<Entry>, Vec<Entry>) =
                s.into_iter().partition(|e| e.at.part == part);
            for e in flipped.iter_mut() {
                let neg = self.law.neg_class(e.class);
                self.set_class(e, neg);
            }
            let mut rest = rest.into_iter();
            let mut left = Vec::new();
            for f in flipped {
                match rest.next() {
                    Some(x) => self.push(GammaKind::Pairs, &[f, x], Vec::new()),
                    None => left.push(f),
                }
            }
            left.extend(rest);
            s = left;
        }
        while s.len() > 3 {
            let quad: Vec<Entry> = s.drain(..4).collect();
            self.push(GammaKind::Quad, &quad, Vec::new());
        }
        match s.len() {
            0 => {}
            1 => {
                let slots = self.free_slots(s[0].class, 1);
                self.push(GammaKind::Ani, &s, slots);
            }
            2 => {
                let sigma = s[0].class;
                let neg = self.law.neg_class(sigma);
                let same_class_slots = (0..self.kernel.degree())
                    .filter(|&k| !self.used_slots.contains(&k) && self.kernel.entries[k] == sigma)
                    .count();
                if same_class_slots >= 2 {
                    let slots = self.free_slots(sigma, 2);
                    self.push(GammaKind::Ani, &s, slots);
                } else if s[0].at.part != s[1].at.part {
                    let slots = self.free_slots(neg, 2);
                    self.push(GammaKind::Sign, &s, slots);
                } else {
                    for e in s.iter_mut() {
                        self.set_class(e, neg);
                    }
                    let slots = self.free_slots(neg, 2);
                    self.push(GammaKind::Ani, &s, slots);
                }
            }
            3 => {
                let neg = self.law.neg_class(s[0].class);
                let slots = self.free_slots(neg, 1);
                self.push(GammaKind::Trip, &s, slots);
            }
            _ => unreachable!(),
        }
    }

    fn resolve_klein(&mut self, left: Vec<Entry>) {
        if left.is_empty() {
            return;
        }
        let mut slots = Vec::new();
        for e in &left {
            let s = (0..self.kernel.degree())
                .find(|k| {
                    !self.used_slots.contains(k) && !slots.contains(k) && self.kernel.entries[*k] == e.class
                })
                .expect("leftover classes form the anisotropic kernel");
            slots.push(s);
        }
        self.push(GammaKind::Ani, &left, slots);
    }
}

/// Builds `Γ_max` for a label.
///
/// `maximize` is accepted for interface stability; only the maximal
/// partition is ever produced.
pub fn build_gamma(label: &OrbitLabel, law: WittLaw, maximize: bool) -> Gamma {
    let _ = maximize;
    let kernel = aniso_representative(label.witt_sum(law), law);
    let mut b = Builder {
        law,
        kernel: &kernel,
        diagonals: initial_diagonals(label, law),
        parts: Vec::new(),
        used_slots: BTreeSet::new(),
    };

    for (i, m) in label.lambda.even_parts().into_iter().rev() {
        for j in (1..=m).step_by(2) {
            let members = [IndexPair { part: i, slot: j }, IndexPair { part: i, slot: j + 1 }];
            b.parts.push(GammaPart {
                kind: GammaKind::Even,
                members: members.to_vec(),
                scalars: Vec::new(),
                kernel_slots: Vec::new(),
            });
        }
    }

    let mut kernel_entries = Vec::new();
    let forms: Vec<(u32, _)> = label.odd_forms().collect();
    for &(i, q) in forms.iter().rev() {
        let diag = b.diagonals[&i].clone();
        let d = q.aniso_dim();
        for j in 0..d {
            kernel_entries.push(Entry {
                at: IndexPair { part: i, slot: j + 1 },
                class: diag.entries[j as usize],
            });
        }
        for j in (d..q.degree).step_by(2) {
            let e = |s: u32| Entry {
                at: IndexPair { part: i, slot: s + 1 },
                class: diag.entries[s as usize],
            };
            b.push(GammaKind::Hyp, &[e(j), e(j + 1)], Vec::new());
        }
    }

    let left = b.match_pairs(kernel_entries);
    match law {
        WittLaw::Klein => b.resolve_klein(left),
        WittLaw::Cyclic => {
            let (units, pis): (Vec<Entry>, Vec<Entry>) =
                left.into_iter().partition(|e| !e.class.has_odd_valuation());
            b.resolve_cyclic_column(units);
            b.resolve_cyclic_column(pis);
        }
    }

    let mut parts = b.parts;
    parts.sort_by_key(|g| g.kind);
    Gamma {
        parts,
        diagonals: b.diagonals,
        kernel,
    }
}

/// Checks every structural invariant of `Γ`; returns human-readable violations.
pub fn validate_gamma(g: &Gamma, label: &OrbitLabel, law: WittLaw) -> Vec<String> {
    let mut bad = Vec::new();
    let neg = |a: SquareClass| law.neg_class(a);

    let expected: BTreeSet<IndexPair> = label
        .lambda
        .multiplicities()
        .into_iter()
        .flat_map(|(i, m)| (1..=m).map(move |j| IndexPair { part: i, slot: j }))
        .collect();
    let mut seen = BTreeSet::new();
    for p in &g.parts {
        for &x in &p.members {
            if !seen.insert(x) {
                bad.push(format!("index {x} appears twice"));
            }
        }
    }
    if seen != expected {
        bad.push("blocks do not cover the index set exactly".to_string());
    }

    let expected_kernel = aniso_representative(label.witt_sum(law), law);
    if g.kernel != expected_kernel {
        bad.push(format!("kernel {} differs from {}", g.kernel, expected_kernel));
    }
    for (i, q) in label.odd_forms() {
        match g.diagonals.get(&i) {
            Some(d) if d.degree() as u32 == q.degree && witt_of_diagonal(d, law) == q.cls => {}
            _ => bad.push(format!("diagonal of part {i} does not represent {q}")),
        }
    }

    let mut slots_used = BTreeSet::new();
    let mut aniso_blocks = 0;
    for p in &g.parts {
        let kind = p.kind;
        let parts: Vec<u32> = p.members.iter().map(|x| x.part).collect();
        let distinct: BTreeSet<u32> = parts.iter().copied().collect();
        let all_odd = parts.iter().all(|i| i % 2 == 1);
        let r = &p.scalars;
        for (x, &s) in p.members.iter().zip(r) {
            let actual = g
                .diagonals
                .get(&x.part)
                .and_then(|d| d.entries.get((x.slot - 1) as usize));
            if actual != Some(&s) {
                bad.push(format!("{kind:?} scalar of {x} does not match the diagonal"));
            }
        }
        for &s in &p.kernel_slots {
            if s >= g.kernel.degree() || !slots_used.insert(s) {
                bad.push(format!("{kind:?} uses kernel slot {s} twice or out of range"));
            }
        }
        let kernel_class = |s: usize| g.kernel.entries.get(s).copied();
        let noar = law == WittLaw::Cyclic;
        let ok = match kind {
            GammaKind::Even => {
                p.members.len() == 2
                    && distinct.len() == 1
                    && parts[0].is_multiple_of(2)
                    && p.members[1].slot == p.members[0].slot + 1
            }
            GammaKind::Hyp => {
                p.members.len() == 2
                    && distinct.len() == 1
                    && all_odd
                    && r.len() == 2
                    && r[0] == neg(r[1])
            }
            GammaKind::Pairs => {
                p.members.len() == 2 && distinct.len() == 2 && all_odd && r.len() == 2 && r[0] == neg(r[1])
            }
            GammaKind::Quad => {
                noar && p.members.len() == 4 && distinct.len() == 4 && all_odd && r.iter().all(|&x| x == r[0])
            }
            GammaKind::Trip => {
                noar && p.members.len() == 3
                    && distinct.len() == 3
                    && all_odd
                    && p.kernel_slots.len() == 1
                    && r.iter().all(|&x| Some(neg(x)) == kernel_class(p.kernel_slots[0]))
            }
            GammaKind::Sign => {
                noar && p.members.len() == 2
                    && distinct.len() == 2
                    && all_odd
                    && p.kernel_slots.len() == 2
                    && p.kernel_slots[0] < p.kernel_slots[1]
                    && r[0] == r[1]
                    && p.kernel_slots.iter().all(|&s| kernel_class(s) == Some(neg(r[0])))
            }
            GammaKind::Ani => {
                all_odd
                    && p.kernel_slots.len() == p.members.len()
                    && r.iter().zip(&p.kernel_slots).all(|(&x, &s)| kernel_class(s) == Some(x))
            }
        };
        if !ok {
            bad.push(format!("{kind:?} block {:?} violates its case conditions", p.members));
        }
        if kind.is_anisotropic() {
            aniso_blocks += 1;
        }
    }
    if aniso_blocks > 2 {
        bad.push("more than two TRIP/SIGN/ANI blocks".to_string());
    }
    if slots_used.len() != g.kernel.degree() {
        bad.push("kernel slots are not all assigned".to_string());
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitlab::{orbit_labels, Group, Partition};
    use crate::quadform::{isometry_classes, QFormClass, WittClass};
    use SquareClass::*;

    fn label(parts: &[u32], qtup: Vec<QFormClass>) -> OrbitLabel {
        OrbitLabel {
            lambda: Partition::new(parts.to_vec()).unwrap(),
            qtup,
            ve: None,
        }
    }

    fn line(a: SquareClass) -> QFormClass {
        QFormClass::new(1, WittClass::of_class(a)).unwrap()
    }

    fn ip(part: u32, slot: u32) -> IndexPair {
        IndexPair { part, slot }
    }

    #[test]
    fn very_even_is_one_even_block() {
        let l = label(&[2, 2], vec![]);
        let g = build_gamma(&l, WittLaw::Klein, true);
        assert_eq!(g.parts.len(), 1);
        assert_eq!(g.parts[0].kind, GammaKind::Even);
        assert_eq!(g.parts[0].members, vec![ip(2, 1), ip(2, 2)]);
    }

    #[test]
    fn pairs_and_ani() {
        for law in [WittLaw::Klein, WittLaw::Cyclic] {
            let l = label(&[1, 3, 5], vec![line(One), line(Pi), line(law.neg_class(Pi))]);
            let g = build_gamma(&l, law, true);
            assert!(validate_gamma(&g, &l, law).is_empty());
            assert_eq!(g.parts.len(), 2);
            assert_eq!(g.parts[0].kind, GammaKind::Pairs);
            assert_eq!(g.parts[0].members, vec![ip(5, 1), ip(3, 1)]);
            assert_eq!(g.parts[1].kind, GammaKind::Ani);
            assert_eq!(g.parts[1].members, vec![ip(1, 1)]);
            assert_eq!(g.kernel.entries[g.parts[1].kernel_slots[0]], One);
        }
    }

    #[test]
    fn triple_of_rho() {
        let law = WittLaw::Cyclic;
        let l = label(&[1, 3, 5], vec![line(Rho), line(Rho), line(Rho)]);
        // ⟨ρ,ρ,ρ⟩ ≅ ⟨-ρ⟩ = ⟨1⟩ when -1 is not a square
        assert_eq!(l.witt_sum(law), WittClass::of_class(One));
        let g = build_gamma(&l, law, true);
        assert!(validate_gamma(&g, &l, law).is_empty());
        assert_eq!(g.parts.len(), 1);
        assert_eq!(g.parts[0].kind, GammaKind::Trip);
        assert_eq!(g.parts[0].kernel_slots, vec![0]);
    }

    #[test]
    fn sign_block() {
        let law = WittLaw::Cyclic;
        let l = label(&[1, 3], vec![line(Rho), line(Rho)]);
        let g = build_gamma(&l, law, true);
        assert!(validate_gamma(&g, &l, law).is_empty());
        assert_eq!(g.parts[0].kind, GammaKind::Sign);
        assert_eq!(g.parts[0].kernel_slots, vec![0, 1]);
    }

    #[test]
    fn same_part_rewrite() {
        let law = WittLaw::Cyclic;
        // q_1 = ⟨1,1⟩, q_3 = ⟨1⟩, q_5 = ⟨1⟩: four equal classes, two in one part
        let one = WittClass::of_class(One);
        let l = label(
            &[1, 1, 3, 5],
            vec![QFormClass::new(2, law.add(one, one)).unwrap(), line(One), line(One)],
        );
        assert!(l.witt_sum(law).is_zero());
        let g = build_gamma(&l, law, true);
        assert!(validate_gamma(&g, &l, law).is_empty(), "{:?}", validate_gamma(&g, &l, law));
        assert_eq!(g.diagonals[&1].entries, vec![Rho, Rho]);
        assert_eq!(g.count(GammaKind::Pairs), 2);
        assert_eq!(g.parts[0].members, vec![ip(1, 1), ip(5, 1)]);
    }

    #[test]
    fn detects_violations() {
        let law = WittLaw::Cyclic;
        let l = label(&[1, 3, 5], vec![line(One), line(Pi), line(law.neg_class(Pi))]);
        let mut g = build_gamma(&l, law, true);
        let mut three = g.parts[1].clone();
        three.kernel_slots.clear();
        three.members.clear();
        three.scalars.clear();
        g.parts.push(three.clone());
        g.parts.push(three);
        let v = validate_gamma(&g, &l, law);
        assert!(v.iter().any(|s| s.contains("more than two")), "{v:?}");

        // a HYP block whose classes are equal rather than opposite
        let l = label(&[3, 3], vec![QFormClass::new(2, WittClass::ZERO).unwrap()]);
        let mut g = build_gamma(&l, law, true);
        g.parts[0].scalars = vec![One, One];
        g.diagonals.insert(3, DiagonalForm::new(vec![One, One]));
        let v = validate_gamma(&g, &l, law);
        assert!(v.iter().any(|s| s.contains("Hyp")), "{v:?}");
    }

    #[test]
    fn all_labels_validate_and_are_maximal() {
        for law in [WittLaw::Klein, WittLaw::Cyclic] {
            for n in 1..=10 {
                for q in isometry_classes(n) {
                    for l in orbit_labels(q, Group::SO, law) {
                        let g = build_gamma(&l, law, true);
                        let v = validate_gamma(&g, &l, law);
                        assert!(v.is_empty(), "{l}: {v:?}");
                        let d: u32 = l.qtup.iter().map(|q| q.aniso_dim()).sum();
                        let free = g.count(GammaKind::Even) + g.count(GammaKind::Hyp);
                        assert_eq!(free as u32, (l.lambda.num_parts() - d) / 2, "{l}");
                    }
                }
            }
        }
    }
}
