//! Enumeration of `P_{λ,q}` by splitting the odd parts into a large free
//! block `S` and a small completion block `E`.

use std::collections::BTreeMap;

use crate::quadform::{QFormClass, WittClass, WittLaw};

use super::count::{all_tuples, tuple_class};
use super::partition::Partition;

/// Indices (into the ascending odd parts) of the completion block `E`.
///
/// `None` when no subset with the required multiplicity exists; that only
/// happens on a parity mismatch, where `P_{λ,q}` is empty.
fn completion_block(mults: &[u32], d: u32) -> Option<Vec<usize>> {
    if let Some(j) = mults.iter().position(|&m| m >= 3) {
        return Some(vec![j]);
    }
    let total: u32 = mults.iter().sum();
    if total < 4 {
        return Some((0..mults.len()).collect());
    }
    let target = if d % 2 == 1 { 3 } else { 4 };
    // Every multiplicity is 1 or 2 here, so at most four parts are needed.
    (1..=4.min(mults.len())).find_map(|size| {
        itertools::Itertools::combinations(0..mults.len(), size)
            .find(|idx| idx.iter().map(|&i| mults[i]).sum::<u32>() == target)
    })
}

/// All tuples `[q_j]` over the distinct odd parts `j` (ascending), with
/// `deg q_j = m_j` and Witt sum `u`; sorted and free of duplicates.
pub fn enumerate_tuples(lambda: &Partition, u: WittClass, law: WittLaw) -> Vec<Vec<QFormClass>> {
    let odd = lambda.odd_parts();
    let mults: Vec<u32> = odd.iter().map(|&(_, m)| m).collect();
    let m: u32 = mults.iter().sum();
    let d = u.aniso_dim();
    if m < d {
        return Vec::new();
    }
    if m == 0 {
        return if u.is_zero() { vec![Vec::new()] } else { Vec::new() };
    }
    let Some(e) = completion_block(&mults, d) else {
        return Vec::new();
    };
    let s: Vec<usize> = (0..mults.len()).filter(|i| !e.contains(i)).collect();

    let mut t_by_class: BTreeMap<WittClass, Vec<Vec<QFormClass>>> = BTreeMap::new();
    let e_degrees: Vec<u32> = e.iter().map(|&i| mults[i]).collect();
    for t in all_tuples(&e_degrees) {
        t_by_class.entry(tuple_class(&t, law)).or_default().push(t);
    }

    let s_degrees: Vec<u32> = s.iter().map(|&i| mults[i]).collect();
    let mut out = Vec::new();
    for qs in all_tuples(&s_degrees) {
        let need = law.sub(u, tuple_class(&qs, law));
        for qt in t_by_class.get(&need).into_iter().flatten() {
            let mut full = vec![qs.first().copied().unwrap_or(qt[0]); mults.len()];
            for (k, &i) in s.iter().enumerate() {
                full[i] = qs[k];
            }
            for (k, &i) in e.iter().enumerate() {
                full[i] = qt[k];
            }
            out.push(full);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitlab::count::count_brute;
    use crate::padic::SquareClass;

    fn p(xs: &[u32]) -> Partition {
        Partition::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn even_only_partitions() {
        let l = p(&[2, 2]);
        for law in [WittLaw::Klein, WittLaw::Cyclic] {
            assert_eq!(enumerate_tuples(&l, WittClass::ZERO, law), vec![Vec::new()]);
            for u in WittClass::all().filter(|u| !u.is_zero()) {
                assert!(enumerate_tuples(&l, u, law).is_empty());
            }
        }
    }

    #[test]
    fn single_line() {
        let rho = WittClass::of_class(SquareClass::Rho);
        let got = enumerate_tuples(&p(&[1]), rho, WittLaw::Cyclic);
        assert_eq!(got, vec![vec![QFormClass::new(1, rho).unwrap()]]);
    }

    #[test]
    fn example_one_three_five() {
        let law = WittLaw::Klein;
        let one = WittClass::of_class(SquareClass::One);
        let got = enumerate_tuples(&p(&[1, 3, 5]), one, law);
        assert_eq!(got.len(), 10);
        // [1,a,-a], [a,1,-a], [a,-a,1] with a ∈ {±1, ±ϖ}; -a ~ a here.
        let mut expected = Vec::new();
        for a in [SquareClass::One, SquareClass::Pi] {
            for a in [a, a.mul(SquareClass::Rho)] {
                let na = law.neg_class(a);
                for pattern in [[SquareClass::One, a, na], [a, SquareClass::One, na], [a, na, SquareClass::One]] {
                    let t: Vec<QFormClass> = pattern
                        .iter()
                        .map(|&x| QFormClass::new(1, WittClass::of_class(x)).unwrap())
                        .collect();
                    expected.push(t);
                }
            }
        }
        expected.sort();
        expected.dedup();
        assert_eq!(got, expected);
    }

    #[test]
    fn matches_brute_force_sets() {
        for law in [WittLaw::Klein, WittLaw::Cyclic] {
            for l in [p(&[1, 1, 3, 5, 5]), p(&[1, 3, 3, 3]), p(&[1, 1, 1, 1, 3]), p(&[1, 3, 5, 7])] {
                for u in WittClass::all() {
                    let got = enumerate_tuples(&l, u, law);
                    assert_eq!(got.len() as u128, count_brute(&l, u, law), "{l} {u}");
                    let mut dedup = got.clone();
                    dedup.dedup();
                    assert_eq!(dedup.len(), got.len());
                    assert!(got.iter().all(|t| tuple_class(t, law) == u));
                }
            }
        }
    }
}
