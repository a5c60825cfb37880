//! Closed-form orbit counts and the exhaustive count they are tested against.

use crate::quadform::{isometry_classes, QFormClass, WittClass, WittLaw};

use super::partition::Partition;

fn pow(base: i128, e: u32) -> i128 {
    base.checked_pow(e).expect("orbit count exceeds 128 bits")
}

fn to_count(x: i128) -> u128 {
    u128::try_from(x).expect("closed-form count is nonnegative")
}

/// Number of `a`-tuples of degree-one forms summing to `u`.
///
/// Zero on parity mismatch; for `a = 0` the empty tuple represents only `0`.
pub fn count_n1(a: u32, u: WittClass) -> u128 {
    let d = u.aniso_dim();
    if a == 0 {
        return u128::from(u.is_zero());
    }
    if (a + d) % 2 == 1 {
        return 0;
    }
    let total = pow(4, a) + (2 - i128::from(d)) * pow(2, a + 1);
    to_count(total / 8)
}

fn round_seventh_power(b: u32) -> i128 {
    let sign = if b.is_multiple_of(2) { 1 } else { -1 };
    (pow(7, b) - sign) / 8
}

fn epsilon(d: u32, b: u32) -> i128 {
    match (d, b % 2) {
        (0, 0) => 1,
        (4, 1) => -1,
        _ => 0,
    }
}

/// Number of `b`-tuples of degree-two forms summing to `u`; zero for odd `dim u`.
pub fn count_n2(b: u32, u: WittClass) -> u128 {
    let d = u.aniso_dim();
    if d % 2 == 1 {
        return 0;
    }
    to_count(round_seventh_power(b) + epsilon(d, b))
}

/// Number of ways to put forms on `a` lines, `b` planes and `c` spaces of
/// dimension ≥ 3 so that the sum is `u`.
///
/// Assumes the total degree has the parity of `dim u`; when `c = 0` the
/// parity is visible from `a` and a mismatch yields 0.
pub fn count_closed(a: u32, b: u32, c: u32, u: WittClass) -> u128 {
    let d = i128::from(u.aniso_dim());
    if a == 0 && b == 0 && c == 0 {
        return u128::from(u.is_zero());
    }
    if c >= 1 {
        return to_count(pow(4, a) * pow(7, b) * pow(8, c - 1));
    }
    if (i128::from(a) + d) % 2 == 1 {
        return 0;
    }
    if a == 0 {
        return count_n2(b, u);
    }
    to_count((pow(4, a) * pow(7, b) + (2 - d) * pow(2, a + 1)) / 8)
}

/// Closed-form count of `P_{λ,q}` for the class `u`, reading parity mismatch as 0.
pub fn count_for_partition(lambda: &Partition, u: WittClass) -> u128 {
    if (lambda.odd_mult_total() + u.aniso_dim()) % 2 == 1 {
        return 0;
    }
    let (a, b, c) = lambda.abc();
    count_closed(a, b, c, u)
}

/// Cartesian product of the isometry classes on each odd multiplicity space.
pub(crate) fn all_tuples(degrees: &[u32]) -> Vec<Vec<QFormClass>> {
    let mut out: Vec<Vec<QFormClass>> = vec![Vec::new()];
    for &deg in degrees {
        let choices = isometry_classes(deg);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut t = prefix.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn tuple_class(tuple: &[QFormClass], law: WittLaw) -> WittClass {
    law.sum(tuple.iter().map(|q| q.cls))
}

/// Exhaustive count: every tuple of isometry classes, filtered by Witt sum.
pub fn count_brute(lambda: &Partition, u: WittClass, law: WittLaw) -> u128 {
    let degrees: Vec<u32> = lambda.odd_parts().iter().map(|&(_, m)| m).collect();
    all_tuples(&degrees)
        .iter()
        .filter(|t| tuple_class(t, law) == u)
        .count() as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::SquareClass;
    use crate::quadform::ResWittClass;

    fn class_of_dim(d: u32) -> WittClass {
        WittClass::all().find(|u| u.aniso_dim() == d).unwrap()
    }

    #[test]
    fn degree_one_examples() {
        assert_eq!(count_n1(1, class_of_dim(1)), 1);
        assert_eq!(count_n1(1, class_of_dim(3)), 0);
        assert_eq!(count_n1(3, WittClass::of_class(SquareClass::One)), 10);
        assert_eq!(count_n1(2, WittClass::QUAT), 0);
        assert_eq!(count_n1(2, WittClass::ZERO), 4);
        assert_eq!(count_n1(0, WittClass::ZERO), 1);
        assert_eq!(count_n1(0, class_of_dim(2)), 0);
        assert_eq!(count_n1(2, class_of_dim(1)), 0);
    }

    #[test]
    fn degree_two_examples() {
        assert_eq!(count_n2(0, WittClass::ZERO), 1);
        assert_eq!(count_n2(1, WittClass::QUAT), 0);
        assert_eq!(count_n2(2, WittClass::ZERO), 7);
        assert_eq!(count_n2(1, class_of_dim(2)), 1);
        assert_eq!(count_n2(3, class_of_dim(1)), 0);
    }

    #[test]
    fn closed_examples() {
        for u in WittClass::all().filter(|u| u.aniso_dim() % 2 == 1) {
            assert_eq!(count_closed(0, 0, 1, u), 1);
        }
        assert_eq!(count_closed(3, 0, 0, WittClass::of_class(SquareClass::Pi)), 10);
        assert_eq!(count_closed(0, 1, 0, WittClass::QUAT), 0);
        assert_eq!(count_closed(0, 0, 0, WittClass::ZERO), 1);
        let u = WittClass::new(ResWittClass::U1, ResWittClass::Zero);
        assert_eq!(count_closed(0, 0, 0, u), 0);
    }

    #[test]
    fn closed_matches_brute_small() {
        for law in [WittLaw::Klein, WittLaw::Cyclic] {
            for a in 0..4u32 {
                for b in 0..3u32 {
                    for c in 0..2u32 {
                        let mut parts = Vec::new();
                        let mut next = 1;
                        for (count, mult) in [(a, 1), (b, 2), (c, 3)] {
                            for _ in 0..count {
                                parts.extend(std::iter::repeat_n(next, mult));
                                next += 2;
                            }
                        }
                        if parts.is_empty() {
                            parts = vec![2, 2];
                        }
                        let l = Partition::new(parts).unwrap();
                        for u in WittClass::all() {
                            assert_eq!(
                                count_for_partition(&l, u),
                                count_brute(&l, u, law),
                                "{l} {u}"
                            );
                        }
                    }
                }
            }
        }
    }
}
