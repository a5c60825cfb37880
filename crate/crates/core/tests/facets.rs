use nilorb::building::{facet_report, in_half_lattice, valuation_violations};
use nilorb::orbitlab::{orbit_labels, Group, OrbitLabel};
use nilorb::padic::PadicCtx;
use nilorb::quadform::{isometry_classes, WittLaw};
use nilorb::repbuild::represent;
use rayon::prelude::*;

fn labels(law: WittLaw, n_max: u32) -> Vec<OrbitLabel> {
    (1..=n_max)
        .flat_map(isometry_classes)
        .flat_map(|q| orbit_labels(q, Group::SO, law))
        .collect()
}

/// `(label, violations)` for every label with at least one.
fn duality_failures(p: u64) -> Vec<(OrbitLabel, Vec<String>)> {
    let ctx = PadicCtx::with_default_precision(p).unwrap();
    labels(WittLaw::of(&ctx), 8)
        .into_par_iter()
        .filter_map(|l| {
            let t = represent(&l, &ctx).unwrap();
            let v = valuation_violations(&t).unwrap();
            (!v.is_empty()).then_some((l, v))
        })
        .collect()
}

#[test]
fn dimensions_agree_everywhere() {
    for p in [5u64, 7, 11, 13] {
        let ctx = PadicCtx::with_default_precision(p).unwrap();
        let bad: Vec<String> = labels(WittLaw::of(&ctx), 8)
            .par_iter()
            .filter_map(|l| {
                let f = facet_report(&represent(l, &ctx).unwrap()).unwrap();
                (!f.agree || !in_half_lattice(&f.facet.point)).then(|| format!("p={p} {l}: {f:?}"))
            })
            .collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }
}

#[test]
fn duality_holds_above_coxeter_number() {
    for p in [7u64, 11, 13] {
        let bad = duality_failures(p);
        assert!(bad.is_empty(), "p={p}: {bad:#?}");
    }
}

// A string of length 7 has the Y-coefficient 2·5 = 10, divisible by 5;
// every other coefficient for n ≤ 8 is a unit at 5.
#[test]
fn duality_at_five_breaks_only_on_part_seven() {
    let bad = duality_failures(5);
    assert_eq!(bad.len(), 20);
    for (l, v) in &bad {
        assert!(l.lambda.parts().contains(&7), "{l}: {v:?}");
        assert!(v.iter().all(|s| s.contains("valuation 1, expected 0")), "{l}: {v:?}");
    }
}
