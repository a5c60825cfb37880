use nilorb::orbitlab::{orbit_labels, Group};
use nilorb::padic::PadicCtx;
use nilorb::quadform::{isometry_classes, WittLaw};
use nilorb::repbuild::represent;
use nilorb::verify::verify;
use rayon::prelude::*;

#[test]
fn every_small_label_verifies() {
    for p in [5u64, 7] {
        let ctx = PadicCtx::with_default_precision(p).unwrap();
        let law = WittLaw::of(&ctx);
        let labels: Vec<_> = (1..=8)
            .flat_map(|n| isometry_classes(n).into_iter().flat_map(move |q| orbit_labels(q, Group::SO, law)))
            .collect();
        let bad: Vec<String> = labels
            .par_iter()
            .filter_map(|l| {
                let t = represent(l, &ctx).unwrap();
                let r = verify(&t).unwrap();
                (!r.matches_label).then(|| format!("p={p} {l}: {r:?}"))
            })
            .collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
