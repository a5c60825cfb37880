//! Acceptance checks, one line per criterion.
//!
//! Exits nonzero on any unexpected outcome. A criterion listed in
//! `KNOWN_FAILURES` may print FAIL without failing the run, but only if its
//! failures are exactly the documented ones.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use nilorb::building::{facet_report, in_half_lattice, valuation_violations};
use nilorb::orbitlab::{
    count_brute, count_for_partition, enumerate_tuples, labels_for_partition, orbit_labels, partitions_even_mult,
    Group, OrbitLabel, Partition,
};
use nilorb::padic::{PadicCtx, SquareClass};
use nilorb::quadform::{
    aniso_representative, isometry_classes, witt_of_diagonal, QFormClass, WittClass, WittLaw,
};
use nilorb::repbuild::{represent, LieTriple};
use nilorb::verify::{permutation_sign, ve_conjugation_witness, verify};
use rayon::prelude::*;

enum Outcome {
    Pass(String),
    Fail(Vec<String>),
    Excluded(&'static str),
}

struct Known {
    id: &'static str,
    why: &'static str,
    matches: fn(&str) -> bool,
}

/// Root valuation duality needs `p > h`; at p = 5 the coefficient
/// `μ = 10` of a part-7 string is not a unit, so `val(X_α) + val(Y_-α) = 1`.
const KNOWN_FAILURES: &[Known] = &[Known {
    id: "7b",
    why: "duality needs p above the Coxeter number; fails at p=5 on labels with a part 7",
    matches: |line| line.starts_with("p=5 (7"),
}];

fn ctx(p: u64) -> Arc<PadicCtx> {
    PadicCtx::with_default_precision(p).expect("odd prime")
}

fn so_labels(ctx: &Arc<PadicCtx>, n_max: u32) -> Vec<OrbitLabel> {
    let law = WittLaw::of(ctx);
    (1..=n_max)
        .flat_map(isometry_classes)
        .flat_map(|q| orbit_labels(q, Group::SO, law))
        .collect()
}

fn triples(p: u64) -> Vec<LieTriple> {
    let ctx = ctx(p);
    so_labels(&ctx, 8)
        .par_iter()
        .map(|l| represent(l, &ctx).unwrap_or_else(|e| panic!("p={p} {l}: {e}")))
        .collect()
}

fn finish(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome::Pass(summary)
    } else {
        Outcome::Fail(failures)
    }
}

fn c1() -> Outcome {
    let sizes: Vec<usize> = (1..=4).map(|d| isometry_classes(d).len()).collect();
    if sizes == [4, 7, 8, 8] {
        Outcome::Pass(format!("sizes {sizes:?}"))
    } else {
        Outcome::Fail(vec![format!("sizes {sizes:?}")])
    }
}

fn c2() -> Outcome {
    let mut bad = Vec::new();
    for p in [5u64, 7] {
        let law = WittLaw::of(&ctx(p));
        for u in WittClass::all() {
            let f = aniso_representative(u, law);
            if witt_of_diagonal(&f, law) != u || f.degree() as u32 != u.aniso_dim() {
                bad.push(format!("p={p} {u}: representative {f}"));
            }
        }
    }
    let mut pairs = 0;
    for u in WittClass::all() {
        for v in WittClass::all() {
            pairs += 1;
            let (a, b) = (WittLaw::Klein.sub(u, v), WittLaw::Cyclic.sub(u, v));
            if a.aniso_dim() != b.aniso_dim() {
                bad.push(format!("{u} - {v}: {a} vs {b}"));
            }
        }
    }
    finish(bad, format!("32 round trips, {pairs} pairs"))
}

fn c3() -> Outcome {
    let mut jobs = Vec::new();
    for p in [5u64, 7] {
        for n in 1..=12 {
            for l in partitions_even_mult(n) {
                for u in WittClass::all().filter(|u| u.aniso_dim() % 2 == n % 2) {
                    jobs.push((p, l.clone(), u));
                }
            }
        }
    }
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|(p, l, u)| {
            let law = WittLaw::for_prime(*p);
            let closed = count_for_partition(l, *u);
            let brute = count_brute(l, *u, law);
            let listed = enumerate_tuples(l, *u, law).len() as u128;
            (closed != brute || brute != listed)
                .then(|| format!("p={p} {l} u={u}: closed {closed} brute {brute} listed {listed}"))
        })
        .collect();
    finish(bad, format!("{} cases", jobs.len()))
}

fn c4() -> Outcome {
    let ctx = ctx(5);
    let law = WittLaw::of(&ctx);
    let one = |c| QFormClass::new(1, WittClass::of_class(c)).expect("degree 1");
    let q = QFormClass::new(9, WittClass::of_class(SquareClass::One)).expect("degree 9");
    let lambda = Partition::new(vec![5, 3, 1]).expect("partition");
    let got: BTreeSet<Vec<QFormClass>> = labels_for_partition(&lambda, q, Group::SO, law)
        .into_iter()
        .map(|l| l.qtup)
        .collect();
    // [1, a, -a] and its rotations, a over every square class; ascending parts
    let mut expected = BTreeSet::new();
    for a in SquareClass::ALL {
        let (x, y) = (one(a), one(law.neg_class(a)));
        let e = one(SquareClass::One);
        expected.insert(vec![e, x, y]);
        expected.insert(vec![x, e, y]);
        expected.insert(vec![x, y, e]);
    }
    if got == expected && got.len() == 10 {
        Outcome::Pass("10 labels, matching the explicit list".into())
    } else {
        Outcome::Fail(vec![format!("got {} labels: {got:?}", got.len())])
    }
}

fn c5(all: &[(u64, Vec<LieTriple>)]) -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for (p, ts) in all {
        count += ts.len();
        bad.extend(ts.par_iter().filter_map(|t| {
            let l = &t.label;
            match verify(t) {
                Ok(r) if r.matches_label && r.in_so.x && r.in_so.h && r.in_so.y && r.precision_margin >= 56 => None,
                Ok(r) => Some(format!("p={p} {l}: {r:?}")),
                Err(e) => Some(format!("p={p} {l}: {e}")),
            }
        }).collect::<Vec<_>>());
    }
    finish(bad, format!("{count} labels"))
}

fn c6() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for p in [5u64, 7] {
        let ctx = ctx(p);
        let law = WittLaw::of(&ctx);
        for n in [4u32, 8] {
            let q = QFormClass::new(n, WittClass::ZERO).expect("split");
            for l in partitions_even_mult(n).into_iter().filter(Partition::is_very_even) {
                cases += 1;
                let labels = labels_for_partition(&l, q, Group::SO, law);
                if labels.len() != 2 {
                    bad.push(format!("p={p} {l}: {} labels", labels.len()));
                    continue;
                }
                let (t1, t2) = match (represent(&labels[0], &ctx), represent(&labels[1], &ctx)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => {
                        bad.push(format!("p={p} {l}: build failed"));
                        continue;
                    }
                };
                match ve_conjugation_witness(&t1, &t2) {
                    Ok(g) if permutation_sign(&g) == Some(-1) => {}
                    Ok(_) => bad.push(format!("p={p} {l}: witness has determinant +1")),
                    Err(e) => bad.push(format!("p={p} {l}: {e}")),
                }
            }
        }
    }
    finish(bad, format!("{cases} very even partitions"))
}

fn c7a(all: &[(u64, Vec<LieTriple>)]) -> Outcome {
    let mut bad = Vec::new();
    for (p, ts) in all {
        bad.extend(ts.par_iter().filter_map(|t| match facet_report(t) {
            Ok(f) if f.agree && in_half_lattice(&f.facet.point) => None,
            Ok(f) => Some(format!(
                "p={p} {}: facet {} gamma {} theorem {} split rank {}",
                t.label, f.facet.dim, f.dim_gamma, f.dim_theorem, f.split_rank
            )),
            Err(e) => Some(format!("p={p} {}: {e}", t.label)),
        }).collect::<Vec<_>>());
    }
    finish(bad, "facet dim = |Γ_even|+|Γ_hyp| = formula = split rank".into())
}

fn c7b(all: &[(u64, Vec<LieTriple>)]) -> Outcome {
    let mut bad = Vec::new();
    for (p, ts) in all {
        bad.extend(ts.par_iter().flat_map_iter(|t| match valuation_violations(t) {
            Ok(v) => v.into_iter().map(|s| format!("p={p} {}: {s}", t.label)).collect::<Vec<_>>(),
            Err(e) => vec![format!("p={p} {}: {e}", t.label)],
        }).collect::<Vec<_>>());
    }
    finish(bad, "val(Y_-α) = -val(X_α) on every root".into())
}

fn main() {
    let start = Instant::now();
    let all: Vec<(u64, Vec<LieTriple>)> = [5u64, 7].into_iter().map(|p| (p, triples(p))).collect();

    let criteria: Vec<(&str, &str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1", "classification table", Box::new(c1)),
        ("2", "Witt tables", Box::new(c2)),
        ("3", "counting theorem", Box::new(c3)),
        ("4", "(5,3,1) example", Box::new(c4)),
        ("5", "representative soundness", Box::new(|| c5(&all))),
        ("6", "very even doubling", Box::new(c6)),
        ("7a", "facet dimension agreement", Box::new(|| c7a(&all))),
        ("7b", "root valuation duality", Box::new(|| c7b(&all))),
        ("8", "building beyond one apartment", Box::new(|| Outcome::Excluded("not checkable in one apartment"))),
    ];

    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.iter().find(|k| k.id == id);
        match outcome {
            Outcome::Pass(s) => {
                println!("PASS {id:<3} {name}: {s} ({secs:.1}s)");
                if let Some(k) = known {
                    println!("     expected failure did not occur: {}", k.why);
                    unexpected += 1;
                }
            }
            Outcome::Excluded(why) => println!("EXCL {id:<3} {name}: {why}"),
            Outcome::Fail(lines) => {
                let expected = known.is_some_and(|k| lines.iter().all(|l| (k.matches)(l)));
                let tag = if expected { " [known]" } else { "" };
                println!("FAIL {id:<3} {name}: {} failure(s){tag} ({secs:.1}s)", lines.len());
                if let Some(k) = known.filter(|_| expected) {
                    println!("     {}", k.why);
                } else {
                    unexpected += 1;
                }
                for l in lines.iter().take(5) {
                    println!("     {l}");
                }
            }
        }
    }
    println!("total {:.1}s, {unexpected} unexpected outcome(s)", start.elapsed().as_secs_f64());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
