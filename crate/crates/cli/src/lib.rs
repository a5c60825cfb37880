//! Command implementations behind the `nilorb` binary. Each command returns
//! a JSON value plus an exit status; `main` only parses flags and prints.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use nilorb::building::{facet_report, in_half_lattice, phi_x, valuation_violations};
use nilorb::gammapart::{build_gamma, validate_gamma};
use nilorb::orbitlab::{
    count_brute, count_for_partition, count_row, enumerate_tuples, labels_for_partition, orbit_labels, partitions_even_mult,
    Group, OrbitLabel, Partition, VeTag,
};
use nilorb::padic::{PadicCtx, DEFAULT_PRECISION};
use nilorb::quadform::{isometry_classes, DiagonalForm, QFormClass, ResWittClass, WittClass, WittLaw};
use nilorb::repbuild::{build_triple, represent};
use nilorb::verify::{check_triple, verify, ve_conjugation_witness};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::BadInput(msg.into())
}

/// Output of one command: the JSON document and the process exit status.
#[derive(Debug)]
pub struct Output {
    pub value: Value,
    pub exit: i32,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output { value, exit: 0 }
    }
}

/// Everything a job needs: field, form and group.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub ctx: Arc<PadicCtx>,
    pub law: WittLaw,
    pub q: QFormClass,
    pub group: Group,
    pub lambda: Option<Partition>,
}

/// Parses `diag:1,r,w` / `witt:<deg>:<unit>.<pi>`; a bare list is read as a diagonal.
pub fn parse_form(s: &str, law: WittLaw) -> Result<QFormClass, CliError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("witt:") {
        let (deg, cls) = rest
            .split_once(':')
            .ok_or_else(|| bad(format!("expected witt:<deg>:<unit>.<pi>, got {s:?}")))?;
        let deg: u32 = deg.trim().parse().map_err(|_| bad(format!("bad degree in {s:?}")))?;
        let (u, p) = cls.split_once('.').unwrap_or((cls, "ZERO"));
        let unit = ResWittClass::parse(u).ok_or_else(|| bad(format!("unknown residue class {u:?}")))?;
        let pi = ResWittClass::parse(p).ok_or_else(|| bad(format!("unknown residue class {p:?}")))?;
        return QFormClass::new(deg, WittClass { unit, pi }).map_err(|e| bad(e.to_string()));
    }
    let body = s.strip_prefix("diag:").unwrap_or(s);
    let diag = DiagonalForm::parse(body).ok_or_else(|| bad(format!("cannot parse form {s:?}")))?;
    Ok(QFormClass::of_diagonal(&diag, law))
}

/// Default form of degree `n`: split for even `n`, `⟨1⟩ ⊕ Hyp^k` for odd `n`.
pub fn default_form(n: u32, law: WittLaw) -> QFormClass {
    let cls = if n.is_multiple_of(2) {
        WittClass::ZERO
    } else {
        witt_of_one(law)
    };
    QFormClass::new(n, cls).expect("dimension parity matches")
}

fn witt_of_one(law: WittLaw) -> WittClass {
    QFormClass::of_diagonal(&DiagonalForm::new(vec![nilorb::padic::SquareClass::One]), law).cls
}

#[derive(Clone, Debug, Default)]
pub struct JobArgs {
    pub p: u64,
    pub n: Option<u32>,
    pub q: Option<String>,
    pub group: Option<String>,
    pub lambda: Option<String>,
    pub precision: Option<u32>,
}

impl JobArgs {
    pub fn resolve(&self) -> Result<JobSpec, CliError> {
        let precision = self.precision.unwrap_or(DEFAULT_PRECISION);
        let ctx = PadicCtx::new(self.p, precision).map_err(|e| bad(e.to_string()))?;
        let law = WittLaw::of(&ctx);
        let q = match (&self.q, self.n) {
            (Some(s), n) => {
                let q = parse_form(s, law)?;
                if let Some(n) = n {
                    if n != q.degree {
                        return Err(bad(format!("form {s:?} has degree {}, but --n is {n}", q.degree)));
                    }
                }
                q
            }
            (None, Some(n)) => default_form(n, law),
            (None, None) => return Err(bad("one of --n or --q is required")),
        };
        if q.degree == 0 {
            return Err(bad("the form must have positive degree"));
        }
        let group = match &self.group {
            Some(g) => g.parse::<Group>().map_err(bad)?,
            None => Group::SO,
        };
        let lambda = self
            .lambda
            .as_deref()
            .map(|s| s.parse::<Partition>().map_err(|e| bad(e.to_string())))
            .transpose()?;
        if let Some(l) = &lambda {
            if l.n() != q.degree {
                return Err(bad(format!("partition {l} does not sum to {}", q.degree)));
            }
            if !l.has_even_mult() {
                return Err(bad(format!("partition {l} has an even part of odd multiplicity")));
            }
        }
        Ok(JobSpec {
            ctx,
            law,
            q,
            group,
            lambda,
        })
    }
}

fn coxeter_number(n: u32) -> u32 {
    if n % 2 == 1 {
        n - 1
    } else {
        n.saturating_sub(2)
    }
}

fn field_warnings(spec: &JobSpec) -> Vec<String> {
    let h = coxeter_number(spec.q.degree);
    let p = spec.ctx.p();
    let mut w = Vec::new();
    if h > 0 && p <= 3 * (u64::from(h) - 1) {
        w.push(format!(
            "p = {p} <= 3(h-1) = {} for h = {h}: the building interpretation of facets is not guaranteed",
            3 * (h - 1)
        ));
    }
    w
}

fn header(spec: &JobSpec) -> BTreeMap<&'static str, Value> {
    let mut m = BTreeMap::new();
    m.insert("p", json!(spec.ctx.p()));
    m.insert("n", json!(spec.q.degree));
    m.insert("q", json!(spec.q));
    m.insert("group", json!(spec.group));
    m
}

fn partitions_for(spec: &JobSpec) -> Vec<Partition> {
    match &spec.lambda {
        Some(l) => vec![l.clone()],
        None => partitions_even_mult(spec.q.degree),
    }
}

pub fn cmd_count(spec: &JobSpec, check: bool) -> Output {
    let rows: Vec<_> = partitions_for(spec)
        .par_iter()
        .map(|l| count_row(l, spec.q.cls, spec.law, check))
        .collect();
    let total_o: u128 = rows.iter().map(|r| r.closed).sum();
    let total_so: u128 = rows.iter().map(|r| r.so).sum();
    let mismatch = rows.iter().any(|r| r.brute.is_some_and(|b| b != r.closed));
    let mut m = header(spec);
    m.insert("rows", json!(rows));
    m.insert("totals", json!({"O": total_o, "SO": total_so}));
    m.insert("warnings", json!(Vec::<String>::new()));
    Output {
        value: json!(m),
        exit: if mismatch { 1 } else { 0 },
    }
}

pub fn cmd_enumerate(spec: &JobSpec) -> Output {
    let labels: Vec<OrbitLabel> = partitions_for(spec)
        .iter()
        .flat_map(|l| labels_for_partition(l, spec.q, spec.group, spec.law))
        .collect();
    let mut m = header(spec);
    m.insert("count", json!(labels.len()));
    m.insert("labels", json!(labels));
    m.insert("warnings", json!(Vec::<String>::new()));
    Output::ok(json!(m))
}

/// Parses a `;`-separated list of forms, one per distinct odd part, ascending.
pub fn parse_label(spec: &JobSpec, qtup: Option<&str>, ve: Option<&str>) -> Result<OrbitLabel, CliError> {
    let lambda = spec
        .lambda
        .clone()
        .ok_or_else(|| bad("--lambda is required to name an orbit"))?;
    let qtup = match qtup.map(str::trim) {
        None | Some("") => Vec::new(),
        Some(s) => s
            .split(';')
            .map(|f| parse_form(f, spec.law))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let ve = match ve.map(|s| s.trim().to_ascii_uppercase()) {
        None => None,
        Some(t) if t == "I" => Some(VeTag::I),
        Some(t) if t == "II" => Some(VeTag::II),
        Some(t) => return Err(bad(format!("unknown very even tag {t:?} (expected I or II)"))),
    };
    let label = OrbitLabel { lambda, qtup, ve };
    label
        .validate(spec.q, spec.group, spec.law)
        .map_err(|e| bad(format!("{label} is not an orbit of this group: {e}")))?;
    Ok(label)
}

pub fn cmd_represent(spec: &JobSpec, label: &OrbitLabel) -> Output {
    let mut warnings = field_warnings(spec);
    let mut m = BTreeMap::new();
    m.insert("label", json!(label));
    let triple = match represent(label, &spec.ctx) {
        Ok(t) => t,
        Err(e) => {
            m.insert("error", json!(e.to_string()));
            m.insert("warnings", json!(warnings));
            return Output { value: json!(m), exit: 1 };
        }
    };
    let exit = match verify(&triple) {
        Ok(report) => {
            if report.precision_margin < 16 {
                warnings.push(format!("precision margin is only {}", report.precision_margin));
            }
            let ok = report.matches_label;
            if ok {
                m.insert("triple", json!(triple));
            }
            m.insert("verify", json!(report));
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            m.insert("error", json!(e.to_string()));
            1
        }
    };
    m.insert("warnings", json!(warnings));
    Output { value: json!(m), exit }
}

pub fn cmd_facet(spec: &JobSpec, label: &OrbitLabel) -> Output {
    let warnings = field_warnings(spec);
    let mut m = BTreeMap::new();
    m.insert("label", json!(label));
    m.insert("warnings", json!(warnings));
    let result = represent(label, &spec.ctx)
        .map_err(|e| e.to_string())
        .and_then(|t| {
            let terms = phi_x(&t).map_err(|e| e.to_string())?;
            let rep = facet_report(&t).map_err(|e| e.to_string())?;
            Ok((terms, rep))
        });
    match result {
        Ok((terms, rep)) => {
            let exit = if rep.agree { 0 } else { 1 };
            m.insert("phi_x", json!(terms));
            m.insert("facet", json!(rep.facet));
            m.insert("dim_gamma", json!(rep.dim_gamma));
            m.insert("dim_theorem", json!(rep.dim_theorem));
            m.insert("split_rank", json!(rep.split_rank));
            m.insert("agree", json!(rep.agree));
            Output { value: json!(m), exit }
        }
        Err(e) => {
            m.insert("error", json!(e));
            Output { value: json!(m), exit: 1 }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Whether a failure fails the whole run.
    pub gating: bool,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>, cases: usize, failures: Vec<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: failures.is_empty(),
            gating: true,
            cases,
            failures,
        }
    }
}

/// Counting: closed form vs brute force vs enumeration.
fn selftest_counts(ctx: &Arc<PadicCtx>, n_max: u32) -> CheckResult {
    let law = WittLaw::of(ctx);
    let mut cases = 0;
    let mut failures = Vec::new();
    for n in 1..=n_max {
        for l in partitions_even_mult(n) {
            for u in WittClass::all() {
                if u.aniso_dim() % 2 != n % 2 {
                    continue;
                }
                cases += 1;
                let closed = count_for_partition(&l, u);
                let brute = count_brute(&l, u, law);
                let listed = enumerate_tuples(&l, u, law).len() as u128;
                if closed != brute || brute != listed {
                    failures.push(format!("p={} {l} u={u}: closed {closed}, brute {brute}, listed {listed}", ctx.p()));
                }
            }
        }
    }
    CheckResult::new(format!("counting p={}", ctx.p()), cases, failures)
}

fn all_labels(ctx: &Arc<PadicCtx>, n_max: u32) -> Vec<(QFormClass, OrbitLabel)> {
    let law = WittLaw::of(ctx);
    (1..=n_max)
        .flat_map(isometry_classes)
        .flat_map(|q| orbit_labels(q, Group::SO, law).into_iter().map(move |l| (q, l)))
        .collect()
}

/// Representatives: build, verify, facet dimensions; `sabotage` perturbs `X`.
fn selftest_triples(ctx: &Arc<PadicCtx>, n_max: u32, sabotage: bool) -> Vec<CheckResult> {
    let law = WittLaw::of(ctx);
    let labels = all_labels(ctx, n_max);
    let results: Vec<(Vec<String>, Vec<String>, Vec<String>)> = labels
        .par_iter()
        .map(|(_, l)| {
            let mut rep_fail = Vec::new();
            let mut facet_fail = Vec::new();
            let mut gamma_fail = Vec::new();
            let gamma = build_gamma(l, law, true);
            for v in validate_gamma(&gamma, l, law) {
                gamma_fail.push(format!("{l}: {v}"));
            }
            match build_triple(l, &gamma, ctx) {
                Ok(mut t) => {
                    if sabotage {
                        let bump = &t.x.get(0, 0) + &ctx.p_power(i64::from(ctx.precision() / 2));
                        t.x.set(0, 0, bump);
                    }
                    match verify(&t) {
                        Ok(r) if r.matches_label => {}
                        Ok(r) => rep_fail.push(format!("{l}: jordan {} forms {:?}", r.jordan, r.mult_forms)),
                        Err(e) => rep_fail.push(format!("{l}: {e}")),
                    }
                    match facet_report(&t) {
                        Ok(f) if f.agree && in_half_lattice(&f.facet.point) => {}
                        Ok(f) => facet_fail.push(format!(
                            "{l}: facet {} gamma {} theorem {} split rank {}",
                            f.facet.dim, f.dim_gamma, f.dim_theorem, f.split_rank
                        )),
                        Err(e) => facet_fail.push(format!("{l}: {e}")),
                    }
                }
                Err(e) => rep_fail.push(format!("{l}: {e}")),
            }
            (gamma_fail, rep_fail, facet_fail)
        })
        .collect();
    let n = labels.len();
    let p = ctx.p();
    let mut g = Vec::new();
    let mut r = Vec::new();
    let mut f = Vec::new();
    for (a, b, c) in results {
        g.extend(a);
        r.extend(b);
        f.extend(c);
    }
    vec![
        CheckResult::new(format!("gamma partitions p={p}"), n, g),
        CheckResult::new(format!("representatives p={p}"), n, r),
        CheckResult::new(format!("facet dimensions p={p}"), n, f),
    ]
}

/// Valuation duality of the root components of `X` and `Y`.
fn selftest_duality(ctx: &Arc<PadicCtx>, n_max: u32) -> CheckResult {
    let labels = all_labels(ctx, n_max);
    let failures: Vec<String> = labels
        .par_iter()
        .flat_map_iter(|(_, l)| {
            let t = represent(l, ctx).expect("validated labels build");
            match valuation_violations(&t) {
                Ok(v) => v.into_iter().map(|s| format!("{l}: {s}")).collect::<Vec<_>>(),
                Err(e) => vec![format!("{l}: {e}")],
            }
        })
        .collect();
    CheckResult::new(format!("root valuation duality p={}", ctx.p()), labels.len(), failures)
}

fn selftest_very_even(ctx: &Arc<PadicCtx>, n_max: u32) -> CheckResult {
    let mut cases = 0;
    let mut failures = Vec::new();
    for n in (4..=n_max).step_by(4) {
        for l in partitions_even_mult(n).into_iter().filter(Partition::is_very_even) {
            cases += 1;
            let mk = |ve| OrbitLabel {
                lambda: l.clone(),
                qtup: vec![],
                ve: Some(ve),
            };
            let (t1, t2) = match (represent(&mk(VeTag::I), ctx), represent(&mk(VeTag::II), ctx)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    failures.push(format!("{l}: build failed"));
                    continue;
                }
            };
            if let Err(e) = ve_conjugation_witness(&t1, &t2) {
                failures.push(format!("{l}: {e}"));
            }
            if !check_triple(&t2).0 {
                failures.push(format!("{l}: second triple fails the bracket relations"));
            }
        }
    }
    CheckResult::new(format!("very even witnesses p={}", ctx.p()), cases, failures)
}

pub fn cmd_selftest(p_list: &[u64], n_max: u32, precision: Option<u32>, sabotage: bool) -> Result<Output, CliError> {
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    for &p in p_list {
        let ctx = PadicCtx::new(p, precision.unwrap_or(DEFAULT_PRECISION)).map_err(|e| bad(e.to_string()))?;
        checks.push(selftest_counts(&ctx, n_max));
        checks.extend(selftest_triples(&ctx, n_max, sabotage));
        checks.push(selftest_very_even(&ctx, n_max));
        let mut duality = selftest_duality(&ctx, n_max);
        duality.gating = false;
        if !duality.passed {
            // informational: needs p larger than the Coxeter number
            warnings.push(format!("{}: {} violation(s)", duality.name, duality.failures.len()));
        }
        checks.push(duality);
    }
    let passed = checks.iter().filter(|c| c.gating).all(|c| c.passed);
    let value = json!({
        "p_list": p_list,
        "n_max": n_max,
        "sabotage": sabotage,
        "checks": checks,
        "passed": passed,
        "warnings": warnings,
    });
    Ok(Output {
        value,
        exit: if passed { 0 } else { 1 },
    })
}

/// Serializes with `indent` spaces (compact when 0).
pub fn render(value: &Value, indent: usize) -> String {
    if indent == 0 {
        return serde_json::to_string(value).expect("JSON values serialize");
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).expect("JSON values serialize");
    String::from_utf8(buf).expect("JSON is UTF-8")
}
