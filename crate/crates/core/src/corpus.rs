//! Built-in instances and the acceptance runner behind `iskk corpus`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::bitset::ElementSet;
use crate::builders::build_spec;
use crate::crossed::{crossed, numeric_blocks, semisimple_quotient, CrossedKind};
use crate::galgebra::{c0x, trivial, FinDimGAlgebra};
use crate::induction::{
    assoc_groupoid, central_decomp_tensor, ci0_enumerate, ideal_oracle, res_ind_split, theta_res_ind,
    theta_res_ind_tensor, FiniteGroupoid,
};
use crate::ktheory::{k0, verify_imprimitivity, verify_remark_counterexamples};
use crate::l2::{check_independence, check_psd, gram};
use crate::report::Report;
use crate::semigroup::{FiniteInvSgp, SemigroupError};
use crate::spectrum::Spectrum;

/// Semigroups swept by the Gram checks.
pub const GRAM_CORPUS: &[&str] = &[
    "chain:2",
    "chain:3",
    "chain:4",
    "chain:5",
    "diamond",
    "cyclic:2",
    "cyclic:3",
    "symmetric_group:3",
    "brandt_unital:2",
    "group_with_zero:2",
    "symmetric_inverse:2",
    "symmetric_inverse:3",
];

pub fn spectrum(spec: &str) -> Result<Arc<Spectrum>, SemigroupError> {
    Ok(Arc::new(Spectrum::new(&Arc::new(build_spec(spec)?))))
}

/// `unit`, `idempotents`, `whole`, or comma-separated element names.
pub fn parse_subset(s: &FiniteInvSgp, spec: &str) -> Result<ElementSet, SemigroupError> {
    match spec {
        "unit" | "1" => Ok(s.element_set([s.unit()])),
        "idempotents" | "E" => Ok(s.idempotents().clone()),
        "whole" | "G" => Ok(s.element_set(s.elements())),
        names => {
            let idx = names.split(',').map(|n| s.index_of(n.trim())).collect::<Result<Vec<_>, _>>()?;
            Ok(s.element_set(idx))
        }
    }
}

/// Coefficient algebras over a groupoid: `res` is `Res ℂ`, `units` is `C₀(H⁽⁰⁾)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupoidCoeff {
    ResC,
    Units,
}

impl GroupoidCoeff {
    pub fn build(self, h: &FiniteGroupoid) -> FinDimGAlgebra {
        match self {
            GroupoidCoeff::ResC => h.restrict_algebra(&trivial(h.x.semigroup())).expect("ℂ restricts").0,
            GroupoidCoeff::Units => h.c0_units(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupoidCoeff::ResC => "res",
            GroupoidCoeff::Units => "units",
        }
    }
}

/// `(G, H′, F)` triples for the imprimitivity check.
pub const IMPRIMITIVITY_CORPUS: &[(&str, &str, GroupoidCoeff)] = &[
    ("cyclic:2", "unit", GroupoidCoeff::ResC),
    ("cyclic:3", "unit", GroupoidCoeff::ResC),
    ("symmetric_group:3", "unit", GroupoidCoeff::ResC),
    ("symmetric_group:3", "123,213", GroupoidCoeff::ResC),
    ("chain:2", "idempotents", GroupoidCoeff::ResC),
    ("chain:2", "idempotents", GroupoidCoeff::Units),
    ("chain:3", "idempotents", GroupoidCoeff::Units),
    ("diamond", "idempotents", GroupoidCoeff::Units),
    ("symmetric_inverse:2", "idempotents", GroupoidCoeff::Units),
    ("symmetric_inverse:2", "whole", GroupoidCoeff::ResC),
    ("symmetric_inverse:2", "unit", GroupoidCoeff::ResC),
    ("brandt_unital:2", "idempotents", GroupoidCoeff::Units),
    ("symmetric_inverse:3", "idempotents", GroupoidCoeff::ResC),
];

/// Crossed products whose block counts are audited.
pub fn crossed_corpus() -> Vec<(String, FinDimGAlgebra)> {
    let mut out = Vec::new();
    for spec in [
        "chain:2",
        "chain:3",
        "diamond",
        "cyclic:2",
        "cyclic:3",
        "symmetric_group:3",
        "symmetric_inverse:2",
        "brandt_unital:2",
    ] {
        let x = spectrum(spec).expect("built-in");
        let s = x.semigroup();
        let mut coeffs = vec![("C0(X)", c0x(&x))];
        // trivial ℂ is no action once a zero is declared among nonzero zero divisors
        if s.zero().is_none() {
            coeffs.insert(0, ("C", trivial(s)));
        }
        for (coeff, a) in coeffs {
            for kind in [CrossedKind::Universal, CrossedKind::Sieben] {
                let cp = crossed(&a, kind).expect("valid corpus action");
                out.push((format!("{spec} {coeff} {}", kind.name()), cp.algebra));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub elapsed: Duration,
    pub summary: String,
    pub reports: Vec<Report>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({:.2}s) {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.summary
        )
    }

    /// Wall time is left out so that the output is reproducible.
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "pass": self.pass,
            "summary": self.summary,
            "reports": self.reports.iter().map(Report::to_json).collect::<Vec<_>>(),
        })
    }
}

pub const TITLES: [&str; 8] = [
    "Remark values",
    "Gram positivity and independence",
    "Θ isomorphisms",
    "Res∘Ind splitting",
    "CI₀ audit",
    "imprimitivity at K₀",
    "semisimple oracle",
    "headless corpus under 5 minutes",
];

fn fail_report(lemma: &str, instance: &str, err: impl std::fmt::Display) -> Report {
    let mut r = Report::new(lemma, instance);
    r.check("construction", false, Some(err.to_string()));
    r
}

fn finish(
    id: usize,
    start: Instant,
    reports: Vec<Report>,
    extra: Vec<(String, bool)>,
    budget: Option<Duration>,
) -> Outcome {
    let elapsed = start.elapsed();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} [{}]: {}", r.lemma, r.instance, r.first_failure().map_or("", |c| c.name.as_str())))
        .chain(extra.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()))
        .collect();
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let mut summary = format!("{} reports, {} checks", reports.len(), extra.len());
    if !failed.is_empty() {
        summary = format!("failed: {}", failed.join("; "));
    }
    if !in_time {
        summary.push_str(&format!("; over budget {:?}", budget.expect("set")));
    }
    Outcome { id, title: TITLES[id - 1], pass: failed.is_empty() && in_time, elapsed, summary, reports }
}

fn criterion_1(seed: u64) -> Outcome {
    let start = Instant::now();
    let mut extra = Vec::new();
    let mut reports = Vec::new();
    for m in 2..=5 {
        let t = Instant::now();
        let x = spectrum(&format!("chain:{m}")).expect("built-in");
        match crossed(&trivial(x.semigroup()), CrossedKind::Universal).map(|cp| k0(&cp.algebra, seed)) {
            Ok(Ok(g)) => extra.push((format!("rank K(ℂ ⋊ E_{m}) = {} (expected {m})", g.rank), g.rank == m)),
            other => extra.push((format!("K(ℂ ⋊ E_{m}): {other:?}"), false)),
        }
        extra.push((format!("E_{m} under 1s"), t.elapsed() < Duration::from_secs(1)));
        match verify_remark_counterexamples(&x, seed) {
            Ok(r) => reports.push(r),
            Err(e) => reports.push(fail_report("remark", &format!("chain:{m}"), e)),
        }
    }
    let one = Arc::new(build_spec("trivial").expect("built-in"));
    let r = crossed(&trivial(&one), CrossedKind::Sieben).map(|cp| k0(&cp.algebra, seed));
    extra.push((format!("rank K(ℂ ⋊̂ {{1}}) = 1: {r:?}"), matches!(r, Ok(Ok(ref g)) if g.rank == 1)));
    finish(1, start, reports, extra, None)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for spec in GRAM_CORPUS {
        let x = spectrum(spec).expect("built-in");
        let mut r = check_psd(&x, &gram(&x));
        r.instance = spec.to_string();
        reports.push(r);
        let mut r = check_independence(&x);
        r.instance = spec.to_string();
        reports.push(r);
    }
    finish(2, start, reports, vec![], Some(Duration::from_secs(30)))
}

fn subset(x: &Spectrum, spec: &str) -> ElementSet {
    parse_subset(x.semigroup(), spec).expect("corpus subsets are valid")
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut extra = Vec::new();
    for (spec, hp, coeff) in [
        ("cyclic:3", "unit", "C"),
        ("chain:2", "idempotents", "C0(X)"),
        ("symmetric_inverse:2", "idempotents", "C0(X)"),
        ("symmetric_group:3", "123,213", "C0(X)"),
    ] {
        let x = spectrum(spec).expect("built-in");
        let b = if coeff == "C" { trivial(x.semigroup()) } else { c0x(&x) };
        match theta_res_ind(&x, &subset(&x, hp), &b) {
            Ok(mut r) => {
                r.instance = format!("{spec} H′={hp} B={coeff}");
                if spec == "chain:2" {
                    let dims: Vec<usize> =
                        r.dims.iter().filter(|(k, _)| k.starts_with("Θ.")).map(|(_, v)| *v).collect();
                    extra.push((
                        format!("chain:2 Θ dims {dims:?} are 2"),
                        !dims.is_empty() && dims.iter().all(|&d| d == 2),
                    ));
                }
                reports.push(r);
            }
            Err(e) => reports.push(fail_report("theta-res-ind", spec, e)),
        }
    }
    for (spec, hp, coeff) in [
        ("chain:2", "idempotents", GroupoidCoeff::ResC),
        ("chain:2", "idempotents", GroupoidCoeff::Units),
        ("symmetric_inverse:2", "idempotents", GroupoidCoeff::Units),
        ("symmetric_inverse:2", "whole", GroupoidCoeff::ResC),
    ] {
        let x = spectrum(spec).expect("built-in");
        let h = Arc::new(assoc_groupoid(&x, &subset(&x, hp)).expect("corpus groupoid"));
        let a = Arc::new(coeff.build(&h));
        let b = c0x(&x);
        match theta_res_ind_tensor(&h, &a, &b) {
            Ok(mut r) => {
                r.instance = format!("{spec} H′={hp} A={} B=C0(X)", coeff.name());
                reports.push(r);
            }
            Err(e) => reports.push(fail_report("theta-res-ind-tensor", spec, e)),
        }
        if let Ok(tc) = central_decomp_tensor(&h, &a, &b) {
            let total = tc.corner_algebra.dim() + tc.complement_algebra.dim();
            extra.push((
                format!(
                    "{spec} A={}: corner + complement = {total} = dim Ind(A)⊗B = {}",
                    coeff.name(),
                    tc.tensor.dim()
                ),
                total == tc.tensor.dim(),
            ));
        } else {
            extra.push((format!("{spec}: central decomposition"), false));
        }
    }
    finish(3, start, reports, extra, Some(Duration::from_secs(60)))
}

/// `(G, H′, L, D)` instances for the splitting lemma.
pub const SPLIT_CORPUS: &[(&str, &str, &str, &str)] = &[
    ("symmetric_group:3", "unit", "123,213", "C"),
    ("chain:2", "idempotents", "whole", "C0(X)"),
    ("symmetric_inverse:2", "idempotents", "unit", "C0(X)"),
    ("symmetric_inverse:2", "idempotents", "whole", "C"),
    ("symmetric_inverse:2", "whole", "idempotents", "C0(X)"),
    ("chain:3", "idempotents", "unit", "C0(X)"),
];

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut extra = Vec::new();
    for (spec, hp, l, coeff) in SPLIT_CORPUS {
        let x = spectrum(spec).expect("built-in");
        let d = if *coeff == "C" { trivial(x.semigroup()) } else { c0x(&x) };
        match res_ind_split(&x, &subset(&x, hp), &subset(&x, l), &d) {
            Ok(mut sp) => {
                if *spec == "symmetric_group:3" {
                    let classes = sp.report.dims.get("L,H-classes").copied().unwrap_or(0);
                    extra.push((format!("S₃ double cosets ⟨(12)⟩\\S₃/{{1}}: {classes} (expected 3)"), classes == 3));
                }
                sp.report.instance = format!("{spec} H′={hp} L={l} D={coeff}");
                reports.push(sp.report);
            }
            Err(e) => reports.push(fail_report("res-ind-split", spec, e)),
        }
    }
    finish(4, start, reports, extra, None)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (spec, chain) in [
        ("chain:2", ["idempotents", "idempotents"]),
        ("chain:2", ["unit", "idempotents"]),
        ("symmetric_inverse:2", ["idempotents", "whole"]),
        ("symmetric_inverse:2", ["unit", "idempotents"]),
        ("symmetric_inverse:2", ["unit", "whole"]),
        ("symmetric_inverse:2", ["whole", "idempotents"]),
    ] {
        let x = spectrum(spec).expect("built-in");
        let sets: Vec<ElementSet> = chain.iter().map(|c| subset(&x, c)).collect();
        let instance = format!("{spec} chain={}", chain.join(">"));
        match ci0_enumerate(&x, &sets) {
            Ok(dec) => {
                let mut r = dec.report.clone();
                r.instance = instance.clone();
                match ideal_oracle(&dec) {
                    Ok(o) => r.absorb("oracle", o),
                    Err(e) => {
                        r.check("oracle", false, Some(e.to_string()));
                    }
                }
                let total: usize = dec.summands.iter().map(|s| s.induced.dim()).sum();
                r.check("Σ dim Ind(A) = dim iterated", total == dec.iterated.dim(), Some(format!("{total}")));
                reports.push(r);
            }
            Err(e) => reports.push(fail_report("ci0-enumerate", &instance, e)),
        }
    }
    finish(5, start, reports, vec![], None)
}

fn criterion_6(seed: u64) -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (spec, hp, coeff) in IMPRIMITIVITY_CORPUS {
        let x = spectrum(spec).expect("built-in");
        let h = Arc::new(assoc_groupoid(&x, &subset(&x, hp)).expect("corpus groupoid"));
        let f = Arc::new(coeff.build(&h));
        let instance = format!("{spec} H′={hp} F={}", coeff.name());
        match verify_imprimitivity(&x, &h, &f, seed) {
            Ok(mut r) => {
                r.instance = instance;
                reports.push(r);
            }
            Err(e) => reports.push(fail_report("imprimitivity", &instance, e)),
        }
    }
    finish(6, start, reports, vec![], None)
}

fn criterion_7(seed: u64) -> Outcome {
    let start = Instant::now();
    let mut extra = Vec::new();
    for (name, alg) in crossed_corpus() {
        let dec = semisimple_quotient(&alg);
        match numeric_blocks(&dec, seed) {
            Ok(nb) => extra.push((
                format!("{name}: exact {} vs numeric {} blocks", dec.blocks(), nb.block_dims.len()),
                dec.blocks() == nb.block_dims.len(),
            )),
            Err(e) => extra.push((format!("{name}: {e}"), false)),
        }
    }
    for (spec, irreps) in [("cyclic:2", 2), ("cyclic:3", 3), ("symmetric_group:3", 3)] {
        let s = Arc::new(build_spec(spec).expect("built-in"));
        let cp = crossed(&trivial(&s), CrossedKind::Universal).expect("group algebra");
        let blocks = semisimple_quotient(&cp.algebra).blocks();
        extra.push((format!("ℂ[{spec}] has {blocks} blocks (expected {irreps})"), blocks == irreps));
    }
    finish(7, start, vec![], extra, None)
}

pub fn run_criterion(id: usize, seed: u64) -> Outcome {
    match id {
        1 => criterion_1(seed),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(seed),
        7 => criterion_7(seed),
        _ => panic!("criterion {id} is run by run_all"),
    }
}

/// Criteria 1 through 7, then the wall-time criterion over all of them.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    let start = Instant::now();
    let mut out: Vec<Outcome> = (1..=7).map(|id| run_criterion(id, seed)).collect();
    let extra = vec![("criteria 1-7 pass".to_string(), out.iter().all(|o| o.pass))];
    out.push(finish(8, start, vec![], extra, Some(Duration::from_secs(300))));
    out
}
