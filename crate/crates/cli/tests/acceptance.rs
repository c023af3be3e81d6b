//! Acceptance criteria, each run through the library and cross-checked
//! against an oracle that shares no code with the exact machinery:
//! floating-point ranks via SVD, brute-force orbit counts on the
//! multiplication table, and a subprocess run of `iskk corpus`.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use iskk_core::builders::build_spec;
use iskk_core::corpus::{crossed_corpus, parse_subset, run_criterion, spectrum, GRAM_CORPUS};
use iskk_core::crossed::{crossed, semisimple_quotient, CrossedKind};
use iskk_core::galgebra::{trivial, FinDimGAlgebra};
use iskk_core::induction::{ci0_enumerate, res_ind_split};
use iskk_core::l2::{basis, gram};
use iskk_core::linalg::{QMatrix, Q};
use iskk_core::semigroup::FiniteInvSgp;
use nalgebra::{DMatrix, SymmetricEigen};

const TOL: f64 = 1e-9;

fn numeric_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let scale = sv.max().max(1.0);
    sv.iter().filter(|&&s| s > TOL * scale).count()
}

fn left(a: &FinDimGAlgebra, i: usize) -> DMatrix<f64> {
    a.left_mul(&a.basis_vec(i)).to_f64()
}

/// `dim Z(A)`: the common kernel of `x ↦ bᵢx − xbᵢ`.
fn center_dim(a: &FinDimGAlgebra) -> usize {
    let n = a.dim();
    if n == 0 {
        return 0;
    }
    let mut stacked = DMatrix::<f64>::zeros(n * n, n);
    for i in 0..n {
        let c = left(a, i) - a.right_mul(&a.basis_vec(i)).to_f64();
        stacked.view_mut((i * n, 0), (n, n)).copy_from(&c);
    }
    n - numeric_rank(&stacked)
}

/// Kernel of the trace form `tr(L_{bᵢ} L_{bⱼ})`.
fn radical_dim(a: &FinDimGAlgebra) -> usize {
    let n = a.dim();
    let ls: Vec<DMatrix<f64>> = (0..n).map(|i| left(a, i)).collect();
    let t = DMatrix::from_fn(n, n, |i, j| (&ls[i] * &ls[j]).trace());
    n - numeric_rank(&t)
}

/// Orbits of `g ↦ l·g·h` on the nonzero elements.
fn double_cosets(s: &FiniteInvSgp, l: &[usize], h: &[usize]) -> usize {
    let mut seen = vec![false; s.len()];
    let mut count = 0;
    for g in s.elements() {
        if seen[g] || s.is_zero(g) {
            continue;
        }
        count += 1;
        for &a in l {
            for &b in h {
                seen[s.mul(s.mul(a, g), b)] = true;
            }
        }
    }
    count
}

/// `C(G)` with point masses `δ_h` and `g·δ_h = δ_{gh}`, built from the table.
fn functions_on(s: &Arc<FiniteInvSgp>) -> FinDimGAlgebra {
    let n = s.len();
    let one = || Q::from_integer(1.into());
    let products = (0..n * n).map(|p| if p / n == p % n { vec![(p / n, one())] } else { vec![] }).collect();
    let action = s
        .elements()
        .map(|g| {
            let mut m = QMatrix::zeros(n, n);
            for h in s.elements() {
                m.set(s.mul(g, h), h, one());
            }
            m
        })
        .collect();
    let basis = s.names().iter().map(|h| format!("δ[{h}]")).collect();
    FinDimGAlgebra::new("C(G)", basis, products, QMatrix::identity(n), Arc::clone(s), action)
}

/// Number of conjugacy classes of a group, from its table.
fn conjugacy_classes(s: &FiniteInvSgp) -> usize {
    let mut seen = vec![false; s.len()];
    let mut count = 0;
    for g in s.elements() {
        if !seen[g] {
            count += 1;
            for h in s.elements() {
                seen[s.mul(s.mul(h, g), s.star(h))] = true;
            }
        }
    }
    count
}

struct Line {
    id: usize,
    pass: bool,
    detail: String,
}

fn criterion(id: usize, oracle: impl FnOnce() -> Result<String, String>) -> Line {
    let start = Instant::now();
    let outcome = run_criterion(id, 0);
    let checked = oracle();
    let elapsed = start.elapsed().as_secs_f64();
    let (pass, detail) = match (&checked, outcome.pass) {
        (Ok(msg), true) => (true, format!("{} ({elapsed:.2}s) {}; oracle: {msg}", outcome.title, outcome.summary)),
        (Ok(_), false) => (false, format!("{}: {}", outcome.title, outcome.summary)),
        (Err(msg), _) => (false, format!("{}: oracle disagrees: {msg}", outcome.title)),
    };
    Line { id, pass, detail }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn remark_values() -> Result<String, String> {
    for m in 2..=5 {
        let t = Instant::now();
        let s = Arc::new(build_spec(&format!("chain:{m}")).unwrap());
        let cp = crossed(&trivial(&s), CrossedKind::Universal).unwrap();
        let blocks = center_dim(&cp.algebra);
        ensure(blocks == m && radical_dim(&cp.algebra) == 0, || format!("ℂ ⋊ E_{m} has {blocks} blocks"))?;
        ensure(t.elapsed() < Duration::from_secs(1), || format!("E_{m} took {:?}", t.elapsed()))?;
    }
    let one = Arc::new(build_spec("trivial").unwrap());
    let cp = crossed(&trivial(&one), CrossedKind::Sieben).unwrap();
    ensure(center_dim(&cp.algebra) == 1, || "ℂ ⋊̂ {1} is not simple".into())?;
    Ok("numeric center dims 2,3,4,5 and 1".into())
}

fn gram_spectra() -> Result<String, String> {
    let mut worst = f64::INFINITY;
    for spec in GRAM_CORPUS {
        let x = spectrum(spec).unwrap();
        let gm = gram(&x);
        let n = basis(&x).len();
        let mut stacked = DMatrix::<f64>::zeros(n * x.len(), n);
        for chi in 0..x.len() {
            let g = gm.at(chi).to_f64();
            let min = SymmetricEigen::new(g.clone()).eigenvalues.min();
            worst = worst.min(min);
            ensure(min > -TOL, || format!("{spec}: eigenvalue {min} at {}", x.character_name(chi)))?;
            stacked.view_mut((chi * n, 0), (n, n)).copy_from(&g);
        }
        let r = numeric_rank(&stacked);
        ensure(r == n, || format!("{spec}: numeric rank {r} of {n}"))?;
    }
    Ok(format!("{} semigroups, least eigenvalue {worst:.3}", GRAM_CORPUS.len()))
}

fn theta_suites() -> Result<String, String> {
    let outcome = run_criterion(3, 0);
    let instances: Vec<&str> = outcome.reports.iter().map(|r| r.instance.as_str()).collect();
    ensure(instances.len() >= 6, || format!("only {} instances", instances.len()))?;
    for worked in ["cyclic:3 H′=unit", "chain:2 H′=idempotents", "symmetric_inverse:2 H′=idempotents"] {
        ensure(instances.iter().any(|i| i.starts_with(worked)), || format!("missing {worked}"))?;
    }
    for r in &outcome.reports {
        let (src, tgt) = (r.dims.get("Θ.source"), r.dims.get("Θ.target"));
        ensure(src.is_some() && src == tgt, || format!("{}: Θ dims {src:?} vs {tgt:?}", r.instance))?;
    }
    Ok(format!("{} instances with matching Θ dims", instances.len()))
}

fn splitting() -> Result<String, String> {
    let x = spectrum("symmetric_group:3").unwrap();
    let s = x.semigroup();
    let h = parse_subset(s, "unit").unwrap();
    let l = parse_subset(s, "123,213").unwrap();
    let split = res_ind_split(&x, &h, &l, &trivial(s)).map_err(|e| e.to_string())?;
    let brute = double_cosets(s, &l.iter().collect::<Vec<_>>(), &h.iter().collect::<Vec<_>>());
    ensure(split.j.len() == brute && brute == 3, || format!("{} classes, brute force {brute}", split.j.len()))?;
    let total: usize = split.summands.iter().filter_map(|t| t.source.as_ref()).map(|a| a.dim()).sum();
    ensure(total == split.induced.dim(), || format!("summands {total} vs {}", split.induced.dim()))?;
    Ok(format!("S₃ cosets L\\G = {brute}"))
}

fn ci0_audit() -> Result<String, String> {
    let mut n = 0;
    for (spec, chain) in [
        ("chain:2", ["idempotents", "idempotents"]),
        ("chain:2", ["unit", "idempotents"]),
        ("symmetric_inverse:2", ["idempotents", "whole"]),
        ("symmetric_inverse:2", ["unit", "idempotents"]),
        ("symmetric_inverse:2", ["unit", "whole"]),
    ] {
        let x = spectrum(spec).unwrap();
        let sets: Vec<_> = chain.iter().map(|c| parse_subset(x.semigroup(), c).unwrap()).collect();
        let dec = ci0_enumerate(&x, &sets).map_err(|e| e.to_string())?;
        let total: usize = dec.summands.iter().map(|m| m.induced.dim()).sum();
        ensure(total == dec.iterated.dim(), || format!("{spec}: {total} vs {}", dec.iterated.dim()))?;
        for m in &dec.summands {
            // commutative and semisimple: the whole algebra is its center
            let a = &m.algebra;
            ensure(center_dim(a) == a.dim() && radical_dim(a) == 0, || {
                format!("{spec}: {} not split commutative", a.label)
            })?;
        }
        // the iterated algebra is commutative, so its blocks are its points
        let it = &dec.iterated;
        ensure(center_dim(it) == it.dim(), || format!("{spec}: iterated algebra is not commutative"))?;
        n += 1;
    }
    Ok(format!("{n} chains"))
}

fn imprimitivity() -> Result<String, String> {
    let mut out = Vec::new();
    for spec in ["cyclic:2", "cyclic:3", "symmetric_group:3"] {
        // C(G) ⋊ G ≅ M_|G|: one block
        let s = Arc::new(build_spec(spec).unwrap());
        let cp = crossed(&functions_on(&s), CrossedKind::Universal).unwrap();
        let z = center_dim(&cp.algebra);
        ensure(z == 1, || format!("C({spec}) ⋊ G has center of dimension {z}"))?;
        out.push(format!("{spec}:1"));
    }
    let outcome = run_criterion(6, 0);
    for r in &outcome.reports {
        let (a, b) = (r.dims.get("K(Ind F ⋊̂ G)"), r.dims.get("K(F ⋊̂ H)"));
        ensure(a.is_some() && a == b, || format!("{}: {a:?} vs {b:?}", r.instance))?;
    }
    Ok(format!("classical blocks {}; {} triples", out.join(" "), outcome.reports.len()))
}

fn semisimple() -> Result<String, String> {
    let corpus = crossed_corpus();
    for (name, alg) in &corpus {
        let dec = semisimple_quotient(alg);
        let (rad, z) = (radical_dim(alg), center_dim(&dec.quotient));
        ensure(rad == dec.radical_dim, || format!("{name}: radical {} vs {rad}", dec.radical_dim))?;
        ensure(z == dec.blocks(), || format!("{name}: blocks {} vs {z}", dec.blocks()))?;
    }
    for (spec, irreps) in [("cyclic:2", 2), ("cyclic:3", 3), ("symmetric_group:3", 3)] {
        let s = Arc::new(build_spec(spec).unwrap());
        let classes = conjugacy_classes(&s);
        let cp = crossed(&trivial(&s), CrossedKind::Universal).unwrap();
        let blocks = semisimple_quotient(&cp.algebra).blocks();
        ensure(classes == irreps && blocks == irreps, || format!("{spec}: {blocks} blocks, {classes} classes"))?;
    }
    Ok(format!("{} crossed products", corpus.len()))
}

fn headless() -> Line {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_iskk")).args(["corpus", "--json"]).output().expect("iskk runs");
    let elapsed = start.elapsed();
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let criteria = json["criteria"].as_array().map_or(0, Vec::len);
    let pass = out.status.code() == Some(0)
        && json["pass"] == serde_json::Value::Bool(true)
        && criteria == 8
        && elapsed < Duration::from_secs(300);
    Line {
        id: 8,
        pass,
        detail: format!(
            "iskk corpus --json exited {:?} with {criteria} criteria in {:.2}s (budget 300s)",
            out.status.code(),
            elapsed.as_secs_f64()
        ),
    }
}

fn main() -> ExitCode {
    let lines = vec![
        criterion(1, remark_values),
        criterion(2, gram_spectra),
        criterion(3, theta_suites),
        criterion(4, splitting),
        criterion(5, ci0_audit),
        criterion(6, imprimitivity),
        criterion(7, semisimple),
        headless(),
    ];
    for l in &lines {
        println!("[{}] criterion {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.detail);
    }
    if lines.iter().all(|l| l.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
