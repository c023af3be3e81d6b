use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use iskk_core::corpus::run_all;
use iskk_core::crossed::{crossed as crossed_product, numeric_blocks, semisimple_quotient, CrossedError, CrossedKind};
use iskk_core::galgebra::{c0x, restrict, FinDimGAlgebra};
use iskk_core::induction::{
    assoc_groupoid, build_bprime, build_induced, ci0_enumerate, compute_gh, ideal_oracle, res_ind_split,
    technical_split, theta_res_ind, theta_res_ind_tensor, FiniteGroupoid, InductionError,
};
use iskk_core::ktheory::{
    k0 as k0_group, verify_green_julg_diagram, verify_imprimitivity, verify_remark_counterexamples, KtheoryError,
};
use iskk_core::l2::{check_independence, check_psd, gram as gram_matrix};
use iskk_core::report::Report;
use iskk_core::semigroup::SubSemigroup;
use iskk_core::spectrum::Spectrum;

use crate::input::{self, bad};
use clap::ValueEnum;

use crate::{Opts, Suite};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; the message starts with the offending flag.
    Input(String),
}

pub struct Output {
    pub json: Value,
    pub text: String,
    pub pass: bool,
}

impl Output {
    fn listing(json: Value, text: String) -> Self {
        Output { json, text, pass: true }
    }

    fn report(report: Report) -> Self {
        Output { json: report.to_json(), text: report.to_string(), pass: report.passed() }
    }
}

/// Construction errors caused by the chosen inputs are reported against
/// `field`; anything else is a failed verification.
fn induction_error(field: &str, e: InductionError, report: &mut Report) -> Result<(), CliError> {
    match e {
        InductionError::NotEquivariant(_) => {
            report.check(e.to_string(), false, None);
            Ok(())
        }
        InductionError::InvalidCoefficientAlgebra(_) | InductionError::Algebra(_) => Err(bad("--coeff", e)),
        _ => Err(bad(field, e)),
    }
}

fn ktheory_error(field: &str, e: KtheoryError, report: &mut Report) -> Result<(), CliError> {
    match e {
        KtheoryError::Induction(e) => induction_error(field, e, report),
        KtheoryError::Crossed(CrossedError::InvalidAction(_)) => Err(bad("--coeff", e)),
        KtheoryError::HypothesesNotMet(_) => Err(bad(field, e)),
        _ => {
            report.check(e.to_string(), false, None);
            Ok(())
        }
    }
}

fn groupoid(x: &Arc<Spectrum>, opts: &Opts) -> Result<Arc<FiniteGroupoid>, CliError> {
    let hp = input::subset(x, "--subsemigroup", opts.subsemigroup.as_deref())?;
    assoc_groupoid(x, &hp).map(Arc::new).map_err(|e| bad("--subsemigroup", e))
}

fn names(x: &Spectrum, it: impl IntoIterator<Item = usize>) -> Vec<String> {
    it.into_iter().map(|g| x.semigroup().name(g).to_string()).collect()
}

pub fn validate(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let s = x.semigroup();
    let mut json = json!({
        "elements": s.names(),
        "unit": s.name(s.unit()),
        "zero": s.zero().map(|z| s.name(z)),
        "idempotents": s.idempotents().count(),
        "characters": x.len(),
        "group": s.is_group(),
        "semilattice": s.is_semilattice(),
        "commutative": s.is_commutative(),
        "e_unitary": s.is_e_unitary(),
    });
    let mut text = String::new();
    writeln!(text, "semigroup   {}", input::instance(opts)).unwrap();
    writeln!(text, "order       {}", s.len()).unwrap();
    writeln!(text, "unit        {}", s.name(s.unit())).unwrap();
    writeln!(text, "zero        {}", s.zero().map_or("-", |z| s.name(z))).unwrap();
    writeln!(text, "idempotents {}", s.idempotents().count()).unwrap();
    writeln!(text, "characters  {}", x.len()).unwrap();
    for (k, v) in [
        ("group", s.is_group()),
        ("semilattice", s.is_semilattice()),
        ("commutative", s.is_commutative()),
        ("e-unitary", s.is_e_unitary()),
    ] {
        writeln!(text, "{k:<11} {v}").unwrap();
    }
    let mut pass = true;
    if opts.coeff.is_some() {
        let a = input::coeff_unchecked(&x, opts.coeff.as_deref(), "trivial")?;
        let r = a.validate();
        pass = r.passed();
        json["coeff"] = r.to_json();
        text.push_str(&r.to_string());
    }
    Ok(Output { json, text, pass })
}

pub fn idempotents(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let list = names(&x, x.semigroup().idempotents().iter());
    let text = list.join("\n");
    Ok(Output::listing(json!({ "idempotents": list }), text))
}

pub fn order(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let s = x.semigroup();
    let pairs: Vec<(usize, usize)> =
        s.elements().flat_map(|g| s.elements().map(move |h| (g, h))).filter(|&(g, h)| g != h && s.leq(g, h)).collect();
    let text = pairs.iter().map(|&(g, h)| format!("{} ≤ {}", s.name(g), s.name(h))).collect::<Vec<_>>().join("\n");
    let json = json!({ "order": pairs.iter().map(|&(g, h)| [s.name(g), s.name(h)]).collect::<Vec<_>>() });
    Ok(Output::listing(json, text))
}

pub fn characters(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let s = x.semigroup();
    let mut rows = Vec::new();
    let mut text = String::new();
    for chi in 0..x.len() {
        let filter = names(&x, s.idempotents().iter().filter(|&e| x.value(chi, e)));
        writeln!(text, "{:<8} {{{}}}", x.character_name(chi), filter.join(",")).unwrap();
        rows.push(json!({
            "name": x.character_name(chi),
            "generator": s.name(x.generator(chi)),
            "filter": filter,
        }));
    }
    Ok(Output::listing(json!({ "characters": rows }), text))
}

pub fn econt(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let s = x.semigroup();
    let mut rows = Vec::new();
    let mut text = String::new();
    for g in s.elements() {
        let (sup, witness) = x.e_cont_sup(g);
        let support = x.projection_json(&sup.support());
        let witness = names(&x, witness.iter());
        writeln!(text, "{:<8} below: {{{}}}  support: {}", s.name(g), witness.join(","), support).unwrap();
        rows.push(json!({ "element": s.name(g), "witnesses": witness, "sup": x.alg_json(&sup) }));
    }
    Ok(Output::listing(json!({ "econt": rows }), text))
}

pub fn gram(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let gm = gram_matrix(&x);
    let json = gm.to_json(&x);
    let mut text = String::new();
    let basis = &json["basis"];
    for (i, row) in json["entries"].as_array().expect("rows").iter().enumerate() {
        for (j, entry) in row.as_array().expect("entries").iter().enumerate() {
            let values: Vec<String> = entry
                .as_object()
                .expect("character map")
                .iter()
                .filter(|(_, v)| v.as_str() != Some("0"))
                .map(|(chi, v)| format!("{chi}:{}", v.as_str().unwrap_or_default()))
                .collect();
            writeln!(
                text,
                "⟨φ[{}], φ[{}]⟩ = {{{}}}",
                basis[i].as_str().unwrap_or_default(),
                basis[j].as_str().unwrap_or_default(),
                values.join(" ")
            )
            .unwrap();
        }
    }
    Ok(Output::listing(json, text))
}

pub fn psd(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let mut report = Report::new("gram", input::instance(opts));
    report.absorb("psd", check_psd(&x, &gram_matrix(&x)));
    report.absorb("independence", check_independence(&x));
    Ok(Output::report(report))
}

pub fn induce(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let h = groupoid(&x, opts)?;
    let b = input::coeff(&x, opts.coeff.as_deref(), "trivial")?;
    let (resb, _) = h.restrict_algebra(&b).map_err(|e| bad("--coeff", e))?;
    let ind = build_induced(&SubSemigroup::whole(x.semigroup()), &h, &Arc::new(resb)).map_err(|e| bad("--coeff", e))?;
    let mut report = ind.report();
    report.absorb("Ind", ind.algebra.validate());
    let mut out = Output::report(report);
    out.json = json!({ "report": out.json, "algebra": ind.algebra.to_json() });
    Ok(out)
}

fn crossed_input(
    x: &Arc<Spectrum>,
    opts: &Opts,
) -> Result<(FinDimGAlgebra, Option<Arc<FiniteGroupoid>>, &'static str), CliError> {
    match opts.crossed.as_deref().unwrap_or("universal") {
        "universal" => Ok((input::coeff(x, opts.coeff.as_deref(), "trivial")?, None, "universal")),
        "sieben" => Ok((input::coeff(x, opts.coeff.as_deref(), "trivial")?, None, "sieben")),
        "groupoid" => {
            let h = groupoid(x, opts)?;
            let spec = opts.groupoid_coeff.as_deref().or(opts.coeff.as_deref());
            let f = input::groupoid_coeff(x, &h, spec, "res")?;
            Ok((f, Some(h), "groupoid"))
        }
        other => Err(bad("--crossed", format!("unknown kind {other:?}; expected universal, sieben or groupoid"))),
    }
}

fn kind<'a>(name: &str, h: Option<&'a FiniteGroupoid>) -> CrossedKind<'a> {
    match (name, h) {
        ("sieben", _) => CrossedKind::Sieben,
        (_, Some(h)) => CrossedKind::Groupoid(h),
        _ => CrossedKind::Universal,
    }
}

pub fn crossed(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let (a, h, name) = crossed_input(&x, opts)?;
    let cp = crossed_product(&a, kind(name, h.as_deref())).map_err(|e| bad("--coeff", e))?;
    let dec = semisimple_quotient(&cp.algebra);
    let mut report = Report::new("crossed", format!("{} {} {name}", input::instance(opts), a.label));
    report.absorb("product", cp.algebra.validate());
    let mut decomposition = dec.to_json();
    match dec.block_dims() {
        Some(dims) => decomposition["block_dims"] = json!(dims),
        None => match numeric_blocks(&dec, opts.seed) {
            Ok(nb) => {
                report.check(
                    "numeric block count agrees with the center",
                    nb.block_dims.len() == dec.blocks(),
                    Some(format!("residual {:.1e}", nb.residual)),
                );
                decomposition["block_dims"] = json!(nb.block_dims);
            }
            Err(e) => {
                report.check(e.to_string(), false, None);
            }
        },
    }
    report.dim("dim", cp.dim());
    report.dim("universal dim", cp.universal_dim);
    report.dim("radical", dec.radical_dim);
    report.dim("blocks", dec.blocks());
    let mut text = report.to_string();
    if let Some(dims) = decomposition.get("block_dims") {
        writeln!(text, "  block sizes {dims}").unwrap();
    }
    let json = json!({
        "kind": name,
        "coeff": a.label,
        "dim": cp.dim(),
        "universal_dim": cp.universal_dim,
        "decomposition": decomposition,
        "report": report.to_json(),
    });
    Ok(Output { json, text, pass: report.passed() })
}

pub fn k0(opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let (algebra, label) = if opts.crossed.is_some() {
        let (a, h, name) = crossed_input(&x, opts)?;
        let cp = crossed_product(&a, kind(name, h.as_deref())).map_err(|e| bad("--coeff", e))?;
        (cp.algebra, format!("{} ⋊ {name}", a.label))
    } else {
        let a = input::coeff(&x, opts.coeff.as_deref(), "trivial")?;
        let label = a.label.clone();
        (a, label)
    };
    let mut report = Report::new("k0", format!("{} {label}", input::instance(opts)));
    let group = match k0_group(&algebra, opts.seed) {
        Ok(g) => Some(g),
        Err(e) => {
            ktheory_error("--coeff", e, &mut report)?;
            None
        }
    };
    let Some(group) = group else {
        return Ok(Output::report(report));
    };
    let text =
        format!("K0({label}) = Z^{}\nblock sizes {:?}\nmethod {}\n", group.rank, group.block_dims, group.method.name());
    let mut json = group.to_json();
    json["algebra"] = json!(label);
    json["dim"] = json!(algebra.dim());
    Ok(Output::listing(json, text))
}

pub fn verify(suite: Suite, opts: &Opts) -> Result<Output, CliError> {
    let x = input::spectrum(opts)?;
    let s = x.semigroup();
    let sub = |field: &str, spec: Option<&str>| input::subset(&x, field, spec);
    let mut report = Report::new(suite.to_possible_value().expect("named").get_name(), input::instance(opts));
    match suite {
        Suite::ThetaResInd => {
            let hp = sub("--subsemigroup", opts.subsemigroup.as_deref())?;
            let b = input::coeff(&x, opts.coeff.as_deref(), "c0x")?;
            match theta_res_ind(&x, &hp, &b) {
                Ok(r) => report = r,
                Err(e) => induction_error("--subsemigroup", e, &mut report)?,
            }
        }
        Suite::ThetaTensor => {
            let h = groupoid(&x, opts)?;
            let a = Arc::new(input::groupoid_coeff(&x, &h, opts.groupoid_coeff.as_deref(), "units")?);
            let b = input::coeff(&x, opts.coeff.as_deref(), "c0x")?;
            match theta_res_ind_tensor(&h, &a, &b) {
                Ok(r) => report = r,
                Err(e) => induction_error("--subsemigroup", e, &mut report)?,
            }
        }
        Suite::TechnicalSplit => {
            let up = sub("--subsemigroup", opts.subsemigroup.as_deref())?;
            let l = sub("--l", opts.l.as_deref())?;
            let d = input::coeff(&x, opts.coeff.as_deref(), "trivial")?;
            let u = assoc_groupoid(&x, &up).map_err(|e| bad("--subsemigroup", e))?;
            let gh = compute_gh(&x, &SubSemigroup::whole(s), &u).map_err(|e| bad("--subsemigroup", e))?;
            report = Report::new(
                "technical-split",
                format!("{} U′={{{}}}", input::instance(opts), names(&x, up.iter()).join(",")),
            );
            for c in 0..gh.num_classes() {
                let g = gh.rep(c);
                match technical_split(&x, &up, &l, g, &d) {
                    Ok(t) => report.absorb(&gh.name(&x, gh.reps[c]), t.report),
                    Err(e) => induction_error("--l", e, &mut report)?,
                }
            }
            report.dim("representatives", gh.num_classes());
        }
        Suite::ResIndSplit => {
            let hp = sub("--subsemigroup", opts.subsemigroup.as_deref())?;
            let l = sub("--l", opts.l.as_deref())?;
            let d = input::coeff(&x, opts.coeff.as_deref(), "trivial")?;
            match res_ind_split(&x, &hp, &l, &d) {
                Ok(r) => report = r.report,
                Err(e) => induction_error("--subsemigroup", e, &mut report)?,
            }
        }
        Suite::Ci0 => {
            let chain = input::chain(&x, opts.chain.as_deref())?;
            match ci0_enumerate(&x, &chain) {
                Ok(dec) => {
                    report = dec.report.clone();
                    match ideal_oracle(&dec) {
                        Ok(r) => report.absorb("oracle", r),
                        Err(e) => induction_error("--chain", e, &mut report)?,
                    }
                }
                Err(e) => induction_error("--chain", e, &mut report)?,
            }
        }
        Suite::Bprime => {
            let lset = sub("--subsemigroup", opts.subsemigroup.as_deref())?;
            let p = match opts.projections.as_deref() {
                Some(spec) => sub("--projections", Some(spec))?,
                None => s.element_set([]),
            };
            let l = s.subsemigroup(&lset).map_err(|e| bad("--subsemigroup", e))?;
            let lprime = s.subsemigroup(&s.generate(&lset.union(&p))).map_err(|e| bad("--projections", e))?;
            let a = restrict(&c0x(&x), &lprime);
            let b = restrict(&input::coeff(&x, opts.coeff.as_deref(), "c0x")?, &l);
            match build_bprime(&x, &l, &p, &a, &b) {
                Ok(bp) => report = bp.report,
                Err(e) => induction_error("--projections", e, &mut report)?,
            }
        }
        Suite::Imprimitivity => {
            let h = groupoid(&x, opts)?;
            let f = Arc::new(input::groupoid_coeff(&x, &h, opts.groupoid_coeff.as_deref(), "res")?);
            match verify_imprimitivity(&x, &h, &f, opts.seed) {
                Ok(r) => report = r,
                Err(e) => ktheory_error("--subsemigroup", e, &mut report)?,
            }
        }
        Suite::GreenJulg => {
            let hp = sub("--subsemigroup", opts.subsemigroup.as_deref())?;
            let parts = opts
                .coeff
                .as_deref()
                .unwrap_or("c0x")
                .split('+')
                .map(|spec| input::coeff(&x, Some(spec), spec))
                .collect::<Result<Vec<_>, _>>()?;
            match verify_green_julg_diagram(&x, &hp, &parts, opts.seed) {
                Ok(r) => report = r,
                Err(e) => ktheory_error("--subsemigroup", e, &mut report)?,
            }
        }
        Suite::Remark => match verify_remark_counterexamples(&x, opts.seed) {
            Ok(r) => report = r,
            Err(e) => ktheory_error("--builder", e, &mut report)?,
        },
    }
    Ok(Output::report(report))
}

pub fn corpus(opts: &Opts) -> Output {
    let outcomes = run_all(opts.seed);
    let pass = outcomes.iter().all(|o| o.pass);
    let text = outcomes.iter().map(|o| o.line()).collect::<Vec<_>>().join("\n");
    if opts.json {
        for o in &outcomes {
            eprintln!("{}", o.line());
        }
    }
    let json = json!({ "pass": pass, "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>() });
    Output { json, text, pass }
}
