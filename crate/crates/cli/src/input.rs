//! Turning flag values into semigroups, subsets and algebras.

use std::fmt::Display;
use std::sync::Arc;

use iskk_core::bitset::ElementSet;
use iskk_core::builders::build_spec;
use iskk_core::corpus::{parse_subset, GroupoidCoeff};
use iskk_core::galgebra::{c0x, matrix_algebra, trivial, FinDimGAlgebra};
use iskk_core::induction::FiniteGroupoid;
use iskk_core::semigroup::{FiniteInvSgp, SemigroupJson};
use iskk_core::spectrum::Spectrum;

use crate::verbs::CliError;
use crate::Opts;

pub fn bad(field: &str, e: impl Display) -> CliError {
    CliError::Input(format!("{field}: {e}"))
}

pub fn spectrum(opts: &Opts) -> Result<Arc<Spectrum>, CliError> {
    let sgp = match (&opts.builder, &opts.semigroup) {
        (Some(spec), _) => build_spec(spec).map_err(|e| bad("--builder", e))?,
        (None, Some(path)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| bad("--semigroup", format!("{}: {e}", path.display())))?;
            let json: SemigroupJson = serde_json::from_str(&text).map_err(|e| bad("--semigroup", e))?;
            FiniteInvSgp::from_json(&json).map_err(|e| bad("--semigroup", e))?
        }
        (None, None) => return Err(bad("--builder", "missing (or pass --semigroup FILE)")),
    };
    Ok(Arc::new(Spectrum::new(&Arc::new(sgp))))
}

/// The instance name used in report headers.
pub fn instance(opts: &Opts) -> String {
    match (&opts.builder, &opts.semigroup) {
        (Some(spec), _) => spec.clone(),
        (None, Some(path)) => path.display().to_string(),
        (None, None) => String::new(),
    }
}

pub fn subset(x: &Spectrum, field: &str, spec: Option<&str>) -> Result<ElementSet, CliError> {
    let spec = spec.ok_or_else(|| bad(field, "missing"))?;
    parse_subset(x.semigroup(), spec).map_err(|e| bad(field, e))
}

pub fn chain(x: &Spectrum, spec: Option<&str>) -> Result<Vec<ElementSet>, CliError> {
    let spec = spec.ok_or_else(|| bad("--chain", "missing"))?;
    spec.split(';').map(|part| parse_subset(x.semigroup(), part.trim()).map_err(|e| bad("--chain", e))).collect()
}

/// A `G`-algebra from `--coeff`, or `default` when the flag is absent.
pub fn coeff(x: &Spectrum, spec: Option<&str>, default: &str) -> Result<FinDimGAlgebra, CliError> {
    let a = coeff_unchecked(x, spec, default)?;
    if let Some(c) = a.validate().first_failure() {
        return Err(bad("--coeff", format!("{} is not a G-algebra: {}", a.label, c.name)));
    }
    Ok(a)
}

/// As [`coeff`], without checking the axioms.
pub fn coeff_unchecked(x: &Spectrum, spec: Option<&str>, default: &str) -> Result<FinDimGAlgebra, CliError> {
    let spec = spec.unwrap_or(default);
    let s = x.semigroup();
    Ok(match spec {
        "trivial" | "C" => trivial(s),
        "c0x" | "C0X" | "C0(X)" => c0x(x),
        _ => {
            if let Some(n) = spec.strip_prefix("matrix:") {
                let n: usize = n.parse().map_err(|_| bad("--coeff", format!("bad matrix size {n:?}")))?;
                matrix_algebra(s, n)
            } else {
                from_file(spec, s)?
            }
        }
    })
}

fn from_file(path: &str, s: &Arc<FiniteInvSgp>) -> Result<FinDimGAlgebra, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad("--coeff", format!("{path}: {e}")))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad("--coeff", e))?;
    let a = FinDimGAlgebra::from_json(&v).map_err(|e| bad("--coeff", e))?;
    if *a.semigroup != **s {
        return Err(bad("--coeff", "algebra is over a different semigroup"));
    }
    Ok(a)
}

/// `res` and `units` name the built-in groupoid algebras; anything else is
/// a `G`-algebra restricted to the groupoid.
pub fn groupoid_coeff(
    x: &Spectrum,
    h: &FiniteGroupoid,
    spec: Option<&str>,
    default: &str,
) -> Result<FinDimGAlgebra, CliError> {
    match spec.unwrap_or(default) {
        "res" => Ok(GroupoidCoeff::ResC.build(h)),
        "units" => Ok(GroupoidCoeff::Units.build(h)),
        other => {
            let b = coeff(x, Some(other), other)?;
            h.restrict_algebra(&b).map(|r| r.0).map_err(|e| bad("--groupoid-coeff", e))
        }
    }
}
