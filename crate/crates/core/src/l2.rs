//! The compatible `ℓ̂²(G)` module over `C₀(X)`.
//!
//! Under the `1₀ = 0` convention `φ₀` is a null vector, so the basis is
//! `G` minus a declared zero.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::linalg::{ldlt_psd, PsdOutcome, QMatrix, Q};
use crate::report::Report;
use crate::spectrum::{AlgStarElement, Spectrum};

/// A finite combination `Σ λ_g φ_g`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct L2Vector(pub BTreeMap<usize, Q>);

#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub basis: Vec<usize>,
    pub entries: Vec<Vec<AlgStarElement>>,
}

pub fn basis(x: &Spectrum) -> Vec<usize> {
    let s = x.semigroup();
    s.elements().filter(|&g| !s.is_zero(g)).collect()
}

/// `⟨φ_g, φ_h⟩ = ⋁{1_e : e ∈ E, eg = eh, e ≤ gg*hh*}`.
pub fn phi_inner(x: &Spectrum, g: usize, h: usize) -> AlgStarElement {
    let s = x.semigroup();
    let bound = s.mul(s.range(g), s.range(h));
    let support = s
        .idempotents()
        .iter()
        .filter(|&e| s.leq(e, bound) && s.mul(e, g) == s.mul(e, h))
        .filter_map(|e| x.proj(e).ok())
        .fold(x.empty(), |acc, p| acc.union(&p));
    x.indicator(&support)
}

pub fn gram(x: &Spectrum) -> GramMatrix {
    let basis = basis(x);
    let entries = basis.iter().map(|&g| basis.iter().map(|&h| phi_inner(x, g, h)).collect()).collect();
    GramMatrix { basis, entries }
}

impl GramMatrix {
    /// The rational matrix `gm(χ)`.
    pub fn at(&self, chi: usize) -> QMatrix {
        let n = self.basis.len();
        let rows = (0..n).map(|i| (0..n).map(|j| self.entries[i][j].at(chi).clone()).collect()).collect();
        QMatrix::from_rows(rows, n)
    }

    pub fn to_json(&self, x: &Spectrum) -> Value {
        let s = x.semigroup();
        json!({
            "basis": self.basis.iter().map(|&g| s.name(g)).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|row| row.iter().map(|a| x.alg_json(a)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// `Σ λ_h φ_h ↦ Σ λ_h φ_{gh}`, dropping terms that land on a declared zero.
pub fn l2_act(x: &Spectrum, g: usize, v: &L2Vector) -> L2Vector {
    let s = x.semigroup();
    let mut out: BTreeMap<usize, Q> = BTreeMap::new();
    for (&h, c) in &v.0 {
        let gh = s.mul(g, h);
        if s.is_zero(gh) {
            continue;
        }
        *out.entry(gh).or_insert_with(Q::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    L2Vector(out)
}

impl L2Vector {
    pub fn phi(g: usize) -> Self {
        L2Vector(BTreeMap::from([(g, Q::one())]))
    }
}

pub fn check_psd(x: &Spectrum, gm: &GramMatrix) -> Report {
    let mut report = Report::new("gram-psd", x.semigroup().names().join(","));
    for chi in 0..x.len() {
        let outcome = ldlt_psd(&gm.at(chi));
        let witness = match &outcome {
            PsdOutcome::NotPsd { step, index, value } => {
                Some(format!("pivot step {step} at {} has value {value}", x.semigroup().name(gm.basis[*index])))
            }
            PsdOutcome::Psd { .. } => None,
        };
        report.check(format!("psd at χ_{}", x.character_name(chi)), outcome.is_psd(), witness);
    }
    report.dim("characters", x.len());
    report.dim("basis", gm.basis.len());
    report
}

pub fn check_independence(x: &Spectrum) -> Report {
    let gm = gram(x);
    let stacked = QMatrix::vstack(&(0..x.len()).map(|chi| gm.at(chi)).collect::<Vec<_>>());
    let rank = stacked.rank();
    let mut report = Report::new("phi-independence", x.semigroup().names().join(","));
    report.check(
        "stacked gram has full column rank",
        rank == gm.basis.len(),
        Some(format!("rank {rank} < {}", gm.basis.len())),
    );
    report.dim("rank", rank);
    report.dim("basis", gm.basis.len());
    if let Some(z) = x.semigroup().zero() {
        report.note(format!("φ_{} is null and excluded from the basis", x.semigroup().name(z)));
    }
    report
}

pub fn check_module_axioms(x: &Spectrum) -> Report {
    let s = x.semigroup();
    let mut report = Report::new("l2-module-axioms", s.names().join(","));
    let n = s.len();
    let inner: Vec<Vec<AlgStarElement>> = (0..n).map(|g| (0..n).map(|h| phi_inner(x, g, h)).collect()).collect();

    let symmetry = (0..n)
        .flat_map(|g| (0..n).map(move |h| (g, h)))
        .find(|&(g, h)| inner[g][h] != inner[h][g])
        .map(|(g, h)| format!("⟨φ_{0},φ_{1}⟩ ≠ ⟨φ_{1},φ_{0}⟩", s.name(g), s.name(h)));
    report.check_result("symmetry", symmetry.map_or(Ok(()), Err));

    let mut linearity = Ok(());
    'outer: for f in s.idempotents().iter() {
        let pf = x.indicator(&x.proj(f).expect("idempotent"));
        for g in 0..n {
            for h in 0..n {
                if inner[g][s.mul(f, h)] != inner[g][h].mul(&pf) {
                    linearity = Err(format!("f={}, g={}, h={}", s.name(f), s.name(g), s.name(h)));
                    break 'outer;
                }
            }
        }
    }
    report.check_result("right C0(X)-linearity", linearity);

    let mut equivariance = Ok(());
    'outer2: for j in 0..n {
        for g in 0..n {
            for h in 0..n {
                if x.act_alg(j, &inner[g][h]) != inner[s.mul(j, g)][s.mul(j, h)] {
                    equivariance = Err(format!("j={}, g={}, h={}", s.name(j), s.name(g), s.name(h)));
                    break 'outer2;
                }
            }
        }
    }
    report.check_result("equivariance", equivariance);
    report.dim("triples", n * n * n);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build;
    use std::sync::Arc;

    fn x(kind: &str, n: &[usize]) -> Spectrum {
        Spectrum::new(&Arc::new(build(kind, n).unwrap()))
    }

    #[test]
    fn two_chain_gram() {
        let x = x("chain", &[2]);
        let gm = gram(&x);
        let chi1 = x.character_of(1).unwrap();
        let chi0 = x.character_of(0).unwrap();
        assert_eq!(gm.at(chi1), QMatrix::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(gm.at(chi0), QMatrix::from_i64(&[&[1, 0], &[0, 0]]));
        assert!(check_psd(&x, &gm).passed());
        assert!(check_independence(&x).passed());
    }

    #[test]
    fn group_gram_is_identity() {
        let x = x("cyclic", &[2]);
        assert!(gram(&x).at(0).is_identity());
        let v = l2_act(&x, 1, &L2Vector::phi(1));
        assert_eq!(v, L2Vector::phi(0));
    }

    #[test]
    fn zero_is_null() {
        let x = x("brandt_unital", &[2]);
        let z = x.semigroup().zero().unwrap();
        assert!(phi_inner(&x, z, z).support().is_empty());
        assert_eq!(gram(&x).basis.len(), 5);
        assert_eq!(l2_act(&x, z, &L2Vector::phi(0)), L2Vector::default());
    }

    #[test]
    fn module_axioms_on_i2() {
        let x = x("symmetric_inverse", &[2]);
        let r = check_module_axioms(&x);
        assert!(r.passed(), "{r}");
        assert_eq!(r.dims["triples"], 343);
    }
}
