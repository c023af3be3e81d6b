//! Mirroring the projection structure of a commutative `L′`-algebra `A`
//! onto an `L`-algebra `B`: `B′ = ⊕ᵢ Bᵢ^{nᵢ}` with an `L′`-action.

use std::sync::Arc;

use crate::bitset::{ElementSet, ProjectionSet};
use crate::galgebra::{direct_sum, projection_op_via, subalgebra, verify_map, with_action, FinDimGAlgebra};
use crate::linalg::{QMatrix, Subspace};
use crate::report::Report;
use crate::semigroup::SubSemigroup;
use crate::spectrum::Spectrum;

use super::InductionError;

#[derive(Clone, Debug)]
pub struct BPrime {
    pub lprime: SubSemigroup,
    /// Refinement counts `nᵢ`, one per minimal projection of `E(L̃)` seen by `A`.
    pub n: Vec<usize>,
    /// Minimal projections `qᵢ` of `E(L̃)` and `q_{i,j}` of `E(L̃′)`, on `X_G`.
    pub coarse: Vec<ProjectionSet>,
    pub fine: Vec<Vec<ProjectionSet>>,
    pub algebra: FinDimGAlgebra,
    pub report: Report,
}

pub fn build_bprime(
    x: &Arc<Spectrum>,
    l: &SubSemigroup,
    p: &ElementSet,
    a: &FinDimGAlgebra,
    b: &FinDimGAlgebra,
) -> Result<BPrime, InductionError> {
    let s = x.semigroup();
    if let Some(bad) = p.iter().find(|&e| !s.is_idempotent(e)) {
        return Err(InductionError::InvalidCoefficientAlgebra(format!("{} is not a projection", s.name(bad))));
    }
    let lset = l.members();
    let lprime = s.subsemigroup(&s.generate(&lset.union(p)))?;
    if !lprime.sub.is_e_unitary() {
        return Err(InductionError::NotEUnitary(format!(
            "L′ = {{{}}}",
            lprime.to_parent.iter().map(|&g| s.name(g)).collect::<Vec<_>>().join(",")
        )));
    }
    if *a.semigroup != *lprime.sub || *b.semigroup != *l.sub {
        return Err(InductionError::InvalidCoefficientAlgebra("A must be over L′ and B over L".into()));
    }
    if !a.is_commutative() {
        return Err(InductionError::InvalidCoefficientAlgebra("A is not commutative".into()));
    }
    let mut report = Report::new("b-prime", format!("L={{{}}} P={{{}}}", names(x, &lset), names(x, p)));

    let alpha = |q: &ProjectionSet| projection_op_via(a, &lprime, x, q).expect("atoms are saturated");
    let beta = |q: &ProjectionSet| projection_op_via(b, l, x, q).expect("atoms are saturated");
    let fine_atoms = x.atoms(&lprime.members().intersection(s.idempotents()));
    let coarse_atoms = x.atoms(&lset.intersection(s.idempotents()));
    let mut coarse = Vec::new();
    let mut fine = Vec::new();
    for q in &coarse_atoms {
        let inside: Vec<ProjectionSet> =
            fine_atoms.iter().filter(|f| f.is_subset(q) && !alpha(f).is_zero()).cloned().collect();
        if !inside.is_empty() {
            coarse.push(q.clone());
            fine.push(inside);
        }
    }
    let n: Vec<usize> = fine.iter().map(Vec::len).collect();
    let mut unseen = coarse_atoms.iter().filter(|q| !coarse.contains(q));
    report.check_result(
        "α(E(L̃)) faithful",
        unseen.next().map_or(Ok(()), |q| Err(format!("α vanishes on {:?}", x.projection_json(q)))),
    );

    let beta_q: Vec<QMatrix> = coarse.iter().map(beta).collect();
    let sum = beta_q.iter().fold(QMatrix::zeros(b.dim(), b.dim()), |acc, m| acc.add(m));
    report.check("B ≅ ⊕ Bᵢ", sum.is_identity(), Some("the β(qᵢ) do not sum to the identity".into()));

    // β(qᵢ)B as algebras without an action, one copy per refinement
    let bare = with_action(b, &b.semigroup, vec![QMatrix::identity(b.dim()); b.semigroup.len()], &b.label);
    let spaces: Vec<Subspace> = beta_q.iter().map(QMatrix::column_space).collect();
    let pieces: Vec<FinDimGAlgebra> = spaces
        .iter()
        .enumerate()
        .map(|(i, w)| subalgebra(&bare, w, &format!("B{}", i + 1)).map(|r| r.0))
        .collect::<Result<_, _>>()?;
    let slots: Vec<(usize, usize)> = n.iter().enumerate().flat_map(|(i, &ni)| (0..ni).map(move |j| (i, j))).collect();
    let mut offsets = Vec::with_capacity(slots.len());
    let mut dim = 0;
    for &(i, _) in &slots {
        offsets.push(dim);
        dim += spaces[i].dim();
    }
    let slot_of = |q: &ProjectionSet| -> Option<usize> { slots.iter().position(|&(i, j)| fine[i][j] == *q) };

    let mut action = Vec::with_capacity(lprime.sub.len());
    let mut well_defined = Ok(());
    for &lp in &lprime.to_parent {
        let mut op: Option<QMatrix> = None;
        for lg in lset.iter() {
            for e in lprime.members().intersection(s.idempotents()).iter() {
                if s.mul(lg, e) != lp || !s.leq(e, s.source(lg)) {
                    continue;
                }
                let pe = x.proj(e).expect("idempotent");
                let mut m = QMatrix::zeros(dim, dim);
                for (k, &(i0, j0)) in slots.iter().enumerate() {
                    let q = &fine[i0][j0];
                    if !q.is_subset(&pe) {
                        continue;
                    }
                    let Some(k1) = slot_of(&x.act_proj(lg, q)) else { continue };
                    let i1 = slots[k1].0;
                    let block = spaces[i0]
                        .restrict_map(&b.action[l.local_index(lg).expect("in L")], &spaces[i1])
                        .ok_or_else(|| {
                            InductionError::InvalidCoefficientAlgebra(format!("β({}) leaves B{}", s.name(lg), i1 + 1))
                        })?;
                    for r in 0..block.rows() {
                        for c in 0..block.cols() {
                            m.set(offsets[k1] + r, offsets[k] + c, block.get(r, c).clone());
                        }
                    }
                }
                match &op {
                    Some(prev) if *prev != m => {
                        well_defined = Err(format!("{} has two presentations l·p with different actions", s.name(lp)));
                    }
                    Some(_) => {}
                    None => op = Some(m),
                }
            }
        }
        action.push(op.ok_or_else(|| InductionError::NotEUnitary(format!("{} has no presentation l·p", s.name(lp))))?);
    }
    report.check_result("β′ well defined", well_defined);

    let copies: Vec<&FinDimGAlgebra> = slots.iter().map(|&(i, _)| &pieces[i]).collect();
    let algebra = if copies.is_empty() {
        crate::galgebra::zero_algebra(&lprime.sub)
    } else {
        with_action(&direct_sum(&copies, "B′"), &lprime.sub, action, &format!("{}′", b.label))
    };
    report.absorb("B′", algebra.validate());

    if n.iter().all(|&ni| ni == 1) && report.passed() {
        // without refinement, B → ⊕ Bᵢ is an L-equivariant isomorphism
        let cols: Vec<Vec<_>> = (0..b.dim())
            .map(|k| {
                let v = b.basis_vec(k);
                let mut out = Vec::with_capacity(dim);
                for (i, w) in spaces.iter().enumerate() {
                    out.extend(w.coords(&beta_q[i].mul_vec(&v)).expect("image"));
                }
                out
            })
            .collect();
        let iso = QMatrix::from_columns(&cols, dim);
        let res = with_action(
            &algebra,
            &l.sub,
            l.to_parent.iter().map(|&g| algebra.action[lprime.local_index(g).expect("L ⊆ L′")].clone()).collect(),
            "Res B′",
        );
        let pairs: Vec<(usize, usize)> = l.sub.elements().map(|g| (g, g)).collect();
        report.absorb("β′ extends β", verify_map(b, &res, &iso, &pairs, true));
    }
    report.dim("B", b.dim());
    report.dim("B′", algebra.dim());
    report.dim("m", n.len());
    Ok(BPrime { lprime, n, coarse, fine, algebra, report })
}

fn names(x: &Spectrum, set: &ElementSet) -> String {
    set.iter().map(|a| x.semigroup().name(a)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_spec;
    use crate::galgebra::{c0x, restrict, trivial};

    fn x(spec: &str) -> Arc<Spectrum> {
        Arc::new(Spectrum::new(&Arc::new(build_spec(spec).unwrap())))
    }

    fn sub(x: &Spectrum, names: &[&str]) -> SubSemigroup {
        let s = x.semigroup();
        s.subsemigroup(&s.element_set(names.iter().map(|n| s.index_of(n).unwrap()))).unwrap()
    }

    #[test]
    fn refinement_on_three_chain() {
        let x = x("chain:3");
        let s = x.semigroup();
        let l = sub(&x, &["1", "e1"]);
        let p = s.element_set([s.index_of("e2").unwrap()]);
        let a = c0x(&x);
        let b = restrict(&c0x(&x), &l);
        let bp = build_bprime(&x, &l, &p, &a, &b).unwrap();
        assert!(bp.report.passed(), "{}", bp.report);
        let mut n = bp.n.clone();
        n.sort_unstable();
        assert_eq!(n, vec![1, 2]);
        assert_eq!(bp.algebra.dim(), 5);
    }

    #[test]
    fn no_refinement_extends_beta() {
        let x = x("chain:3");
        let s = x.semigroup();
        let l = sub(&x, &["1", "e1", "e2"]);
        let p = s.element_set([s.index_of("e1").unwrap()]);
        let b = restrict(&c0x(&x), &l);
        let bp = build_bprime(&x, &l, &p, &c0x(&x), &b).unwrap();
        assert!(bp.report.passed(), "{}", bp.report);
        assert!(bp.n.iter().all(|&k| k == 1));
        assert!(bp.report.checks.iter().any(|c| c.name.starts_with("β′ extends β")));
    }

    #[test]
    fn trivial_a_gives_b() {
        let x = x("chain:2");
        let l = sub(&x, &["1"]);
        let b = restrict(&c0x(&x), &l);
        let bp = build_bprime(&x, &l, &ElementSet::empty(x.semigroup().len()), &trivial(&l.sub), &b).unwrap();
        assert!(bp.report.passed(), "{}", bp.report);
        assert_eq!(bp.algebra.dim(), b.dim());
    }

    #[test]
    fn rejects_non_e_unitary() {
        let x = x("symmetric_inverse:2");
        let s = x.semigroup();
        let l = s.subsemigroup(&s.element_set(s.elements())).unwrap();
        let b = restrict(&c0x(&x), &l);
        let err = build_bprime(&x, &l, &ElementSet::empty(s.len()), &c0x(&x), &b).unwrap_err();
        assert!(matches!(err, InductionError::NotEUnitary(_)));
    }
}
