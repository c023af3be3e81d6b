//! Iterated `Ind∘Res` of `ℂ` along a chain `H′₁,…,H′ₙ`, decomposed into
//! `⊕ Ind_{Hₙ}^G(A)` with finite-dimensional commutative `Hₙ`-algebras `A`.
//!
//! Each level splits `Res^{H_k}` of the previous summands along their
//! `H′_k,H_{k−1}`-classes; the carrier subalgebras are the `A`s of the next
//! level.

use std::sync::Arc;

use crate::bitset::ElementSet;
use crate::galgebra::{
    direct_sum, same_semigroup_pairs, subalgebra, trivial, verify_map, CommutativeGAlgebra, FinDimGAlgebra,
};
use crate::linalg::{QMatrix, Subspace};
use crate::report::Report;
use crate::semigroup::SubSemigroup;
use crate::spectrum::Spectrum;

use super::groupoid::{assoc_groupoid, FiniteGroupoid};
use super::induced::{build_induced, induce_hom, InducedAlgebra};
use super::split::{lh_classes, res_ind_split};
use super::InductionError;

#[derive(Clone, Debug)]
pub struct Ci0Summand {
    pub groupoid: Arc<FiniteGroupoid>,
    pub algebra: Arc<FinDimGAlgebra>,
    pub points: CommutativeGAlgebra,
    pub induced: InducedAlgebra,
    /// Class indices chosen at each level after the first.
    pub path: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Ci0Decomposition {
    pub summands: Vec<Ci0Summand>,
    /// `Ind_{Hₙ}Res … Ind_{H₁}Res(ℂ)`.
    pub iterated: Arc<FinDimGAlgebra>,
    /// `⊕ Ind(A) → iterated`, block columns in summand order.
    pub psi: QMatrix,
    pub report: Report,
}

/// Columns `cols` of `m` as a matrix.
fn column_block(m: &QMatrix, cols: std::ops::Range<usize>) -> QMatrix {
    QMatrix::from_columns(&cols.map(|j| m.column(j)).collect::<Vec<_>>(), m.rows())
}

fn hstack(blocks: &[QMatrix], rows: usize) -> QMatrix {
    let cols: Vec<_> = blocks.iter().flat_map(|b| b.columns()).collect();
    QMatrix::from_columns(&cols, rows)
}

/// Coordinates of each column of `m` in `w`.
fn coords_matrix(w: &Subspace, m: &QMatrix) -> Option<QMatrix> {
    let cols = m.columns().iter().map(|c| w.coords(c)).collect::<Option<Vec<_>>>()?;
    Some(QMatrix::from_columns(&cols, w.dim()))
}

pub fn ci0_enumerate(x: &Arc<Spectrum>, chain: &[ElementSet]) -> Result<Ci0Decomposition, InductionError> {
    if chain.is_empty() || chain.len() > 3 {
        return Err(InductionError::ChainTooLong(chain.len()));
    }
    let s = x.semigroup();
    let whole = SubSemigroup::whole(s);
    let c = trivial(s);
    let mut report = Report::new("ci0-enumerate", format!("G={{{}}} n={}", s.names().join(","), chain.len()));

    let h1 = Arc::new(assoc_groupoid(x, &chain[0])?);
    let a1 = Arc::new(h1.restrict_algebra(&c)?.0);
    let ind1 = build_induced(&whole, &h1, &a1)?;
    let mut iterated = Arc::clone(&ind1.algebra);
    let mut psi = QMatrix::identity(ind1.dim());
    let mut level: Vec<(Arc<FinDimGAlgebra>, InducedAlgebra, Vec<usize>)> = vec![(a1, ind1, Vec::new())];
    let mut groupoid = h1;

    for (k, hprime) in chain.iter().enumerate().skip(1) {
        let hk = Arc::new(assoc_groupoid(x, hprime)?);
        let (res_s, res_s_incl) = hk.restrict_algebra(&iterated)?;
        let res_s_corner = Subspace::from_vectors(iterated.dim(), res_s_incl.columns());
        let next_iterated = build_induced(&whole, &hk, &Arc::new(res_s))?;
        let mut next = Vec::new();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (_, ind, path) in &level {
            let (res_i, res_i_incl) = hk.restrict_algebra(&ind.algebra)?;
            let res_i_corner = Subspace::from_vectors(ind.dim(), res_i_incl.columns());
            let psi_i = column_block(&psi, offset..offset + ind.dim());
            offset += ind.dim();
            for (ci, group) in lh_classes(ind, hprime).iter().enumerate() {
                let carrier = ind.classes_subspace(group);
                if carrier.dim() == 0 {
                    continue;
                }
                let in_res = Subspace::from_vectors(
                    res_i.dim(),
                    carrier.basis().iter().map(|v| res_i_corner.coords(v).expect("full corner")).collect::<Vec<_>>(),
                );
                let (f, f_incl) = subalgebra(&res_i, &in_res, &format!("F{}", path.len() + 1))?;
                let f = Arc::new(f);
                // Res Ψ ∘ ι : F → Res^{H_k}(iterated)
                let phi = coords_matrix(&res_s_corner, &psi_i.mul(&res_i_incl).mul(&f_incl))
                    .ok_or_else(|| InductionError::InvalidCoefficientAlgebra("Ψ leaves the H_k corner".into()))?;
                let ind_f = build_induced(&whole, &hk, &f)?;
                blocks.push(induce_hom(&ind_f, &next_iterated, &phi)?.matrix);
                let mut p = path.clone();
                p.push(ci);
                next.push((f, ind_f, p));
            }
        }
        psi = hstack(&blocks, next_iterated.dim());
        let sum = direct_sum(&next.iter().map(|(_, i, _)| i.algebra.as_ref()).collect::<Vec<_>>(), "⊕ Ind(A)");
        report.absorb(
            &format!("level {}", k + 1),
            verify_map(&sum, &next_iterated.algebra, &psi, &same_semigroup_pairs(s), true),
        );
        if k == 1 {
            let split = res_ind_split(x, &chain[0], hprime, &c)?;
            let ours: Vec<usize> = next.iter().map(|(f, _, _)| f.dim()).collect();
            let theirs: Vec<usize> =
                split.summands.iter().filter_map(|t| t.source.as_ref()).map(|a| a.dim()).filter(|&d| d > 0).collect();
            report.check(
                "level 2 agrees with res_ind_split",
                split.report.passed() && ours == theirs,
                Some(format!("{ours:?} vs {theirs:?}")),
            );
        }
        iterated = Arc::clone(&next_iterated.algebra);
        level = next;
        groupoid = hk;
    }

    let mut summands = Vec::with_capacity(level.len());
    for (a, ind, path) in level {
        let commutative = a.is_commutative();
        report.check(format!("A{path:?} commutative"), commutative, Some(a.label.clone()));
        let (points, _) = CommutativeGAlgebra::from_algebra(&a)?;
        summands.push(Ci0Summand { groupoid: Arc::clone(&groupoid), algebra: a, points, induced: ind, path });
    }
    report.dim("iterated", iterated.dim());
    report.dim("summands", summands.len());
    Ok(Ci0Decomposition { summands, iterated, psi, report })
}

/// Oracle: split the commutative iterated algebra into `G`-orbits of its
/// minimal idempotents and check that every summand image is a union of
/// orbits, the images partitioning all points.
pub fn ideal_oracle(dec: &Ci0Decomposition) -> Result<Report, InductionError> {
    let (points, idems) = CommutativeGAlgebra::from_algebra(&dec.iterated)?;
    let n = idems.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for m in &points.maps {
        for (p, q) in m.iter().enumerate() {
            if let Some(q) = q {
                let (a, b) = (find(&mut comp, p), find(&mut comp, *q));
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|p| find(&mut comp, p)).collect();
    let mut report = Report::new("ci0-ideal-oracle", dec.iterated.label.clone());
    let mut owner = vec![None; n];
    let mut offset = 0;
    for (k, sm) in dec.summands.iter().enumerate() {
        let image = column_block(&dec.psi, offset..offset + sm.induced.dim()).column_space();
        offset += sm.induced.dim();
        let inside: Vec<usize> = (0..n).filter(|&p| image.contains(&idems[p])).collect();
        report.check(
            format!("summand {k} is spanned by minimal idempotents"),
            inside.len() == image.dim(),
            Some(format!("{} idempotents for dim {}", inside.len(), image.dim())),
        );
        let closed = (0..n).all(|p| !inside.iter().any(|&q| roots[q] == roots[p]) || inside.contains(&p));
        report.check(format!("summand {k} is a union of G-orbits"), closed, None);
        for p in inside {
            if owner[p].replace(k).is_some() {
                report.check(format!("point {p} owned once"), false, None);
            }
        }
    }
    report.check("summands cover every point", owner.iter().all(Option::is_some), None);
    let mut orbits: Vec<usize> = roots.clone();
    orbits.sort_unstable();
    orbits.dedup();
    report.dim("points", n);
    report.dim("G-orbits", orbits.len());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_spec;

    fn x(spec: &str) -> Arc<Spectrum> {
        Arc::new(Spectrum::new(&Arc::new(build_spec(spec).unwrap())))
    }

    #[test]
    fn single_step_is_res_c() {
        let x = x("chain:2");
        let d = ci0_enumerate(&x, &[x.semigroup().idempotents().clone()]).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert!(d.report.passed(), "{}", d.report);
    }

    #[test]
    fn two_chain_twice() {
        let x = x("chain:2");
        let e = x.semigroup().idempotents().clone();
        let d = ci0_enumerate(&x, &[e.clone(), e]).unwrap();
        assert!(d.report.passed(), "{}", d.report);
        let total: usize = d.summands.iter().map(|s| s.induced.dim()).sum();
        assert_eq!(total, d.iterated.dim());
        assert!(ideal_oracle(&d).unwrap().passed());
    }

    #[test]
    fn i2_chains() {
        let x = x("symmetric_inverse:2");
        let s = x.semigroup();
        let one = s.element_set([s.unit()]);
        let all = s.element_set(s.elements());
        for chain in [[s.idempotents().clone(), all.clone()], [one.clone(), s.idempotents().clone()], [one, all]] {
            let d = ci0_enumerate(&x, &chain).unwrap();
            assert!(d.report.passed(), "{}", d.report);
            let r = ideal_oracle(&d).unwrap();
            assert!(r.passed(), "{r}");
        }
        let one = s.element_set([s.unit()]);
        let d = ci0_enumerate(&x, &[one, s.idempotents().clone()]).unwrap();
        assert_eq!(d.iterated.dim(), 4);
        assert_eq!(d.summands.iter().map(|m| m.induced.dim()).collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn too_long() {
        let x = x("chain:2");
        let e = x.semigroup().idempotents().clone();
        assert_eq!(
            ci0_enumerate(&x, &[e.clone(), e.clone(), e.clone(), e]).unwrap_err(),
            InductionError::ChainTooLong(4)
        );
        assert_eq!(ci0_enumerate(&x, &[]).unwrap_err(), InductionError::ChainTooLong(0));
    }
}
