//! Splitting `Res_L Ind_H Res_H(D)` along `L,H`-classes of `G_H`.

use std::sync::Arc;

use crate::bitset::ElementSet;
use crate::galgebra::{direct_sum, restrict, subalgebra, verify_map, with_action, FinDimGAlgebra};
use crate::linalg::{QMatrix, Subspace};
use crate::report::Report;
use crate::semigroup::SubSemigroup;
use crate::spectrum::{ExtendedElement, Spectrum};

use super::groupoid::{assoc_groupoid, FiniteGroupoid};
use super::induced::{build_induced, InducedAlgebra};
use super::InductionError;

#[derive(Clone, Debug)]
pub struct TechnicalSplit {
    pub g: ExtendedElement,
    pub m: Vec<ExtendedElement>,
    pub lprime: ElementSet,
    /// Classes of `Ind_U^G` carrying `LgU ∩ G_U`.
    pub classes: Vec<usize>,
    /// `Ind_M^{L′} Res^M(D)` restricted to `L`.
    pub source: Option<FinDimGAlgebra>,
    /// The carrier subalgebra of `Res_L Ind_U^G Res^U(D)`.
    pub target: FinDimGAlgebra,
    /// Inclusion of the target into `Ind_U^G Res^U(D)`.
    pub target_inclusion: QMatrix,
    pub theta: QMatrix,
    pub report: Report,
}

/// `θ(f)(lgu) = u*g*(f(lgg*))` for `g ∈ G_U`.
pub fn technical_split(
    x: &Arc<Spectrum>,
    uprime: &ElementSet,
    l: &ElementSet,
    g: &ExtendedElement,
    d: &FinDimGAlgebra,
) -> Result<TechnicalSplit, InductionError> {
    let u = Arc::new(assoc_groupoid(x, uprime)?);
    let (resd, _) = u.restrict_algebra(d)?;
    let ind_u = build_induced(&SubSemigroup::whole(x.semigroup()), &u, &Arc::new(resd))?;
    split_at(&ind_u, uprime, l, g, d)
}

pub(crate) fn split_at(
    ind_u: &InducedAlgebra,
    uprime: &ElementSet,
    l: &ElementSet,
    g: &ExtendedElement,
    d: &FinDimGAlgebra,
) -> Result<TechnicalSplit, InductionError> {
    let u = &ind_u.groupoid;
    let x = &u.x;
    let s = x.semigroup();
    super::closed_subset(x, l)?;
    let g_idx = ind_u.gh.index_of(g).ok_or_else(|| InductionError::NotInGH(format!("{g:?}")))?;
    let q = x.ext_range(g);
    let qq = x.ext_projection(&q);
    let g_star = x.tilde_star(g);

    let mut report = Report::new(
        "technical-split",
        format!("g={} L={{{}}}", ind_u.gh.name(x, g_idx), l.iter().map(|a| s.name(a)).collect::<Vec<_>>().join(",")),
    );

    let conj: Vec<ExtendedElement> = u.arrows.iter().map(|t| x.tilde_mul(&x.tilde_mul(g, t), &g_star)).collect();
    let mut m: Vec<ExtendedElement> = l
        .iter()
        .map(|a| x.tilde_mul(&x.tilde_mul(&qq, &x.ext_of(a)), &qq))
        .filter(|e| !x.is_ext_zero(e) && conj.contains(e))
        .collect();
    m.sort();
    m.dedup();

    let g0 = g.g;
    let mut gens = l.clone();
    for e in uprime.intersection(s.idempotents()).iter() {
        gens.insert(s.conjugate(g0, e));
    }
    let lprime = s.generate(&gens);

    // classes of lg with l*l ≥ gg*
    let mut carriers: Vec<(usize, usize)> = Vec::new();
    for a in l.iter() {
        if let Some(y) = ind_u.gh.act_left(x, a, g_idx) {
            carriers.push((a, y));
        }
    }
    let mut classes: Vec<usize> = carriers.iter().map(|&(_, y)| ind_u.gh.class_of[y]).collect();
    classes.sort_unstable();
    classes.dedup();
    let carrier_space = ind_u.classes_subspace(&classes);

    if m.is_empty() {
        report.note("M is empty; θ is the empty function");
        report.check("carrier is empty", classes.is_empty(), Some(format!("{} classes", classes.len())));
        let target = subalgebra(&ind_u.algebra, &carrier_space, "F_g")?.0;
        return Ok(TechnicalSplit {
            g: g.clone(),
            m,
            lprime,
            classes,
            source: None,
            target_inclusion: carrier_space.embedding_matrix(),
            theta: QMatrix::zeros(target.dim(), 0),
            target,
            report,
        });
    }

    let l_sub = s.subsemigroup(l)?;
    let lp_sub = s.subsemigroup(&lprime)?;
    let mg = Arc::new(FiniteGroupoid::from_arrows(x, m.clone())?);
    let (res_m, incl_m) = mg.restrict_algebra(d)?;
    let ind_m = build_induced(&lp_sub, &mg, &Arc::new(res_m))?;

    let l_in_lp =
        lp_sub.sub.subsemigroup(&lp_sub.sub.element_set(l.iter().map(|a| lp_sub.local_index(a).expect("L ⊆ L′"))))?;
    let source = restrict(&ind_m.algebra, &l_in_lp);
    let source = with_action(&source, &l_sub.sub, source.action.clone(), &format!("Res Ind_M({})", d.label));
    let target_full = restrict(&ind_u.algebra, &l_sub);
    let (target, target_incl) = subalgebra(&target_full, &carrier_space, "F_g")?;

    // θ at each carrier class representative, checked over every decomposition
    let resu_incl = Subspace::from_vectors(d.dim(), (0..d.dim()).map(|i| d.basis_vec(i)).collect::<Vec<_>>());
    let g_star_op = d.ext_op(g_star.g, &g_star.p);
    let mut theta = QMatrix::zeros(target.dim(), ind_m.dim());
    let mut well_defined = Ok(());
    for col in 0..ind_m.dim() {
        let f = ind_m.algebra.basis_vec(col);
        let mut at_class: Vec<Option<Vec<crate::linalg::Q>>> = vec![None; classes.len()];
        for &(a, y) in &carriers {
            let c = ind_u.gh.class_of[y];
            let slot = classes.binary_search(&c).expect("carrier class");
            let lq = x.ext(a, &q);
            let z = ind_m.gh.index_of(&lq).ok_or_else(|| InductionError::NotInGH(format!("{lq:?} in G_M")))?;
            let fz = incl_m.mul_vec(&ind_m.eval(&f, z));
            // r_c = y·t* with t the transporter of y, so u* = t
            let t = &u.arrows[ind_u.gh.transporter[y]];
            let value = d.ext_op(t.g, &t.p).mul_vec(&g_star_op.mul_vec(&fz));
            let value = resu_incl.coords(&value).expect("full corner");
            match &at_class[slot] {
                Some(prev) if *prev != value => {
                    well_defined = Err(format!("{} disagrees on class {c}", s.name(a)));
                }
                Some(_) => {}
                None => at_class[slot] = Some(value),
            }
        }
        let mut full = vec![crate::linalg::Q::default(); ind_u.dim()];
        for (slot, &c) in classes.iter().enumerate() {
            let value = at_class[slot].clone().expect("every carrier class is hit");
            let coords = ind_u.fibers[c]
                .coords(&value)
                .ok_or_else(|| InductionError::InvalidCoefficientAlgebra("θ leaves the fiber".into()))?;
            for (k, v) in coords.into_iter().enumerate() {
                full[ind_u.offsets[c] + k] = v;
            }
        }
        let coords = carrier_space.coords(&full).expect("supported on carrier classes");
        for (k, v) in coords.into_iter().enumerate() {
            theta.set(k, col, v);
        }
    }
    report.check_result("θ well defined", well_defined);
    report.absorb("Ind_M^L′", ind_m.report());
    let pairs: Vec<(usize, usize)> = l_sub.sub.elements().map(|i| (i, i)).collect();
    report.absorb("θ", verify_map(&source, &target, &theta, &pairs, true));
    report.dim("M", m.len());
    report.dim("L′", lprime.count());
    report.dim("carrier classes", classes.len());
    Ok(TechnicalSplit {
        g: g.clone(),
        m,
        lprime,
        classes,
        source: Some(source),
        target,
        target_inclusion: target_incl,
        theta,
        report,
    })
}

#[derive(Clone, Debug)]
pub struct ResIndSplit {
    /// One representative per `L,H`-class, least first.
    pub j: Vec<ExtendedElement>,
    pub summands: Vec<TechnicalSplit>,
    pub induced: InducedAlgebra,
    pub l: SubSemigroup,
    pub report: Report,
}

/// `L,H`-classes of `G_H` as unions of `H`-classes.
pub fn lh_classes(ind: &InducedAlgebra, l: &ElementSet) -> Vec<Vec<usize>> {
    let x = ind.x();
    let n = ind.gh.num_classes();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for c in 0..n {
        for a in l.iter() {
            if let Some(y) = ind.gh.act_left(x, a, ind.gh.reps[c]) {
                let (r1, r2) = (find(&mut parent, c), find(&mut parent, ind.gh.class_of[y]));
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for c in 0..n {
        let r = find(&mut parent, c);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(c);
    }
    groups
}

/// `Res_L Ind_H Res_H(D) ≅ ⊕_{g∈J} Res_L Ind_{M_g}^{L′_g} Res^{M_g}(D)`.
pub fn res_ind_split(
    x: &Arc<Spectrum>,
    hprime: &ElementSet,
    l: &ElementSet,
    d: &FinDimGAlgebra,
) -> Result<ResIndSplit, InductionError> {
    let s = x.semigroup();
    let h = Arc::new(assoc_groupoid(x, hprime)?);
    let (resd, _) = h.restrict_algebra(d)?;
    let ind = build_induced(&SubSemigroup::whole(s), &h, &Arc::new(resd))?;
    let l_sub = s.subsemigroup(l)?;
    split_induced(ind, hprime, &l_sub, d)
}

pub(crate) fn split_induced(
    ind: InducedAlgebra,
    hprime: &ElementSet,
    l_sub: &SubSemigroup,
    d: &FinDimGAlgebra,
) -> Result<ResIndSplit, InductionError> {
    let x = Arc::clone(ind.x());
    let l = l_sub.members();
    let groups = lh_classes(&ind, &l);
    let mut j = Vec::new();
    let mut summands = Vec::new();
    let mut report =
        Report::new("res-ind-split", format!("H′={{{}}} L={{{}}} D={}", names(&x, hprime), names(&x, &l), d.label));
    for grp in &groups {
        let g = ind.gh.rep(grp[0]).clone();
        let split = split_at(&ind, hprime, &l, &g, d)?;
        report.check(
            format!("θ[{}]", ind.gh.name(&x, ind.gh.reps[grp[0]])),
            split.report.passed() && split.classes == *grp,
            split.report.first_failure().map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())),
        );
        j.push(g);
        summands.push(split);
    }
    let total: usize = summands.iter().map(|t| t.source.as_ref().map_or(0, |a| a.dim())).sum();
    report.check("Σ summand dims = dim Ind", total == ind.dim(), Some(format!("{total} vs {}", ind.dim())));
    let sources: Vec<FinDimGAlgebra> = summands
        .iter()
        .filter_map(|t| t.source.as_ref())
        .map(|a| with_action(a, &l_sub.sub, a.action.clone(), &a.label))
        .collect();
    let target = restrict(&ind.algebra, l_sub);
    if !sources.is_empty() {
        let sum = direct_sum(&sources.iter().collect::<Vec<_>>(), "⊕ Res Ind_M(D)");
        let blocks: Vec<QMatrix> =
            summands.iter().filter(|t| t.source.is_some()).map(|t| t.target_inclusion.mul(&t.theta)).collect();
        let mut total_map = QMatrix::zeros(ind.dim(), sum.dim());
        let mut col = 0;
        for b in &blocks {
            for jcol in 0..b.cols() {
                for row in 0..b.rows() {
                    total_map.set(row, col + jcol, b.get(row, jcol).clone());
                }
            }
            col += b.cols();
        }
        let pairs: Vec<(usize, usize)> = l_sub.sub.elements().map(|i| (i, i)).collect();
        report.absorb("⊕θ", verify_map(&sum, &target, &total_map, &pairs, true));
    }
    report.dim("Ind", ind.dim());
    report.dim("H-classes", ind.gh.num_classes());
    report.dim("L,H-classes", groups.len());
    Ok(ResIndSplit { j, summands, induced: ind, l: l_sub.clone(), report })
}

fn names(x: &Spectrum, set: &ElementSet) -> String {
    set.iter().map(|a| x.semigroup().name(a)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_spec;
    use crate::galgebra::{c0x, trivial};

    fn x(spec: &str) -> Arc<Spectrum> {
        Arc::new(Spectrum::new(&Arc::new(build_spec(spec).unwrap())))
    }

    fn set(x: &Spectrum, names: &[&str]) -> ElementSet {
        let s = x.semigroup();
        s.element_set(names.iter().map(|n| s.index_of(n).unwrap()))
    }

    #[test]
    fn group_double_cosets() {
        let x = x("symmetric_group:3");
        let s = x.semigroup();
        let l = s.generate(&set(&x, &["213"]));
        let r = res_ind_split(&x, &set(&x, &["123"]), &l, &trivial(s)).unwrap();
        assert!(r.report.passed(), "{}", r.report);
        assert_eq!(r.j.len(), 3);
    }

    #[test]
    fn whole_l_on_two_chain() {
        let x = x("chain:2");
        let all = x.semigroup().element_set(x.semigroup().elements());
        let r = res_ind_split(&x, x.semigroup().idempotents(), &all, &c0x(&x)).unwrap();
        assert!(r.report.passed(), "{}", r.report);
    }

    #[test]
    fn trivial_l_on_i2_gives_fibers() {
        let x = x("symmetric_inverse:2");
        let s = x.semigroup();
        let r = res_ind_split(&x, s.idempotents(), &set(&x, &["12"]), &c0x(&x)).unwrap();
        assert!(r.report.passed(), "{}", r.report);
        assert_eq!(r.j.len(), r.induced.gh.num_classes());
    }

    #[test]
    fn empty_m() {
        let x = x("chain:2");
        let g = x.ext_projection(&x.full());
        let t = technical_split(&x, &set(&x, &["1"]), &set(&x, &["e1"]), &g, &trivial(x.semigroup())).unwrap();
        assert!(t.m.is_empty());
        assert!(t.source.is_none());
        assert!(t.report.passed());
    }

    #[test]
    fn l_equals_g_full_theta() {
        let x = x("symmetric_inverse:2");
        let s = x.semigroup();
        let all = s.element_set(s.elements());
        let h = assoc_groupoid(&x, &all).unwrap();
        for &u in &h.units {
            let t = technical_split(&x, &all, &all, &h.arrows[u], &c0x(&x)).unwrap();
            assert!(t.report.passed(), "{}", t.report);
            // M is the isotropy group of H at the unit
            let iso = h.arrows.iter().filter(|a| a.p == h.arrows[u].p && x.ext_range(a) == h.arrows[u].p).count();
            assert_eq!(t.m.len(), iso);
        }
    }
}
