//! `G_H`, its `H`-orbits, and `Ind_H^G(D)` as a finite-dimensional algebra.
//!
//! Stabilizers of `G_H` under right translation by `H` are trivial, so an
//! induced function is determined by its values at one representative per
//! class, and that value may be any element of `α_{r*r}(D)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::galgebra::{sparse, FinDimGAlgebra, StarHomomorphism};
use crate::linalg::{unit_vec, QMatrix, Subspace, Q};
use crate::report::Report;
use crate::semigroup::SubSemigroup;
use crate::spectrum::{ExtendedElement, Spectrum};

use super::groupoid::FiniteGroupoid;
use super::InductionError;

#[derive(Clone, Debug)]
pub struct GHSpace {
    pub elements: Vec<ExtendedElement>,
    pub class_of: Vec<usize>,
    /// `elements[y] = reps[class_of[y]] · arrows[transporter[y]]`
    pub transporter: Vec<usize>,
    pub reps: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    index: HashMap<ExtendedElement, usize>,
}

impl GHSpace {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn index_of(&self, y: &ExtendedElement) -> Option<usize> {
        self.index.get(y).copied()
    }

    pub fn rep(&self, c: usize) -> &ExtendedElement {
        &self.elements[self.reps[c]]
    }

    /// `g·y` when `g*g ≥ yy*`, else `None`.
    pub fn act_left(&self, x: &Spectrum, g: usize, y: usize) -> Option<usize> {
        let yy = &self.elements[y];
        if !x.ext_range(yy).is_subset(&x.domain(g)) {
            return None;
        }
        self.index_of(&x.tilde_mul(&x.ext_of(g), yy))
    }

    pub fn name(&self, x: &Spectrum, y: usize) -> String {
        let e = &self.elements[y];
        let chars: Vec<&str> = e.p.iter().map(|c| x.character_name(c)).collect();
        format!("{}|{}", x.semigroup().name(e.g), chars.join(","))
    }
}

/// `G_H = {k·p : k ∈ K, p ∈ H⁽⁰⁾, k*k ≥ p}` for the acting semigroup `K`,
/// split into classes `yH` with least elements as representatives.
pub fn compute_gh(x: &Spectrum, acting: &SubSemigroup, h: &FiniteGroupoid) -> Result<GHSpace, InductionError> {
    let mut elements = Vec::new();
    for &k in &acting.to_parent {
        let dom = x.domain(k);
        for p in h.unit_projections() {
            if p.is_subset(&dom) {
                elements.push(x.ext(k, p));
            }
        }
    }
    elements.sort();
    elements.dedup();
    let index: HashMap<ExtendedElement, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elements.len();
    let mut class_of = vec![usize::MAX; n];
    let mut transporter = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut classes = Vec::new();
    for r in 0..n {
        if class_of[r] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(r);
        let mut members = Vec::new();
        for t in 0..h.len() {
            if h.range(t) != elements[r].p {
                continue;
            }
            let y = x.tilde_mul(&elements[r], &h.arrows[t]);
            let yi = *index.get(&y).ok_or_else(|| InductionError::NotInGH(format!("{y:?}")))?;
            if class_of[yi] != usize::MAX {
                return Err(InductionError::NotGroupoid(format!("class of element {yi} met twice")));
            }
            class_of[yi] = c;
            transporter[yi] = t;
            members.push(yi);
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(GHSpace { elements, class_of, transporter, reps, classes, index })
}

#[derive(Clone, Debug)]
pub struct InducedAlgebra {
    pub algebra: Arc<FinDimGAlgebra>,
    pub acting: SubSemigroup,
    pub groupoid: Arc<FiniteGroupoid>,
    pub coeff: Arc<FinDimGAlgebra>,
    pub gh: GHSpace,
    /// `α_{r*r}(D)` for each class representative `r`.
    pub fibers: Vec<Subspace>,
    pub offsets: Vec<usize>,
}

impl InducedAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn x(&self) -> &Arc<Spectrum> {
        &self.groupoid.x
    }

    pub fn block(&self, c: usize) -> std::ops::Range<usize> {
        self.offsets[c]..self.offsets[c] + self.fibers[c].dim()
    }

    /// Source unit of the class representative, as an arrow of `H`.
    pub fn unit_of_class(&self, c: usize) -> usize {
        self.groupoid.unit_over(&self.gh.rep(c).p).expect("representatives start at units")
    }

    /// `f(y)` in the coefficient algebra.
    pub fn eval(&self, f: &[Q], y: usize) -> Vec<Q> {
        let c = self.gh.class_of[y];
        let coords = &f[self.block(c)];
        let at_rep = self.fibers[c].embed(coords);
        let t = self.gh.transporter[y];
        let t_inv = self.groupoid.elem_of_arrow[self.groupoid.star(t)];
        self.coeff.action[t_inv].mul_vec(&at_rep)
    }

    /// The induced function with the given values at the representatives.
    pub fn from_rep_values(&self, values: &[Vec<Q>]) -> Option<Vec<Q>> {
        let mut f = Vec::with_capacity(self.dim());
        for (c, v) in values.iter().enumerate() {
            f.extend(self.fibers[c].coords(v)?);
        }
        Some(f)
    }

    /// Functions supported on the given classes.
    pub fn classes_subspace(&self, classes: &[usize]) -> Subspace {
        let n = self.dim();
        Subspace::from_vectors(
            n,
            classes.iter().flat_map(|&c| self.block(c)).map(|i| unit_vec(n, i)).collect::<Vec<_>>(),
        )
    }

    pub fn report(&self) -> Report {
        let mut r = self.algebra.validate();
        r.lemma = "induced-algebra".into();
        r.instance = self.algebra.label.clone();
        let expected: usize = (0..self.gh.num_classes())
            .map(|c| self.coeff.action[self.groupoid.elem_of_arrow[self.unit_of_class(c)]].rank())
            .sum();
        r.check("dimension is Σ dim α_{r*r}(D)", expected == self.dim(), Some(format!("{} vs {expected}", self.dim())));
        r.dim("G_H", self.gh.len());
        r.dim("classes", self.gh.num_classes());
        r.dim("Ind", self.dim());
        r
    }
}

/// `Ind_H^K(D)` for `K` acting on the left of `G_H`.
pub fn build_induced(
    acting: &SubSemigroup,
    h: &Arc<FiniteGroupoid>,
    d: &Arc<FinDimGAlgebra>,
) -> Result<InducedAlgebra, InductionError> {
    let check = h.validate_algebra(d);
    if let Some(bad) = check.first_failure() {
        return Err(InductionError::InvalidCoefficientAlgebra(format!(
            "{}: {}",
            bad.name,
            bad.witness.clone().unwrap_or_default()
        )));
    }
    let x = &h.x;
    let gh = compute_gh(x, acting, h)?;
    let fibers: Vec<Subspace> = gh
        .reps
        .iter()
        .map(|&r| {
            let u = h.unit_over(&gh.elements[r].p).expect("unit");
            d.action[h.elem_of_arrow[u]].column_space()
        })
        .collect();
    let mut offsets = Vec::with_capacity(fibers.len());
    let mut total = 0;
    for f in &fibers {
        offsets.push(total);
        total += f.dim();
    }
    let mut basis = Vec::with_capacity(total);
    let mut products = vec![Vec::new(); total * total];
    let mut star = QMatrix::zeros(total, total);
    for (c, fib) in fibers.iter().enumerate() {
        let rname = gh.name(x, gh.reps[c]);
        for i in 0..fib.dim() {
            basis.push(format!("δ[{rname}]⊗v{i}"));
            let s = fib.coords(&d.star_vec(&fib.basis()[i])).expect("fibers are star-closed");
            for (k, v) in s.into_iter().enumerate() {
                star.set(offsets[c] + k, offsets[c] + i, v);
            }
            for j in 0..fib.dim() {
                let prod = fib.coords(&d.mul(&fib.basis()[i], &fib.basis()[j])).expect("fibers are ideals");
                products[(offsets[c] + i) * total + offsets[c] + j] =
                    sparse(&prod).into_iter().map(|(k, v)| (offsets[c] + k, v)).collect();
            }
        }
    }
    let partial = InducedAlgebra {
        algebra: Arc::new(FinDimGAlgebra::new(
            "",
            Vec::new(),
            Vec::new(),
            QMatrix::zeros(0, 0),
            Arc::clone(&acting.sub),
            Vec::new(),
        )),
        acting: acting.clone(),
        groupoid: Arc::clone(h),
        coeff: Arc::clone(d),
        gh,
        fibers,
        offsets,
    };
    // (k f)(y) = [kk* ≥ yy*] f(k*·y), read off at each representative
    let mut action = Vec::with_capacity(acting.sub.len());
    for &k in &acting.to_parent {
        let ks = x.semigroup().star(k);
        let mut m = QMatrix::zeros(total, total);
        for c2 in 0..partial.gh.num_classes() {
            let Some(z) = partial.gh.act_left(x, ks, partial.gh.reps[c2]) else { continue };
            for col in 0..total {
                let value = partial.eval(&unit_vec(total, col), z);
                if value.iter().all(Zero::is_zero) {
                    continue;
                }
                let coords = partial.fibers[c2].coords(&value).ok_or_else(|| {
                    InductionError::InvalidCoefficientAlgebra("translated value leaves its fiber".into())
                })?;
                for (i, v) in coords.into_iter().enumerate() {
                    m.set(partial.offsets[c2] + i, col, v);
                }
            }
        }
        action.push(m);
    }
    let label = format!("Ind({})", d.label);
    let algebra = FinDimGAlgebra::new(label, basis, products, star, Arc::clone(&acting.sub), action);
    Ok(InducedAlgebra { algebra: Arc::new(algebra), ..partial })
}

/// `I(F)`: apply an `H`-equivariant homomorphism pointwise.
pub fn induce_hom(src: &InducedAlgebra, tgt: &InducedAlgebra, f: &QMatrix) -> Result<StarHomomorphism, InductionError> {
    if src.gh.elements != tgt.gh.elements || src.groupoid.arrows != tgt.groupoid.arrows {
        return Err(InductionError::NotEquivariant("induced algebras over different G_H".into()));
    }
    let (d1, d2) = (&src.coeff, &tgt.coeff);
    if (f.rows(), f.cols()) != (d2.dim(), d1.dim()) {
        return Err(InductionError::NotEquivariant("shape mismatch".into()));
    }
    if let Some(t) = d1.semigroup.elements().find(|&t| f.mul(&d1.action[t]) != d2.action[t].mul(f)) {
        return Err(InductionError::NotEquivariant(format!("fails at {}", d1.semigroup.name(t))));
    }
    let mut m = QMatrix::zeros(tgt.dim(), src.dim());
    for c in 0..src.gh.num_classes() {
        for (i, v) in src.fibers[c].basis().iter().enumerate() {
            let coords = tgt.fibers[c].coords(&f.mul_vec(v)).expect("equivariant maps respect fibers");
            for (k, val) in coords.into_iter().enumerate() {
                m.set(tgt.offsets[c] + k, src.offsets[c] + i, val);
            }
        }
    }
    Ok(StarHomomorphism::new(&src.algebra, &tgt.algebra, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_spec;
    use crate::galgebra::{c0x, direct_sum, trivial};
    use crate::induction::assoc_groupoid;
    use crate::linalg::q;

    fn setup(spec: &str, hprime: &[&str]) -> (Arc<Spectrum>, Arc<FiniteGroupoid>) {
        let s = Arc::new(build_spec(spec).unwrap());
        let x = Arc::new(Spectrum::new(&s));
        let set = s.element_set(hprime.iter().map(|n| s.index_of(n).unwrap()));
        let h = Arc::new(assoc_groupoid(&x, &set).unwrap());
        (x, h)
    }

    fn res_trivial(h: &FiniteGroupoid) -> Arc<FinDimGAlgebra> {
        Arc::new(h.restrict_algebra(&trivial(h.x.semigroup())).unwrap().0)
    }

    #[test]
    fn remark_case_e_acts_as_zero() {
        let (x, h) = setup("chain:2", &["1"]);
        let g = SubSemigroup::whole(x.semigroup());
        let ind = build_induced(&g, &h, &res_trivial(&h)).unwrap();
        assert_eq!(ind.gh.len(), 1);
        assert_eq!(ind.dim(), 1);
        assert!(ind.algebra.action[1].is_zero());
        assert!(ind.report().passed(), "{}", ind.report());
    }

    #[test]
    fn group_induction_from_trivial_subgroup_is_cg() {
        let (x, h) = setup("cyclic:3", &["1"]);
        let g = SubSemigroup::whole(x.semigroup());
        let ind = build_induced(&g, &h, &res_trivial(&h)).unwrap();
        assert_eq!(ind.gh.num_classes(), 3);
        assert_eq!(ind.dim(), 3);
        assert!(ind.report().passed());
        // translation: a permutation matrix without fixed points
        let m = &ind.algebra.action[1];
        assert!((0..3).all(|i| m.get(i, i).is_zero()));
    }

    #[test]
    fn classes_match_brute_force_orbits() {
        let (x, h) = setup("symmetric_inverse:2", &["12", "1_", "_2", "__"]);
        let g = SubSemigroup::whole(x.semigroup());
        let gh = compute_gh(&x, &g, &h).unwrap();
        for a in 0..gh.len() {
            for b in 0..gh.len() {
                let linked = (0..h.len()).any(|t| x.tilde_mul(&gh.elements[a], &h.arrows[t]) == gh.elements[b]);
                assert_eq!(linked, gh.class_of[a] == gh.class_of[b]);
            }
        }
        let ind = build_induced(&g, &h, &Arc::new(h.restrict_algebra(&c0x(&x)).unwrap().0)).unwrap();
        assert!(ind.report().passed(), "{}", ind.report());
    }

    #[test]
    fn full_groupoid_on_i2() {
        let (x, h) = setup("symmetric_inverse:2", &["12", "21", "1_", "_2", "__", "2_", "_1"]);
        let g = SubSemigroup::whole(x.semigroup());
        let ind = build_induced(&g, &h, &res_trivial(&h)).unwrap();
        assert!(ind.report().passed(), "{}", ind.report());
    }

    #[test]
    fn invalid_coefficients_rejected() {
        let (x, h) = setup("chain:2", &["1", "e1"]);
        let g = SubSemigroup::whole(x.semigroup());
        let mut d = h.restrict_algebra(&c0x(&x)).unwrap().0;
        for m in d.action.iter_mut() {
            *m = QMatrix::identity(2);
        }
        assert!(matches!(build_induced(&g, &h, &Arc::new(d)), Err(InductionError::InvalidCoefficientAlgebra(_))));
    }

    #[test]
    fn induce_hom_identity_zero_and_sum() {
        let (x, h) = setup("chain:2", &["1", "e1"]);
        let g = SubSemigroup::whole(x.semigroup());
        let d = Arc::new(h.restrict_algebra(&c0x(&x)).unwrap().0);
        let ind = build_induced(&g, &h, &d).unwrap();
        let id = induce_hom(&ind, &ind, &QMatrix::identity(d.dim())).unwrap();
        assert!(id.matrix.is_identity());
        let zero = induce_hom(&ind, &ind, &QMatrix::zeros(d.dim(), d.dim())).unwrap();
        assert!(zero.matrix.is_zero());

        let d2 = Arc::new(direct_sum(&[&d, &d], "D⊕D"));
        let ind2 = build_induced(&g, &h, &d2).unwrap();
        let n = d.dim();
        let mut sum = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            sum.set(i, i, q(1));
            sum.set(i, n + i, q(1));
        }
        let pairs = crate::galgebra::same_semigroup_pairs(&ind.algebra.semigroup);
        // the coordinate sum is equivariant but not multiplicative
        let r = induce_hom(&ind2, &ind, &sum).unwrap().verify(&pairs, false);
        assert!(!r.passed());
        assert!(r.checks.iter().any(|c| c.name == "equivariant" && c.pass));
        let diag = induce_hom(&ind, &ind2, &sum.transpose()).unwrap();
        assert!(diag.verify(&pairs, false).passed());
    }
}
