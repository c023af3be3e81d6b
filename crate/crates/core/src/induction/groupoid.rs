//! Finite groupoids inside `G̃` and their unitizations `H¹ = H ∪ {0} ∪ {1_H}`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use crate::bitset::{ElementSet, ProjectionSet};
use crate::galgebra::{subalgebra, with_action, FinDimGAlgebra};
use crate::linalg::{QMatrix, Q};
use crate::report::Report;
use crate::semigroup::FiniteInvSgp;
use crate::spectrum::{ExtendedElement, Spectrum};

use super::InductionError;

#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    pub x: Arc<Spectrum>,
    pub arrows: Vec<ExtendedElement>,
    pub units: Vec<usize>,
    /// `H¹`: the arrows, a declared zero, and `1_H` when there are several units.
    pub h1: Arc<FiniteInvSgp>,
    pub elem_of_arrow: Vec<usize>,
    index: HashMap<ExtendedElement, usize>,
    star: Vec<usize>,
}

impl FiniteGroupoid {
    /// Check closure in `G̃` and build `H¹`.
    pub fn from_arrows(x: &Arc<Spectrum>, mut arrows: Vec<ExtendedElement>) -> Result<Self, InductionError> {
        arrows.sort();
        arrows.dedup();
        if arrows.is_empty() || arrows.iter().any(|a| x.is_ext_zero(a)) {
            return Err(InductionError::NotGroupoid("empty groupoid or zero arrow".into()));
        }
        let index: HashMap<ExtendedElement, usize> = arrows.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let lookup = |a: &ExtendedElement| index.get(a).copied();
        let n = arrows.len();
        let mut star = Vec::with_capacity(n);
        for a in &arrows {
            let s =
                lookup(&x.tilde_star(a)).ok_or_else(|| InductionError::NotGroupoid("not closed under star".into()))?;
            star.push(s);
        }
        let unit = x.semigroup().unit();
        let units: Vec<usize> = (0..n).filter(|&i| arrows[i].g == unit).collect();
        // composition table, None where the product vanishes
        let mut comp = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let c = x.tilde_mul(&arrows[i], &arrows[j]);
                let composable = arrows[i].p == x.ext_range(&arrows[j]);
                if x.is_ext_zero(&c) {
                    if composable {
                        return Err(InductionError::NotGroupoid("composable arrows multiply to zero".into()));
                    }
                    continue;
                }
                if !composable {
                    return Err(InductionError::NotGroupoid("non-composable arrows have a nonzero product".into()));
                }
                comp[i * n + j] = Some(lookup(&c).ok_or_else(|| InductionError::NotGroupoid("not closed".into()))?);
            }
        }
        let s = x.semigroup();
        let arrow_name = |a: &ExtendedElement| {
            let chars: Vec<&str> = a.p.iter().map(|c| x.character_name(c)).collect();
            format!("{}|{}", s.name(a.g), chars.join(","))
        };
        let with_one = units.len() > 1;
        let offset = usize::from(with_one);
        let zero = n + offset;
        let mut names: Vec<String> = Vec::with_capacity(n + 2);
        if with_one {
            names.push("1_H".into());
        }
        names.extend(arrows.iter().map(arrow_name));
        names.push("0_H".into());
        let size = names.len();
        let elem = |a: usize| a + offset;
        let table: Vec<Vec<usize>> = (0..size)
            .map(|p| {
                (0..size)
                    .map(|q| {
                        if p == zero || q == zero {
                            zero
                        } else if with_one && p == 0 {
                            q
                        } else if with_one && q == 0 {
                            p
                        } else {
                            comp[(p - offset) * n + (q - offset)].map_or(zero, elem)
                        }
                    })
                    .collect()
            })
            .collect();
        let unit_elem = if with_one { 0 } else { elem(units[0]) };
        let h1 = FiniteInvSgp::validate(names, table, unit_elem, Some(zero))?;
        Ok(FiniteGroupoid {
            x: Arc::clone(x),
            elem_of_arrow: (0..n).map(elem).collect(),
            arrows,
            units,
            h1: Arc::new(h1),
            index,
            star,
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrow_index(&self, a: &ExtendedElement) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn star(&self, a: usize) -> usize {
        self.star[a]
    }

    pub fn source(&self, a: usize) -> &ProjectionSet {
        &self.arrows[a].p
    }

    pub fn range(&self, a: usize) -> ProjectionSet {
        self.x.ext_range(&self.arrows[a])
    }

    /// The unit arrow over projection `p`, if `p` is a unit of `H`.
    pub fn unit_over(&self, p: &ProjectionSet) -> Option<usize> {
        self.units.iter().copied().find(|&u| self.arrows[u].p == *p)
    }

    pub fn unit_projections(&self) -> Vec<&ProjectionSet> {
        self.units.iter().map(|&u| &self.arrows[u].p).collect()
    }

    /// `1_H` as a projection on `X`.
    pub fn one_projection(&self) -> ProjectionSet {
        self.units.iter().fold(self.x.empty(), |acc, &u| acc.union(&self.arrows[u].p))
    }

    pub fn name(&self, a: usize) -> &str {
        self.h1.name(self.elem_of_arrow[a])
    }

    /// `Res_G^H`: the corner `1_H·A` of a `G`-algebra with the arrows acting by
    /// the linearly extended action, plus the corner's inclusion.
    pub fn restrict_algebra(&self, a: &FinDimGAlgebra) -> Result<(FinDimGAlgebra, QMatrix), InductionError> {
        if *a.semigroup != **self.x.semigroup() {
            return Err(InductionError::InvalidCoefficientAlgebra("algebra is not over the ambient semigroup".into()));
        }
        let corner = a.projection_op(&self.one_projection()).column_space();
        let arrow_ops: Vec<QMatrix> = self.arrows.iter().map(|t| a.ext_op(t.g, &t.p)).collect();
        let mut action = Vec::with_capacity(self.h1.len());
        for e in self.h1.elements() {
            let op = if self.h1.is_zero(e) {
                QMatrix::zeros(corner.dim(), corner.dim())
            } else if let Some(t) = self.elem_of_arrow.iter().position(|&x| x == e) {
                corner.restrict_map(&arrow_ops[t], &corner).ok_or_else(|| {
                    InductionError::InvalidCoefficientAlgebra(format!("arrow {} leaves the corner", self.name(t)))
                })?
            } else {
                QMatrix::identity(corner.dim())
            };
            action.push(op);
        }
        // the corner need not be invariant under the whole of G
        let bare = with_action(a, &a.semigroup, vec![QMatrix::identity(a.dim()); a.semigroup.len()], &a.label);
        let (sub, incl) = subalgebra(&bare, &corner, &format!("Res^H {}", a.label))?;
        let res = with_action(&sub, &self.h1, action, &format!("Res^H {}", a.label));
        Ok((res, incl))
    }

    /// `H¹`-algebra axioms plus the groupoid condition `Σ_u α_u = id`.
    pub fn validate_algebra(&self, d: &FinDimGAlgebra) -> Report {
        let mut r = d.validate();
        r.lemma = "h-algebra".into();
        let same = *d.semigroup == *self.h1;
        if !r.check("over H¹", same, Some("coefficient algebra is over another semigroup".into())) {
            return r;
        }
        let sum = self
            .units
            .iter()
            .fold(QMatrix::zeros(d.dim(), d.dim()), |acc, &u| acc.add(&d.action[self.elem_of_arrow[u]]));
        r.check("units sum to identity", sum.is_identity(), Some("Σ α_u ≠ id".into()));
        r
    }

    /// `C₀(H⁽⁰⁾)` as an `H`-algebra.
    pub fn c0_units(&self) -> FinDimGAlgebra {
        let k = self.units.len();
        let pos = |p: &ProjectionSet| self.units.iter().position(|&u| self.arrows[u].p == *p);
        let action = self
            .h1
            .elements()
            .map(|e| {
                let mut m = QMatrix::zeros(k, k);
                if self.h1.is_zero(e) {
                    return m;
                }
                match self.elem_of_arrow.iter().position(|&x| x == e) {
                    Some(t) => {
                        let (Some(s), Some(r)) = (pos(self.source(t)), pos(&self.range(t))) else { unreachable!() };
                        m.set(r, s, Q::one());
                        m
                    }
                    None => QMatrix::identity(k),
                }
            })
            .collect();
        let basis = self.units.iter().map(|&u| format!("δ[{}]", self.name(u))).collect();
        let products = (0..k * k).map(|p| if p / k == p % k { vec![(p / k, Q::one())] } else { vec![] }).collect();
        FinDimGAlgebra::new("C0(H0)", basis, products, QMatrix::identity(k), Arc::clone(&self.h1), action)
    }
}

/// `H = {h·p : h ∈ H′, p a minimal projection of E(H̃′), h*h ≥ p}`.
pub fn assoc_groupoid(x: &Arc<Spectrum>, hprime: &ElementSet) -> Result<FiniteGroupoid, InductionError> {
    let s = x.semigroup();
    if hprime.is_empty() {
        return Err(InductionError::NotSubsemigroup("empty".into()));
    }
    super::closed_subset(x, hprime)?;
    let idems = hprime.intersection(s.idempotents());
    // minimal projections of E(H̃′) lie below some e ∈ E(H′)
    let cover = idems.iter().fold(x.empty(), |acc, e| acc.union(&x.proj(e).expect("idempotent")));
    let atoms: Vec<ProjectionSet> = x.atoms(&idems).into_iter().filter(|p| p.is_subset(&cover)).collect();
    let mut arrows = Vec::new();
    for h in hprime.iter() {
        let dom = x.domain(h);
        for p in atoms.iter().filter(|p| p.is_subset(&dom)) {
            arrows.push(x.ext(h, p));
        }
    }
    FiniteGroupoid::from_arrows(x, arrows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_spec;
    use crate::galgebra::{c0x, trivial};

    fn x(spec: &str) -> Arc<Spectrum> {
        Arc::new(Spectrum::new(&Arc::new(build_spec(spec).unwrap())))
    }

    #[test]
    fn trivial_subsemigroup_gives_one_arrow() {
        let x = x("chain:2");
        let h = assoc_groupoid(&x, &x.semigroup().element_set([0])).unwrap();
        assert_eq!(h.arrows, vec![x.ext_projection(&x.full())]);
        assert_eq!(h.h1.len(), 2);
    }

    #[test]
    fn two_chain_idempotents_give_two_units() {
        let x = x("chain:2");
        let h = assoc_groupoid(&x, x.semigroup().idempotents()).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.units.len(), 2);
        assert_eq!(h.h1.len(), 4);
        let (res, _) = h.restrict_algebra(&c0x(&x)).unwrap();
        assert_eq!(res.dim(), 2);
        assert!(h.validate_algebra(&res).passed(), "{}", h.validate_algebra(&res));
    }

    #[test]
    fn group_subsemigroup_stays_a_group() {
        let x = x("symmetric_inverse:2");
        let s = x.semigroup();
        let swap = s.index_of("21").unwrap();
        let h = assoc_groupoid(&x, &s.element_set([0, swap])).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.units.len(), 1);
        let (res, _) = h.restrict_algebra(&trivial(s)).unwrap();
        assert!(h.validate_algebra(&res).passed());
    }

    #[test]
    fn i2_idempotent_groupoid() {
        let x = x("symmetric_inverse:2");
        let h = assoc_groupoid(&x, x.semigroup().idempotents()).unwrap();
        assert_eq!(h.units.len(), x.len());
        let c0 = h.c0_units();
        assert!(h.validate_algebra(&c0).passed());
    }

    #[test]
    fn rejects_non_subsemigroup() {
        let x = x("symmetric_inverse:2");
        let s = x.semigroup();
        assert!(matches!(
            assoc_groupoid(&x, &s.element_set([s.index_of("21").unwrap()])),
            Err(InductionError::NotSubsemigroup(_))
        ));
    }
}
