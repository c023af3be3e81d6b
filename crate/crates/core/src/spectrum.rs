//! The character space `X` of `C*(E)`, projections on it, and the extended semigroup `G̃`.
//!
//! For finite `E` every filter is principal, so the character `χ_f` with
//! `χ_f(e) = [f ≤ e]` is stored as its generator `f`. A declared zero is not
//! a character.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bitset::{ElementSet, ProjectionSet};
use crate::linalg::Q;
use crate::semigroup::FiniteInvSgp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("element {0} is not idempotent")]
    NotIdempotent(String),
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    sgp: Arc<FiniteInvSgp>,
    generators: Vec<usize>,
    index: Vec<Option<usize>>,
    // mobius[i][j] = μ(f_i, f_j) on the poset of nonzero idempotents
    mobius: Vec<Vec<i64>>,
}

/// A rational-valued function on `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgStarElement {
    pub values: Vec<Q>,
}

/// `g·p` in `G̃`, kept in canonical form: `p ⊆ proj(g*g)` and `g` the least
/// representative of its germs over `p`, preferring the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedElement {
    pub g: usize,
    pub p: ProjectionSet,
}

impl Spectrum {
    pub fn new(sgp: &Arc<FiniteInvSgp>) -> Self {
        let generators: Vec<usize> = sgp.idempotents().iter().filter(|&e| !sgp.is_zero(e)).collect();
        let mut index = vec![None; sgp.len()];
        for (i, &f) in generators.iter().enumerate() {
            index[f] = Some(i);
        }
        let k = generators.len();
        let leq = |i: usize, j: usize| sgp.leq(generators[i], generators[j]);
        // interval sizes order the recursion: μ(i,j) = −Σ_{i ≤ z < j} μ(i,z)
        let mut mobius = vec![vec![0i64; k]; k];
        for i in 0..k {
            let mut above: Vec<usize> = (0..k).filter(|&j| leq(i, j)).collect();
            above.sort_by_key(|&j| (0..k).filter(|&z| leq(i, z) && leq(z, j)).count());
            for &j in &above {
                mobius[i][j] = if i == j {
                    1
                } else {
                    -above.iter().filter(|&&z| z != j && leq(z, j)).map(|&z| mobius[i][z]).sum::<i64>()
                };
            }
        }
        Spectrum { sgp: Arc::clone(sgp), generators, index, mobius }
    }

    pub fn semigroup(&self) -> &Arc<FiniteInvSgp> {
        &self.sgp
    }

    /// Number of characters, `|E|` minus a declared zero.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generating idempotent `f` of the character `χ_f`.
    pub fn generator(&self, chi: usize) -> usize {
        self.generators[chi]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn character_of(&self, f: usize) -> Option<usize> {
        self.index[f]
    }

    pub fn character_name(&self, chi: usize) -> &str {
        self.sgp.name(self.generators[chi])
    }

    /// `χ(e)` for an idempotent `e`.
    pub fn value(&self, chi: usize, e: usize) -> bool {
        self.sgp.leq(self.generators[chi], e)
    }

    pub fn full(&self) -> ProjectionSet {
        ProjectionSet::full(self.len())
    }

    pub fn empty(&self) -> ProjectionSet {
        ProjectionSet::empty(self.len())
    }

    pub fn proj(&self, e: usize) -> Result<ProjectionSet, SpectrumError> {
        if !self.sgp.is_idempotent(e) {
            return Err(SpectrumError::NotIdempotent(self.sgp.name(e).to_string()));
        }
        Ok(self.proj_unchecked(e))
    }

    fn proj_unchecked(&self, e: usize) -> ProjectionSet {
        ProjectionSet::from_indices(self.len(), (0..self.len()).filter(|&chi| self.value(chi, e)))
    }

    /// `proj(g*g)`, the domain of `g` on `X`.
    pub fn domain(&self, g: usize) -> ProjectionSet {
        self.proj_unchecked(self.sgp.source(g))
    }

    /// Image of `χ` under `g`, defined when `χ(g*g) = 1`.
    pub fn act_point(&self, g: usize, chi: usize) -> Option<usize> {
        let f = self.generators[chi];
        if !self.sgp.leq(f, self.sgp.source(g)) {
            return None;
        }
        self.index[self.sgp.conjugate(g, f)]
    }

    pub fn act_proj(&self, g: usize, p: &ProjectionSet) -> ProjectionSet {
        ProjectionSet::from_indices(self.len(), p.iter().filter_map(|chi| self.act_point(g, chi)))
    }

    /// Write `1_P` as an integer combination of `1_e`, via Möbius inversion.
    pub fn expand(&self, p: &ProjectionSet) -> Vec<(usize, i64)> {
        let mut coeffs = vec![0i64; self.len()];
        for j in p.iter() {
            for (i, c) in coeffs.iter_mut().enumerate() {
                *c += self.mobius[i][j];
            }
        }
        coeffs.into_iter().enumerate().filter(|(_, c)| *c != 0).map(|(i, c)| (self.generators[i], c)).collect()
    }

    /// Partition of `X` by the values of the characters on `idems`. These are
    /// the minimal projections of the Boolean algebra generated by `idems`.
    pub fn atoms(&self, idems: &ElementSet) -> Vec<ProjectionSet> {
        let mut classes: Vec<(Vec<bool>, ProjectionSet)> = Vec::new();
        for chi in 0..self.len() {
            let pattern: Vec<bool> = idems.iter().map(|e| self.value(chi, e)).collect();
            match classes.iter_mut().find(|(pat, _)| *pat == pattern) {
                Some((_, set)) => {
                    set.insert(chi);
                }
                None => classes.push((pattern, ProjectionSet::from_indices(self.len(), [chi]))),
            }
        }
        let mut atoms: Vec<ProjectionSet> = classes.into_iter().map(|(_, s)| s).collect();
        atoms.sort();
        atoms
    }

    pub fn indicator(&self, p: &ProjectionSet) -> AlgStarElement {
        AlgStarElement {
            values: (0..self.len()).map(|chi| if p.contains(chi) { Q::one() } else { Q::zero() }).collect(),
        }
    }

    /// `(g·a)(χ) = a(g*·χ)` on `proj(gg*)`, zero elsewhere.
    pub fn act_alg(&self, g: usize, a: &AlgStarElement) -> AlgStarElement {
        let mut values = vec![Q::zero(); self.len()];
        for chi in 0..self.len() {
            if let Some(target) = self.act_point(g, chi) {
                values[target] = a.values[chi].clone();
            }
        }
        AlgStarElement { values }
    }

    /// `⋁{1_e : e ∈ E, e ≤ g}` and the maximal nonzero members of that set.
    pub fn e_cont_sup(&self, g: usize) -> (AlgStarElement, ElementSet) {
        let below: Vec<usize> =
            self.sgp.idempotents().iter().filter(|&e| !self.sgp.is_zero(e) && self.sgp.leq(e, g)).collect();
        let witness = self
            .sgp
            .element_set(below.iter().copied().filter(|&e| !below.iter().any(|&f| f != e && self.sgp.leq(e, f))));
        let support = witness.iter().fold(self.empty(), |acc, e| acc.union(&self.proj_unchecked(e)));
        (self.indicator(&support), witness)
    }

    pub fn ext(&self, g: usize, p: &ProjectionSet) -> ExtendedElement {
        let p = p.intersection(&self.domain(g));
        let agrees = |h: usize| {
            p.iter().all(|chi| {
                let f = self.generators[chi];
                self.sgp.mul(g, f) == self.sgp.mul(h, f)
            })
        };
        let unit = self.sgp.unit();
        let g = if agrees(unit) { unit } else { self.sgp.elements().find(|&h| agrees(h)).unwrap_or(g) };
        ExtendedElement { g, p }
    }

    /// `g` seen in `G̃`, that is `g·1_{g*g}`.
    pub fn ext_of(&self, g: usize) -> ExtendedElement {
        self.ext(g, &self.domain(g))
    }

    pub fn ext_projection(&self, p: &ProjectionSet) -> ExtendedElement {
        self.ext(self.sgp.unit(), p)
    }

    pub fn tilde_mul(&self, a: &ExtendedElement, b: &ExtendedElement) -> ExtendedElement {
        let gh = self.sgp.mul(a.g, b.g);
        let p = self.act_proj(self.sgp.star(b.g), &a.p).intersection(&b.p).intersection(&self.domain(gh));
        self.ext(gh, &p)
    }

    pub fn tilde_star(&self, a: &ExtendedElement) -> ExtendedElement {
        self.ext(self.sgp.star(a.g), &self.act_proj(a.g, &a.p))
    }

    pub fn ext_source(&self, a: &ExtendedElement) -> ProjectionSet {
        a.p.clone()
    }

    pub fn ext_range(&self, a: &ExtendedElement) -> ProjectionSet {
        self.act_proj(a.g, &a.p)
    }

    pub fn is_ext_zero(&self, a: &ExtendedElement) -> bool {
        a.p.is_empty()
    }

    pub fn projection_json(&self, p: &ProjectionSet) -> Value {
        Value::Array(p.iter().map(|chi| Value::String(self.character_name(chi).to_string())).collect())
    }

    pub fn alg_json(&self, a: &AlgStarElement) -> Value {
        let map: Map<String, Value> = a
            .values
            .iter()
            .enumerate()
            .map(|(chi, v)| (self.character_name(chi).to_string(), Value::String(v.to_string())))
            .collect();
        Value::Object(map)
    }

    pub fn ext_json(&self, a: &ExtendedElement) -> Value {
        json!({"g": self.sgp.name(a.g), "p": self.projection_json(&a.p)})
    }
}

impl AlgStarElement {
    pub fn zero(len: usize) -> Self {
        AlgStarElement { values: vec![Q::zero(); len] }
    }

    pub fn mul(&self, other: &Self) -> Self {
        AlgStarElement { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() }
    }

    pub fn is_zero_one(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Support of a 0/1 function.
    pub fn support(&self) -> ProjectionSet {
        ProjectionSet::from_indices(self.values.len(), (0..self.values.len()).filter(|&i| !self.values[i].is_zero()))
    }

    pub fn at(&self, chi: usize) -> &Q {
        &self.values[chi]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build;

    fn spectrum(kind: &str, n: &[usize]) -> Spectrum {
        Spectrum::new(&Arc::new(build(kind, n).unwrap()))
    }

    #[test]
    fn character_counts() {
        assert_eq!(spectrum("chain", &[2]).len(), 2);
        assert_eq!(spectrum("cyclic", &[3]).len(), 1);
        assert_eq!(spectrum("diamond", &[]).len(), 4);
        assert_eq!(spectrum("brandt_unital", &[2]).len(), 3);
        assert_eq!(spectrum("symmetric_inverse", &[2]).len(), 4);
    }

    #[test]
    fn projections_on_two_chain() {
        let x = spectrum("chain", &[2]);
        assert_eq!(x.proj(0).unwrap(), x.full());
        // χ_e is the character with e ↦ 1
        let chi_e = x.character_of(1).unwrap();
        assert_eq!(x.proj(1).unwrap().iter().collect::<Vec<_>>(), vec![chi_e]);
        assert_eq!(x.act_proj(1, &x.full()), x.proj(1).unwrap());
        let b2 = spectrum("brandt_unital", &[2]);
        assert!(b2.proj(5).unwrap().is_empty());
        assert!(b2.proj(2).is_err());
    }

    #[test]
    fn tilde_product_of_complements_is_zero() {
        let x = spectrum("chain", &[2]);
        let pe = x.proj(1).unwrap();
        let z = x.tilde_mul(&x.ext_projection(&pe.complement()), &x.ext_projection(&pe));
        assert!(x.is_ext_zero(&z));
        assert_eq!(z, x.ext_projection(&x.empty()));
        let one = x.ext_of(0);
        assert_eq!(x.tilde_mul(&one, &one), one);
        // e·1_e and 1·1_e are the same germ
        assert_eq!(x.ext(1, &pe), x.ext_projection(&pe));
    }

    #[test]
    fn mobius_expansion_recovers_points() {
        let x = spectrum("diamond", &[]);
        for chi in 0..x.len() {
            let point = ProjectionSet::from_indices(x.len(), [chi]);
            let mut values = vec![0i64; x.len()];
            for (e, c) in x.expand(&point) {
                for psi in x.proj(e).unwrap().iter() {
                    values[psi] += c;
                }
            }
            let expected: Vec<i64> = (0..x.len()).map(|psi| i64::from(psi == chi)).collect();
            assert_eq!(values, expected);
        }
    }

    #[test]
    fn e_continuity_examples() {
        let z2 = spectrum("cyclic", &[2]);
        let (f, w) = z2.e_cont_sup(1);
        assert!(f.support().is_empty() && w.is_empty());
        let b2 = spectrum("brandt_unital", &[2]);
        let (f, w) = b2.e_cont_sup(2);
        assert!(f.support().is_empty() && w.is_empty());
        let c3 = spectrum("chain", &[3]);
        let (f, w) = c3.e_cont_sup(1);
        assert_eq!(f.support(), c3.proj(1).unwrap());
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn atoms_of_chain_idempotents() {
        let x = spectrum("chain", &[2]);
        let atoms = x.atoms(x.semigroup().idempotents());
        assert_eq!(atoms.len(), 2);
        let trivial = x.atoms(&x.semigroup().element_set([0]));
        assert_eq!(trivial, vec![x.full()]);
    }
}
