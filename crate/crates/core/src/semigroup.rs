//! Finite inverse monoids given by multiplication tables.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::ElementSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("malformed semigroup data: {0}")]
    Malformed(String),
    #[error("not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("element {element} has {candidates} inverses, expected exactly one")]
    NoUniqueInverse { element: String, candidates: usize },
    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDontCommute { e: String, f: String },
    #[error("declared unit fails 1·{element} = {element}·1 = {element}")]
    BadUnit { element: String },
    #[error("declared zero fails 0·{element} = {element}·0 = 0")]
    BadZero { element: String },
    #[error("unsupported size {size} for builder {kind}")]
    UnsupportedSize { kind: String, size: usize },
    #[error("unknown builder spec {0:?}")]
    UnknownBuilder(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("subset is not a unital sub-inverse-semigroup: {0}")]
    NotSubsemigroup(String),
}

/// A validated finite inverse monoid, optionally with a declared zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInvSgp {
    names: Vec<String>,
    table: Vec<usize>,
    star: Vec<usize>,
    unit: usize,
    zero: Option<usize>,
    idempotents: ElementSet,
    index: HashMap<String, usize>,
}

impl FiniteInvSgp {
    /// Validate a multiplication table and derive the involution.
    pub fn validate(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        unit: usize,
        zero: Option<usize>,
    ) -> Result<Self, SemigroupError> {
        let n = names.len();
        if n == 0 {
            return Err(SemigroupError::Malformed("empty element list".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(SemigroupError::Malformed(format!("table must be {n}×{n}")));
        }
        if let Some(bad) = table.iter().flatten().find(|&&x| x >= n) {
            return Err(SemigroupError::Malformed(format!("table entry {bad} out of range 0..{n}")));
        }
        if unit >= n || zero.is_some_and(|z| z >= n) {
            return Err(SemigroupError::Malformed("unit or zero index out of range".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(SemigroupError::Malformed(format!("duplicate element name {name:?}")));
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        let name = |i: usize| names[i].clone();

        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(SemigroupError::NotAssociative { a: name(a), b: name(b), c: name(c) });
                    }
                }
            }
        }

        let mut star = Vec::with_capacity(n);
        for g in 0..n {
            let inverses: Vec<usize> = (0..n).filter(|&x| mul(mul(g, x), g) == g && mul(mul(x, g), x) == x).collect();
            if inverses.len() != 1 {
                return Err(SemigroupError::NoUniqueInverse { element: name(g), candidates: inverses.len() });
            }
            star.push(inverses[0]);
        }

        let idempotents = ElementSet::from_indices(n, (0..n).filter(|&e| mul(e, e) == e));
        for e in idempotents.iter() {
            for f in idempotents.iter() {
                if mul(e, f) != mul(f, e) {
                    return Err(SemigroupError::IdempotentsDontCommute { e: name(e), f: name(f) });
                }
            }
        }

        if let Some(g) = (0..n).find(|&g| mul(unit, g) != g || mul(g, unit) != g) {
            return Err(SemigroupError::BadUnit { element: name(g) });
        }
        if let Some(z) = zero {
            if let Some(g) = (0..n).find(|&g| mul(z, g) != z || mul(g, z) != z) {
                return Err(SemigroupError::BadZero { element: name(g) });
            }
        }

        Ok(FiniteInvSgp { names, table: flat, star, unit, zero, idempotents, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    #[inline]
    pub fn star(&self, g: usize) -> usize {
        self.star[g]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn is_zero(&self, g: usize) -> bool {
        self.zero == Some(g)
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, SemigroupError> {
        self.index.get(name).copied().ok_or_else(|| SemigroupError::UnknownElement(name.to_string()))
    }

    /// `g*g`
    pub fn source(&self, g: usize) -> usize {
        self.mul(self.star(g), g)
    }

    /// `gg*`
    pub fn range(&self, g: usize) -> usize {
        self.mul(g, self.star(g))
    }

    /// `g e g*`
    pub fn conjugate(&self, g: usize, e: usize) -> usize {
        self.mul(self.mul(g, e), self.star(g))
    }

    pub fn is_idempotent(&self, g: usize) -> bool {
        self.idempotents.contains(g)
    }

    /// `E(S)`, exactly the elements with `e·e = e`.
    pub fn idempotents(&self) -> &ElementSet {
        &self.idempotents
    }

    /// Natural partial order: `g ≤ h` iff `g = gg*·h`.
    pub fn leq(&self, g: usize, h: usize) -> bool {
        self.mul(self.range(g), h) == g
    }

    /// `e ≤ g` with `e` a nonzero idempotent forces `g` idempotent.
    pub fn is_e_unitary(&self) -> bool {
        self.idempotents
            .iter()
            .filter(|&e| !self.is_zero(e))
            .all(|e| self.elements().all(|g| !self.leq(e, g) || self.is_idempotent(g)))
    }

    pub fn is_group(&self) -> bool {
        self.idempotents.count() == 1
    }

    pub fn is_semilattice(&self) -> bool {
        self.idempotents.count() == self.len()
    }

    pub fn is_commutative(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Whether `p` commutes with every element.
    pub fn is_central(&self, p: usize) -> bool {
        self.elements().all(|g| self.mul(p, g) == self.mul(g, p))
    }

    /// Smallest subset containing `gens ∪ {1}` closed under product and star.
    pub fn generate(&self, gens: &ElementSet) -> ElementSet {
        let mut set = gens.clone();
        set.insert(self.unit);
        let mut frontier: Vec<usize> = set.iter().collect();
        for g in set.clone().iter() {
            if set.insert(self.star(g)) {
                frontier.push(self.star(g));
            }
        }
        while let Some(x) = frontier.pop() {
            let members: Vec<usize> = set.iter().collect();
            for y in members {
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if set.insert(z) {
                        frontier.push(z);
                    }
                    let zs = self.star(z);
                    if set.insert(zs) {
                        frontier.push(zs);
                    }
                }
            }
        }
        set
    }

    pub fn element_set<I: IntoIterator<Item = usize>>(&self, it: I) -> ElementSet {
        ElementSet::from_indices(self.len(), it)
    }

    /// Check that `set` contains the unit and is closed under product and star.
    pub fn check_subsemigroup(&self, set: &ElementSet) -> Result<(), SemigroupError> {
        if !set.contains(self.unit) {
            return Err(SemigroupError::NotSubsemigroup(format!("missing unit {}", self.name(self.unit))));
        }
        for a in set.iter() {
            if !set.contains(self.star(a)) {
                return Err(SemigroupError::NotSubsemigroup(format!("{}* not in subset", self.name(a))));
            }
            for b in set.iter() {
                if !set.contains(self.mul(a, b)) {
                    return Err(SemigroupError::NotSubsemigroup(format!(
                        "{}·{} not in subset",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The sub-monoid on `set` with inherited names. The zero is declared iff
    /// the parent's declared zero belongs to `set`.
    pub fn subsemigroup(self: &Arc<Self>, set: &ElementSet) -> Result<SubSemigroup, SemigroupError> {
        self.check_subsemigroup(set)?;
        let to_parent: Vec<usize> = set.iter().collect();
        let local: HashMap<usize, usize> = to_parent.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = to_parent.iter().map(|&a| to_parent.iter().map(|&b| local[&self.mul(a, b)]).collect()).collect();
        let names = to_parent.iter().map(|&g| self.names[g].clone()).collect();
        let zero = self.zero.filter(|z| set.contains(*z)).map(|z| local[&z]);
        let sub = FiniteInvSgp::validate(names, table, local[&self.unit], zero)?;
        Ok(SubSemigroup { parent: Arc::clone(self), sub: Arc::new(sub), to_parent })
    }

    pub fn to_json(&self) -> SemigroupJson {
        SemigroupJson {
            elements: self.names.clone(),
            table: (0..self.len()).map(|a| (0..self.len()).map(|b| self.mul(a, b)).collect()).collect(),
            unit: self.names[self.unit].clone(),
            zero: self.zero.map(|z| self.names[z].clone()),
        }
    }

    pub fn from_json(json: &SemigroupJson) -> Result<Self, SemigroupError> {
        let find = |name: &str, field: &str| {
            json.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| SemigroupError::Malformed(format!("{field}: unknown element {name:?}")))
        };
        let unit = find(&json.unit, "unit")?;
        let zero = json.zero.as_deref().map(|z| find(z, "zero")).transpose()?;
        Self::validate(json.elements.clone(), json.table.clone(), unit, zero)
    }
}

/// On-disk semigroup format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub unit: String,
    pub zero: Option<String>,
}

/// A unital sub-inverse-semigroup together with its embedding.
#[derive(Clone, Debug)]
pub struct SubSemigroup {
    pub parent: Arc<FiniteInvSgp>,
    pub sub: Arc<FiniteInvSgp>,
    pub to_parent: Vec<usize>,
}

impl SubSemigroup {
    pub fn whole(parent: &Arc<FiniteInvSgp>) -> Self {
        SubSemigroup { parent: Arc::clone(parent), sub: Arc::clone(parent), to_parent: parent.elements().collect() }
    }

    pub fn members(&self) -> ElementSet {
        self.parent.element_set(self.to_parent.iter().copied())
    }

    pub fn local_index(&self, parent_index: usize) -> Option<usize> {
        self.to_parent.iter().position(|&g| g == parent_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn group_of_order_two() {
        let z2 = FiniteInvSgp::validate(s(&["1", "g"]), vec![vec![0, 1], vec![1, 0]], 0, None).unwrap();
        assert_eq!(z2.star(1), 1);
        assert_eq!(z2.idempotents().iter().collect::<Vec<_>>(), vec![0]);
        assert!(z2.is_e_unitary());
    }

    #[test]
    fn two_chain() {
        let c = FiniteInvSgp::validate(s(&["1", "e"]), vec![vec![0, 1], vec![1, 1]], 0, None).unwrap();
        assert_eq!(c.star(1), 1);
        assert_eq!(c.idempotents().count(), 2);
        assert!(c.leq(1, 0));
        assert!(!c.leq(0, 1));
    }

    #[test]
    fn left_zero_semigroup_has_no_unique_inverse() {
        let err = FiniteInvSgp::validate(s(&["a", "b"]), vec![vec![0, 0], vec![1, 1]], 0, None).unwrap_err();
        assert!(matches!(err, SemigroupError::NoUniqueInverse { .. }), "{err}");
    }

    #[test]
    fn rejects_non_associative_and_bad_unit() {
        let err = FiniteInvSgp::validate(s(&["1", "a"]), vec![vec![1, 0], vec![0, 0]], 0, None).unwrap_err();
        assert!(matches!(err, SemigroupError::NotAssociative { .. } | SemigroupError::NoUniqueInverse { .. }));
        let err = FiniteInvSgp::validate(s(&["1", "e"]), vec![vec![0, 1], vec![1, 1]], 1, None).unwrap_err();
        assert_eq!(err, SemigroupError::BadUnit { element: "1".into() });
        let err = FiniteInvSgp::validate(s(&["1", "e"]), vec![vec![0, 1], vec![1, 1]], 0, Some(0)).unwrap_err();
        assert!(matches!(err, SemigroupError::BadZero { .. }));
    }

    #[test]
    fn brandt_order_and_generation() {
        let b2 = build("brandt_unital", &[2]).unwrap();
        let idx = |n: &str| b2.index_of(n).unwrap();
        let e: Vec<&str> = b2.idempotents().iter().map(|i| b2.name(i)).collect();
        assert_eq!(e, vec!["1", "(1,1)", "(2,2)", "0"]);
        assert!(b2.leq(idx("0"), idx("(1,2)")));
        assert!(!b2.leq(idx("(1,1)"), idx("(1,2)")));
        assert!(b2.is_e_unitary());
        let closure = b2.generate(&b2.element_set([idx("(1,2)")]));
        let mut names: Vec<&str> = closure.iter().map(|i| b2.name(i)).collect();
        names.sort();
        assert_eq!(names, vec!["(1,1)", "(1,2)", "(2,1)", "(2,2)", "0", "1"]);
    }

    #[test]
    fn generate_trivial_cases() {
        let z3 = build("cyclic", &[3]).unwrap();
        assert_eq!(z3.generate(&ElementSet::empty(3)).iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(z3.generate(&z3.element_set([1])).count(), 3);
    }

    #[test]
    fn json_round_trip() {
        let i2 = build("symmetric_inverse", &[2]).unwrap();
        let back = FiniteInvSgp::from_json(&i2.to_json()).unwrap();
        assert_eq!(back, i2);
    }

    #[test]
    fn subsemigroup_inherits_names_and_zero() {
        let b2 = Arc::new(build("brandt_unital", &[2]).unwrap());
        let sub = b2.subsemigroup(&b2.idempotents().clone()).unwrap();
        assert_eq!(sub.sub.len(), 4);
        assert_eq!(sub.sub.zero().map(|z| sub.sub.name(z)), Some("0"));
        assert!(b2.subsemigroup(&b2.element_set([1])).is_err());
    }
}
