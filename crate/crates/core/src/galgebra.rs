//! Finite-dimensional `G`-algebras over the rationals.
//!
//! An algebra is a basis, sparse structure constants, a star matrix and one
//! action matrix `α_g` per semigroup element. Everything downstream (induced
//! algebras, corners, tensor quotients) produces values of this one type.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bitset::ProjectionSet;
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, QMatrix, Subspace, Q};
use crate::report::Report;
use crate::semigroup::{FiniteInvSgp, SemigroupJson, SubSemigroup};
use crate::spectrum::Spectrum;

pub type SparseVec = Vec<(usize, Q)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} does not act as a central projection")]
    NotCentral(String),
    #[error("malformed algebra data: {0}")]
    Malformed(String),
    #[error("subspace is not closed: {0}")]
    NotClosed(String),
    #[error("projection is not in the Boolean algebra of the acting semigroup: {0}")]
    NotSaturated(String),
    #[error("algebra is not a split commutative algebra: {0}")]
    NotSplitCommutative(String),
    #[error(transparent)]
    Semigroup(#[from] crate::semigroup::SemigroupError),
}

#[derive(Clone, Debug)]
pub struct FinDimGAlgebra {
    pub label: String,
    pub basis: Vec<String>,
    products: Vec<SparseVec>,
    pub star: QMatrix,
    pub semigroup: Arc<FiniteInvSgp>,
    pub action: Vec<QMatrix>,
    spectrum: OnceLock<Arc<Spectrum>>,
}

pub fn sparse(v: &[Q]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

fn dense(v: &SparseVec, n: usize) -> Vec<Q> {
    let mut out = zero_vec(n);
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

impl FinDimGAlgebra {
    pub fn new(
        label: impl Into<String>,
        basis: Vec<String>,
        products: Vec<SparseVec>,
        star: QMatrix,
        semigroup: Arc<FiniteInvSgp>,
        action: Vec<QMatrix>,
    ) -> Self {
        FinDimGAlgebra { label: label.into(), basis, products, star, semigroup, action, spectrum: OnceLock::new() }
    }

    /// Build from a dense product rule on basis indices.
    pub fn from_rule(
        label: impl Into<String>,
        basis: Vec<String>,
        rule: impl Fn(usize, usize) -> Vec<Q>,
        star: QMatrix,
        semigroup: Arc<FiniteInvSgp>,
        action: Vec<QMatrix>,
    ) -> Self {
        let n = basis.len();
        let products = (0..n * n).map(|k| sparse(&rule(k / n, k % n))).collect();
        Self::new(label, basis, products, star, semigroup, action)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn spectrum(&self) -> Arc<Spectrum> {
        Arc::clone(self.spectrum.get_or_init(|| Arc::new(Spectrum::new(&self.semigroup))))
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i * self.dim() + j]
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                for (k, s) in &self.products[i * n + j] {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Q> {
        unit_vec(self.dim(), i)
    }

    pub fn star_vec(&self, x: &[Q]) -> Vec<Q> {
        self.star.mul_vec(x)
    }

    pub fn act(&self, g: usize, x: &[Q]) -> Vec<Q> {
        self.action[g].mul_vec(x)
    }

    /// Matrix of `y ↦ xy`.
    pub fn left_mul(&self, x: &[Q]) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|j| self.mul(x, &self.basis_vec(j))).collect();
        QMatrix::from_columns(&cols, self.dim())
    }

    /// Matrix of `y ↦ yx`.
    pub fn right_mul(&self, x: &[Q]) -> QMatrix {
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|j| self.mul(&self.basis_vec(j), x)).collect();
        QMatrix::from_columns(&cols, self.dim())
    }

    /// `tr L_{b_i}` for every basis element.
    pub fn trace_vector(&self) -> Vec<Q> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n).fold(Q::zero(), |acc, j| {
                    acc + self.products[i * n + j].iter().find(|(k, _)| *k == j).map_or(Q::zero(), |(_, c)| c.clone())
                })
            })
            .collect()
    }

    pub fn trace_of(&self, x: &[Q]) -> Q {
        self.trace_vector().iter().zip(x).fold(Q::zero(), |acc, (t, c)| acc + t * c)
    }

    /// The two-sided unit, if there is one.
    pub fn unit(&self) -> Option<Vec<Q>> {
        let n = self.dim();
        if n == 0 {
            return Some(Vec::new());
        }
        // Σ_k u_k b_k b_j = b_j for all j
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..n {
            for l in 0..n {
                let row: Vec<Q> = (0..n)
                    .map(|k| {
                        self.products[k * n + j].iter().find(|(m, _)| *m == l).map_or(Q::zero(), |(_, c)| c.clone())
                    })
                    .collect();
                let target = if l == j { Q::one() } else { Q::zero() };
                if is_zero_vec(&row) && target.is_zero() {
                    continue;
                }
                rows.push(row);
                rhs.push(target);
            }
        }
        let m = QMatrix::from_rows(rows, n);
        let u = m.solve(&rhs)?;
        (0..n).all(|j| self.mul(&self.basis_vec(j), &u) == self.basis_vec(j)).then_some(u)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.products[i * n + j] == self.products[j * n + i]))
    }

    /// `α(P) = Σ_{e} c_e α_e` for `1_P = Σ c_e 1_e` on this algebra's own spectrum.
    pub fn projection_op(&self, p: &ProjectionSet) -> QMatrix {
        let x = self.spectrum();
        let mut op = QMatrix::zeros(self.dim(), self.dim());
        for (e, c) in x.expand(p) {
            op = op.add(&self.action[e].scale(&Q::from_integer(num_bigint::BigInt::from(c))));
        }
        op
    }

    /// `α_g ∘ α(P)`, the action of `g·P ∈ G̃`.
    pub fn ext_op(&self, g: usize, p: &ProjectionSet) -> QMatrix {
        self.action[g].mul(&self.projection_op(p))
    }

    /// Exhaustive check of the `G`-algebra axioms on basis elements.
    pub fn validate(&self) -> Report {
        let s = &self.semigroup;
        let n = self.dim();
        let mut r = Report::new("g-algebra", self.label.clone());
        r.dim("algebra", n);
        let name = |i: usize| self.basis[i].clone();
        let b = |i: usize| self.basis_vec(i);

        let shape = self.products.len() == n * n
            && self.star.rows() == n
            && self.star.cols() == n
            && self.action.len() == s.len()
            && self.action.iter().all(|m| m.rows() == n && m.cols() == n);
        if !r.check("shape", shape, Some("dimension mismatch in products, star or action".into())) {
            return r;
        }

        let prods: Vec<Vec<Q>> = (0..n * n).map(|k| dense(&self.products[k], n)).collect();
        let mut assoc = Ok(());
        'a: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.mul(&prods[i * n + j], &b(k)) != self.mul(&b(i), &prods[j * n + k]) {
                        assoc = Err(format!("({}·{})·{}", name(i), name(j), name(k)));
                        break 'a;
                    }
                }
            }
        }
        r.check_result("associativity", assoc);

        r.check("star involutive", self.star.mul(&self.star).is_identity(), Some("S² ≠ id".into()));
        let mut anti = Ok(());
        'b: for i in 0..n {
            for j in 0..n {
                let lhs = self.star_vec(&prods[i * n + j]);
                let rhs = self.mul(&self.star_vec(&b(j)), &self.star_vec(&b(i)));
                if lhs != rhs {
                    anti = Err(format!("({}·{})* ≠ {1}*·{0}*", name(i), name(j)));
                    break 'b;
                }
            }
        }
        r.check_result("star anti-multiplicative", anti);

        r.check("unit acts as identity", self.action[s.unit()].is_identity(), Some(s.name(s.unit()).into()));
        if let Some(z) = s.zero() {
            r.check("zero acts as zero", self.action[z].is_zero(), Some(s.name(z).into()));
        }

        let mut hom = Ok(());
        'c: for g in s.elements() {
            for h in s.elements() {
                if self.action[g].mul(&self.action[h]) != self.action[s.mul(g, h)] {
                    hom = Err(format!("α_{}α_{} ≠ α_{}", s.name(g), s.name(h), s.name(s.mul(g, h))));
                    break 'c;
                }
            }
        }
        r.check_result("semigroup homomorphism", hom);

        let mut compat = Ok(());
        'd: for e in s.idempotents().iter() {
            for i in 0..n {
                for j in 0..n {
                    if self.mul(&self.act(e, &b(i)), &b(j)) != self.mul(&b(i), &self.act(e, &b(j))) {
                        compat = Err(format!("e={}, x={}, y={}", s.name(e), name(i), name(j)));
                        break 'd;
                    }
                }
            }
        }
        r.check_result("compatibility of α_gg*", compat);

        let mut mult = Ok(());
        'm: for g in s.elements() {
            for i in 0..n {
                for j in 0..n {
                    if self.act(g, &prods[i * n + j]) != self.mul(&self.act(g, &b(i)), &self.act(g, &b(j))) {
                        mult = Err(format!("g={}, x={}, y={}", s.name(g), name(i), name(j)));
                        break 'm;
                    }
                }
            }
        }
        r.check_result("α_g multiplicative", mult);

        let star_ok = s.elements().find(|&g| self.action[g].mul(&self.star) != self.star.mul(&self.action[g]));
        r.check_result("α_g star-preserving", star_ok.map_or(Ok(()), |g| Err(format!("g={}", s.name(g)))));
        r
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let mut triples = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in &self.products[i * n + j] {
                    triples.push(json!([i, j, k, c.to_string()]));
                }
            }
        }
        let matrix = |m: &QMatrix| -> Value {
            Value::Array(
                (0..m.rows()).map(|i| json!(m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())).collect(),
            )
        };
        let action: serde_json::Map<String, Value> =
            self.semigroup.elements().map(|g| (self.semigroup.name(g).to_string(), matrix(&self.action[g]))).collect();
        json!({
            "label": self.label,
            "basis": self.basis,
            "products": triples,
            "star": matrix(&self.star),
            "action": action,
            "semigroup": serde_json::to_value(self.semigroup.to_json()).expect("serializable"),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        let bad = |field: &str| AlgebraError::Malformed(format!("field {field:?}"));
        let sj: SemigroupJson = serde_json::from_value(v["semigroup"].clone()).map_err(|_| bad("semigroup"))?;
        let sgp = Arc::new(FiniteInvSgp::from_json(&sj)?);
        let basis: Vec<String> = serde_json::from_value(v["basis"].clone()).map_err(|_| bad("basis"))?;
        let n = basis.len();
        let parse_q = |x: &Value, field: &str| -> Result<Q, AlgebraError> {
            x.as_str().and_then(|s| s.parse::<Q>().ok()).ok_or_else(|| bad(field))
        };
        let parse_matrix = |m: &Value, field: &str| -> Result<QMatrix, AlgebraError> {
            let rows = m.as_array().ok_or_else(|| bad(field))?;
            let rows: Vec<Vec<Q>> = rows
                .iter()
                .map(|r| r.as_array().ok_or_else(|| bad(field))?.iter().map(|x| parse_q(x, field)).collect())
                .collect::<Result<_, _>>()?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(bad(field));
            }
            Ok(QMatrix::from_rows(rows, n))
        };
        let mut products: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); n * n];
        for t in v["products"].as_array().ok_or_else(|| bad("products"))? {
            let idx = |k: usize| t.get(k).and_then(Value::as_u64).map(|x| x as usize).filter(|&x| x < n);
            let (i, j, k) = (idx(0), idx(1), idx(2));
            let (Some(i), Some(j), Some(k)) = (i, j, k) else { return Err(bad("products")) };
            *products[i * n + j].entry(k).or_insert_with(Q::zero) += parse_q(&t[3], "products")?;
        }
        let star = parse_matrix(&v["star"], "star")?;
        let action = sgp
            .elements()
            .map(|g| parse_matrix(&v["action"][sgp.name(g)], &format!("action.{}", sgp.name(g))))
            .collect::<Result<Vec<_>, _>>()?;
        let label = v["label"].as_str().unwrap_or("algebra").to_string();
        let products = products.into_iter().map(|m| m.into_iter().filter(|(_, c)| !c.is_zero()).collect()).collect();
        Ok(Self::new(label, basis, products, star, sgp, action))
    }
}

/// `ℂ` with `α_g = id`, except `α₀ = 0` for a declared zero.
pub fn trivial(sgp: &Arc<FiniteInvSgp>) -> FinDimGAlgebra {
    let action =
        sgp.elements().map(|g| if sgp.is_zero(g) { QMatrix::zeros(1, 1) } else { QMatrix::identity(1) }).collect();
    FinDimGAlgebra::new("C", vec!["1".into()], vec![vec![(0, Q::one())]], QMatrix::identity(1), Arc::clone(sgp), action)
}

pub fn zero_algebra(sgp: &Arc<FiniteInvSgp>) -> FinDimGAlgebra {
    let action = sgp.elements().map(|_| QMatrix::zeros(0, 0)).collect();
    FinDimGAlgebra::new("0", vec![], vec![], QMatrix::zeros(0, 0), Arc::clone(sgp), action)
}

/// `C₀(X)` with basis the point masses `δ_χ` and `g·δ_χ = δ_{g·χ}`.
pub fn c0x(x: &Spectrum) -> FinDimGAlgebra {
    let sgp = x.semigroup();
    let k = x.len();
    let action = sgp
        .elements()
        .map(|g| {
            let mut m = QMatrix::zeros(k, k);
            for chi in 0..k {
                if let Some(t) = x.act_point(g, chi) {
                    m.set(t, chi, Q::one());
                }
            }
            m
        })
        .collect();
    let basis = (0..k).map(|chi| format!("δ[{}]", x.character_name(chi))).collect();
    let products = (0..k * k).map(|p| if p / k == p % k { vec![(p / k, Q::one())] } else { vec![] }).collect();
    FinDimGAlgebra::new("C0(X)", basis, products, QMatrix::identity(k), Arc::clone(sgp), action)
}

/// `M_n` with matrix units `E_ij` and trivial action.
pub fn matrix_algebra(sgp: &Arc<FiniteInvSgp>, n: usize) -> FinDimGAlgebra {
    let d = n * n;
    let basis = (0..d).map(|k| format!("E{}{}", k / n + 1, k % n + 1)).collect();
    let rule = |a: usize, b: usize| {
        let ((i, j), (k, l)) = ((a / n, a % n), (b / n, b % n));
        if j == k {
            unit_vec(d, i * n + l)
        } else {
            zero_vec(d)
        }
    };
    let mut star = QMatrix::zeros(d, d);
    for k in 0..d {
        star.set((k % n) * n + k / n, k, Q::one());
    }
    let action =
        sgp.elements().map(|g| if sgp.is_zero(g) { QMatrix::zeros(d, d) } else { QMatrix::identity(d) }).collect();
    FinDimGAlgebra::from_rule(format!("M{n}"), basis, rule, star, Arc::clone(sgp), action)
}

/// A relabelled copy of `a` as an algebra over another semigroup, with the
/// given action matrices.
pub fn with_action(a: &FinDimGAlgebra, sgp: &Arc<FiniteInvSgp>, action: Vec<QMatrix>, label: &str) -> FinDimGAlgebra {
    FinDimGAlgebra::new(label, a.basis.clone(), a.products.clone(), a.star.clone(), Arc::clone(sgp), action)
}

pub fn direct_sum(parts: &[&FinDimGAlgebra], label: &str) -> FinDimGAlgebra {
    assert!(!parts.is_empty(), "direct sum of no algebras");
    let sgp = Arc::clone(&parts[0].semigroup);
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.dim();
            Some(o)
        })
        .collect();
    let n: usize = parts.iter().map(|p| p.dim()).sum();
    let mut basis = Vec::with_capacity(n);
    let mut products = vec![Vec::new(); n * n];
    for (t, p) in parts.iter().enumerate() {
        let o = offsets[t];
        basis.extend(p.basis.iter().map(|b| format!("{b}#{t}")));
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                products[(o + i) * n + o + j] = p.basis_product(i, j).iter().map(|(k, c)| (o + k, c.clone())).collect();
            }
        }
    }
    let star = QMatrix::direct_sum(&parts.iter().map(|p| &p.star).collect::<Vec<_>>());
    let action =
        sgp.elements().map(|g| QMatrix::direct_sum(&parts.iter().map(|p| &p.action[g]).collect::<Vec<_>>())).collect();
    FinDimGAlgebra::new(label, basis, products, star, sgp, action)
}

/// Plain tensor product with the diagonal action.
pub fn tensor(a: &FinDimGAlgebra, b: &FinDimGAlgebra) -> FinDimGAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let basis = (0..n).map(|k| format!("{}⊗{}", a.basis[k / db], b.basis[k % db])).collect();
    let mut products = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let (i, j, k, l) = (p / db, p % db, q / db, q % db);
            let mut out = Vec::new();
            for (x, c) in a.basis_product(i, k) {
                for (y, d) in b.basis_product(j, l) {
                    out.push((x * db + y, c * d));
                }
            }
            out.sort_by_key(|(i, _)| *i);
            products.push(out);
        }
    }
    let star = a.star.kron(&b.star);
    let action = a.semigroup.elements().map(|g| a.action[g].kron(&b.action[g])).collect();
    FinDimGAlgebra::new(format!("{}⊗{}", a.label, b.label), basis, products, star, Arc::clone(&a.semigroup), action)
}

/// Echelon span that grows one vector at a time.
pub struct SpanBuilder {
    ambient: usize,
    rows: Vec<(usize, Vec<Q>)>,
}

impl SpanBuilder {
    pub fn new(ambient: usize) -> Self {
        SpanBuilder { ambient, rows: Vec::new() }
    }

    /// Add `v`; returns the reduced new row if it enlarged the span.
    pub fn insert(&mut self, v: &[Q]) -> Option<Vec<Q>> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = -v[*p].clone();
                axpy(&mut v, &c, row);
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = Q::one() / &v[p];
        let v: Vec<Q> = v.iter().map(|x| x * &inv).collect();
        self.rows.push((p, v.clone()));
        Some(v)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn finish(self) -> Subspace {
        Subspace::from_vectors(self.ambient, self.rows.into_iter().map(|(_, v)| v).collect::<Vec<_>>())
    }
}

/// The smallest two-sided, star-closed, `G`-invariant ideal containing `gens`.
pub fn ideal_closure(a: &FinDimGAlgebra, gens: impl IntoIterator<Item = Vec<Q>>) -> Subspace {
    let n = a.dim();
    let mut span = SpanBuilder::new(n);
    let mut queue: Vec<Vec<Q>> = gens.into_iter().filter_map(|g| span.insert(&g)).collect();
    while let Some(v) = queue.pop() {
        let mut images = Vec::with_capacity(2 * n + a.semigroup.len() + 1);
        for k in 0..n {
            images.push(a.mul(&a.basis_vec(k), &v));
            images.push(a.mul(&v, &a.basis_vec(k)));
        }
        images.push(a.star_vec(&v));
        for g in a.semigroup.elements() {
            images.push(a.act(g, &v));
        }
        for w in images {
            if let Some(r) = span.insert(&w) {
                queue.push(r);
            }
        }
    }
    span.finish()
}

/// `A/I` for a closed ideal `I`, with the projection matrix `A → A/I`.
pub fn quotient(a: &FinDimGAlgebra, ideal: &Subspace, label: &str) -> (FinDimGAlgebra, QMatrix) {
    let keep = ideal.complement_indices();
    let m = keep.len();
    let project = |v: &[Q]| -> Vec<Q> {
        let r = ideal.reduce(v);
        keep.iter().map(|&i| r[i].clone()).collect()
    };
    let lift = |i: usize| a.basis_vec(keep[i]);
    let basis = keep.iter().map(|&i| format!("[{}]", a.basis[i])).collect();
    let products = (0..m * m).map(|k| sparse(&project(&a.mul(&lift(k / m), &lift(k % m))))).collect();
    let map_matrix = |f: &dyn Fn(&[Q]) -> Vec<Q>| {
        QMatrix::from_columns(&(0..m).map(|i| project(&f(&lift(i)))).collect::<Vec<_>>(), m)
    };
    let star = map_matrix(&|v| a.star_vec(v));
    let action = a.semigroup.elements().map(|g| map_matrix(&|v| a.act(g, v))).collect();
    let proj = QMatrix::from_columns(&(0..a.dim()).map(|k| project(&a.basis_vec(k))).collect::<Vec<_>>(), m);
    (FinDimGAlgebra::new(label, basis, products, star, Arc::clone(&a.semigroup), action), proj)
}

/// The subalgebra on `w` (closed under product, star and action), with its
/// inclusion matrix.
pub fn subalgebra(a: &FinDimGAlgebra, w: &Subspace, label: &str) -> Result<(FinDimGAlgebra, QMatrix), AlgebraError> {
    let m = w.dim();
    let coords = |v: Vec<Q>, what: &str| w.coords(&v).ok_or_else(|| AlgebraError::NotClosed(what.to_string()));
    let mut products = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            products.push(sparse(&coords(a.mul(&w.basis()[i], &w.basis()[j]), "product")?));
        }
    }
    let star = w.restrict_map(&a.star, w).ok_or_else(|| AlgebraError::NotClosed("star".into()))?;
    let action = a
        .action
        .iter()
        .enumerate()
        .map(|(g, op)| {
            w.restrict_map(op, w).ok_or_else(|| AlgebraError::NotClosed(format!("α_{}", a.semigroup.name(g))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let basis = (0..m).map(|i| format!("w{i}")).collect();
    Ok((FinDimGAlgebra::new(label, basis, products, star, Arc::clone(&a.semigroup), action), w.embedding_matrix()))
}

/// A section of `quotient`: quotient coordinates back to basis vectors of `A`.
pub fn quotient_lift(ideal: &Subspace) -> QMatrix {
    let n = ideal.ambient_dim();
    let cols: Vec<Vec<Q>> = ideal.complement_indices().into_iter().map(|i| unit_vec(n, i)).collect();
    QMatrix::from_columns(&cols, n)
}

/// `A ⊗^X B`: the tensor product divided by `α_e(a)⊗b − a⊗α_e(b)`.
pub fn balanced_tensor(a: &FinDimGAlgebra, b: &FinDimGAlgebra) -> FinDimGAlgebra {
    let t = tensor(a, b);
    let ideal = balanced_ideal(&t, a, b);
    quotient(&t, &ideal, &format!("{}⊗X{}", a.label, b.label)).0
}

/// The ideal of `t = A ⊗ B` divided out by the balanced tensor product.
pub fn balanced_ideal(t: &FinDimGAlgebra, a: &FinDimGAlgebra, b: &FinDimGAlgebra) -> Subspace {
    let (da, db) = (a.dim(), b.dim());
    let mut relations = Vec::new();
    for e in a.semigroup.idempotents().iter() {
        for i in 0..da {
            let ea = a.act(e, &a.basis_vec(i));
            for j in 0..db {
                let eb = b.act(e, &b.basis_vec(j));
                let mut rel = zero_vec(da * db);
                for (x, c) in ea.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    rel[x * db + j] += c;
                }
                for (y, c) in eb.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    rel[i * db + y] -= c;
                }
                if !is_zero_vec(&rel) {
                    relations.push(rel);
                }
            }
        }
    }
    ideal_closure(t, relations)
}

/// Split `A ≅ pA ⊕ (1−p)A` along a central idempotent `p` of the semigroup.
pub fn cutdown(a: &FinDimGAlgebra, p: usize) -> Result<(FinDimGAlgebra, FinDimGAlgebra), AlgebraError> {
    let s = &a.semigroup;
    let name = s.name(p).to_string();
    if !s.is_idempotent(p) || !s.is_central(p) {
        return Err(AlgebraError::NotCentral(name));
    }
    let ap = &a.action[p];
    let commutes = a.action.iter().all(|m| m.mul(ap) == ap.mul(m));
    if !commutes || ap.mul(ap) != *ap {
        return Err(AlgebraError::NotCentral(name));
    }
    let image = ap.column_space();
    let kernel = Subspace::from_vectors(a.dim(), ap.null_space());
    let (pa, _) = subalgebra(a, &image, &format!("{name}·{}", a.label))?;
    let (qa, _) = subalgebra(a, &kernel, &format!("(1-{name})·{}", a.label))?;
    Ok((pa, qa))
}

/// Restriction to a unital sub-inverse-semigroup: same algebra, fewer operators.
pub fn restrict(a: &FinDimGAlgebra, k: &SubSemigroup) -> FinDimGAlgebra {
    let action = k.to_parent.iter().map(|&g| a.action[g].clone()).collect();
    with_action(a, &k.sub, action, &format!("Res {}", a.label))
}

/// `A` viewed through a sub-semigroup `K`: `α(P)` for `P ⊆ X_G` computed from
/// `α` on `E(K)`. `None` unless `P` is a union of `E(K)`-atoms.
pub fn projection_op_via(
    a_over_k: &FinDimGAlgebra,
    k: &SubSemigroup,
    x_g: &Spectrum,
    p: &ProjectionSet,
) -> Option<QMatrix> {
    let xk = a_over_k.spectrum();
    let g = &k.parent;
    let restrict_char = |chi: usize| -> Option<usize> {
        let f = x_g.generator(chi);
        let meet =
            k.to_parent.iter().filter(|&&e| g.is_idempotent(e) && g.leq(f, e)).fold(g.unit(), |acc, &e| g.mul(acc, e));
        let best = k.local_index(meet)?;
        xk.character_of(best)
    };
    let mut local = ProjectionSet::empty(xk.len());
    let images: Vec<Option<usize>> = (0..x_g.len()).map(restrict_char).collect();
    for c in p.iter().filter_map(|chi| images[chi]) {
        local.insert(c);
    }
    let saturated = (0..x_g.len()).all(|chi| match images[chi] {
        Some(c) => p.contains(chi) == local.contains(c),
        None => !p.contains(chi),
    });
    saturated.then(|| a_over_k.projection_op(&local))
}

#[derive(Clone, Debug)]
pub struct StarHomomorphism {
    pub source: Arc<FinDimGAlgebra>,
    pub target: Arc<FinDimGAlgebra>,
    pub matrix: QMatrix,
}

impl StarHomomorphism {
    pub fn new(source: &Arc<FinDimGAlgebra>, target: &Arc<FinDimGAlgebra>, matrix: QMatrix) -> Self {
        assert_eq!((matrix.rows(), matrix.cols()), (target.dim(), source.dim()), "map shape");
        StarHomomorphism { source: Arc::clone(source), target: Arc::clone(target), matrix }
    }

    pub fn identity(a: &Arc<FinDimGAlgebra>) -> Self {
        Self::new(a, a, QMatrix::identity(a.dim()))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &StarHomomorphism) -> Self {
        Self::new(&other.source, &self.target, self.matrix.mul(&other.matrix))
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(x)
    }

    /// Equivariance over pairs `(g in source semigroup, g' in target semigroup)`.
    pub fn verify(&self, pairs: &[(usize, usize)], bijective: bool) -> Report {
        verify_map(&self.source, &self.target, &self.matrix, pairs, bijective)
    }
}

pub fn same_semigroup_pairs(s: &FiniteInvSgp) -> Vec<(usize, usize)> {
    s.elements().map(|g| (g, g)).collect()
}

/// Separate checks for bijectivity, multiplicativity, star and equivariance.
pub fn verify_map(
    src: &FinDimGAlgebra,
    tgt: &FinDimGAlgebra,
    map: &QMatrix,
    pairs: &[(usize, usize)],
    bijective: bool,
) -> Report {
    let mut r = Report::new("star-homomorphism", format!("{} → {}", src.label, tgt.label));
    r.dim("source", src.dim());
    r.dim("target", tgt.dim());
    if bijective {
        let ok = src.dim() == tgt.dim() && map.is_invertible();
        r.check("bijective", ok, Some(format!("rank {} for dims {} → {}", map.rank(), src.dim(), tgt.dim())));
    }
    let mut mult = Ok(());
    let images: Vec<Vec<Q>> = (0..src.dim()).map(|i| map.mul_vec(&src.basis_vec(i))).collect();
    'm: for i in 0..src.dim() {
        for j in 0..src.dim() {
            let lhs = map.mul_vec(&dense(src.basis_product(i, j), src.dim()));
            if lhs != tgt.mul(&images[i], &images[j]) {
                mult = Err(format!("{}·{}", src.basis[i], src.basis[j]));
                break 'm;
            }
        }
    }
    r.check_result("multiplicative", mult);
    let star = (0..src.dim()).find(|&i| map.mul_vec(&src.star_vec(&src.basis_vec(i))) != tgt.star_vec(&images[i]));
    r.check_result("star-preserving", star.map_or(Ok(()), |i| Err(src.basis[i].clone())));
    let equi = pairs.iter().find(|&&(g, h)| map.mul(&src.action[g]) != tgt.action[h].mul(map));
    r.check_result(
        "equivariant",
        equi.map_or(Ok(()), |&(g, h)| Err(format!("{} vs {}", src.semigroup.name(g), tgt.semigroup.name(h)))),
    );
    r
}

/// `ℂ^S` with a partial action by partial bijections of `S`.
#[derive(Clone, Debug)]
pub struct CommutativeGAlgebra {
    pub points: Vec<String>,
    pub semigroup: Arc<FiniteInvSgp>,
    pub maps: Vec<Vec<Option<usize>>>,
}

impl CommutativeGAlgebra {
    pub fn to_algebra(&self, label: &str) -> FinDimGAlgebra {
        let k = self.points.len();
        let action = self
            .maps
            .iter()
            .map(|m| {
                let mut op = QMatrix::zeros(k, k);
                for (x, y) in m.iter().enumerate() {
                    if let Some(y) = y {
                        op.set(*y, x, Q::one());
                    }
                }
                op
            })
            .collect();
        let basis = self.points.iter().map(|p| format!("δ[{p}]")).collect();
        let products = (0..k * k).map(|p| if p / k == p % k { vec![(p / k, Q::one())] } else { vec![] }).collect();
        FinDimGAlgebra::new(label, basis, products, QMatrix::identity(k), Arc::clone(&self.semigroup), action)
    }

    /// Minimal idempotents of a split commutative algebra and the induced
    /// partial action on them.
    pub fn from_algebra(a: &FinDimGAlgebra) -> Result<(Self, Vec<Vec<Q>>), AlgebraError> {
        if !a.is_commutative() {
            return Err(AlgebraError::NotSplitCommutative("not commutative".into()));
        }
        let ops: Vec<QMatrix> = (0..a.dim()).map(|i| a.left_mul(&a.basis_vec(i))).collect();
        let parts = crate::linalg::simultaneous_eigenspaces(&ops, &Subspace::full(a.dim()))
            .map_err(|w| AlgebraError::NotSplitCommutative(format!("minimal polynomial factor {w}")))?;
        let mut idems = Vec::new();
        for part in parts {
            if part.dim() != 1 {
                return Err(AlgebraError::NotSplitCommutative(format!("joint eigenspace of dim {}", part.dim())));
            }
            let v = part.basis()[0].clone();
            let sq = a.mul(&v, &v);
            let Some(k) = v.iter().position(|x| !x.is_zero()) else { continue };
            let c = &sq[k] / &v[k];
            if c.is_zero() {
                return Err(AlgebraError::NotSplitCommutative("nilpotent element".into()));
            }
            idems.push(v.iter().map(|x| x / &c).collect::<Vec<Q>>());
        }
        let span = Subspace::from_vectors(a.dim(), idems.clone());
        if span.dim() != a.dim() {
            return Err(AlgebraError::NotSplitCommutative("idempotents do not span".into()));
        }
        let mut maps = Vec::with_capacity(a.semigroup.len());
        for g in a.semigroup.elements() {
            let mut m = Vec::with_capacity(idems.len());
            for e in &idems {
                let img = a.act(g, e);
                if is_zero_vec(&img) {
                    m.push(None);
                } else {
                    let t = idems.iter().position(|f| *f == img).ok_or_else(|| {
                        AlgebraError::NotSplitCommutative("action does not permute minimal idempotents".into())
                    })?;
                    m.push(Some(t));
                }
            }
            maps.push(m);
        }
        let points = (0..idems.len()).map(|i| format!("p{i}")).collect();
        Ok((CommutativeGAlgebra { points, semigroup: Arc::clone(&a.semigroup), maps }, idems))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build, build_spec};
    use crate::linalg::q;

    fn sgp(spec: &str) -> Arc<FiniteInvSgp> {
        Arc::new(build_spec(spec).unwrap())
    }

    #[test]
    fn trivial_and_c0x_are_valid() {
        for spec in ["chain:2", "cyclic:3", "brandt_unital:2", "symmetric_inverse:2", "diamond"] {
            let s = sgp(spec);
            let c0 = c0x(&Spectrum::new(&s));
            assert!(c0.validate().passed(), "{}", c0.validate());
        }
        for spec in ["chain:3", "cyclic:2", "symmetric_inverse:2", "group_with_zero:2"] {
            let t = trivial(&sgp(spec));
            assert!(t.validate().passed(), "{spec}: {}", t.validate());
        }
    }

    #[test]
    fn trivial_fails_when_nonzero_elements_multiply_to_zero() {
        let t = trivial(&sgp("brandt_unital:2"));
        let r = t.validate();
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().name, "semigroup homomorphism");
    }

    #[test]
    fn non_central_action_is_caught() {
        // ℂ² with the 2-chain idempotent swapping nothing but projecting off-diagonally
        let s = sgp("chain:2");
        let mut alpha_e = QMatrix::zeros(2, 2);
        alpha_e.set(0, 0, q(1));
        alpha_e.set(0, 1, q(1));
        let diag = FinDimGAlgebra::from_rule(
            "C2",
            vec!["a".into(), "b".into()],
            |i, j| if i == j { unit_vec(2, i) } else { zero_vec(2) },
            QMatrix::identity(2),
            Arc::clone(&s),
            vec![QMatrix::identity(2), alpha_e],
        );
        assert!(!diag.validate().passed());
    }

    #[test]
    fn balanced_tensor_examples() {
        let s = sgp("chain:2");
        let x = Spectrum::new(&s);
        let c0 = c0x(&x);
        assert_eq!(balanced_tensor(&c0, &c0).dim(), 2);
        let c = trivial(&s);
        assert_eq!(balanced_tensor(&c, &c).dim(), 1);
        // ℂ_e: e acts as 1; ℂ_{1−e}: e acts as 0
        let on = with_action(&c, &s, vec![QMatrix::identity(1), QMatrix::identity(1)], "C_e");
        let off = with_action(&c, &s, vec![QMatrix::identity(1), QMatrix::zeros(1, 1)], "C_1-e");
        assert!(on.validate().passed() && off.validate().passed());
        assert_eq!(balanced_tensor(&on, &off).dim(), 0);
        let bt = balanced_tensor(&c0, &c0);
        assert!(bt.validate().passed());
    }

    #[test]
    fn cutdown_of_c0x() {
        let s = sgp("chain:2");
        let c0 = c0x(&Spectrum::new(&s));
        let (pa, qa) = cutdown(&c0, 1).unwrap();
        assert_eq!((pa.dim(), qa.dim()), (1, 1));
        let (all, none) = cutdown(&c0, 0).unwrap();
        assert_eq!((all.dim(), none.dim()), (2, 0));
        let s3 = sgp("symmetric_group:3");
        assert!(matches!(cutdown(&trivial(&s3), 1), Err(AlgebraError::NotCentral(_))));
    }

    #[test]
    fn unit_and_json_round_trip() {
        let s = sgp("chain:2");
        let m2 = matrix_algebra(&s, 2);
        assert!(m2.validate().passed());
        let u = m2.unit().unwrap();
        assert_eq!(u, vec![q(1), q(0), q(0), q(1)]);
        let back = FinDimGAlgebra::from_json(&m2.to_json()).unwrap();
        assert_eq!(back.to_json(), m2.to_json());
    }

    #[test]
    fn commutative_view_round_trip() {
        let s = Arc::new(build("symmetric_inverse", &[2]).unwrap());
        let c0 = c0x(&Spectrum::new(&s));
        let (view, idems) = CommutativeGAlgebra::from_algebra(&c0).unwrap();
        assert_eq!(idems.len(), c0.dim());
        assert!(view.to_algebra("again").validate().passed());
    }

    #[test]
    fn homomorphism_checks() {
        let s = sgp("chain:2");
        let c0 = Arc::new(c0x(&Spectrum::new(&s)));
        let id = StarHomomorphism::identity(&c0);
        assert!(id.verify(&same_semigroup_pairs(&s), true).passed());
        let zero = StarHomomorphism::new(&c0, &c0, QMatrix::zeros(2, 2));
        let r = zero.verify(&same_semigroup_pairs(&s), true);
        assert!(!r.passed());
        assert!(r.checks.iter().filter(|c| c.name != "bijective").all(|c| c.pass));
    }
}
