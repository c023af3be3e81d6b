//! Algebraic crossed products of finite-dimensional algebras by finite
//! inverse semigroups and groupoids, and their semisimple quotients.
//!
//! Crossed products carry no action of their own; they are returned as
//! algebras over the trivial group so the generic algebra tooling applies.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::builders::build_spec;
use crate::galgebra::{ideal_closure, quotient, sparse, FinDimGAlgebra};
use crate::induction::FiniteGroupoid;
use crate::linalg::{
    axpy, minimal_polynomial, q_to_f64, simultaneous_eigenspaces, zero_vec, QMatrix, QPoly, Subspace, Q,
};
use crate::semigroup::FiniteInvSgp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrossedError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("center of dimension {center_dim} does not split over the rationals: {witness}")]
    CenterDoesNotSplit { witness: String, center_dim: usize },
    #[error("numeric block count failed: {0}")]
    Numeric(String),
}

#[derive(Clone, Copy, Debug)]
pub enum CrossedKind<'a> {
    Universal,
    Sieben,
    Groupoid(&'a FiniteGroupoid),
}

impl CrossedKind<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            CrossedKind::Universal => "universal",
            CrossedKind::Sieben => "sieben",
            CrossedKind::Groupoid(_) => "groupoid",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrossedProductAlgebra {
    pub kind: &'static str,
    pub algebra: FinDimGAlgebra,
    /// `Σ_g dim α_{gg*}(A)`, before any Sieben identification.
    pub universal_dim: usize,
}

impl CrossedProductAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

fn trivial_group() -> Arc<FiniteInvSgp> {
    Arc::new(build_spec("trivial").expect("built-in"))
}

/// `span{a δ_g}` over `elems` with `(a δ_g)(b δ_h) = a α_g(b) δ_{gh}`, where
/// `compose` returns `None` for a vanishing product.
fn covariance_algebra(
    a: &FinDimGAlgebra,
    elems: &[usize],
    compose: impl Fn(usize, usize) -> Option<usize>,
    label: &str,
) -> Result<FinDimGAlgebra, CrossedError> {
    let s = &a.semigroup;
    let fibers: Vec<Subspace> = elems.iter().map(|&g| a.action[s.range(g)].column_space()).collect();
    let pos = |g: usize| elems.iter().position(|&h| h == g);
    let mut offsets = Vec::with_capacity(elems.len());
    let mut n = 0;
    for w in &fibers {
        offsets.push(n);
        n += w.dim();
    }
    let index: Vec<(usize, usize)> =
        fibers.iter().enumerate().flat_map(|(k, w)| (0..w.dim()).map(move |i| (k, i))).collect();
    let basis = index.iter().map(|&(k, i)| format!("a{i}δ[{}]", s.name(elems[k]))).collect();

    let place = |k: usize, v: &[Q], what: &str| -> Result<Vec<Q>, CrossedError> {
        let c = fibers[k].coords(v).ok_or_else(|| CrossedError::InvalidAction(format!("{what} leaves α_gg*(A)")))?;
        let mut out = zero_vec(n);
        out[offsets[k]..offsets[k] + c.len()].clone_from_slice(&c);
        Ok(out)
    };
    let mut products = Vec::with_capacity(n * n);
    for &(kg, i) in &index {
        for &(kh, j) in &index {
            let (g, h) = (elems[kg], elems[kh]);
            let value = match compose(g, h) {
                Some(gh) => {
                    let v = a.mul(&fibers[kg].basis()[i], &a.act(g, &fibers[kh].basis()[j]));
                    match pos(gh) {
                        Some(k) => place(k, &v, &format!("δ[{}]δ[{}]", s.name(g), s.name(h)))?,
                        None if v.iter().all(Zero::is_zero) => zero_vec(n),
                        None => return Err(CrossedError::InvalidAction(format!("{} is not acting", s.name(gh)))),
                    }
                }
                None => zero_vec(n),
            };
            products.push(sparse(&value));
        }
    }
    let mut star = QMatrix::zeros(n, n);
    for (col, &(k, i)) in index.iter().enumerate() {
        let g = elems[k];
        let gs = s.star(g);
        let kk = pos(gs).ok_or_else(|| CrossedError::InvalidAction(format!("{} is not acting", s.name(gs))))?;
        let v = place(kk, &a.act(gs, &a.star_vec(&fibers[k].basis()[i])), "star")?;
        for (r, x) in v.into_iter().enumerate() {
            star.set(r, col, x);
        }
    }
    Ok(FinDimGAlgebra::new(label, basis, products, star, trivial_group(), vec![QMatrix::identity(n)]))
}

pub fn crossed(a: &FinDimGAlgebra, kind: CrossedKind<'_>) -> Result<CrossedProductAlgebra, CrossedError> {
    let s = Arc::clone(&a.semigroup);
    let label = |sym: &str, by: &str| format!("{} {sym} {by}", a.label);
    match kind {
        CrossedKind::Universal | CrossedKind::Sieben => {
            let valid = a.validate();
            if let Some(f) = valid.first_failure() {
                return Err(CrossedError::InvalidAction(format!(
                    "{}: {}",
                    f.name,
                    f.witness.clone().unwrap_or_default()
                )));
            }
            let elems: Vec<usize> = s.elements().collect();
            let by = format!("{{{}}}", s.names().join(","));
            let universal = covariance_algebra(a, &elems, |g, h| Some(s.mul(g, h)), &label("⋊", &by))?;
            let universal_dim = universal.dim();
            if matches!(kind, CrossedKind::Universal) {
                return Ok(CrossedProductAlgebra { kind: kind.name(), algebra: universal, universal_dim });
            }
            let ideal = ideal_closure(&universal, sieben_relations(a, &universal, &elems)?);
            let (algebra, _) = quotient(&universal, &ideal, &label("⋊̂", &by));
            Ok(CrossedProductAlgebra { kind: kind.name(), algebra, universal_dim })
        }
        CrossedKind::Groupoid(h) => {
            if *a.semigroup != *h.h1 {
                return Err(CrossedError::InvalidAction("coefficients are not over the groupoid".into()));
            }
            let valid = h.validate_algebra(a);
            if let Some(f) = valid.first_failure() {
                return Err(CrossedError::InvalidAction(format!(
                    "{}: {}",
                    f.name,
                    f.witness.clone().unwrap_or_default()
                )));
            }
            let compose = |g: usize, k: usize| {
                let gk = h.h1.mul(g, k);
                (!h.h1.is_zero(gk)).then_some(gk)
            };
            let algebra = covariance_algebra(a, &h.elem_of_arrow, compose, &label("⋊̂", "H"))?;
            let universal_dim = algebra.dim();
            Ok(CrossedProductAlgebra { kind: kind.name(), algebra, universal_dim })
        }
    }
}

/// `a δ_e − a δ_f` for `e ≤ f` and `a` in a spanning set of `α_e(A)A`.
fn sieben_relations(
    a: &FinDimGAlgebra,
    universal: &FinDimGAlgebra,
    elems: &[usize],
) -> Result<Vec<Vec<Q>>, CrossedError> {
    let s = &a.semigroup;
    let fibers: Vec<Subspace> = elems.iter().map(|&g| a.action[s.range(g)].column_space()).collect();
    let mut offsets = Vec::with_capacity(elems.len());
    let mut n = 0;
    for w in &fibers {
        offsets.push(n);
        n += w.dim();
    }
    let embed = |g: usize, v: &[Q]| -> Result<Vec<Q>, CrossedError> {
        let c = fibers[g].coords(v).ok_or_else(|| CrossedError::InvalidAction(format!("corner of {}", s.name(g))))?;
        let mut out = zero_vec(n);
        out[offsets[g]..offsets[g] + c.len()].clone_from_slice(&c);
        Ok(out)
    };
    debug_assert_eq!(n, universal.dim());
    let mut gens = Vec::new();
    for e in s.idempotents().iter() {
        let corner = Subspace::from_vectors(
            a.dim(),
            (0..a.dim())
                .flat_map(|i| (0..a.dim()).map(move |j| (i, j)))
                .map(|(i, j)| a.mul(&a.act(e, &a.basis_vec(i)), &a.basis_vec(j)))
                .collect::<Vec<_>>(),
        );
        for f in s.idempotents().iter().filter(|&f| f != e && s.leq(e, f)) {
            for v in corner.basis() {
                let lhs = embed(e, v)?;
                let rhs = embed(f, v)?;
                gens.push(lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect());
            }
        }
    }
    Ok(gens)
}

/// `{z : zx = xz for all x}`.
pub fn center(a: &FinDimGAlgebra) -> Subspace {
    let n = a.dim();
    let mut rows = Vec::new();
    for j in 0..n {
        // Σ_k z_k (b_k b_j − b_j b_k) = 0, one row per output coordinate
        let mut block = vec![zero_vec(n); n];
        for k in 0..n {
            for (l, c) in a.basis_product(k, j) {
                block[*l][k] += c;
            }
            for (l, c) in a.basis_product(j, k) {
                block[*l][k] -= c;
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    if rows.is_empty() {
        return Subspace::full(n);
    }
    Subspace::from_vectors(n, QMatrix::from_rows(rows, n).null_space())
}

#[derive(Clone, Debug)]
pub struct SemisimpleDecomposition {
    pub radical_dim: usize,
    pub quotient: FinDimGAlgebra,
    /// `A → A/rad`.
    pub projection: QMatrix,
    /// Center of the quotient, in quotient coordinates.
    pub center: Subspace,
    /// Central primitive idempotents when the center splits over the
    /// rationals, else the minimal polynomial factor that does not.
    pub split: Result<Vec<Vec<Q>>, QPoly>,
}

impl SemisimpleDecomposition {
    pub fn quotient_dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn blocks(&self) -> usize {
        self.center.dim()
    }

    /// Matrix sizes `nᵢ` of the simple blocks, from `dim eᵢA = nᵢ²`.
    pub fn block_dims(&self) -> Option<Vec<usize>> {
        let idems = self.split.as_ref().ok()?;
        let tv = self.quotient.trace_vector();
        idems.iter().map(|e| square_root(&dot(&tv, e))).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "radical_dim": self.radical_dim,
            "quotient_dim": self.quotient_dim(),
            "blocks": self.blocks(),
            "method": if self.split.is_ok() { "exact" } else { "numeric" },
        })
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn square_root(x: &Q) -> Option<usize> {
    if !x.is_integer() || x.is_negative() {
        return None;
    }
    let v = x.to_integer().to_u64()?;
    let r = (v as f64).sqrt().round() as u64;
    (r * r == v).then_some(r as usize)
}

/// Radical as the kernel of the trace form `T_ij = tr L_{bᵢbⱼ}`, and the
/// center of the quotient.
pub fn semisimple_quotient(a: &FinDimGAlgebra) -> SemisimpleDecomposition {
    let n = a.dim();
    let tv = a.trace_vector();
    let mut t = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = a.basis_product(i, j).iter().fold(Q::zero(), |acc, (k, c)| acc + &tv[*k] * c);
            t.set(i, j, v);
        }
    }
    let radical = Subspace::from_vectors(n, t.null_space());
    let (quotient, projection) = quotient(a, &radical, &format!("{}/rad", a.label));
    let z = center(&quotient);
    let split = central_idempotents(&quotient, &z);
    SemisimpleDecomposition { radical_dim: radical.dim(), quotient, projection, center: z, split }
}

fn central_idempotents(q: &FinDimGAlgebra, z: &Subspace) -> Result<Vec<Vec<Q>>, QPoly> {
    let ops: Vec<QMatrix> = z.basis().iter().map(|v| q.left_mul(v)).collect();
    let parts = simultaneous_eigenspaces(&ops, z)?;
    let mut idems: Vec<Vec<Q>> = parts
        .iter()
        .map(|w| {
            // v² = t·v for v spanning a line of the split center
            let v = &w.basis()[0];
            let sq = q.mul(v, v);
            let i = v.iter().position(|x| !x.is_zero()).expect("nonzero");
            let t = &sq[i] / &v[i];
            v.iter().map(|x| x / &t).collect()
        })
        .collect();
    // blocks in order of their first basis coordinate
    idems.sort_by_key(|e| (e.iter().position(|x| !x.is_zero()), e.iter().map(|x| -x.clone()).collect::<Vec<_>>()));
    Ok(idems)
}

pub fn center_dim(a: &FinDimGAlgebra) -> Result<usize, CrossedError> {
    let dec = semisimple_quotient(a);
    match &dec.split {
        Ok(_) => Ok(dec.blocks()),
        Err(w) => Err(CrossedError::CenterDoesNotSplit { witness: w.to_string(), center_dim: dec.blocks() }),
    }
}

/// Block structure over the complex numbers from a random central element:
/// its eigenvalues on the center separate the blocks, and the spectral
/// projections give the block dimensions.
#[derive(Clone, Debug)]
pub struct NumericBlocks {
    pub eigenvalues: Vec<Complex<f64>>,
    /// Central idempotents over ℂ, in quotient coordinates.
    pub idempotents: Vec<Vec<Complex<f64>>>,
    pub block_dims: Vec<usize>,
    pub residual: f64,
}

pub const NUMERIC_TOLERANCE: f64 = 1e-9;

pub fn numeric_blocks(dec: &SemisimpleDecomposition, seed: u64) -> Result<NumericBlocks, CrossedError> {
    let c = dec.blocks();
    let q = &dec.quotient;
    if c == 0 {
        return Ok(NumericBlocks { eigenvalues: vec![], idempotents: vec![], block_dims: vec![], residual: 0.0 });
    }
    let unit = q.unit().ok_or_else(|| CrossedError::Numeric("quotient has no unit".into()))?;
    let unit_z = dec.center.coords(&unit).ok_or_else(|| CrossedError::Numeric("unit is not central".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let coeffs: Vec<Q> = (0..c).map(|_| Q::from_integer(rng.random_range(-9i64..=9).into())).collect();
        let mut zv = zero_vec(q.dim());
        for (k, b) in dec.center.basis().iter().enumerate() {
            axpy(&mut zv, &coeffs[k], b);
        }
        let mz = dec.center.restrict_map(&q.left_mul(&zv), &dec.center).expect("center is a subalgebra");
        let minpoly = minimal_polynomial(&mz);
        if minpoly.degree() < c {
            continue;
        }
        let eig: Vec<Complex<f64>> = mz.to_f64().complex_eigenvalues().iter().copied().collect();
        let residual = eig.iter().map(|l| relative_residual(&minpoly, *l)).fold(0.0, f64::max);
        if residual >= NUMERIC_TOLERANCE {
            return Err(CrossedError::Numeric(format!("eigenvalue residual {residual:e}")));
        }
        let m = mz.to_f64().map(|x| Complex::new(x, 0.0));
        let u = DMatrix::from_iterator(c, 1, unit_z.iter().map(|x| Complex::new(q_to_f64(x), 0.0)));
        let embed = dec.center.embedding_matrix().to_f64().map(|x| Complex::new(x, 0.0));
        let tv: Vec<f64> = q.trace_vector().iter().map(q_to_f64).collect();
        let mut idempotents = Vec::with_capacity(c);
        let mut block_dims = Vec::with_capacity(c);
        for (k, lk) in eig.iter().enumerate() {
            let mut p = DMatrix::<Complex<f64>>::identity(c, c);
            for (_, lj) in eig.iter().enumerate().filter(|(j, _)| *j != k) {
                p = (&m - DMatrix::<Complex<f64>>::identity(c, c) * *lj) * p / (*lk - *lj);
            }
            let e: Vec<Complex<f64>> = (&embed * (p * &u)).iter().copied().collect();
            let tr: Complex<f64> = tv.iter().zip(&e).map(|(t, x)| x * *t).sum();
            let nearest = tr.re.round();
            if (tr - Complex::new(nearest, 0.0)).norm() > 1e-6 * (1.0 + nearest.abs()) || nearest < 1.0 {
                return Err(CrossedError::Numeric(format!("block trace {tr} is not a positive integer")));
            }
            let r = nearest.sqrt().round();
            if r * r != nearest {
                return Err(CrossedError::Numeric(format!("block dimension {nearest} is not a square")));
            }
            block_dims.push(r as usize);
            idempotents.push(e);
        }
        return Ok(NumericBlocks { eigenvalues: eig, idempotents, block_dims, residual });
    }
    Err(CrossedError::Numeric("no separating central element found".into()))
}

/// Newton step `|p(x)/p′(x)|` relative to `1 + |x|`; the roots of a
/// separating element are simple.
fn relative_residual(p: &QPoly, x: Complex<f64>) -> f64 {
    let coeffs: Vec<f64> = p.0.iter().map(q_to_f64).collect();
    let zero = Complex::new(0.0, 0.0);
    let (value, slope) = coeffs.iter().rev().fold((zero, zero), |(v, d), c| (v * x + *c, d * x + v));
    if slope.norm() == 0.0 {
        return f64::INFINITY;
    }
    (value / slope).norm() / (1.0 + x.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgebra::{c0x, direct_sum, matrix_algebra, trivial};
    use crate::induction::assoc_groupoid;
    use crate::spectrum::Spectrum;

    fn sgp(spec: &str) -> Arc<FiniteInvSgp> {
        Arc::new(build_spec(spec).unwrap())
    }

    #[test]
    fn group_algebra_of_z2() {
        let s = sgp("cyclic:2");
        let cp = crossed(&trivial(&s), CrossedKind::Universal).unwrap();
        assert_eq!(cp.dim(), 2);
        assert!(cp.algebra.validate().passed());
        let dec = semisimple_quotient(&cp.algebra);
        assert_eq!((dec.radical_dim, dec.blocks()), (0, 2));
        assert_eq!(dec.block_dims(), Some(vec![1, 1]));
    }

    #[test]
    fn chain_universal_and_sieben() {
        let s = sgp("chain:2");
        let u = crossed(&trivial(&s), CrossedKind::Universal).unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.algebra.is_commutative());
        let dec = semisimple_quotient(&u.algebra);
        assert_eq!((dec.radical_dim, dec.blocks()), (0, 2));
        let sb = crossed(&trivial(&s), CrossedKind::Sieben).unwrap();
        assert_eq!(sb.dim(), 1);
        assert_eq!(sb.universal_dim, 2);
    }

    #[test]
    fn matrix_algebra_is_simple() {
        let s = sgp("trivial");
        let dec = semisimple_quotient(&matrix_algebra(&s, 2));
        assert_eq!((dec.radical_dim, dec.blocks()), (0, 1));
        assert_eq!(dec.block_dims(), Some(vec![2]));
    }

    #[test]
    fn diagonal_center() {
        let s = sgp("trivial");
        let c = trivial(&s);
        let d = direct_sum(&[&c, &c, &c], "C3");
        assert_eq!(center_dim(&d).unwrap(), 3);
    }

    #[test]
    fn z3_center_does_not_split() {
        let s = sgp("cyclic:3");
        let cp = crossed(&trivial(&s), CrossedKind::Universal).unwrap();
        match center_dim(&cp.algebra) {
            Err(CrossedError::CenterDoesNotSplit { witness, center_dim }) => {
                assert_eq!(witness, "x^2 + x + 1");
                assert_eq!(center_dim, 3);
            }
            other => panic!("{other:?}"),
        }
        let nb = numeric_blocks(&semisimple_quotient(&cp.algebra), 7).unwrap();
        assert_eq!(nb.block_dims, vec![1, 1, 1]);
        assert!(nb.residual < NUMERIC_TOLERANCE);
    }

    #[test]
    fn s3_has_three_blocks() {
        let s = sgp("symmetric_group:3");
        let cp = crossed(&trivial(&s), CrossedKind::Universal).unwrap();
        let dec = semisimple_quotient(&cp.algebra);
        assert_eq!(dec.blocks(), 3);
        let mut dims = dec.block_dims().unwrap();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2]);
    }

    #[test]
    fn i2_universal_with_c0x() {
        let s = sgp("symmetric_inverse:2");
        let x = Spectrum::new(&s);
        let cp = crossed(&c0x(&x), CrossedKind::Universal).unwrap();
        let expected: usize = s.elements().map(|g| c0x(&x).action[s.range(g)].rank()).sum();
        assert_eq!(cp.dim(), expected);
        assert!(cp.algebra.validate().passed());
        let dec = semisimple_quotient(&cp.algebra);
        assert_eq!(dec.radical_dim, 0);
        let nb = numeric_blocks(&dec, 1).unwrap();
        assert_eq!(nb.block_dims.len(), dec.blocks());
        let sq: usize = nb.block_dims.iter().map(|d| d * d).sum();
        assert_eq!(sq, dec.quotient_dim());
    }

    #[test]
    fn groupoid_crossed_product_of_units() {
        let s = sgp("symmetric_inverse:2");
        let x = Arc::new(Spectrum::new(&s));
        let h = assoc_groupoid(&x, &s.element_set(s.elements())).unwrap();
        let cp = crossed(&h.c0_units(), CrossedKind::Groupoid(&h)).unwrap();
        assert!(cp.algebra.validate().passed());
        let dec = semisimple_quotient(&cp.algebra);
        assert_eq!(dec.radical_dim, 0);
        let sq: usize = dec.block_dims().unwrap().iter().map(|d| d * d).sum();
        assert_eq!(sq, cp.dim());
    }

    #[test]
    fn invalid_action_rejected() {
        let s = sgp("cyclic:2");
        let mut a = trivial(&s);
        a.action[1] = QMatrix::zeros(1, 1);
        assert!(matches!(crossed(&a, CrossedKind::Universal), Err(CrossedError::InvalidAction(_))));
    }
}
