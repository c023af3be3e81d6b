//! `Θ: Ind Res(B) → C₀(G_H/H, B)` and its tensor version, built as explicit
//! matrices and verified exhaustively.

use std::sync::Arc;

use crate::bitset::{ElementSet, ProjectionSet};
use crate::galgebra::{
    balanced_ideal, quotient, quotient_lift, same_semigroup_pairs, sparse, subalgebra, tensor, verify_map,
    FinDimGAlgebra,
};
use crate::linalg::{QMatrix, Subspace, Q};
use crate::report::Report;
use crate::semigroup::SubSemigroup;
use crate::spectrum::Spectrum;

use super::groupoid::{assoc_groupoid, FiniteGroupoid};
use super::induced::{build_induced, InducedAlgebra};
use super::InductionError;

fn instance(x: &Spectrum, hprime: &ElementSet, label: &str) -> String {
    let s = x.semigroup();
    let h: Vec<&str> = hprime.iter().map(|g| s.name(g)).collect();
    format!("G={{{}}} H′={{{}}} {label}", s.names().join(","), h.join(","))
}

/// Ranges `r_c r_c*` of the class representatives.
fn class_ranges(ind: &InducedAlgebra) -> Vec<ProjectionSet> {
    (0..ind.gh.num_classes()).map(|c| ind.x().ext_range(ind.gh.rep(c))).collect()
}

/// `C₀(G_H/H, B) = ⊕_c δ_c ⊗ α(r_c r_c*)B` with `g(δ_c ⊗ b) = [g*g ≥ r_c r_c*] δ_{[g r_c]} ⊗ α_g(b)`.
fn class_valued(
    ind: &InducedAlgebra,
    b: &FinDimGAlgebra,
) -> Result<(FinDimGAlgebra, Vec<Subspace>, Vec<usize>), InductionError> {
    let x = ind.x();
    let gh = &ind.gh;
    let w: Vec<Subspace> = class_ranges(ind).iter().map(|q| b.projection_op(q).column_space()).collect();
    let mut offsets = Vec::with_capacity(w.len());
    let mut n = 0;
    for wc in &w {
        offsets.push(n);
        n += wc.dim();
    }
    let mut basis = Vec::with_capacity(n);
    let mut products = vec![Vec::new(); n * n];
    let mut star = QMatrix::zeros(n, n);
    for (c, wc) in w.iter().enumerate() {
        let rname = gh.name(x, gh.reps[c]);
        for i in 0..wc.dim() {
            basis.push(format!("δ[{rname}]⊗w{i}"));
            let s = wc.coords(&b.star_vec(&wc.basis()[i])).expect("star-closed");
            for (k, v) in s.into_iter().enumerate() {
                star.set(offsets[c] + k, offsets[c] + i, v);
            }
            for j in 0..wc.dim() {
                let prod = wc.coords(&b.mul(&wc.basis()[i], &wc.basis()[j])).expect("ideal");
                products[(offsets[c] + i) * n + offsets[c] + j] =
                    sparse(&prod).into_iter().map(|(k, v)| (offsets[c] + k, v)).collect();
            }
        }
    }
    let mut action = Vec::with_capacity(b.semigroup.len());
    for g in b.semigroup.elements() {
        let mut m = QMatrix::zeros(n, n);
        for c in 0..gh.num_classes() {
            let Some(z) = gh.act_left(x, g, gh.reps[c]) else { continue };
            let c2 = gh.class_of[z];
            for (i, v) in w[c].basis().iter().enumerate() {
                let coords = w[c2]
                    .coords(&b.act(g, v))
                    .ok_or_else(|| InductionError::InvalidCoefficientAlgebra("α_g leaves the target fiber".into()))?;
                for (k, val) in coords.into_iter().enumerate() {
                    m.set(offsets[c2] + k, offsets[c] + i, val);
                }
            }
        }
        action.push(m);
    }
    let alg =
        FinDimGAlgebra::new(format!("C0(G_H/H,{})", b.label), basis, products, star, Arc::clone(&b.semigroup), action);
    Ok((alg, w, offsets))
}

/// Build `Θ(f) = Σ_c δ_c ⊗ r_c(f(r_c))` for `H` associated to `H′` and check it.
pub fn theta_res_ind(x: &Arc<Spectrum>, hprime: &ElementSet, b: &FinDimGAlgebra) -> Result<Report, InductionError> {
    let h = Arc::new(assoc_groupoid(x, hprime)?);
    let (resb, incl) = h.restrict_algebra(b)?;
    let ind = build_induced(&SubSemigroup::whole(x.semigroup()), &h, &Arc::new(resb))?;
    let (target, w, offsets) = class_valued(&ind, b)?;
    let mut theta = QMatrix::zeros(target.dim(), ind.dim());
    for c in 0..ind.gh.num_classes() {
        let r = ind.gh.rep(c);
        let op = b.ext_op(r.g, &r.p).mul(&incl);
        for (i, v) in ind.fibers[c].basis().iter().enumerate() {
            let coords = w[c]
                .coords(&op.mul_vec(v))
                .ok_or_else(|| InductionError::InvalidCoefficientAlgebra("Θ leaves the class fiber".into()))?;
            for (k, val) in coords.into_iter().enumerate() {
                theta.set(offsets[c] + k, ind.offsets[c] + i, val);
            }
        }
    }
    let mut report = Report::new("theta-res-ind", instance(x, hprime, &format!("B={}", b.label)));
    report.absorb("Ind Res B", ind.report());
    report.absorb("C0(G_H/H,B)", target.validate());
    report.absorb("Θ", verify_map(&ind.algebra, &target, &theta, &same_semigroup_pairs(&b.semigroup), true));
    report.dim("H", h.len());
    report.dim("classes", ind.gh.num_classes());
    Ok(report)
}

/// The central projection `p(δ_c ⊗ a ⊗ b) = δ_c ⊗ a ⊗ α(r_c r_c*)(b)` on
/// `Ind(A) ⊗ B` and both of its corners.
#[derive(Clone, Debug)]
pub struct TensorCorner {
    pub tensor: FinDimGAlgebra,
    pub p: QMatrix,
    pub corner: Subspace,
    pub corner_algebra: FinDimGAlgebra,
    pub complement_algebra: FinDimGAlgebra,
    pub report: Report,
}

pub fn tensor_corner(ind: &InducedAlgebra, b: &FinDimGAlgebra) -> Result<TensorCorner, InductionError> {
    let t = tensor(&ind.algebra, b);
    let ranges = class_ranges(ind);
    let blocks: Vec<QMatrix> = (0..ind.gh.num_classes())
        .map(|c| QMatrix::identity(ind.fibers[c].dim()).kron(&b.projection_op(&ranges[c])))
        .collect();
    let p = QMatrix::direct_sum(&blocks.iter().collect::<Vec<_>>());
    let n = t.dim();
    let mut report = Report::new("central-decomposition", format!("{} ⊗ {}", ind.algebra.label, b.label));
    report.check("p² = p", p.mul(&p) == p, Some("p is not idempotent".into()));
    let central = (0..n).find(|&i| {
        let e = t.basis_vec(i);
        let (l, r) = (t.left_mul(&e), t.right_mul(&e));
        p.mul(&l) != l.mul(&p) || p.mul(&r) != r.mul(&p)
    });
    report.check_result("p central", central.map_or(Ok(()), |i| Err(format!("fails against {}", t.basis[i]))));
    let equi = t.semigroup.elements().find(|&g| p.mul(&t.action[g]) != t.action[g].mul(&p));
    report.check_result("p commutes with the action", equi.map_or(Ok(()), |g| Err(t.semigroup.name(g).to_string())));
    let corner = p.column_space();
    let complement = QMatrix::identity(n).sub(&p).column_space();
    let (corner_algebra, _) = subalgebra(&t, &corner, &format!("{}⊗→{}", ind.algebra.label, b.label))?;
    let (complement_algebra, _) = subalgebra(&t, &complement, "(1-p)")?;
    report.check(
        "corner ⊕ complement",
        corner.dim() + complement.dim() == n,
        Some(format!("{} + {} ≠ {n}", corner.dim(), complement.dim())),
    );
    report.dim("tensor", n);
    report.dim("corner", corner.dim());
    report.dim("complement", complement.dim());
    Ok(TensorCorner { tensor: t, p, corner, corner_algebra, complement_algebra, report })
}

/// `p` for `Ind_H^G(A) ⊗ B`.
pub fn central_decomp_tensor(
    h: &Arc<FiniteGroupoid>,
    a: &Arc<FinDimGAlgebra>,
    b: &FinDimGAlgebra,
) -> Result<TensorCorner, InductionError> {
    let ind = build_induced(&SubSemigroup::whole(h.x.semigroup()), h, a)?;
    tensor_corner(&ind, b)
}

/// `Θ: Ind(A ⊗^{X_H} Res B) → Ind(A) ⊗→ B`, `δ_c ⊗ a ⊗ b ↦ δ_c ⊗ a ⊗ r_c(b)`.
pub fn theta_res_ind_tensor(
    h: &Arc<FiniteGroupoid>,
    a: &Arc<FinDimGAlgebra>,
    b: &FinDimGAlgebra,
) -> Result<Report, InductionError> {
    let x = &h.x;
    let g = SubSemigroup::whole(x.semigroup());
    let (resb, incl) = h.restrict_algebra(b)?;
    let t = tensor(a, &resb);
    let ideal = balanced_ideal(&t, a, &resb);
    let (bt, _) = quotient(&t, &ideal, &format!("{}⊗X Res {}", a.label, b.label));
    let lift = quotient_lift(&ideal);
    let src = build_induced(&g, h, &Arc::new(bt))?;
    let inda = build_induced(&g, h, a)?;
    let tc = tensor_corner(&inda, b)?;
    let (da, db) = (a.dim(), b.dim());
    let mut theta = QMatrix::zeros(tc.corner.dim(), src.dim());
    for c in 0..src.gh.num_classes() {
        let r = src.gh.rep(c);
        let u = h.elem_of_arrow[src.unit_of_class(c)];
        let op = a.action[u].kron(&b.ext_op(r.g, &r.p).mul(&incl).mul(&resb.action[u])).mul(&lift);
        let va = &inda.fibers[c];
        for (i, v) in src.fibers[c].basis().iter().enumerate() {
            let y = op.mul_vec(v);
            let mut image = vec![Q::default(); inda.dim() * db];
            for j in 0..db {
                let column: Vec<Q> = (0..da).map(|k| y[k * db + j].clone()).collect();
                let coords = va
                    .coords(&column)
                    .ok_or_else(|| InductionError::InvalidCoefficientAlgebra("A-part leaves α_u(A)".into()))?;
                for (k, val) in coords.into_iter().enumerate() {
                    image[(inda.offsets[c] + k) * db + j] = val;
                }
            }
            let coords = tc
                .corner
                .coords(&image)
                .ok_or_else(|| InductionError::InvalidCoefficientAlgebra("Θ leaves the p-corner".into()))?;
            for (k, val) in coords.into_iter().enumerate() {
                theta.set(k, src.offsets[c] + i, val);
            }
        }
    }
    let s = x.semigroup();
    let hnames: Vec<&str> = h.arrows.iter().map(|t| s.name(t.g)).collect();
    let mut report = Report::new(
        "theta-res-ind-tensor",
        format!("G={{{}}} H∋{{{}}} A={} B={}", s.names().join(","), hnames.join(","), a.label, b.label),
    );
    report.absorb("Ind(A⊗Res B)", src.report());
    report.absorb("p", tc.report.clone());
    report.absorb("Ind(A)⊗→B", tc.corner_algebra.validate());
    report.absorb("Θ", verify_map(&src.algebra, &tc.corner_algebra, &theta, &same_semigroup_pairs(s), true));
    Ok(report)
}
