use crate::numerics::{CMatrix, Cx, Real};

/// σ₁ = diag(e^{−4πi/5}, e^{3πi/5}), σ₂ = F σ₁ F with the golden-ratio F.
pub(super) fn generators<R: Real>() -> Vec<CMatrix<R>> {
    let q = |n: i64, d: i64| R::from_ratio(n, d);
    let s5 = q(5, 1).sqrt();
    // cos(4π/5) = −(1+√5)/4, sin(4π/5) = √(10−2√5)/4
    let c45 = -(q(1, 1) + s5.clone()) / q(4, 1);
    let s45 = (q(10, 1) - q(2, 1) * s5.clone()).sqrt() / q(4, 1);
    // cos(3π/5) = (1−√5)/4, sin(3π/5) = √(10+2√5)/4
    let c35 = (q(1, 1) - s5.clone()) / q(4, 1);
    let s35 = (q(10, 1) + q(2, 1) * s5.clone()).sqrt() / q(4, 1);
    let s1 = CMatrix::diag(vec![Cx::new(c45, -s45), Cx::new(c35, s35)]);

    let phi = (q(1, 1) + s5) / q(2, 1);
    let inv_phi = q(1, 1) / phi.clone();
    let inv_sqrt_phi = inv_phi.clone().sqrt();
    let re = |x: R| Cx::new(x, R::zero());
    let f = CMatrix::from_rows(vec![
        vec![re(inv_phi.clone()), re(inv_sqrt_phi.clone())],
        vec![re(inv_sqrt_phi), re(-inv_phi)],
    ])
    .expect("finite");
    let s2 = f.mul(&s1).mul(&f);
    vec![s1, s2]
}
