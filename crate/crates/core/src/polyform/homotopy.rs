//! Cone homotopy for star-shaped regions: `d h ω + h d ω = ω` for forms of positive degree.

use super::form::{indices, Form};
use super::poly::Poly;
use crate::polytope::Polytope;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("cone point lies outside the polytope")]
    NotInPolytope,
    #[error("cone point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("the homotopy is defined on forms of positive degree")]
    ZeroDegree,
}

/// `h ω = Σ_I Σ_j (-1)^j (∫₀¹ t^{k-1} f_I(x0 + t(x - x0)) dt) (x_{i_j} - x0_{i_j}) dx_{I∖i_j}`.
pub fn cone_homotopy(p: &Polytope, x0: &[Q], w: &Form) -> Result<Form, HomotopyError> {
    let n = w.nvars();
    if x0.len() != n || p.dim != n {
        return Err(HomotopyError::Dimension { expected: n, got: x0.len() });
    }
    if !p.contains_closure(x0) {
        return Err(HomotopyError::NotInPolytope);
    }
    let k = w.degree();
    if k == 0 {
        return Err(HomotopyError::ZeroDegree);
    }
    // variables x_0..x_{n-1}, t = x_n
    let t = Poly::var(n + 1, n);
    let ray: Vec<Poly> = (0..n)
        .map(|i| {
            let c = Poly::constant(n + 1, x0[i].clone());
            &c + &(&t * &(&Poly::var(n + 1, i) - &c))
        })
        .collect();
    let mut out = Form::zero(n, k - 1);
    for (b, f) in w.terms() {
        let g = &f.compose(&ray) * &t.pow(k as u32 - 1);
        let mut radial = Poly::zero(n);
        for (e, a) in g.terms() {
            let m = e[n];
            let mut e2 = e.clone();
            e2.pop();
            radial.add_term(e2, a / Q::from_integer((m + 1).into()));
        }
        if radial.is_zero() {
            continue;
        }
        let idx = indices(*b);
        for (j, &i) in idx.iter().enumerate() {
            let shift = &Poly::var(n, i) - &Poly::constant(n, x0[i].clone());
            let mut coeff = &radial * &shift;
            if j % 2 == 1 {
                coeff = -coeff;
            }
            let rest: Vec<usize> = idx.iter().copied().filter(|&r| r != i).collect();
            out = out.add(&Form::monomial(coeff, &rest));
        }
    }
    Ok(out)
}

/// `d(hω) + h(dω) - ω`, which vanishes for every form of positive degree.
pub fn homotopy_defect(p: &Polytope, x0: &[Q], w: &Form) -> Result<Form, HomotopyError> {
    let hw = cone_homotopy(p, x0, w)?;
    let dw = w.d();
    let hdw = if dw.is_zero() || dw.degree() > w.nvars() {
        Form::zero(w.nvars(), w.degree())
    } else {
        cone_homotopy(p, x0, &dw)?
    };
    Ok(hw.d().add(&hdw).sub(w))
}
