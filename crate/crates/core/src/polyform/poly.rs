//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Q};

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Q::one());
        p
    }

    /// `c + Σ lin[i] x_i`.
    pub fn affine(c: &Q, lin: &[Q]) -> Self {
        let n = lin.len();
        let mut p = Self::constant(n, c.clone());
        for (i, a) in lin.iter().enumerate() {
            p = p + Self::var(n, i).scale(a);
        }
        p
    }

    pub fn monomial(exp: Exponent, c: Q) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Exponent, c: Q) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Q::zero)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms.contains_key(&vec![0; self.nvars]) => Some(self.constant_term()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, a * Q::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, a) in &self.terms {
            let mut t = a.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `x_i := subs[i]`; the result lives in the variables of `subs`.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars, "one substitution per variable");
        let m = subs.first().map_or(0, Poly::nvars);
        let mut cache: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::one(m), s.clone()]).collect();
        let mut out = Poly::zero(m);
        for (e, a) in &self.terms {
            let mut t = Poly::constant(m, a.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            out = out + t;
        }
        out
    }

    /// Same polynomial in `n >= nvars` variables (new variables appended).
    pub fn extend_vars(&self, n: usize) -> Poly {
        let mut out = Poly::zero(n);
        for (e, a) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(n, 0);
            out.terms.insert(e2, a.clone());
        }
        out
    }

    /// Exact integral over the standard simplex `{s >= 0, Σs <= 1}` in all variables:
    /// `∫ s^a = Π a_i! / (n + |a|)!`.
    pub fn integrate_standard_simplex(&self) -> Q {
        let n = self.nvars;
        let mut total = Q::zero();
        for (e, a) in &self.terms {
            let num: BigInt = e.iter().map(|&k| rational::factorial(k as usize)).product();
            let deg: usize = e.iter().map(|&k| k as usize).sum();
            total += a * Q::new(num, rational::factorial(n + deg));
        }
        total
    }

    /// `(c, lin)` with `self = c + Σ lin[i] x_i`; `None` if the degree exceeds one.
    pub fn affine_parts(&self) -> Option<(Q, Vec<Q>)> {
        if self.degree() > 1 {
            return None;
        }
        let lin = (0..self.nvars)
            .map(|i| {
                let mut e = vec![0; self.nvars];
                e[i] = 1;
                self.terms.get(&e).cloned().unwrap_or_else(Q::zero)
            })
            .collect();
        Some((self.constant_term(), lin))
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms.iter().map(|(e, c)| Term { exp: e.clone(), coeff: c.clone() }).collect()
    }

    pub fn from_terms(nvars: usize, terms: &[Term]) -> Option<Poly> {
        let mut p = Poly::zero(nvars);
        for t in terms {
            if t.exp.len() != nvars {
                return None;
            }
            p.add_term(t.exp.clone(), t.coeff.clone());
        }
        Some(p)
    }
}

/// Serialized monomial `coeff · x^exp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp: Vec<u32>,
    #[serde(with = "rational")]
    pub coeff: Q,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, a) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", rational::to_string(a))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, a) in rhs.terms {
            self.add_term(e, a);
        }
        self
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.clone() + rhs.clone()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for a in self.terms.values_mut() {
            *a = -a.clone();
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.clone() - rhs.clone()
    }
}

impl Mul for &Poly {
    type Output = Poly;
    // exponents of a product add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, a1) in &self.terms {
            for (e2, a2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, a1 * a2);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn arithmetic_and_derivative() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x * &x) * &y; // x^2 y
        assert_eq!(p.derivative(0), (&x * &y).scale(&q(2)));
        assert_eq!(p.eval(&[q(3), q(2)]), q(18));
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn compose_substitutes() {
        let x = Poly::var(1, 0);
        let p = &x * &x; // x^2
        let t = Poly::var(2, 0);
        let s = Poly::var(2, 1);
        let sub = &t + &s;
        assert_eq!(p.compose(std::slice::from_ref(&sub)), &sub * &sub);
    }

    #[test]
    fn simplex_integrals() {
        // ∫_0^1 s ds = 1/2; ∫ over triangle of s t = 1/24
        assert_eq!(Poly::var(1, 0).integrate_standard_simplex(), qf(1, 2));
        let st = &Poly::var(2, 0) * &Poly::var(2, 1);
        assert_eq!(st.integrate_standard_simplex(), qf(1, 24));
        assert_eq!(Poly::one(2).integrate_standard_simplex(), qf(1, 2));
    }
}
