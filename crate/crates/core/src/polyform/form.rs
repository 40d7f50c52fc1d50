//! Differential forms with polynomial coefficients on a coordinate space.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::{Poly, Term};
use crate::rational::Q;

/// Basis `k`-vector `dx_I` encoded as a bit mask of the indices in `I`.
pub type Basis = u64;

pub const MAX_VARS: usize = 64;

pub fn basis(indices: &[usize]) -> Basis {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices(b: Basis) -> Vec<usize> {
    (0..MAX_VARS).filter(|&i| b >> i & 1 == 1).collect()
}

/// Sign of `dx_I ∧ dx_J` relative to `dx_{I∪J}`; zero if they overlap.
pub fn wedge_sign(i: Basis, j: Basis) -> i32 {
    if i & j != 0 {
        return 0;
    }
    // count pairs (a ∈ I, b ∈ J) with a > b
    let mut inversions = 0;
    for b in indices(j) {
        inversions += (i >> (b + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Basis, Poly>,
}

impl Form {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        Form { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn function(f: Poly) -> Self {
        let mut out = Form::zero(f.nvars(), 0);
        out.add_term(0, f);
        out
    }

    /// `dx_i`.
    pub fn dx(nvars: usize, i: usize) -> Self {
        let mut out = Form::zero(nvars, 1);
        out.add_term(basis(&[i]), Poly::one(nvars));
        out
    }

    /// `f dx_{i1} ∧ … ∧ dx_{ik}` in the given order (sign applied).
    pub fn monomial(f: Poly, idx: &[usize]) -> Self {
        let n = f.nvars();
        let mut out = Form::function(f);
        for &i in idx {
            out = out.wedge(&Form::dx(n, i));
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Basis, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: Basis) -> Poly {
        self.terms.get(&b).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn add_term(&mut self, b: Basis, f: Poly) {
        debug_assert_eq!(b.count_ones() as usize, self.degree);
        if f.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(|| Poly::zero(self.nvars));
        *entry = &*entry + &f;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (b, f) in &other.terms {
            out.add_term(*b, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Q) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (b, f) in &self.terms {
            out.add_term(*b, f.scale(c));
        }
        out
    }

    pub fn mul_function(&self, g: &Poly) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (b, f) in &self.terms {
            out.add_term(*b, f * g);
        }
        out
    }

    /// Exterior product. A result of degree above the ambient dimension is the zero form.
    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero(self.nvars, self.degree + other.degree);
        for (bi, fi) in &self.terms {
            for (bj, fj) in &other.terms {
                let s = wedge_sign(*bi, *bj);
                if s == 0 {
                    continue;
                }
                let prod = fi * fj;
                out.add_term(bi | bj, if s > 0 { prod } else { -prod });
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.nvars, self.degree + 1);
        for (b, f) in &self.terms {
            for j in 0..self.nvars {
                let df = f.derivative(j);
                if df.is_zero() {
                    continue;
                }
                let s = wedge_sign(1 << j, *b);
                if s == 0 {
                    continue;
                }
                out.add_term(b | (1 << j), if s > 0 { df } else { -df });
            }
        }
        out
    }

    /// Pull-back along the polynomial map `x_i = map[i](y)`.
    pub fn pullback(&self, map: &[Poly]) -> Form {
        assert_eq!(map.len(), self.nvars, "one component per ambient coordinate");
        let m = map.first().map_or(0, Poly::nvars);
        let differentials: Vec<Form> = map
            .iter()
            .map(|p| {
                let mut f = Form::zero(m, 1);
                for j in 0..m {
                    f.add_term(1 << j, p.derivative(j));
                }
                f
            })
            .collect();
        let mut out = Form::zero(m, self.degree);
        for (b, f) in &self.terms {
            let mut t = Form::function(f.compose(map));
            for i in indices(*b) {
                t = t.wedge(&differentials[i]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Whether any term involves `dx_j`.
    pub fn involves_differential(&self, j: usize) -> bool {
        self.terms.keys().any(|b| b >> j & 1 == 1)
    }

    pub fn max_coefficient_degree(&self) -> u32 {
        self.terms.values().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn to_file(&self) -> FormFile {
        FormFile {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(b, f)| FormTerm { dx: indices(*b), coeff: f.to_terms() }).collect(),
        }
    }

    pub fn from_file(file: &FormFile) -> Option<Form> {
        let mut out = Form::zero(file.nvars, file.degree);
        for t in &file.terms {
            if t.dx.len() != file.degree || t.dx.iter().any(|&i| i >= file.nvars) {
                return None;
            }
            let p = Poly::from_terms(file.nvars, &t.coeff)?;
            out = out.add(&Form::monomial(p, &t.dx));
        }
        Some(out)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let dx: Vec<String> = indices(*b).iter().map(|i| format!("dx{i}")).collect();
            write!(f, "({p:?}) {}", dx.join("^"))?;
        }
        Ok(())
    }
}

/// Sparse JSON form: `dx` lists differential indices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFile {
    pub nvars: usize,
    pub degree: usize,
    pub terms: Vec<FormTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTerm {
    pub dx: Vec<usize>,
    pub coeff: Vec<Term>,
}
