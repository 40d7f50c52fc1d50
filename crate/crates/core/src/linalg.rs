//! Exact Gaussian elimination over the rationals.

use num::{One, Signed, Zero};

use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

/// Reduces `m` to reduced row echelon form in place and returns the pivot columns.
/// Columns are scanned in `column_order`; pass `0..ncols` for the usual order.
pub fn rref_with_order(m: &mut Matrix, column_order: &[usize]) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in column_order {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    rref_with_order(m, &(0..ncols).collect::<Vec<_>>())
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

pub fn determinant(m: &Matrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0].iter_mut().zip(&top[c]).skip(c) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Unique solution of the square system `a x = b`, if `a` is invertible.
pub fn solve_square(a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut aug: Matrix = a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    let pivots = rref_with_order(&mut aug, &(0..n).collect::<Vec<_>>());
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

/// Solution set of `m x = rhs` written as `x[dep] = offset + Σ coeff · x[free]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub ncols: usize,
    pub free: Vec<usize>,
    pub dependent: Vec<usize>,
    /// `offset[k]` and `coeffs[k][j]` give `x[dependent[k]]` in terms of `x[free[j]]`.
    pub offset: Vec<Q>,
    pub coeffs: Vec<Vec<Q>>,
}

impl AffineSolution {
    /// Full vector from the free coordinates.
    pub fn point(&self, free_values: &[Q]) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.ncols];
        for (j, &f) in self.free.iter().enumerate() {
            x[f] = free_values[j].clone();
        }
        for (k, &d) in self.dependent.iter().enumerate() {
            let mut v = self.offset[k].clone();
            for (j, c) in self.coeffs[k].iter().enumerate() {
                v += c * &free_values[j];
            }
            x[d] = v;
        }
        x
    }

    /// Row `i` of the map from free coordinates to all coordinates: `x[i] = const + lin · free`.
    pub fn coordinate(&self, i: usize) -> (Q, Vec<Q>) {
        if let Some(j) = self.free.iter().position(|&f| f == i) {
            let mut lin = vec![Q::zero(); self.free.len()];
            lin[j] = Q::one();
            (Q::zero(), lin)
        } else {
            let k = self.dependent.iter().position(|&d| d == i).expect("coordinate is free or dependent");
            (self.offset[k].clone(), self.coeffs[k].clone())
        }
    }
}

/// Solves `m x = rhs`, choosing pivots by scanning columns in `column_order`.
/// `None` when the system is inconsistent.
pub fn solve_affine(m: &Matrix, rhs: &[Q], column_order: &[usize]) -> Option<AffineSolution> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix = m.iter().zip(rhs).map(|(row, b)| row.iter().cloned().chain([b.clone()]).collect()).collect();
    let pivots = rref_with_order(&mut aug, column_order);
    for row in aug.iter().skip(pivots.len()) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let free: Vec<usize> = column_order.iter().copied().filter(|c| !pivots.contains(c)).collect();
    let offset = (0..pivots.len()).map(|k| aug[k][ncols].clone()).collect();
    let coeffs = (0..pivots.len()).map(|k| free.iter().map(|&f| -aug[k][f].clone()).collect()).collect();
    Some(AffineSolution { ncols, free, dependent: pivots, offset, coeffs })
}

/// Basis of the null space of `m`.
pub fn kernel(m: &Matrix, ncols: usize) -> Vec<Vec<Q>> {
    let zeros = vec![Q::zero(); m.len()];
    let sol = solve_affine(m, &zeros, &(0..ncols).collect::<Vec<_>>()).expect("homogeneous system");
    (0..sol.free.len())
        .map(|j| {
            let mut unit = vec![Q::zero(); sol.free.len()];
            unit[j] = Q::one();
            sol.point(&unit)
        })
        .collect()
}

pub fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn det_and_rank() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(determinant(&a), q(5));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), q(-1));
    }

    #[test]
    fn solve_and_kernel() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(solve_square(&a, &[q(3), q(4)]).unwrap(), vec![q(1), q(1)]);
        let k = kernel(&m(&[&[1, 1, 1]]), 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!(v.iter().cloned().sum::<Q>(), q(0));
        }
    }

    #[test]
    fn affine_solution_respects_order() {
        let a = m(&[&[2, 2, 2]]);
        let s = solve_affine(&a, &[q(12)], &[2, 0, 1]).unwrap();
        assert_eq!(s.dependent, vec![2]);
        assert_eq!(s.free, vec![0, 1]);
        assert_eq!(s.point(&[q(1), q(2)]), vec![q(1), q(2), q(3)]);
        assert!(solve_affine(&m(&[&[1, 1], &[1, 1]]), &[q(1), q(2)], &[0, 1]).is_none());
        assert_eq!(s.coordinate(2), (q(6), vec![q(-1), q(-1)]));
        let _ = qf(1, 2);
    }
}
