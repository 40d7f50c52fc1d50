//! Witten–Kontsevich correlators `⟨τ_{d_1} … τ_{d_n}⟩` from the DVV recursion, with
//! `⟨τ_0³⟩ = 1` and `⟨τ_1⟩ = 1/24` as the only seeds.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Zero};

type Q = BigRational;

fn double_factorial(k: i64) -> BigInt {
    // (-1)!! = 1
    let mut out = BigInt::one();
    let mut i = k;
    while i > 1 {
        out *= i;
        i -= 2;
    }
    out
}

fn genus_of(d: &[u32]) -> Option<u32> {
    let n = d.len() as i64;
    let s: i64 = d.iter().map(|&x| x as i64).sum();
    let three_g = s + 3 - n;
    (three_g >= 0 && three_g % 3 == 0).then_some((three_g / 3) as u32)
}

pub struct Oracle {
    memo: HashMap<Vec<u32>, Q>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Oracle { memo: HashMap::new() }
    }

    pub fn correlator(&mut self, d: &[u32]) -> Q {
        let mut key = d.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.compute(&key);
        self.memo.insert(key, v.clone());
        v
    }

    fn compute(&mut self, d: &[u32]) -> Q {
        let Some(g) = genus_of(d) else { return Q::zero() };
        let n = d.len();
        if 2 * g as usize + n < 3 {
            return if g == 1 && d == [1] { Q::new(1.into(), 24.into()) } else { Q::zero() };
        }
        if d == [0, 0, 0] {
            return Q::one();
        }
        if d == [1] {
            return Q::new(1.into(), 24.into());
        }
        // d is sorted: a nonzero exponent sits at the end unless all vanish
        let Some(&top) = d.last().filter(|&&x| x > 0) else {
            // string equation reduces all-zero lists other than τ_0³ to zero
            return Q::zero();
        };
        let k = (top - 1) as i64;
        let rest = &d[..n - 1];
        let mut total = Q::zero();
        for j in 0..rest.len() {
            let dj = rest[j] as i64;
            let coeff = Q::new(double_factorial(2 * k + 2 * dj + 1), double_factorial(2 * dj - 1));
            let mut next: Vec<u32> = rest.to_vec();
            next[j] = (dj + k) as u32;
            total += coeff * self.correlator(&next);
        }
        let half = Q::new(1.into(), 2.into());
        for r in 0..k {
            let s = k - 1 - r;
            let w = Q::from_integer(double_factorial(2 * r + 1) * double_factorial(2 * s + 1)) * &half;
            let mut both: Vec<u32> = rest.to_vec();
            both.push(r as u32);
            both.push(s as u32);
            total += &w * self.correlator(&both);
            let m = rest.len();
            for mask in 0u32..(1 << m) {
                let mut left = vec![r as u32];
                let mut right = vec![s as u32];
                for (i, &x) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                total += &w * self.correlator(&left) * self.correlator(&right);
            }
        }
        total / Q::from_integer(double_factorial(2 * k + 3))
    }
}

#[cfg(test)]
mod tests {}
