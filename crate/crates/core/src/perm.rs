//! Permutations of `0..len` stored as image arrays.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(len: usize) -> Self {
        Perm((0..len).collect())
    }

    /// Builds from an image array; `None` if it is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Builds from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(len: usize, cycles: &[Vec<usize>]) -> Option<Self> {
        let mut img: Vec<Option<usize>> = vec![None; len];
        for c in cycles {
            for (k, &h) in c.iter().enumerate() {
                let next = c[(k + 1) % c.len()];
                if h >= len || next >= len || img[h].is_some() {
                    return None;
                }
                img[h] = Some(next);
            }
        }
        let images = img.iter().enumerate().map(|(i, x)| x.unwrap_or(i)).collect();
        Self::from_images(images)
    }

    /// The canonical fixed-point-free involution `2k <-> 2k+1`.
    pub fn edge_involution(len: usize) -> Self {
        Perm((0..len).map(|h| h ^ 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `(self * other)(i) = self(other(i))`: `other` acts first.
    pub fn compose(&self, other: &Perm) -> Self {
        Perm(other.0.iter().map(|&j| self.0[j]).collect())
    }

    /// Cycles listed from their smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                c.push(h);
                h = self.0[h];
            }
            out.push(c);
        }
        out
    }

    /// `bij * self * bij^-1`, i.e. the same permutation on relabeled points.
    pub fn conjugate_by(&self, bij: &Perm) -> Self {
        bij.compose(self).compose(&bij.inverse())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            if c.len() > 1 {
                write!(f, "(")?;
                for (k, h) in c.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{h}")?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_order() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // b first: 1 -> 2 -> 2 under a
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(a.compose(&b).apply(2), 0);
        assert_eq!(a.compose(&a.inverse()), Perm::identity(3));
    }

    #[test]
    fn rejects_overlapping_cycles() {
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_none());
    }
}
