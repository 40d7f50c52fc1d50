//! Genus-zero model: the maps `F_i` from configurations of marked points on the projective
//! line to projective space, in exact rational-complex arithmetic.

use std::fmt;

use num::complex::Complex;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Q};

pub type C = Complex<Q>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Finite(C),
    Infinity,
}

impl Point {
    pub fn finite(re: Q, im: Q) -> Self {
        Point::Finite(C::new(re, im))
    }

    pub fn real(x: Q) -> Self {
        Point::Finite(C::new(x, Q::zero()))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Finite(z) => write!(f, "{}", complex_to_string(z)),
        }
    }
}

pub fn complex_to_string(z: &C) -> String {
    if z.im.is_zero() {
        return rational::to_string(&z.re);
    }
    let sign = if z.im.is_negative() { '-' } else { '+' };
    format!("{}{}{}i", rational::to_string(&z.re), sign, rational::to_string(&z.im.abs()))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Model0Error {
    #[error("need at least 3 points, got {0}")]
    TooFew(usize),
    #[error("points {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("at most one point may be at infinity")]
    SeveralInfinite,
    #[error("point index {0} out of range")]
    Index(usize),
    #[error("cannot parse point `{0}`")]
    Parse(String),
    #[error("degenerate Möbius transformation")]
    Degenerate,
}

/// Pairwise distinct marked points on the projective line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    points: Vec<Point>,
}

impl PointConfig {
    pub fn new(points: Vec<Point>) -> Result<Self, Model0Error> {
        if points.len() < 3 {
            return Err(Model0Error::TooFew(points.len()));
        }
        if points.iter().filter(|p| **p == Point::Infinity).count() > 1 {
            return Err(Model0Error::SeveralInfinite);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Model0Error::Coincident(i, j));
                }
            }
        }
        Ok(PointConfig { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same configuration with every point finite, moved by `z ↦ 1/(z - c)` when needed.
    fn all_finite(&self) -> Vec<C> {
        if self.points.iter().all(|p| matches!(p, Point::Finite(_))) {
            return self.points.iter().map(|p| if let Point::Finite(z) = p { z.clone() } else { unreachable!() }).collect();
        }
        // c off every finite point: real part beyond all of them
        let mut c = Q::one();
        for p in &self.points {
            if let Point::Finite(z) = p {
                if z.re >= c {
                    c = &z.re + Q::one();
                }
            }
        }
        let m = Mobius::new(C::zero(), C::one(), C::one(), C::new(-c, Q::zero())).expect("invertible");
        self.points.iter().map(|p| match m.apply(p) {
            Point::Finite(z) => z,
            Point::Infinity => unreachable!("pole avoided"),
        }).collect()
    }

    /// Relabels points: position `k` of the result holds point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        PointConfig { points: perm.iter().map(|&i| self.points[i].clone()).collect() }
    }
}

/// Homogeneous coordinates, compared up to a nonzero scalar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectivePoint {
    #[serde(serialize_with = "ser_coords", deserialize_with = "de_coords")]
    pub coords: Vec<C>,
}

fn ser_coords<S: serde::Serializer>(xs: &[C], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(complex_to_string))
}

fn de_coords<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<C>, D::Error> {
    let raw: Vec<String> = Vec::deserialize(d)?;
    raw.iter().map(|s| parse_complex(s).map_err(serde::de::Error::custom)).collect()
}

impl ProjectivePoint {
    pub fn coordinate_sum(&self) -> C {
        self.coords.iter().fold(C::zero(), |a, b| a + b)
    }

    /// Scaled so that the first nonzero coordinate is one.
    pub fn normalized(&self) -> ProjectivePoint {
        let lead = self.coords.iter().find(|z| !z.is_zero()).cloned().unwrap_or_else(C::one);
        ProjectivePoint { coords: self.coords.iter().map(|z| z / &lead).collect() }
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coords.len();
        if n != other.coords.len() {
            return false;
        }
        (0..n).all(|j| (0..n).all(|k| &self.coords[j] * &other.coords[k] == &self.coords[k] * &other.coords[j]))
    }
}

impl Eq for ProjectivePoint {}

/// `(f_i(x_j))_{j ≠ i}` with `f_i(z) = 1/(z - x_i) + b`, `b` chosen so the coordinates sum to zero.
pub fn f_map(config: &PointConfig, i: usize) -> Result<ProjectivePoint, Model0Error> {
    if i >= config.len() {
        return Err(Model0Error::Index(i));
    }
    let x = config.all_finite();
    let n = x.len();
    let inv: Vec<C> = (0..n).filter(|&j| j != i).map(|j| (&x[j] - &x[i]).inv()).collect();
    let b = -inv.iter().fold(C::zero(), |a, z| a + z) / C::new(Q::from_integer(((n - 1) as i64).into()), Q::zero());
    Ok(ProjectivePoint { coords: inv.into_iter().map(|z| z + &b).collect() })
}

/// `(F_1, …, F_n)`.
pub fn full_map(config: &PointConfig) -> Result<Vec<ProjectivePoint>, Model0Error> {
    (0..config.len()).map(|i| f_map(config, i)).collect()
}

/// `z ↦ (a z + b) / (c z + d)` with `ad - bc ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Mobius {
    pub fn new(a: C, b: C, c: C, d: C) -> Result<Self, Model0Error> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Model0Error::Degenerate);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn apply(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => {
                if self.c.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite(&self.a / &self.c)
                }
            }
            Point::Finite(z) => {
                let den = &self.c * z + &self.d;
                if den.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite((&self.a * z + &self.b) / den)
                }
            }
        }
    }

    pub fn apply_config(&self, config: &PointConfig) -> PointConfig {
        PointConfig { points: config.points.iter().map(|p| self.apply(p)).collect() }
    }
}

/// `(z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))` for four distinct finite points.
pub fn cross_ratio(z: [&C; 4]) -> C {
    ((z[0] - z[2]) * (z[1] - z[3])) / ((z[0] - z[3]) * (z[1] - z[2]))
}

/// Cross-ratio of a four-point configuration, after moving every point to the affine line.
pub fn config_cross_ratio(config: &PointConfig) -> Option<C> {
    if config.len() != 4 {
        return None;
    }
    let x = config.all_finite();
    Some(cross_ratio([&x[0], &x[1], &x[2], &x[3]]))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` or `inf` with rational `a`, `b`.
pub fn parse_point(s: &str) -> Result<Point, Model0Error> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(Point::Infinity);
    }
    parse_complex(t).map(Point::Finite)
}

pub fn parse_complex(s: &str) -> Result<C, Model0Error> {
    let err = || Model0Error::Parse(s.to_string());
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C::new(rational::parse(t).map_err(|_| err())?, Q::zero()));
    };
    // split at the last sign that is not the leading one
    let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other.strip_prefix('+').unwrap_or(other),
    };
    Ok(C::new(rational::parse(re).map_err(|_| err())?, rational::parse(im).map_err(|_| err())?))
}

pub fn parse_config(s: &str) -> Result<PointConfig, Model0Error> {
    PointConfig::new(s.split(',').map(parse_point).collect::<Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn re(x: i64) -> Point {
        Point::real(q(x))
    }

    #[test]
    fn three_points_map_to_one_point() {
        let a = PointConfig::new(vec![re(0), re(1), re(5)]).unwrap();
        let b = PointConfig::new(vec![Point::finite(q(2), q(3)), re(-7), Point::Infinity]).unwrap();
        assert_eq!(full_map(&a).unwrap(), full_map(&b).unwrap());
    }

    #[test]
    fn coordinates_sum_to_zero() {
        let cfg = PointConfig::new(vec![re(0), re(1), Point::finite(qf(1, 2), q(2)), re(-3), Point::Infinity]).unwrap();
        for f in full_map(&cfg).unwrap() {
            assert!(f.coordinate_sum().is_zero());
        }
    }

    #[test]
    fn mobius_invariance() {
        let cfg = PointConfig::new(vec![re(0), re(1), re(3), Point::finite(q(-1), q(2)), Point::Infinity]).unwrap();
        let m = Mobius::new(C::new(q(2), q(0)), C::one(), C::one(), C::new(q(3), q(0))).unwrap();
        assert_eq!(full_map(&cfg).unwrap(), full_map(&m.apply_config(&cfg)).unwrap());
    }

    #[test]
    fn four_points_separated_by_cross_ratio() {
        let a = PointConfig::new(vec![re(0), re(1), re(3), Point::Infinity]).unwrap();
        let b = PointConfig::new(vec![re(0), re(1), re(4), Point::Infinity]).unwrap();
        assert_ne!(full_map(&a).unwrap(), full_map(&b).unwrap());
        assert_ne!(config_cross_ratio(&a), config_cross_ratio(&b));
    }

    #[test]
    fn permutation_equivariance() {
        let cfg = PointConfig::new(vec![re(0), re(1), re(3), re(7)]).unwrap();
        let perm = [2, 0, 3, 1];
        let f = full_map(&cfg).unwrap();
        let g = full_map(&cfg.permuted(&perm)).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            // F_i of the relabeled configuration lists the other points in the new order
            let others: Vec<usize> = perm.iter().copied().filter(|&j| j != i).collect();
            let mut sorted = others.clone();
            sorted.sort();
            let coords = others.iter().map(|j| f[i].coords[sorted.iter().position(|s| s == j).unwrap()].clone()).collect();
            assert_eq!(g[k], ProjectivePoint { coords });
        }
    }

    #[test]
    fn errors_and_parsing() {
        assert_eq!(PointConfig::new(vec![re(0), re(0), re(1)]), Err(Model0Error::Coincident(0, 1)));
        assert_eq!(PointConfig::new(vec![re(0), Point::Infinity, Point::Infinity]), Err(Model0Error::SeveralInfinite));
        assert_eq!(parse_complex("1/2-3i").unwrap(), C::new(qf(1, 2), q(-3)));
        assert_eq!(parse_complex("-i").unwrap(), C::new(q(0), q(-1)));
        assert_eq!(parse_complex("-2").unwrap(), C::new(q(-2), q(0)));
        assert_eq!(parse_complex("4i").unwrap(), C::new(q(0), q(4)));
        assert_eq!(parse_point("inf").unwrap(), Point::Infinity);
        assert!(parse_complex("x").is_err());
        assert_eq!(parse_config("0,1,2+i,inf").unwrap().len(), 4);
    }
}
