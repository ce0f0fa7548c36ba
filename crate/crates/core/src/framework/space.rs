//! Finite metric spaces and extended nonnegative values.

use std::fmt;
use std::ops::Add;

use thiserror::Error;

/// Absolute slack used when validating the triangle inequality of a distance
/// matrix. All downstream arithmetic is short chains of `max`/`min`/`abs`
/// over inputs of moderate magnitude, so 1e-9 absorbs rounding without
/// masking genuine violations.
pub const METRIC_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("distance matrix is not square: {rows} rows, row {row} has {cols} columns (expected {expected})")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
        expected: usize,
    },
    #[error("{ids} point ids for a {n}x{n} matrix")]
    IdCountMismatch { ids: usize, n: usize },
    #[error("dist[{i}][{j}] = {value} is not a finite nonnegative number")]
    BadEntry { i: usize, j: usize, value: f64 },
    #[error("dist[{i}][{i}] = {value}, diagonal must be exactly zero")]
    DiagonalNotZero { i: usize, value: f64 },
    #[error("dist[{i}][{j}] = {ij} but dist[{j}][{i}] = {ji}")]
    NotSymmetric { i: usize, j: usize, ij: f64, ji: f64 },
    #[error("triangle inequality fails: dist[{i}][{k}] = {lhs} > dist[{i}][{j}] + dist[{j}][{k}] = {rhs}")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        lhs: f64,
        rhs: f64,
    },
    #[error("point {0} has dimension {1}, expected {2}")]
    MixedDimensions(usize, usize, usize),
}

/// A finite set of labelled points with an explicit, validated distance
/// matrix. This is the discrete stand-in for a compact metric space: every
/// construction checks zero diagonal, symmetry, nonnegativity and the
/// triangle inequality (the latter with [`METRIC_SLACK`] absolute slack).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    point_ids: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    pub fn new(point_ids: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let n = dist.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        if point_ids.len() != n {
            return Err(SpaceError::IdCountMismatch {
                ids: point_ids.len(),
                n,
            });
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != n {
                return Err(SpaceError::NotSquare {
                    rows: n,
                    row,
                    cols: r.len(),
                    expected: n,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = dist[i][j];
                if !v.is_finite() || v < 0.0 {
                    return Err(SpaceError::BadEntry { i, j, value: v });
                }
            }
            if dist[i][i] != 0.0 {
                return Err(SpaceError::DiagonalNotZero {
                    i,
                    value: dist[i][i],
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i][j] != dist[j][i] {
                    return Err(SpaceError::NotSymmetric {
                        i,
                        j,
                        ij: dist[i][j],
                        ji: dist[j][i],
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = dist[i][k];
                    let rhs = dist[i][j] + dist[j][k];
                    if lhs > rhs + METRIC_SLACK {
                        return Err(SpaceError::TriangleViolation { i, j, k, lhs, rhs });
                    }
                }
            }
        }
        Ok(Self { point_ids, dist })
    }

    /// Builds a space from a bare matrix, labelling points `p0`, `p1`, ...
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let ids = (0..dist.len()).map(|i| format!("p{i}")).collect();
        Self::new(ids, dist)
    }

    /// Builds a space from points in R^n under the Euclidean distance.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self, SpaceError> {
        if points.is_empty() {
            return Err(SpaceError::Empty);
        }
        let dim = points[0].len();
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(SpaceError::MixedDimensions(i, p.len(), dim));
            }
        }
        let n = points.len();
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean_distance(&points[i], &points[j]);
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        Self::from_matrix(dist)
    }

    pub fn len(&self) -> usize {
        self.point_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty spaces
    }

    pub fn point_ids(&self) -> &[String] {
        &self.point_ids
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for row in &self.dist {
            for &v in row {
                d = d.max(v);
            }
        }
        d
    }

    /// The same point set with every distance multiplied by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self, SpaceError> {
        let dist = self
            .dist
            .iter()
            .map(|row| row.iter().map(|v| v * lambda).collect())
            .collect();
        Self::new(self.point_ids.clone(), dist)
    }
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A nonnegative real extended with a distinguished infinite value, the
/// codomain of the infimum engine: the infimum over an empty morphism set
/// is infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    /// Wraps a finite value. Panics on negative or non-finite input; every
    /// functional in this crate is a max of absolute values, so a violation
    /// here is an internal bug, not a user error.
    pub fn finite(v: f64) -> Self {
        assert!(
            v.is_finite() && v >= 0.0,
            "extended real must wrap a finite nonnegative value, got {v}"
        );
        ExtendedReal::Finite(v)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(*v),
            ExtendedReal::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => *v,
            ExtendedReal::Infinity => f64::INFINITY,
        }
    }

    /// `self <= rhs + tol`, with infinity absorbing.
    pub fn le_with_tolerance(&self, rhs: &ExtendedReal, tol: f64) -> bool {
        match (self, rhs) {
            (_, ExtendedReal::Infinity) => true,
            (ExtendedReal::Infinity, ExtendedReal::Finite(_)) => false,
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => *a <= *b + tol,
        }
    }

    /// Symmetric closeness with absolute tolerance; two infinities agree.
    pub fn approx_eq(&self, rhs: &ExtendedReal, tol: f64) -> bool {
        match (self, rhs) {
            (ExtendedReal::Infinity, ExtendedReal::Infinity) => true,
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::Infinity,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (ExtendedReal::Infinity, ExtendedReal::Infinity) => Some(std::cmp::Ordering::Equal),
            (ExtendedReal::Infinity, ExtendedReal::Finite(_)) => Some(std::cmp::Ordering::Greater),
            (ExtendedReal::Finite(_), ExtendedReal::Infinity) => Some(std::cmp::Ordering::Less),
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinity => write!(f, "infinity"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonzero_diagonal() {
        let err = FiniteMetricSpace::from_matrix(vec![vec![0.1]]).unwrap_err();
        assert_eq!(err, SpaceError::DiagonalNotZero { i: 0, value: 0.1 });
    }

    #[test]
    fn rejects_asymmetry() {
        let err =
            FiniteMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert!(matches!(err, SpaceError::NotSymmetric { i: 0, j: 1, .. }));
    }

    #[test]
    fn rejects_triangle_violation() {
        // d(0,2) = 5 > d(0,1) + d(1,2) = 2
        let m = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let err = FiniteMetricSpace::from_matrix(m).unwrap_err();
        assert!(matches!(err, SpaceError::TriangleViolation { .. }));
    }

    #[test]
    fn euclidean_points_validate() {
        let s = FiniteMetricSpace::from_points(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(s.distance(0, 1), 5.0);
        assert_eq!(s.diameter(), 5.0);
    }

    #[test]
    fn rejects_nan_entries() {
        let err =
            FiniteMetricSpace::from_matrix(vec![vec![0.0, f64::NAN], vec![f64::NAN, 0.0]])
                .unwrap_err();
        assert!(matches!(err, SpaceError::BadEntry { .. }));
    }

    #[test]
    fn extended_real_ordering() {
        let a = ExtendedReal::finite(1.0);
        let b = ExtendedReal::finite(2.0);
        assert!(a < b);
        assert!(b < ExtendedReal::Infinity);
        assert_eq!(a + b, ExtendedReal::finite(3.0));
        assert_eq!(a + ExtendedReal::Infinity, ExtendedReal::Infinity);
        assert!(ExtendedReal::Infinity.le_with_tolerance(&ExtendedReal::Infinity, 0.0));
        assert!(!ExtendedReal::Infinity.le_with_tolerance(&a, 1e9));
    }

    #[test]
    fn display_infinity() {
        assert_eq!(ExtendedReal::Infinity.to_string(), "infinity");
    }
}
