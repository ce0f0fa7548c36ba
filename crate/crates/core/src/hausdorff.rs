//! Hausdorff distance between finite subsets of a common ambient metric
//! space, both as a correspondence functional (sup of ambient distance over
//! matched pairs) and in the classic directed closed form. Minimizing the
//! functional over all correspondences recovers the closed form exactly,
//! which the tests exercise as a dual-route check.

use std::sync::Arc;

use thiserror::Error;

use crate::framework::{
    euclidean_distance, Correspondence, FiniteMetricSpace, Functional, FunctionalError,
};

#[derive(Debug, Error, PartialEq)]
pub enum SubsetError {
    #[error("a subset must contain at least one point")]
    Empty,
    #[error("point {index} has dimension {got}, expected {expected}")]
    MixedDimensions {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },
    #[error("member index {index} is out of range for an ambient space of {size} points")]
    MemberOutOfRange { index: usize, size: usize },
}

#[derive(Debug, Clone)]
enum SubsetRep {
    /// Points given by coordinates in R^n, Euclidean norm.
    Coords { dim: usize, points: Vec<Vec<f64>> },
    /// Indices into an explicit shared distance matrix.
    Shared {
        space: Arc<FiniteMetricSpace>,
        members: Vec<usize>,
    },
}

/// A nonempty finite subset of an ambient metric space. The ambient space is
/// either R^n with the Euclidean norm or a shared [`FiniteMetricSpace`];
/// two subsets are comparable only within the same ambient space.
#[derive(Debug, Clone)]
pub struct AmbientSubset {
    rep: SubsetRep,
}

impl AmbientSubset {
    pub fn from_coords(points: Vec<Vec<f64>>) -> Result<Self, SubsetError> {
        if points.is_empty() {
            return Err(SubsetError::Empty);
        }
        let dim = points[0].len();
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(SubsetError::MixedDimensions {
                    index,
                    got: p.len(),
                    expected: dim,
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(SubsetError::NonFiniteCoordinate { index });
            }
        }
        Ok(Self {
            rep: SubsetRep::Coords { dim, points },
        })
    }

    /// A subset of a shared ambient space, given by member indices. The
    /// `Arc` identity decides comparability: subsets taken from the same
    /// handle live in the same ambient space.
    pub fn from_members(
        space: Arc<FiniteMetricSpace>,
        members: Vec<usize>,
    ) -> Result<Self, SubsetError> {
        if members.is_empty() {
            return Err(SubsetError::Empty);
        }
        for &index in &members {
            if index >= space.len() {
                return Err(SubsetError::MemberOutOfRange {
                    index,
                    size: space.len(),
                });
            }
        }
        Ok(Self {
            rep: SubsetRep::Shared { space, members },
        })
    }

    pub fn len(&self) -> usize {
        match &self.rep {
            SubsetRep::Coords { points, .. } => points.len(),
            SubsetRep::Shared { members, .. } => members.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty subsets
    }

    /// Ambient dimension in coordinate mode.
    pub fn dim(&self) -> Option<usize> {
        match &self.rep {
            SubsetRep::Coords { dim, .. } => Some(*dim),
            SubsetRep::Shared { .. } => None,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), FunctionalError> {
        match (&self.rep, &other.rep) {
            (SubsetRep::Coords { dim: a, .. }, SubsetRep::Coords { dim: b, .. }) => {
                if a == b {
                    Ok(())
                } else {
                    Err(FunctionalError::DimensionMismatch(*a, *b))
                }
            }
            (SubsetRep::Shared { space: a, .. }, SubsetRep::Shared { space: b, .. }) => {
                if Arc::ptr_eq(a, b) {
                    Ok(())
                } else {
                    Err(FunctionalError::AmbientMismatch)
                }
            }
            _ => Err(FunctionalError::AmbientMismatch),
        }
    }

    /// Ambient distance between `self[i]` and `other[j]`; the subsets must
    /// already be known compatible.
    fn ambient_distance(&self, i: usize, other: &Self, j: usize) -> f64 {
        match (&self.rep, &other.rep) {
            (SubsetRep::Coords { points: a, .. }, SubsetRep::Coords { points: b, .. }) => {
                euclidean_distance(&a[i], &b[j])
            }
            (
                SubsetRep::Shared {
                    space, members: a, ..
                },
                SubsetRep::Shared { members: b, .. },
            ) => space.distance(a[i], b[j]),
            _ => unreachable!("compatibility checked before distance"),
        }
    }
}

fn check_arity(
    rho: &Correspondence,
    x: &AmbientSubset,
    y: &AmbientSubset,
) -> Result<(), FunctionalError> {
    if rho.left_len() != x.len() || rho.right_len() != y.len() {
        return Err(FunctionalError::ArityMismatch {
            expected_left: x.len(),
            expected_right: y.len(),
            got_left: rho.left_len(),
            got_right: rho.right_len(),
        });
    }
    Ok(())
}

/// Cost of a correspondence as a Hausdorff matching: the largest ambient
/// distance across matched pairs.
pub fn hausdorff_functional(
    rho: &Correspondence,
    x: &AmbientSubset,
    y: &AmbientSubset,
) -> Result<f64, FunctionalError> {
    check_arity(rho, x, y)?;
    x.check_compatible(y)?;
    Ok(rho
        .pairs()
        .iter()
        .map(|&(i, j)| x.ambient_distance(i, y, j))
        .fold(0.0, f64::max))
}

/// The classic two-sided formula
/// `max(max_x min_y d(x, y), max_y min_x d(x, y))`, used as the independent
/// oracle for the correspondence route.
pub fn hausdorff_closed_form(
    x: &AmbientSubset,
    y: &AmbientSubset,
) -> Result<f64, FunctionalError> {
    x.check_compatible(y)?;
    Ok(directed(x, y).max(directed(y, x)))
}

fn directed(from: &AmbientSubset, to: &AmbientSubset) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..from.len() {
        let mut nearest = f64::INFINITY;
        for j in 0..to.len() {
            nearest = nearest.min(from.ambient_distance(i, to, j));
        }
        worst = worst.max(nearest);
    }
    worst
}

/// The Hausdorff instantiation of the framework: morphisms are all
/// correspondences, cost is the sup of ambient distance over matched pairs.
pub struct HausdorffFunctional;

impl Functional for HausdorffFunctional {
    type Space = AmbientSubset;

    fn name(&self) -> &'static str {
        "hausdorff"
    }

    fn context_descriptor(&self) -> &'static str {
        "subsets of a shared ambient metric space"
    }

    fn point_count(space: &AmbientSubset) -> usize {
        space.len()
    }

    fn evaluate(
        &self,
        rho: &Correspondence,
        x: &AmbientSubset,
        y: &AmbientSubset,
    ) -> Result<f64, FunctionalError> {
        hausdorff_functional(rho, x, y)
    }
}
