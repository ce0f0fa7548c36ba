//! Discrete Fréchet pseudo-distance between polygonal curves.
//!
//! Morphisms here are monotone couplings: index walks through the two
//! vertex sequences, non-decreasing in both coordinates — the discrete
//! analogue of non-decreasing surjective reparametrizations, and a proper
//! subset of all correspondences. The distance is computed by the standard
//! dynamic program; a brute-force enumeration of couplings serves as its
//! oracle on small instances. For polygonal curves the discrete value
//! brackets the continuous one within the longest edge length.

use rand::rngs::StdRng;
use rand::Rng;
use thiserror::Error;

use crate::framework::{
    euclidean_distance, Correspondence, Functional, FunctionalError, TooLargeError,
};

/// Guard on `m + n` for exhaustive coupling enumeration; the path count is
/// a Delannoy number and stays below 50k under this bound.
pub const COUPLING_PATH_LIMIT: usize = 14;

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("a polygonal curve needs at least one vertex")]
    Empty,
    #[error("vertex {index} has dimension {got}, expected {expected}")]
    MixedDimensions {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("vertex {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },
}

/// An ordered, nonempty list of vertices in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalCurve {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl PolygonalCurve {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self, CurveError> {
        if vertices.is_empty() {
            return Err(CurveError::Empty);
        }
        let dim = vertices[0].len();
        for (index, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(CurveError::MixedDimensions {
                    index,
                    got: v.len(),
                    expected: dim,
                });
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(CurveError::NonFiniteCoordinate { index });
            }
        }
        Ok(Self { dim, vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty curves
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// The vertex set as an ambient subset, for comparisons against the
    /// Hausdorff distance (which the Fréchet distance dominates).
    pub fn vertex_subset(&self) -> crate::hausdorff::AmbientSubset {
        crate::hausdorff::AmbientSubset::from_coords(self.vertices.clone())
            .expect("curve vertices form a valid subset")
    }
}

/// An index walk `(0,0) = s_1, ..., s_k = (m-1, n-1)` where consecutive
/// steps advance by (1,0), (0,1) or (1,1). As a pair set every coupling is
/// a correspondence, so couplings plug into the shared framework.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneCoupling {
    steps: Vec<(usize, usize)>,
}

impl MonotoneCoupling {
    /// Validates a step list as a coupling of curves with `m` and `n`
    /// vertices.
    pub fn new(
        steps: Vec<(usize, usize)>,
        m: usize,
        n: usize,
    ) -> Result<Self, FunctionalError> {
        if m == 0 || n == 0 {
            return Err(FunctionalError::InvalidCoupling(
                "curves must be nonempty".to_string(),
            ));
        }
        match steps.first() {
            Some(&(0, 0)) => {}
            other => {
                return Err(FunctionalError::InvalidCoupling(format!(
                    "first step must be (0, 0), got {other:?}"
                )))
            }
        }
        let last = *steps.last().expect("nonempty by the first-step check");
        if last != (m - 1, n - 1) {
            return Err(FunctionalError::InvalidCoupling(format!(
                "last step must be ({}, {}), got {last:?}",
                m - 1,
                n - 1
            )));
        }
        for w in steps.windows(2) {
            let (di, dj) = (
                w[1].0 as isize - w[0].0 as isize,
                w[1].1 as isize - w[0].1 as isize,
            );
            if !matches!((di, dj), (1, 0) | (0, 1) | (1, 1)) {
                return Err(FunctionalError::InvalidCoupling(format!(
                    "step {:?} -> {:?} is not a unit advance",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { steps })
    }

    fn from_steps_unchecked(steps: Vec<(usize, usize)>) -> Self {
        Self { steps }
    }

    /// The diagonal coupling of two curves with the same vertex count.
    pub fn diagonal(n: usize) -> Self {
        Self {
            steps: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    /// Left/right vertex counts implied by the endpoints.
    pub fn sides(&self) -> (usize, usize) {
        let &(i, j) = self.steps.last().expect("couplings are nonempty");
        (i + 1, j + 1)
    }

    /// The same walk read backwards, a coupling of the swapped curves.
    pub fn reversed(&self) -> Self {
        Self {
            steps: self.steps.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Reinterprets the walk as a correspondence. Walk order is exactly the
    /// lexicographic order on pairs, so no re-sorting is needed.
    pub fn to_correspondence(&self) -> Correspondence {
        let (m, n) = self.sides();
        Correspondence::new(self.steps.iter().copied(), m, n)
            .expect("a monotone coupling is doubly surjective")
    }

    /// Accepts a correspondence whose pair set is a monotone walk.
    pub fn from_correspondence(rho: &Correspondence) -> Result<Self, FunctionalError> {
        Self::new(rho.pairs().to_vec(), rho.left_len(), rho.right_len())
    }
}

/// Cost of a coupling: the largest vertex distance along the walk.
pub fn frechet_functional(
    coupling: &MonotoneCoupling,
    p: &PolygonalCurve,
    q: &PolygonalCurve,
) -> Result<f64, FunctionalError> {
    if p.dim() != q.dim() {
        return Err(FunctionalError::DimensionMismatch(p.dim(), q.dim()));
    }
    let (m, n) = coupling.sides();
    if m != p.len() || n != q.len() {
        return Err(FunctionalError::InvalidCoupling(format!(
            "coupling ends at ({}, {}) but the curves have {} and {} vertices",
            m - 1,
            n - 1,
            p.len(),
            q.len()
        )));
    }
    Ok(coupling
        .steps
        .iter()
        .map(|&(i, j)| euclidean_distance(&p.vertices[i], &q.vertices[j]))
        .fold(0.0, f64::max))
}

/// Discrete Fréchet distance by the standard dynamic program, with the
/// lexicographically smallest optimal coupling.
///
/// ```
/// use corrdist_core::frechet::{discrete_frechet, PolygonalCurve};
///
/// let p = PolygonalCurve::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
/// let q = PolygonalCurve::new(vec![vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
/// let (value, coupling) = discrete_frechet(&p, &q).unwrap();
/// assert_eq!(value, 1.0);
/// assert_eq!(coupling.steps(), &[(0, 0), (1, 1)]);
/// ```
pub fn discrete_frechet(
    p: &PolygonalCurve,
    q: &PolygonalCurve,
) -> Result<(f64, MonotoneCoupling), FunctionalError> {
    if p.dim() != q.dim() {
        return Err(FunctionalError::DimensionMismatch(p.dim(), q.dim()));
    }
    let (m, n) = (p.len(), q.len());
    let mut d = vec![vec![0.0f64; n]; m];
    for i in 0..m {
        for j in 0..n {
            d[i][j] = euclidean_distance(&p.vertices[i], &q.vertices[j]);
        }
    }
    // best[i][j]: cheapest max-cost of a walk from (i, j) to the end,
    // including (i, j) itself.
    let mut best = vec![vec![f64::INFINITY; n]; m];
    for i in (0..m).rev() {
        for j in (0..n).rev() {
            let tail = if i == m - 1 && j == n - 1 {
                0.0
            } else {
                let mut t = f64::INFINITY;
                if j + 1 < n {
                    t = t.min(best[i][j + 1]);
                }
                if i + 1 < m {
                    t = t.min(best[i + 1][j]);
                    if j + 1 < n {
                        t = t.min(best[i + 1][j + 1]);
                    }
                }
                t
            };
            best[i][j] = d[i][j].max(tail);
        }
    }
    let value = best[0][0];

    // Greedy extraction: repeatedly take the lexicographically smallest
    // successor whose tail still achieves the optimum.
    let mut steps = vec![(0usize, 0usize)];
    let (mut i, mut j) = (0usize, 0usize);
    while (i, j) != (m - 1, n - 1) {
        let candidates = [(i, j + 1), (i + 1, j), (i + 1, j + 1)];
        let next = candidates
            .into_iter()
            .find(|&(ci, cj)| ci < m && cj < n && best[ci][cj] <= value)
            .expect("an optimal tail always has an optimal successor");
        steps.push(next);
        (i, j) = next;
    }
    Ok((value, MonotoneCoupling::from_steps_unchecked(steps)))
}

/// Streams every monotone coupling of curves with `m` and `n` vertices,
/// exactly once, in lexicographic order; the count is the Delannoy number
/// D(m-1, n-1). Guarded by [`COUPLING_PATH_LIMIT`].
pub fn enumerate_couplings(m: usize, n: usize) -> Result<CouplingEnumeration, TooLargeError> {
    assert!(m >= 1 && n >= 1, "curves must be nonempty");
    if m + n > COUPLING_PATH_LIMIT {
        return Err(TooLargeError {
            what: "coupling enumeration",
            size: m + n,
            limit: COUPLING_PATH_LIMIT,
        });
    }
    Ok(CouplingEnumeration {
        m,
        n,
        stack: Vec::new(),
        started: false,
    })
}

/// Depth-first walk over all monotone paths; each stack entry is a path
/// position plus the next step alternative to try (0 = right, 1 = down,
/// 2 = diagonal).
#[derive(Debug)]
pub struct CouplingEnumeration {
    m: usize,
    n: usize,
    stack: Vec<(usize, usize, u8)>,
    started: bool,
}

impl Iterator for CouplingEnumeration {
    type Item = MonotoneCoupling;

    fn next(&mut self) -> Option<MonotoneCoupling> {
        if !self.started {
            self.started = true;
            if self.m == 1 && self.n == 1 {
                return Some(MonotoneCoupling::from_steps_unchecked(vec![(0, 0)]));
            }
            self.stack.push((0, 0, 0));
        }
        loop {
            let (i, j, choice) = match self.stack.last_mut() {
                Some(top) => {
                    let state = (top.0, top.1, top.2);
                    if top.2 < 3 {
                        top.2 += 1;
                    }
                    state
                }
                None => return None,
            };
            if choice >= 3 {
                self.stack.pop();
                continue;
            }
            let next = match choice {
                0 => (i, j + 1),
                1 => (i + 1, j),
                _ => (i + 1, j + 1),
            };
            if next.0 > self.m - 1 || next.1 > self.n - 1 {
                continue;
            }
            if next == (self.m - 1, self.n - 1) {
                let mut steps: Vec<(usize, usize)> =
                    self.stack.iter().map(|&(a, b, _)| (a, b)).collect();
                steps.push(next);
                return Some(MonotoneCoupling::from_steps_unchecked(steps));
            }
            self.stack.push((next.0, next.1, 0));
        }
    }
}

/// A random coupling: uniform over the exhaustive enumeration when the
/// instance is under the guard, otherwise a random monotone walk.
pub fn sample_coupling(m: usize, n: usize, rng: &mut StdRng) -> MonotoneCoupling {
    if let Ok(all) = enumerate_couplings(m, n) {
        let all: Vec<_> = all.collect();
        return all[rng.random_range(0..all.len())].clone();
    }
    let mut steps = vec![(0usize, 0usize)];
    let (mut i, mut j) = (0usize, 0usize);
    while (i, j) != (m - 1, n - 1) {
        let mut options: Vec<(usize, usize)> = Vec::with_capacity(3);
        if j + 1 < n {
            options.push((i, j + 1));
        }
        if i + 1 < m {
            options.push((i + 1, j));
            if j + 1 < n {
                options.push((i + 1, j + 1));
            }
        }
        (i, j) = options[rng.random_range(0..options.len())];
        steps.push((i, j));
    }
    MonotoneCoupling::from_steps_unchecked(steps)
}

/// The Fréchet instantiation of the framework. Its morphism set is the
/// proper subset of correspondences whose pair sets are monotone walks;
/// relational composition can leave that subset, so the subadditivity
/// check only runs on composites that stay inside it.
pub struct FrechetFunctional;

impl Functional for FrechetFunctional {
    type Space = PolygonalCurve;

    fn name(&self) -> &'static str {
        "frechet"
    }

    fn context_descriptor(&self) -> &'static str {
        "polygonal curves in a shared R^n"
    }

    fn point_count(space: &PolygonalCurve) -> usize {
        space.len()
    }

    fn evaluate(
        &self,
        rho: &Correspondence,
        x: &PolygonalCurve,
        y: &PolygonalCurve,
    ) -> Result<f64, FunctionalError> {
        let coupling = MonotoneCoupling::from_correspondence(rho)?;
        frechet_functional(&coupling, x, y)
    }

    fn admits(&self, rho: &Correspondence) -> bool {
        MonotoneCoupling::from_correspondence(rho).is_ok()
    }

    fn composition_closed(&self) -> bool {
        false
    }

    fn morphisms(
        &self,
        x: &PolygonalCurve,
        y: &PolygonalCurve,
    ) -> Result<Box<dyn Iterator<Item = Correspondence>>, TooLargeError> {
        Ok(Box::new(
            enumerate_couplings(x.len(), y.len())?.map(|c| c.to_correspondence()),
        ))
    }

    fn sample_morphism(
        &self,
        x: &PolygonalCurve,
        y: &PolygonalCurve,
        rng: &mut StdRng,
    ) -> Option<Correspondence> {
        Some(sample_coupling(x.len(), y.len(), rng).to_correspondence())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(points: &[(f64, f64)]) -> PolygonalCurve {
        PolygonalCurve::new(points.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap()
    }

    /// Brute-force oracle: minimum of the functional over every coupling.
    fn oracle(p: &PolygonalCurve, q: &PolygonalCurve) -> f64 {
        enumerate_couplings(p.len(), q.len())
            .unwrap()
            .map(|c| frechet_functional(&c, p, q).unwrap())
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn diagonal_on_equal_curves_is_zero() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);
        let c = MonotoneCoupling::diagonal(3);
        assert_eq!(frechet_functional(&c, &p, &p).unwrap(), 0.0);
        let (v, best) = discrete_frechet(&p, &p).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(best, c);
    }

    #[test]
    fn parallel_segments_at_unit_distance() {
        let p = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = curve(&[(0.0, 1.0), (1.0, 1.0)]);
        let c = MonotoneCoupling::diagonal(2);
        assert_eq!(frechet_functional(&c, &p, &q).unwrap(), 1.0);
        let (v, _) = discrete_frechet(&p, &q).unwrap();
        assert_eq!(v, oracle(&p, &q));
        assert_eq!(v, 1.0);
    }

    #[test]
    fn single_vertex_against_segment() {
        let p = curve(&[(0.0, 0.0)]);
        let q = curve(&[(0.0, 0.0), (5.0, 0.0)]);
        let c = MonotoneCoupling::new(vec![(0, 0), (0, 1)], 1, 2).unwrap();
        assert_eq!(frechet_functional(&c, &p, &q).unwrap(), 5.0);
    }

    #[test]
    fn detour_value_from_the_oracle() {
        // Straight segment against a curve with a detour vertex; the
        // expected value was produced by the coupling oracle, not assumed.
        let p = curve(&[(0.0, 0.0), (2.0, 0.0)]);
        let q = curve(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        let expected = oracle(&p, &q);
        let (v, _) = discrete_frechet(&p, &q).unwrap();
        assert_eq!(v, expected);
        assert_eq!(v, 2.0f64.sqrt());
    }

    #[test]
    fn coupling_counts_are_delannoy_numbers() {
        assert_eq!(enumerate_couplings(1, 1).unwrap().count(), 1);
        assert_eq!(enumerate_couplings(2, 2).unwrap().count(), 3);
        assert_eq!(enumerate_couplings(3, 3).unwrap().count(), 13);
    }

    #[test]
    fn enumeration_guard() {
        let err = enumerate_couplings(8, 7).unwrap_err();
        assert_eq!(err.size, 15);
        assert_eq!(err.limit, COUPLING_PATH_LIMIT);
    }

    #[test]
    fn enumerated_couplings_are_valid_and_distinct() {
        let all: Vec<_> = enumerate_couplings(3, 4).unwrap().collect();
        for c in &all {
            assert!(MonotoneCoupling::new(c.steps().to_vec(), 3, 4).is_ok());
        }
        let mut seen = all.clone();
        seen.sort_by(|a, b| a.steps().cmp(b.steps()));
        seen.dedup();
        assert_eq!(seen.len(), all.len());
    }

    #[test]
    fn invalid_couplings_are_rejected() {
        assert!(MonotoneCoupling::new(vec![(0, 1), (1, 1)], 2, 2).is_err());
        assert!(MonotoneCoupling::new(vec![(0, 0)], 2, 2).is_err());
        assert!(MonotoneCoupling::new(vec![(0, 0), (0, 2), (1, 2)], 2, 3).is_err());
    }

    #[test]
    fn argmin_is_lexicographically_smallest() {
        // Both curves constant at the origin: every coupling is optimal, so
        // the reported one must be the lex-smallest path (all right-steps
        // first).
        let p = curve(&[(0.0, 0.0), (0.0, 0.0)]);
        let q = curve(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let (_, best) = discrete_frechet(&p, &q).unwrap();
        assert_eq!(best.steps(), &[(0, 0), (0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn reversal_swaps_sides() {
        let c = MonotoneCoupling::new(vec![(0, 0), (1, 0), (1, 1)], 2, 2).unwrap();
        let r = c.reversed();
        assert!(MonotoneCoupling::new(r.steps().to_vec(), 2, 2).is_ok());
        assert_eq!(r.steps(), &[(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = PolygonalCurve::new(vec![vec![0.0]]).unwrap();
        let q = PolygonalCurve::new(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(
            discrete_frechet(&p, &q).unwrap_err(),
            FunctionalError::DimensionMismatch(1, 2)
        );
    }
}
