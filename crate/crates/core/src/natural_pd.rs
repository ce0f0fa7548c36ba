//! Natural pseudo-distance between finite measured spaces: the infimum over
//! bijections of the largest discrepancy between matched measurements,
//! solved exactly as a bottleneck assignment problem.
//!
//! Homeomorphisms of closed manifolds are modelled as bijections of finite
//! vertex sets; when the point counts differ no bijection exists and the
//! distance is infinite, the finite analogue of non-homeomorphic spaces.
//! An optional mode restricts bijections to graph isomorphisms of a
//! supplied adjacency structure, which tracks the homeomorphism constraint
//! more closely.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use thiserror::Error;

use crate::framework::{
    Correspondence, ExtendedReal, Functional, FunctionalError, TooLargeError,
};

/// Guard on the point count for brute force over all bijections.
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum MeasuredError {
    #[error("a measured space needs at least one point")]
    Empty,
    #[error("{ids} point ids for {values} values")]
    LengthMismatch { ids: usize, values: usize },
    #[error("value {index} is not finite")]
    NonFiniteValue { index: usize },
}

/// A finite set of labelled points, each carrying one real measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredSpace {
    point_ids: Vec<String>,
    values: Vec<f64>,
}

impl MeasuredSpace {
    pub fn new(point_ids: Vec<String>, values: Vec<f64>) -> Result<Self, MeasuredError> {
        if values.is_empty() {
            return Err(MeasuredError::Empty);
        }
        if point_ids.len() != values.len() {
            return Err(MeasuredError::LengthMismatch {
                ids: point_ids.len(),
                values: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(MeasuredError::NonFiniteValue { index });
        }
        Ok(Self { point_ids, values })
    }

    /// Labels points `p0`, `p1`, ...
    pub fn from_values(values: Vec<f64>) -> Result<Self, MeasuredError> {
        let ids = (0..values.len()).map(|i| format!("p{i}")).collect();
        Self::new(ids, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty spaces
    }

    pub fn point_ids(&self) -> &[String] {
        &self.point_ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BijectionError {
    #[error("target index {0} is used more than once")]
    DuplicateTarget(usize),
    #[error("target index {index} is out of range for {n} points")]
    TargetOutOfRange { index: usize, n: usize },
}

/// A permutation `i -> map[i]` matching two point sets of equal size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bijection {
    map: Vec<usize>,
}

impl Bijection {
    pub fn new(map: Vec<usize>) -> Result<Self, BijectionError> {
        let n = map.len();
        let mut used = vec![false; n];
        for &j in &map {
            if j >= n {
                return Err(BijectionError::TargetOutOfRange { index: j, n });
            }
            if used[j] {
                return Err(BijectionError::DuplicateTarget(j));
            }
            used[j] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn to_correspondence(&self) -> Correspondence {
        let n = self.map.len();
        Correspondence::new(self.map.iter().enumerate().map(|(i, &j)| (i, j)), n, n)
            .expect("a permutation is doubly surjective")
    }

    /// Accepts a correspondence in which every point on each side is
    /// matched exactly once.
    pub fn from_correspondence(rho: &Correspondence) -> Result<Self, FunctionalError> {
        if rho.left_len() != rho.right_len() {
            return Err(FunctionalError::NotABijection(format!(
                "sides have {} and {} points",
                rho.left_len(),
                rho.right_len()
            )));
        }
        match rho.as_bijection_map() {
            Some(map) => Ok(Self { map }),
            None => Err(FunctionalError::NotABijection(
                "some point is matched more than once".to_string(),
            )),
        }
    }
}

/// Cost of a bijection: the largest discrepancy `|phi(x) - psi(h(x))|`.
pub fn npd_functional(
    h: &Bijection,
    phi: &MeasuredSpace,
    psi: &MeasuredSpace,
) -> Result<f64, FunctionalError> {
    if phi.len() != psi.len() || h.len() != phi.len() {
        return Err(FunctionalError::SizeMismatch(phi.len(), psi.len()));
    }
    Ok(phi
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - psi.values[h.apply(i)]).abs())
        .fold(0.0, f64::max))
}

/// Exact natural pseudo-distance. Size mismatch means no bijection exists
/// and the value is infinite; otherwise a bottleneck assignment gives the
/// exact minimum. The optimum is always one of the n^2 pairwise costs, so
/// a binary search over that sorted multiset, with feasibility decided by
/// bipartite perfect matching, avoids any floating-point search.
///
/// ```
/// use corrdist_core::natural_pd::{npd_exact, MeasuredSpace};
/// use corrdist_core::ExtendedReal;
///
/// let phi = MeasuredSpace::from_values(vec![0.0, 1.0]).unwrap();
/// let psi = MeasuredSpace::from_values(vec![1.0, 0.0]).unwrap();
/// let (value, h) = npd_exact(&phi, &psi);
/// assert_eq!(value, ExtendedReal::finite(0.0));
/// assert_eq!(h.unwrap().map(), &[1, 0]);
///
/// let psi3 = MeasuredSpace::from_values(vec![0.0, 1.0, 2.0]).unwrap();
/// assert_eq!(npd_exact(&phi, &psi3).0, ExtendedReal::Infinity);
/// ```
pub fn npd_exact(phi: &MeasuredSpace, psi: &MeasuredSpace) -> (ExtendedReal, Option<Bijection>) {
    if phi.len() != psi.len() {
        return (ExtendedReal::Infinity, None);
    }
    let costs: Vec<Vec<f64>> = phi
        .values
        .iter()
        .map(|a| psi.values.iter().map(|b| (a - b).abs()).collect())
        .collect();
    let mut candidates: Vec<f64> = costs.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // The full threshold always admits the complete bipartite graph, so the
    // search space is never empty.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_under(&costs, candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let threshold = candidates[lo];
    let map = perfect_matching_under(&costs, threshold)
        .expect("threshold chosen feasible by the search");
    let h = Bijection { map };
    debug_assert_eq!(npd_functional(&h, phi, psi).unwrap(), threshold);
    (ExtendedReal::finite(threshold), Some(h))
}

/// Kuhn's augmenting-path matching on the bipartite graph of pairs with
/// cost at or below `threshold`. Returns a full left-to-right assignment
/// when a perfect matching exists.
fn perfect_matching_under(costs: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = costs.len();
    let mut right_owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        i: usize,
        costs: &[Vec<f64>],
        threshold: f64,
        visited: &mut [bool],
        right_owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..costs.len() {
            if costs[i][j] <= threshold && !visited[j] {
                visited[j] = true;
                let free = match right_owner[j] {
                    None => true,
                    Some(owner) => augment(owner, costs, threshold, visited, right_owner),
                };
                if free {
                    right_owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    for i in 0..n {
        let mut visited = vec![false; n];
        if !augment(i, costs, threshold, &mut visited, &mut right_owner) {
            return None;
        }
    }
    let mut map = vec![usize::MAX; n];
    for (j, owner) in right_owner.into_iter().enumerate() {
        map[owner.expect("matching is perfect")] = j;
    }
    Some(map)
}

/// Oracle: the minimum of the functional over all n! bijections. Size
/// mismatch still yields infinity; equal sizes above
/// [`BRUTE_FORCE_LIMIT`] are refused.
pub fn npd_bruteforce(
    phi: &MeasuredSpace,
    psi: &MeasuredSpace,
) -> Result<ExtendedReal, TooLargeError> {
    if phi.len() != psi.len() {
        return Ok(ExtendedReal::Infinity);
    }
    let n = phi.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(TooLargeError {
            what: "bijection brute force",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best = f64::INFINITY;
    for perm in permutations(n) {
        let h = Bijection { map: perm };
        let v = npd_functional(&h, phi, psi).expect("sizes match");
        best = best.min(v);
    }
    Ok(ExtendedReal::finite(best))
}

/// In one dimension the monotone matching is bottleneck-optimal: matching
/// the sorted value lists index by index attains the minimum. Exposed as a
/// cross-checkable fast path; `None` when the sizes differ.
pub fn npd_sorted_matching(phi: &MeasuredSpace, psi: &MeasuredSpace) -> Option<f64> {
    if phi.len() != psi.len() {
        return None;
    }
    let mut a = phi.values.clone();
    let mut b = psi.values.clone();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

#[derive(Debug, Error, PartialEq)]
pub enum AdjacencyError {
    #[error("adjacency matrix is not square: row {row} has {cols} entries, expected {expected}")]
    NotSquare {
        row: usize,
        cols: usize,
        expected: usize,
    },
    #[error("adjacency must be symmetric: adj[{i}][{j}] != adj[{j}][{i}]")]
    NotSymmetric { i: usize, j: usize },
}

/// An undirected adjacency structure over the points of a measured space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    adj: Vec<Vec<bool>>,
}

impl Adjacency {
    pub fn new(adj: Vec<Vec<bool>>) -> Result<Self, AdjacencyError> {
        let n = adj.len();
        for (row, r) in adj.iter().enumerate() {
            if r.len() != n {
                return Err(AdjacencyError::NotSquare {
                    row,
                    cols: r.len(),
                    expected: n,
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if adj[i][j] != adj[j][i] {
                    return Err(AdjacencyError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self { adj })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn connected(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }
}

/// Natural pseudo-distance with the bijections restricted to graph
/// isomorphisms of the supplied adjacency structures (brute force, guarded
/// by [`BRUTE_FORCE_LIMIT`]). Infinite when the sizes differ, when the
/// adjacency sizes disagree with the spaces, or when no isomorphism exists.
pub fn npd_graph_restricted(
    phi: &MeasuredSpace,
    psi: &MeasuredSpace,
    graph_x: &Adjacency,
    graph_y: &Adjacency,
) -> Result<(ExtendedReal, Option<Bijection>), TooLargeError> {
    if phi.len() != psi.len() || graph_x.len() != phi.len() || graph_y.len() != psi.len() {
        return Ok((ExtendedReal::Infinity, None));
    }
    let n = phi.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(TooLargeError {
            what: "graph-isomorphism brute force",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best: Option<(f64, Bijection)> = None;
    for perm in permutations(n) {
        let preserves = (0..n).all(|i| {
            (0..n).all(|j| graph_x.connected(i, j) == graph_y.connected(perm[i], perm[j]))
        });
        if !preserves {
            continue;
        }
        let h = Bijection { map: perm };
        let v = npd_functional(&h, phi, psi).expect("sizes match");
        let replace = match &best {
            None => true,
            Some((bv, bh)) => v < *bv || (v == *bv && h.map < bh.map),
        };
        if replace {
            best = Some((v, h));
        }
    }
    Ok(match best {
        Some((v, h)) => (ExtendedReal::finite(v), Some(h)),
        None => (ExtendedReal::Infinity, None),
    })
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next_permutation
        let Some(pivot) = current.windows(2).rposition(|w| w[0] < w[1]) else {
            break;
        };
        let successor = current
            .iter()
            .rposition(|&v| v > current[pivot])
            .expect("pivot guarantees a successor");
        current.swap(pivot, successor);
        current[pivot + 1..].reverse();
    }
    out
}

/// The natural pseudo-distance instantiation of the framework: morphisms
/// are the bijections between the point sets (empty when the sizes
/// differ), cost is the largest measurement discrepancy.
pub struct NpdFunctional;

impl Functional for NpdFunctional {
    type Space = MeasuredSpace;

    fn name(&self) -> &'static str {
        "npd"
    }

    fn context_descriptor(&self) -> &'static str {
        "finite point sets carrying real measurements"
    }

    fn point_count(space: &MeasuredSpace) -> usize {
        space.len()
    }

    fn evaluate(
        &self,
        rho: &Correspondence,
        x: &MeasuredSpace,
        y: &MeasuredSpace,
    ) -> Result<f64, FunctionalError> {
        let h = Bijection::from_correspondence(rho)?;
        npd_functional(&h, x, y)
    }

    fn admits(&self, rho: &Correspondence) -> bool {
        Bijection::from_correspondence(rho).is_ok()
    }

    fn morphisms(
        &self,
        x: &MeasuredSpace,
        y: &MeasuredSpace,
    ) -> Result<Box<dyn Iterator<Item = Correspondence>>, TooLargeError> {
        if x.len() != y.len() {
            return Ok(Box::new(std::iter::empty())); // Mor(X, Y) is empty
        }
        let n = x.len();
        if n > BRUTE_FORCE_LIMIT {
            return Err(TooLargeError {
                what: "bijection enumeration",
                size: n,
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        Ok(Box::new(
            permutations(n)
                .into_iter()
                .map(|map| Bijection { map }.to_correspondence()),
        ))
    }

    fn sample_morphism(
        &self,
        x: &MeasuredSpace,
        y: &MeasuredSpace,
        rng: &mut StdRng,
    ) -> Option<Correspondence> {
        if x.len() != y.len() {
            return None;
        }
        let mut map: Vec<usize> = (0..x.len()).collect();
        map.shuffle(rng);
        Some(Bijection { map }.to_correspondence())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measured(values: &[f64]) -> MeasuredSpace {
        MeasuredSpace::from_values(values.to_vec()).unwrap()
    }

    #[test]
    fn identity_on_equal_spaces_is_zero() {
        let phi = measured(&[0.3, 1.0, -2.0]);
        let h = Bijection::identity(3);
        assert_eq!(npd_functional(&h, &phi, &phi).unwrap(), 0.0);
        let (v, best) = npd_exact(&phi, &phi);
        assert_eq!(v, ExtendedReal::finite(0.0));
        assert!(best.is_some());
    }

    #[test]
    fn functional_examples() {
        let phi = measured(&[0.0, 1.0]);
        let psi = measured(&[0.5, 0.5]);
        assert_eq!(
            npd_functional(&Bijection::identity(2), &phi, &psi).unwrap(),
            0.5
        );

        let psi = measured(&[1.0, 0.0]);
        let swap = Bijection::new(vec![1, 0]).unwrap();
        assert_eq!(npd_functional(&swap, &phi, &psi).unwrap(), 0.0);
    }

    #[test]
    fn size_mismatch_is_infinite() {
        let phi = measured(&[0.0, 1.0]);
        let psi = measured(&[0.0, 1.0, 2.0]);
        let (v, best) = npd_exact(&phi, &psi);
        assert_eq!(v, ExtendedReal::Infinity);
        assert!(best.is_none());
        assert_eq!(
            npd_bruteforce(&phi, &psi).unwrap(),
            ExtendedReal::Infinity
        );
    }

    #[test]
    fn two_point_instance() {
        let phi = measured(&[0.0, 1.0]);
        let psi = measured(&[0.5, 0.5]);
        // Both bijections give 0.5.
        let (v, _) = npd_exact(&phi, &psi);
        assert_eq!(v, ExtendedReal::finite(0.5));
        assert_eq!(npd_bruteforce(&phi, &psi).unwrap(), v);
    }

    #[test]
    fn swap_beats_identity() {
        let phi = measured(&[0.0, 1.0]);
        let psi = measured(&[1.0, 0.0]);
        let (v, best) = npd_exact(&phi, &psi);
        assert_eq!(v, ExtendedReal::finite(0.0));
        assert_eq!(best.unwrap().map(), &[1, 0]);
    }

    #[test]
    fn singleton_distance_is_the_gap() {
        let phi = measured(&[2.0]);
        let psi = measured(&[-1.5]);
        assert_eq!(npd_bruteforce(&phi, &psi).unwrap(), ExtendedReal::finite(3.5));
        let (v, _) = npd_exact(&phi, &psi);
        assert_eq!(v, ExtendedReal::finite(3.5));
    }

    #[test]
    fn brute_force_guard() {
        let phi = measured(&[0.0; 9]);
        let err = npd_bruteforce(&phi, &phi).unwrap_err();
        assert_eq!(err.size, 9);
        assert_eq!(err.limit, BRUTE_FORCE_LIMIT);
    }

    #[test]
    fn sorted_matching_agrees_with_brute_force() {
        let phi = measured(&[3.0, -1.0, 0.5, 2.0]);
        let psi = measured(&[1.0, 1.5, -2.0, 4.0]);
        let sorted = npd_sorted_matching(&phi, &psi).unwrap();
        let brute = npd_bruteforce(&phi, &psi).unwrap();
        assert_eq!(brute, ExtendedReal::finite(sorted));
    }

    #[test]
    fn permutations_count_and_order() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0], vec![0, 1, 2]);
        assert_eq!(perms[5], vec![2, 1, 0]);
    }

    #[test]
    fn graph_restriction_narrows_the_morphism_set() {
        // Path graph a-b-c with values (0, 1, 0) against path b'-a'-c'
        // relabelled so only graph isomorphisms mapping the middle to the
        // middle survive.
        let phi = measured(&[0.0, 1.0, 0.0]);
        let psi = measured(&[1.0, 0.0, 0.0]);
        let path_mid_0 = Adjacency::new(vec![
            vec![false, true, false],
            vec![true, false, true],
            vec![false, true, false],
        ])
        .unwrap();
        // Same path shape but with the middle vertex listed first.
        let path_mid_first = Adjacency::new(vec![
            vec![false, true, true],
            vec![true, false, false],
            vec![true, false, false],
        ])
        .unwrap();
        let (unrestricted, _) = npd_exact(&phi, &psi);
        assert_eq!(unrestricted, ExtendedReal::finite(0.0));
        let (restricted, h) =
            npd_graph_restricted(&phi, &psi, &path_mid_0, &path_mid_first).unwrap();
        // The middle of X (value 1) must map to the middle of Y (value 1 at
        // index 0), and the ends to the ends: discrepancy 0 is achievable.
        assert_eq!(restricted, ExtendedReal::finite(0.0));
        assert_eq!(h.unwrap().apply(1), 0);
    }

    #[test]
    fn graph_restriction_can_be_infinite() {
        // Triangle against path: never isomorphic.
        let phi = measured(&[0.0, 0.0, 0.0]);
        let triangle = Adjacency::new(vec![
            vec![false, true, true],
            vec![true, false, true],
            vec![true, true, false],
        ])
        .unwrap();
        let path = Adjacency::new(vec![
            vec![false, true, false],
            vec![true, false, true],
            vec![false, true, false],
        ])
        .unwrap();
        let (v, h) = npd_graph_restricted(&phi, &phi, &triangle, &path).unwrap();
        assert_eq!(v, ExtendedReal::Infinity);
        assert!(h.is_none());
    }

    #[test]
    fn bijection_validation() {
        assert!(Bijection::new(vec![0, 1, 2]).is_ok());
        assert_eq!(
            Bijection::new(vec![0, 0]).unwrap_err(),
            BijectionError::DuplicateTarget(0)
        );
        assert!(matches!(
            Bijection::new(vec![0, 5]).unwrap_err(),
            BijectionError::TargetOutOfRange { .. }
        ));
    }
}
