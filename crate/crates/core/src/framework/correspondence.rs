//! Correspondences between finite point sets: doubly-surjective relations,
//! their inversion and relational composition, exhaustive enumeration, and
//! random sampling.

use rand::rngs::StdRng;
use rand::Rng;
use thiserror::Error;

/// Upper bound on `nx * ny` for exhaustive enumeration of correspondences.
/// 2^25 candidate relations is the most the exhaustive paths will scan.
pub const ENUMERATION_CELL_LIMIT: usize = 25;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error("left index {0} is not covered by any pair")]
    NotSurjectiveLeft(usize),
    #[error("right index {0} is not covered by any pair")]
    NotSurjectiveRight(usize),
    #[error("pair ({i}, {j}) is out of range for sizes {nx}x{ny}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        nx: usize,
        ny: usize,
    },
    #[error("both sides must be nonempty, got {0}x{1}")]
    EmptySide(usize, usize),
    #[error("cannot compose: left factor has {0} right points, right factor has {1} left points")]
    ArityMismatch(usize, usize),
}

/// Exhaustive enumeration was requested on an instance above its size guard.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{what}: size {size} exceeds the exhaustive-enumeration limit {limit}")]
pub struct TooLargeError {
    pub what: &'static str,
    pub size: usize,
    pub limit: usize,
}

/// A relation between `{0..left_len}` and `{0..right_len}` that is
/// surjective in both directions. Pairs are kept sorted and deduplicated,
/// so equality and ordering are set equality and lexicographic set order;
/// the derived `Ord` is the canonical ordering used for argmin tie-breaks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Correspondence {
    left_len: usize,
    right_len: usize,
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    /// Validates a pair set as a correspondence: indices in range and both
    /// projections surjective. The error names the first uncovered index.
    pub fn new(
        pairs: impl IntoIterator<Item = (usize, usize)>,
        nx: usize,
        ny: usize,
    ) -> Result<Self, CorrespondenceError> {
        if nx == 0 || ny == 0 {
            return Err(CorrespondenceError::EmptySide(nx, ny));
        }
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut left_covered = vec![false; nx];
        let mut right_covered = vec![false; ny];
        for &(i, j) in &pairs {
            if i >= nx || j >= ny {
                return Err(CorrespondenceError::IndexOutOfRange { i, j, nx, ny });
            }
            left_covered[i] = true;
            right_covered[j] = true;
        }
        if let Some(i) = left_covered.iter().position(|c| !c) {
            return Err(CorrespondenceError::NotSurjectiveLeft(i));
        }
        if let Some(j) = right_covered.iter().position(|c| !c) {
            return Err(CorrespondenceError::NotSurjectiveRight(j));
        }
        Ok(Self {
            left_len: nx,
            right_len: ny,
            pairs,
        })
    }

    /// Skips validation; `pairs` must be sorted, deduplicated, in-range and
    /// doubly surjective.
    pub(crate) fn from_sorted_pairs_unchecked(
        pairs: Vec<(usize, usize)>,
        nx: usize,
        ny: usize,
    ) -> Self {
        debug_assert!(Self::new(pairs.clone(), nx, ny).is_ok());
        Self {
            left_len: nx,
            right_len: ny,
            pairs,
        }
    }

    /// The identity correspondence `{(i, i)}` on `n` points.
    pub fn identity(n: usize) -> Self {
        Self {
            left_len: n,
            right_len: n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// The full relation `X x Y`, always a valid correspondence.
    pub fn full(nx: usize, ny: usize) -> Self {
        let pairs = (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))).collect();
        Self {
            left_len: nx,
            right_len: ny,
            pairs,
        }
    }

    pub fn left_len(&self) -> usize {
        self.left_len
    }

    pub fn right_len(&self) -> usize {
        self.right_len
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The inverse relation; always a valid correspondence, and an
    /// involution: `rho.invert().invert() == rho`.
    pub fn invert(&self) -> Self {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Self {
            left_len: self.right_len,
            right_len: self.left_len,
            pairs,
        }
    }

    /// Relational composition in diagram order: `(i, k)` is in
    /// `rho.compose(sigma)` iff some `j` has `(i, j)` in `rho` and `(j, k)`
    /// in `sigma`. Double surjectivity is preserved, so the result needs no
    /// re-validation.
    pub fn compose(&self, sigma: &Correspondence) -> Result<Self, CorrespondenceError> {
        if self.right_len != sigma.left_len {
            return Err(CorrespondenceError::ArityMismatch(
                self.right_len,
                sigma.left_len,
            ));
        }
        // middle index -> right indices of sigma
        let mut by_middle: Vec<Vec<usize>> = vec![Vec::new(); sigma.left_len];
        for &(j, k) in &sigma.pairs {
            by_middle[j].push(k);
        }
        let mut pairs = Vec::new();
        for &(i, j) in &self.pairs {
            for &k in &by_middle[j] {
                pairs.push((i, k));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self {
            left_len: self.left_len,
            right_len: sigma.right_len,
            pairs,
        })
    }

    /// When every left index occurs exactly once, returns the map
    /// `i -> j`; with double surjectivity this makes the relation a
    /// bijection (requires `left_len == right_len`).
    pub fn as_bijection_map(&self) -> Option<Vec<usize>> {
        if self.left_len != self.right_len || self.pairs.len() != self.left_len {
            return None;
        }
        let mut map = vec![usize::MAX; self.left_len];
        for &(i, j) in &self.pairs {
            if map[i] != usize::MAX {
                return None;
            }
            map[i] = j;
        }
        Some(map)
    }
}

/// Streams every correspondence between sets of `nx` and `ny` points,
/// each exactly once, in a fixed deterministic order. Guarded by
/// [`ENUMERATION_CELL_LIMIT`].
pub fn enumerate_correspondences(
    nx: usize,
    ny: usize,
) -> Result<CorrespondenceEnumeration, TooLargeError> {
    if nx == 0 || ny == 0 {
        // An empty side admits no surjective relation; empty stream.
        return Ok(CorrespondenceEnumeration::empty(nx, ny));
    }
    let cells = nx * ny;
    if cells > ENUMERATION_CELL_LIMIT {
        return Err(TooLargeError {
            what: "correspondence enumeration",
            size: cells,
            limit: ENUMERATION_CELL_LIMIT,
        });
    }
    Ok(CorrespondenceEnumeration::new(nx, ny, 1, 1))
}

/// The substream whose first-row masks walk the arithmetic progression
/// `start, start + stride, ...`. With `start = w + 1` and `stride = t` the
/// substreams for `w = 0..t` partition the full enumeration, which is how
/// worker threads split the search without any shared state.
pub(crate) fn enumerate_stride(
    nx: usize,
    ny: usize,
    start: u32,
    stride: u32,
) -> CorrespondenceEnumeration {
    CorrespondenceEnumeration::new(nx, ny, start, stride)
}

#[derive(Debug)]
pub struct CorrespondenceEnumeration {
    nx: usize,
    ny: usize,
    full_mask: u32,
    first_stride: u32,
    rows: Vec<u32>,
    exhausted: bool,
}

impl CorrespondenceEnumeration {
    fn new(nx: usize, ny: usize, start: u32, stride: u32) -> Self {
        debug_assert!(start >= 1 && stride >= 1);
        debug_assert!(ny >= 1 && ny < 32, "guarded by the cell limit");
        let full_mask: u32 = (1u32 << ny) - 1;
        let exhausted = start > full_mask;
        let mut rows = vec![1u32; nx];
        if !exhausted {
            rows[0] = start;
        }
        Self {
            nx,
            ny,
            full_mask,
            first_stride: stride,
            rows,
            exhausted,
        }
    }

    fn empty(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            full_mask: 0,
            first_stride: 1,
            rows: Vec::new(),
            exhausted: true,
        }
    }

    fn columns_covered(&self) -> bool {
        let mut union = 0u32;
        for &r in &self.rows {
            union |= r;
        }
        union == self.full_mask
    }

    fn emit(&self) -> Correspondence {
        let mut pairs = Vec::new();
        for (i, &mask) in self.rows.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                pairs.push((i, j));
                m &= m - 1;
            }
        }
        Correspondence::from_sorted_pairs_unchecked(pairs, self.nx, self.ny)
    }

    /// Odometer step over row masks; rows 1..nx cycle through all nonempty
    /// masks, row 0 walks its stride progression. Returns false when
    /// exhausted.
    fn advance(&mut self) -> bool {
        for i in (1..self.nx).rev() {
            if self.rows[i] < self.full_mask {
                self.rows[i] += 1;
                return true;
            }
            self.rows[i] = 1;
        }
        match self.rows[0].checked_add(self.first_stride) {
            Some(next) if next <= self.full_mask => {
                self.rows[0] = next;
                true
            }
            _ => false,
        }
    }
}

impl Iterator for CorrespondenceEnumeration {
    type Item = Correspondence;

    fn next(&mut self) -> Option<Correspondence> {
        while !self.exhausted {
            let hit = self.columns_covered();
            let item = if hit { Some(self.emit()) } else { None };
            if !self.advance() {
                self.exhausted = true;
            }
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

/// Random correspondence for spaces too large to enumerate: each pair is
/// kept with probability 1/2, then surjectivity is repaired by giving every
/// uncovered index a uniformly random partner. Validity holds by
/// construction.
pub fn sample_correspondence(nx: usize, ny: usize, rng: &mut StdRng) -> Correspondence {
    assert!(nx >= 1 && ny >= 1, "cannot sample a correspondence with an empty side");
    let mut pairs = Vec::new();
    let mut left_covered = vec![false; nx];
    let mut right_covered = vec![false; ny];
    for i in 0..nx {
        for j in 0..ny {
            if rng.random_bool(0.5) {
                pairs.push((i, j));
                left_covered[i] = true;
                right_covered[j] = true;
            }
        }
    }
    for (i, covered) in left_covered.into_iter().enumerate() {
        if !covered {
            let j = rng.random_range(0..ny);
            pairs.push((i, j));
            right_covered[j] = true;
        }
    }
    for (j, covered) in right_covered.into_iter().enumerate() {
        if !covered {
            let i = rng.random_range(0..nx);
            pairs.push((i, j));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Correspondence::from_sorted_pairs_unchecked(pairs, nx, ny)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn identity_on_singleton_is_valid() {
        let c = Correspondence::new([(0, 0)], 1, 1).unwrap();
        assert_eq!(c.pairs(), &[(0, 0)]);
    }

    #[test]
    fn uncovered_left_index_is_named() {
        let err = Correspondence::new([(0, 0)], 2, 1).unwrap_err();
        assert_eq!(err, CorrespondenceError::NotSurjectiveLeft(1));
    }

    #[test]
    fn uncovered_right_index_is_named() {
        let err = Correspondence::new([(0, 0), (1, 0)], 2, 2).unwrap_err();
        assert_eq!(err, CorrespondenceError::NotSurjectiveRight(1));
    }

    #[test]
    fn out_of_range_pair_is_rejected() {
        let err = Correspondence::new([(0, 3)], 1, 2).unwrap_err();
        assert!(matches!(err, CorrespondenceError::IndexOutOfRange { .. }));
    }

    #[test]
    fn full_relation_covers_both_sides() {
        let c = Correspondence::new([(0, 0), (0, 1), (1, 0), (1, 1)], 2, 2).unwrap();
        assert_eq!(c, Correspondence::full(2, 2));
    }

    #[test]
    fn invert_swaps_pairs() {
        let c = Correspondence::new([(0, 1), (1, 0)], 2, 2).unwrap();
        assert_eq!(c.invert().pairs(), &[(0, 1), (1, 0)]);
        let c = Correspondence::new([(0, 0), (0, 1)], 1, 2).unwrap();
        assert_eq!(c.invert().pairs(), &[(0, 0), (1, 0)]);
        assert_eq!(c.invert().invert(), c);
    }

    #[test]
    fn identity_inverts_to_itself() {
        let id = Correspondence::identity(3);
        assert_eq!(id.invert(), id);
    }

    #[test]
    fn compose_identities() {
        let id = Correspondence::identity(2);
        assert_eq!(id.compose(&id).unwrap(), id);
    }

    #[test]
    fn compose_permutations() {
        let rho = Correspondence::new([(0, 0), (1, 1)], 2, 2).unwrap();
        let sigma = Correspondence::new([(0, 1), (1, 0)], 2, 2).unwrap();
        let tau = rho.compose(&sigma).unwrap();
        assert_eq!(tau.pairs(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn compose_full_relations() {
        // Direct evaluation of the relational-composition definition:
        // every (i, k) has a middle witness, so full o full = full.
        let full = Correspondence::full(2, 2);
        assert_eq!(full.compose(&full).unwrap(), full);
    }

    #[test]
    fn compose_arity_mismatch() {
        let rho = Correspondence::full(2, 3);
        let sigma = Correspondence::full(2, 2);
        assert_eq!(
            rho.compose(&sigma).unwrap_err(),
            CorrespondenceError::ArityMismatch(3, 2)
        );
    }

    #[test]
    fn enumeration_counts_small_cases() {
        assert_eq!(enumerate_correspondences(1, 1).unwrap().count(), 1);
        assert_eq!(enumerate_correspondences(2, 2).unwrap().count(), 7);
        // From a singleton every correspondence must cover all of Y.
        let all: Vec<_> = enumerate_correspondences(1, 3).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0], Correspondence::full(1, 3));
    }

    #[test]
    fn enumeration_guard() {
        let err = enumerate_correspondences(6, 5).unwrap_err();
        assert_eq!(err.size, 30);
        assert_eq!(err.limit, ENUMERATION_CELL_LIMIT);
    }

    #[test]
    fn enumeration_yields_unique_valid_items() {
        let all: Vec<_> = enumerate_correspondences(3, 2).unwrap().collect();
        for c in &all {
            assert!(Correspondence::new(c.pairs().iter().copied(), 3, 2).is_ok());
        }
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn strided_enumeration_is_a_partition() {
        let whole: Vec<_> = enumerate_correspondences(2, 3).unwrap().collect();
        for stride in [1u32, 2, 3, 5, 16] {
            let mut parts: Vec<_> = (0..stride)
                .flat_map(|w| enumerate_stride(2, 3, w + 1, stride))
                .collect();
            parts.sort();
            let mut whole_sorted = whole.clone();
            whole_sorted.sort();
            assert_eq!(parts, whole_sorted, "stride {stride}");
        }
    }

    #[test]
    fn sampled_correspondences_are_valid() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let c = sample_correspondence(5, 9, &mut rng);
            assert!(Correspondence::new(c.pairs().iter().copied(), 5, 9).is_ok());
        }
    }

    #[test]
    fn bijection_map_detection() {
        let swap = Correspondence::new([(0, 1), (1, 0)], 2, 2).unwrap();
        assert_eq!(swap.as_bijection_map(), Some(vec![1, 0]));
        assert_eq!(Correspondence::full(2, 2).as_bijection_map(), None);
    }
}
