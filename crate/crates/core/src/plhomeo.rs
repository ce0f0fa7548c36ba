//! Piecewise-linear increasing self-homeomorphisms of [0, 1] under exact
//! rational arithmetic, and the divergence construction they support: a
//! contraction whose powers stay uniformly far from the identity.
//!
//! The group here is the executable core of the impossibility argument for
//! compact metric extensions of homeomorphism composition. If composition
//! passed to the limit in a compact superspace, every homeomorphism would
//! admit a sequence of positive powers converging to the identity; the
//! contraction built by [`make_contraction`] maps [0, 1/2] into [0, 1/4],
//! so all of its positive powers move the point 1/2 by at least 1/4 and no
//! such sequence exists. [`divergence_report`] and [`proof_walkthrough`]
//! tabulate exactly that obstruction.
//!
//! All breakpoint coordinates are arbitrary-precision rationals, so
//! composition, inversion, powers and the uniform distance are bit-exact;
//! every equality test on homeomorphisms is decidable equality of
//! canonical breakpoint lists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used for all breakpoint arithmetic.
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlError {
    #[error("a homeomorphism of [0,1] needs at least the two endpoint breakpoints")]
    TooFewBreakpoints,
    #[error("first breakpoint must be (0, 0) and last must be (1, 1)")]
    EndpointsNotFixed,
    #[error("breakpoint {0} does not increase strictly in x")]
    NotIncreasingX(usize),
    #[error("breakpoint {0} does not increase strictly in y")]
    NotIncreasingY(usize),
    #[error("subsequence must be strictly increasing and positive at position {0}")]
    NotStrictlyIncreasing(usize),
    #[error("subsequence needs at least two exponents")]
    SubsequenceTooShort,
    #[error("x = {0} is outside [0, 1]")]
    OutOfDomain(Rational),
}

/// A piecewise-linear strictly increasing bijection of [0, 1], stored as
/// its breakpoint list in canonical form (collinear interior breakpoints
/// merged). Canonical form makes structural equality decide functional
/// equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlHomeo {
    breakpoints: Vec<(Rational, Rational)>,
}

impl PlHomeo {
    pub fn new(breakpoints: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        if breakpoints.len() < 2 {
            return Err(PlError::TooFewBreakpoints);
        }
        let first = &breakpoints[0];
        let last = &breakpoints[breakpoints.len() - 1];
        if !(first.0.is_zero() && first.1.is_zero() && last.0.is_one() && last.1.is_one()) {
            return Err(PlError::EndpointsNotFixed);
        }
        for (k, w) in breakpoints.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(PlError::NotIncreasingX(k + 1));
            }
            if w[1].1 <= w[0].1 {
                return Err(PlError::NotIncreasingY(k + 1));
            }
        }
        Ok(Self {
            breakpoints: canonicalize(breakpoints),
        })
    }

    pub fn identity() -> Self {
        Self {
            breakpoints: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Exact value at `x` by linear interpolation. `x` must lie in [0, 1].
    pub fn eval(&self, x: &Rational) -> Result<Rational, PlError> {
        if x.is_negative() || *x > Rational::one() {
            return Err(PlError::OutOfDomain(x.clone()));
        }
        Ok(self.eval_in_domain(x))
    }

    fn eval_in_domain(&self, x: &Rational) -> Rational {
        let pts = &self.breakpoints;
        // Last segment whose left endpoint is at or before x.
        let seg = match pts.iter().rposition(|(px, _)| px <= x) {
            Some(k) if k + 1 < pts.len() => k,
            _ => pts.len() - 2,
        };
        let (x0, y0) = &pts[seg];
        let (x1, y1) = &pts[seg + 1];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Preimage of `y` under this homeomorphism; exact because the inverse
    /// is the same breakpoint list with coordinates swapped.
    fn eval_inverse_in_range(&self, y: &Rational) -> Rational {
        let pts = &self.breakpoints;
        let seg = match pts.iter().rposition(|(_, py)| py <= y) {
            Some(k) if k + 1 < pts.len() => k,
            _ => pts.len() - 2,
        };
        let (x0, y0) = &pts[seg];
        let (x1, y1) = &pts[seg + 1];
        x0 + (x1 - x0) * (y - y0) / (y1 - y0)
    }

    /// The inverse homeomorphism: breakpoints with coordinates swapped.
    pub fn invert(&self) -> Self {
        Self {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
        }
    }

    /// Exact composition `self * g` in function order (apply `g` first,
    /// then `self`). The composite is
    /// piecewise linear with breakpoints at `g`'s breakpoints together
    /// with the `g`-preimages of `self`'s breakpoint x-coordinates.
    pub fn compose(&self, g: &PlHomeo) -> Self {
        let mut xs: Vec<Rational> = g
            .breakpoints
            .iter()
            .map(|(x, _)| x.clone())
            .chain(
                self.breakpoints
                    .iter()
                    .map(|(x, _)| g.eval_inverse_in_range(x)),
            )
            .collect();
        xs.sort();
        xs.dedup();
        let breakpoints = xs
            .into_iter()
            .map(|x| {
                let y = self.eval_in_domain(&g.eval_in_domain(&x));
                (x, y)
            })
            .collect();
        Self {
            breakpoints: canonicalize(breakpoints),
        }
    }

    /// `self` composed with itself `m` times; `power(0)` is the identity.
    pub fn power(&self, m: u32) -> Self {
        let mut out = Self::identity();
        for _ in 0..m {
            out = self.compose(&out);
        }
        out
    }
}

/// Merges interior breakpoints that are collinear with their neighbours,
/// keeping composition output canonical and its size proportional to the
/// true number of slope changes.
fn canonicalize(points: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for point in points {
        while out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            // b is redundant iff (b - a) x (p - a) = 0
            let cross = (&b.0 - &a.0) * (&point.1 - &a.1) - (&b.1 - &a.1) * (&point.0 - &a.0);
            if cross.is_zero() {
                out.pop();
            } else {
                break;
            }
        }
        out.push(point);
    }
    out
}

/// The contraction witness: the piecewise-linear homeomorphism with
/// breakpoints (0,0), (1/2, 1/4), (1,1). It halves everything in
/// [0, 1/2], so it maps the half-interval into the quarter-interval, and
/// its powers keep the point 1/2 at least 1/4 away from where the
/// identity holds it.
pub fn make_contraction() -> PlHomeo {
    PlHomeo::new(vec![
        (Rational::zero(), Rational::zero()),
        (ratio(1, 2), ratio(1, 4)),
        (Rational::one(), Rational::one()),
    ])
    .expect("the contraction breakpoints are valid")
}

/// Uniform distance between two PL homeomorphisms, exact: the difference
/// is piecewise linear, so its extremes sit on the union of the two
/// breakpoint grids.
pub fn sup_distance(f: &PlHomeo, g: &PlHomeo) -> Rational {
    let mut xs: Vec<&Rational> = f
        .breakpoints
        .iter()
        .map(|(x, _)| x)
        .chain(g.breakpoints.iter().map(|(x, _)| x))
        .collect();
    xs.sort();
    xs.dedup();
    let mut worst = Rational::zero();
    for x in xs {
        let gap = (f.eval_in_domain(x) - g.eval_in_domain(x)).abs();
        if gap > worst {
            worst = gap;
        }
    }
    worst
}

/// One row of a divergence table: how far the m-th power sits from the
/// identity, in the uniform metric and pointwise at the witness x = 1/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceRow {
    pub exponent: u32,
    pub sup_distance_from_id: Rational,
    pub deviation_at_half: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceReport {
    pub rows: Vec<DivergenceRow>,
    /// Minimum of the uniform distances over all tabulated powers; a
    /// strictly positive minimum certifies that no tabulated power
    /// approaches the identity.
    pub min_sup_distance: Rational,
}

/// Tabulates `sup_distance(h^m, id)` for `m = 1..=max_power`, together
/// with the pointwise deviation at x = 1/2. For the contraction every row
/// is at least 1/4, the certificate that its powers never come back to
/// the identity.
///
/// ```
/// use corrdist_core::plhomeo::{divergence_report, make_contraction, ratio};
///
/// let report = divergence_report(&make_contraction(), 10);
/// assert_eq!(report.min_sup_distance, ratio(1, 4));
/// assert!(report.rows.iter().all(|r| r.sup_distance_from_id >= ratio(1, 4)));
/// ```
pub fn divergence_report(h: &PlHomeo, max_power: u32) -> DivergenceReport {
    assert!(max_power >= 1, "divergence table needs at least one row");
    let id = PlHomeo::identity();
    let half = ratio(1, 2);
    let mut rows = Vec::with_capacity(max_power as usize);
    let mut power = h.clone();
    for exponent in 1..=max_power {
        if exponent > 1 {
            power = h.compose(&power);
        }
        rows.push(DivergenceRow {
            exponent,
            sup_distance_from_id: sup_distance(&power, &id),
            deviation_at_half: (power.eval_in_domain(&half) - &half).abs(),
        });
    }
    let min_sup_distance = rows
        .iter()
        .map(|r| r.sup_distance_from_id.clone())
        .min()
        .expect("at least one row");
    DivergenceReport {
        rows,
        min_sup_distance,
    }
}

/// The cancellation step of the limit argument, verified exactly for one
/// exponent: `h^i` composed with `(h^{-1})^i` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkthroughStep {
    pub exponent: u32,
    pub cancellation_is_identity: bool,
}

/// A gap power `h^{i_{r+1} - i_r}` and its distance from the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapPowerRow {
    pub exponent: u32,
    pub sup_distance_from_id: Rational,
    pub deviation_at_half: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkthroughReport {
    pub subsequence: Vec<u32>,
    pub steps: Vec<WalkthroughStep>,
    pub gap_powers: Vec<GapPowerRow>,
    pub all_cancellations_verified: bool,
    /// Smallest uniform distance among the gap powers; were the limit
    /// argument sound for this homeomorphism, these distances would have
    /// to approach zero.
    pub min_gap_sup_distance: Rational,
}

/// Walks the limit argument along a chosen subsequence of exponents
/// `i_1 < i_2 < ...`: verifies exactly that `h^{i_r}` cancels against
/// `(h^{-1})^{i_r}`, then tabulates the gap powers `h^{i_{r+1} - i_r}` —
/// the maps the argument would force toward the identity. For the
/// contraction the gap powers stay uniformly far away, which is the
/// contradiction made executable.
pub fn proof_walkthrough(h: &PlHomeo, subsequence: &[u32]) -> Result<WalkthroughReport, PlError> {
    if subsequence.len() < 2 {
        return Err(PlError::SubsequenceTooShort);
    }
    for (k, w) in subsequence.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(PlError::NotStrictlyIncreasing(k + 1));
        }
    }
    if subsequence[0] == 0 {
        return Err(PlError::NotStrictlyIncreasing(0));
    }
    let g = h.invert();
    let id = PlHomeo::identity();
    let half = ratio(1, 2);

    let steps: Vec<WalkthroughStep> = subsequence
        .iter()
        .map(|&exponent| WalkthroughStep {
            exponent,
            cancellation_is_identity: h.power(exponent).compose(&g.power(exponent)) == id,
        })
        .collect();

    let gap_powers: Vec<GapPowerRow> = subsequence
        .windows(2)
        .map(|w| {
            let exponent = w[1] - w[0];
            let power = h.power(exponent);
            GapPowerRow {
                exponent,
                sup_distance_from_id: sup_distance(&power, &id),
                deviation_at_half: (power.eval_in_domain(&half) - &half).abs(),
            }
        })
        .collect();

    let all_cancellations_verified = steps.iter().all(|s| s.cancellation_is_identity);
    let min_gap_sup_distance = gap_powers
        .iter()
        .map(|r| r.sup_distance_from_id.clone())
        .min()
        .expect("at least one gap");
    Ok(WalkthroughReport {
        subsequence: subsequence.to_vec(),
        steps,
        gap_powers,
        all_cancellations_verified,
        min_gap_sup_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_evaluates_as_specified() {
        let h = make_contraction();
        assert_eq!(h.eval(&ratio(1, 2)).unwrap(), ratio(1, 4));
        assert_eq!(h.eval(&Rational::zero()).unwrap(), Rational::zero());
        assert_eq!(h.eval(&Rational::one()).unwrap(), Rational::one());
        assert_eq!(h.eval(&ratio(1, 4)).unwrap(), ratio(1, 8));
    }

    #[test]
    fn eval_outside_domain_fails() {
        let h = make_contraction();
        assert!(matches!(h.eval(&ratio(3, 2)), Err(PlError::OutOfDomain(_))));
        assert!(matches!(h.eval(&ratio(-1, 2)), Err(PlError::OutOfDomain(_))));
    }

    #[test]
    fn validation_rejects_bad_breakpoint_lists() {
        assert_eq!(
            PlHomeo::new(vec![(Rational::zero(), Rational::zero())]).unwrap_err(),
            PlError::TooFewBreakpoints
        );
        assert_eq!(
            PlHomeo::new(vec![
                (Rational::zero(), Rational::zero()),
                (ratio(1, 2), ratio(1, 2)),
            ])
            .unwrap_err(),
            PlError::EndpointsNotFixed
        );
        assert_eq!(
            PlHomeo::new(vec![
                (Rational::zero(), Rational::zero()),
                (ratio(1, 2), ratio(3, 4)),
                (ratio(1, 2), ratio(7, 8)),
                (Rational::one(), Rational::one()),
            ])
            .unwrap_err(),
            PlError::NotIncreasingX(2)
        );
        assert_eq!(
            PlHomeo::new(vec![
                (Rational::zero(), Rational::zero()),
                (ratio(1, 4), ratio(1, 2)),
                (ratio(1, 2), ratio(1, 2)),
                (Rational::one(), Rational::one()),
            ])
            .unwrap_err(),
            PlError::NotIncreasingY(2)
        );
    }

    #[test]
    fn collinear_breakpoints_are_merged() {
        let f = PlHomeo::new(vec![
            (Rational::zero(), Rational::zero()),
            (ratio(1, 2), ratio(1, 2)),
            (Rational::one(), Rational::one()),
        ])
        .unwrap();
        assert!(f.is_identity());
        assert_eq!(f.breakpoints().len(), 2);
    }

    #[test]
    fn compose_with_identity() {
        let h = make_contraction();
        let id = PlHomeo::identity();
        assert_eq!(h.compose(&id), h);
        assert_eq!(id.compose(&h), h);
    }

    #[test]
    fn squared_contraction_values() {
        let h = make_contraction();
        let h2 = h.compose(&h);
        assert_eq!(h2.eval(&ratio(1, 2)).unwrap(), ratio(1, 8));
        // The square bends where h lands on h's breakpoint: at x = 2/3.
        assert_eq!(h2.eval(&ratio(2, 3)).unwrap(), ratio(1, 4));
        assert_eq!(
            h2.breakpoints().to_vec(),
            vec![
                (Rational::zero(), Rational::zero()),
                (ratio(1, 2), ratio(1, 8)),
                (ratio(2, 3), ratio(1, 4)),
                (Rational::one(), Rational::one()),
            ]
        );
    }

    #[test]
    fn inverse_cancels_exactly() {
        let h = make_contraction();
        assert!(h.compose(&h.invert()).is_identity());
        assert!(h.invert().compose(&h).is_identity());
    }

    #[test]
    fn powers_follow_the_orbit_of_one_half() {
        let h = make_contraction();
        assert_eq!(h.power(1), h);
        for m in 1..=12u32 {
            let hm = h.power(m);
            // h is linear on [0, 1/2], so the orbit of 1/2 keeps halving.
            let expected = ratio(1, 1i64 << (m + 1));
            assert_eq!(hm.eval(&ratio(1, 2)).unwrap(), expected);
        }
        assert!(PlHomeo::identity().power(100).is_identity());
    }

    #[test]
    fn sup_distance_examples() {
        let h = make_contraction();
        let id = PlHomeo::identity();
        assert_eq!(sup_distance(&h, &h), Rational::zero());
        assert_eq!(sup_distance(&h, &id), ratio(1, 4));
        // The uniform distance always dominates the pointwise deviation.
        let h2 = h.power(2);
        let dev = (h2.eval(&ratio(1, 2)).unwrap() - ratio(1, 2)).abs();
        assert_eq!(dev, ratio(3, 8));
        assert!(sup_distance(&h2, &id) >= dev);
        // For the square the uniform extreme sits at the 2/3 breakpoint.
        assert_eq!(sup_distance(&h2, &id), ratio(5, 12));
    }

    #[test]
    fn divergence_rows_stay_above_one_quarter() {
        let h = make_contraction();
        let report = divergence_report(&h, 10);
        assert_eq!(report.rows.len(), 10);
        for row in &report.rows {
            assert!(row.sup_distance_from_id >= ratio(1, 4));
            let expected_witness = ratio(1, 2) - ratio(1, 1i64 << (row.exponent + 1));
            assert_eq!(row.deviation_at_half, expected_witness);
        }
        assert_eq!(report.min_sup_distance, ratio(1, 4));
        assert_eq!(report.rows[0].sup_distance_from_id, ratio(1, 4));
    }

    #[test]
    fn divergence_of_identity_is_zero() {
        let report = divergence_report(&PlHomeo::identity(), 10);
        for row in &report.rows {
            assert_eq!(row.sup_distance_from_id, Rational::zero());
        }
        assert_eq!(report.min_sup_distance, Rational::zero());
    }

    #[test]
    fn single_row_divergence_report() {
        let h = make_contraction();
        let report = divergence_report(&h, 1);
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].exponent, 1);
        assert_eq!(report.rows[0].sup_distance_from_id, ratio(1, 4));
    }

    #[test]
    fn walkthrough_on_the_contraction() {
        let h = make_contraction();
        let report = proof_walkthrough(&h, &[1, 2, 4, 8]).unwrap();
        assert!(report.all_cancellations_verified);
        assert_eq!(report.gap_powers.len(), 3);
        for gap in &report.gap_powers {
            assert!(gap.sup_distance_from_id >= ratio(1, 4));
        }
        assert!(report.min_gap_sup_distance >= ratio(1, 4));
    }

    #[test]
    fn walkthrough_gap_of_two() {
        let h = make_contraction();
        let report = proof_walkthrough(&h, &[3, 5]).unwrap();
        assert!(report.all_cancellations_verified);
        assert_eq!(report.gap_powers.len(), 1);
        assert_eq!(report.gap_powers[0].exponent, 2);
        // Witness deviation of h^2 at x = 1/2: 1/2 - 1/8 = 3/8.
        assert_eq!(report.gap_powers[0].deviation_at_half, ratio(3, 8));
    }

    #[test]
    fn walkthrough_on_the_identity() {
        let id = PlHomeo::identity();
        let report = proof_walkthrough(&id, &[2, 5, 9]).unwrap();
        assert!(report.all_cancellations_verified);
        for gap in &report.gap_powers {
            assert_eq!(gap.sup_distance_from_id, Rational::zero());
        }
    }

    #[test]
    fn walkthrough_rejects_bad_subsequences() {
        let h = make_contraction();
        assert_eq!(
            proof_walkthrough(&h, &[3]).unwrap_err(),
            PlError::SubsequenceTooShort
        );
        assert_eq!(
            proof_walkthrough(&h, &[3, 3]).unwrap_err(),
            PlError::NotStrictlyIncreasing(1)
        );
        assert_eq!(
            proof_walkthrough(&h, &[0, 2]).unwrap_err(),
            PlError::NotStrictlyIncreasing(0)
        );
    }

    #[test]
    fn exponent_addition_law() {
        let h = make_contraction();
        for (a, b) in [(1u32, 1u32), (2, 3), (4, 2), (5, 5)] {
            assert_eq!(h.power(a + b), h.power(a).compose(&h.power(b)));
        }
    }
}
