//! Gromov-Hausdorff pseudo-distance between finite metric spaces via the
//! correspondence-distortion functional, exact on small instances.
//!
//! The textbook definition takes an infimum over isometric embeddings into a
//! common ambient space; that infimum is not directly computable, but it
//! equals half the distortion of the correspondence (the classical gluing
//! identity), which is what `gh_functional` evaluates.

use crate::framework::{
    inf_exhaustive_parallel, Correspondence, FiniteMetricSpace, Functional, FunctionalError,
    InfError,
};

fn check_arity(
    rho: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
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

/// Distortion of a correspondence: the largest disagreement between
/// within-space distances across matched pairs of pairs.
pub fn distortion(
    rho: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<f64, FunctionalError> {
    check_arity(rho, x, y)?;
    let pairs = rho.pairs();
    let mut worst = 0.0f64;
    for &(i, j) in pairs {
        for &(i2, j2) in pairs {
            let gap = (x.distance(i, i2) - y.distance(j, j2)).abs();
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

/// Half the distortion: the Gromov-Hausdorff cost of one correspondence.
pub fn gh_functional(
    rho: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<f64, FunctionalError> {
    Ok(distortion(rho, x, y)? / 2.0)
}

/// Exact Gromov-Hausdorff pseudo-distance by full enumeration, with one
/// minimizing correspondence (canonically smallest among ties). Instances
/// above the enumeration guard return `TooLarge` rather than silently
/// approximating.
///
/// ```
/// use corrdist_core::gromov_hausdorff::gh_exact;
/// use corrdist_core::FiniteMetricSpace;
///
/// let x = FiniteMetricSpace::from_points(&[vec![0.0], vec![1.0]]).unwrap();
/// let y = FiniteMetricSpace::from_points(&[vec![0.0], vec![2.0]]).unwrap();
/// let (value, argmin) = gh_exact(&x, &y).unwrap();
/// assert_eq!(value, 0.5);
/// assert_eq!(argmin.pairs(), &[(0, 0), (1, 1)]);
/// ```
pub fn gh_exact(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<(f64, Correspondence), InfError> {
    gh_exact_threaded(x, y, 1)
}

/// Same as [`gh_exact`], with the enumeration split across `threads`
/// workers; the result is identical for every thread count.
pub fn gh_exact_threaded(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    threads: usize,
) -> Result<(f64, Correspondence), InfError> {
    let out = inf_exhaustive_parallel(&GhFunctional, x, y, threads)?;
    let value = out
        .value
        .as_finite()
        .expect("nonempty spaces always admit a correspondence");
    let argmin = out.argmin.expect("finite minimum has a minimizer");
    Ok((value, argmin))
}

/// `|diam X - diam Y| / 2`, a standard lower bound used to sanity-check the
/// exact value.
pub fn gh_diameter_lower_bound(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    (x.diameter() - y.diameter()).abs() / 2.0
}

/// The Gromov-Hausdorff instantiation of the framework: morphisms are all
/// correspondences between the point sets, cost is half the distortion.
pub struct GhFunctional;

impl Functional for GhFunctional {
    type Space = FiniteMetricSpace;

    fn name(&self) -> &'static str {
        "gh"
    }

    fn context_descriptor(&self) -> &'static str {
        "finite metric spaces with explicit distance matrices"
    }

    fn point_count(space: &FiniteMetricSpace) -> usize {
        space.len()
    }

    fn evaluate(
        &self,
        rho: &Correspondence,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> Result<f64, FunctionalError> {
        gh_functional(rho, x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_space(values: &[f64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_points(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn identity_has_zero_distortion() {
        let x = line_space(&[0.0, 1.0, 3.0]);
        let id = Correspondence::identity(3);
        assert_eq!(distortion(&id, &x, &x).unwrap(), 0.0);
        assert_eq!(gh_functional(&id, &x, &x).unwrap(), 0.0);
    }

    #[test]
    fn bijection_distortion_on_the_line() {
        // X = {0, 1}, Y = {0, 2}: the bijection 0<->0, 1<->2 distorts the
        // single pairwise distance by |1 - 2| = 1.
        let x = line_space(&[0.0, 1.0]);
        let y = line_space(&[0.0, 2.0]);
        let rho = Correspondence::identity(2);
        assert_eq!(distortion(&rho, &x, &y).unwrap(), 1.0);
        assert_eq!(gh_functional(&rho, &x, &y).unwrap(), 0.5);
    }

    #[test]
    fn point_against_two_point_space() {
        // The unique correspondence from a singleton pairs the point with
        // both of {0, a}, forcing distortion a.
        let x = line_space(&[0.0]);
        let a = 4.0;
        let y = line_space(&[0.0, a]);
        let rho = Correspondence::full(1, 2);
        assert_eq!(distortion(&rho, &x, &y).unwrap(), a);
        assert_eq!(gh_functional(&rho, &x, &y).unwrap(), a / 2.0);
        let (value, argmin) = gh_exact(&x, &y).unwrap();
        assert_eq!(value, 2.0);
        assert_eq!(argmin, rho);
    }

    #[test]
    fn same_space_is_at_distance_zero() {
        let x = line_space(&[0.0, 1.0, 2.5]);
        let (value, argmin) = gh_exact(&x, &x).unwrap();
        assert_eq!(value, 0.0);
        assert_eq!(argmin, Correspondence::identity(3));
    }

    #[test]
    fn two_point_spaces_value_half() {
        let x = line_space(&[0.0, 1.0]);
        let y = line_space(&[0.0, 2.0]);
        let (value, _) = gh_exact(&x, &y).unwrap();
        assert_eq!(value, 0.5);
    }

    #[test]
    fn diameter_bound_examples() {
        let x = line_space(&[0.0, 1.0]);
        let y = line_space(&[0.0, 2.0]);
        assert_eq!(gh_diameter_lower_bound(&x, &x), 0.0);
        assert_eq!(gh_diameter_lower_bound(&x, &y), 0.5);
        let (value, _) = gh_exact(&x, &y).unwrap();
        assert!(gh_diameter_lower_bound(&x, &y) <= value);
    }

    #[test]
    fn guard_rejects_large_products() {
        let x = line_space(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let y = line_space(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            gh_exact(&x, &y).unwrap_err(),
            InfError::TooLarge(_)
        ));
    }

    #[test]
    fn symmetric_in_its_arguments() {
        let x = line_space(&[0.0, 1.0, 3.0]);
        let y = line_space(&[0.0, 2.0]);
        let (xy, _) = gh_exact(&x, &y).unwrap();
        let (yx, _) = gh_exact(&y, &x).unwrap();
        assert_eq!(xy, yx);
    }
}
