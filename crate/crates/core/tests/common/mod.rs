//! Seeded random generators shared by the integration suites.
#![allow(dead_code)] // each test target uses its own subset

use corrdist_core::frechet::PolygonalCurve;
use corrdist_core::hausdorff::AmbientSubset;
use corrdist_core::natural_pd::MeasuredSpace;
use corrdist_core::plhomeo::{ratio, PlHomeo, Rational};
use corrdist_core::FiniteMetricSpace;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_points(rng: &mut StdRng, n: usize, dim: usize, spread: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-spread..spread)).collect())
        .collect()
}

/// A random metric space realized by points in the plane, so the triangle
/// inequality holds by construction.
pub fn random_metric_space(rng: &mut StdRng, max_points: usize) -> FiniteMetricSpace {
    let n = rng.random_range(1..=max_points);
    FiniteMetricSpace::from_points(&random_points(rng, n, 2, 100.0))
        .expect("Euclidean point sets are metric")
}

pub fn random_subset(rng: &mut StdRng, n: usize, dim: usize) -> AmbientSubset {
    AmbientSubset::from_coords(random_points(rng, n, dim, 100.0))
        .expect("random coordinates form a subset")
}

pub fn random_curve(rng: &mut StdRng, n: usize, dim: usize) -> PolygonalCurve {
    PolygonalCurve::new(random_points(rng, n, dim, 100.0)).expect("random vertices form a curve")
}

pub fn random_measured(rng: &mut StdRng, n: usize) -> MeasuredSpace {
    MeasuredSpace::from_values((0..n).map(|_| rng.random_range(-100.0..100.0)).collect())
        .expect("random values form a measured space")
}

/// A random piecewise-linear homeomorphism of [0, 1] with up to
/// `max_interior` interior breakpoints on the 1/32 grid.
pub fn random_plhomeo(rng: &mut StdRng, max_interior: usize) -> PlHomeo {
    let k = rng.random_range(0..=max_interior);
    let mut grid: Vec<i64> = (1..32).collect();
    grid.shuffle(rng);
    let mut xs: Vec<i64> = grid[..k].to_vec();
    xs.sort_unstable();
    grid.shuffle(rng);
    let mut ys: Vec<i64> = grid[..k].to_vec();
    ys.sort_unstable();

    let mut breakpoints: Vec<(Rational, Rational)> =
        vec![(Rational::zero(), Rational::zero())];
    breakpoints.extend(
        xs.into_iter()
            .zip(ys)
            .map(|(x, y)| (ratio(x, 32), ratio(y, 32))),
    );
    breakpoints.push((Rational::one(), Rational::one()));
    PlHomeo::new(breakpoints).expect("grid breakpoints are strictly increasing")
}
