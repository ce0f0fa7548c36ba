//! The generic infimum engine: a pluggable cost functional over
//! correspondences and the deterministic minimization that turns it into a
//! pseudo-distance.

use std::thread;

use rand::rngs::StdRng;
use thiserror::Error;

use super::correspondence::{
    enumerate_correspondences, enumerate_stride, sample_correspondence, Correspondence,
    TooLargeError,
};
use super::space::ExtendedReal;

#[derive(Debug, Error, PartialEq)]
pub enum FunctionalError {
    #[error("correspondence arity {got_left}x{got_right} does not match spaces of sizes {expected_left} and {expected_right}")]
    ArityMismatch {
        expected_left: usize,
        expected_right: usize,
        got_left: usize,
        got_right: usize,
    },
    #[error("points have mismatched dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("subsets do not live in the same ambient space")]
    AmbientMismatch,
    #[error("measured spaces have different sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("pair set is not a monotone coupling: {0}")]
    InvalidCoupling(String),
    #[error("pair set is not a bijection: {0}")]
    NotABijection(String),
}

/// A family of costs on correspondences, one instantiation per dissimilarity
/// measure. Statistical checks of the four defining properties
/// (nonnegativity, vanishing on identities, inversion symmetry, and
/// subadditivity under composition) live in [`super::axioms`].
///
/// The admissible morphism set may be a proper subset of all
/// correspondences (monotone couplings, bijections); implementors override
/// the sampling and enumeration hooks to stay inside it.
pub trait Functional {
    type Space;

    /// Short machine-friendly identifier, e.g. `"hausdorff"`.
    fn name(&self) -> &'static str;

    /// Names the auxiliary data the spaces carry (ambient coordinates,
    /// distance matrices, measured values, ...).
    fn context_descriptor(&self) -> &'static str;

    fn point_count(space: &Self::Space) -> usize;

    /// Cost of one morphism. Must be finite and nonnegative on admissible
    /// inputs.
    fn evaluate(
        &self,
        rho: &Correspondence,
        x: &Self::Space,
        y: &Self::Space,
    ) -> Result<f64, FunctionalError>;

    /// Whether `rho` belongs to this functional's admissible morphism set.
    fn admits(&self, rho: &Correspondence) -> bool {
        let _ = rho;
        true
    }

    /// True when relational composition of admissible morphisms is again
    /// admissible; the subadditivity check skips composites otherwise.
    fn composition_closed(&self) -> bool {
        true
    }

    /// Streams every admissible morphism between the two spaces, when the
    /// instance is under the exhaustive guard. An empty stream means
    /// Mor(X, Y) is empty (the induced pseudo-distance is infinite).
    fn morphisms(
        &self,
        x: &Self::Space,
        y: &Self::Space,
    ) -> Result<Box<dyn Iterator<Item = Correspondence>>, TooLargeError> {
        let (nx, ny) = (Self::point_count(x), Self::point_count(y));
        Ok(Box::new(enumerate_correspondences(nx, ny)?))
    }

    /// One random admissible morphism, or `None` when Mor(X, Y) is empty.
    fn sample_morphism(
        &self,
        x: &Self::Space,
        y: &Self::Space,
        rng: &mut StdRng,
    ) -> Option<Correspondence> {
        let (nx, ny) = (Self::point_count(x), Self::point_count(y));
        Some(sample_correspondence(nx, ny, rng))
    }
}

/// Result of minimizing a functional over a stream of morphisms.
#[derive(Debug, Clone, PartialEq)]
pub struct InfOutcome {
    pub value: ExtendedReal,
    /// One minimizer, the canonically smallest among ties; `None` iff the
    /// stream was empty.
    pub argmin: Option<Correspondence>,
    /// How many morphisms were evaluated.
    pub evaluated: usize,
}

/// Minimizes `f` over an explicit morphism stream. Over a finite stream the
/// infimum is attained, so an argmin is reported; the empty stream yields
/// infinity, matching the convention for an empty morphism set. Ties are
/// broken toward the canonically smallest correspondence, which makes the
/// outcome independent of stream order.
pub fn inf_functional<F: Functional>(
    f: &F,
    x: &F::Space,
    y: &F::Space,
    morphisms: impl IntoIterator<Item = Correspondence>,
) -> Result<InfOutcome, FunctionalError> {
    let mut best: Option<(f64, Correspondence)> = None;
    let mut evaluated = 0usize;
    for rho in morphisms {
        let value = f.evaluate(&rho, x, y)?;
        evaluated += 1;
        let replace = match &best {
            None => true,
            Some((bv, bc)) => value < *bv || (value == *bv && rho < *bc),
        };
        if replace {
            best = Some((value, rho));
        }
    }
    Ok(match best {
        Some((v, c)) => InfOutcome {
            value: ExtendedReal::finite(v),
            argmin: Some(c),
            evaluated,
        },
        None => InfOutcome {
            value: ExtendedReal::Infinity,
            argmin: None,
            evaluated,
        },
    })
}

#[derive(Debug, Error, PartialEq)]
pub enum InfError {
    #[error(transparent)]
    TooLarge(#[from] TooLargeError),
    #[error(transparent)]
    Eval(#[from] FunctionalError),
}

/// Minimizes `f` over the exhaustive correspondence enumeration, optionally
/// split across `threads` workers. The enumeration is partitioned by
/// first-row prefix and each partition reduced independently; because the
/// reduction is a minimum with a canonical tie-break, the outcome is
/// identical for every thread count.
pub fn inf_exhaustive_parallel<F>(
    f: &F,
    x: &F::Space,
    y: &F::Space,
    threads: usize,
) -> Result<InfOutcome, InfError>
where
    F: Functional + Sync,
    F::Space: Sync,
{
    let (nx, ny) = (F::point_count(x), F::point_count(y));
    if threads <= 1 || nx == 0 || ny == 0 {
        return Ok(inf_functional(f, x, y, enumerate_correspondences(nx, ny)?)?);
    }
    // Probe the guard before spawning workers, and never spawn more
    // workers than there are first-row masks to hand out.
    enumerate_correspondences(nx, ny)?;
    let full_mask: u32 = (1u32 << ny) - 1;
    let stride = u32::try_from(threads.min(256)).expect("clamped").min(full_mask);
    let locals: Vec<Result<InfOutcome, FunctionalError>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..stride)
            .map(|worker| {
                scope.spawn(move || {
                    inf_functional(f, x, y, enumerate_stride(nx, ny, worker + 1, stride))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
    });
    let mut merged = InfOutcome {
        value: ExtendedReal::Infinity,
        argmin: None,
        evaluated: 0,
    };
    for local in locals {
        let local = local?;
        merged.evaluated += local.evaluated;
        let replace = match (&merged.argmin, &local.argmin) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(mc), Some(lc)) => {
                local.value < merged.value || (local.value == merged.value && lc < mc)
            }
        };
        if replace {
            merged.value = local.value;
            merged.argmin = local.argmin;
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cost of a correspondence between integer sequences: the largest
    /// absolute difference across matched entries. Minimal test double.
    struct GapFunctional;

    impl Functional for GapFunctional {
        type Space = Vec<f64>;

        fn name(&self) -> &'static str {
            "gap"
        }

        fn context_descriptor(&self) -> &'static str {
            "real sequences"
        }

        fn point_count(space: &Vec<f64>) -> usize {
            space.len()
        }

        fn evaluate(
            &self,
            rho: &Correspondence,
            x: &Vec<f64>,
            y: &Vec<f64>,
        ) -> Result<f64, FunctionalError> {
            Ok(rho
                .pairs()
                .iter()
                .map(|&(i, j)| (x[i] - y[j]).abs())
                .fold(0.0, f64::max))
        }
    }

    #[test]
    fn empty_stream_is_infinite() {
        let out = inf_functional(&GapFunctional, &vec![0.0], &vec![1.0], std::iter::empty())
            .unwrap();
        assert_eq!(out.value, ExtendedReal::Infinity);
        assert!(out.argmin.is_none());
        assert_eq!(out.evaluated, 0);
    }

    #[test]
    fn identity_attains_zero() {
        let x = vec![1.0, 2.0];
        let out = inf_functional(
            &GapFunctional,
            &x,
            &x,
            [Correspondence::identity(2), Correspondence::full(2, 2)],
        )
        .unwrap();
        assert_eq!(out.value, ExtendedReal::finite(0.0));
        assert_eq!(out.argmin, Some(Correspondence::identity(2)));
    }

    #[test]
    fn singleton_pair_on_the_line() {
        // X = {0}, Y = {3}: the only correspondence matches them at cost 3.
        let out = inf_functional(
            &GapFunctional,
            &vec![0.0],
            &vec![3.0],
            enumerate_correspondences(1, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(out.value, ExtendedReal::finite(3.0));
        assert_eq!(out.argmin, Some(Correspondence::full(1, 1)));
        assert_eq!(out.evaluated, 1);
    }

    #[test]
    fn stream_order_does_not_matter() {
        let x = vec![0.0, 1.5];
        let y = vec![0.5, 2.0];
        let mut all: Vec<_> = enumerate_correspondences(2, 2).unwrap().collect();
        let forward = inf_functional(&GapFunctional, &x, &y, all.clone()).unwrap();
        all.reverse();
        let backward = inf_functional(&GapFunctional, &x, &y, all).unwrap();
        assert_eq!(forward.value, backward.value);
        assert_eq!(forward.argmin, backward.argmin);
    }

    #[test]
    fn parallel_reduction_matches_sequential() {
        let x = vec![0.0, 1.0, 3.0];
        let y = vec![0.5, 2.5];
        let seq = inf_exhaustive_parallel(&GapFunctional, &x, &y, 1).unwrap();
        for threads in [2, 3, 4, 7] {
            let par = inf_exhaustive_parallel(&GapFunctional, &x, &y, threads).unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn parallel_respects_guard() {
        let x = vec![0.0; 6];
        let y = vec![0.0; 5];
        let err = inf_exhaustive_parallel(&GapFunctional, &x, &y, 4).unwrap_err();
        assert!(matches!(err, InfError::TooLarge(_)));
    }
}
