//! Dissimilarity measures defined as an infimum of a cost functional over
//! correspondences, instantiated on finite models.
//!
//! Four classical shape-comparison distances share one shape: pick a set of
//! morphisms between two objects (all correspondences, monotone couplings,
//! or bijections), assign each morphism a nonnegative cost measuring how
//! far it is from behaving as an identity, and take the infimum. This
//! crate implements that shape once ([`framework`]) and instantiates it
//! four times:
//!
//! - [`hausdorff`]: subsets of a common ambient metric space, cost = sup
//!   of ambient distance over matched pairs, with the classic closed form
//!   as an independent oracle;
//! - [`gromov_hausdorff`]: finite metric spaces, cost = half the
//!   distortion, exact by full enumeration on small instances;
//! - [`frechet`]: polygonal curves under monotone couplings, computed by
//!   dynamic programming with a coupling-enumeration oracle;
//! - [`natural_pd`]: measured point sets under bijections, solved exactly
//!   as a bottleneck assignment, infinite when the sizes differ.
//!
//! [`plhomeo`] complements them with the obstruction on the morphism side:
//! an exact-arithmetic group of piecewise-linear interval homeomorphisms
//! containing a contraction whose powers never return to the identity —
//! the reason no compact metric enlargement of the homeomorphism group can
//! carry a composition compatible with limits.

pub mod framework;
pub mod frechet;
pub mod gromov_hausdorff;
pub mod hausdorff;
pub mod natural_pd;
pub mod plhomeo;

pub use framework::{
    Correspondence, CorrespondenceError, ExtendedReal, FiniteMetricSpace, Functional,
    FunctionalError, TooLargeError,
};
