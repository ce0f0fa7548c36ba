//! The shared machinery every dissimilarity measure in this crate is built
//! from: finite spaces, correspondences with inversion and composition, the
//! generic infimum engine, and statistical checkers for the functional
//! properties and the pseudo-distance axioms.
//!
//! Over a finite morphism set the infimum is always attained, so the engine
//! reports an argmin; the classical gap where the infimum of a functional
//! fails to be a minimum cannot arise in this finite model.

mod axioms;
mod correspondence;
mod functional;
mod space;

pub use axioms::{
    check_functional_properties, check_pseudo_distance_axioms, pseudo_distance, AxiomReport,
    AxiomViolation, CheckError, FunctionalProperty, MetricAxiom, PropertyReport,
    PropertyViolation, AXIOM_TOLERANCE,
};
pub use correspondence::{
    enumerate_correspondences, sample_correspondence, Correspondence, CorrespondenceEnumeration,
    CorrespondenceError, TooLargeError, ENUMERATION_CELL_LIMIT,
};
pub use functional::{
    inf_exhaustive_parallel, inf_functional, Functional, FunctionalError, InfError, InfOutcome,
};
pub use space::{
    euclidean_distance, ExtendedReal, FiniteMetricSpace, SpaceError, METRIC_SLACK,
};
