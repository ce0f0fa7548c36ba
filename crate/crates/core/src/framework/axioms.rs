//! Statistical checkers for the functional properties and for the metric
//! axioms of the induced pseudo-distance.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use super::correspondence::{Correspondence, TooLargeError};
use super::functional::{inf_functional, Functional, FunctionalError};
use super::space::ExtendedReal;

/// Absolute tolerance for every floating-point comparison in the checkers.
pub const AXIOM_TOLERANCE: f64 = 1e-9;

/// The four defining properties of a functional family: nonnegativity,
/// vanishing on identities, symmetry under inversion, and subadditivity
/// under relational composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalProperty {
    NonNegative,
    IdentityZero,
    InversionSymmetric,
    Subadditive,
}

impl FunctionalProperty {
    pub fn label(&self) -> &'static str {
        match self {
            FunctionalProperty::NonNegative => "non-negativity",
            FunctionalProperty::IdentityZero => "identity-vanishing",
            FunctionalProperty::InversionSymmetric => "inversion-symmetry",
            FunctionalProperty::Subadditive => "subadditivity",
        }
    }
}

/// A property failure with the morphisms that witnessed it.
#[derive(Debug, Clone)]
pub struct PropertyViolation {
    pub property: FunctionalProperty,
    pub detail: String,
    pub rho: Correspondence,
    pub sigma: Option<Correspondence>,
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub functional: String,
    pub trials_requested: usize,
    pub trials_run: usize,
    pub identity_checks: usize,
    pub inversion_checks: usize,
    pub composition_checks: usize,
    /// Composites that left the admissible morphism set and were skipped
    /// (possible only when composition is not closed, e.g. couplings).
    pub composition_skipped: usize,
    pub violations: Vec<PropertyViolation>,
}

impl PropertyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest morphism set the checker will hold for uniform sampling; above
/// this (or above the enumeration guard) it falls back to the
/// functional's random sampler.
const UNIFORM_POOL_LIMIT: usize = 200_000;

enum MorphismPool {
    /// Uniform over the exhaustive enumeration.
    Listed(Vec<Correspondence>),
    /// Too large to enumerate or to hold; draw from the functional's
    /// sampler.
    Sampled,
    /// Mor(X, Y) is empty.
    Empty,
}

fn build_pool<F: Functional>(f: &F, a: &F::Space, b: &F::Space) -> MorphismPool {
    match f.morphisms(a, b) {
        Ok(stream) => {
            let mut list = Vec::new();
            for rho in stream {
                list.push(rho);
                if list.len() > UNIFORM_POOL_LIMIT {
                    return MorphismPool::Sampled;
                }
            }
            if list.is_empty() {
                MorphismPool::Empty
            } else {
                MorphismPool::Listed(list)
            }
        }
        Err(_) => MorphismPool::Sampled,
    }
}

fn draw<F: Functional>(
    pool: &MorphismPool,
    f: &F,
    a: &F::Space,
    b: &F::Space,
    rng: &mut StdRng,
) -> Option<Correspondence> {
    match pool {
        MorphismPool::Listed(list) => Some(list[rng.random_range(0..list.len())].clone()),
        MorphismPool::Sampled => f.sample_morphism(a, b, rng),
        MorphismPool::Empty => None,
    }
}

/// Draws random admissible morphisms `rho: X -> Y` and `sigma: Y -> Z` and
/// reports every violation of the four functional properties, with the
/// witnessing morphisms. Violations are report entries, never errors.
pub fn check_functional_properties<F: Functional>(
    f: &F,
    x: &F::Space,
    y: &F::Space,
    z: &F::Space,
    trials: usize,
    seed: u64,
) -> Result<PropertyReport, FunctionalError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = PropertyReport {
        functional: f.name().to_string(),
        trials_requested: trials,
        trials_run: 0,
        identity_checks: 0,
        inversion_checks: 0,
        composition_checks: 0,
        composition_skipped: 0,
        violations: Vec::new(),
    };

    // Identity-vanishing is trial-independent: check it once per space.
    for space in [x, y, z] {
        let id = Correspondence::identity(F::point_count(space));
        let v = f.evaluate(&id, space, space)?;
        report.identity_checks += 1;
        if v.abs() > AXIOM_TOLERANCE {
            report.violations.push(PropertyViolation {
                property: FunctionalProperty::IdentityZero,
                detail: format!("F(id) = {v}, expected 0"),
                rho: id,
                sigma: None,
            });
        }
    }

    let pool_xy = build_pool(f, x, y);
    let pool_yz = build_pool(f, y, z);

    for _ in 0..trials {
        let Some(rho) = draw(&pool_xy, f, x, y, &mut rng) else {
            break;
        };
        let Some(sigma) = draw(&pool_yz, f, y, z, &mut rng) else {
            break;
        };
        report.trials_run += 1;

        let f_rho = f.evaluate(&rho, x, y)?;
        let f_sigma = f.evaluate(&sigma, y, z)?;
        for (value, morphism) in [(f_rho, &rho), (f_sigma, &sigma)] {
            if value < -AXIOM_TOLERANCE {
                report.violations.push(PropertyViolation {
                    property: FunctionalProperty::NonNegative,
                    detail: format!("F(rho) = {value} < 0"),
                    rho: morphism.clone(),
                    sigma: None,
                });
            }
        }

        let f_rho_inv = f.evaluate(&rho.invert(), y, x)?;
        report.inversion_checks += 1;
        if (f_rho - f_rho_inv).abs() > AXIOM_TOLERANCE {
            report.violations.push(PropertyViolation {
                property: FunctionalProperty::InversionSymmetric,
                detail: format!("F(rho) = {f_rho} but F(rho^-1) = {f_rho_inv}"),
                rho: rho.clone(),
                sigma: None,
            });
        }

        let tau = rho
            .compose(&sigma)
            .expect("sampled morphisms X->Y and Y->Z always compose");
        if !f.composition_closed() && !f.admits(&tau) {
            report.composition_skipped += 1;
        } else {
            let f_tau = f.evaluate(&tau, x, z)?;
            report.composition_checks += 1;
            if f_tau > f_rho + f_sigma + AXIOM_TOLERANCE {
                report.violations.push(PropertyViolation {
                    property: FunctionalProperty::Subadditive,
                    detail: format!(
                        "F(sigma o rho) = {f_tau} > F(rho) + F(sigma) = {}",
                        f_rho + f_sigma
                    ),
                    rho: rho.clone(),
                    sigma: Some(sigma.clone()),
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricAxiom {
    Reflexivity,
    Symmetry,
    Triangle,
}

impl MetricAxiom {
    pub fn label(&self) -> &'static str {
        match self {
            MetricAxiom::Reflexivity => "reflexivity",
            MetricAxiom::Symmetry => "symmetry",
            MetricAxiom::Triangle => "triangle inequality",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub axiom: MetricAxiom,
    /// Indices into the space list: one for reflexivity, two for symmetry,
    /// three for the triangle inequality.
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub functional: String,
    pub space_count: usize,
    pub exhaustive: bool,
    /// Pairwise pseudo-distances, `delta[i][j]` from space i to space j.
    pub delta: Vec<Vec<ExtendedReal>>,
    pub violations: Vec<AxiomViolation>,
    pub tolerance: f64,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CheckError {
    #[error(transparent)]
    TooLarge(#[from] TooLargeError),
    #[error(transparent)]
    Eval(#[from] FunctionalError),
}

/// The induced pseudo-distance between two spaces: the exact minimum over
/// the enumerated morphism set when feasible, otherwise (with `exhaustive`
/// unset) the minimum over `samples` random draws. An empty morphism set
/// gives infinity.
pub fn pseudo_distance<F: Functional>(
    f: &F,
    x: &F::Space,
    y: &F::Space,
    exhaustive: bool,
    samples: usize,
    seed: u64,
) -> Result<ExtendedReal, CheckError> {
    match f.morphisms(x, y) {
        Ok(morphisms) => Ok(inf_functional(f, x, y, morphisms)?.value),
        Err(too_large) => {
            if exhaustive {
                return Err(CheckError::TooLarge(too_large));
            }
            let mut rng = StdRng::seed_from_u64(seed);
            let draws =
                (0..samples).map_while(|_| f.sample_morphism(x, y, &mut rng));
            Ok(inf_functional(f, x, y, draws)?.value)
        }
    }
}

/// Computes the pseudo-distance for every ordered pair of spaces and
/// reports violations of reflexivity, symmetry, and the triangle
/// inequality beyond [`AXIOM_TOLERANCE`]. With `exhaustive` set, an
/// instance above the enumeration guard is an error instead of an
/// approximation.
pub fn check_pseudo_distance_axioms<F: Functional>(
    f: &F,
    spaces: &[F::Space],
    exhaustive: bool,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport, CheckError> {
    let n = spaces.len();
    let mut delta = vec![vec![ExtendedReal::Infinity; n]; n];
    for i in 0..n {
        for j in 0..n {
            let pair_seed = seed.wrapping_add((i * n + j) as u64);
            delta[i][j] = pseudo_distance(f, &spaces[i], &spaces[j], exhaustive, samples, pair_seed)?;
        }
    }

    let mut violations = Vec::new();
    for i in 0..n {
        match delta[i][i] {
            ExtendedReal::Finite(v) if v.abs() <= AXIOM_TOLERANCE => {}
            other => violations.push(AxiomViolation {
                axiom: MetricAxiom::Reflexivity,
                indices: vec![i],
                detail: format!("delta({i}, {i}) = {other}, expected 0"),
            }),
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !delta[i][j].approx_eq(&delta[j][i], AXIOM_TOLERANCE) {
                violations.push(AxiomViolation {
                    axiom: MetricAxiom::Symmetry,
                    indices: vec![i, j],
                    detail: format!(
                        "delta({i}, {j}) = {} but delta({j}, {i}) = {}",
                        delta[i][j], delta[j][i]
                    ),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let through = delta[i][j] + delta[j][k];
                if !delta[i][k].le_with_tolerance(&through, AXIOM_TOLERANCE) {
                    violations.push(AxiomViolation {
                        axiom: MetricAxiom::Triangle,
                        indices: vec![i, j, k],
                        detail: format!(
                            "delta({i}, {k}) = {} > delta({i}, {j}) + delta({j}, {k}) = {}",
                            delta[i][k], through
                        ),
                    });
                }
            }
        }
    }

    Ok(AxiomReport {
        functional: f.name().to_string(),
        space_count: n,
        exhaustive,
        delta,
        violations,
        tolerance: AXIOM_TOLERANCE,
    })
}
