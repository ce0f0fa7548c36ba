//! Subcommand implementations: load documents, dispatch to the engines,
//! render one report to stdout.

use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use rand::SeedableRng;

use corrdist_core::frechet::{
    discrete_frechet, enumerate_couplings, frechet_functional, FrechetFunctional,
};
use corrdist_core::framework::{
    check_functional_properties, check_pseudo_distance_axioms, CheckError, Functional,
    InfError, TooLargeError,
};
use corrdist_core::gromov_hausdorff::{gh_diameter_lower_bound, GhFunctional};
use corrdist_core::hausdorff::{hausdorff_closed_form, HausdorffFunctional};
use corrdist_core::natural_pd::{npd_bruteforce, npd_exact, NpdFunctional};
use corrdist_core::plhomeo::{divergence_report, make_contraction, proof_walkthrough};
use corrdist_core::FunctionalError;

use crate::input::{
    load_directory, pairs_document, plhomeo_document, rational_string, InputDocument, InputError,
};
use crate::report::{self, ExtendedValue, Format, PairList};

/// Failures mapped to the exit-code contract: validation problems exit 1,
/// size-guard refusals exit 2 (internal assertion failures exit 3 via the
/// panic handler in `main`).
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    TooLarge(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::TooLarge(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::TooLarge(m) => m.fmt(f),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Validation(e.message)
    }
}

impl From<TooLargeError> for CliError {
    fn from(e: TooLargeError) -> Self {
        CliError::TooLarge(e.to_string())
    }
}

impl From<FunctionalError> for CliError {
    fn from(e: FunctionalError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<InfError> for CliError {
    fn from(e: InfError) -> Self {
        match e {
            InfError::TooLarge(t) => t.into(),
            InfError::Eval(f) => f.into(),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::TooLarge(t) => t.into(),
            CheckError::Eval(f) => f.into(),
        }
    }
}

fn emit(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| {
        CliError::Validation(format!("{}: cannot write: {e}", path.display()))
    })
}

fn load(path: &Path) -> Result<(InputDocument, String, String), CliError> {
    let doc = InputDocument::load(path)?;
    let label = doc.label(path);
    let file = path.display().to_string();
    Ok((doc, label, file))
}

pub fn run_hausdorff(
    a: &Path,
    b: &Path,
    via_correspondences: bool,
    emit_to: Option<&Path>,
    threads: usize,
    format: Format,
) -> Result<String, CliError> {
    let (doc_a, left, file_a) = load(a)?;
    let (doc_b, right, file_b) = load(b)?;
    let x = doc_a.to_ambient_subset(&file_a)?;
    let y = doc_b.to_ambient_subset(&file_b)?;
    let closed_form = hausdorff_closed_form(&x, &y)?;

    let via = if via_correspondences {
        let out = corrdist_core::framework::inf_exhaustive_parallel(
            &HausdorffFunctional,
            &x,
            &y,
            threads,
        )?;
        let value = out.value.as_finite().expect("nonempty enumeration");
        let argmin = out.argmin.expect("finite minimum has a minimizer");
        if let Some(path) = emit_to {
            emit(path, &pairs_document(Some("argmin"), argmin.pairs()))?;
        }
        Some(report::ViaCorrespondences {
            value,
            agrees_with_closed_form: value == closed_form,
            morphisms_evaluated: out.evaluated,
            argmin: PairList(argmin.pairs().to_vec()),
        })
    } else {
        if emit_to.is_some() {
            return Err(CliError::Validation(
                "--emit requires --via-correspondences for this subcommand".to_string(),
            ));
        }
        None
    };

    let rep = report::HausdorffReport {
        command: "hausdorff",
        left,
        right,
        closed_form,
        via_correspondences: via,
    };
    Ok(match format {
        Format::Json => report::render_json(&rep),
        Format::Table => report::render_hausdorff_table(&rep),
    })
}

pub fn run_gh(
    a: &Path,
    b: &Path,
    emit_to: Option<&Path>,
    threads: usize,
    format: Format,
) -> Result<String, CliError> {
    let (doc_a, left, file_a) = load(a)?;
    let (doc_b, right, file_b) = load(b)?;
    let x = doc_a.to_metric_space(&file_a)?;
    let y = doc_b.to_metric_space(&file_b)?;
    let out = corrdist_core::framework::inf_exhaustive_parallel(&GhFunctional, &x, &y, threads)?;
    let value = out.value.as_finite().expect("nonempty enumeration");
    let argmin = out.argmin.expect("finite minimum has a minimizer");
    let evaluated = out.evaluated;
    if let Some(path) = emit_to {
        emit(path, &pairs_document(Some("argmin"), argmin.pairs()))?;
    }
    let rep = report::GhReport {
        command: "gh",
        left,
        right,
        value,
        diameter_lower_bound: gh_diameter_lower_bound(&x, &y),
        morphisms_evaluated: evaluated,
        argmin: PairList(argmin.pairs().to_vec()),
    };
    Ok(match format {
        Format::Json => report::render_json(&rep),
        Format::Table => report::render_gh_table(&rep),
    })
}

pub fn run_frechet(
    p: &Path,
    q: &Path,
    oracle: bool,
    emit_to: Option<&Path>,
    format: Format,
) -> Result<String, CliError> {
    let (doc_p, left, file_p) = load(p)?;
    let (doc_q, right, file_q) = load(q)?;
    let curve_p = doc_p.to_curve(&file_p)?;
    let curve_q = doc_q.to_curve(&file_q)?;
    let (value, coupling) = discrete_frechet(&curve_p, &curve_q)?;
    if let Some(path) = emit_to {
        emit(path, &pairs_document(Some("coupling"), coupling.steps()))?;
    }
    let oracle = if oracle {
        let mut best = f64::INFINITY;
        let mut evaluated = 0usize;
        for c in enumerate_couplings(curve_p.len(), curve_q.len())? {
            best = best.min(frechet_functional(&c, &curve_p, &curve_q)?);
            evaluated += 1;
        }
        Some(report::OracleCheck {
            value: best,
            couplings_evaluated: evaluated,
            agrees: best == value,
        })
    } else {
        None
    };
    let rep = report::FrechetReport {
        command: "frechet",
        left,
        right,
        value,
        coupling: PairList(coupling.steps().to_vec()),
        oracle,
    };
    Ok(match format {
        Format::Json => report::render_json(&rep),
        Format::Table => report::render_frechet_table(&rep),
    })
}

pub fn run_npd(
    f: &Path,
    g: &Path,
    brute: bool,
    emit_to: Option<&Path>,
    format: Format,
) -> Result<String, CliError> {
    let (doc_f, left, file_f) = load(f)?;
    let (doc_g, right, file_g) = load(g)?;
    let phi = doc_f.to_measured(&file_f)?;
    let psi = doc_g.to_measured(&file_g)?;
    let (value, argmin) = npd_exact(&phi, &psi);
    if let Some(path) = emit_to {
        match &argmin {
            Some(h) => emit(
                path,
                &pairs_document(
                    Some("bijection"),
                    &h.map().iter().enumerate().map(|(i, &j)| (i, j)).collect::<Vec<_>>(),
                ),
            )?,
            None => {
                return Err(CliError::Validation(
                    "nothing to emit: the spaces have different sizes, so no bijection exists"
                        .to_string(),
                ))
            }
        }
    }
    let brute = if brute {
        let brute_value = npd_bruteforce(&phi, &psi)?;
        Some(report::BruteCheck {
            value: ExtendedValue(brute_value),
            agrees: brute_value == value,
        })
    } else {
        None
    };
    let rep = report::NpdReport {
        command: "npd",
        left,
        right,
        value: ExtendedValue(value),
        bijection: argmin.map(|h| h.map().to_vec()),
        brute,
    };
    Ok(match format {
        Format::Json => report::render_json(&rep),
        Format::Table => report::render_npd_table(&rep),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    Hausdorff,
    Gh,
    Frechet,
    Npd,
}

impl FunctionalKind {
    fn accepts(&self, kind: &str) -> bool {
        match self {
            FunctionalKind::Hausdorff => kind == "points",
            FunctionalKind::Gh => kind == "matrix" || kind == "points",
            FunctionalKind::Frechet => kind == "curve",
            FunctionalKind::Npd => kind == "measured",
        }
    }
}

/// Picks the (X, Y, Z) triple for the property check: the first triple,
/// preferring distinct spaces, whose morphism sets X -> Y and Y -> Z are
/// both nonempty. Deterministic given the document order.
fn pick_triple<F: Functional>(
    f: &F,
    spaces: &[F::Space],
    seed: u64,
) -> (usize, usize, usize) {
    let n = spaces.len();
    let mut probe = rand::rngs::StdRng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .collect();
    let distinct = |t: &(usize, usize, usize)| {
        u8::from(t.0 != t.1) + u8::from(t.1 != t.2) + u8::from(t.0 != t.2)
    };
    triples.sort_by(|a, b| distinct(b).cmp(&distinct(a)).then(a.cmp(b)));
    for (i, j, k) in triples {
        if f.sample_morphism(&spaces[i], &spaces[j], &mut probe).is_some()
            && f.sample_morphism(&spaces[j], &spaces[k], &mut probe).is_some()
        {
            return (i, j, k);
        }
    }
    (0, 1 % n, 2 % n)
}

/// Shared shape of the axiom run, generic over the functional and the
/// space conversion.
fn axioms_over<F, C>(
    f: &F,
    docs: &[(PathBuf, InputDocument)],
    convert: C,
    trials: usize,
    seed: u64,
) -> Result<(report::PropertySection, report::MetricAxiomSection, bool), CliError>
where
    F: Functional,
    C: Fn(&InputDocument, &str) -> Result<F::Space, InputError>,
{
    let mut spaces = Vec::with_capacity(docs.len());
    for (path, doc) in docs {
        spaces.push(convert(doc, &path.display().to_string())?);
    }
    let (xi, yi, zi) = pick_triple(f, &spaces, seed);
    let (x, y, z) = (&spaces[xi], &spaces[yi], &spaces[zi]);
    let properties = check_functional_properties(f, x, y, z, trials, seed)?;
    let axioms = check_pseudo_distance_axioms(f, &spaces, false, trials, seed)?;
    let pass = properties.is_clean() && axioms.is_clean();
    let property_section = report::PropertySection {
        trials_requested: properties.trials_requested,
        trials_run: properties.trials_run,
        identity_checks: properties.identity_checks,
        inversion_checks: properties.inversion_checks,
        composition_checks: properties.composition_checks,
        composition_skipped: properties.composition_skipped,
        violations: properties
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.property.label(), v.detail))
            .collect(),
    };
    let axiom_section = report::MetricAxiomSection {
        delta: axioms
            .delta
            .iter()
            .map(|row| row.iter().map(|v| ExtendedValue(*v)).collect())
            .collect(),
        tolerance: axioms.tolerance,
        violations: axioms
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.axiom.label(), v.detail))
            .collect(),
    };
    Ok((property_section, axiom_section, pass))
}

pub fn run_axioms(
    functional: FunctionalKind,
    spaces_dir: &Path,
    trials: usize,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    let all_docs = load_directory(spaces_dir)?;
    let docs: Vec<(PathBuf, InputDocument)> = all_docs
        .into_iter()
        .filter(|(_, doc)| functional.accepts(doc.kind()))
        .collect();
    if docs.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no documents compatible with the requested functional",
            spaces_dir.display()
        )));
    }

    let (name, property_section, axiom_section, pass) = match functional {
        FunctionalKind::Hausdorff => {
            let (p, a, ok) = axioms_over(
                &HausdorffFunctional,
                &docs,
                |doc, file| doc.to_ambient_subset(file),
                trials,
                seed,
            )?;
            ("hausdorff", p, a, ok)
        }
        FunctionalKind::Gh => {
            let (p, a, ok) = axioms_over(
                &GhFunctional,
                &docs,
                |doc, file| doc.to_metric_space(file),
                trials,
                seed,
            )?;
            ("gh", p, a, ok)
        }
        FunctionalKind::Frechet => {
            let (p, a, ok) = axioms_over(
                &FrechetFunctional,
                &docs,
                |doc, file| doc.to_curve(file),
                trials,
                seed,
            )?;
            ("frechet", p, a, ok)
        }
        FunctionalKind::Npd => {
            let (p, a, ok) = axioms_over(
                &NpdFunctional,
                &docs,
                |doc, file| doc.to_measured(file),
                trials,
                seed,
            )?;
            ("npd", p, a, ok)
        }
    };

    let rep = report::AxiomsReport {
        command: "axioms",
        functional: name.to_string(),
        spaces: docs
            .iter()
            .map(|(path, doc)| doc.label(path))
            .collect(),
        seed,
        functional_properties: property_section,
        pseudo_distance_axioms: axiom_section,
        pass,
    };
    Ok(match format {
        Format::Json => report::render_json(&rep),
        Format::Table => report::render_axioms_table(&rep),
    })
}

pub fn run_theorem_demo(
    max_power: u32,
    subsequence: &[u32],
    emit_to: Option<&Path>,
    format: Format,
) -> Result<String, CliError> {
    if max_power < 1 {
        return Err(CliError::Validation(
            "--max-power must be at least 1".to_string(),
        ));
    }
    let h = make_contraction();
    let divergence = divergence_report(&h, max_power);
    let walkthrough = proof_walkthrough(&h, subsequence)
        .map_err(|e| CliError::Validation(format!("--subsequence: {e}")))?;

    if let Some(path) = emit_to {
        let top_power = h.power(max_power);
        emit(
            path,
            &plhomeo_document(Some(&format!("contraction_power_{max_power}")), &top_power),
        )?;
    }

    let rows: Vec<report::DivergenceRowOut> = divergence
        .rows
        .iter()
        .map(|r| report::DivergenceRowOut {
            power: r.exponent,
            sup_distance: rational_string(&r.sup_distance_from_id),
            sup_distance_decimal: r.sup_distance_from_id.to_f64().unwrap_or(f64::NAN),
            deviation_at_half: rational_string(&r.deviation_at_half),
        })
        .collect();
    let plot: Vec<(u32, f64)> = rows
        .iter()
        .map(|r| (r.power, r.sup_distance_decimal))
        .collect();

    let rep = report::TheoremDemoReport {
        command: "theorem-demo",
        max_power,
        subsequence: subsequence.to_vec(),
        contraction_breakpoints: h
            .breakpoints()
            .iter()
            .map(|(x, y)| [rational_string(x), rational_string(y)])
            .collect(),
        divergence: rows,
        min_sup_distance: rational_string(&divergence.min_sup_distance),
        cancellation_steps: walkthrough
            .steps
            .iter()
            .map(|s| report::WalkthroughStepOut {
                exponent: s.exponent,
                cancellation_is_identity: s.cancellation_is_identity,
            })
            .collect(),
        gap_powers: walkthrough
            .gap_powers
            .iter()
            .map(|g| report::GapPowerOut {
                exponent: g.exponent,
                sup_distance: rational_string(&g.sup_distance_from_id),
                sup_distance_decimal: g.sup_distance_from_id.to_f64().unwrap_or(f64::NAN),
                deviation_at_half: rational_string(&g.deviation_at_half),
            })
            .collect(),
        all_cancellations_verified: walkthrough.all_cancellations_verified,
        plot,
    };
    Ok(match format {
        Format::Json => report::render_json(&rep),
        Format::Table => report::render_theorem_demo_table(&rep),
    })
}
