//! Report structures with a stable field order, rendered either as pretty
//! JSON (the default, machine-diffable) or as human-readable tables.
//! Identical inputs and flags must produce byte-identical reports, so
//! nothing here depends on time, paths outside the inputs, or thread
//! count.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use corrdist_core::ExtendedReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

/// A finite number or the string `"infinity"` in JSON output.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedValue(pub ExtendedReal);

impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            ExtendedReal::Finite(v) => serializer.serialize_f64(v),
            ExtendedReal::Infinity => serializer.serialize_str("infinity"),
        }
    }
}

/// Index pairs serialized as `[i, j]` arrays.
#[derive(Debug, Clone)]
pub struct PairList(pub Vec<(usize, usize)>);

impl Serialize for PairList {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for &(i, j) in &self.0 {
            seq.serialize_element(&[i, j])?;
        }
        seq.end()
    }
}

#[derive(Serialize)]
pub struct ViaCorrespondences {
    pub value: f64,
    pub agrees_with_closed_form: bool,
    pub morphisms_evaluated: usize,
    pub argmin: PairList,
}

#[derive(Serialize)]
pub struct HausdorffReport {
    pub command: &'static str,
    pub left: String,
    pub right: String,
    pub closed_form: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via_correspondences: Option<ViaCorrespondences>,
}

#[derive(Serialize)]
pub struct GhReport {
    pub command: &'static str,
    pub left: String,
    pub right: String,
    pub value: f64,
    pub diameter_lower_bound: f64,
    pub morphisms_evaluated: usize,
    pub argmin: PairList,
}

#[derive(Serialize)]
pub struct OracleCheck {
    pub value: f64,
    pub couplings_evaluated: usize,
    pub agrees: bool,
}

#[derive(Serialize)]
pub struct FrechetReport {
    pub command: &'static str,
    pub left: String,
    pub right: String,
    pub value: f64,
    pub coupling: PairList,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Serialize)]
pub struct BruteCheck {
    pub value: ExtendedValue,
    pub agrees: bool,
}

#[derive(Serialize)]
pub struct NpdReport {
    pub command: &'static str,
    pub left: String,
    pub right: String,
    pub value: ExtendedValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bijection: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute: Option<BruteCheck>,
}

#[derive(Serialize)]
pub struct PropertySection {
    pub trials_requested: usize,
    pub trials_run: usize,
    pub identity_checks: usize,
    pub inversion_checks: usize,
    pub composition_checks: usize,
    pub composition_skipped: usize,
    pub violations: Vec<String>,
}

#[derive(Serialize)]
pub struct MetricAxiomSection {
    pub delta: Vec<Vec<ExtendedValue>>,
    pub tolerance: f64,
    pub violations: Vec<String>,
}

#[derive(Serialize)]
pub struct AxiomsReport {
    pub command: &'static str,
    pub functional: String,
    pub spaces: Vec<String>,
    pub seed: u64,
    pub functional_properties: PropertySection,
    pub pseudo_distance_axioms: MetricAxiomSection,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct DivergenceRowOut {
    pub power: u32,
    pub sup_distance: String,
    pub sup_distance_decimal: f64,
    pub deviation_at_half: String,
}

#[derive(Serialize)]
pub struct WalkthroughStepOut {
    pub exponent: u32,
    pub cancellation_is_identity: bool,
}

#[derive(Serialize)]
pub struct GapPowerOut {
    pub exponent: u32,
    pub sup_distance: String,
    pub sup_distance_decimal: f64,
    pub deviation_at_half: String,
}

#[derive(Serialize)]
pub struct TheoremDemoReport {
    pub command: &'static str,
    pub max_power: u32,
    pub subsequence: Vec<u32>,
    pub contraction_breakpoints: Vec<[String; 2]>,
    pub divergence: Vec<DivergenceRowOut>,
    pub min_sup_distance: String,
    pub cancellation_steps: Vec<WalkthroughStepOut>,
    pub gap_powers: Vec<GapPowerOut>,
    pub all_cancellations_verified: bool,
    /// Two columns, `[power, sup_distance]`, ready for external plotting.
    pub plot: Vec<(u32, f64)>,
}

pub fn render_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("report serialization cannot fail")
}

fn pairs_line(pairs: &PairList) -> String {
    pairs
        .0
        .iter()
        .map(|(i, j)| format!("({i},{j})"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_hausdorff_table(r: &HausdorffReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("hausdorff  {}  {}\n", r.left, r.right));
    out.push_str(&format!("closed_form          {}\n", r.closed_form));
    if let Some(via) = &r.via_correspondences {
        out.push_str(&format!("via_correspondences  {}\n", via.value));
        out.push_str(&format!("agreement            {}\n", via.agrees_with_closed_form));
        out.push_str(&format!("morphisms_evaluated  {}\n", via.morphisms_evaluated));
        out.push_str(&format!("argmin               {}\n", pairs_line(&via.argmin)));
    }
    out
}

pub fn render_gh_table(r: &GhReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("gh  {}  {}\n", r.left, r.right));
    out.push_str(&format!("value                 {}\n", r.value));
    out.push_str(&format!("diameter_lower_bound  {}\n", r.diameter_lower_bound));
    out.push_str(&format!("morphisms_evaluated   {}\n", r.morphisms_evaluated));
    out.push_str(&format!("argmin                {}\n", pairs_line(&r.argmin)));
    out
}

pub fn render_frechet_table(r: &FrechetReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("frechet  {}  {}\n", r.left, r.right));
    out.push_str(&format!("value     {}\n", r.value));
    out.push_str(&format!("coupling  {}\n", pairs_line(&r.coupling)));
    if let Some(oracle) = &r.oracle {
        out.push_str(&format!(
            "oracle    {} over {} couplings, agrees: {}\n",
            oracle.value, oracle.couplings_evaluated, oracle.agrees
        ));
    }
    out
}

pub fn render_npd_table(r: &NpdReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("npd  {}  {}\n", r.left, r.right));
    out.push_str(&format!("value     {}\n", r.value.0));
    if let Some(b) = &r.bijection {
        let map = b
            .iter()
            .enumerate()
            .map(|(i, j)| format!("{i}->{j}"))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("bijection {map}\n"));
    }
    if let Some(brute) = &r.brute {
        out.push_str(&format!(
            "brute     {} agrees: {}\n",
            brute.value.0, brute.agrees
        ));
    }
    out
}

pub fn render_axioms_table(r: &AxiomsReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "axioms  functional={}  spaces={}  seed={}\n",
        r.functional,
        r.spaces.len(),
        r.seed
    ));
    out.push_str(&format!(
        "properties: {} trials, {} inversion checks, {} composition checks ({} skipped)\n",
        r.functional_properties.trials_run,
        r.functional_properties.inversion_checks,
        r.functional_properties.composition_checks,
        r.functional_properties.composition_skipped,
    ));
    for v in &r.functional_properties.violations {
        out.push_str(&format!("  violation: {v}\n"));
    }
    out.push_str("delta matrix:\n");
    for (i, row) in r.pseudo_distance_axioms.delta.iter().enumerate() {
        let cells = row
            .iter()
            .map(|v| format!("{:>12}", v.0.to_string()))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("  {:>2} {cells}\n", r.spaces.get(i).map_or("", |s| s)));
    }
    for v in &r.pseudo_distance_axioms.violations {
        out.push_str(&format!("  violation: {v}\n"));
    }
    out.push_str(&format!("pass: {}\n", r.pass));
    out
}

pub fn render_theorem_demo_table(r: &TheoremDemoReport) -> String {
    let mut out = String::new();
    out.push_str("theorem-demo: contraction powers against the identity\n");
    out.push_str(&format!(
        "contraction breakpoints: {}\n",
        r.contraction_breakpoints
            .iter()
            .map(|[x, y]| format!("({x},{y})"))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.push_str("\npower  sup_distance\n");
    for (power, sup) in &r.plot {
        out.push_str(&format!("{power:>5}  {sup}\n"));
    }
    out.push_str(&format!("\nmin sup distance over all powers: {}\n", r.min_sup_distance));
    out.push_str("\ncancellation h^i o (h^-1)^i = id:\n");
    for step in &r.cancellation_steps {
        out.push_str(&format!(
            "  i = {:>3}: {}\n",
            step.exponent,
            if step.cancellation_is_identity { "identity (exact)" } else { "FAILED" }
        ));
    }
    out.push_str("\ngap powers h^(i_{r+1} - i_r):\n");
    for gap in &r.gap_powers {
        out.push_str(&format!(
            "  exponent {:>3}: sup distance from id = {} ({}), at x=1/2: {}\n",
            gap.exponent, gap.sup_distance, gap.sup_distance_decimal, gap.deviation_at_half
        ));
    }
    out.push_str(&format!(
        "\nall cancellations verified: {}\n",
        r.all_cancellations_verified
    ));
    out
}
