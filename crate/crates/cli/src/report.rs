//! Report layout. Field order is fixed by the struct declarations, so a
//! report serializes byte-identically for identical inputs and seeds; wall
//! clock timings are included only on request for that reason.

use crate::spec::SpecEcho;
use largeness::koszul::{
    ComponentOutcome, FdOutcome, HomologyTable, ModularityConsistency, RegularSequenceOutcome,
};
use largeness::oracle::ClassicalVerdict;
use largeness::torus::LargenessReport;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Serialize)]
pub struct Report {
    pub command: &'static str,
    pub spec: SpecEcho,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analyze: Option<AnalyzeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub koszul: Option<KoszulSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<&'static str, u128>>,
}

#[derive(Serialize)]
pub struct ConfigEcho {
    pub prime: u64,
    pub second_prime: u64,
    pub degree_bound: Option<u32>,
    pub max_subsets: u64,
    pub max_minors: usize,
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub fd: i64,
    pub flows: usize,
}

#[derive(Serialize)]
pub struct Sl2Analyze {
    pub degrees: Vec<usize>,
    pub verdict: &'static str,
}

#[derive(Serialize)]
pub struct AnalyzeSection {
    /// How the verdict was reached: "combinatorial" for the weight-matrix
    /// pipeline, "oracle_table" for the classification tables.
    pub provenance: &'static str,
    pub dim_v: usize,
    pub dim_g: usize,
    /// None when the input falls outside the verdict tables.
    pub one_large: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus: Option<LargenessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sl2: Option<Sl2Analyze>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalVerdict>,
}

#[derive(Serialize)]
pub struct ComponentReport {
    pub witness: String,
    pub outcome: ComponentOutcome,
}

#[derive(Serialize)]
pub struct KoszulSection {
    pub provenance: &'static str,
    pub primes: [u64; 2],
    pub n: usize,
    pub k: usize,
    pub variables: usize,
    pub generic_rank: usize,
    pub regular_sequence: RegularSequenceOutcome,
    pub fd: Vec<FdOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<ComponentReport>,
}

#[derive(Serialize)]
pub struct FlowRow {
    pub index: usize,
    pub v0: Vec<[f64; 2]>,
    pub status: &'static str,
    pub iterations: usize,
    pub norm_start: f64,
    pub norm_end: f64,
    pub norm_end_sq: f64,
    pub moment_norm: f64,
    pub membership_defect: f64,
    /// Rank of the moment differential at the limit; only at converged ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_sample: Option<usize>,
}

#[derive(Serialize)]
pub struct FlowSection {
    pub provenance: &'static str,
    pub tol: f64,
    pub flows: Vec<FlowRow>,
}

#[derive(Serialize)]
pub struct CheckRow {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modularity: Option<ModularityConsistency>,
    pub checks: Vec<CheckRow>,
    pub notes: Vec<String>,
    pub consistent: bool,
}
