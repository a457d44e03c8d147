//! Versioned JSON report schema.
//!
//! The shape is stable: bump `schema_version` on breaking changes. Golden
//! files under `golden/` pin the layout.

use serde::Serialize;

use realvar_core::pp::{Outcome, SolveResult, StopKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub mode: String,
    pub criterion: String,
    pub policy: String,
    pub max_generator_degree: usize,
    pub seed: u64,
    pub iterations: Vec<IterationJson>,
    pub dims_first: Option<(usize, usize)>,
    pub rank_first: Option<(usize, usize)>,
    pub outcome: OutcomeJson,
}

#[derive(Serialize)]
pub struct IterationJson {
    pub t: usize,
    pub dims_g: Vec<usize>,
    pub dims_gplus: Vec<usize>,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_profile: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extraction_failure: Option<String>,
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OutcomeJson {
    Solved(SolvedJson),
    EmptyVariety { t: usize, s: usize },
    Exhausted { t_max: usize },
}

#[derive(Serialize)]
pub struct SolvedJson {
    pub t: usize,
    pub s: usize,
    pub stop_kind: String,
    pub s_below_degree: bool,
    pub basis: Vec<String>,
    pub division_closed: bool,
    pub border_basis: Vec<String>,
    pub commutativity_error: f64,
    pub radical_certified: bool,
    pub roots: Vec<RootJson>,
    pub rejected: Vec<RootJson>,
}

#[derive(Serialize)]
pub struct RootJson {
    /// Coordinates as [re, im] pairs.
    pub coords: Vec<[f64; 2]>,
    pub residual: f64,
    pub is_real: bool,
    pub cluster_size: usize,
    /// Seed of the random combination the root was extracted with.
    pub seed: u64,
}

fn kind_name(k: StopKind) -> &'static str {
    match k {
        StopKind::Empty => "empty",
        StopKind::DimConditions => "dim_conditions",
        StopKind::StrongDimConditions => "strong_dim_conditions",
        StopKind::RankCondition => "rank_condition",
        StopKind::NotYet => "not_yet",
    }
}

pub fn report(result: &SolveResult) -> Report {
    let outcome = match &result.outcome {
        Outcome::EmptyVariety { t, s } => OutcomeJson::EmptyVariety { t: *t, s: *s },
        Outcome::Exhausted { t_max } => OutcomeJson::Exhausted { t_max: *t_max },
        Outcome::Solved(ext) => OutcomeJson::Solved(SolvedJson {
            t: ext.t,
            s: ext.s,
            stop_kind: kind_name(ext.kind).into(),
            s_below_degree: ext.s_below_d,
            basis: ext.basis.iter().map(|m| m.to_string()).collect(),
            division_closed: ext.division_closed,
            border_basis: ext.border.polynomials().map(|f| f.to_string()).collect(),
            commutativity_error: ext.multiplication.commutativity_error,
            radical_certified: ext.radical_certified,
            roots: ext.roots.iter().map(|r| root_json(r, result.seed)).collect(),
            rejected: ext
                .rejected
                .iter()
                .map(|r| root_json(r, result.seed))
                .collect(),
        }),
    };
    Report {
        schema_version: SCHEMA_VERSION,
        mode: match result.mode {
            realvar_core::Mode::Real => "real".into(),
            realvar_core::Mode::Complex => "complex".into(),
        },
        criterion: result.criterion.clone(),
        policy: match result.policy {
            realvar_core::Policy::Strict => "strict".into(),
            realvar_core::Policy::Extended => "extended".into(),
        },
        max_generator_degree: result.d,
        seed: result.seed,
        iterations: result
            .iterations
            .iter()
            .map(|it| IterationJson {
                t: it.t,
                dims_g: it.table.dims_g.clone(),
                dims_gplus: it.table.dims_gplus.clone(),
                consistent: it.table.consistent,
                rank_profile: it.generic.as_ref().map(|g| g.rank_profile.clone()),
                extraction_failure: it.extraction_failure.clone(),
            })
            .collect(),
        dims_first: result.dims_first,
        rank_first: result.rank_first,
        outcome,
    }
}

fn root_json(r: &realvar_core::extract::Root, seed: u64) -> RootJson {
    RootJson {
        coords: r.coordinates.iter().map(|&(re, im)| [re, im]).collect(),
        residual: r.residual,
        is_real: r.is_real,
        cluster_size: r.cluster_size,
        seed,
    }
}
