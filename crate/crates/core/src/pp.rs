//! The prolongation-projection driver: per-order dimension tables, the
//! stopping rules, and the order-increment loop that hands off to basis
//! selection and root extraction.

use std::collections::BTreeSet;

use crate::config::{Mode, Policy, SolveConfig};
use crate::error::{Error, Result};
use crate::linalg::{
    numeric_rank, nullspace_basis, row_space_basis, DenseMatrix, RankTolerance,
};
use crate::extract::{extract_roots, verify_roots, ExtractSettings, Root};
use crate::moment::{assemble_g, moment_matrix, GtSystem};
use crate::poly::{Monomial, MonomialBasis, PolySystem};
use crate::quotient::{border_basis, multiplication_matrices, BorderBasis, MultiplicationSystem};
use crate::sdp::{build_cone_problem, generic_element_seeded, GenericSolution};
use crate::strategy::{IterationContext, StrategyRegistry};

/// Dimensions of the projections of the kernels of `G_t` and `G_t^+`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DimensionTable {
    pub t: usize,
    /// `dim pi_s(ker G_t)` for `s = 0..=t`.
    pub dims_g: Vec<usize>,
    /// `dim pi_s(ker G_t^+)` for `s = 0..=t+1`.
    pub dims_gplus: Vec<usize>,
    /// Cleared when the rows violate a structural law (monotonicity in `s`,
    /// prolongation shrinking the kernel): numerical kernel noise at this
    /// order; the cells are reported but not trusted by stopping rules.
    pub consistent: bool,
}

/// What a stopping rule concluded at one order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum StopKind {
    /// Some projection dimension hit zero: the variety is empty.
    Empty,
    /// The dimension equalities hold at `s`.
    DimConditions,
    /// The dimension equalities and their strong (doubled-degree) variant
    /// hold at `s`.
    StrongDimConditions,
    /// Moment-matrix ranks stabilized at `s`.
    RankCondition,
    NotYet,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct StopVerdict {
    pub kind: StopKind,
    /// The smallest satisfying `s`, when applicable.
    pub s: Option<usize>,
    /// Set when `s < D`: root verification against the generators is
    /// mandatory before claiming the real variety.
    pub s_below_d: bool,
    /// Every `s` in the scanned range satisfying the conditions.
    pub satisfied: Vec<usize>,
    /// Every `s` at which the strong pair also holds.
    pub strong: Vec<usize>,
}

impl StopVerdict {
    pub fn not_yet() -> Self {
        StopVerdict {
            kind: StopKind::NotYet,
            s: None,
            s_below_d: false,
            satisfied: Vec::new(),
            strong: Vec::new(),
        }
    }

    pub fn fired(&self) -> bool {
        matches!(
            self.kind,
            StopKind::DimConditions | StopKind::StrongDimConditions | StopKind::RankCondition
        )
    }
}

/// `dim pi_s` of the row space of a kernel basis: the rank of the matrix
/// of rows truncated to the degree-`s` coordinate prefix.
pub fn projection_dimension(
    kernel_rows: &DenseMatrix,
    n: usize,
    s: usize,
    tol: &RankTolerance,
) -> Result<usize> {
    if kernel_rows.rows == 0 {
        return Ok(0);
    }
    let prefix = crate::poly::binomial(n + s, s).min(kernel_rows.cols);
    let zs = kernel_rows.column_block(0, prefix);
    Ok(numeric_rank(&zs, tol)?.rank)
}

/// Kernel bases of `G_t` and `G_t^+` along with the dimension table.
pub struct KernelTable {
    pub table: DimensionTable,
    pub kernel_g: DenseMatrix,
    pub kernel_gplus: DenseMatrix,
}

/// Compute both kernels and the full dimension table rows.
pub fn dimension_table(gt: &GtSystem, tol: &RankTolerance) -> Result<KernelTable> {
    let g = gt.g_matrix();
    let kernel_g = nullspace_basis(&g, tol)?;
    drop(g);
    let kernel_gplus = nullspace_basis(&gt.g_plus, tol)?;
    let mut dims_g = Vec::with_capacity(gt.t + 1);
    for s in 0..=gt.t {
        dims_g.push(projection_dimension(&kernel_g, gt.n, s, tol)?);
    }
    let mut dims_gplus = Vec::with_capacity(gt.t + 2);
    for s in 0..=gt.t + 1 {
        dims_gplus.push(projection_dimension(&kernel_gplus, gt.n, s, tol)?);
    }
    let consistent = table_consistent(gt.t, &dims_g, &dims_gplus);
    Ok(KernelTable {
        table: DimensionTable {
            t: gt.t,
            dims_g,
            dims_gplus,
            consistent,
        },
        kernel_g,
        kernel_gplus,
    })
}

// Structural laws every exact table satisfies.
fn table_consistent(_t: usize, dims_g: &[usize], dims_gplus: &[usize]) -> bool {
    if dims_g[0] > 1 {
        return false;
    }
    if dims_g.windows(2).any(|w| w[1] < w[0]) || dims_gplus.windows(2).any(|w| w[1] < w[0]) {
        return false;
    }
    (0..dims_g.len()).all(|s| dims_gplus[s] <= dims_g[s])
}

/// Scan the dimension table for the stopping conditions.
///
/// Policy picks the scan range: strict keeps `D <= s <= floor(t/2)`;
/// extended allows `1 <= s <= t`, flagging `s < D`. The verdict reports
/// every satisfying `s` and upgrades to the strong kind when the
/// doubled-degree equalities also hold at the chosen `s`.
pub fn check_stop(table: &DimensionTable, d: usize, policy: Policy) -> StopVerdict {
    let t = table.t;
    if let Some(s) = (0..=t).find(|&s| table.dims_g[s] == 0) {
        return StopVerdict {
            kind: StopKind::Empty,
            s: Some(s),
            s_below_d: false,
            satisfied: Vec::new(),
            strong: Vec::new(),
        };
    }
    let (lo, hi) = match policy {
        Policy::Strict => (d, t / 2),
        Policy::Extended => (1, t),
    };
    let mut satisfied = Vec::new();
    let mut strong = Vec::new();
    for s in lo.max(1)..=hi.min(t) {
        let eq = table.dims_g[s] == table.dims_g[s - 1]
            && table.dims_g[s] == table.dims_gplus[s];
        if eq {
            satisfied.push(s);
            if 2 * s <= t
                && table.dims_g[2 * s] == table.dims_g[s - 1]
                && table.dims_g[2 * s] == table.dims_gplus[2 * s]
            {
                strong.push(s);
            }
        }
    }
    match satisfied.first().cloned() {
        None => StopVerdict::not_yet(),
        Some(s) => StopVerdict {
            kind: if strong.contains(&s) {
                StopKind::StrongDimConditions
            } else {
                StopKind::DimConditions
            },
            s: Some(s),
            s_below_d: s < d,
            satisfied,
            strong,
        },
    }
}

/// The moment-matrix rank stopping rule on a rank profile
/// (`profile[s] = rank M_s(L*)`, `s = 0..=floor(t/2)`).
pub fn rank_criterion_profile(profile: &[usize], d: usize, policy: Policy) -> StopVerdict {
    let s0 = profile.len().saturating_sub(1);
    if profile.last() == Some(&0) {
        return StopVerdict {
            kind: StopKind::Empty,
            s: Some(0),
            s_below_d: false,
            satisfied: Vec::new(),
            strong: Vec::new(),
        };
    }
    let lo = match policy {
        Policy::Strict => d,
        Policy::Extended => 1,
    };
    let mut satisfied = Vec::new();
    for s in lo.max(1)..=s0 {
        if profile[s] == profile[s - 1] {
            satisfied.push(s);
        }
    }
    match satisfied.first().cloned() {
        None => StopVerdict::not_yet(),
        Some(s) => StopVerdict {
            kind: StopKind::RankCondition,
            s: Some(s),
            s_below_d: s < d,
            satisfied,
            strong: Vec::new(),
        },
    }
}

/// Rank stopping rule straight off a generic solution.
pub fn rank_criterion(sol: &GenericSolution, d: usize, policy: Policy) -> StopVerdict {
    rank_criterion_profile(&sol.rank_profile, d, policy)
}

/// Everything recorded about one prolongation order.
pub struct IterationReport {
    pub t: usize,
    pub table: DimensionTable,
    pub dims_verdict: StopVerdict,
    pub rank_verdict: Option<StopVerdict>,
    /// Kernel basis of `G_t` (rows over the degree-`t` graded basis).
    pub kernel_g: DenseMatrix,
    /// The generic SDP element (real mode).
    pub generic: Option<GenericSolution>,
    /// When a fired order failed downstream (basis/border/extraction), the
    /// failure is recorded and the loop moves to the next order.
    pub extraction_failure: Option<String>,
}

/// Which evaluation matrix fed basis selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ExtractionRoute {
    /// Kernel projections of `G_t` (prolongation-projection method).
    KernelProjection,
    /// Columns of the generic moment matrix (moment-matrix method).
    MomentMatrix,
}

/// The solved end state.
pub struct Extraction {
    pub t: usize,
    pub s: usize,
    pub kind: StopKind,
    pub s_below_d: bool,
    pub route: ExtractionRoute,
    pub basis: Vec<Monomial>,
    pub division_closed: bool,
    pub basis_condition: f64,
    pub border: BorderBasis,
    pub multiplication: MultiplicationSystem,
    /// Verified roots (all candidates in complex mode).
    pub roots: Vec<Root>,
    pub rejected: Vec<Root>,
    /// Real mode: the number of verified real roots equals the quotient
    /// dimension, certifying the computed ideal is the real radical.
    pub radical_certified: bool,
}

pub enum Outcome {
    Solved(Extraction),
    /// A projection dimension reached zero at order `t`.
    EmptyVariety { t: usize, s: usize },
    /// `t_max` was reached without a fired rule; tables are still reported.
    Exhausted { t_max: usize },
}

pub struct SolveResult {
    pub mode: Mode,
    pub policy: Policy,
    pub criterion: String,
    pub d: usize,
    pub seed: u64,
    pub iterations: Vec<IterationReport>,
    /// First order at which the dimension conditions held.
    pub dims_first: Option<(usize, usize)>,
    /// First order at which the rank condition held.
    pub rank_first: Option<(usize, usize)>,
    pub outcome: Outcome,
}

impl SolveResult {
    pub fn solved(&self) -> Option<&Extraction> {
        match &self.outcome {
            Outcome::Solved(e) => Some(e),
            _ => None,
        }
    }

    pub fn table_for(&self, t: usize) -> Option<&DimensionTable> {
        self.iterations.iter().find(|r| r.t == t).map(|r| &r.table)
    }
}

/// Alias kept for discoverability next to [`SolveResult`].
pub type SolveOutcome = Outcome;

enum CriterionMode {
    Dims,
    Rank,
    Both,
}

/// Solve with the default strategy registry.
pub fn solve(sys: &PolySystem, config: &SolveConfig) -> Result<SolveResult> {
    solve_with_registry(sys, config, &StrategyRegistry::default())
}

/// Run the prolongation-projection loop.
pub fn solve_with_registry(
    sys: &PolySystem,
    config: &SolveConfig,
    registry: &StrategyRegistry,
) -> Result<SolveResult> {
    let d = sys.max_degree();
    let t_start = config.t_start.unwrap_or(d);
    if t_start < d {
        return Err(Error::OrderBelowDegree { t: t_start, d });
    }
    let t_max = config.t_max.unwrap_or(t_start + 8);
    if t_max < t_start {
        return Err(Error::InvalidInput("t_max below t_start".into()));
    }
    let criterion = match config.criterion.as_str() {
        "both" => CriterionMode::Both,
        name => {
            let rule = registry.rule(name)?;
            if rule.needs_generic_element() && config.mode == Mode::Complex {
                return Err(Error::InvalidInput(
                    "the rank criterion needs the moment SDP; use --mode real".into(),
                ));
            }
            match name {
                "rank" => CriterionMode::Rank,
                _ => CriterionMode::Dims,
            }
        }
    };
    if matches!(criterion, CriterionMode::Both) && config.mode == Mode::Complex {
        return Err(Error::InvalidInput(
            "criterion comparison needs the moment SDP; use --mode real".into(),
        ));
    }
    let selector = registry.selection(&config.basis)?;
    let dims_rule = registry.rule("dims")?;
    let rank_rule = registry.rule("rank")?;

    let settings = ExtractSettings {
        seed: config.seed,
        cluster_tol: config.cluster_tol,
        imag_tol: config.imag_tol,
        residual_tol: config.residual_tol,
        commutativity_gate: config.commutativity_gate,
        refine: config.refine,
    };

    let mut iterations: Vec<IterationReport> = Vec::new();
    let mut dims_first: Option<(usize, usize)> = None;
    let mut rank_first: Option<(usize, usize)> = None;
    let mut solved: Option<Extraction> = None;
    let mut empty: Option<(usize, usize)> = None;
    // kernels nest across orders; carry them forward as exact seeds
    let mut carried_kernel: Vec<crate::poly::Polynomial> = Vec::new();

    for t in t_start..=t_max {
        // real mode: generic element of the moment cone at this order
        let generic = match config.mode {
            Mode::Real => {
                let prob = build_cone_problem(sys, t, &config.rank_tol)?;
                let sol =
                    generic_element_seeded(&prob, &config.rank_tol, &config.sdp, &carried_kernel)?;
                carried_kernel = sol.kernel_polys.clone();
                Some(sol)
            }
            Mode::Complex => None,
        };
        let kernel_polys: Vec<_> = generic
            .as_ref()
            .map(|g| g.kernel_polys.clone())
            .unwrap_or_default();
        let gt = assemble_g(sys, t, &kernel_polys, config.mode, &config.rank_tol)?;
        let kt = dimension_table(&gt, &config.rank_tol)?;
        drop(gt);

        let ctx = IterationContext {
            table: &kt.table,
            rank_profile: generic.as_ref().map(|g| g.rank_profile.as_slice()),
            d,
            policy: config.policy,
        };
        let dims_verdict = dims_rule.check(&ctx);
        let rank_verdict = generic.as_ref().map(|_| rank_rule.check(&ctx));

        if dims_first.is_none() {
            if let (true, Some(s)) = (dims_verdict.fired(), dims_verdict.s) {
                dims_first = Some((t, s));
            }
        }
        if rank_first.is_none() {
            if let Some(rv) = &rank_verdict {
                if let (true, Some(s)) = (rv.fired(), rv.s) {
                    rank_first = Some((t, s));
                }
            }
        }

        let mut report = IterationReport {
            t,
            table: kt.table.clone(),
            dims_verdict: dims_verdict.clone(),
            rank_verdict: rank_verdict.clone(),
            kernel_g: kt.kernel_g,
            generic,
            extraction_failure: None,
        };

        // empty-variety certificates end the loop for every criterion
        let dims_empty = dims_verdict.kind == StopKind::Empty;
        let rank_empty = rank_verdict
            .as_ref()
            .map(|v| v.kind == StopKind::Empty)
            .unwrap_or(false);
        if empty.is_none() && (dims_empty || (matches!(criterion, CriterionMode::Rank) && rank_empty))
        {
            empty = Some((t, dims_verdict.s.unwrap_or(0)));
            iterations.push(report);
            break;
        }

        // extraction on the active criterion's first fired order
        if solved.is_none() {
            let (fire_verdict, route) = match criterion {
                CriterionMode::Dims | CriterionMode::Both => {
                    (&dims_verdict, ExtractionRoute::KernelProjection)
                }
                CriterionMode::Rank => match &rank_verdict {
                    Some(v) => (v, ExtractionRoute::MomentMatrix),
                    None => (&dims_verdict, ExtractionRoute::KernelProjection),
                },
            };
            if fire_verdict.fired() {
                let s = fire_verdict.s.expect("fired verdict has s");
                let attempt = run_extraction(
                    sys,
                    config,
                    &settings,
                    &selector,
                    &report,
                    fire_verdict,
                    s,
                    route,
                );
                match attempt {
                    Ok(extraction) => solved = Some(extraction),
                    Err(e) => report.extraction_failure = Some(e.to_string()),
                }
            }
        }

        iterations.push(report);

        // stop once the work is done: extraction succeeded, the comparison
        // (when requested) has both first orders, and t_extra has run out
        if let Some(ext) = &solved {
            let need_rank = matches!(criterion, CriterionMode::Both) && rank_first.is_none();
            if !need_rank && t >= ext.t + config.t_extra {
                break;
            }
        }
    }

    let outcome = if let Some((t, s)) = empty {
        Outcome::EmptyVariety { t, s }
    } else if let Some(e) = solved {
        Outcome::Solved(e)
    } else {
        Outcome::Exhausted { t_max }
    };
    Ok(SolveResult {
        mode: config.mode,
        policy: config.policy,
        criterion: config.criterion.clone(),
        d,
        seed: config.seed,
        iterations,
        dims_first,
        rank_first,
        outcome,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_extraction(
    sys: &PolySystem,
    config: &SolveConfig,
    settings: &ExtractSettings,
    selector: &std::sync::Arc<dyn crate::strategy::BasisSelection>,
    report: &IterationReport,
    verdict: &StopVerdict,
    s: usize,
    route: ExtractionRoute,
) -> Result<Extraction> {
    let n = sys.num_vars();
    let basis_s = MonomialBasis::new(n, s);
    let admissible = if s == 0 { 1 } else { basis_s.count_up_to(s - 1) };

    let y = match route {
        ExtractionRoute::KernelProjection => {
            let prefix = basis_s.len().min(report.kernel_g.cols);
            let zs = report.kernel_g.column_block(0, prefix);
            row_space_basis(&zs, &config.rank_tol)?
        }
        ExtractionRoute::MomentMatrix => {
            let generic = report
                .generic
                .as_ref()
                .ok_or_else(|| Error::Other("rank route without a generic element".into()))?;
            moment_matrix(&generic.functional, s)?
        }
    };

    let qb = selector.select(&y, basis_s.monomials(), admissible, &config.rank_tol)?;
    let bb = border_basis(&qb, s, &config.rank_tol)?;
    let ms = multiplication_matrices(&qb, &bb)?;
    let roots = extract_roots(&ms, &qb, sys, settings)?;
    debug_assert_eq!(
        roots.iter().map(|r| r.cluster_size).sum::<usize>(),
        qb.len(),
        "cluster multiplicities cover the quotient dimension"
    );
    let (kept, rejected) = verify_roots(&roots, sys, config.mode, settings);
    let radical_certified = config.mode == Mode::Real && kept.len() == qb.len();

    Ok(Extraction {
        t: report.t,
        s,
        kind: verdict.kind,
        s_below_d: verdict.s_below_d,
        route,
        basis: qb.monomials.clone(),
        division_closed: qb.division_closed,
        basis_condition: qb.basis_condition,
        border: bb,
        multiplication: ms,
        roots: kept,
        rejected,
        radical_certified,
    })
}

/// Division-closure helper used by tests and reports.
pub fn basis_is_division_closed(basis: &[Monomial]) -> bool {
    let set: BTreeSet<Monomial> = basis.iter().cloned().collect();
    crate::poly::is_division_closed(&set)
}
