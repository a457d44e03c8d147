//! Runtime-selectable strategies: quotient-basis selection and stopping
//! rules live behind trait objects in a name-keyed registry, so the CLI
//! (and tests) pick implementations by string.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::config::Policy;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, RankTolerance};
use crate::poly::Monomial;
use crate::pp::{check_stop, rank_criterion_profile, DimensionTable, StopVerdict};
use crate::quotient::{select_basis_greedy, select_basis_pivots, QuotientBasis};

/// How a monomial basis of the quotient ring is selected from an
/// evaluation matrix.
pub trait BasisSelection: Send + Sync {
    fn name(&self) -> &'static str;
    /// Pick basis columns among the first `admissible` (degree <= s-1).
    fn select(
        &self,
        y: &DenseMatrix,
        columns: &[Monomial],
        admissible: usize,
        tol: &RankTolerance,
    ) -> Result<QuotientBasis>;
}

/// Greedy scan in graded order; division-closed by construction when the
/// kernel is prolongation-stable.
pub struct GreedySelection;

impl BasisSelection for GreedySelection {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn select(
        &self,
        y: &DenseMatrix,
        columns: &[Monomial],
        admissible: usize,
        tol: &RankTolerance,
    ) -> Result<QuotientBasis> {
        select_basis_greedy(y, columns, admissible, tol)
    }
}

/// Gauss-Jordan pivot columns; connectedness to 1 is verified afterwards.
pub struct PivotSelection;

impl BasisSelection for PivotSelection {
    fn name(&self) -> &'static str {
        "pivots"
    }

    fn select(
        &self,
        y: &DenseMatrix,
        columns: &[Monomial],
        admissible: usize,
        tol: &RankTolerance,
    ) -> Result<QuotientBasis> {
        select_basis_pivots(y, columns, admissible, tol)
    }
}

/// Everything a stopping rule may look at in one iteration.
pub struct IterationContext<'a> {
    pub table: &'a DimensionTable,
    /// `rank M_s(L*)` for `s = 0..=floor(t/2)`; present in real mode.
    pub rank_profile: Option<&'a [usize]>,
    pub d: usize,
    pub policy: Policy,
}

/// A per-order stopping decision.
pub trait StoppingRule: Send + Sync {
    fn name(&self) -> &'static str;
    /// True when the rule needs the SDP's generic element.
    fn needs_generic_element(&self) -> bool;
    fn check(&self, ctx: &IterationContext<'_>) -> StopVerdict;
}

/// Dimension equalities on projections of the kernel of `G_t` and `G_t^+`.
pub struct DimensionRule;

impl StoppingRule for DimensionRule {
    fn name(&self) -> &'static str {
        "dims"
    }

    fn needs_generic_element(&self) -> bool {
        false
    }

    fn check(&self, ctx: &IterationContext<'_>) -> StopVerdict {
        check_stop(ctx.table, ctx.d, ctx.policy)
    }
}

/// Moment-matrix rank stabilization (the comparison criterion).
pub struct RankRule;

impl StoppingRule for RankRule {
    fn name(&self) -> &'static str {
        "rank"
    }

    fn needs_generic_element(&self) -> bool {
        true
    }

    fn check(&self, ctx: &IterationContext<'_>) -> StopVerdict {
        match ctx.rank_profile {
            Some(profile) => rank_criterion_profile(profile, ctx.d, ctx.policy),
            None => StopVerdict::not_yet(),
        }
    }
}

/// Name-keyed strategy registry.
pub struct StrategyRegistry {
    selections: BTreeMap<&'static str, Arc<dyn BasisSelection>>,
    rules: BTreeMap<&'static str, Arc<dyn StoppingRule>>,
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut reg = StrategyRegistry {
            selections: BTreeMap::new(),
            rules: BTreeMap::new(),
        };
        reg.register_selection(Arc::new(GreedySelection));
        reg.register_selection(Arc::new(PivotSelection));
        reg.register_rule(Arc::new(DimensionRule));
        reg.register_rule(Arc::new(RankRule));
        reg
    }
}

impl StrategyRegistry {
    pub fn register_selection(&mut self, s: Arc<dyn BasisSelection>) {
        self.selections.insert(s.name(), s);
    }

    pub fn register_rule(&mut self, r: Arc<dyn StoppingRule>) {
        self.rules.insert(r.name(), r);
    }

    pub fn selection(&self, name: &str) -> Result<Arc<dyn BasisSelection>> {
        self.selections
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "basis selection",
                name: name.into(),
                known: self.selection_names().join(", "),
            })
    }

    pub fn rule(&self, name: &str) -> Result<Arc<dyn StoppingRule>> {
        self.rules
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "stopping rule",
                name: name.into(),
                known: self.rule_names().join(", "),
            })
    }

    pub fn selection_names(&self) -> Vec<&'static str> {
        self.selections.keys().cloned().collect()
    }

    pub fn rule_names(&self) -> Vec<&'static str> {
        self.rules.keys().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_defaults() {
        let reg = StrategyRegistry::default();
        assert_eq!(reg.selection_names(), vec!["greedy", "pivots"]);
        assert_eq!(reg.rule_names(), vec!["dims", "rank"]);
        assert!(reg.selection("greedy").is_ok());
        assert!(reg.rule("rank").unwrap().needs_generic_element());
    }

    #[test]
    fn unknown_strategy_lists_known() {
        let reg = StrategyRegistry::default();
        let text = match reg.selection("qr") {
            Err(e) => e.to_string(),
            Ok(_) => panic!("expected an unknown-strategy error"),
        };
        assert!(text.contains("greedy"));
        assert!(text.contains("pivots"));
    }
}
