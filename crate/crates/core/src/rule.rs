//! Rule selectors and a single entry point that dispatches on them.

use std::fmt;
use std::str::FromStr;

use crate::classic::{self, SourceCombinationExpr};
use crate::error::{FusionError, Result};
use crate::expansion::TupleExpansion;
use crate::frame::Element;
use crate::mass::MassFunction;
use crate::pcr::{self, MinCVersion};
use crate::report::FusionResult;
use crate::special::{self, ImprovedBase, TConorm, TNorm, ZhangDegree};
use crate::uft::{self, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Conjunctive,
    Disjunctive,
    Xor,
    Mixed,
    Conditional,
    Dempster,
    Murphy,
    Mixing,
    DsmClassic,
    DsmHybrid,
    Smets,
    Yager,
    DuboisPrade,
    WeightedOperator,
    Inagaki,
    Wao,
    Pcr1,
    Pcr2,
    Pcr3,
    Pcr4,
    Pcr5,
    MinC(MinCVersion),
    Zhang(ZhangDegree),
    XAverage,
    Consensus,
    TNorm(TNorm),
    TConorm(TConorm),
    Cautious,
    Improved(ImprovedBase),
    Uft,
}

impl Rule {
    pub const ALL: [Rule; 41] = [
        Rule::Conjunctive,
        Rule::Disjunctive,
        Rule::Xor,
        Rule::Mixed,
        Rule::Conditional,
        Rule::Dempster,
        Rule::Murphy,
        Rule::Mixing,
        Rule::DsmClassic,
        Rule::DsmHybrid,
        Rule::Smets,
        Rule::Yager,
        Rule::DuboisPrade,
        Rule::WeightedOperator,
        Rule::Inagaki,
        Rule::Wao,
        Rule::Pcr1,
        Rule::Pcr2,
        Rule::Pcr3,
        Rule::Pcr4,
        Rule::Pcr5,
        Rule::MinC(MinCVersion::A),
        Rule::MinC(MinCVersion::B),
        Rule::Zhang(ZhangDegree::Product),
        Rule::Zhang(ZhangDegree::Union),
        Rule::XAverage,
        Rule::Consensus,
        Rule::TNorm(TNorm::Algebraic),
        Rule::TNorm(TNorm::Bounded),
        Rule::TNorm(TNorm::Min),
        Rule::TConorm(TConorm::Algebraic),
        Rule::TConorm(TConorm::Bounded),
        Rule::TConorm(TConorm::Max),
        Rule::Cautious,
        Rule::Improved(ImprovedBase::Disjunctive),
        Rule::Improved(ImprovedBase::DsmClassic),
        Rule::Improved(ImprovedBase::DsmHybrid),
        Rule::Improved(ImprovedBase::Smets),
        Rule::Improved(ImprovedBase::Yager),
        Rule::Improved(ImprovedBase::DuboisPrade),
        Rule::Uft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Conjunctive => "conjunctive",
            Rule::Disjunctive => "disjunctive",
            Rule::Xor => "xor",
            Rule::Mixed => "mixed",
            Rule::Conditional => "conditional",
            Rule::Dempster => "dempster",
            Rule::Murphy => "murphy",
            Rule::Mixing => "mixing",
            Rule::DsmClassic => "dsmc",
            Rule::DsmHybrid => "dsmh",
            Rule::Smets => "smets",
            Rule::Yager => "yager",
            Rule::DuboisPrade => "dubois-prade",
            Rule::WeightedOperator => "wo",
            Rule::Inagaki => "inagaki",
            Rule::Wao => "wao",
            Rule::Pcr1 => "pcr1",
            Rule::Pcr2 => "pcr2",
            Rule::Pcr3 => "pcr3",
            Rule::Pcr4 => "pcr4",
            Rule::Pcr5 => "pcr5",
            Rule::MinC(MinCVersion::A) => "minc-a",
            Rule::MinC(MinCVersion::B) => "minc-b",
            Rule::Zhang(ZhangDegree::Product) => "zhang-product",
            Rule::Zhang(ZhangDegree::Union) => "zhang-union",
            Rule::XAverage => "xavg",
            Rule::Consensus => "consensus",
            Rule::TNorm(TNorm::Algebraic) => "tnorm-algebraic",
            Rule::TNorm(TNorm::Bounded) => "tnorm-bounded",
            Rule::TNorm(TNorm::Min) => "tnorm-min",
            Rule::TConorm(TConorm::Algebraic) => "tconorm-algebraic",
            Rule::TConorm(TConorm::Bounded) => "tconorm-bounded",
            Rule::TConorm(TConorm::Max) => "tconorm-max",
            Rule::Cautious => "cautious",
            Rule::Improved(ImprovedBase::Disjunctive) => "improved-disjunctive",
            Rule::Improved(ImprovedBase::DsmClassic) => "improved-dsmc",
            Rule::Improved(ImprovedBase::DsmHybrid) => "improved-dsmh",
            Rule::Improved(ImprovedBase::Smets) => "improved-smets",
            Rule::Improved(ImprovedBase::Yager) => "improved-yager",
            Rule::Improved(ImprovedBase::DuboisPrade) => "improved-dp",
            Rule::Uft => "uft",
        }
    }

    /// Every selector string, in a stable order.
    pub fn selectors() -> Vec<&'static str> {
        Rule::ALL.iter().map(|r| r.name()).collect()
    }

    /// Rules that run the conjunctive product first and then move the
    /// conflicting mass.
    pub fn is_conjunctive_based(self) -> bool {
        matches!(
            self,
            Rule::Conjunctive
                | Rule::Dempster
                | Rule::DsmClassic
                | Rule::DsmHybrid
                | Rule::Smets
                | Rule::Yager
                | Rule::DuboisPrade
                | Rule::WeightedOperator
                | Rule::Inagaki
                | Rule::Wao
                | Rule::Pcr1
                | Rule::Pcr2
                | Rule::Pcr3
                | Rule::Pcr4
                | Rule::Pcr5
                | Rule::MinC(_)
        )
    }

    /// Rules whose s-ary form is computed from the merged product store.
    pub(crate) fn is_expansion_based(self) -> bool {
        self.is_conjunctive_based() && !matches!(self, Rule::Pcr3 | Rule::Pcr4 | Rule::Pcr5 | Rule::MinC(_))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| FusionError::UnknownRule(s.to_string()))
    }
}

/// Extra inputs some rules need.
#[derive(Debug, Clone, Default)]
pub struct Params {
    /// Inagaki's parameter.
    pub p: Option<f64>,
    /// Source weights for `mixing`.
    pub weights: Option<Vec<f64>>,
    /// Conflict weights for `wo`; ∅ is allowed as a recipient.
    pub wo_weights: Option<Vec<(Element, f64)>>,
    /// Combination of sources for `mixed`.
    pub expr: Option<SourceCombinationExpr>,
    /// Hypothesis made certain by `conditional`.
    pub hypothesis: Option<Element>,
    /// Rule used by `conditional`; conjunctive when absent.
    pub given: Option<Rule>,
    /// Focus of the coarsening for `consensus`.
    pub focus: Option<Element>,
    /// Relative dogmatism for two dogmatic opinions.
    pub gamma: Option<f64>,
    pub scenario: Option<ScenarioConfig>,
}

fn binary_or_pairwise(
    sources: &[MassFunction],
    rule: impl Fn(&MassFunction, &MassFunction) -> Result<FusionResult>,
) -> Result<FusionResult> {
    pcr::compose_pairwise(sources, rule)
}

/// Applies a conjunctive-based rule to a product store.
pub(crate) fn apply_expanded(rule: Rule, exp: &TupleExpansion, params: &Params) -> Result<FusionResult> {
    match rule {
        Rule::Conjunctive | Rule::DsmClassic => classic::conjunctive_expanded(exp),
        Rule::Dempster => classic::dempster_expanded(exp),
        Rule::DsmHybrid => classic::dsm_hybrid_expanded(exp),
        Rule::Smets => classic::smets_expanded(exp),
        Rule::Yager => classic::yager_expanded(exp),
        Rule::DuboisPrade => classic::dubois_prade_expanded(exp),
        Rule::WeightedOperator => {
            let weights = params.wo_weights.as_ref().ok_or(FusionError::MissingParameter("weights"))?;
            classic::weighted_operator_expanded(exp, weights)
        }
        Rule::Inagaki => classic::inagaki_expanded(exp, params.p.ok_or(FusionError::MissingParameter("p"))?),
        Rule::Wao => pcr::wao_expanded(exp),
        Rule::Pcr1 => pcr::pcr1_expanded(exp),
        Rule::Pcr2 => pcr::pcr2_expanded(exp),
        other => Err(FusionError::NotConjunctiveBased(other.name().to_string())),
    }
}

/// Combines the sources with `rule`. Rules defined for two sources are
/// applied pairwise from the left when given more.
pub fn apply(rule: Rule, sources: &[MassFunction], params: &Params) -> Result<FusionResult> {
    if sources.is_empty() {
        return Err(FusionError::ArityMismatch { expected: 1, got: 0 });
    }
    if rule.is_expansion_based() {
        return apply_expanded(rule, &TupleExpansion::new(sources)?, params);
    }
    match rule {
        Rule::Disjunctive => classic::disjunctive_all(sources),
        Rule::Xor => classic::exclusive_disjunctive_all(sources),
        Rule::Mixed => {
            let expr = match &params.expr {
                Some(e) => e.clone(),
                None => return Err(FusionError::MissingParameter("expr")),
            };
            classic::mixed(sources, &expr)
        }
        Rule::Conditional => {
            let [m] = sources else {
                return Err(FusionError::ArityMismatch { expected: 1, got: sources.len() });
            };
            let hypothesis = params.hypothesis.as_ref().ok_or(FusionError::MissingParameter("hypothesis"))?;
            conditional(m, hypothesis, params.given.unwrap_or(Rule::Conjunctive), params)
        }
        Rule::Murphy => {
            let weights = vec![1.0; sources.len()];
            Ok(FusionResult::plain(classic::mixing(sources, &weights)?))
        }
        Rule::Mixing => {
            let weights = params.weights.as_ref().ok_or(FusionError::MissingParameter("weights"))?;
            Ok(FusionResult::plain(classic::mixing(sources, weights)?))
        }
        Rule::Pcr3 => binary_or_pairwise(sources, pcr::pcr3),
        Rule::Pcr4 => binary_or_pairwise(sources, pcr::pcr4),
        Rule::Pcr5 => binary_or_pairwise(sources, pcr::pcr5),
        Rule::MinC(v) => binary_or_pairwise(sources, |a, b| pcr::minc(a, b, v)),
        Rule::Zhang(d) => binary_or_pairwise(sources, |a, b| special::zhang(a, b, d)),
        Rule::TNorm(k) => binary_or_pairwise(sources, |a, b| special::tnorm(a, b, k)),
        Rule::TConorm(k) => binary_or_pairwise(sources, |a, b| special::tconorm(a, b, k)),
        Rule::Cautious => binary_or_pairwise(sources, special::cautious),
        Rule::Improved(base) => binary_or_pairwise(sources, |a, b| special::improved(a, b, base)),
        Rule::Consensus => {
            let focus = params.focus.as_ref().ok_or(FusionError::MissingParameter("focus"))?;
            binary_or_pairwise(sources, |a, b| {
                special::consensus_masses(a, b, focus, params.gamma).map(|(_, m)| FusionResult::plain(m))
            })
        }
        Rule::XAverage => Err(FusionError::NonIntervalFocal),
        Rule::Uft => {
            let config = params.scenario.as_ref().ok_or(FusionError::MissingParameter("scenario"))?;
            uft::uft_combine(sources, config)
        }
        _ => unreachable!("expansion-based rules handled above"),
    }
}

/// Combines `m` with the certain bba on `hypothesis` under `rule`.
pub fn conditional(m: &MassFunction, hypothesis: &Element, rule: Rule, params: &Params) -> Result<FusionResult> {
    let hypothesis = m.frame().reevaluate(hypothesis)?;
    if hypothesis.is_empty() {
        return Err(FusionError::EmptyElement);
    }
    if rule == Rule::Conditional {
        return Err(FusionError::UnknownRule("conditional inside conditional".into()));
    }
    let certain = MassFunction::certain(m.frame(), &hypothesis)?;
    apply(rule, &[m.clone(), certain], params)
}
