//! Scenario-driven fusion: pick how to combine from what is known about the
//! sources, then route every conflicting product by the declared attitude
//! towards its pair of operands.
//!
//! Also hosts the two stateful helpers: re-fusing when the model learns a
//! new empty region, and storing the product of past sources so that
//! conjunctive-based rules can be updated one source at a time.

use crate::classic::{self, dsmh_target, SourceCombinationExpr};
use crate::error::{FusionError, Result};
use crate::expansion::TupleExpansion;
use crate::frame::{Element, Frame};
use crate::mass::MassFunction;
use crate::report::{to, Accumulator, Basis, Flag, FusionResult, Share};
use crate::rule::{self, Params, Rule};

/// What is known about the reliability of the sources.
#[derive(Debug, Clone, PartialEq)]
pub enum Reliability {
    AllReliable,
    /// Some are reliable but we do not know which.
    AtLeastOne,
    /// Exactly one is reliable.
    ExactlyOne,
    Mixed(SourceCombinationExpr),
    /// Reliability factor per source, in source order.
    Discounted(Vec<f64>),
    /// Sources are samples; average them, weighted when weights are given.
    Statistical(Option<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum World {
    Open,
    Closed,
}

/// Where the mass of a product `m1(X1)·m2(X2)` goes.
#[derive(Debug, Clone, PartialEq)]
pub enum Attitude {
    /// Stays on `X1 ∩ X2`.
    Keep,
    /// Back to `X1` and `X2` in proportion to the source masses.
    Split,
    Union,
    TotalIgnorance,
    /// To ∅; needs an open world.
    ToEmpty,
    /// The named hypothesis is right; it takes everything.
    LeftRight { right: Element },
    /// Neither is right; equal shares among the recipients.
    BothWrong { recipients: Vec<Element> },
}

/// An attitude declared for one unordered pair of focal elements.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAttitude {
    pub pair: (Element, Element),
    pub attitude: Attitude,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub reliability: Reliability,
    pub world: World,
    /// Applies to every pair without its own declaration.
    pub attitude: Option<Attitude>,
    pub pairs: Vec<PairAttitude>,
    /// Case identifier, kept for the audit trail.
    pub case: Option<String>,
    /// The model is not known yet; results may change once it is.
    pub provisional: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            reliability: Reliability::AllReliable,
            world: World::Closed,
            attitude: None,
            pairs: Vec::new(),
            case: None,
            provisional: false,
        }
    }
}

/// Case identifiers understood by [`ScenarioConfig::case`].
pub const CASES: [&str; 16] = [
    "1", "1.1.1", "1.1.2", "1.2.1", "1.2.2", "1.2.3", "1.2.4", "1.2.5.1", "1.2.5.2", "1.2.6", "1.2.7", "1.3", "2",
    "3", "1.1", "1.2",
];

impl ScenarioConfig {
    /// Builds the configuration of a numbered case. `right` is required by
    /// 1.2.6 and `recipients` by 1.2.7; discounting for case 3 is set with
    /// [`ScenarioConfig::with_discounts`].
    pub fn case(id: &str, recipients: Vec<Element>, right: Option<Element>) -> Result<Self> {
        let mut config = ScenarioConfig {
            case: Some(id.to_string()),
            ..ScenarioConfig::default()
        };
        let attitude = match id {
            "1" | "1.1" | "1.1.1" | "3" => Some(Attitude::Keep),
            "1.3" => {
                config.provisional = true;
                Some(Attitude::Keep)
            }
            "1.1.2" | "1.2.1" => Some(Attitude::Split),
            "1.2" | "1.2.2" | "1.2.3" | "1.2.4" => Some(Attitude::Union),
            "1.2.5.1" => Some(Attitude::TotalIgnorance),
            "1.2.5.2" => {
                config.world = World::Open;
                Some(Attitude::ToEmpty)
            }
            "1.2.6" => Some(Attitude::LeftRight {
                right: right.ok_or_else(|| FusionError::Scenario("case 1.2.6 needs `right`".into()))?,
            }),
            "1.2.7" => Some(Attitude::BothWrong { recipients }),
            "2" => {
                config.reliability = Reliability::AtLeastOne;
                None
            }
            other => return Err(FusionError::Scenario(format!("unknown case `{other}`"))),
        };
        config.attitude = attitude;
        Ok(config)
    }

    pub fn with_discounts(mut self, reliabilities: Vec<f64>) -> Self {
        self.reliability = Reliability::Discounted(reliabilities);
        self
    }

    pub fn with_pair(mut self, x: Element, y: Element, attitude: Attitude) -> Self {
        self.pairs.push(PairAttitude {
            pair: (x, y),
            attitude,
        });
        self
    }

    fn declared(&self, x1: &Element, x2: &Element) -> Option<&Attitude> {
        let (k1, k2) = (x1.key(), x2.key());
        self.pairs
            .iter()
            .find(|p| {
                let (a, b) = (p.pair.0.key(), p.pair.1.key());
                (a == k1 && b == k2) || (a == k2 && b == k1)
            })
            .map(|p| &p.attitude)
    }

    /// Re-evaluates every element named by the configuration on `frame`.
    fn resolved(&self, frame: &Frame) -> Result<ScenarioConfig> {
        let fix = |a: &Attitude| -> Result<Attitude> {
            Ok(match a {
                Attitude::LeftRight { right } => Attitude::LeftRight {
                    right: frame.reevaluate(right)?,
                },
                Attitude::BothWrong { recipients } => Attitude::BothWrong {
                    recipients: recipients.iter().map(|e| frame.reevaluate(e)).collect::<Result<_>>()?,
                },
                other => other.clone(),
            })
        };
        let mut out = self.clone();
        out.attitude = self.attitude.as_ref().map(fix).transpose()?;
        out.pairs = self
            .pairs
            .iter()
            .map(|p| {
                Ok(PairAttitude {
                    pair: (frame.reevaluate(&p.pair.0)?, frame.reevaluate(&p.pair.1)?),
                    attitude: fix(&p.attitude)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(out)
    }
}

/// Fuses the sources as the scenario prescribes.
///
/// Sources believed reliable (possibly after discounting) are combined
/// conjunctively and each product is then routed. A product is routed when
/// its intersection is empty under the model, when its pair has a declared
/// attitude, or when a case attitude is set and the two operands genuinely
/// overlap (the intersection is smaller than both). Without a declaration
/// an empty intersection goes to the union and an overlap is kept.
pub fn uft_combine(sources: &[MassFunction], config: &ScenarioConfig) -> Result<FusionResult> {
    let first = sources.first().ok_or(FusionError::ArityMismatch { expected: 1, got: 0 })?;
    let frame = first.frame().clone();
    if sources.iter().any(|m| m.frame() != &frame) {
        return Err(FusionError::FrameMismatch);
    }
    let config = config.resolved(&frame)?;
    let mut result = match &config.reliability {
        Reliability::AtLeastOne => return classic::disjunctive_all(sources),
        Reliability::ExactlyOne => return classic::exclusive_disjunctive_all(sources),
        Reliability::Mixed(expr) => return classic::mixed(sources, expr),
        Reliability::Statistical(weights) => {
            let weights = weights.clone().unwrap_or_else(|| vec![1.0; sources.len()]);
            return Ok(FusionResult::plain(classic::mixing(sources, &weights)?));
        }
        Reliability::Discounted(factors) => {
            if factors.len() != sources.len() {
                return Err(FusionError::ArityMismatch {
                    expected: sources.len(),
                    got: factors.len(),
                });
            }
            if factors.iter().all(|r| *r == 0.0) {
                return Ok(FusionResult::plain(MassFunction::vacuous(&frame)));
            }
            let discounted: Vec<MassFunction> = sources
                .iter()
                .zip(factors)
                .map(|(m, r)| m.discount(*r))
                .collect::<Result<_>>()?;
            route_all(&discounted, &config)?
        }
        Reliability::AllReliable => route_all(sources, &config)?,
    };
    if config.provisional && !result.flags.contains(&Flag::Provisional) {
        result.flags.push(Flag::Provisional);
    }
    Ok(result)
}

fn route_all(sources: &[MassFunction], config: &ScenarioConfig) -> Result<FusionResult> {
    if let [only] = sources {
        return Ok(FusionResult::plain(only.clone()));
    }
    crate::pcr::compose_pairwise(sources, |m1, m2| route_pair(m1, m2, config))
}

fn route_pair(m1: &MassFunction, m2: &MassFunction, config: &ScenarioConfig) -> Result<FusionResult> {
    let frame = m1.frame().clone();
    let mut acc = Accumulator::new(&frame);
    for (x1, v1) in m1.focals() {
        for (x2, v2) in m2.focals() {
            let p = v1 * v2;
            let meet = frame.meet(x1, x2);
            let conflict = meet.is_empty();
            let overlap = !conflict && meet.atoms() != x1.atoms() && meet.atoms() != x2.atoms();
            let attitude = match (config.declared(x1, x2), &config.attitude) {
                (Some(a), _) => a.clone(),
                (None, Some(a)) if conflict || overlap => a.clone(),
                (None, None) if conflict => Attitude::Union,
                _ => Attitude::Keep,
            };
            if conflict {
                acc.k12 += p;
            }
            if attitude == Attitude::Keep && !conflict {
                acc.add(&meet, p);
                continue;
            }
            let (shares, note) = attitude_shares(&frame, config, &attitude, x1, x2, &meet, (v1, v2), p)?;
            if shares.iter().any(|s| matches!(&s.to, crate::report::Target::Element(e) if e.is_empty())) {
                acc.flag(Flag::OpenWorld);
            }
            let note = match (&config.case, note) {
                (Some(case), Some(n)) => Some(format!("case {case}: {n}")),
                (Some(case), None) => Some(format!("case {case}")),
                (None, n) => n,
            };
            acc.partial_with_note(vec![x1.clone(), x2.clone()], p, Basis::Attitude, shares, note);
        }
    }
    Ok(acc.finish())
}

/// The union, or total ignorance, or ∅ when the model leaves nothing.
fn union_or_wider(frame: &Frame, x1: &Element, x2: &Element) -> Element {
    let union = frame.join(x1, x2);
    if !union.is_empty() {
        return union;
    }
    let ignorance = frame.total_ignorance();
    if !ignorance.is_empty() {
        return ignorance;
    }
    frame.empty_element()
}

#[allow(clippy::too_many_arguments)]
fn attitude_shares(
    frame: &Frame,
    config: &ScenarioConfig,
    attitude: &Attitude,
    x1: &Element,
    x2: &Element,
    meet: &Element,
    (w1, w2): (f64, f64),
    p: f64,
) -> Result<(Vec<Share>, Option<String>)> {
    Ok(match attitude {
        Attitude::Keep => (
            vec![to(&union_or_wider(frame, x1, x2), p)],
            Some("intersection is empty under the model; sent to the union".into()),
        ),
        Attitude::Split => match (x1.is_empty(), x2.is_empty()) {
            (false, false) => {
                let (a, b) = if w1 + w2 > 0.0 { (w1, w2) } else { (1.0, 1.0) };
                (vec![to(x1, p * a / (a + b)), to(x2, p * b / (a + b))], None)
            }
            (false, true) => (vec![to(x1, p)], None),
            (true, false) => (vec![to(x2, p)], None),
            (true, true) => {
                let target = dsmh_target(frame, &[x1.clone(), x2.clone()], meet)
                    .map(|(e, _)| e)
                    .unwrap_or_else(|| frame.empty_element());
                (vec![to(&target, p)], Some("both operands empty".into()))
            }
        },
        Attitude::Union => (vec![to(&union_or_wider(frame, x1, x2), p)], None),
        Attitude::TotalIgnorance => (vec![to(&frame.total_ignorance(), p)], None),
        Attitude::ToEmpty => {
            if config.world == World::Closed {
                return Err(FusionError::Scenario("mass on ∅ needs an open world".into()));
            }
            (vec![to(&frame.empty_element(), p)], None)
        }
        Attitude::LeftRight { right } => {
            let target = frame.meet(right, &frame.join(x1, x2));
            if target.is_empty() {
                (
                    vec![to(&union_or_wider(frame, x1, x2), p)],
                    Some("right hypothesis outside the pair; sent to the union".into()),
                )
            } else {
                (vec![to(&target, p)], None)
            }
        }
        Attitude::BothWrong { recipients } => {
            let live: Vec<&Element> = recipients.iter().filter(|e| !e.is_empty()).collect();
            if live.is_empty() {
                if config.world == World::Closed {
                    return Err(FusionError::Scenario("both-wrong has no recipients in a closed world".into()));
                }
                (vec![to(&frame.empty_element(), p)], None)
            } else {
                let n = live.len() as f64;
                (live.into_iter().map(|e| to(e, p / n)).collect(), None)
            }
        }
    })
}

/// What a model update is applied to.
#[derive(Debug, Clone)]
pub enum DynamicState {
    /// The original sources, fused again under the new model.
    Sources(Vec<MassFunction>),
    /// An already fused bba; newly empty focals are moved by the conflict
    /// clause of the transfer rule.
    Combined(MassFunction),
}

/// Declares `constraint` empty and re-fuses with `rule`.
///
/// A fused bba is re-evaluated and combined with the vacuous bba, which
/// leaves surviving focals alone and sends the mass of newly empty ones
/// through the rule's conflict clause. Rules with no such clause keep the
/// mass on ∅ and flag it.
pub fn dynamic_update(
    state: &DynamicState,
    constraint: &Element,
    rule: Rule,
    params: &Params,
) -> Result<FusionResult> {
    match state {
        DynamicState::Sources(sources) => {
            let first = sources.first().ok_or(FusionError::ArityMismatch { expected: 1, got: 0 })?;
            let frame = first.frame().constrain(constraint)?;
            let sources: Vec<MassFunction> = sources.iter().map(|m| m.under(&frame)).collect::<Result<_>>()?;
            rule::apply(rule, &sources, params)
        }
        DynamicState::Combined(m) => {
            if !rule.is_conjunctive_based() {
                return Err(FusionError::NotConjunctiveBased(rule.name().to_string()));
            }
            let frame = m.frame().constrain(constraint)?;
            let m = m.under(&frame)?;
            rule::apply(rule, &[m, MassFunction::vacuous(&frame)], params)
        }
    }
}

/// Running state for combining sources one at a time with a
/// conjunctive-based rule.
///
/// Rules defined on the merged product keep the product itself; the binary
/// PCR variants and minC keep their previous result, which is their s-ary
/// definition here.
#[derive(Debug, Clone)]
pub struct QuasiAssociativeState {
    rule: Rule,
    params: Params,
    expansion: Option<TupleExpansion>,
    previous: Option<MassFunction>,
    k12: f64,
}

impl QuasiAssociativeState {
    pub fn new(rule: Rule, params: Params) -> Result<Self> {
        if !rule.is_conjunctive_based() {
            return Err(FusionError::NotConjunctiveBased(rule.name().to_string()));
        }
        Ok(QuasiAssociativeState {
            rule,
            params,
            expansion: None,
            previous: None,
            k12: 0.0,
        })
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// The stored conjunctive product, with conflict left on ∅.
    pub fn stored_conjunctive(&self) -> Option<MassFunction> {
        self.expansion.as_ref().map(TupleExpansion::conjunctive)
    }

    pub fn sources(&self) -> usize {
        self.expansion.as_ref().map_or(0, TupleExpansion::sources)
    }

    /// Adds a source and returns the updated state with the current result.
    pub fn combine(mut self, new: &MassFunction) -> Result<(Self, FusionResult)> {
        match self.expansion.as_mut() {
            Some(exp) => exp.push(new)?,
            None => self.expansion = Some(TupleExpansion::new(std::slice::from_ref(new))?),
        }
        let exp = self.expansion.as_ref().expect("set above");
        let result = if self.rule.is_expansion_based() {
            rule::apply_expanded(self.rule, exp, &self.params)?
        } else {
            let mut result = match &self.previous {
                None => FusionResult::plain(new.clone()),
                Some(prev) => rule::apply(self.rule, &[prev.clone(), new.clone()], &self.params)?,
            };
            self.k12 += result.conflict.k12;
            result.conflict.k12 = self.k12;
            if exp.sources() > 2 && !result.flags.contains(&Flag::QuasiAssociative) {
                result.flags.push(Flag::QuasiAssociative);
            }
            result
        };
        self.previous = Some(result.combined.clone());
        Ok((self, result))
    }
}

/// Functional form of [`QuasiAssociativeState::combine`].
pub fn quasi_associative_combine(
    state: QuasiAssociativeState,
    new: &MassFunction,
    rule: Rule,
) -> Result<(QuasiAssociativeState, FusionResult)> {
    if rule != state.rule {
        return Err(FusionError::Scenario(format!(
            "state holds `{}`, asked for `{rule}`",
            state.rule
        )));
    }
    state.combine(new)
}
