//! Conjunctive and disjunctive families, Dempster, Smets, Yager,
//! Dubois-Prade, the DSm classic and hybrid rules, the weighted operator,
//! Inagaki's parameterized rule, and averaging.
//!
//! Every rule has an s-ary entry point (`*_all`) over a product expansion;
//! the binary functions are thin wrappers.

use std::sync::Arc;

use crate::error::{FusionError, Result};
use crate::expansion::{Cell, TupleExpansion};
use crate::frame::{parse_expr, Element, Expr, Frame};
use crate::mass::MassFunction;
use crate::report::{lost, renormalized, to, Accumulator, Basis, Flag, FusionResult};

/// Below this a normalization constant counts as zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Runs the conjunctive pass: non-empty intersections keep their mass and
/// each conflicting cell is handed to `route`.
pub(crate) fn conjunctive_pass(
    exp: &TupleExpansion,
    mut route: impl FnMut(&Cell, &mut Accumulator) -> Result<()>,
) -> Result<Accumulator> {
    let mut acc = Accumulator::new(exp.frame());
    for cell in exp.cells() {
        if cell.is_conflict() {
            acc.k12 += cell.mass;
            route(&cell, &mut acc)?;
        } else {
            acc.add(&cell.intersection, cell.mass);
        }
    }
    Ok(acc)
}

fn pair(m1: &MassFunction, m2: &MassFunction) -> Result<TupleExpansion> {
    TupleExpansion::new(&[m1.clone(), m2.clone()])
}

fn keep_on_empty(cell: &Cell, acc: &mut Accumulator) -> Result<()> {
    acc.partial(
        cell.operands.clone(),
        cell.mass,
        Basis::Retained,
        vec![to(&cell.intersection, cell.mass)],
    );
    acc.flag(Flag::EmptyMassKept);
    Ok(())
}

pub fn conjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    conjunctive_expanded(&pair(m1, m2)?)
}

pub fn conjunctive_all(sources: &[MassFunction]) -> Result<FusionResult> {
    conjunctive_expanded(&TupleExpansion::new(sources)?)
}

pub fn conjunctive_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    Ok(conjunctive_pass(exp, keep_on_empty)?.finish())
}

/// DSm classic rule: the conjunctive rule on the hyper-power set.
pub fn dsm_classic(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    conjunctive(m1, m2)
}

/// Smets' rule: conflict stays on ∅ (open world).
pub fn smets(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    smets_expanded(&pair(m1, m2)?)
}

pub fn smets_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    let mut acc = conjunctive_pass(exp, keep_on_empty)?;
    if acc.k12 > 0.0 {
        acc.flag(Flag::OpenWorld);
    }
    Ok(acc.finish())
}

pub fn disjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    disjunctive_expanded(&pair(m1, m2)?)
}

pub fn disjunctive_all(sources: &[MassFunction]) -> Result<FusionResult> {
    disjunctive_expanded(&TupleExpansion::new(sources)?)
}

pub fn disjunctive_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    let mut acc = Accumulator::new(exp.frame());
    for cell in exp.cells() {
        if cell.union.is_empty() {
            acc.k12 += cell.mass;
            keep_on_empty(&Cell { intersection: cell.union.clone(), ..cell.clone() }, &mut acc)?;
        } else {
            acc.add(&cell.union, cell.mass);
        }
    }
    Ok(acc.finish())
}

pub fn dempster(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    dempster_expanded(&pair(m1, m2)?)
}

pub fn dempster_all(sources: &[MassFunction]) -> Result<FusionResult> {
    dempster_expanded(&TupleExpansion::new(sources)?)
}

/// Conjunctive rule renormalized over the non-empty mass; equal to dividing
/// by `1 - k12` for normal inputs.
pub fn dempster_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    let mut acc = conjunctive_pass(exp, |cell, acc| {
        acc.partial(
            cell.operands.clone(),
            cell.mass,
            Basis::Normalization,
            vec![renormalized(cell.mass)],
        );
        Ok(())
    })?;
    let kept = acc.nonempty_total();
    if kept <= ZERO_TOLERANCE {
        return Err(FusionError::TotalConflict { k12: acc.k12 });
    }
    acc.scale(1.0 / kept);
    Ok(acc.finish())
}

pub fn yager(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    yager_expanded(&pair(m1, m2)?)
}

pub fn yager_all(sources: &[MassFunction]) -> Result<FusionResult> {
    yager_expanded(&TupleExpansion::new(sources)?)
}

pub fn yager_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    let ignorance = exp.frame().total_ignorance();
    if ignorance.is_empty() {
        return Err(FusionError::EmptyIgnorance);
    }
    Ok(conjunctive_pass(exp, |cell, acc| {
        acc.partial(
            cell.operands.clone(),
            cell.mass,
            Basis::TotalIgnorance,
            vec![to(&ignorance, cell.mass)],
        );
        Ok(())
    })?
    .finish())
}

pub fn dubois_prade(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    dubois_prade_expanded(&pair(m1, m2)?)
}

pub fn dubois_prade_all(sources: &[MassFunction]) -> Result<FusionResult> {
    dubois_prade_expanded(&TupleExpansion::new(sources)?)
}

/// Conflicts go to the union of the operands; when that union is empty too
/// the mass is lost and the result is incomplete.
pub fn dubois_prade_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    Ok(conjunctive_pass(exp, |cell, acc| {
        let share = if cell.union.is_empty() {
            lost(cell.mass)
        } else {
            to(&cell.union, cell.mass)
        };
        acc.partial(cell.operands.clone(), cell.mass, Basis::Union, vec![share]);
        Ok(())
    })?
    .finish())
}

/// Where the hybrid rule sends a conflicting product. `None` means no
/// non-empty set is left, so the mass goes to ∅.
pub(crate) fn dsmh_target(frame: &Frame, operands: &[Element], intersection: &Element) -> Option<(Element, Basis)> {
    let disjunctive = if operands.iter().all(Element::is_empty) {
        operands
            .iter()
            .map(|x| frame.reduced_disjunctive_form(x))
            .reduce(|a, b| frame.join(&a, &b))
            .unwrap_or_else(|| frame.empty_element())
    } else {
        frame.reduced_disjunctive_form(intersection)
    };
    if !disjunctive.is_empty() {
        return Some((disjunctive, Basis::DisjunctiveForm));
    }
    let ignorance = frame.total_ignorance();
    (!ignorance.is_empty()).then_some((ignorance, Basis::TotalIgnorance))
}

pub(crate) fn route_dsmh(acc: &mut Accumulator, operands: Vec<Element>, intersection: &Element, mass: f64) {
    match dsmh_target(acc.frame(), &operands, intersection) {
        Some((target, basis)) => acc.partial(operands, mass, basis, vec![to(&target, mass)]),
        None => {
            let empty = acc.frame().empty_element();
            acc.partial(operands, mass, Basis::DisjunctiveForm, vec![to(&empty, mass)]);
            acc.flag(Flag::OpenWorld);
        }
    }
}

pub fn dsm_hybrid(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    dsm_hybrid_expanded(&pair(m1, m2)?)
}

pub fn dsm_hybrid_all(sources: &[MassFunction]) -> Result<FusionResult> {
    dsm_hybrid_expanded(&TupleExpansion::new(sources)?)
}

pub fn dsm_hybrid_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    Ok(conjunctive_pass(exp, |cell, acc| {
        route_dsmh(acc, cell.operands.clone(), &cell.intersection, cell.mass);
        Ok(())
    })?
    .finish())
}

/// Weighted operator: the conflict is spread by fixed weights, which may
/// include ∅.
pub fn weighted_operator(
    m1: &MassFunction,
    m2: &MassFunction,
    weights: &[(Element, f64)],
) -> Result<FusionResult> {
    weighted_operator_expanded(&pair(m1, m2)?, weights)
}

pub fn weighted_operator_expanded(exp: &TupleExpansion, weights: &[(Element, f64)]) -> Result<FusionResult> {
    let sum: f64 = weights.iter().map(|(_, w)| w).sum();
    if weights.iter().any(|(_, w)| !(0.0..=1.0).contains(w)) || (sum - 1.0).abs() > 1e-9 {
        return Err(FusionError::InvalidWeights { sum });
    }
    let weights: Vec<(Element, f64)> = weights
        .iter()
        .map(|(e, w)| Ok((exp.frame().reevaluate(e)?, *w)))
        .collect::<Result<_>>()?;
    Ok(conjunctive_pass(exp, |cell, acc| {
        let shares = weights.iter().map(|(e, w)| to(e, cell.mass * w)).collect();
        acc.partial(cell.operands.clone(), cell.mass, Basis::Weights, shares);
        Ok(())
    })?
    .finish())
}

pub fn inagaki(m1: &MassFunction, m2: &MassFunction, p: f64) -> Result<FusionResult> {
    inagaki_expanded(&pair(m1, m2)?, p)
}

/// Largest admissible `p` for the given conflict and conjunctive mass on I.
pub fn inagaki_max_p(k12: f64, ignorance_mass: f64) -> f64 {
    let denominator = 1.0 - k12 - ignorance_mass;
    if denominator > ZERO_TOLERANCE {
        1.0 / denominator
    } else {
        f64::INFINITY
    }
}

/// Inagaki's rule: non-conflicting masses are scaled by `1 + p·k12` and the
/// remainder goes to total ignorance.
pub fn inagaki_expanded(exp: &TupleExpansion, p: f64) -> Result<FusionResult> {
    let ignorance = exp.frame().total_ignorance();
    if ignorance.is_empty() {
        return Err(FusionError::EmptyIgnorance);
    }
    let conj = exp.conjunctive();
    let k12 = conj.empty_mass();
    let m_ignorance = conj.mass(&ignorance);
    let max = inagaki_max_p(k12, m_ignorance);
    if !p.is_finite() || p < 0.0 || p > max * (1.0 + 1e-12) {
        return Err(FusionError::ParameterOutOfRange {
            name: "p",
            value: p,
            min: 0.0,
            max,
        });
    }
    let recipients: Vec<(Element, f64)> = conj
        .focals()
        .filter(|(e, _)| !e.is_empty() && e.atoms() != ignorance.atoms())
        .map(|(e, m)| (e.clone(), m))
        .collect();
    let to_ignorance = p * m_ignorance + 1.0 + p * k12 - p;
    Ok(conjunctive_pass(exp, |cell, acc| {
        let mut shares: Vec<_> = recipients
            .iter()
            .map(|(e, m)| to(e, cell.mass * p * m))
            .collect();
        shares.push(to(&ignorance, cell.mass * to_ignorance));
        acc.partial(cell.operands.clone(), cell.mass, Basis::Parameterized, shares);
        Ok(())
    })?
    .finish())
}

/// Murphy's average of two sources.
pub fn murphy(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    mixing(&[m1.clone(), m2.clone()], &[1.0, 1.0])
}

/// Weighted average `Σ w_i m_i / Σ w_i`.
pub fn mixing(sources: &[MassFunction], weights: &[f64]) -> Result<MassFunction> {
    if sources.len() != weights.len() {
        return Err(FusionError::ArityMismatch {
            expected: sources.len(),
            got: weights.len(),
        });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || sum <= 0.0 {
        return Err(FusionError::InvalidWeights { sum });
    }
    let frame = sources[0].frame();
    let mut out = MassFunction::new(frame);
    for (m, w) in sources.iter().zip(weights) {
        if m.frame() != frame {
            return Err(FusionError::FrameMismatch);
        }
        for (e, v) in m.focals() {
            out.add(e.clone(), v * w / sum);
        }
    }
    Ok(out)
}

/// Every ordered tuple of focals, one per source, with its product mass.
pub(crate) fn ordered_tuples(sources: &[MassFunction]) -> Result<Vec<(Vec<Element>, f64)>> {
    let frame = sources
        .first()
        .ok_or(FusionError::ArityMismatch { expected: 1, got: 0 })?
        .frame();
    let mut tuples = vec![(Vec::new(), 1.0)];
    for m in sources {
        if m.frame() != frame {
            return Err(FusionError::FrameMismatch);
        }
        tuples = tuples
            .into_iter()
            .flat_map(|(ops, mass): (Vec<Element>, f64)| {
                m.focals().map(move |(e, v)| {
                    let mut ops = ops.clone();
                    ops.push(e.clone());
                    (ops, mass * v)
                })
            })
            .collect();
    }
    Ok(tuples)
}

pub fn exclusive_disjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    exclusive_disjunctive_all(&[m1.clone(), m2.clone()])
}

/// Exactly one source tells the truth: products land on the symmetric
/// difference.
pub fn exclusive_disjunctive_all(sources: &[MassFunction]) -> Result<FusionResult> {
    let frame = sources
        .first()
        .ok_or(FusionError::ArityMismatch { expected: 1, got: 0 })?
        .frame()
        .clone();
    let mut acc = Accumulator::new(&frame);
    for (ops, mass) in ordered_tuples(sources)? {
        let landing = ops[1..]
            .iter()
            .fold(frame.canonical_form(&ops[0])?, |acc, e| frame.symmetric_difference(&acc, e));
        land(&mut acc, ops, mass, &landing, Flag::XorDegenerate);
    }
    Ok(acc.finish())
}

fn land(acc: &mut Accumulator, ops: Vec<Element>, mass: f64, landing: &Element, flag: Flag) {
    if landing.is_empty() {
        acc.k12 += mass;
        acc.partial(ops, mass, Basis::Retained, vec![to(landing, mass)]);
        acc.flag(flag);
    } else {
        acc.add(landing, mass);
    }
}

/// A combination of sources by AND, OR and XOR, e.g. `(m1&m2)|m3`.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceCombinationExpr {
    expr: Expr,
    arity: usize,
}

impl SourceCombinationExpr {
    /// Parses with the set grammar, resolving labels against source names.
    /// Every source must appear exactly once and complements are refused.
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Self> {
        let expr = parse_expr(text, |name| names.iter().position(|n| n.as_ref() == name))?;
        let mut seen = vec![0usize; names.len()];
        fn walk(e: &Expr, seen: &mut [usize]) -> Result<()> {
            match e {
                Expr::Label(i) => {
                    seen[*i] += 1;
                    Ok(())
                }
                Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => {
                    walk(a, seen)?;
                    walk(b, seen)
                }
                Expr::Not(_) | Expr::Empty => Err(FusionError::Syntax {
                    offset: 0,
                    message: "source combinations only use `&`, `|` and `^`".into(),
                }),
            }
        }
        walk(&expr, &mut seen)?;
        let used = seen.iter().filter(|&&c| c > 0).count();
        if seen.iter().any(|&c| c > 1) || used != names.len() {
            return Err(FusionError::ArityMismatch {
                expected: names.len(),
                got: seen.iter().sum(),
            });
        }
        Ok(SourceCombinationExpr {
            expr,
            arity: names.len(),
        })
    }

    /// All sources joined by one connective.
    pub fn chain(arity: usize, op: fn(Arc<Expr>, Arc<Expr>) -> Expr) -> Self {
        let expr = (0..arity)
            .map(Expr::Label)
            .reduce(|a, b| op(Arc::new(a), Arc::new(b)))
            .unwrap_or(Expr::Empty);
        SourceCombinationExpr { expr, arity }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, frame: &Frame, e: &Expr, ops: &[Element]) -> Element {
        match e {
            Expr::Label(i) => frame.meet(&ops[*i], &ops[*i]),
            Expr::And(a, b) => frame.meet(&self.eval(frame, a, ops), &self.eval(frame, b, ops)),
            Expr::Or(a, b) => frame.join(&self.eval(frame, a, ops), &self.eval(frame, b, ops)),
            Expr::Xor(a, b) => {
                frame.symmetric_difference(&self.eval(frame, a, ops), &self.eval(frame, b, ops))
            }
            Expr::Not(_) | Expr::Empty => unreachable!("rejected at construction"),
        }
    }
}

/// Mixed conjunctive-disjunctive rule.
pub fn mixed(sources: &[MassFunction], expr: &SourceCombinationExpr) -> Result<FusionResult> {
    if sources.len() != expr.arity {
        return Err(FusionError::ArityMismatch {
            expected: expr.arity,
            got: sources.len(),
        });
    }
    let frame = sources[0].frame().clone();
    let mut acc = Accumulator::new(&frame);
    for (ops, mass) in ordered_tuples(sources)? {
        let landing = expr.eval(&frame, &expr.expr, &ops);
        land(&mut acc, ops, mass, &landing, Flag::EmptyMassKept);
    }
    Ok(acc.finish())
}
