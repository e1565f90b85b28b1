//! Proportional conflict redistribution: WAO, PCR1 to PCR5 and minC.
//!
//! WAO, PCR1 and PCR2 redistribute the total conflict and work for any
//! number of sources. PCR3, PCR4, PCR5 and minC redistribute each partial
//! conflict separately and are defined for two sources; more sources are
//! combined pairwise from the left.

use crate::classic::{conjunctive_pass, dsmh_target};
use crate::error::{FusionError, Result};
use crate::expansion::TupleExpansion;
use crate::frame::{Element, Expr, Frame};
use crate::mass::MassFunction;
use crate::report::{lost, to, Accumulator, Basis, Flag, FusionResult, Share};

fn pair(m1: &MassFunction, m2: &MassFunction) -> Result<TupleExpansion> {
    TupleExpansion::new(&[m1.clone(), m2.clone()])
}

/// Fallback when no non-empty recipient exists: the disjunctive form of
/// the given sets, then total ignorance, then ∅.
fn degenerate_shares(acc: &mut Accumulator, sets: &[Element], mass: f64) -> (Vec<Share>, Basis) {
    let frame = acc.frame().clone();
    let empty = frame.empty_element();
    let intersection = sets
        .iter()
        .fold(frame.total_ignorance(), |a, e| frame.meet(&a, e));
    match dsmh_target(&frame, sets, &intersection) {
        Some((target, basis)) => (vec![to(&target, mass)], basis),
        None => {
            acc.flag(Flag::OpenWorld);
            (vec![to(&empty, mass)], Basis::DisjunctiveForm)
        }
    }
}

pub fn wao(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    wao_expanded(&pair(m1, m2)?)
}

pub fn wao_all(sources: &[MassFunction]) -> Result<FusionResult> {
    wao_expanded(&TupleExpansion::new(sources)?)
}

/// Weighted average operator. Weights are the column averages of every
/// focal that is a set at all; shares addressed to sets that are empty
/// under the model are lost, as is the weight of explicit ∅ focals.
pub fn wao_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    let s = exp.sources() as f64;
    let weights: Vec<(Element, f64)> = exp
        .columns()
        .filter(|(e, _)| !e.free_atoms().is_empty())
        .map(|(e, c)| (e.clone(), c / s))
        .collect();
    let spread: f64 = weights.iter().map(|(_, w)| w).sum();
    Ok(conjunctive_pass(exp, |cell, acc| {
        let mut shares: Vec<Share> = weights
            .iter()
            .map(|(e, w)| {
                if e.is_empty() {
                    lost(cell.mass * w)
                } else {
                    to(e, cell.mass * w)
                }
            })
            .collect();
        let rest = cell.mass * (1.0 - spread);
        if rest.abs() > 1e-15 {
            shares.push(lost(rest));
        }
        acc.partial(cell.operands.clone(), cell.mass, Basis::MassAverages, shares);
        Ok(())
    })?
    .finish())
}

pub fn pcr1(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    pcr1_expanded(&pair(m1, m2)?)
}

pub fn pcr1_all(sources: &[MassFunction]) -> Result<FusionResult> {
    pcr1_expanded(&TupleExpansion::new(sources)?)
}

/// PCR1: the total conflict goes to every non-empty set in proportion to
/// its column sum.
pub fn pcr1_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    let recipients: Vec<(Element, f64)> = exp
        .columns()
        .filter(|(e, c)| !e.is_empty() && *c > 0.0)
        .map(|(e, c)| (e.clone(), c))
        .collect();
    let d12: f64 = recipients.iter().map(|(_, c)| c).sum();
    let all_sets: Vec<Element> = exp
        .columns()
        .filter(|(e, _)| !e.free_atoms().is_empty())
        .map(|(e, _)| e.clone())
        .collect();
    Ok(conjunctive_pass(exp, |cell, acc| {
        if d12 > 0.0 {
            let shares = recipients
                .iter()
                .map(|(e, c)| to(e, cell.mass * c / d12))
                .collect();
            acc.partial(cell.operands.clone(), cell.mass, Basis::ColumnSums, shares);
        } else {
            let (shares, basis) = degenerate_shares(acc, &all_sets, cell.mass);
            acc.partial(cell.operands.clone(), cell.mass, basis, shares);
        }
        Ok(())
    })?
    .finish())
}

pub fn pcr2(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    pcr2_expanded(&pair(m1, m2)?)
}

pub fn pcr2_all(sources: &[MassFunction]) -> Result<FusionResult> {
    pcr2_expanded(&TupleExpansion::new(sources)?)
}

/// PCR2: the total conflict goes only to the non-empty sets involved in
/// some conflict, in proportion to their column sums.
pub fn pcr2_expanded(exp: &TupleExpansion) -> Result<FusionResult> {
    let mut involved: Vec<Element> = Vec::new();
    let mut involved_any: Vec<Element> = Vec::new();
    for cell in exp.cells().filter(|c| c.is_conflict() && c.mass > 0.0) {
        for op in cell.operands {
            if !op.is_empty() && !involved.iter().any(|e| e.key() == op.key()) {
                involved.push(op.clone());
            }
            if !op.free_atoms().is_empty() && !involved_any.iter().any(|e| e.key() == op.key()) {
                involved_any.push(op);
            }
        }
    }
    let recipients: Vec<(Element, f64)> = involved
        .into_iter()
        .map(|e| {
            let c = exp.column(&e.key());
            (e, c)
        })
        .filter(|(_, c)| *c > 0.0)
        .collect();
    let e12: f64 = recipients.iter().map(|(_, c)| c).sum();
    Ok(conjunctive_pass(exp, |cell, acc| {
        if e12 > 0.0 {
            let shares = recipients
                .iter()
                .map(|(e, c)| to(e, cell.mass * c / e12))
                .collect();
            acc.partial(cell.operands.clone(), cell.mass, Basis::ColumnSums, shares);
        } else {
            let (shares, basis) = degenerate_shares(acc, &involved_any, cell.mass);
            acc.partial(cell.operands.clone(), cell.mass, basis, shares);
        }
        Ok(())
    })?
    .finish())
}

/// Runs the binary conjunctive product over ordered focal pairs, handing
/// each conflicting pair to `route`.
fn binary_pass(
    m1: &MassFunction,
    m2: &MassFunction,
    mut route: impl FnMut(&Element, &Element, f64, &mut Accumulator),
) -> Result<Accumulator> {
    if m1.frame() != m2.frame() {
        return Err(FusionError::FrameMismatch);
    }
    let frame = m1.frame();
    let mut acc = Accumulator::new(frame);
    for (x1, v1) in m1.focals() {
        for (x2, v2) in m2.focals() {
            let p = v1 * v2;
            let meet = frame.meet(x1, x2);
            if meet.is_empty() {
                acc.k12 += p;
                route(x1, x2, p, &mut acc);
            } else {
                acc.add(&meet, p);
            }
        }
    }
    Ok(acc)
}

/// Splits `p` between two non-empty operands in proportion to `w1`, `w2`;
/// when one operand is empty the other takes everything, and when both are
/// the degenerate route applies.
fn split_pair(
    acc: &mut Accumulator,
    x1: &Element,
    x2: &Element,
    p: f64,
    weights: (f64, f64),
    basis: Basis,
) {
    let operands = vec![x1.clone(), x2.clone()];
    match (x1.is_empty(), x2.is_empty()) {
        (false, false) => {
            let (w1, w2) = weights;
            let shares = vec![to(x1, p * w1 / (w1 + w2)), to(x2, p * w2 / (w1 + w2))];
            acc.partial(operands, p, basis, shares);
        }
        (false, true) => acc.partial(operands, p, basis, vec![to(x1, p)]),
        (true, false) => acc.partial(operands, p, basis, vec![to(x2, p)]),
        (true, true) => {
            let (shares, basis) = degenerate_shares(acc, &operands, p);
            acc.partial(operands, p, basis, shares);
        }
    }
}

/// PCR3: each partial conflict goes to its two operands in proportion to
/// their column sums.
pub fn pcr3(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    let column = |x: &Element| m1.mass_by_key(&x.key()) + m2.mass_by_key(&x.key());
    Ok(binary_pass(m1, m2, |x1, x2, p, acc| {
        split_pair(acc, x1, x2, p, (column(x1), column(x2)), Basis::ColumnSums);
    })?
    .finish())
}

/// PCR4: each partial conflict goes to its two operands in proportion to
/// their conjunctive masses, falling back to PCR3 when both are zero.
pub fn pcr4(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    let conj = pair(m1, m2)?.conjunctive();
    let column = |x: &Element| m1.mass_by_key(&x.key()) + m2.mass_by_key(&x.key());
    Ok(binary_pass(m1, m2, |x1, x2, p, acc| {
        let (w1, w2) = (conj.mass_of_atoms(x1.atoms()), conj.mass_of_atoms(x2.atoms()));
        if x1.is_empty() || x2.is_empty() || w1 + w2 > 0.0 {
            split_pair(acc, x1, x2, p, (w1, w2), Basis::ConjunctiveMasses);
        } else {
            split_pair(acc, x1, x2, p, (column(x1), column(x2)), Basis::ColumnSums);
            if let Some(last) = acc.partials.last_mut() {
                last.note = Some("conjunctive masses are zero; split by column sums".into());
            }
        }
    })?
    .finish())
}

/// PCR5: each partial conflict `m1(X1)·m2(X2)` goes back to `X1` and `X2`
/// in proportion to the masses the sources gave them.
pub fn pcr5(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    Ok(binary_pass(m1, m2, |x1, x2, p, acc| {
        let (a, b) = (m1.mass_by_key(&x1.key()), m2.mass_by_key(&x2.key()));
        split_pair(acc, x1, x2, p, (a, b), Basis::SourceMasses);
    })?
    .finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinCVersion {
    /// Recipients `X`, `Y` and `X ∪ Y`.
    A,
    /// Recipients are all unions of the hypotheses involved.
    B,
}

/// Label mask of an expression that is a plain intersection of labels.
fn pure_intersection(expr: &Expr) -> Option<u32> {
    match expr {
        Expr::Label(i) => Some(1 << i),
        Expr::And(a, b) => Some(pure_intersection(a)? | pure_intersection(b)?),
        _ => None,
    }
}

fn label_unions(frame: &Frame, labels: u32) -> Vec<Element> {
    (1..=labels)
        .filter(|s| s & labels == *s)
        .map(|s| frame.union_of_labels(s))
        .collect()
}

fn minc_recipients(frame: &Frame, x1: &Element, x2: &Element, version: MinCVersion) -> Vec<Element> {
    let meet = frame.meet(x1, x2);
    let candidates = match pure_intersection(meet.expr()) {
        Some(labels) if labels.count_ones() == 2 => {
            let (i, j) = (labels.trailing_zeros(), 31 - labels.leading_zeros());
            vec![
                frame.union_of_labels(1 << i),
                frame.union_of_labels(1 << j),
                frame.union_of_labels(labels),
            ]
        }
        Some(labels) if labels.count_ones() >= 3 => label_unions(frame, labels),
        _ => match version {
            MinCVersion::A => vec![x1.clone(), x2.clone(), frame.join(x1, x2)],
            MinCVersion::B => {
                let labels = frame.reduced_disjunctive_form(x1).free_atoms().label_support()
                    | frame.reduced_disjunctive_form(x2).free_atoms().label_support();
                label_unions(frame, labels)
            }
        },
    };
    let mut out: Vec<Element> = Vec::new();
    for e in candidates {
        if !e.is_empty() && !out.iter().any(|o| o.atoms() == e.atoms()) {
            out.push(e);
        }
    }
    out
}

/// minC: each partial conflict goes to the recipients of its conflict type
/// in proportion to their conjunctive masses, equally if those are all zero.
pub fn minc(m1: &MassFunction, m2: &MassFunction, version: MinCVersion) -> Result<FusionResult> {
    let conj = pair(m1, m2)?.conjunctive();
    let frame = m1.frame().clone();
    Ok(binary_pass(m1, m2, |x1, x2, p, acc| {
        let recipients = minc_recipients(&frame, x1, x2, version);
        let operands = vec![x1.clone(), x2.clone()];
        if recipients.is_empty() {
            let (shares, basis) = degenerate_shares(acc, &operands, p);
            acc.partial(operands, p, basis, shares);
            return;
        }
        let weights: Vec<f64> = recipients.iter().map(|r| conj.mass_of_atoms(r.atoms())).collect();
        let total: f64 = weights.iter().sum();
        let (shares, basis) = if total > 0.0 {
            let shares = recipients
                .iter()
                .zip(&weights)
                .map(|(r, w)| to(r, p * w / total))
                .collect();
            (shares, Basis::ConjunctiveMasses)
        } else {
            let n = recipients.len() as f64;
            (recipients.iter().map(|r| to(r, p / n)).collect(), Basis::Uniform)
        };
        acc.partial(operands, p, basis, shares);
    })?
    .finish())
}

/// Applies a binary rule left to right over several sources.
pub fn compose_pairwise(
    sources: &[MassFunction],
    rule: impl Fn(&MassFunction, &MassFunction) -> Result<FusionResult>,
) -> Result<FusionResult> {
    let (first, rest) = sources
        .split_first()
        .ok_or(FusionError::ArityMismatch { expected: 2, got: 0 })?;
    let Some((second, rest)) = rest.split_first() else {
        return Err(FusionError::ArityMismatch { expected: 2, got: 1 });
    };
    let mut result = rule(first, second)?;
    for m in rest {
        let next = rule(&result.combined, m)?;
        result.conflict.k12 += next.conflict.k12;
        result.conflict.partials.extend(next.conflict.partials);
        for flag in next.flags {
            if !result.flags.contains(&flag) {
                result.flags.push(flag);
            }
        }
        result.combined = next.combined;
    }
    if !rest.is_empty() && !result.flags.contains(&Flag::QuasiAssociative) {
        result.flags.push(Flag::QuasiAssociative);
    }
    Ok(result)
}
