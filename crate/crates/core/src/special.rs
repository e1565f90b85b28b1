//! Zhang's center rule, convolutive x-averaging, the consensus operator,
//! T-norm and T-conorm fusion, the cautious rule and the degree-weighted
//! variants of the classic rules.

use std::collections::BTreeMap;

use crate::classic::{dsmh_target, ZERO_TOLERANCE};
use crate::error::{FusionError, Result};
use crate::frame::{Element, FocalKey, Frame};
use crate::mass::{MassFunction, Opinion};
use crate::report::{renormalized, to, Accumulator, Basis, Flag, FusionResult};

fn same_frame(m1: &MassFunction, m2: &MassFunction) -> Result<Frame> {
    if m1.frame() != m2.frame() {
        return Err(FusionError::FrameMismatch);
    }
    Ok(m1.frame().clone())
}

/// How Zhang's rule measures the overlap of two focals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZhangDegree {
    /// `|X ∩ Y| / (|X|·|Y|)`.
    Product,
    /// `|X ∩ Y| / |X ∪ Y|`.
    Union,
}

/// Zhang's center combination rule: conjunctive products weighted by the
/// overlap degree, then renormalized.
pub fn zhang(m1: &MassFunction, m2: &MassFunction, degree: ZhangDegree) -> Result<FusionResult> {
    let frame = same_frame(m1, m2)?;
    if m1.focals().chain(m2.focals()).any(|(e, _)| e.is_empty()) {
        return Err(FusionError::EmptyElement);
    }
    let mut acc = Accumulator::new(&frame);
    for (x1, v1) in m1.focals() {
        for (x2, v2) in m2.focals() {
            let p = v1 * v2;
            let meet = frame.meet(x1, x2);
            if meet.is_empty() {
                acc.k12 += p;
                acc.partial(vec![x1.clone(), x2.clone()], p, Basis::Normalization, vec![renormalized(p)]);
                continue;
            }
            let (a, b) = (x1.atoms(), x2.atoms());
            let overlap = (a & b).len() as f64;
            let r = match degree {
                ZhangDegree::Product => overlap / (a.len() * b.len()) as f64,
                ZhangDegree::Union => overlap / (a | b).len() as f64,
            };
            acc.add(&meet, r * p);
        }
    }
    let total = acc.nonempty_total();
    if total <= ZERO_TOLERANCE {
        return Err(FusionError::TotalConflict { k12: acc.k12 });
    }
    acc.scale(1.0 / total);
    Ok(acc.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TNorm {
    Algebraic,
    Bounded,
    Min,
}

impl TNorm {
    pub fn apply(self, x: f64, y: f64) -> f64 {
        match self {
            TNorm::Algebraic => x * y,
            TNorm::Bounded => (x + y - 1.0).max(0.0),
            TNorm::Min => x.min(y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TConorm {
    Algebraic,
    Bounded,
    Max,
}

impl TConorm {
    pub fn apply(self, x: f64, y: f64) -> f64 {
        match self {
            TConorm::Algebraic => x + y - x * y,
            TConorm::Bounded => (x + y).min(1.0),
            TConorm::Max => x.max(y),
        }
    }
}

/// Shared body of the T-norm and T-conorm rules. Pairs range over every
/// focal of either source, since a T-conorm is non-zero when only one
/// argument is.
fn triangular(
    m1: &MassFunction,
    m2: &MassFunction,
    op: impl Fn(f64, f64) -> f64,
    land: impl Fn(&Frame, &Element, &Element) -> Element,
) -> Result<FusionResult> {
    let frame = same_frame(m1, m2)?;
    let mut domain: BTreeMap<FocalKey, Element> = BTreeMap::new();
    for (e, _) in m1.focals().chain(m2.focals()) {
        domain.entry(e.key()).or_insert_with(|| e.clone());
    }
    let mut acc = Accumulator::new(&frame);
    for x in domain.values() {
        for y in domain.values() {
            let v = op(m1.mass_by_key(&x.key()), m2.mass_by_key(&y.key()));
            if v == 0.0 {
                continue;
            }
            let landing = land(&frame, x, y);
            if landing.is_empty() {
                acc.k12 += v;
                acc.partial(vec![x.clone(), y.clone()], v, Basis::Normalization, vec![renormalized(v)]);
            } else {
                acc.add(&landing, v);
            }
        }
    }
    let total = acc.nonempty_total();
    if total <= ZERO_TOLERANCE {
        return Err(FusionError::ZeroTotalAfterWeighting);
    }
    acc.scale(1.0 / total);
    Ok(acc.finish())
}

/// T-norm rule: conjunctive landing with the product replaced by `kind`,
/// renormalized over non-empty sets. `k12` reports the pre-normalization
/// mass on ∅.
pub fn tnorm(m1: &MassFunction, m2: &MassFunction, kind: TNorm) -> Result<FusionResult> {
    triangular(m1, m2, |x, y| kind.apply(x, y), |f, a, b| f.meet(a, b))
}

/// T-conorm rule: disjunctive landing with the product replaced by `kind`.
pub fn tconorm(m1: &MassFunction, m2: &MassFunction, kind: TConorm) -> Result<FusionResult> {
    triangular(m1, m2, |x, y| kind.apply(x, y), |f, a, b| f.join(a, b))
}

/// Jøsang's consensus of two opinions about the same focus.
///
/// Two dogmatic opinions (`u = 0`) are averaged when both come from Bayesian
/// bbas; otherwise the relative dogmatism is undefined and an error is
/// returned.
pub fn consensus(w1: &Opinion, w2: &Opinion) -> Result<Opinion> {
    let k = w1.u + w2.u - w1.u * w2.u;
    if k.abs() > ZERO_TOLERANCE {
        let denominator = w1.u + w2.u - 2.0 * w1.u * w2.u;
        let alpha = if denominator.abs() > ZERO_TOLERANCE {
            (w1.alpha * w2.u + w2.alpha * w1.u - (w1.alpha + w2.alpha) * w1.u * w2.u) / denominator
        } else {
            (w1.alpha + w2.alpha) / 2.0
        };
        return Ok(Opinion {
            b: (w1.b * w2.u + w2.b * w1.u) / k,
            d: (w1.d * w2.u + w2.d * w1.u) / k,
            u: w1.u * w2.u / k,
            alpha,
            bayesian: false,
        });
    }
    if w1.bayesian && w2.bayesian {
        return consensus_dogmatic(w1, w2, 1.0);
    }
    Err(FusionError::DegenerateConsensus)
}

/// The dogmatic branch with an explicit relative dogmatism `γ = u2/u1`.
pub fn consensus_dogmatic(w1: &Opinion, w2: &Opinion, gamma: f64) -> Result<Opinion> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(FusionError::ParameterOutOfRange {
            name: "gamma",
            value: gamma,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let mix = |a: f64, b: f64| (gamma * a + b) / (gamma + 1.0);
    Ok(Opinion {
        b: mix(w1.b, w2.b),
        d: mix(w1.d, w2.d),
        u: 0.0,
        alpha: mix(w1.alpha, w2.alpha),
        bayesian: w1.bayesian && w2.bayesian,
    })
}

/// Consensus on `{focus, C(focus)}` returned as a bba: belief on the focus,
/// disbelief on its complement and uncertainty on total ignorance.
pub fn consensus_masses(
    m1: &MassFunction,
    m2: &MassFunction,
    focus: &Element,
    gamma: Option<f64>,
) -> Result<(Opinion, MassFunction)> {
    let frame = same_frame(m1, m2)?;
    let (w1, w2) = (m1.to_opinion(focus)?, m2.to_opinion(focus)?);
    let w = match gamma {
        Some(g) if w1.u + w2.u - w1.u * w2.u <= ZERO_TOLERANCE => consensus_dogmatic(&w1, &w2, g)?,
        _ => consensus(&w1, &w2)?,
    };
    let focus = frame.reevaluate(focus)?;
    let mut m = MassFunction::new(&frame);
    m.add(focus.clone(), w.b);
    m.add(frame.complement(&focus)?, w.d);
    m.add(frame.total_ignorance(), w.u);
    Ok((w, m))
}

/// A closed real interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(FusionError::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn midpoint(self, other: Interval) -> Interval {
        Interval {
            lo: (self.lo + other.lo) / 2.0,
            hi: (self.hi + other.hi) / 2.0,
        }
    }

    fn close_to(self, other: Interval) -> bool {
        (self.lo - other.lo).abs() <= 1e-12 && (self.hi - other.hi).abs() <= 1e-12
    }
}

/// A bba whose focals are real intervals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalMass {
    focals: Vec<(Interval, f64)>,
}

impl IntervalMass {
    pub fn new() -> Self {
        IntervalMass::default()
    }

    /// Adds mass, merging with an equal interval if present.
    pub fn insert(&mut self, interval: Interval, mass: f64) -> Result<()> {
        if !mass.is_finite() || mass < 0.0 {
            return Err(FusionError::InvalidMass(mass));
        }
        match self.focals.iter_mut().find(|(i, _)| i.close_to(interval)) {
            Some((_, m)) => *m += mass,
            None => self.focals.push((interval, mass)),
        }
        Ok(())
    }

    pub fn focals(&self) -> &[(Interval, f64)] {
        &self.focals
    }

    pub fn mass(&self, interval: Interval) -> f64 {
        self.focals
            .iter()
            .filter(|(i, _)| i.close_to(interval))
            .map(|(_, m)| m)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.focals.iter().map(|(_, m)| m).sum()
    }
}

/// Convolutive x-averaging: each product lands on the midpoint interval.
pub fn convolutive_x_average(m1: &IntervalMass, m2: &IntervalMass) -> IntervalMass {
    let mut out = IntervalMass::new();
    for (x1, v1) in &m1.focals {
        for (x2, v2) in &m2.focals {
            out.insert(x1.midpoint(*x2), v1 * v2)
                .expect("products of valid masses are valid");
        }
    }
    out
}

/// Hypotheses whose exclusive region survives, when those are the only
/// surviving atoms.
fn power_set_labels(frame: &Frame) -> Result<Vec<usize>> {
    let surviving = frame.surviving();
    if surviving.iter().any(|atom| atom.count_ones() != 1) {
        return Err(FusionError::NonShaferModel);
    }
    Ok(surviving.iter().map(|atom| atom.trailing_zeros() as usize).collect())
}

/// Smets' cautious rule through commonalities: `q12 = min(q1, q2)` is
/// inverted back to masses on the power set. Negative masses are kept and
/// flagged rather than repaired.
pub fn cautious(m1: &MassFunction, m2: &MassFunction) -> Result<FusionResult> {
    let frame = same_frame(m1, m2)?;
    let labels = power_set_labels(&frame)?;
    let subsets: Vec<Element> = (0u32..1 << labels.len())
        .map(|mask| {
            let label_mask = labels
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .fold(0u32, |acc, (_, &l)| acc | 1 << l);
            frame.union_of_labels(label_mask)
        })
        .collect();
    let q: Vec<f64> = subsets
        .iter()
        .map(|a| Ok(m1.commonality(a)?.min(m2.commonality(a)?)))
        .collect::<Result<_>>()?;
    let mut acc = Accumulator::new(&frame);
    let mut min = f64::INFINITY;
    for (a, set) in subsets.iter().enumerate() {
        let mut mass = 0.0;
        for (b, qb) in q.iter().enumerate() {
            if a & b == a {
                let sign = if (b ^ a).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                mass += sign * qb;
            }
        }
        // Exact cancellations should read as zero.
        if mass.abs() < 1e-15 {
            continue;
        }
        min = min.min(mass);
        acc.add(set, mass);
        if a == 0 {
            acc.k12 = mass;
        }
    }
    if min < -1e-12 {
        acc.flag(Flag::NonBba { min });
    }
    Ok(acc.finish())
}

/// Base rules that have a degree-weighted variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImprovedBase {
    Disjunctive,
    DsmClassic,
    DsmHybrid,
    Smets,
    Yager,
    DuboisPrade,
}

/// Degree-weighted rules: conjunctive terms are weighted by
/// `|X1 ∩ X2| / |X1 ∪ X2|` and union transfers by
/// `(|X1 ∪ X2| − |X1 ∩ X2|) / |X1 ∪ X2|`, then everything is renormalized.
///
/// The formulas are taken as written, so conflicting products carry a zero
/// intersection weight in the Smets and Yager variants.
pub fn improved(m1: &MassFunction, m2: &MassFunction, base: ImprovedBase) -> Result<FusionResult> {
    let frame = same_frame(m1, m2)?;
    let ignorance = frame.total_ignorance();
    if base == ImprovedBase::Yager && ignorance.is_empty() {
        return Err(FusionError::EmptyIgnorance);
    }
    let mut acc = Accumulator::new(&frame);
    for (x1, v1) in m1.focals() {
        for (x2, v2) in m2.focals() {
            let p = v1 * v2;
            let (a, b) = (x1.atoms(), x2.atoms());
            let (inter, union) = ((a & b).len() as f64, (a | b).len() as f64);
            let (d_inter, d_union) = if union > 0.0 {
                (inter / union, (union - inter) / union)
            } else {
                (0.0, 0.0)
            };
            let meet = frame.meet(x1, x2);
            let join = frame.join(x1, x2);
            let operands = vec![x1.clone(), x2.clone()];
            if base == ImprovedBase::Disjunctive {
                acc.add(&join, d_union * p);
                continue;
            }
            if !meet.is_empty() {
                acc.add(&meet, d_inter * p);
                if base == ImprovedBase::Yager && meet.atoms() == ignorance.atoms() {
                    // m1(I)·m2(I) is already on I; nothing extra.
                }
                continue;
            }
            acc.k12 += p;
            let (target, weight, basis) = match base {
                ImprovedBase::Disjunctive => unreachable!(),
                ImprovedBase::DsmClassic | ImprovedBase::Smets => (meet.clone(), d_inter, Basis::Retained),
                ImprovedBase::Yager => (ignorance.clone(), d_inter, Basis::TotalIgnorance),
                ImprovedBase::DuboisPrade => {
                    if join.is_empty() {
                        acc.partial(operands, p, Basis::Union, vec![renormalized(p)]);
                        continue;
                    }
                    (join.clone(), d_union, Basis::Union)
                }
                ImprovedBase::DsmHybrid => {
                    let both_empty = x1.is_empty() && x2.is_empty();
                    let weight = if both_empty { 1.0 } else { d_union };
                    match dsmh_target(&frame, &operands, &meet) {
                        Some((target, basis)) => (target, weight, basis),
                        None => (frame.empty_element(), weight, Basis::DisjunctiveForm),
                    }
                }
            };
            let kept = weight * p;
            acc.partial(operands, p, basis, vec![to(&target, kept), renormalized(p - kept)]);
        }
    }
    let total = acc.total();
    if total <= ZERO_TOLERANCE {
        return Err(FusionError::ZeroTotalAfterWeighting);
    }
    acc.scale(1.0 / total);
    Ok(acc.finish())
}
