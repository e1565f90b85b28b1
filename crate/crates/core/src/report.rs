//! Results of a combination and the audit trail of where conflicting mass
//! went.

use std::collections::BTreeMap;

use crate::frame::{Element, FocalKey, Frame};
use crate::mass::MassFunction;

/// Destination of a share of a partial conflict.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// Added to an element. An empty element means the mass stays on ∅.
    Element(Element),
    /// Dropped; the combined bba is incomplete by this much.
    Lost,
    /// Absorbed by a global renormalization.
    Renormalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Share {
    pub to: Target,
    pub mass: f64,
}

/// What the proportions of a redistribution were computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Left on the (empty) intersection.
    Retained,
    Normalization,
    /// Column sums of the mass matrix.
    ColumnSums,
    /// Column averages.
    MassAverages,
    /// The masses the sources gave to the conflicting operands.
    SourceMasses,
    /// Results of the conjunctive rule.
    ConjunctiveMasses,
    Uniform,
    DisjunctiveForm,
    TotalIgnorance,
    Union,
    Weights,
    Parameterized,
    Attitude,
}

/// One product term of the combination that did not simply land on a
/// non-empty intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct Partial {
    /// The focal elements multiplied, one per source (deduplicated for
    /// rules that only depend on the set of operands).
    pub operands: Vec<Element>,
    pub mass: f64,
    pub basis: Basis,
    pub shares: Vec<Share>,
    pub note: Option<String>,
}

impl Partial {
    pub fn shared(&self) -> f64 {
        self.shares.iter().map(|s| s.mass).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConflictReport {
    /// Total conjunctive mass on empty intersections.
    pub k12: f64,
    pub partials: Vec<Partial>,
}

/// The ledger view used by the redistribution rules.
pub type RedistributionLedger = ConflictReport;

impl ConflictReport {
    pub fn lost(&self) -> f64 {
        self.shares()
            .filter(|s| s.to == Target::Lost)
            .map(|s| s.mass)
            .sum()
    }

    pub fn shares(&self) -> impl Iterator<Item = &Share> {
        self.partials.iter().flat_map(|p| p.shares.iter())
    }
}

/// Conditions worth reporting alongside a result.
#[derive(Debug, Clone, PartialEq)]
pub enum Flag {
    /// Masses sum below one because some mass was lost.
    Incomplete,
    Paraconsistent,
    /// Some mass was sent to ∅ because no non-empty recipient existed.
    OpenWorld,
    /// A share addressed an element that is empty under the model.
    Lost,
    /// An inverted mass came out negative.
    NonBba { min: f64 },
    /// Computed under an unknown model; may change once the model is known.
    Provisional,
    /// Composed pairwise from a binary-only rule.
    QuasiAssociative,
    /// Exclusive disjunction of a set with itself.
    XorDegenerate,
    /// Mass remains on ∅ because the rule has no transfer for it.
    EmptyMassKept,
}

#[derive(Debug, Clone)]
pub struct FusionResult {
    pub combined: MassFunction,
    pub conflict: ConflictReport,
    pub flags: Vec<Flag>,
}

impl FusionResult {
    /// Wraps a bba produced without any conflict handling.
    pub fn plain(combined: MassFunction) -> Self {
        FusionResult {
            combined,
            conflict: ConflictReport::default(),
            flags: Vec::new(),
        }
    }

    pub fn has_flag(&self, flag: &Flag) -> bool {
        self.flags.contains(flag)
    }

    pub fn lost(&self) -> f64 {
        self.conflict.lost()
    }
}

/// Collects masses and partials while a rule runs.
pub(crate) struct Accumulator {
    frame: Frame,
    masses: BTreeMap<FocalKey, (Element, f64)>,
    pub(crate) partials: Vec<Partial>,
    pub(crate) k12: f64,
    flags: Vec<Flag>,
}

impl Accumulator {
    pub(crate) fn new(frame: &Frame) -> Self {
        Accumulator {
            frame: frame.clone(),
            masses: BTreeMap::new(),
            partials: Vec::new(),
            k12: 0.0,
            flags: Vec::new(),
        }
    }

    pub(crate) fn frame(&self) -> &Frame {
        &self.frame
    }

    pub(crate) fn add(&mut self, element: &Element, mass: f64) {
        if mass == 0.0 {
            return;
        }
        self.masses
            .entry(element.key())
            .and_modify(|(_, m)| *m += mass)
            .or_insert((element.clone(), mass));
    }

    pub(crate) fn flag(&mut self, flag: Flag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }

    /// Records a partial and applies its shares.
    pub(crate) fn partial(
        &mut self,
        operands: Vec<Element>,
        mass: f64,
        basis: Basis,
        shares: Vec<Share>,
    ) {
        self.partial_with_note(operands, mass, basis, shares, None);
    }

    pub(crate) fn partial_with_note(
        &mut self,
        operands: Vec<Element>,
        mass: f64,
        basis: Basis,
        shares: Vec<Share>,
        note: Option<String>,
    ) {
        for share in &shares {
            match &share.to {
                Target::Element(e) => self.add(e, share.mass),
                Target::Lost => {
                    if share.mass > 0.0 {
                        self.flag(Flag::Lost);
                    }
                }
                Target::Renormalized => {}
            }
        }
        self.partials.push(Partial {
            operands,
            mass,
            basis,
            shares,
            note,
        });
    }

    /// Scales every accumulated mass; used by normalizing rules.
    pub(crate) fn scale(&mut self, factor: f64) {
        for (_, m) in self.masses.values_mut() {
            *m *= factor;
        }
    }

    pub(crate) fn total(&self) -> f64 {
        self.masses.values().map(|(_, m)| m).sum()
    }

    pub(crate) fn nonempty_total(&self) -> f64 {
        self.masses
            .values()
            .filter(|(e, _)| !e.is_empty())
            .map(|(_, m)| m)
            .sum()
    }

    pub(crate) fn finish(mut self) -> FusionResult {
        let mut combined = MassFunction::new(&self.frame);
        for (_, (e, m)) in std::mem::take(&mut self.masses) {
            combined.add(e, m);
        }
        if self.partials.iter().any(|p| p.shares.iter().any(|s| s.to == Target::Lost && s.mass > 0.0)) {
            self.flag(Flag::Incomplete);
        }
        FusionResult {
            combined,
            conflict: ConflictReport {
                k12: self.k12,
                partials: self.partials,
            },
            flags: self.flags,
        }
    }
}

pub(crate) fn to(element: &Element, mass: f64) -> Share {
    Share {
        to: Target::Element(element.clone()),
        mass,
    }
}

pub(crate) fn lost(mass: f64) -> Share {
    Share {
        to: Target::Lost,
        mass,
    }
}

pub(crate) fn renormalized(mass: f64) -> Share {
    Share {
        to: Target::Renormalized,
        mass,
    }
}
