//! Basic belief assignments and the functions derived from them.

use std::collections::BTreeMap;

use crate::error::{FusionError, Result};
use crate::frame::{AtomSet, Element, FocalKey, Frame};

/// Tolerance for classifying a mass total as normal.
pub const STATUS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Normal,
    /// Masses sum below one.
    Incomplete,
    /// Masses sum above one.
    Paraconsistent,
}

/// A mass function over the super-power set of a frame.
///
/// Semantically equal elements are merged on insertion. Elements that are
/// empty under the model are kept apart by their model-free meaning, so that
/// later redistribution can still see which sets the mass came from.
#[derive(Debug, Clone)]
pub struct MassFunction {
    frame: Frame,
    focals: BTreeMap<FocalKey, (Element, f64)>,
}

impl MassFunction {
    pub fn new(frame: &Frame) -> Self {
        MassFunction {
            frame: frame.clone(),
            focals: BTreeMap::new(),
        }
    }

    /// The vacuous belief assignment: all mass on total ignorance.
    pub fn vacuous(frame: &Frame) -> Self {
        MassFunction::certain(frame, &frame.total_ignorance())
            .expect("total ignorance belongs to its frame")
    }

    pub fn certain(frame: &Frame, element: &Element) -> Result<Self> {
        let mut m = MassFunction::new(frame);
        m.insert(element, 1.0)?;
        Ok(m)
    }

    pub fn from_masses<'a>(
        frame: &Frame,
        masses: impl IntoIterator<Item = (&'a Element, f64)>,
    ) -> Result<Self> {
        let mut m = MassFunction::new(frame);
        for (element, mass) in masses {
            m.insert(element, mass)?;
        }
        Ok(m)
    }

    /// Builds a bba from `(expression, mass)` pairs.
    pub fn from_exprs(frame: &Frame, masses: &[(&str, f64)]) -> Result<Self> {
        let mut m = MassFunction::new(frame);
        for (text, mass) in masses {
            m.insert(&frame.parse(text)?, *mass)?;
        }
        Ok(m)
    }

    /// Adds `mass` to `element`, merging with semantically equal focals.
    pub fn insert(&mut self, element: &Element, mass: f64) -> Result<()> {
        if !mass.is_finite() || mass < 0.0 {
            return Err(FusionError::InvalidMass(mass));
        }
        let element = self.frame.reevaluate(element)?;
        self.add(element, mass);
        Ok(())
    }

    /// Unchecked accumulation; negative values are allowed so that inverted
    /// commonalities can be reported as they are.
    pub(crate) fn add(&mut self, element: Element, mass: f64) {
        if mass == 0.0 {
            return;
        }
        self.focals
            .entry(element.key())
            .and_modify(|(_, m)| *m += mass)
            .or_insert((element, mass));
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Focal elements with their masses, in a deterministic order.
    pub fn focals(&self) -> impl Iterator<Item = (&Element, f64)> + '_ {
        self.focals.values().map(|(e, m)| (e, *m))
    }

    pub fn len(&self) -> usize {
        self.focals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focals.is_empty()
    }

    /// Mass of `x`. For an empty `x` this is the mass of all empty focals.
    pub fn mass(&self, x: &Element) -> f64 {
        if x.is_empty() {
            self.empty_mass()
        } else {
            self.focals
                .get(&FocalKey::Set(x.atoms() & self.frame.surviving()))
                .map_or(0.0, |(_, m)| *m)
        }
    }

    /// Mass of the element with exactly these atoms under the model.
    pub fn mass_of_atoms(&self, atoms: AtomSet) -> f64 {
        if atoms.is_empty() {
            self.empty_mass()
        } else {
            self.focals.get(&FocalKey::Set(atoms)).map_or(0.0, |(_, m)| *m)
        }
    }

    pub(crate) fn mass_by_key(&self, key: &FocalKey) -> f64 {
        self.focals.get(key).map_or(0.0, |(_, m)| *m)
    }

    pub fn empty_mass(&self) -> f64 {
        self.focals
            .values()
            .filter(|(e, _)| e.is_empty())
            .map(|(_, m)| m)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.focals.values().map(|(_, m)| m).sum()
    }

    pub fn status(&self) -> Status {
        let total = self.total();
        if total < 1.0 - STATUS_TOLERANCE {
            Status::Incomplete
        } else if total > 1.0 + STATUS_TOLERANCE {
            Status::Paraconsistent
        } else {
            Status::Normal
        }
    }

    /// Masses keyed by model atoms, with every empty focal collapsed onto ∅.
    pub fn by_atoms(&self) -> BTreeMap<AtomSet, f64> {
        let mut out = BTreeMap::new();
        for (e, m) in self.focals() {
            *out.entry(e.atoms()).or_insert(0.0) += m;
        }
        out
    }

    /// Largest absolute mass difference over all elements.
    pub fn max_abs_diff(&self, other: &MassFunction) -> f64 {
        let (a, b) = (self.by_atoms(), other.by_atoms());
        a.keys()
            .chain(b.keys())
            .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
            .fold(0.0, f64::max)
    }

    fn check_query(&self, a: &Element) -> Result<AtomSet> {
        let a = self.frame.reevaluate(a)?;
        if a.is_empty() {
            return Err(FusionError::EmptyElement);
        }
        Ok(a.atoms())
    }

    /// Belief: mass of the non-empty focals inside `a`.
    pub fn bel(&self, a: &Element) -> Result<f64> {
        let a = self.check_query(a)?;
        Ok(self
            .focals()
            .filter(|(x, _)| !x.is_empty() && x.atoms().is_subset(a))
            .map(|(_, m)| m)
            .sum())
    }

    /// Plausibility: mass of the focals meeting `a`.
    pub fn pl(&self, a: &Element) -> Result<f64> {
        let a = self.check_query(a)?;
        Ok(self
            .focals()
            .filter(|(x, _)| !(x.atoms() & a).is_empty())
            .map(|(_, m)| m)
            .sum())
    }

    /// Belief weighted by the degree of inclusion `|X| / |a|`.
    pub fn bel_d(&self, a: &Element) -> Result<f64> {
        let a = self.check_query(a)?;
        let size = a.len() as f64;
        Ok(self
            .focals()
            .filter(|(x, _)| !x.is_empty() && x.atoms().is_subset(a))
            .map(|(x, m)| x.atoms().len() as f64 / size * m)
            .sum())
    }

    /// Plausibility weighted by the degree of intersection.
    pub fn pl_d(&self, a: &Element) -> Result<f64> {
        let a = self.check_query(a)?;
        Ok(self
            .focals()
            .filter(|(x, _)| !(x.atoms() & a).is_empty())
            .map(|(x, m)| {
                let x = x.atoms();
                (x & a).len() as f64 / (x | a).len() as f64 * m
            })
            .sum())
    }

    /// Commonality `q(a)`: mass of the focals containing `a`. `q(∅)` is the
    /// total mass.
    pub fn commonality(&self, a: &Element) -> Result<f64> {
        let a = self.frame.reevaluate(a)?.atoms();
        Ok(self
            .focals()
            .filter(|(x, _)| a.is_subset(x.atoms()))
            .map(|(_, m)| m)
            .sum())
    }

    /// Shafer discounting with the given reliability; the removed mass goes
    /// to total ignorance.
    pub fn discount(&self, reliability: f64) -> Result<MassFunction> {
        if !(0.0..=1.0).contains(&reliability) {
            return Err(FusionError::InvalidReliability(reliability));
        }
        let mut out = MassFunction::new(&self.frame);
        for (e, m) in self.focals() {
            out.add(e.clone(), m * reliability);
        }
        out.add(
            self.frame.total_ignorance(),
            (1.0 - reliability) * self.total(),
        );
        Ok(out)
    }

    pub fn normalize(&self) -> Result<MassFunction> {
        let total = self.total();
        if total <= 0.0 {
            return Err(FusionError::ZeroTotalMass);
        }
        let mut out = MassFunction::new(&self.frame);
        for (e, m) in self.focals() {
            out.add(e.clone(), m / total);
        }
        Ok(out)
    }

    /// True when every focal is a single hypothesis.
    pub fn is_bayesian(&self) -> bool {
        let singletons: Vec<AtomSet> = (0..self.frame.n())
            .map(|i| self.frame.hypothesis(i).atoms())
            .filter(|a| !a.is_empty())
            .collect();
        !self.is_empty()
            && self
                .focals()
                .all(|(x, _)| !x.is_empty() && singletons.contains(&x.atoms()))
    }

    /// Coarsens onto `{focus, C(focus)}` and reads off an opinion: belief in
    /// the focus, belief in its complement, and the rest as uncertainty.
    pub fn to_opinion(&self, focus: &Element) -> Result<Opinion> {
        let focus = self.frame.reevaluate(focus)?;
        let ignorance = self.frame.total_ignorance();
        let reason = if focus.is_empty() {
            Some("focus is empty")
        } else if focus.atoms() == ignorance.atoms() {
            Some("focus is the total ignorance")
        } else if self.empty_mass() > 0.0 {
            Some("bba has mass on empty elements")
        } else if self.status() != Status::Normal {
            Some("bba is not normal")
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(FusionError::NotBinaryCoarsenable(reason.into()));
        }
        let complement = self.frame.complement(&focus)?;
        let b = self.bel(&focus)?;
        let d = self.bel(&complement)?;
        let alpha = self.frame.cardinality(&focus) as f64 / self.frame.cardinality(&ignorance) as f64;
        let mut opinion = Opinion::new(b, d, (1.0 - b - d).max(0.0), alpha)?;
        opinion.bayesian = self.is_bayesian();
        Ok(opinion)
    }

    /// Re-evaluates every focal under a tightened model of the same frame.
    pub fn under(&self, frame: &Frame) -> Result<MassFunction> {
        let frame = self.frame.tightened_to(frame)?;
        let mut out = MassFunction::new(&frame);
        for (e, m) in self.focals() {
            out.add(frame.reevaluate(e)?, m);
        }
        Ok(out)
    }
}

/// Several sources over one frame, viewed column-wise.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    sources: Vec<MassFunction>,
}

impl MassMatrix {
    pub fn new(sources: Vec<MassFunction>) -> Result<Self> {
        let first = sources.first().ok_or(FusionError::ArityMismatch {
            expected: 1,
            got: 0,
        })?;
        if sources.iter().any(|m| m.frame() != first.frame()) {
            return Err(FusionError::FrameMismatch);
        }
        Ok(MassMatrix { sources })
    }

    pub fn sources(&self) -> &[MassFunction] {
        &self.sources
    }

    pub fn frame(&self) -> &Frame {
        self.sources[0].frame()
    }

    /// `c(A) = Σ_i m_i(A)`.
    pub fn column_sum(&self, a: &Element) -> f64 {
        let key = a.key();
        self.sources.iter().map(|m| m.mass_by_key(&key)).sum()
    }

    /// Every column with its sum, keyed like the focals.
    pub fn columns(&self) -> BTreeMap<FocalKey, (Element, f64)> {
        let mut out: BTreeMap<FocalKey, (Element, f64)> = BTreeMap::new();
        for m in &self.sources {
            for (e, v) in m.focals() {
                out.entry(e.key())
                    .and_modify(|(_, s)| *s += v)
                    .or_insert((e.clone(), v));
            }
        }
        out
    }
}

/// A subjective opinion about a binary focus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Opinion {
    pub b: f64,
    pub d: f64,
    pub u: f64,
    /// Relative atomicity of the focus.
    pub alpha: f64,
    /// Whether the opinion comes from a Bayesian bba. Only used to resolve
    /// the dogmatic case of consensus.
    pub bayesian: bool,
}

impl Opinion {
    pub fn new(b: f64, d: f64, u: f64, alpha: f64) -> Result<Self> {
        for v in [b, d, u, alpha] {
            if !(0.0..=1.0).contains(&v) {
                return Err(FusionError::InvalidMass(v));
            }
        }
        if (b + d + u - 1.0).abs() > STATUS_TOLERANCE {
            return Err(FusionError::InvalidMass(b + d + u));
        }
        Ok(Opinion {
            b,
            d,
            u,
            alpha,
            bayesian: u == 0.0,
        })
    }

    pub fn vacuous(alpha: f64) -> Self {
        Opinion {
            b: 0.0,
            d: 0.0,
            u: 1.0,
            alpha,
            bayesian: false,
        }
    }

    pub fn with_bayesian(mut self, bayesian: bool) -> Self {
        self.bayesian = bayesian;
        self
    }
}
