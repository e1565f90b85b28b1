//! Product expansion of several sources.
//!
//! Most conjunctive-based rules only need, for each product term, the set of
//! focal elements multiplied together. Terms with the same operand set are
//! merged into one cell, which keeps the store small and lets a new source be
//! folded in without revisiting the old ones.

use std::collections::BTreeMap;

use crate::error::{FusionError, Result};
use crate::frame::{Element, FocalKey, Frame};
use crate::mass::MassFunction;

#[derive(Debug, Clone)]
pub struct TupleExpansion {
    frame: Frame,
    elements: BTreeMap<FocalKey, Element>,
    cells: BTreeMap<Vec<FocalKey>, f64>,
    columns: BTreeMap<FocalKey, f64>,
    sources: usize,
}

/// A merged product term.
#[derive(Debug, Clone)]
pub struct Cell {
    pub operands: Vec<Element>,
    pub mass: f64,
    /// Intersection of the operands, in canonical form.
    pub intersection: Element,
    pub union: Element,
}

impl Cell {
    pub fn is_conflict(&self) -> bool {
        self.intersection.is_empty()
    }

    pub fn all_operands_empty(&self) -> bool {
        self.operands.iter().all(Element::is_empty)
    }
}

impl TupleExpansion {
    pub fn new(sources: &[MassFunction]) -> Result<Self> {
        let first = sources.first().ok_or(FusionError::ArityMismatch {
            expected: 1,
            got: 0,
        })?;
        let mut exp = TupleExpansion {
            frame: first.frame().clone(),
            elements: BTreeMap::new(),
            cells: BTreeMap::from([(Vec::new(), 1.0)]),
            columns: BTreeMap::new(),
            sources: 0,
        };
        for m in sources {
            exp.push(m)?;
        }
        Ok(exp)
    }

    /// Folds one more source into every cell.
    pub fn push(&mut self, m: &MassFunction) -> Result<()> {
        if m.frame() != &self.frame {
            return Err(FusionError::FrameMismatch);
        }
        let mut cells = BTreeMap::new();
        for (key, mass) in &self.cells {
            for (e, v) in m.focals() {
                let mut next = key.clone();
                if let Err(at) = next.binary_search(&e.key()) {
                    next.insert(at, e.key());
                }
                *cells.entry(next).or_insert(0.0) += mass * v;
            }
        }
        for (e, v) in m.focals() {
            self.elements.entry(e.key()).or_insert_with(|| e.clone());
            *self.columns.entry(e.key()).or_insert(0.0) += v;
        }
        self.cells = cells;
        self.sources += 1;
        Ok(())
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    /// Column sum `Σ_i m_i(X)` for a focal seen in some source.
    pub fn column(&self, key: &FocalKey) -> f64 {
        self.columns.get(key).copied().unwrap_or(0.0)
    }

    /// Every focal seen in any source with its column sum.
    pub fn columns(&self) -> impl Iterator<Item = (&Element, f64)> + '_ {
        self.columns
            .iter()
            .map(move |(k, v)| (&self.elements[k], *v))
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().map(move |(keys, mass)| {
            let operands: Vec<Element> = keys.iter().map(|k| self.elements[k].clone()).collect();
            let (first, rest) = operands.split_first().expect("cells are non-empty");
            let mut intersection = self.frame.meet(first, first);
            let mut union = intersection.clone();
            for e in rest {
                intersection = self.frame.meet(&intersection, e);
                union = self.frame.join(&union, e);
            }
            Cell {
                operands,
                mass: *mass,
                intersection,
                union,
            }
        })
    }

    /// The s-ary conjunctive combination, with mass on empty intersections
    /// kept on them.
    pub fn conjunctive(&self) -> MassFunction {
        let mut m = MassFunction::new(&self.frame);
        for cell in self.cells() {
            m.add(cell.intersection, cell.mass);
        }
        m
    }
}
