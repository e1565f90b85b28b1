use std::cmp::Ordering;
use std::fmt;

use belief_fusion::special::IntervalMass;
use belief_fusion::{Flag, Frame, FusionResult, MassFunction, Target};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub element: String,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareRecord {
    pub to: String,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialRecord {
    pub operands: Vec<String>,
    pub mass: f64,
    pub basis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub shares: Vec<ShareRecord>,
}

/// A combined bba ready for printing or export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    pub rule: String,
    pub rows: Vec<Row>,
    pub sum: f64,
    pub k12: f64,
    pub lost: f64,
    pub flags: Vec<String>,
    pub warnings: Vec<String>,
    pub ledger: Vec<PartialRecord>,
}

fn flag_name(flag: &Flag) -> String {
    match flag {
        Flag::Incomplete => "incomplete".into(),
        Flag::Paraconsistent => "paraconsistent".into(),
        Flag::OpenWorld => "open-world".into(),
        Flag::Lost => "lost".into(),
        Flag::NonBba { .. } => "non-bba".into(),
        Flag::Provisional => "provisional".into(),
        Flag::QuasiAssociative => "quasi-associative".into(),
        Flag::XorDegenerate => "xor-degenerate".into(),
        Flag::EmptyMassKept => "empty-mass-kept".into(),
    }
}

fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        b.mass
            .partial_cmp(&a.mass)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.element.cmp(&b.element))
    });
}

const EPS: f64 = 1e-9;

impl ResultTable {
    pub fn from_result(rule: &str, result: &FusionResult) -> Self {
        let m = &result.combined;
        let frame = m.frame();
        let mut rows = rows_of(m);
        sort_rows(&mut rows);
        let sum = m.total();
        let mut flags: Vec<String> = result.flags.iter().map(flag_name).collect();
        let mut warnings = Vec::new();
        if sum < 1.0 - EPS {
            warnings.push(format!("incomplete: sum={sum:.6}"));
        } else if sum > 1.0 + EPS {
            warnings.push(format!("paraconsistent: sum={sum:.6}"));
        }
        for flag in &result.flags {
            match flag {
                Flag::NonBba { min } => warnings.push(format!("non-bba: min={min:.6}")),
                Flag::Provisional => warnings.push("provisional: model not yet known".into()),
                _ => {}
            }
        }
        let empty = m.empty_mass();
        if empty > EPS {
            warnings.push(format!("open-world: m(∅)={empty:.6}"));
        }
        flags.dedup();
        let ledger = result
            .conflict
            .partials
            .iter()
            .map(|p| PartialRecord {
                operands: p.operands.iter().map(|e| frame.render(e)).collect(),
                mass: p.mass,
                basis: format!("{:?}", p.basis),
                note: p.note.clone(),
                shares: p
                    .shares
                    .iter()
                    .map(|s| ShareRecord {
                        to: match &s.to {
                            Target::Element(e) => frame.display(e),
                            Target::Lost => "lost".into(),
                            Target::Renormalized => "renormalized".into(),
                        },
                        mass: s.mass,
                    })
                    .collect(),
            })
            .collect();
        ResultTable {
            rule: rule.to_string(),
            rows,
            sum,
            k12: result.conflict.k12,
            lost: result.lost(),
            flags,
            warnings,
            ledger,
        }
    }

    pub fn from_intervals(rule: &str, m: &IntervalMass) -> Self {
        let mut rows: Vec<Row> = m
            .focals()
            .iter()
            .map(|(i, v)| Row {
                element: format!("[{},{}]", i.lo, i.hi),
                mass: *v,
            })
            .collect();
        sort_rows(&mut rows);
        let sum = m.total();
        ResultTable {
            rule: rule.to_string(),
            rows,
            sum,
            k12: 0.0,
            lost: 0.0,
            flags: Vec::new(),
            warnings: Vec::new(),
            ledger: Vec::new(),
        }
    }

    /// Mass printed for `element`, if it has a row.
    pub fn mass(&self, element: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.element == element).map(|r| r.mass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }
}

/// One row per distinct display form; all empty focals share the `∅` row.
fn rows_of(m: &MassFunction) -> Vec<Row> {
    let frame: &Frame = m.frame();
    let mut rows: Vec<Row> = Vec::new();
    for (e, v) in m.focals() {
        let name = if e.is_empty() { "∅".to_string() } else { frame.display(e) };
        match rows.iter_mut().find(|r| r.element == name) {
            Some(r) => r.mass += v,
            None => rows.push(Row { element: name, mass: v }),
        }
    }
    rows
}

/// Six decimals, without a sign on values that print as zero.
fn six(x: f64) -> String {
    let x = if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{x:.6}")
}

impl fmt::Display for ResultTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().map(|r| r.element.chars().count()).max().unwrap_or(0).max(7);
        writeln!(f, "rule: {}", self.rule)?;
        for r in &self.rows {
            let pad = width - r.element.chars().count();
            writeln!(f, "{}{}  {}", r.element, " ".repeat(pad), six(r.mass))?;
        }
        writeln!(f, "{}", "-".repeat(width + 10))?;
        writeln!(f, "{:<width$}  {}", "sum", six(self.sum))?;
        writeln!(f, "{:<width$}  {}", "k12", six(self.k12))?;
        writeln!(f, "{:<width$}  {}", "lost", six(self.lost))?;
        if self.flags.is_empty() {
            writeln!(f, "{:<width$}  none", "flags")?;
        } else {
            writeln!(f, "{:<width$}  {}", "flags", self.flags.join(" "))?;
        }
        for w in &self.warnings {
            writeln!(f, "WARN {w}")?;
        }
        Ok(())
    }
}

/// Reads the rows back from a printed table.
pub fn parse_rows(text: &str) -> Vec<Row> {
    text.lines()
        .skip(1)
        .take_while(|l| !l.starts_with('-'))
        .filter_map(|l| {
            let (name, mass) = l.trim_end().rsplit_once("  ")?;
            Some(Row {
                element: name.trim_end().to_string(),
                mass: mass.trim().parse().ok()?,
            })
        })
        .collect()
}
