//! Brute-force reference implementations shared by the integration tests.
//!
//! Sets are explicit sets of Venn regions, a region being the bitmask of
//! the hypotheses that contain it. Rules are written straight from their
//! defining sums over ordered focal pairs, with no shared code from the
//! library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use belief_fusion::{AtomSet, Element, Frame, MassFunction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Set = BTreeSet<u32>;
pub type Bba = BTreeMap<Set, f64>;

pub const LABELS: [&str; 4] = ["A", "B", "C", "D"];

#[derive(Debug, Clone)]
pub struct Model {
    pub n: usize,
    /// Regions that are not empty.
    pub alive: Set,
}

impl Model {
    pub fn free(n: usize) -> Self {
        Model {
            n,
            alive: (1..1u32 << n).collect(),
        }
    }

    pub fn shafer(n: usize) -> Self {
        Model {
            n,
            alive: (0..n).map(|i| 1u32 << i).collect(),
        }
    }

    pub fn without(&self, dead: &Set) -> Self {
        Model {
            n: self.n,
            alive: self.alive.difference(dead).copied().collect(),
        }
    }

    /// Regions inside hypothesis `i`.
    pub fn label(&self, i: usize) -> Set {
        self.alive.iter().copied().filter(|r| r & (1 << i) != 0).collect()
    }

    pub fn labels_union(&self, idx: &[usize]) -> Set {
        idx.iter().flat_map(|&i| self.label(i)).collect()
    }

    pub fn ignorance(&self) -> Set {
        self.alive.clone()
    }

    pub fn frame(&self) -> Frame {
        let labels = &LABELS[..self.n];
        let dead: u64 = (1..1u32 << self.n)
            .filter(|r| !self.alive.contains(r))
            .fold(0, |b, r| b | 1 << r);
        let free = Frame::free(labels).unwrap();
        if dead == 0 {
            free
        } else {
            free.constrain_atoms(AtomSet::from_bits(dead)).unwrap()
        }
    }
}

pub fn inter(a: &Set, b: &Set) -> Set {
    a.intersection(b).copied().collect()
}

pub fn union(a: &Set, b: &Set) -> Set {
    a.union(b).copied().collect()
}

pub fn element(frame: &Frame, s: &Set) -> Element {
    frame.element_from_atoms(AtomSet::from_bits(s.iter().fold(0, |b, r| b | 1 << r)))
}

pub fn to_library(frame: &Frame, m: &Bba) -> MassFunction {
    let mut out = MassFunction::new(frame);
    for (s, v) in m {
        out.insert(&element(frame, s), *v).unwrap();
    }
    out
}

/// Masses keyed by region sets; all empty elements collapse to one key.
pub fn from_library(m: &MassFunction) -> Bba {
    let mut out = Bba::new();
    for (e, v) in m.focals() {
        *out.entry(e.atoms().iter().collect()).or_insert(0.0) += v;
    }
    out
}

pub fn total(m: &Bba) -> f64 {
    m.values().sum()
}

/// Largest difference over the union of keys.
pub fn diff(a: &Bba, b: &Bba) -> f64 {
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .fold(0.0, f64::max)
}

fn add(m: &mut Bba, s: Set, v: f64) {
    *m.entry(s).or_insert(0.0) += v;
}

pub fn conjunctive(m1: &Bba, m2: &Bba) -> Bba {
    let mut out = Bba::new();
    for (x, a) in m1 {
        for (y, b) in m2 {
            add(&mut out, inter(x, y), a * b);
        }
    }
    out
}

pub fn disjunctive(m1: &Bba, m2: &Bba) -> Bba {
    let mut out = Bba::new();
    for (x, a) in m1 {
        for (y, b) in m2 {
            add(&mut out, union(x, y), a * b);
        }
    }
    out
}

pub fn conflict(m1: &Bba, m2: &Bba) -> f64 {
    conjunctive(m1, m2).get(&Set::new()).copied().unwrap_or(0.0)
}

pub fn dempster(m1: &Bba, m2: &Bba) -> Option<Bba> {
    let mut c = conjunctive(m1, m2);
    let k = c.remove(&Set::new()).unwrap_or(0.0);
    if 1.0 - k <= 1e-12 {
        return None;
    }
    Some(c.into_iter().map(|(s, v)| (s, v / (1.0 - k))).collect())
}

pub fn yager(m1: &Bba, m2: &Bba, model: &Model) -> Bba {
    let mut c = conjunctive(m1, m2);
    let k = c.remove(&Set::new()).unwrap_or(0.0);
    add(&mut c, model.ignorance(), k);
    c
}

/// Returns the combined bba and the mass lost on empty unions.
pub fn dubois_prade(m1: &Bba, m2: &Bba) -> (Bba, f64) {
    let mut out = Bba::new();
    let mut lost = 0.0;
    for (x, a) in m1 {
        for (y, b) in m2 {
            let i = inter(x, y);
            if !i.is_empty() {
                add(&mut out, i, a * b);
                continue;
            }
            let u = union(x, y);
            if u.is_empty() {
                lost += a * b;
            } else {
                add(&mut out, u, a * b);
            }
        }
    }
    (out, lost)
}

/// PCR5 by its closed formula, for bbas without empty focals.
pub fn pcr5(m1: &Bba, m2: &Bba) -> Bba {
    let mut out = conjunctive(m1, m2);
    out.remove(&Set::new());
    let keys: BTreeSet<&Set> = m1.keys().chain(m2.keys()).collect();
    for x in &keys {
        let mut gain = 0.0;
        for y in &keys {
            if !inter(x, y).is_empty() {
                continue;
            }
            let (a1, a2) = (m1.get(*x).copied().unwrap_or(0.0), m2.get(*x).copied().unwrap_or(0.0));
            let (b1, b2) = (m1.get(*y).copied().unwrap_or(0.0), m2.get(*y).copied().unwrap_or(0.0));
            if a1 + b2 > 0.0 {
                gain += a1 * a1 * b2 / (a1 + b2);
            }
            if a2 + b1 > 0.0 {
                gain += a2 * a2 * b1 / (a2 + b1);
            }
        }
        if gain > 0.0 {
            add(&mut out, (*x).clone(), gain);
        }
    }
    out
}

/// PCR1: the total conflict goes to every focal in proportion to its
/// column sum, for bbas without empty focals.
pub fn pcr1(m1: &Bba, m2: &Bba) -> Bba {
    let mut out = conjunctive(m1, m2);
    let k = out.remove(&Set::new()).unwrap_or(0.0);
    let mut columns = Bba::new();
    for (s, v) in m1.iter().chain(m2) {
        add(&mut columns, s.clone(), *v);
    }
    let d: f64 = columns.values().sum();
    for (s, c) in columns {
        add(&mut out, s, c / d * k);
    }
    out
}

pub fn smets(m1: &Bba, m2: &Bba) -> Bba {
    conjunctive(m1, m2)
}

pub fn murphy(m1: &Bba, m2: &Bba) -> Bba {
    let mut out = Bba::new();
    for (s, v) in m1.iter().chain(m2) {
        add(&mut out, s.clone(), v / 2.0);
    }
    out
}

pub fn bel(m: &Bba, a: &Set) -> f64 {
    m.iter()
        .filter(|(x, _)| !x.is_empty() && x.is_subset(a))
        .map(|(_, v)| v)
        .sum()
}

pub fn pl(m: &Bba, a: &Set) -> f64 {
    m.iter()
        .filter(|(x, _)| !inter(x, a).is_empty())
        .map(|(_, v)| v)
        .sum()
}

pub fn commonality(m: &Bba, a: &Set) -> f64 {
    m.iter().filter(|(x, _)| a.is_subset(x)).map(|(_, v)| v).sum()
}

/// Every subset of `universe`, by bitmask enumeration.
pub fn subsets(universe: &Set) -> Vec<Set> {
    let items: Vec<u32> = universe.iter().copied().collect();
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, r)| *r)
                .collect()
        })
        .collect()
}

/// Cautious rule through commonalities and Möbius inversion.
pub fn cautious(m1: &Bba, m2: &Bba, model: &Model) -> Bba {
    let all = subsets(&model.ignorance());
    let q: BTreeMap<Set, f64> = all
        .iter()
        .map(|a| (a.clone(), commonality(m1, a).min(commonality(m2, a))))
        .collect();
    let mut out = Bba::new();
    for a in &all {
        let mut v = 0.0;
        for b in &all {
            if a.is_subset(b) {
                let sign = if (b.len() - a.len()) % 2 == 0 { 1.0 } else { -1.0 };
                v += sign * q[b];
            }
        }
        if v.abs() > 1e-15 {
            out.insert(a.clone(), v);
        }
    }
    out
}

/// Random model on `n` hypotheses: free, Shafer, or free with a random
/// selection of overlap regions removed.
pub fn random_model(rng: &mut ChaCha8Rng, n: usize) -> Model {
    match rng.gen_range(0..3) {
        0 => Model::free(n),
        1 => Model::shafer(n),
        _ => {
            let dead: Set = (1..1u32 << n)
                .filter(|r| r.count_ones() > 1 && rng.gen_bool(0.5))
                .collect();
            Model::free(n).without(&dead)
        }
    }
}

/// Random normal bba with 1 to 4 non-empty focals.
pub fn random_bba(rng: &mut ChaCha8Rng, model: &Model) -> Bba {
    let alive: Vec<u32> = model.alive.iter().copied().collect();
    let count = rng.gen_range(1..=4);
    let mut out = Bba::new();
    let mut weights = Vec::new();
    for _ in 0..count {
        let mut s = Set::new();
        while s.is_empty() {
            for r in &alive {
                if rng.gen_bool(0.4) {
                    s.insert(*r);
                }
            }
        }
        weights.push((s, rng.gen_range(0.05..1.0)));
    }
    let sum: f64 = weights.iter().map(|(_, w)| w).sum();
    for (s, w) in weights {
        add(&mut out, s, w / sum);
    }
    out
}

/// Random Bayesian bba on a Shafer model.
pub fn random_bayesian(rng: &mut ChaCha8Rng, model: &Model) -> Bba {
    let mut out = Bba::new();
    let weights: Vec<f64> = (0..model.n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = weights.iter().sum();
    for (i, w) in weights.iter().enumerate() {
        out.insert(model.label(i), w / sum);
    }
    out
}
