//! Frames of discernment and the Boolean algebra generated by their
//! hypotheses under union, intersection and complement.
//!
//! Every set is represented by the Venn-diagram regions (atoms) it covers.
//! Atom `k`, for `1 <= k < 2^n`, is the region lying inside exactly the
//! hypotheses whose bit is set in `k`; the empty region is never an atom.
//! A model declares some atoms empty: the free model keeps all of them,
//! Shafer's model keeps only the `n` exclusive ones, and hybrid models sit
//! in between. Because atoms are the minimal elements of the algebra,
//! emptiness, cardinality and all set operations are exact bit operations.
//!
//! Elements also keep the expression they were built from. Semantics never
//! depend on it, but the disjunctive form `u(.)` used by several
//! redistribution rules is defined on expressions.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Sub};
use std::sync::Arc;

use crate::error::{FusionError, Result};

/// Largest frame size supported by the 64-bit atom representation.
pub const MAX_LABELS: usize = 6;

/// Largest frame size for which the super-power set is enumerated.
pub const MAX_ENUMERABLE_LABELS: usize = 4;

/// A set of atoms, one bit per atom index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AtomSet(u64);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        AtomSet(bits & !1)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn atom(index: u32) -> Self {
        debug_assert!((1..64).contains(&index));
        AtomSet(1u64 << index)
    }

    /// Every atom of an `n`-hypothesis frame.
    pub fn universe(n: usize) -> Self {
        let count = 1u32 << n;
        if count >= 64 {
            AtomSet(!1)
        } else {
            AtomSet(((1u64 << count) - 1) & !1)
        }
    }

    /// Atoms lying inside hypothesis `label`.
    pub fn hypothesis(n: usize, label: usize) -> Self {
        let mut bits = 0u64;
        for k in 1u32..(1u32 << n) {
            if k & (1 << label) != 0 {
                bits |= 1u64 << k;
            }
        }
        AtomSet(bits)
    }

    /// Atoms lying inside every hypothesis of `labels` (a label bit mask).
    pub fn term(n: usize, labels: u32) -> Self {
        let mut bits = 0u64;
        for k in 1u32..(1u32 << n) {
            if k & labels == labels {
                bits |= 1u64 << k;
            }
        }
        AtomSet(bits)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, atom: u32) -> bool {
        self.0 & (1u64 << atom) != 0
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Atom indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let index = bits.trailing_zeros();
                bits &= bits - 1;
                Some(index)
            }
        })
    }

    /// Union of the hypothesis masks of the atoms.
    pub fn label_support(self) -> u32 {
        self.iter().fold(0, |acc, atom| acc | atom)
    }
}

impl BitOr for AtomSet {
    type Output = AtomSet;
    fn bitor(self, rhs: AtomSet) -> AtomSet {
        AtomSet(self.0 | rhs.0)
    }
}

impl BitAnd for AtomSet {
    type Output = AtomSet;
    fn bitand(self, rhs: AtomSet) -> AtomSet {
        AtomSet(self.0 & rhs.0)
    }
}

impl BitXor for AtomSet {
    type Output = AtomSet;
    fn bitxor(self, rhs: AtomSet) -> AtomSet {
        AtomSet(self.0 ^ rhs.0)
    }
}

impl Sub for AtomSet {
    type Output = AtomSet;
    fn sub(self, rhs: AtomSet) -> AtomSet {
        AtomSet(self.0 & !rhs.0)
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|a| format!("{a:b}")))
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Free,
    Shafer,
    Hybrid,
}

/// Which atoms a model declares empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelConstraints {
    pub empty_atoms: AtomSet,
    pub kind: ModelKind,
}

impl ModelConstraints {
    fn classify(n: usize, empty_atoms: AtomSet) -> Self {
        let kind = if empty_atoms.is_empty() {
            ModelKind::Free
        } else if empty_atoms == overlap_atoms(n) {
            ModelKind::Shafer
        } else {
            ModelKind::Hybrid
        };
        ModelConstraints { empty_atoms, kind }
    }
}

/// Atoms contained in two or more hypotheses.
fn overlap_atoms(n: usize) -> AtomSet {
    AtomSet::universe(n) - exclusive_atoms(n)
}

fn exclusive_atoms(n: usize) -> AtomSet {
    (0..n).fold(AtomSet::EMPTY, |acc, i| acc | AtomSet::atom(1 << i))
}

/// Set expression over the hypotheses of a frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Empty,
    Label(usize),
    Not(Arc<Expr>),
    And(Arc<Expr>, Arc<Expr>),
    Or(Arc<Expr>, Arc<Expr>),
    Xor(Arc<Expr>, Arc<Expr>),
}

impl Expr {
    /// Atoms of the expression under the free model.
    pub fn free_atoms(&self, n: usize) -> AtomSet {
        match self {
            Expr::Empty => AtomSet::EMPTY,
            Expr::Label(i) => AtomSet::hypothesis(n, *i),
            Expr::Not(e) => AtomSet::universe(n) - e.free_atoms(n),
            Expr::And(a, b) => a.free_atoms(n) & b.free_atoms(n),
            Expr::Or(a, b) => a.free_atoms(n) | b.free_atoms(n),
            Expr::Xor(a, b) => a.free_atoms(n) ^ b.free_atoms(n),
        }
    }

    /// Largest label index referenced, if any.
    fn max_label(&self) -> Option<usize> {
        match self {
            Expr::Empty => None,
            Expr::Label(i) => Some(*i),
            Expr::Not(e) => e.max_label(),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => {
                a.max_label().max(b.max_label())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) | Expr::Xor(..) => 1,
            Expr::And(..) => 2,
            _ => 3,
        }
    }

    /// Renders with the input grammar's operators, using `names` for labels.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut out = String::new();
        self.render_into(names, &mut out);
        out
    }

    fn render_into<S: AsRef<str>>(&self, names: &[S], out: &mut String) {
        let child = |e: &Expr, min: u8, out: &mut String| {
            if e.precedence() < min {
                out.push('(');
                e.render_into(names, out);
                out.push(')');
            } else {
                e.render_into(names, out);
            }
        };
        match self {
            Expr::Empty => out.push('∅'),
            Expr::Label(i) => out.push_str(names[*i].as_ref()),
            Expr::Not(e) => {
                out.push('~');
                child(e, 3, out);
            }
            Expr::And(a, b) => {
                child(a, 2, out);
                out.push('&');
                child(b, 3, out);
            }
            Expr::Or(a, b) | Expr::Xor(a, b) => {
                child(a, 1, out);
                out.push(if matches!(self, Expr::Or(..)) { '|' } else { '^' });
                child(b, 2, out);
            }
        }
    }
}

/// Parses the expression grammar
/// `expr := term (('|' | '^') term)*`, `term := factor ('&' factor)*`,
/// `factor := '~' factor | label | '(' expr ')'`.
///
/// `resolve` maps a label to its index; it lets the same grammar describe
/// source combinations in the mixed rule.
pub fn parse_expr(text: &str, resolve: impl Fn(&str) -> Option<usize>) -> Result<Expr> {
    let mut parser = Parser {
        text,
        pos: 0,
        resolve: &resolve,
    };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> FusionError {
        FusionError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op @ ('|' | '^')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '|' {
                Expr::Or(Arc::new(lhs), Arc::new(rhs))
            } else {
                Expr::Xor(Arc::new(lhs), Arc::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::And(Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(Expr::Not(Arc::new(self.factor()?)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_alphanumeric() => {
                let start = self.pos;
                while let Some(c) = self.text[self.pos..].chars().next() {
                    if c.is_alphanumeric() {
                        self.pos += c.len_utf8();
                    } else {
                        break;
                    }
                }
                let name = &self.text[start..self.pos];
                (self.resolve)(name)
                    .map(Expr::Label)
                    .ok_or_else(|| FusionError::UnknownLabel(name.to_string()))
            }
            Some(_) => Err(self.error("expected a label, `~` or `(`")),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

/// A member of the super-power set: an expression paired with its atoms.
///
/// Equality and hashing are semantic (the atom set under the model the
/// element was evaluated in).
#[derive(Clone)]
pub struct Element {
    expr: Arc<Expr>,
    free: AtomSet,
    atoms: AtomSet,
    n: u8,
}

impl Element {
    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Atoms under the model the element was evaluated in.
    pub fn atoms(&self) -> AtomSet {
        self.atoms
    }

    /// Atoms under the free model, i.e. the pure Boolean semantics of the
    /// expression.
    pub fn free_atoms(&self) -> AtomSet {
        self.free
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn labels(&self) -> usize {
        self.n as usize
    }

    /// Key under which mass functions store the element. Non-empty elements
    /// merge by their atoms; empty ones keep their free semantics so that the
    /// disjunctive forms needed by redistribution rules survive.
    pub fn key(&self) -> FocalKey {
        if self.atoms.is_empty() {
            FocalKey::Empty(self.free)
        } else {
            FocalKey::Set(self.atoms)
        }
    }

    pub fn is_subset(&self, other: &Element) -> bool {
        self.atoms.is_subset(other.atoms)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for Element {}

impl std::hash::Hash for Element {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.atoms.hash(state);
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n).map(|i| ((b'A' + i) as char).to_string()).collect();
        write!(f, "Element({} {:?})", self.expr.render(&names), self.atoms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FocalKey {
    Set(AtomSet),
    Empty(AtomSet),
}

/// A frame of discernment together with its model.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    labels: Arc<[String]>,
    model: ModelConstraints,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("labels", &self.labels)
            .field("model", &self.model.kind)
            .field("empty_atoms", &self.model.empty_atoms)
            .finish()
    }
}

impl Frame {
    /// Frame under the free model (no empty atoms).
    pub fn free<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        if labels.len() < 2 {
            return Err(FusionError::InvalidFrame(
                "at least two hypotheses are required".into(),
            ));
        }
        if labels.len() > MAX_LABELS {
            return Err(FusionError::FrameTooLarge {
                n: labels.len(),
                max: MAX_LABELS,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || !label.chars().all(char::is_alphanumeric) {
                return Err(FusionError::InvalidFrame(format!(
                    "label `{label}` is not alphanumeric"
                )));
            }
            if labels[..i].contains(label) {
                return Err(FusionError::InvalidFrame(format!("duplicate label `{label}`")));
            }
        }
        Ok(Frame {
            labels: labels.into(),
            model: ModelConstraints::classify(0, AtomSet::EMPTY),
        })
    }

    /// Frame under Shafer's model: hypotheses are exclusive.
    pub fn shafer<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let frame = Frame::free(labels)?;
        let overlaps = overlap_atoms(frame.n());
        frame.constrain_atoms(overlaps)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn model(&self) -> ModelConstraints {
        self.model
    }

    pub fn universe(&self) -> AtomSet {
        AtomSet::universe(self.n())
    }

    /// Atoms that the model keeps non-empty.
    pub fn surviving(&self) -> AtomSet {
        self.universe() - self.model.empty_atoms
    }

    /// Same hypotheses, possibly different model.
    pub fn same_labels(&self, other: &Frame) -> bool {
        self.labels == other.labels
    }

    /// Declares further atoms empty, producing a new frame. Constraints only
    /// accumulate.
    pub fn constrain_atoms(&self, atoms: AtomSet) -> Result<Frame> {
        let empty = self.model.empty_atoms | (atoms & self.universe());
        Ok(Frame {
            labels: self.labels.clone(),
            model: ModelConstraints::classify(self.n(), empty),
        })
    }

    /// Declares `element = ∅`: all of its free atoms become empty.
    pub fn constrain(&self, element: &Element) -> Result<Frame> {
        self.check(element)?;
        self.constrain_atoms(element.free)
    }

    /// A frame whose model is `model`, which must contain this frame's
    /// constraints.
    pub fn tightened_to(&self, model: &Frame) -> Result<Frame> {
        if !self.same_labels(model) {
            return Err(FusionError::FrameMismatch);
        }
        if !self.model.empty_atoms.is_subset(model.model.empty_atoms) {
            return Err(FusionError::NonMonotoneConstraint);
        }
        Ok(model.clone())
    }

    fn check(&self, element: &Element) -> Result<()> {
        if element.labels() == self.n() {
            Ok(())
        } else {
            Err(FusionError::FrameMismatch)
        }
    }

    /// Builds an element from an expression, evaluated under this model.
    pub fn element(&self, expr: Expr) -> Result<Element> {
        if let Some(max) = expr.max_label() {
            if max >= self.n() {
                return Err(FusionError::FrameMismatch);
            }
        }
        Ok(self.element_unchecked(Arc::new(expr)))
    }

    fn element_unchecked(&self, expr: Arc<Expr>) -> Element {
        let free = expr.free_atoms(self.n());
        Element {
            expr,
            free,
            atoms: free & self.surviving(),
            n: self.n() as u8,
        }
    }

    /// Parses an expression such as `A&(B|~C)` over this frame's labels.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let expr = parse_expr(text, |name| self.label_index(name))?;
        self.element(expr)
    }

    /// Re-evaluates an element under this frame's model.
    pub fn reevaluate(&self, element: &Element) -> Result<Element> {
        self.check(element)?;
        Ok(Element {
            expr: element.expr.clone(),
            free: element.free,
            atoms: element.free & self.surviving(),
            n: element.n,
        })
    }

    pub fn hypothesis(&self, index: usize) -> Element {
        assert!(index < self.n(), "hypothesis index out of range");
        self.element_unchecked(Arc::new(Expr::Label(index)))
    }

    pub fn label(&self, name: &str) -> Result<Element> {
        self.label_index(name)
            .map(|i| self.hypothesis(i))
            .ok_or_else(|| FusionError::UnknownLabel(name.to_string()))
    }

    pub fn empty_element(&self) -> Element {
        self.element_unchecked(Arc::new(Expr::Empty))
    }

    /// `I = θ1 ∪ … ∪ θn`.
    pub fn total_ignorance(&self) -> Element {
        self.union_of_labels((1u32 << self.n()) - 1)
    }

    /// Union of the hypotheses in a label bit mask.
    pub fn union_of_labels(&self, labels: u32) -> Element {
        let expr = (0..self.n())
            .filter(|i| labels & (1 << i) != 0)
            .map(Expr::Label)
            .reduce(|a, b| Expr::Or(Arc::new(a), Arc::new(b)))
            .unwrap_or(Expr::Empty);
        self.element_unchecked(Arc::new(expr))
    }

    /// An element with exactly the given atoms (restricted to the surviving
    /// ones), carrying a model-reduced expression.
    pub fn element_from_atoms(&self, atoms: AtomSet) -> Element {
        let target = atoms & self.surviving();
        let expr = reduce(target, self.surviving(), self.n());
        let element = self.element_unchecked(Arc::new(expr));
        debug_assert_eq!(element.atoms, target);
        element
    }

    pub fn union(&self, x: &Element, y: &Element) -> Result<Element> {
        self.binary(x, y, Expr::Or)
    }

    pub fn intersect(&self, x: &Element, y: &Element) -> Result<Element> {
        self.binary(x, y, Expr::And)
    }

    pub fn xor(&self, x: &Element, y: &Element) -> Result<Element> {
        self.binary(x, y, Expr::Xor)
    }

    /// Complement relative to the total ignorance.
    pub fn complement(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.element_unchecked(Arc::new(Expr::Not(x.expr.clone()))))
    }

    fn binary(
        &self,
        x: &Element,
        y: &Element,
        op: impl FnOnce(Arc<Expr>, Arc<Expr>) -> Expr,
    ) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.element_unchecked(Arc::new(op(x.expr.clone(), y.expr.clone()))))
    }

    /// Intersection carrying the canonical expression of the result; this is
    /// what the combination rules store.
    pub(crate) fn meet(&self, x: &Element, y: &Element) -> Element {
        self.canonical_from_free(x.free & y.free)
    }

    pub(crate) fn join(&self, x: &Element, y: &Element) -> Element {
        self.canonical_from_free(x.free | y.free)
    }

    pub(crate) fn symmetric_difference(&self, x: &Element, y: &Element) -> Element {
        self.canonical_from_free(x.free ^ y.free)
    }

    fn canonical_from_free(&self, free: AtomSet) -> Element {
        let expr = reduce(free, self.universe(), self.n());
        Element {
            expr: Arc::new(expr),
            free,
            atoms: free & self.surviving(),
            n: self.n() as u8,
        }
    }

    /// Absorption-reduced form `c(x)`: the same Boolean function written as
    /// its irredundant union of intersections (or the complement of one).
    pub fn canonical_form(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.canonical_from_free(x.free))
    }

    /// Disjunctive form `u(x)`: every connective replaced by union. A
    /// complemented sub-expression contributes the hypotheses covering the
    /// atoms of its complement.
    pub fn disjunctive_form(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.union_of_labels(self.support(&x.expr)))
    }

    /// `u(c(x))`, the redistribution target used for degenerate conflicts.
    pub fn reduced_disjunctive_form(&self, x: &Element) -> Element {
        let canonical = self.canonical_from_free(x.free);
        self.union_of_labels(self.support(&canonical.expr))
    }

    fn support(&self, expr: &Expr) -> u32 {
        match expr {
            Expr::Empty => 0,
            Expr::Label(i) => 1 << i,
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => {
                self.support(a) | self.support(b)
            }
            Expr::Not(e) => {
                let complement = self.surviving() - e.free_atoms(self.n());
                complement.label_support()
            }
        }
    }

    /// DSm cardinality: the number of surviving atoms inside `x`.
    pub fn cardinality(&self, x: &Element) -> usize {
        (x.free & self.surviving()).len()
    }

    /// `|x ∩ y| / |x ∪ y|`.
    pub fn degree_intersection(&self, x: &Element, y: &Element) -> Result<f64> {
        let (inter, union) = self.overlap_counts(x, y)?;
        Ok(inter as f64 / union as f64)
    }

    /// `(|x ∪ y| − |x ∩ y|) / |x ∪ y|`.
    pub fn degree_union(&self, x: &Element, y: &Element) -> Result<f64> {
        let (inter, union) = self.overlap_counts(x, y)?;
        Ok((union - inter) as f64 / union as f64)
    }

    fn overlap_counts(&self, x: &Element, y: &Element) -> Result<(usize, usize)> {
        self.check(x)?;
        self.check(y)?;
        let (x, y) = (x.free & self.surviving(), y.free & self.surviving());
        let union = (x | y).len();
        if union == 0 {
            return Err(FusionError::UndefinedDegree);
        }
        Ok(((x & y).len(), union))
    }

    /// `|x| / |y|` for `x ⊆ y`, with `d(∅ ⊆ ∅) = 1`.
    pub fn degree_inclusion(&self, x: &Element, y: &Element) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        let (x, y) = (x.free & self.surviving(), y.free & self.surviving());
        if !x.is_subset(y) {
            return Err(FusionError::NotSubset);
        }
        if y.is_empty() {
            return Ok(1.0);
        }
        Ok(x.len() as f64 / y.len() as f64)
    }

    /// All distinct elements of the super-power set under the model,
    /// starting with ∅.
    pub fn enumerate(&self) -> Result<Vec<Element>> {
        if self.n() > MAX_ENUMERABLE_LABELS {
            return Err(FusionError::FrameTooLarge {
                n: self.n(),
                max: MAX_ENUMERABLE_LABELS,
            });
        }
        let atoms: Vec<u32> = self.surviving().iter().collect();
        Ok((0u64..1 << atoms.len())
            .map(|mask| {
                let set = atoms
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .fold(AtomSet::EMPTY, |acc, (_, &a)| acc | AtomSet::atom(a));
                self.element_from_atoms(set)
            })
            .collect())
    }

    /// Model-reduced display form of an atom set.
    pub fn describe(&self, atoms: AtomSet) -> String {
        reduce(atoms & self.surviving(), self.surviving(), self.n()).render(&self.labels)
    }

    /// Display form of an element under this model.
    pub fn display(&self, x: &Element) -> String {
        self.describe(x.free)
    }

    /// Renders the element's own expression tree.
    pub fn render(&self, x: &Element) -> String {
        x.expr.render(&self.labels)
    }
}

/// Irredundant expression for `target` within the surviving atoms `surv`.
///
/// Prefers a union of intersections of hypotheses, then the complement of
/// one, then a union of minterms.
fn reduce(target: AtomSet, surv: AtomSet, n: usize) -> Expr {
    if target.is_empty() {
        return Expr::Empty;
    }
    if let Some(terms) = positive_cover(target, surv, n) {
        return terms_expr(&terms);
    }
    if let Some(terms) = positive_cover(surv - target, surv, n) {
        return Expr::Not(Arc::new(terms_expr(&terms)));
    }
    target
        .iter()
        .map(|atom| {
            (0..n)
                .map(|i| {
                    let label = Expr::Label(i);
                    if atom & (1 << i) != 0 {
                        label
                    } else {
                        Expr::Not(Arc::new(label))
                    }
                })
                .reduce(|a, b| Expr::And(Arc::new(a), Arc::new(b)))
                .expect("n >= 2")
        })
        .reduce(|a, b| Expr::Or(Arc::new(a), Arc::new(b)))
        .expect("target non-empty")
}

/// Label masks of an irredundant cover of `target` by intersection terms,
/// if `target` is expressible without complements.
fn positive_cover(target: AtomSet, surv: AtomSet, n: usize) -> Option<Vec<u32>> {
    if target.is_empty() {
        return None;
    }
    let candidates: Vec<(u32, AtomSet)> = (1u32..1 << n)
        .filter_map(|labels| {
            let atoms = AtomSet::term(n, labels) & surv;
            (!atoms.is_empty() && atoms.is_subset(target)).then_some((labels, atoms))
        })
        .collect();
    // Prime terms: no candidate with a strict subset of the labels.
    let mut primes: Vec<(u32, AtomSet)> = candidates
        .iter()
        .filter(|(labels, _)| {
            !candidates
                .iter()
                .any(|(other, _)| other != labels && other & labels == *other)
        })
        .copied()
        .collect();
    let cover = primes.iter().fold(AtomSet::EMPTY, |acc, (_, a)| acc | *a);
    if cover != target {
        return None;
    }
    primes.sort_by_key(|(labels, _)| (std::cmp::Reverse(labels.count_ones()), *labels));
    let mut i = 0;
    while i < primes.len() {
        let rest = primes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(AtomSet::EMPTY, |acc, (_, (_, a))| acc | *a);
        if rest == target {
            primes.remove(i);
        } else {
            i += 1;
        }
    }
    let mut terms: Vec<u32> = primes.into_iter().map(|(labels, _)| labels).collect();
    terms.sort_by_key(|labels| (labels.count_ones(), *labels));
    Some(terms)
}

fn terms_expr(terms: &[u32]) -> Expr {
    terms
        .iter()
        .map(|&labels| {
            (0..32)
                .filter(|i| labels & (1 << i) != 0)
                .map(|i| Expr::Label(i as usize))
                .reduce(|a, b| Expr::And(Arc::new(a), Arc::new(b)))
                .expect("non-empty term")
        })
        .reduce(|a, b| Expr::Or(Arc::new(a), Arc::new(b)))
        .expect("non-empty cover")
}
