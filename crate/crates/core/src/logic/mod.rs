//! TFU Boolean algebra.
//!
//! A proposition is manifestly true (`T`), manifestly false (`F`) or
//! undecidable (`U`). The values of individual propositions do not determine
//! the value of their conjunction when both are undecidable; what does is the
//! table of TFU values over the complete states, from which the values of the
//! parts (and the implications between them) can be read back.

mod formula;

use std::fmt;

use thiserror::Error;

pub use formula::{Formula, FormulaParseError};

/// Largest proposition count accepted by [`CompleteStateTable`].
pub const MAX_PROPOSITIONS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("proposition count {0} is out of range (1..={MAX_PROPOSITIONS})")]
    PropositionCount(usize),
    #[error("table for {n} propositions needs {expected} entries, got {got}")]
    TableSize { n: usize, expected: usize, got: usize },
    #[error("more than one complete state is manifestly true: {}", states.join(", "))]
    SeveralTrue { states: Vec<String> },
    #[error("every complete state is manifestly false: {}", states.join(", "))]
    AllFalse { states: Vec<String> },
    #[error("proposition {index} is out of range for {n} propositions")]
    UnknownProposition { index: usize, n: usize },
    #[error("table is inconsistent: proposition {0} is both manifestly true and manifestly false")]
    Inconsistent(PropositionId),
    #[error("unrecognised TFU value {0:?}")]
    BadValue(String),
}

/// Three-valued truth tag. There is deliberately no conversion to `bool`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TfuValue {
    ManifestlyTrue,
    ManifestlyFalse,
    Undecidable,
}

impl TfuValue {
    pub const ALL: [TfuValue; 3] = [TfuValue::ManifestlyTrue, TfuValue::ManifestlyFalse, TfuValue::Undecidable];

    pub fn symbol(self) -> char {
        match self {
            TfuValue::ManifestlyTrue => 'T',
            TfuValue::ManifestlyFalse => 'F',
            TfuValue::Undecidable => 'U',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'T' | 't' => Some(TfuValue::ManifestlyTrue),
            'F' | 'f' => Some(TfuValue::ManifestlyFalse),
            'U' | 'u' => Some(TfuValue::Undecidable),
            _ => None,
        }
    }

    pub fn is_decided(self) -> bool {
        self != TfuValue::Undecidable
    }
}

impl fmt::Display for TfuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl std::str::FromStr for TfuValue {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => TfuValue::from_symbol(c).ok_or_else(|| LogicError::BadValue(s.into())),
            _ => Err(LogicError::BadValue(s.into())),
        }
    }
}

impl std::ops::Not for TfuValue {
    type Output = TfuValue;

    fn not(self) -> TfuValue {
        negate(self)
    }
}

/// Outcome of conjoining two bare TFU values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conjunction {
    Determinate(TfuValue),
    /// `U ∧ U`: either undecidable or manifestly false, depending on the
    /// semantic relation between the two propositions. Resolve it with
    /// [`CompleteStateTable::resolve_conjunction`].
    Ambiguous,
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjunction::Determinate(v) => write!(f, "{v}"),
            Conjunction::Ambiguous => f.write_str("U/F"),
        }
    }
}

pub fn negate(v: TfuValue) -> TfuValue {
    match v {
        TfuValue::ManifestlyTrue => TfuValue::ManifestlyFalse,
        TfuValue::ManifestlyFalse => TfuValue::ManifestlyTrue,
        TfuValue::Undecidable => TfuValue::Undecidable,
    }
}

pub fn conjoin(a: TfuValue, b: TfuValue) -> Conjunction {
    use TfuValue::*;
    match (a, b) {
        (ManifestlyFalse, _) | (_, ManifestlyFalse) => Conjunction::Determinate(ManifestlyFalse),
        (ManifestlyTrue, ManifestlyTrue) => Conjunction::Determinate(ManifestlyTrue),
        (ManifestlyTrue, Undecidable) | (Undecidable, ManifestlyTrue) => Conjunction::Determinate(Undecidable),
        (Undecidable, Undecidable) => Conjunction::Ambiguous,
    }
}

/// Dense index of a proposition within a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropositionId(pub usize);

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// A conjunction of every proposition or its negation.
///
/// States are indexed big-endian: proposition 0 is the most significant bit
/// and an affirmative polarity is bit 0. For `n = 2` the order is
/// `pq, p¬q, ¬pq, ¬p¬q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompleteState {
    n: usize,
    index: usize,
}

impl CompleteState {
    pub fn new(n: usize, index: usize) -> Self {
        assert!(index < 1 << n, "complete state index {index} out of range for n={n}");
        CompleteState { n, index }
    }

    pub fn all(n: usize) -> impl Iterator<Item = CompleteState> {
        (0..1usize << n).map(move |index| CompleteState { n, index })
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn len(self) -> usize {
        self.n
    }

    pub fn is_empty(self) -> bool {
        self.n == 0
    }

    pub fn is_affirmative(self, p: PropositionId) -> bool {
        affirmative_in(self.n, self.index, p.0)
    }

    /// The same state with the polarity of `p` flipped.
    pub fn flip(self, p: PropositionId) -> Self {
        CompleteState { n: self.n, index: self.index ^ (1 << (self.n - 1 - p.0)) }
    }

    /// Label using the given proposition names, e.g. `p¬q`.
    pub fn label_with(self, names: &[String]) -> String {
        let mut out = String::new();
        for (k, name) in names.iter().enumerate().take(self.n) {
            if !self.is_affirmative(PropositionId(k)) {
                out.push('¬');
            }
            out.push_str(name);
        }
        out
    }
}

impl fmt::Display for CompleteState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.n).map(|k| format!("p{k}")).collect();
        f.write_str(&self.label_with(&names))
    }
}

#[inline]
pub(crate) fn affirmative_in(n: usize, index: usize, p: usize) -> bool {
    (index >> (n - 1 - p)) & 1 == 0
}

/// TFU values of the `2^n` complete states of `n` propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompleteStateTable {
    n: usize,
    values: Vec<TfuValue>,
}

impl CompleteStateTable {
    /// Validates that at most one complete state is `T` (two distinct complete
    /// states are mutually contradictory) and that not every state is `F`
    /// (their disjunction is a tautology).
    pub fn new(n: usize, values: Vec<TfuValue>) -> Result<Self, LogicError> {
        if n == 0 || n > MAX_PROPOSITIONS {
            return Err(LogicError::PropositionCount(n));
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(LogicError::TableSize { n, expected, got: values.len() });
        }
        let label = |i: usize| CompleteState::new(n, i).to_string();
        let trues: Vec<String> =
            values.iter().enumerate().filter(|(_, v)| **v == TfuValue::ManifestlyTrue).map(|(i, _)| label(i)).collect();
        if trues.len() > 1 {
            return Err(LogicError::SeveralTrue { states: trues });
        }
        if values.iter().all(|v| *v == TfuValue::ManifestlyFalse) {
            return Err(LogicError::AllFalse { states: (0..expected).map(label).collect() });
        }
        Ok(CompleteStateTable { n, values })
    }

    /// Parses one `T`/`F`/`U` symbol per complete state, e.g. `"FUUU"`.
    pub fn parse(n: usize, symbols: &str) -> Result<Self, LogicError> {
        let values = symbols
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| TfuValue::from_symbol(c).ok_or_else(|| LogicError::BadValue(c.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, values)
    }

    pub fn propositions(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[TfuValue] {
        &self.values
    }

    pub fn value(&self, state: CompleteState) -> TfuValue {
        self.values[state.index()]
    }

    pub fn states(&self) -> impl Iterator<Item = (CompleteState, TfuValue)> + '_ {
        CompleteState::all(self.n).zip(self.values.iter().copied())
    }

    fn check(&self, p: PropositionId) -> Result<(), LogicError> {
        if p.0 >= self.n {
            Err(LogicError::UnknownProposition { index: p.0, n: self.n })
        } else {
            Ok(())
        }
    }

    /// The table seen from `¬p`: every state has the polarity of `p` flipped.
    pub fn with_negated(&self, p: PropositionId) -> Result<Self, LogicError> {
        self.check(p)?;
        let values = CompleteState::all(self.n).map(|s| self.values[s.flip(p).index()]).collect();
        Ok(CompleteStateTable { n: self.n, values })
    }

    /// TFU value of an arbitrary formula: `F` when every complete state
    /// satisfying it is `F`, `T` when every complete state falsifying it is
    /// `F`, otherwise `U`.
    pub fn evaluate(&self, formula: &Formula) -> Result<TfuValue, LogicError> {
        if let Some(max) = formula.max_proposition() {
            self.check(max)?;
        }
        let mut false_when_true = true;
        let mut false_when_false = true;
        for (state, value) in self.states() {
            let is_false = value == TfuValue::ManifestlyFalse;
            if formula.holds_in(state) {
                false_when_true &= is_false;
            } else {
                false_when_false &= is_false;
            }
        }
        match (false_when_true, false_when_false) {
            (true, true) => Err(LogicError::Inconsistent(formula.max_proposition().unwrap_or(PropositionId(0)))),
            (true, false) => Ok(TfuValue::ManifestlyFalse),
            (false, true) => Ok(TfuValue::ManifestlyTrue),
            (false, false) => Ok(TfuValue::Undecidable),
        }
    }

    /// Value of `p ∧ q` in the context of this table; this settles the
    /// ambiguous `U ∧ U` cell of [`conjoin`].
    pub fn resolve_conjunction(&self, p: PropositionId, q: PropositionId) -> Result<TfuValue, LogicError> {
        self.check(p)?;
        self.check(q)?;
        self.evaluate(&Formula::and(Formula::var(p), Formula::var(q)))
    }

    /// Pairwise marginal of `p` and `q`: a cell is `F` iff every complete
    /// state refining it is `F`, `T` if any refinement is `T`, otherwise `U`.
    /// Cells are ordered `pq, p¬q, ¬pq, ¬p¬q`.
    pub fn pair_marginal(&self, p: PropositionId, q: PropositionId) -> Result<[TfuValue; 4], LogicError> {
        self.check(p)?;
        self.check(q)?;
        let mut all_false = [true; 4];
        let mut any_true = [false; 4];
        for (state, value) in self.states() {
            let cell = (usize::from(!state.is_affirmative(p)) << 1) | usize::from(!state.is_affirmative(q));
            all_false[cell] &= value == TfuValue::ManifestlyFalse;
            any_true[cell] |= value == TfuValue::ManifestlyTrue;
        }
        Ok(std::array::from_fn(|c| {
            if all_false[c] {
                TfuValue::ManifestlyFalse
            } else if any_true[c] {
                TfuValue::ManifestlyTrue
            } else {
                TfuValue::Undecidable
            }
        }))
    }
}

/// Rules I and II: `p` is `F` iff every complete state containing `p`
/// affirmatively is `F`; `p` is `T` iff every complete state containing `p`
/// negatively is `F`; otherwise `U`.
pub fn derive_value(p: PropositionId, table: &CompleteStateTable) -> Result<TfuValue, LogicError> {
    table.check(p)?;
    let mut affirmative_all_false = true;
    let mut negative_all_false = true;
    for (state, value) in table.states() {
        let is_false = value == TfuValue::ManifestlyFalse;
        if state.is_affirmative(p) {
            affirmative_all_false &= is_false;
        } else {
            negative_all_false &= is_false;
        }
    }
    match (affirmative_all_false, negative_all_false) {
        (true, true) => Err(LogicError::Inconsistent(p)),
        (true, false) => Ok(TfuValue::ManifestlyFalse),
        (false, true) => Ok(TfuValue::ManifestlyTrue),
        (false, false) => Ok(TfuValue::Undecidable),
    }
}

/// A literal: a proposition in affirmative or negated form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub proposition: PropositionId,
    pub negated: bool,
}

impl Literal {
    pub fn pos(p: PropositionId) -> Self {
        Literal { proposition: p, negated: false }
    }

    pub fn neg(p: PropositionId) -> Self {
        Literal { proposition: p, negated: true }
    }

    pub fn label_with(&self, names: &[String]) -> String {
        let name = names.get(self.proposition.0).cloned().unwrap_or_else(|| self.proposition.to_string());
        if self.negated {
            format!("¬{name}")
        } else {
            name
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("¬")?;
        }
        write!(f, "{}", self.proposition)
    }
}

/// A semantic implication `antecedent ⟹ consequent` between two undecidable
/// propositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implication {
    pub antecedent: Literal,
    pub consequent: Literal,
}

impl Implication {
    pub fn label_with(&self, names: &[String]) -> String {
        format!("{} ⟹ {}", self.antecedent.label_with(names), self.consequent.label_with(names))
    }
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⟹ {}", self.antecedent, self.consequent)
    }
}

/// Implications encoded by manifestly false conjunction cells of pairs of
/// undecidable propositions.
///
/// For every pair `p < q` that are both `U`, each `F` cell of the pairwise
/// marginal excludes one polarity combination: `p∧q = F` gives `p ⟹ ¬q`,
/// `p∧¬q = F` gives `p ⟹ q`, `¬p∧q = F` gives `¬p ⟹ ¬q` and `¬p∧¬q = F`
/// gives `¬p ⟹ q`. Pairs where either side is decided are skipped; their
/// relations are already carried by [`derive_value`].
pub fn detect_nexus(table: &CompleteStateTable) -> Result<Vec<Implication>, LogicError> {
    let n = table.propositions();
    let derived = (0..n).map(|k| derive_value(PropositionId(k), table)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if derived[i] != TfuValue::Undecidable || derived[j] != TfuValue::Undecidable {
                continue;
            }
            let (p, q) = (PropositionId(i), PropositionId(j));
            let cells = table.pair_marginal(p, q)?;
            for (cell, value) in cells.iter().enumerate() {
                if *value != TfuValue::ManifestlyFalse {
                    continue;
                }
                let p_negated = cell & 0b10 != 0;
                let q_negated = cell & 0b01 != 0;
                // excluded: (p_negated, q_negated); so p-literal implies the opposite q-literal
                out.push(Implication {
                    antecedent: Literal { proposition: p, negated: p_negated },
                    consequent: Literal { proposition: q, negated: !q_negated },
                });
            }
        }
    }
    Ok(out)
}
