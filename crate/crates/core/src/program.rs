//! Ground disjunctive rules and programs.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::atoms::{AtomId, AtomSet, SymbolTable};

/// `h1 | ... | hk :- p1, ..., pm, not n1, ..., not nj.`
///
/// Each part is a set. Atoms are kept in the order they were first given so
/// that rendering reproduces the source text; duplicates within a part are
/// dropped on construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rule {
    head: Vec<AtomId>,
    pos: Vec<AtomId>,
    neg: Vec<AtomId>,
}

fn dedup_in_order(atoms: impl IntoIterator<Item = AtomId>) -> Vec<AtomId> {
    let mut seen = AtomSet::new();
    atoms.into_iter().filter(|&a| seen.insert(a)).collect()
}

impl Rule {
    pub fn new(
        head: impl IntoIterator<Item = AtomId>,
        body_pos: impl IntoIterator<Item = AtomId>,
        body_neg: impl IntoIterator<Item = AtomId>,
    ) -> Self {
        Rule {
            head: dedup_in_order(head),
            pos: dedup_in_order(body_pos),
            neg: dedup_in_order(body_neg),
        }
    }

    pub fn head(&self) -> &[AtomId] {
        &self.head
    }

    pub fn body_pos(&self) -> &[AtomId] {
        &self.pos
    }

    pub fn body_neg(&self) -> &[AtomId] {
        &self.neg
    }

    pub fn is_integrity(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_disjunctive(&self) -> bool {
        self.head.len() > 1
    }

    pub fn has_negation(&self) -> bool {
        !self.neg.is_empty()
    }

    /// head ∪ body⁺ ∪ body⁻
    pub fn atoms(&self) -> AtomSet {
        self.head
            .iter()
            .chain(&self.pos)
            .chain(&self.neg)
            .copied()
            .collect()
    }

    /// Keep only the atoms accepted by `keep` in each part.
    pub(crate) fn retain(&self, mut keep_head: impl FnMut(AtomId) -> bool, mut keep_pos: impl FnMut(AtomId) -> bool, mut keep_neg: impl FnMut(AtomId) -> bool) -> Rule {
        Rule {
            head: self.head.iter().copied().filter(|&a| keep_head(a)).collect(),
            pos: self.pos.iter().copied().filter(|&a| keep_pos(a)).collect(),
            neg: self.neg.iter().copied().filter(|&a| keep_neg(a)).collect(),
        }
    }
}

/// Bitset views of one rule, cached by [`Program`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSets {
    pub head: AtomSet,
    pub pos: AtomSet,
    pub neg: AtomSet,
    /// body⁺ ∪ body⁻
    pub body: AtomSet,
    /// head ∪ body
    pub atoms: AtomSet,
}

impl RuleSets {
    fn of(rule: &Rule) -> Self {
        let head: AtomSet = rule.head.iter().copied().collect();
        let pos: AtomSet = rule.pos.iter().copied().collect();
        let neg: AtomSet = rule.neg.iter().copied().collect();
        let body = pos.union(&neg);
        let atoms = body.union(&head);
        RuleSets { head, pos, neg, body, atoms }
    }
}

/// An ordered list of rules over a shared symbol table.
///
/// Subprograms produced by `bottom`, `reduce` and `reduct` share the parent's
/// table, so atom ids stay comparable across all of them. Rule order is
/// significant; user-facing rule numbers are 1-based.
#[derive(Clone)]
pub struct Program {
    symbols: Arc<SymbolTable>,
    rules: Vec<Rule>,
    sets: Vec<RuleSets>,
    lett: AtomSet,
}

impl Program {
    /// Panics if a rule mentions an id outside `symbols`.
    pub fn new(symbols: Arc<SymbolTable>, rules: Vec<Rule>) -> Self {
        let sets: Vec<RuleSets> = rules.iter().map(RuleSets::of).collect();
        let mut lett = AtomSet::new();
        for s in &sets {
            lett.union_with(&s.atoms);
        }
        if let Some(max) = lett.iter().last() {
            assert!(max.index() < symbols.len(), "atom {max:?} not in symbol table");
        }
        Program { symbols, rules, sets, lett }
    }

    pub fn empty(symbols: Arc<SymbolTable>) -> Self {
        Program::new(symbols, Vec::new())
    }

    /// A program over the same symbol table with different rules.
    pub fn with_rules(&self, rules: Vec<Rule>) -> Program {
        Program::new(Arc::clone(&self.symbols), rules)
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn shared_symbols(&self) -> &Arc<SymbolTable> {
        &self.symbols
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> &Rule {
        &self.rules[i]
    }

    pub fn rule_sets(&self, i: usize) -> &RuleSets {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[RuleSets] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Lett(P): every atom occurring in some rule.
    pub fn atoms(&self) -> &AtomSet {
        &self.lett
    }

    pub fn has_negation(&self) -> bool {
        self.rules.iter().any(Rule::has_negation)
    }

    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.symbols.get(name).filter(|a| self.lett.contains(*a))
    }

    /// Resolve names to a set, failing on the first name that does not occur
    /// in the program.
    pub fn atom_set<'n>(&self, names: impl IntoIterator<Item = &'n str>) -> Result<AtomSet, &'n str> {
        names
            .into_iter()
            .map(|n| self.atom(n).ok_or(n))
            .collect()
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
            && (Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols == other.symbols)
    }
}

impl Eq for Program {}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::render_program(self))
    }
}

/// atoms_of_rule
pub fn atoms_of_rule(r: &Rule) -> AtomSet {
    r.atoms()
}
