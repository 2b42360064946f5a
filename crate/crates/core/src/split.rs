//! Splitting sets, generalized splitting sets, and the uniform-cost search
//! for a smallest nontrivial splitting set.
//!
//! Search states are atom sets that are unions of trees of the
//! super-dependency graph. The empty initial state branches into the
//! sources; every other state has at most one child, obtained by uniting it
//! with `tree(r)` for the lowest rule `r` that has a head atom inside the
//! state but some atom outside it. A state with no such rule is a splitting
//! set. The cost of a step is the number of atoms it adds, so a path's cost
//! is the size of its final state and the first goal popped is a smallest
//! one.

use alloc::boxed::Box;
use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt::{self, Write as _};

use crate::atoms::{AtomId, AtomSet, SymbolTable};
use crate::graph::{is_hcf, SccId, SuperDepGraph};
use crate::program::Program;
use crate::text::format_atoms;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("atom #{} does not occur in the program", .0 .0)]
    UnknownAtom(AtomId),
    #[error("the set of required atoms is empty")]
    EmptyRequirement,
    #[error("goal predicate failed: {0}")]
    Goal(String),
}

pub(crate) fn check_known(p: &Program, u: &AtomSet) -> Result<(), SplitError> {
    match u.difference(p.atoms()).first() {
        Some(a) => Err(SplitError::UnknownAtom(a)),
        None => Ok(()),
    }
}

/// Lowest rule with a head atom in `u` but some atom outside it.
pub fn violating_rule(p: &Program, u: &AtomSet) -> Option<usize> {
    p.sets()
        .iter()
        .position(|r| r.head.intersects(u) && !r.atoms.is_subset(u))
}

pub(crate) fn splits(p: &Program, u: &AtomSet) -> bool {
    violating_rule(p, u).is_none()
}

pub(crate) fn g_splits(p: &Program, u: &AtomSet) -> bool {
    p.sets()
        .iter()
        .all(|r| !r.head.intersects(u) || r.body.is_subset(u))
}

/// Every rule with a head atom in `u` has all of its atoms in `u`.
pub fn is_splitting_set(p: &Program, u: &AtomSet) -> Result<bool, SplitError> {
    check_known(p, u)?;
    Ok(splits(p, u))
}

/// Every rule with a head atom in `u` has all of its body atoms in `u`.
pub fn is_g_splitting_set(p: &Program, u: &AtomSet) -> Result<bool, SplitError> {
    check_known(p, u)?;
    Ok(g_splits(p, u))
}

/// 0-based indices of the rules whose atoms all lie in `u`.
pub fn bottom_rules(p: &Program, u: &AtomSet) -> Vec<usize> {
    (0..p.len()).filter(|&i| p.rule_sets(i).atoms.is_subset(u)).collect()
}

/// The rules whose atoms all lie in `u`, in their original order.
pub fn bottom(p: &Program, u: &AtomSet) -> Program {
    p.with_rules(bottom_rules(p, u).into_iter().map(|i| p.rule(i).clone()).collect())
}

/// How the search reached a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Initial,
    Source(SccId),
    /// Closure of the atoms a `MustContain` goal asks for.
    Required,
    /// 0-based rule index.
    Rule(usize),
    /// A splitting set rejected by the goal grew by one more component.
    Extend(SccId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    atoms: AtomSet,
    sccs: Vec<SccId>,
    path_cost: usize,
    depth: usize,
    step: Step,
}

impl SearchState {
    fn new(sg: &SuperDepGraph, atoms: AtomSet, path_cost: usize, depth: usize, step: Step) -> Self {
        let sccs = sg.components_within(&atoms);
        SearchState { atoms, sccs, path_cost, depth, step }
    }

    pub fn initial() -> Self {
        SearchState { atoms: AtomSet::new(), sccs: Vec::new(), path_cost: 0, depth: 0, step: Step::Initial }
    }

    /// The state for a single source component.
    pub fn from_source(sg: &SuperDepGraph, c: SccId) -> Self {
        let atoms = sg.tree_of_scc(c).clone();
        let cost = atoms.len();
        SearchState::new(sg, atoms, cost, 1, Step::Source(c))
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn sccs(&self) -> &[SccId] {
        &self.sccs
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn path_cost(&self) -> usize {
        self.path_cost
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn step(&self) -> Step {
        self.step
    }

    pub fn is_initial(&self) -> bool {
        self.step == Step::Initial
    }
}

/// The single child of a non-initial state, or `None` when the state is
/// already a splitting set.
pub fn successor(p: &Program, sg: &SuperDepGraph, s: &SearchState) -> Option<SearchState> {
    debug_assert!(!s.is_initial());
    let r = violating_rule(p, &s.atoms)?;
    let mut atoms = s.atoms.clone();
    sg.extend_tree(&mut atoms, &p.rule_sets(r).atoms);
    let added = atoms.len() - s.atoms.len();
    Some(SearchState::new(sg, atoms, s.path_cost + added, s.depth + 1, Step::Rule(r)))
}

pub type GoalPredicate = dyn Fn(&Program, &AtomSet) -> Result<bool, String> + Send + Sync;

/// The property a splitting set must have to end the search.
pub enum SplitGoal {
    /// Any nonempty splitting set; the search returns a smallest one.
    NonEmpty,
    MustContain(AtomSet),
    /// The bottom program is head-cycle-free.
    BottomIsHcf,
    /// The bottom program has at most this many rules.
    BottomRulesAtMost(usize),
    Custom(Box<GoalPredicate>),
}

impl fmt::Debug for SplitGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitGoal::NonEmpty => f.write_str("NonEmpty"),
            SplitGoal::MustContain(a) => f.debug_tuple("MustContain").field(a).finish(),
            SplitGoal::BottomIsHcf => f.write_str("BottomIsHcf"),
            SplitGoal::BottomRulesAtMost(n) => f.debug_tuple("BottomRulesAtMost").field(n).finish(),
            SplitGoal::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl SplitGoal {
    /// Checks the goal's own property; `u` is already known to split `p`.
    pub fn accepts(&self, p: &Program, u: &AtomSet) -> Result<bool, SplitError> {
        Ok(match self {
            SplitGoal::NonEmpty => !u.is_empty(),
            SplitGoal::MustContain(req) => req.is_subset(u),
            SplitGoal::BottomIsHcf => {
                let b = bottom(p, u);
                is_hcf(&b, &SuperDepGraph::of_program(&b))
            }
            SplitGoal::BottomRulesAtMost(n) => bottom_rules(p, u).len() <= *n,
            SplitGoal::Custom(pred) => pred(p, u).map_err(SplitError::Goal)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Expand { atoms: AtomSet, cost: usize, step: Step },
    Generate { atoms: AtomSet, cost: usize, step: Step },
    Goal { atoms: AtomSet, cost: usize },
    /// A splitting set the goal predicate turned down.
    Reject { atoms: AtomSet, cost: usize },
}

/// The expansion log of one search, in the order things happened.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub events: Vec<TraceEvent>,
}

struct StepDisplay(Step);

impl fmt::Display for StepDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Step::Initial => f.write_str("initial"),
            Step::Source(_) => f.write_str("via source"),
            Step::Required => f.write_str("via require"),
            Step::Rule(r) => write!(f, "via rule {}", r + 1),
            Step::Extend(_) => f.write_str("via extend"),
        }
    }
}

impl SearchTrace {
    /// One line per event; generated children are indented under the
    /// expansion that produced them.
    pub fn render(&self, symbols: &SymbolTable) -> String {
        let mut out = String::new();
        for e in &self.events {
            let _ = match e {
                TraceEvent::Expand { atoms, cost, step } => {
                    writeln!(out, "expand {} cost={} {}", format_atoms(symbols, atoms), cost, StepDisplay(*step))
                }
                TraceEvent::Generate { atoms, cost, step } => {
                    writeln!(out, "  generate {} cost={} {}", format_atoms(symbols, atoms), cost, StepDisplay(*step))
                }
                TraceEvent::Goal { atoms, cost } => {
                    writeln!(out, "  goal {} size={}", format_atoms(symbols, atoms), cost)
                }
                TraceEvent::Reject { atoms, cost } => {
                    writeln!(out, "  reject {} size={}", format_atoms(symbols, atoms), cost)
                }
            };
        }
        out
    }

    pub fn expansions(&self) -> impl Iterator<Item = (&AtomSet, usize)> {
        self.events.iter().filter_map(|e| match e {
            TraceEvent::Expand { atoms, cost, .. } => Some((atoms, *cost)),
            _ => None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub found: Option<SearchState>,
    pub trace: SearchTrace,
    /// Expanded states, the initial one included.
    pub expansions: usize,
    /// Deepest state expanded (sources are depth 1).
    pub max_depth: usize,
}

/// Lowest component outside `atoms` whose predecessors all lie inside it.
fn next_component(sg: &SuperDepGraph, atoms: &AtomSet) -> Option<SccId> {
    sg.ids().find(|&c| {
        !sg.atoms(c).is_subset(atoms)
            && sg.predecessors(c).iter().all(|&q| sg.atoms(q).is_subset(atoms))
    })
}

type Frontier = BinaryHeap<(Reverse<usize>, usize)>;

fn push(nodes: &mut Vec<SearchState>, frontier: &mut Frontier, trace: &mut SearchTrace, s: SearchState) {
    trace.events.push(TraceEvent::Generate { atoms: s.atoms.clone(), cost: s.path_cost, step: s.step });
    frontier.push((Reverse(s.path_cost), nodes.len()));
    nodes.push(s);
}

/// Uniform-cost search over `sg`.
///
/// Ties on path cost go to the most recently generated state. A splitting
/// set rejected by `goal` is grown by the lowest component it could absorb
/// and the chain carries on, so the search fails only once the whole of
/// Lett(P) has been rejected.
pub fn search(p: &Program, sg: &SuperDepGraph, goal: &SplitGoal) -> Result<SearchOutcome, SplitError> {
    if let SplitGoal::MustContain(req) = goal {
        check_known(p, req)?;
        if req.is_empty() {
            return Err(SplitError::EmptyRequirement);
        }
    }

    let mut trace = SearchTrace::default();
    let mut nodes: Vec<SearchState> = Vec::new();
    let mut frontier = Frontier::new();
    let mut closed: BTreeSet<AtomSet> = BTreeSet::new();

    trace.events.push(TraceEvent::Expand { atoms: AtomSet::new(), cost: 0, step: Step::Initial });
    let mut expansions = 1;
    let mut max_depth = 0;
    match goal {
        SplitGoal::MustContain(req) => {
            let atoms = sg.tree_of(req).map_err(|_| SplitError::UnknownAtom(req.first().unwrap()))?;
            let cost = atoms.len();
            push(&mut nodes, &mut frontier, &mut trace, SearchState::new(sg, atoms, cost, 1, Step::Required));
        }
        _ => {
            for &c in sg.sources() {
                push(&mut nodes, &mut frontier, &mut trace, SearchState::from_source(sg, c));
            }
        }
    }

    while let Some((_, id)) = frontier.pop() {
        let state = &nodes[id];
        if !closed.insert(state.atoms.clone()) {
            continue;
        }
        expansions += 1;
        max_depth = max_depth.max(state.depth);
        trace.events.push(TraceEvent::Expand { atoms: state.atoms.clone(), cost: state.path_cost, step: state.step });
        let child = match successor(p, sg, state) {
            Some(child) => child,
            None => {
                if goal.accepts(p, &state.atoms)? {
                    trace.events.push(TraceEvent::Goal { atoms: state.atoms.clone(), cost: state.path_cost });
                    let found = nodes.swap_remove(id);
                    return Ok(SearchOutcome { found: Some(found), trace, expansions, max_depth });
                }
                trace.events.push(TraceEvent::Reject { atoms: state.atoms.clone(), cost: state.path_cost });
                let Some(c) = next_component(sg, &state.atoms) else {
                    continue;
                };
                let atoms = state.atoms.union(sg.atoms(c));
                let cost = state.path_cost + sg.atoms(c).len();
                SearchState::new(sg, atoms, cost, state.depth + 1, Step::Extend(c))
            }
        };
        push(&mut nodes, &mut frontier, &mut trace, child);
    }
    Ok(SearchOutcome { found: None, trace, expansions, max_depth })
}

/// A smallest nonempty splitting set of `p` with the property `goal`, or
/// `None` when no splitting set the search reaches qualifies.
pub fn min_splitting_set(p: &Program, goal: &SplitGoal) -> Result<Option<AtomSet>, SplitError> {
    let sg = SuperDepGraph::of_program(p);
    Ok(search(p, &sg, goal)?.found.map(|s| s.atoms))
}

/// A smallest nonempty g-splitting set.
///
/// The g-splitting condition says a set is closed under predecessors in the
/// dependency graph, so the g-splitting sets are exactly the unions of trees
/// and the minimal nonempty ones are the source components. Ties go to the
/// lowest source id.
pub fn min_g_splitting_set(p: &Program, sg: &SuperDepGraph) -> Option<AtomSet> {
    debug_assert_eq!(sg.ids().map(|c| sg.atoms(c).len()).sum::<usize>(), p.atoms().len());
    sg.sources()
        .iter()
        .min_by_key(|&&c| sg.atoms(c).len())
        .map(|&c| sg.atoms(c).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_program;

    const EXAMPLE_1: &str = "a :- not b. e | b :- not a. f :- not b. g | d :- c.
        c | f :- not d. h :- e. e :- a, not h. h :- a.";
    const EXAMPLE_3: &str = "a :- not b. b :- not a. b | c :- a. a | d :- b.";

    fn set(p: &Program, names: &str) -> AtomSet {
        names.split_whitespace().map(|n| p.atom(n).unwrap()).collect()
    }

    fn rules_1based(v: Vec<usize>) -> Vec<usize> {
        v.into_iter().map(|i| i + 1).collect()
    }

    #[test]
    fn splitting_set_predicate() {
        let p = parse_program(EXAMPLE_1).unwrap();
        assert_eq!(is_splitting_set(&p, &set(&p, "a b e h")), Ok(true));
        assert_eq!(is_splitting_set(&p, &set(&p, "a b")), Ok(false));
        assert_eq!(is_splitting_set(&p, &AtomSet::new()), Ok(true));
        assert_eq!(is_splitting_set(&p, &set(&p, "c d g")), Ok(false));
        assert_eq!(is_splitting_set(&p, p.atoms()), Ok(true));
        let ghost = AtomSet::singleton(AtomId(40));
        assert_eq!(is_splitting_set(&p, &ghost), Err(SplitError::UnknownAtom(AtomId(40))));
    }

    #[test]
    fn g_splitting_set_predicate() {
        let p = parse_program(EXAMPLE_3).unwrap();
        assert_eq!(is_g_splitting_set(&p, &set(&p, "a b")), Ok(true));
        assert_eq!(is_g_splitting_set(&p, &set(&p, "a")), Ok(false));
        assert_eq!(is_splitting_set(&p, &set(&p, "a b")), Ok(false));
        let q = parse_program(EXAMPLE_1).unwrap();
        assert_eq!(is_g_splitting_set(&q, &set(&q, "a b e h")), Ok(true));
    }

    #[test]
    fn bottoms() {
        let p = parse_program(EXAMPLE_1).unwrap();
        assert_eq!(rules_1based(bottom_rules(&p, &set(&p, "a b e h"))), [1, 2, 6, 7, 8]);
        assert!(bottom(&p, &AtomSet::new()).is_empty());
        let q = parse_program(EXAMPLE_3).unwrap();
        assert_eq!(rules_1based(bottom_rules(&q, &set(&q, "a b"))), [1, 2]);
        assert_eq!(bottom(&q, &set(&q, "a b")).rules(), &q.rules()[..2]);
    }

    fn state(p: &Program, sg: &SuperDepGraph, names: &str) -> SearchState {
        let atoms = set(p, names);
        let cost = atoms.len();
        SearchState::new(sg, atoms, cost, 1, Step::Source(SccId(0)))
    }

    #[test]
    fn successors_follow_the_lowest_violated_rule() {
        let p = parse_program(EXAMPLE_1).unwrap();
        let sg = SuperDepGraph::of_program(&p);

        let cd = state(&p, &sg, "c d");
        let cdg = successor(&p, &sg, &cd).unwrap();
        assert_eq!(cdg.atoms(), &set(&p, "c d g"));
        assert_eq!(cdg.step(), Step::Rule(3));
        assert_eq!(cdg.path_cost() - cd.path_cost(), 1);

        let ab = state(&p, &sg, "a b");
        let abeh = successor(&p, &sg, &ab).unwrap();
        assert_eq!(abeh.atoms(), &set(&p, "a b e h"));
        assert_eq!(abeh.step(), Step::Rule(1));
        assert_eq!(abeh.path_cost(), 4);
        assert!(successor(&p, &sg, &abeh).is_none());

        let next = successor(&p, &sg, &cdg).unwrap();
        assert_eq!(next.atoms(), &set(&p, "a b c d f g"));
        assert_eq!(next.step(), Step::Rule(4));
        assert_eq!(next.path_cost(), 6);
        assert_eq!(next.sccs().len(), 4);
    }

    #[test]
    fn running_example_search_and_trace() {
        let p = parse_program(EXAMPLE_1).unwrap();
        let sg = SuperDepGraph::of_program(&p);
        let out = search(&p, &sg, &SplitGoal::NonEmpty).unwrap();
        assert_eq!(out.found.as_ref().unwrap().atoms(), &set(&p, "a b e h"));
        assert_eq!(
            out.trace.render(p.symbols()),
            "\
expand {} cost=0 initial
  generate {a, b} cost=2 via source
  generate {c, d} cost=2 via source
expand {c, d} cost=2 via source
  generate {c, d, g} cost=3 via rule 4
expand {a, b} cost=2 via source
  generate {a, b, e, h} cost=4 via rule 2
expand {c, d, g} cost=3 via rule 4
  generate {a, b, c, d, f, g} cost=6 via rule 5
expand {a, b, e, h} cost=4 via rule 2
  goal {a, b, e, h} size=4
"
        );
        assert_eq!(out.expansions, 5);
    }

    #[test]
    fn minimum_sets_of_small_programs() {
        let p = parse_program("a.").unwrap();
        assert_eq!(min_splitting_set(&p, &SplitGoal::NonEmpty), Ok(Some(set(&p, "a"))));
        let q = parse_program(EXAMPLE_3).unwrap();
        assert_eq!(min_splitting_set(&q, &SplitGoal::NonEmpty), Ok(Some(q.atoms().clone())));
        let e = parse_program("").unwrap();
        assert_eq!(min_splitting_set(&e, &SplitGoal::NonEmpty), Ok(None));
    }

    #[test]
    fn sources_can_share_a_rule() {
        // Both sources fire rule 1, so expansions exceed rules + sources.
        let p = parse_program("x | y.").unwrap();
        let sg = SuperDepGraph::of_program(&p);
        let out = search(&p, &sg, &SplitGoal::NonEmpty).unwrap();
        assert_eq!(out.found.map(|s| s.atoms), Some(p.atoms().clone()));
        assert_eq!(out.expansions, 4);
        assert_eq!(out.max_depth, 2);
    }

    #[test]
    fn required_atoms() {
        let p = parse_program(EXAMPLE_1).unwrap();
        // {a, b, c, d, f, g} still violates rule 2 (b in, e out).
        let g = SplitGoal::MustContain(set(&p, "g"));
        assert_eq!(min_splitting_set(&p, &g), Ok(Some(p.atoms().clone())));
        let h = SplitGoal::MustContain(set(&p, "h"));
        assert_eq!(min_splitting_set(&p, &h), Ok(Some(set(&p, "a b e h"))));
        assert_eq!(min_splitting_set(&p, &SplitGoal::MustContain(AtomSet::new())), Err(SplitError::EmptyRequirement));
    }

    #[test]
    fn rejected_sets_are_extended() {
        // {c} is popped first but its bottom has two rules.
        let p = parse_program("a. b :- a. c. c :- .").unwrap();
        let out = search(&p, &SuperDepGraph::of_program(&p), &SplitGoal::BottomRulesAtMost(1)).unwrap();
        assert_eq!(out.found.unwrap().atoms(), &set(&p, "a"));
        assert!(out.trace.render(p.symbols()).contains("  reject {c} size=1\n  generate {a, c} cost=2 via extend\n"));

        let never = SplitGoal::Custom(Box::new(|_, _| Ok(false)));
        let out = search(&p, &SuperDepGraph::of_program(&p), &never).unwrap();
        assert!(out.found.is_none());
        assert!(out.trace.events.iter().any(|e| matches!(e, TraceEvent::Reject { atoms, .. } if atoms == p.atoms())));

        let failing = SplitGoal::Custom(Box::new(|_, _| Err("boom".into())));
        assert_eq!(min_splitting_set(&p, &failing), Err(SplitError::Goal("boom".into())));
    }

    #[test]
    fn hcf_bottom_goal() {
        // {a, b} is the smallest split but has a head cycle.
        let p = parse_program("a | b. a :- b. b :- a. c :- not d. d :- not e. e :- not c. x :- c, a.").unwrap();
        assert_eq!(min_splitting_set(&p, &SplitGoal::NonEmpty), Ok(Some(set(&p, "a b"))));
        assert_eq!(min_splitting_set(&p, &SplitGoal::BottomIsHcf), Ok(Some(set(&p, "c d e"))));
    }

    #[test]
    fn smallest_g_splitting_set() {
        let p = parse_program(EXAMPLE_3).unwrap();
        let sg = SuperDepGraph::of_program(&p);
        assert_eq!(min_g_splitting_set(&p, &sg), Some(set(&p, "a b")));
        let q = parse_program(EXAMPLE_1).unwrap();
        assert_eq!(min_g_splitting_set(&q, &SuperDepGraph::of_program(&q)), Some(set(&q, "a b")));
        let r = parse_program("a.").unwrap();
        assert_eq!(min_g_splitting_set(&r, &SuperDepGraph::of_program(&r)), Some(set(&r, "a")));
        let e = parse_program("").unwrap();
        assert_eq!(min_g_splitting_set(&e, &SuperDepGraph::of_program(&e)), None);
    }
}
