//! Stable-model semantics.
//!
//! Brute-force enumeration is the reference: a set `S` is stable when it is
//! closed under the reduct of the program w.r.t. `S` and no proper subset is.
//! For head-cycle-free programs the proof-based characterization gives a
//! polynomial check per candidate. `reduce` propagates a partial assignment,
//! and the two `via_*` functions evaluate a program bottom-up through a
//! splitting set or a g-splitting set.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::atoms::{AtomId, AtomSet};
use crate::graph::{is_hcf, SuperDepGraph};
use crate::program::{Program, Rule};
use crate::split::{bottom, g_splits, splits};

/// A set of atoms proposed or verified as a stable model.
pub type Interpretation = AtomSet;

/// Atom cap for brute-force enumeration unless the caller picks another.
pub const DEFAULT_MAX_ATOMS: usize = 20;

/// Largest cap the bitmask enumerator supports.
pub const MAX_ENUMERABLE_ATOMS: usize = 63;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("program has {atoms} atoms, more than the enumeration cap of {cap}")]
    TooManyAtoms { atoms: usize, cap: usize },
    #[error("program is not head-cycle-free")]
    NotHcf,
    #[error("the given set is not a splitting set")]
    NotSplittingSet,
    #[error("the given set is not a g-splitting set")]
    NotGSplittingSet,
    #[error("atom #{} is both true and false", .0 .0)]
    Overlap(AtomId),
    #[error("atom #{} is not in the interpretation", .0 .0)]
    NotInInterpretation(AtomId),
    #[error("atom #{} does not occur in the program", .0 .0)]
    UnknownAtom(AtomId),
}

/// `s` does not satisfy the body of `r`, or `s` meets the head of `r`.
pub fn satisfies(s: &Interpretation, r: &Rule) -> bool {
    let body_holds = r.body_pos().iter().all(|&a| s.contains(a)) && !r.body_neg().iter().any(|&a| s.contains(a));
    !body_holds || r.head().iter().any(|&a| s.contains(a))
}

fn satisfies_all(p: &Program, s: &AtomSet) -> bool {
    p.sets()
        .iter()
        .all(|r| !(r.pos.is_subset(s) && !r.neg.intersects(s)) || r.head.intersects(s))
}

/// Drop every rule whose negative body meets `s`, then every remaining
/// negative literal.
pub fn reduct(p: &Program, s: &Interpretation) -> Program {
    let rules = p
        .rules()
        .iter()
        .zip(p.sets())
        .filter(|(_, sets)| !sets.neg.intersects(s))
        .map(|(r, _)| r.retain(|_| true, |_| true, |_| false))
        .collect();
    p.with_rules(rules)
}

/// Bitmask image of a program over its own atoms.
struct Compiled {
    atoms: Vec<AtomId>,
    /// (head, pos, neg)
    rules: Vec<(u64, u64, u64)>,
}

impl Compiled {
    fn new(p: &Program, cap: usize) -> Result<Self, SemanticsError> {
        let atoms: Vec<AtomId> = p.atoms().iter().collect();
        let cap = cap.min(MAX_ENUMERABLE_ATOMS);
        if atoms.len() > cap {
            return Err(SemanticsError::TooManyAtoms { atoms: atoms.len(), cap });
        }
        let mut local = vec![0u8; p.symbols().len()];
        for (i, a) in atoms.iter().enumerate() {
            local[a.index()] = i as u8;
        }
        let mask = |xs: &[AtomId]| xs.iter().fold(0u64, |m, a| m | 1 << local[a.index()]);
        let rules = p
            .rules()
            .iter()
            .map(|r| (mask(r.head()), mask(r.body_pos()), mask(r.body_neg())))
            .collect();
        Ok(Compiled { atoms, rules })
    }

    fn is_model(&self, s: u64) -> bool {
        self.rules
            .iter()
            .all(|&(h, p, n)| p & s != p || n & s != 0 || h & s != 0)
    }

    fn is_stable(&self, s: u64, reduct: &mut Vec<(u64, u64)>) -> bool {
        if !self.is_model(s) {
            return false;
        }
        reduct.clear();
        reduct.extend(self.rules.iter().filter(|r| r.2 & s == 0).map(|&(h, p, _)| (h, p)));
        // Any proper subset closed under the reduct refutes minimality.
        let mut t = s;
        while t != 0 {
            t = (t - 1) & s;
            if reduct.iter().all(|&(h, p)| p & t != p || h & t != 0) {
                return false;
            }
        }
        true
    }

    fn expand(&self, s: u64) -> AtomSet {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| s >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect()
    }
}

/// All stable models by exhaustive search over subsets of Lett(P), in
/// canonical order (by size, then by ascending atom ids).
pub fn stable_models_bruteforce(p: &Program, max_atoms: usize) -> Result<Vec<Interpretation>, SemanticsError> {
    let c = Compiled::new(p, max_atoms)?;
    let mut scratch = Vec::new();
    let mut models: Vec<AtomSet> = (0..1u64 << c.atoms.len())
        .filter(|&s| c.is_stable(s, &mut scratch))
        .map(|s| c.expand(s))
        .collect();
    models.sort();
    Ok(models)
}

/// Stability by minimal-model check of the reduct, for a single candidate.
pub fn is_stable_bruteforce(p: &Program, s: &Interpretation, max_atoms: usize) -> Result<bool, SemanticsError> {
    if !s.is_subset(p.atoms()) {
        return Ok(false);
    }
    let c = Compiled::new(p, max_atoms)?;
    let mask = c
        .atoms
        .iter()
        .enumerate()
        .filter(|(_, a)| s.contains(**a))
        .fold(0u64, |m, (i, _)| m | 1 << i);
    Ok(c.is_stable(mask, &mut Vec::new()))
}

/// A sequence of rules deriving one atom; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub rules: Vec<usize>,
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", r + 1)?;
        }
        Ok(())
    }
}

/// Least fixpoint of provable atoms w.r.t. `s`, with the rule that first
/// marked each atom, in marking order.
fn provable(p: &Program, s: &AtomSet) -> (AtomSet, Vec<(AtomId, usize)>) {
    let mut marked = AtomSet::new();
    let mut order = Vec::new();
    let live: Vec<usize> = (0..p.len())
        .filter(|&i| {
            let r = p.rule_sets(i);
            r.pos.is_subset(s) && !r.neg.intersects(s) && r.head.intersection_len(s) == 1
        })
        .collect();
    loop {
        let mut changed = false;
        for &i in &live {
            let r = p.rule_sets(i);
            let l = r.head.intersection(s).first().expect("one head atom in s");
            if !marked.contains(l) && r.pos.is_subset(&marked) {
                marked.insert(l);
                order.push((l, i));
                changed = true;
            }
        }
        if !changed {
            return (marked, order);
        }
    }
}

/// A proof of `a` w.r.t. `s`: every rule has exactly one head atom in `s`
/// and a body satisfied by `s`, the last one derives `a`, and each positive
/// body atom is derived by an earlier rule.
pub fn find_proof(p: &Program, s: &Interpretation, a: AtomId) -> Result<Option<ProofTrace>, SemanticsError> {
    if !s.contains(a) {
        return Err(SemanticsError::NotInInterpretation(a));
    }
    let (marked, order) = provable(p, s);
    if !marked.contains(a) {
        return Ok(None);
    }
    let when: alloc::collections::BTreeMap<AtomId, usize> =
        order.iter().enumerate().map(|(t, &(l, _))| (l, t)).collect();
    let mut needed = BTreeSet::new();
    let mut todo = vec![a];
    while let Some(x) = todo.pop() {
        let t = when[&x];
        if needed.insert(t) {
            todo.extend(p.rule(order[t].1).body_pos().iter().copied());
        }
    }
    Ok(Some(ProofTrace { rules: needed.into_iter().map(|t| order[t].1).collect() }))
}

/// The atom `trace` proves w.r.t. `s`, or `None` if it is not a proof.
pub fn check_proof(p: &Program, s: &Interpretation, trace: &ProofTrace) -> Option<AtomId> {
    let mut derived = AtomSet::new();
    let mut last = None;
    for &i in &trace.rules {
        let r = p.sets().get(i)?;
        if r.head.intersection_len(s) != 1 || !r.pos.is_subset(s) || r.neg.intersects(s) || !r.pos.is_subset(&derived) {
            return None;
        }
        let l = r.head.intersection(s).first()?;
        derived.insert(l);
        last = Some(l);
    }
    last
}

fn hcf_stable(p: &Program, s: &AtomSet) -> bool {
    s.is_subset(p.atoms()) && satisfies_all(p, s) && s.is_subset(&provable(p, s).0)
}

/// Stability of `s` for a head-cycle-free program: `s` satisfies every rule
/// and each of its atoms has a proof.
pub fn is_stable_hcf(p: &Program, s: &Interpretation) -> Result<bool, SemanticsError> {
    if !is_hcf(p, &SuperDepGraph::of_program(p)) {
        return Err(SemanticsError::NotHcf);
    }
    Ok(hcf_stable(p, s))
}

/// All stable models of a head-cycle-free program, enumerating candidates
/// and checking each with proofs. Canonical order.
pub fn stable_models_hcf(p: &Program, max_atoms: usize) -> Result<Vec<Interpretation>, SemanticsError> {
    if !is_hcf(p, &SuperDepGraph::of_program(p)) {
        return Err(SemanticsError::NotHcf);
    }
    let c = Compiled::new(p, max_atoms)?;
    let mut models: Vec<AtomSet> = (0..1u64 << c.atoms.len())
        .filter(|&s| c.is_model(s))
        .map(|s| c.expand(s))
        .filter(|s| s.is_subset(&provable(p, s).0))
        .collect();
    models.sort();
    Ok(models)
}

/// [`reduce`] that also reports, for each surviving rule, its index in `p`.
pub fn reduce_indexed(p: &Program, x: &AtomSet, y: &AtomSet) -> Result<(Program, Vec<usize>), SemanticsError> {
    if let Some(a) = x.intersection(y).first() {
        return Err(SemanticsError::Overlap(a));
    }
    let mut origin = Vec::new();
    let mut rules = Vec::new();
    for (i, (r, sets)) in p.rules().iter().zip(p.sets()).enumerate() {
        if sets.neg.intersects(x) || sets.head.intersects(x) || sets.pos.intersects(y) {
            continue;
        }
        rules.push(r.retain(|a| !y.contains(a), |a| !x.contains(a), |a| !y.contains(a)));
        origin.push(i);
    }
    Ok((p.with_rules(rules), origin))
}

/// Set the atoms of `x` true and those of `y` false.
///
/// A rule is deleted when it has a negative body atom in `x`, a head atom in
/// `x`, or a positive body atom in `y`. Surviving rules lose their positive
/// occurrences of `x` and their head and negative occurrences of `y`. A rule
/// left with neither head nor body stays as the unsatisfiable `:-.`.
pub fn reduce(p: &Program, x: &AtomSet, y: &AtomSet) -> Result<Program, SemanticsError> {
    reduce_indexed(p, x, y).map(|(q, _)| q)
}

fn check_known(p: &Program, u: &AtomSet) -> Result<(), SemanticsError> {
    match u.difference(p.atoms()).first() {
        Some(a) => Err(SemanticsError::UnknownAtom(a)),
        None => Ok(()),
    }
}

/// Stable models of `p` assembled from the bottom `b_U(P)` and the reduced
/// top for each bottom model. Canonical order, no duplicates.
pub fn stable_models_via_split(p: &Program, u: &AtomSet, max_atoms: usize) -> Result<Vec<Interpretation>, SemanticsError> {
    check_known(p, u)?;
    if !splits(p, u) {
        return Err(SemanticsError::NotSplittingSet);
    }
    combine(p, u, max_atoms)
}

/// Stable models of a head-cycle-free `p` from a g-splitting set `s`: every
/// `M' ∪ X` with `X` stable for the rules inside `s` and `M'` stable for the
/// program reduced by `X`. Each result is a stable model of `p`; not every
/// stable model of `p` is guaranteed to appear.
pub fn stable_models_via_gsplit(p: &Program, s: &AtomSet, max_atoms: usize) -> Result<Vec<Interpretation>, SemanticsError> {
    check_known(p, s)?;
    if !is_hcf(p, &SuperDepGraph::of_program(p)) {
        return Err(SemanticsError::NotHcf);
    }
    if !g_splits(p, s) {
        return Err(SemanticsError::NotGSplittingSet);
    }
    combine(p, s, max_atoms)
}

fn combine(p: &Program, u: &AtomSet, max_atoms: usize) -> Result<Vec<Interpretation>, SemanticsError> {
    let mut out = BTreeSet::new();
    for x in stable_models_bruteforce(&bottom(p, u), max_atoms)? {
        let top = reduce(p, &x, &u.difference(&x))?;
        for y in stable_models_bruteforce(&top, max_atoms)? {
            out.insert(x.union(&y));
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_program, render_program};

    const EXAMPLE_1: &str = "a :- not b. e | b :- not a. f :- not b. g | d :- c.
        c | f :- not d. h :- e. e :- a, not h. h :- a.";
    const EXAMPLE_3: &str = "a :- not b. b :- not a. b | c :- a. a | d :- b.";

    fn set(p: &Program, names: &str) -> AtomSet {
        names.split_whitespace().map(|n| p.atom(n).unwrap()).collect()
    }

    fn models(p: &Program, ms: &[AtomSet]) -> Vec<alloc::string::String> {
        ms.iter().map(|m| crate::text::format_atoms(p.symbols(), m)).collect()
    }

    #[test]
    fn satisfaction() {
        let p = parse_program("a :- not b.").unwrap();
        let r = p.rule(0);
        assert!(satisfies(&set(&p, "a"), r));
        assert!(satisfies(&set(&p, "b"), r));
        assert!(!satisfies(&AtomSet::new(), r));
    }

    #[test]
    fn reducts() {
        let p = parse_program("a :- not b.").unwrap();
        assert!(reduct(&p, &set(&p, "b")).is_empty());
        assert_eq!(render_program(&reduct(&p, &set(&p, "a"))), "a.\n");
        let q = parse_program(EXAMPLE_3).unwrap();
        assert_eq!(render_program(&reduct(&q, &set(&q, "a c"))), "a.\nb | c :- a.\na | d :- b.\n");
    }

    #[test]
    fn reduct_is_identity_without_negation() {
        let p = parse_program("a | b :- c. c. :- a, b.").unwrap();
        assert_eq!(reduct(&p, &set(&p, "a b c")), p);
    }

    #[test]
    fn brute_force_models() {
        let q = parse_program(EXAMPLE_3).unwrap();
        assert_eq!(models(&q, &stable_models_bruteforce(&q, 20).unwrap()), ["{a, c}", "{b, d}"]);
        let p = parse_program("a.").unwrap();
        assert_eq!(models(&p, &stable_models_bruteforce(&p, 20).unwrap()), ["{a}"]);
        let p = parse_program("a :- not a.").unwrap();
        assert!(stable_models_bruteforce(&p, 20).unwrap().is_empty());
        let p = parse_program("").unwrap();
        assert_eq!(stable_models_bruteforce(&p, 20).unwrap(), [AtomSet::new()]);
        let p = parse_program(":-.").unwrap();
        assert!(stable_models_bruteforce(&p, 20).unwrap().is_empty());
        let p = parse_program("a | b.").unwrap();
        assert_eq!(models(&p, &stable_models_bruteforce(&p, 20).unwrap()), ["{a}", "{b}"]);
    }

    #[test]
    fn atom_cap() {
        let p = parse_program("a | b | c.").unwrap();
        assert_eq!(stable_models_bruteforce(&p, 2), Err(SemanticsError::TooManyAtoms { atoms: 3, cap: 2 }));
    }

    #[test]
    fn proofs() {
        let q = parse_program(EXAMPLE_3).unwrap();
        let s = set(&q, "a c");
        let proof = find_proof(&q, &s, q.atom("c").unwrap()).unwrap().unwrap();
        assert_eq!(proof.rules, [0, 2]);
        assert_eq!(alloc::format!("{proof}"), "1, 3");
        assert_eq!(check_proof(&q, &s, &proof), q.atom("c"));

        let p = parse_program("a.").unwrap();
        assert_eq!(find_proof(&p, &set(&p, "a"), p.atom("a").unwrap()).unwrap().unwrap().rules, [0]);

        let p = parse_program("a | b.").unwrap();
        assert_eq!(find_proof(&p, &set(&p, "a b"), p.atom("a").unwrap()), Ok(None));
        assert_eq!(
            find_proof(&p, &set(&p, "b"), p.atom("a").unwrap()),
            Err(SemanticsError::NotInInterpretation(p.atom("a").unwrap()))
        );
    }

    #[test]
    fn proof_uses_only_needed_rules() {
        let p = parse_program("x. a. b :- a. c :- b, x. d :- a.").unwrap();
        let s = p.atoms().clone();
        let proof = find_proof(&p, &s, p.atom("c").unwrap()).unwrap().unwrap();
        assert_eq!(proof.rules, [0, 1, 2, 3]);
        assert_eq!(find_proof(&p, &s, p.atom("d").unwrap()).unwrap().unwrap().rules, [1, 4]);
    }

    #[test]
    fn hcf_stability() {
        let q = parse_program(EXAMPLE_3).unwrap();
        assert_eq!(is_stable_hcf(&q, &set(&q, "a c")), Ok(true));
        assert_eq!(is_stable_hcf(&q, &set(&q, "a d")), Ok(false));
        let e = parse_program("").unwrap();
        assert_eq!(is_stable_hcf(&e, &AtomSet::new()), Ok(true));
        let bad = parse_program("a | b. a :- b. b :- a.").unwrap();
        assert_eq!(is_stable_hcf(&bad, &AtomSet::new()), Err(SemanticsError::NotHcf));
        assert_eq!(stable_models_hcf(&q, 20).unwrap(), stable_models_bruteforce(&q, 20).unwrap());
    }

    #[test]
    fn reduce_running_example() {
        let p = parse_program(EXAMPLE_1).unwrap();
        let (r, origin) = reduce_indexed(&p, &set(&p, "a e h"), &set(&p, "b")).unwrap();
        assert_eq!(render_program(&r), "f.\ng | d :- c.\nc | f :- not d.\n");
        assert_eq!(origin, [2, 3, 4]);
        assert_eq!(reduce(&p, &AtomSet::new(), &AtomSet::new()).unwrap(), p);
        assert_eq!(reduce(&p, &set(&p, "a"), &set(&p, "a b")), Err(SemanticsError::Overlap(p.atom("a").unwrap())));
    }

    #[test]
    fn reduce_g_split_example() {
        let q = parse_program(EXAMPLE_3).unwrap();
        assert_eq!(render_program(&reduce(&q, &set(&q, "a"), &set(&q, "b")).unwrap()), "c.\n");
    }

    #[test]
    fn reduce_keeps_emptied_rules_as_constraints() {
        let p = parse_program("a :- b. :- b.").unwrap();
        let r = reduce(&p, &set(&p, "b"), &set(&p, "a")).unwrap();
        assert_eq!(render_program(&r), ":-.\n:-.\n");
        assert!(stable_models_bruteforce(&r, 20).unwrap().is_empty());
    }

    #[test]
    fn split_pipeline() {
        let p = parse_program(EXAMPLE_1).unwrap();
        let brute = stable_models_bruteforce(&p, 20).unwrap();
        assert_eq!(stable_models_via_split(&p, &set(&p, "a b e h"), 20).unwrap(), brute);
        assert_eq!(stable_models_via_split(&p, &AtomSet::new(), 20).unwrap(), brute);
        assert_eq!(stable_models_via_split(&p, p.atoms(), 20).unwrap(), brute);
        assert_eq!(stable_models_via_split(&p, &set(&p, "a b"), 20), Err(SemanticsError::NotSplittingSet));
    }

    #[test]
    fn g_split_pipeline() {
        let q = parse_program(EXAMPLE_3).unwrap();
        let got = stable_models_via_gsplit(&q, &set(&q, "a b"), 20).unwrap();
        assert_eq!(models(&q, &got), ["{a, c}", "{b, d}"]);
        assert_eq!(stable_models_via_gsplit(&q, &set(&q, "a"), 20), Err(SemanticsError::NotGSplittingSet));
        let p = parse_program(EXAMPLE_1).unwrap();
        let u = set(&p, "a b e h");
        assert_eq!(stable_models_via_gsplit(&p, &u, 20).unwrap(), stable_models_via_split(&p, &u, 20).unwrap());
        let bad = parse_program("a | b. a :- b. b :- a.").unwrap();
        assert_eq!(stable_models_via_gsplit(&bad, bad.atoms(), 20), Err(SemanticsError::NotHcf));
    }
}
