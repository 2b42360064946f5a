//! Dependency graph and its strongly-connected-component condensation
//! (the super-dependency graph).
//!
//! There is an arc `A -> B` whenever some rule has `A` in its body (positive
//! or negative) and `B` in its head.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use crate::atoms::{AtomId, AtomSet};
use crate::program::Program;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("atom #{} does not occur in the program", .0 .0)]
    UnknownAtom(AtomId),
}

#[derive(Clone, Debug)]
pub struct DepGraph {
    nodes: AtomSet,
    /// Successor lists indexed by atom id, sorted and deduplicated.
    succ: Vec<Vec<AtomId>>,
}

impl DepGraph {
    pub fn nodes(&self) -> &AtomSet {
        &self.nodes
    }

    pub fn successors(&self, a: AtomId) -> &[AtomId] {
        self.succ.get(a.index()).map_or(&[], Vec::as_slice)
    }

    /// All arcs, ordered by source then target id.
    pub fn arcs(&self) -> impl Iterator<Item = (AtomId, AtomId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, ts)| ts.iter().map(move |&t| (AtomId::from(a), t)))
    }

    pub fn has_arc(&self, from: AtomId, to: AtomId) -> bool {
        self.successors(from).binary_search(&to).is_ok()
    }

    pub fn arc_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

pub fn build_dep_graph(p: &Program) -> DepGraph {
    let n = p.symbols().len();
    let mut succ = vec![Vec::new(); n];
    for sets in p.sets() {
        for b in &sets.body {
            succ[b.index()].extend(sets.head.iter());
        }
    }
    for ts in &mut succ {
        ts.sort_unstable();
        ts.dedup();
    }
    DepGraph { nodes: p.atoms().clone(), succ }
}

/// Index of a component in a [`SuperDepGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SccId(pub u32);

impl SccId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SccId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// The condensation DAG.
///
/// Component ids follow a topological order of the DAG: every arc goes from
/// a lower id to a higher one. Among components that are ready at the same
/// time, the one holding the smallest atom id is numbered first, so the
/// numbering depends only on the program.
#[derive(Clone, Debug)]
pub struct SuperDepGraph {
    sccs: Vec<AtomSet>,
    scc_of: Vec<Option<SccId>>,
    succ: Vec<Vec<SccId>>,
    pred: Vec<Vec<SccId>>,
    sources: Vec<SccId>,
    /// tree(c) for each component, as atoms.
    trees: Vec<AtomSet>,
}

/// Iterative Tarjan over the atom nodes of `g`. Components come out in
/// reverse topological order.
fn tarjan(g: &DepGraph) -> Vec<Vec<AtomId>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    // (node, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in g.nodes.iter().map(AtomId::index) {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, i)) = call.last() {
            if let Some(&w) = g.succ[v].get(i) {
                call.last_mut().expect("nonempty").1 += 1;
                let w = w.index();
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(AtomId::from(w));
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

pub fn build_super_graph(g: &DepGraph) -> SuperDepGraph {
    let raw = tarjan(g);
    let n_atoms = g.succ.len();
    let mut raw_of = vec![usize::MAX; n_atoms];
    for (c, comp) in raw.iter().enumerate() {
        for a in comp {
            raw_of[a.index()] = c;
        }
    }

    let k = raw.len();
    let mut raw_succ = vec![Vec::new(); k];
    let mut indeg = vec![0usize; k];
    for (from, to) in g.arcs() {
        let (cf, ct) = (raw_of[from.index()], raw_of[to.index()]);
        if cf != ct {
            raw_succ[cf].push(ct);
        }
    }
    for s in &mut raw_succ {
        s.sort_unstable();
        s.dedup();
        for &t in s.iter() {
            indeg[t] += 1;
        }
    }

    // Kahn's algorithm, smallest member atom first.
    let min_atom: Vec<AtomId> = raw.iter().map(|c| *c.iter().min().expect("empty component")).collect();
    let mut ready: BinaryHeap<Reverse<(AtomId, usize)>> = (0..k)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((min_atom[c], c)))
        .collect();
    let mut renumber = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = ready.pop() {
        renumber[c] = order.len();
        order.push(c);
        for &t in &raw_succ[c] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.push(Reverse((min_atom[t], t)));
            }
        }
    }
    debug_assert_eq!(order.len(), k, "condensation has a cycle");

    let sccs: Vec<AtomSet> = order.iter().map(|&c| raw[c].iter().copied().collect()).collect();
    let mut scc_of = vec![None; n_atoms];
    for (id, atoms) in sccs.iter().enumerate() {
        for a in atoms {
            scc_of[a.index()] = Some(SccId(id as u32));
        }
    }
    let mut succ = vec![Vec::new(); k];
    let mut pred = vec![Vec::new(); k];
    for (new_id, &c) in order.iter().enumerate() {
        let mut s: Vec<SccId> = raw_succ[c].iter().map(|&t| SccId(renumber[t] as u32)).collect();
        s.sort_unstable();
        for &t in &s {
            pred[t.index()].push(SccId(new_id as u32));
        }
        succ[new_id] = s;
    }
    let sources = (0..k).filter(|&c| pred[c].is_empty()).map(|c| SccId(c as u32)).collect();

    // Predecessors have smaller ids, so one forward pass closes every tree.
    let mut trees: Vec<AtomSet> = Vec::with_capacity(k);
    for c in 0..k {
        let mut t = sccs[c].clone();
        for p in &pred[c] {
            t.union_with(&trees[p.index()]);
        }
        trees.push(t);
    }

    SuperDepGraph { sccs, scc_of, succ, pred, sources, trees }
}

impl SuperDepGraph {
    pub fn of_program(p: &Program) -> Self {
        build_super_graph(&build_dep_graph(p))
    }

    pub fn len(&self) -> usize {
        self.sccs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sccs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = SccId> {
        (0..self.sccs.len() as u32).map(SccId)
    }

    pub fn atoms(&self, c: SccId) -> &AtomSet {
        &self.sccs[c.index()]
    }

    pub fn successors(&self, c: SccId) -> &[SccId] {
        &self.succ[c.index()]
    }

    pub fn predecessors(&self, c: SccId) -> &[SccId] {
        &self.pred[c.index()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (SccId, SccId)> + '_ {
        self.ids().flat_map(move |c| self.succ[c.index()].iter().map(move |&t| (c, t)))
    }

    pub fn component(&self, v: AtomId) -> Result<SccId, GraphError> {
        self.scc_of
            .get(v.index())
            .copied()
            .flatten()
            .ok_or(GraphError::UnknownAtom(v))
    }

    /// scc(v)
    pub fn scc_of(&self, v: AtomId) -> Result<&AtomSet, GraphError> {
        self.component(v).map(|c| self.atoms(c))
    }

    /// tree of one component: every atom in a component that reaches `c`.
    pub fn tree_of_scc(&self, c: SccId) -> &AtomSet {
        &self.trees[c.index()]
    }

    /// tree(vs): union of tree(v) over `vs`.
    pub fn tree_of(&self, vs: &AtomSet) -> Result<AtomSet, GraphError> {
        let mut out = AtomSet::new();
        for v in vs {
            out.union_with(&self.trees[self.component(v)?.index()]);
        }
        Ok(out)
    }

    /// Like [`tree_of`](Self::tree_of) but unions into `out` and skips atoms
    /// already present. Every atom of `vs` must be a node.
    pub(crate) fn extend_tree(&self, out: &mut AtomSet, vs: &AtomSet) {
        for v in vs {
            if !out.contains(v) {
                let c = self.scc_of[v.index()].expect("atom outside the graph");
                out.union_with(&self.trees[c.index()]);
            }
        }
    }

    /// Components with no incoming edge, in id order.
    pub fn sources(&self) -> &[SccId] {
        &self.sources
    }

    /// Components whose atoms all lie in `atoms`.
    pub fn components_within(&self, atoms: &AtomSet) -> Vec<SccId> {
        self.ids().filter(|&c| self.sccs[c.index()].is_subset(atoms)).collect()
    }
}

/// True iff no rule has two distinct head atoms in the same component.
pub fn is_hcf(p: &Program, sg: &SuperDepGraph) -> bool {
    p.rules().iter().all(|r| {
        let mut seen: Vec<SccId> = r
            .head()
            .iter()
            .filter_map(|&a| sg.component(a).ok())
            .collect();
        let n = seen.len();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == n
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{format_atoms, parse_program};

    const EXAMPLE_1: &str = "a :- not b. e | b :- not a. f :- not b. g | d :- c.
        c | f :- not d. h :- e. e :- a, not h. h :- a.";

    fn atoms(p: &Program, names: &str) -> AtomSet {
        names.split_whitespace().map(|n| p.atom(n).unwrap()).collect()
    }

    #[test]
    fn running_example_arcs() {
        let p = parse_program(EXAMPLE_1).unwrap();
        let g = build_dep_graph(&p);
        let name = |a: AtomId| p.symbols().name(a);
        let mut arcs: Vec<(&str, &str)> = g.arcs().map(|(a, b)| (name(a), name(b))).collect();
        arcs.sort();
        assert_eq!(
            arcs,
            [
                ("a", "b"), ("a", "e"), ("a", "h"), ("b", "a"), ("b", "f"), ("c", "d"),
                ("c", "g"), ("d", "c"), ("d", "f"), ("e", "h"), ("h", "e"),
            ]
        );
    }

    #[test]
    fn fact_and_self_loop() {
        let p = parse_program("a.").unwrap();
        let g = build_dep_graph(&p);
        assert_eq!(g.arc_count(), 0);
        assert_eq!(g.nodes().len(), 1);
        let p = parse_program("a :- a.").unwrap();
        let a = p.atom("a").unwrap();
        assert!(build_dep_graph(&p).has_arc(a, a));
    }

    #[test]
    fn running_example_components() {
        let p = parse_program(EXAMPLE_1).unwrap();
        let sg = SuperDepGraph::of_program(&p);
        let mut comps: Vec<_> = sg.ids().map(|c| format_atoms(p.symbols(), sg.atoms(c))).collect();
        comps.sort();
        assert_eq!(comps, ["{a, b}", "{c, d}", "{e, h}", "{f}", "{g}"]);
        let srcs: Vec<_> = sg.sources().iter().map(|&c| format_atoms(p.symbols(), sg.atoms(c))).collect();
        assert_eq!(srcs, ["{a, b}", "{c, d}"]);
        for (from, to) in sg.edges() {
            assert!(from < to);
        }
    }

    #[test]
    fn scc_and_tree_queries() {
        let p = parse_program(EXAMPLE_1).unwrap();
        let sg = SuperDepGraph::of_program(&p);
        let e = p.atom("e").unwrap();
        assert_eq!(sg.scc_of(e).unwrap(), &atoms(&p, "e h"));
        assert_eq!(sg.scc_of(p.atom("g").unwrap()).unwrap(), &atoms(&p, "g"));
        assert_eq!(sg.tree_of(&atoms(&p, "e")).unwrap(), atoms(&p, "a b e h"));
        assert_eq!(sg.tree_of(&atoms(&p, "f g")).unwrap(), atoms(&p, "a b c d f g"));
        assert_eq!(sg.tree_of(&p.rule(4).atoms()).unwrap(), atoms(&p, "a b c d f"));
        assert_eq!(sg.tree_of(&AtomSet::new()).unwrap(), AtomSet::new());
    }

    #[test]
    fn unknown_atom_is_an_error() {
        let p = parse_program("a :- b.").unwrap();
        let sg = SuperDepGraph::of_program(&p);
        assert_eq!(sg.scc_of(AtomId(7)), Err(GraphError::UnknownAtom(AtomId(7))));
        assert!(sg.tree_of(&AtomSet::singleton(AtomId(9))).is_err());
    }

    #[test]
    fn acyclic_and_cyclic_shapes() {
        let p = parse_program("b :- a. c :- b.").unwrap();
        let sg = SuperDepGraph::of_program(&p);
        assert_eq!(sg.len(), 3);
        assert_eq!(sg.sources().len(), 1);
        assert_eq!(sg.atoms(sg.sources()[0]), &atoms(&p, "a"));

        let p = parse_program("a :- b. b :- a.").unwrap();
        let sg = SuperDepGraph::of_program(&p);
        assert_eq!(sg.len(), 1);
        assert_eq!(sg.atoms(SccId(0)), &atoms(&p, "a b"));

        let p = parse_program("").unwrap();
        let sg = SuperDepGraph::of_program(&p);
        assert!(sg.sources().is_empty());
    }

    #[test]
    fn head_cycle_freeness() {
        let p = parse_program(EXAMPLE_1).unwrap();
        assert!(is_hcf(&p, &SuperDepGraph::of_program(&p)));
        let p = parse_program("a | b. a :- b. b :- a.").unwrap();
        assert!(!is_hcf(&p, &SuperDepGraph::of_program(&p)));
        let p = parse_program("a | b :- c. d :- a.").unwrap();
        assert!(is_hcf(&p, &SuperDepGraph::of_program(&p)));
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let mut text = alloc::string::String::new();
        for i in 0..5_000 {
            text.push_str(&alloc::format!("x{} :- x{}.\n", i + 1, i));
        }
        text.push_str("x0 :- x5000.\n");
        let p = parse_program(&text).unwrap();
        let sg = SuperDepGraph::of_program(&p);
        assert_eq!(sg.len(), 1);
    }
}
