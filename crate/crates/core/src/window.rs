//! Window graphs: nodes are the `w`-tuples over a finite alphabet, with an
//! edge `t -> t'` whenever `t'` is `t` shifted left by one with a new last
//! symbol. Infinite walks are exactly the alphabet-valued sequences, read
//! off through their sliding windows.
//!
//! A method built from sliding kernels (and sums of them) converges on a
//! sequence iff every component kernel is eventually constant along the
//! walk, i.e. the walk eventually stays inside one label class. Questions
//! about all sequences over a finite alphabet therefore reduce to cycle and
//! strongly-connected-component structure inside label classes, and any
//! witness can be taken periodic with period at most `|alphabet|^w`.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel, Scalar};
use crate::methods::MethodDescriptor;

/// Node-count ceiling for a single graph.
pub const MAX_NODES: usize = 1 << 22;

#[derive(Debug, Clone)]
pub struct WindowGraph {
    alphabet: Vec<GroupElement>,
    width: usize,
    node_count: usize,
    /// `k^(w-1)`, the place value of the first tuple entry.
    lead: usize,
}

impl WindowGraph {
    pub fn new(alphabet: Vec<GroupElement>, width: usize) -> Result<Self> {
        assert!(width >= 1, "window width must be positive");
        let k = alphabet.len();
        let node_count = (0..width).try_fold(1usize, |acc, _| acc.checked_mul(k)).filter(|&n| n <= MAX_NODES).ok_or(
            Error::BudgetExceeded { needed: (k as u128).saturating_pow(width as u32), budget: MAX_NODES as u128 },
        )?;
        let lead = if k == 0 { 0 } else { node_count / k };
        Ok(WindowGraph { alphabet, width, node_count, lead })
    }

    pub fn alphabet(&self) -> &[GroupElement] {
        &self.alphabet
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Alphabet indices of the tuple at `node`, first entry first.
    pub fn digits(&self, node: usize) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut digits = vec![0; self.width];
        let mut rest = node;
        for slot in digits.iter_mut().rev() {
            *slot = rest % k;
            rest /= k;
        }
        digits
    }

    pub fn tuple(&self, node: usize) -> Vec<&GroupElement> {
        self.digits(node).into_iter().map(|d| &self.alphabet[d]).collect()
    }

    /// The node reached from `node` by appending alphabet index `symbol`.
    pub fn successor(&self, node: usize, symbol: usize) -> usize {
        (node % self.lead.max(1)) * self.alphabet.len() + symbol
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.alphabet.len()).map(move |a| self.successor(node, a))
    }

    pub fn predecessors(&self, node: usize) -> impl Iterator<Item = usize> {
        let k = self.alphabet.len();
        let tail = if self.width == 1 { 0 } else { node / k };
        let lead = self.lead;
        (0..k).map(move |b| b * lead + tail)
    }

    /// True if the subgraph induced by `members` contains a directed cycle.
    /// Peels nodes without surviving successors until nothing changes.
    pub fn has_cycle(&self, members: &[bool]) -> bool {
        let mut out_degree: Vec<usize> = (0..self.node_count)
            .map(|v| if members[v] { self.successors(v).filter(|&s| members[s]).count() } else { 0 })
            .collect();
        let mut alive = members.to_vec();
        let mut queue: VecDeque<usize> = (0..self.node_count).filter(|&v| alive[v] && out_degree[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for p in self.predecessors(v) {
                if alive[p] {
                    out_degree[p] -= 1;
                    if out_degree[p] == 0 {
                        queue.push_back(p);
                    }
                }
            }
        }
        alive.iter().any(|&a| a)
    }

    /// Strongly connected components of the induced subgraph that contain at
    /// least one cycle (more than one node, or a self-loop).
    pub fn cyclic_components(&self, members: &[bool]) -> Vec<Vec<usize>> {
        const UNSEEN: usize = usize::MAX;
        let n = self.node_count;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut components = Vec::new();
        // iterative Tarjan; frames hold (node, successor cursor)
        for root in 0..n {
            if !members[root] || index[root] != UNSEEN {
                continue;
            }
            let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(frame) = frames.last_mut() {
                let (v, cursor) = *frame;
                if cursor < self.alphabet.len() {
                    frame.1 += 1;
                    let w = self.successor(v, cursor);
                    if !members[w] {
                        continue;
                    }
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(parent, _)) = frames.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut component = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            component.push(w);
                            if w == v {
                                break;
                            }
                        }
                        let cyclic = component.len() > 1 || self.successors(v).any(|s| s == v);
                        if cyclic {
                            component.sort_unstable();
                            components.push(component);
                        }
                    }
                }
            }
        }
        components.sort();
        components
    }

    /// Shortest path `from -> to` (inclusive of `from`, exclusive of `to`)
    /// staying inside `within`. `from == to` yields a shortest cycle.
    fn path(&self, within: &[bool], from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.node_count];
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; self.node_count];
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for s in self.successors(v) {
                if !within[s] {
                    continue;
                }
                if s == to {
                    let mut path = vec![v];
                    let mut cur = v;
                    while cur != from {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if !seen[s] {
                    seen[s] = true;
                    parent[s] = v;
                    queue.push_back(s);
                }
            }
        }
        None
    }

    /// A closed walk inside one strongly connected component visiting every
    /// node of `stops` in order. `stops` must be nonempty and lie in
    /// `component`.
    pub fn closed_walk(&self, component: &[usize], stops: &[usize]) -> Vec<usize> {
        let mut within = vec![false; self.node_count];
        for &v in component {
            within[v] = true;
        }
        let mut walk = Vec::new();
        for (i, &from) in stops.iter().enumerate() {
            let to = stops[(i + 1) % stops.len()];
            walk.extend(self.path(&within, from, to).expect("nodes share a component"));
        }
        walk
    }

    /// The periodic sequence whose windows are the nodes of a closed walk.
    pub fn walk_to_cycle(&self, walk: &[usize]) -> Vec<GroupElement> {
        walk.iter().map(|&v| self.alphabet[self.digits(v)[0]].clone()).collect()
    }
}

/// A method reduced to a bank of sliding kernels of common width. Its value
/// on a sequence is the sum of the component limits.
#[derive(Debug, Clone)]
pub struct KernelBank {
    model: GroupModel,
    width: usize,
    kernels: Vec<Vec<Scalar>>,
}

impl KernelBank {
    pub fn compile(method: &MethodDescriptor, model: GroupModel) -> Result<Self> {
        method.check_model(model)?;
        let bank = method
            .kernel_bank()
            .ok_or_else(|| Error::Unsupported(format!("{method} has no exact window-graph form")))?;
        let width = bank.iter().map(Vec::len).max().unwrap_or(1);
        let kernels = bank
            .iter()
            .map(|coefficients| coefficients.iter().map(|c| model.scalar(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelBank { model, width, kernels })
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Component kernel values on one window.
    pub fn label(&self, window: &[&GroupElement]) -> Vec<GroupElement> {
        let model = self.model;
        self.kernels
            .iter()
            .map(|kernel| {
                kernel.iter().zip(window).fold(model.zero(), |acc, (c, x)| model.add(&acc, &model.scale(c, x)))
            })
            .collect()
    }

    /// The method value attached to a label class.
    pub fn value(&self, label: &[GroupElement]) -> GroupElement {
        label.iter().fold(self.model.zero(), |acc, v| self.model.add(&acc, v))
    }

    pub fn graph(&self, alphabet: Vec<GroupElement>) -> Result<WindowGraph> {
        WindowGraph::new(alphabet, self.width)
    }

    /// Labels of every node.
    pub fn labels(&self, graph: &WindowGraph) -> Vec<Vec<GroupElement>> {
        (0..graph.node_count()).map(|v| self.label(&graph.tuple(v))).collect()
    }

    /// Labels of every node after mapping each window entry through `f`.
    pub fn labels_by(&self, graph: &WindowGraph, f: impl Fn(&GroupElement) -> GroupElement) -> Vec<Vec<GroupElement>> {
        (0..graph.node_count())
            .map(|v| {
                let window: Vec<GroupElement> = graph.tuple(v).into_iter().map(&f).collect();
                self.label(&window.iter().collect::<Vec<_>>())
            })
            .collect()
    }
}

/// Nodes grouped by label, classes in label order.
pub fn label_classes(labels: &[Vec<GroupElement>]) -> BTreeMap<Vec<GroupElement>, Vec<usize>> {
    let mut classes: BTreeMap<Vec<GroupElement>, Vec<usize>> = BTreeMap::new();
    for (v, label) in labels.iter().enumerate() {
        classes.entry(label.clone()).or_default().push(v);
    }
    classes
}

pub(crate) fn membership(graph: &WindowGraph, nodes: &[usize]) -> Vec<bool> {
    let mut members = vec![false; graph.node_count()];
    for &v in nodes {
        members[v] = true;
    }
    members
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn residues(xs: &[u64]) -> Vec<GroupElement> {
        xs.iter().map(|&x| GroupElement::Residue(x)).collect()
    }

    #[test]
    fn node_and_edge_counts() {
        for (k, w) in [(1, 1), (2, 1), (2, 3), (3, 2), (4, 2)] {
            let g = WindowGraph::new(residues(&(0..k).collect::<Vec<_>>()), w).unwrap();
            assert_eq!(g.node_count(), (k as usize).pow(w as u32));
            for v in 0..g.node_count() {
                let succ: Vec<_> = g.successors(v).collect();
                assert_eq!(succ.len(), k as usize);
                for s in succ {
                    // s is v shifted left by one
                    assert_eq!(g.digits(v)[1..], g.digits(s)[..w - 1]);
                    assert!(g.predecessors(s).any(|p| p == v));
                }
            }
        }
    }

    #[test]
    fn cycle_detection_and_components() {
        let g = WindowGraph::new(residues(&[0, 1]), 2).unwrap();
        // nodes 00=0, 01=1, 10=2, 11=3; 01 -> 10 -> 01 is a cycle
        assert!(g.has_cycle(&[false, true, true, false]));
        assert!(!g.has_cycle(&[false, true, false, false]));
        assert!(g.has_cycle(&[true, false, false, false]));
        let comps = g.cyclic_components(&[true, true, true, true]);
        assert_eq!(comps, vec![vec![0, 1, 2, 3]]);
        let comps = g.cyclic_components(&[true, true, false, true]);
        assert_eq!(comps, vec![vec![0], vec![3]]);
        let walk = g.closed_walk(&[0, 1, 2, 3], &[1, 3]);
        let cycle = g.walk_to_cycle(&walk);
        assert!(cycle.contains(&GroupElement::Residue(1)));
        assert_eq!(walk.len(), cycle.len());
    }

    #[test]
    fn empty_alphabet_has_no_nodes() {
        let g = WindowGraph::new(Vec::new(), 2).unwrap();
        assert_eq!(g.node_count(), 0);
        assert!(!g.has_cycle(&[]));
    }

    #[test]
    fn oversized_graphs_are_refused() {
        let alphabet: Vec<_> = (0..100).map(|i| GroupElement::Rational(Rational::from_integer(i))).collect();
        assert!(matches!(WindowGraph::new(alphabet, 5), Err(Error::BudgetExceeded { .. })));
    }
}
