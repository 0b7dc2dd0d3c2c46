use std::collections::{BTreeSet, VecDeque};

use super::Dfsa;
use crate::action::Word;

pub fn is_empty(a: &Dfsa) -> bool {
    shortest_witness(a).is_none()
}

/// A minimum-length accepted word. Among words of that length the one
/// smallest in alphabet order is returned.
pub fn shortest_witness(a: &Dfsa) -> Option<Word> {
    let tree = BfsTree::new(a);
    tree.order
        .iter()
        .find(|&&s| a.is_accepting(s))
        .map(|&s| a.word_of(&tree.path_to(s)))
}

/// Shortest paths from the initial state. Because states are expanded in
/// discovery order with symbols in alphabet order, the path recorded for
/// each state is the smallest among its shortest paths.
pub(crate) struct BfsTree {
    pub order: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    seen: Vec<bool>,
}

impl BfsTree {
    pub fn new(a: &Dfsa) -> Self {
        let n = a.num_states();
        let mut seen = vec![false; n];
        let mut parent = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([a.initial()]);
        seen[a.initial()] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for sym in 0..a.alphabet().len() {
                if let Some(t) = a.next(s, sym) {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((s, sym));
                        queue.push_back(t);
                    }
                }
            }
        }
        BfsTree {
            order,
            parent,
            seen,
        }
    }

    pub fn reached(&self, s: usize) -> bool {
        self.seen[s]
    }

    pub fn path_to(&self, mut s: usize) -> Vec<usize> {
        let mut path = Vec::new();
        while let Some((p, sym)) = self.parent[s] {
            path.push(sym);
            s = p;
        }
        path.reverse();
        path
    }
}

/// Length of the shortest path from each state to an accepting state.
pub(crate) fn distance_to_accepting(a: &Dfsa) -> Vec<Option<usize>> {
    let n = a.num_states();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, _, t) in a.transitions() {
        preds[t].push(s);
    }
    let mut dist = vec![None; n];
    let mut queue = VecDeque::new();
    for s in a.accepting_states() {
        dist[s] = Some(0);
        queue.push_back(s);
    }
    while let Some(t) = queue.pop_front() {
        let d = dist[t].unwrap();
        for &p in &preds[t] {
            if dist[p].is_none() {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

/// Smallest shortest word leading from `s` into an accepting state.
pub(crate) fn shortest_suffix(a: &Dfsa, dist: &[Option<usize>], mut s: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while let Some(d) = dist[s].filter(|&d| d > 0) {
        let (sym, t) = (0..a.alphabet().len())
            .find_map(|sym| {
                a.next(s, sym)
                    .filter(|&t| dist[t] == Some(d - 1))
                    .map(|t| (sym, t))
            })
            .expect("distance labels are consistent");
        out.push(sym);
        s = t;
    }
    out
}

/// All accepted words of length at most `depth`.
pub fn bounded_language(a: &Dfsa, depth: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(a.initial(), Vec::new())];
    while let Some((s, path)) = stack.pop() {
        if a.is_accepting(s) {
            out.insert(a.word_of(&path));
        }
        if path.len() == depth {
            continue;
        }
        for sym in 0..a.alphabet().len() {
            if let Some(t) = a.next(s, sym) {
                let mut p = path.clone();
                p.push(sym);
                stack.push((t, p));
            }
        }
    }
    out
}
