use crate::action::{Action, Word};
use crate::error::{Error, Result};
use crate::iolts::{ensure_quiescence, Iolts, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    State { state: usize, level: usize },
    Fail,
}

/// Leveled acyclic unfolding of a deterministic specification.
///
/// There are `m·n + 1` levels of `n` nodes each, plus a fail node. A spec
/// transition `(i, l, j)` yields an edge inside a level when `j > i` and an
/// edge to the next level otherwise. Every output token (δ included) that
/// is undefined at a spec state leads to fail from each copy of that state.
/// Node ids are `level·n + state`, with fail last, so every edge increases
/// the id.
#[derive(Clone, Debug)]
pub struct Multigraph {
    n: usize,
    m: usize,
    levels: usize,
    alphabet: Vec<Action>,
    first_output: usize,
    initial_state: usize,
    adj: Vec<Vec<(usize, usize)>>,
}

pub fn build_multigraph(spec: &Iolts, m: usize) -> Result<Multigraph> {
    if m < 1 {
        return Err(Error::InvalidParameter(
            "the implementation state bound m must be at least 1".into(),
        ));
    }
    let spec = ensure_quiescence(spec);
    if !spec.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let n = spec.num_states();
    let levels = m * n + 1;
    let alphabet = spec.observable_alphabet();
    let first_output = spec.inputs().len();
    let k = alphabet.len();

    let mut moves = vec![vec![None; k]; n];
    for t in spec.transitions() {
        let Label::Action(a) = &t.label else {
            unreachable!("deterministic models have no τ")
        };
        let sym = alphabet.iter().position(|b| b == a).unwrap();
        moves[t.source][sym] = Some(t.target);
    }

    let fail = n * levels;
    let mut adj = vec![Vec::new(); fail + 1];
    for level in 0..levels {
        for i in 0..n {
            let id = level * n + i;
            for sym in 0..k {
                match moves[i][sym] {
                    Some(j) if j > i => adj[id].push((sym, level * n + j)),
                    Some(j) if level + 1 < levels => adj[id].push((sym, (level + 1) * n + j)),
                    Some(_) => {}
                    None if sym >= first_output => adj[id].push((sym, fail)),
                    None => {}
                }
            }
        }
    }
    Ok(Multigraph {
        n,
        m,
        levels,
        alphabet,
        first_output,
        initial_state: spec.initial(),
        adj,
    })
}

impl Multigraph {
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Implementation state bound.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Specification state count.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &[Action] {
        &self.alphabet
    }

    pub fn inputs(&self) -> &[Action] {
        &self.alphabet[..self.first_output]
    }

    /// Outputs, δ last.
    pub fn outputs(&self) -> &[Action] {
        &self.alphabet[self.first_output..]
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn node_id(&self, node: Node) -> usize {
        match node {
            Node::State { state, level } => level * self.n + state,
            Node::Fail => self.fail_id(),
        }
    }

    pub fn node(&self, id: usize) -> Node {
        if id == self.fail_id() {
            Node::Fail
        } else {
            Node::State {
                state: id % self.n,
                level: id / self.n,
            }
        }
    }

    pub fn initial_id(&self) -> usize {
        self.initial_state
    }

    pub fn fail_id(&self) -> usize {
        self.adj.len() - 1
    }

    /// Outgoing `(symbol, target id)` pairs in symbol order.
    pub fn edges(&self, id: usize) -> &[(usize, usize)] {
        &self.adj[id]
    }

    /// Structural acyclicity: every edge strictly increases the node id.
    pub fn is_acyclic(&self) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(id, es)| es.iter().all(|&(_, t)| t > id))
    }

    /// Nodes visited by `word` from the initial node, if it is a path.
    pub fn replay(&self, word: &[Action]) -> Option<Vec<Node>> {
        let mut id = self.initial_id();
        let mut out = vec![self.node(id)];
        for a in word {
            let sym = self.alphabet.iter().position(|b| b == a)?;
            id = self.adj[id].iter().find(|&&(s, _)| s == sym)?.1;
            out.push(self.node(id));
        }
        Some(out)
    }

    /// Number of distinct paths from the initial node to fail, saturating.
    pub fn count_fault_paths(&self) -> u128 {
        let mut count = vec![0u128; self.adj.len()];
        count[self.fail_id()] = 1;
        for id in (0..self.fail_id()).rev() {
            count[id] = self.adj[id]
                .iter()
                .fold(0u128, |acc, &(_, t)| acc.saturating_add(count[t]));
        }
        count[self.initial_id()]
    }

    fn reaches_fail(&self) -> Vec<bool> {
        let mut reach = vec![false; self.adj.len()];
        reach[self.fail_id()] = true;
        for id in (0..self.fail_id()).rev() {
            reach[id] = self.adj[id].iter().any(|&(_, t)| reach[t]);
        }
        reach
    }
}

/// Label sequences of paths from the initial node to fail, shortest first,
/// ties in alphabet order; at most `limit` of them.
pub fn enumerate_fault_paths(g: &Multigraph, limit: usize) -> Vec<Word> {
    fault_paths(g, limit)
}

pub(crate) fn fault_paths(g: &Multigraph, limit: usize) -> Vec<Word> {
    let reach = g.reaches_fail();
    let mut out = Vec::new();
    if limit == 0 || !reach[g.initial_id()] {
        return out;
    }
    // breadth-first arena of (node, parent entry, symbol); children are
    // appended in symbol order, so arena order is shortlex order
    let mut arena: Vec<(usize, usize, usize)> = vec![(g.initial_id(), usize::MAX, usize::MAX)];
    let word_of = |arena: &[(usize, usize, usize)], mut entry: usize, last: usize| {
        let mut symbols = vec![last];
        while arena[entry].1 != usize::MAX {
            symbols.push(arena[entry].2);
            entry = arena[entry].1;
        }
        symbols.reverse();
        symbols
            .into_iter()
            .map(|s| g.alphabet[s].clone())
            .collect::<Word>()
    };
    let mut cursor = 0;
    while cursor < arena.len() {
        let node = arena[cursor].0;
        for &(sym, target) in g.edges(node) {
            if target == g.fail_id() {
                out.push(word_of(&arena, cursor, sym));
                if out.len() == limit {
                    return out;
                }
            } else if reach[target] {
                arena.push((target, cursor, sym));
            }
        }
        cursor += 1;
    }
    out
}
