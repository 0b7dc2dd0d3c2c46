use std::collections::{HashMap, VecDeque};

use super::{Iolts, Label};
use crate::fsa::Dfsa;

/// Subset construction with τ-closure. Every subset state is accepting,
/// so the automaton accepts exactly `otr(m)`; the empty subset is never
/// created, leaving undefined moves partial.
///
/// The alphabet is `m.observable_alphabet()`.
pub fn determinize(m: &Iolts) -> Dfsa {
    let alphabet = m.observable_alphabet();
    let k = alphabet.len();
    let n = m.num_states();
    let symbol: HashMap<_, _> = alphabet.iter().enumerate().map(|(i, a)| (a, i)).collect();

    let mut tau: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut moves: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); k]; n];
    for t in m.transitions() {
        match &t.label {
            Label::Tau => tau[t.source].push(t.target),
            Label::Action(a) => moves[t.source][symbol[a]].push(t.target),
        }
    }

    let closure = |seeds: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = seeds.collect();
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            if !std::mem::replace(&mut seen[s], true) {
                out.push(s);
                stack.extend(tau[s].iter().copied());
            }
        }
        out.sort_unstable();
        out
    };

    let init = closure(&mut std::iter::once(m.initial()));
    let mut dfa = Dfsa::new(alphabet, true);
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(init.clone(), 0)]);
    let mut queue = VecDeque::from([init]);
    while let Some(set) = queue.pop_front() {
        let id = ids[&set];
        for sym in 0..k {
            let mut targets = set
                .iter()
                .flat_map(|&s| moves[s][sym].iter().copied())
                .peekable();
            if targets.peek().is_none() {
                continue;
            }
            let next = closure(&mut targets);
            let target = match ids.get(&next) {
                Some(&t) => t,
                None => {
                    let t = dfa.add_state(true);
                    ids.insert(next.clone(), t);
                    queue.push_back(next);
                    t
                }
            };
            dfa.set_next(id, sym, target);
        }
    }
    dfa
}
