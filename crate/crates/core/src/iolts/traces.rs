use std::collections::{BTreeSet, HashSet};

use super::{Iolts, Label};
use crate::action::{Action, Word};

/// All observable traces of length at most `depth`, by exhaustive
/// exploration of individual paths. Serves as the reference for
/// [`determinize`](super::determinize); it shares no code with it.
pub fn traces_bounded(m: &Iolts, depth: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut frontier = saturate(m, HashSet::from([(Vec::new(), m.initial())]));
    for d in 0..=depth {
        out.extend(frontier.iter().map(|(w, _)| Word::from(w.clone())));
        if d == depth {
            break;
        }
        let mut next = HashSet::new();
        for (w, s) in &frontier {
            for t in m.outgoing(*s) {
                if let Label::Action(a) = &t.label {
                    let mut w2 = w.clone();
                    w2.push(a.clone());
                    next.insert((w2, t.target));
                }
            }
        }
        frontier = saturate(m, next);
    }
    out
}

fn saturate(m: &Iolts, mut set: HashSet<(Vec<Action>, usize)>) -> HashSet<(Vec<Action>, usize)> {
    let mut work: Vec<_> = set.iter().cloned().collect();
    while let Some((w, s)) = work.pop() {
        for t in m.outgoing(s).filter(|t| t.label.is_tau()) {
            let item = (w.clone(), t.target);
            if set.insert(item.clone()) {
                work.push(item);
            }
        }
    }
    set
}
