use std::collections::{BTreeSet, HashSet};

use crate::action::Word;
use crate::error::Result;
use crate::fsa::search::{distance_to_accepting, shortest_suffix, BfsTree};
use crate::fsa::{intersect, Dfsa};

/// Fault witnesses covering the product of `iut` and `suite`.
///
/// Every product transition lying on some path from the initial state to
/// an accepting state is traversed by at least one returned word. For each
/// such transition the candidate word is the shortest prefix reaching it,
/// the transition itself and the shortest suffix into acceptance.
/// Candidates are taken shortest-first (ties in alphabet order) while they
/// still cover something new, so the first word is the overall shortest
/// witness. Returns an empty list iff the product language is empty.
pub fn witnesses_transition_cover(iut: &Dfsa, suite: &Dfsa) -> Result<Vec<Word>> {
    let product = intersect(iut, suite)?;
    Ok(cover(&product))
}

pub(crate) fn cover(product: &Dfsa) -> Vec<Word> {
    let tree = BfsTree::new(product);
    let dist = distance_to_accepting(product);

    let relevant: HashSet<(usize, usize)> = product
        .transitions()
        .filter(|&(s, _, t)| tree.reached(s) && dist[t].is_some())
        .map(|(s, sym, _)| (s, sym))
        .collect();

    let candidates: BTreeSet<(usize, Vec<usize>)> = relevant
        .iter()
        .map(|&(s, sym)| {
            let t = product.next(s, sym).unwrap();
            let mut word = tree.path_to(s);
            word.push(sym);
            word.extend(shortest_suffix(product, &dist, t));
            (word.len(), word)
        })
        .collect();

    let mut covered: HashSet<(usize, usize)> = HashSet::new();
    let mut out = Vec::new();
    if product.is_accepting(product.initial()) {
        // ε is a fault word on its own; it traverses nothing
        out.push(Word::new());
    }
    for (_, word) in candidates {
        let mut s = product.initial();
        let mut fresh = false;
        for &sym in &word {
            fresh |= covered.insert((s, sym));
            s = product.next(s, sym).unwrap();
        }
        if fresh {
            out.push(product.word_of(&word));
        }
    }
    out
}
