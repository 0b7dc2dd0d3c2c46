use std::collections::HashMap;

use super::search::BfsTree;
use super::Dfsa;

/// Minimal complete automaton for `L(a)`, obtained by partition refinement
/// over the reachable part of the completion. States are numbered in
/// breadth-first order from the initial state, so equal languages over the
/// same alphabet order yield identical automata.
pub fn minimize(a: &Dfsa) -> Dfsa {
    let a = a.complete();
    let k = a.alphabet().len();
    let tree = BfsTree::new(&a);
    let live: Vec<usize> = tree.order.clone();

    let mut class: Vec<usize> = vec![usize::MAX; a.num_states()];
    for &s in &live {
        class[s] = a.is_accepting(s) as usize;
    }
    let mut num_classes = 0;
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![usize::MAX; a.num_states()];
        for &s in &live {
            let signature: Vec<usize> = (0..k).map(|sym| class[a.next(s, sym).unwrap()]).collect();
            let next_id = ids.len();
            refined[s] = *ids.entry((class[s], signature)).or_insert(next_id);
        }
        let stable = ids.len() == num_classes;
        num_classes = ids.len();
        class = refined;
        if stable {
            break;
        }
    }

    // quotient, renumbered breadth-first
    let mut rep: Vec<Option<usize>> = vec![None; num_classes];
    for &s in &live {
        rep[class[s]].get_or_insert(s);
    }
    let mut quotient = Dfsa::new(a.alphabet().to_vec(), false);
    for _ in 1..num_classes {
        quotient.add_state(false);
    }
    for c in 0..num_classes {
        let s = rep[c].unwrap();
        quotient.set_accepting(c, a.is_accepting(s));
        for sym in 0..k {
            quotient.set_next(c, sym, class[a.next(s, sym).unwrap()]);
        }
    }
    quotient.set_initial(class[a.initial()]);
    renumber_breadth_first(&quotient)
}

fn renumber_breadth_first(a: &Dfsa) -> Dfsa {
    let tree = BfsTree::new(a);
    let mut new_id = vec![usize::MAX; a.num_states()];
    for (i, &s) in tree.order.iter().enumerate() {
        new_id[s] = i;
    }
    let mut out = Dfsa::new(a.alphabet().to_vec(), a.is_accepting(tree.order[0]));
    for &s in &tree.order[1..] {
        out.add_state(a.is_accepting(s));
    }
    for &s in &tree.order {
        for sym in 0..a.alphabet().len() {
            if let Some(t) = a.next(s, sym) {
                out.set_next(new_id[s], sym, new_id[t]);
            }
        }
    }
    out
}
