use std::collections::{HashMap, VecDeque};

use super::Dfsa;
use crate::error::Result;

/// Reachable product accepting `L(a) ∩ L(b)`. Operands may be partial.
/// The result uses the alphabet order of `a`.
pub fn intersect(a: &Dfsa, b: &Dfsa) -> Result<Dfsa> {
    let b = b.with_alphabet_order(a.alphabet())?;
    Ok(product(a, &b, |x, y| x && y))
}

/// Reachable product of the completed operands accepting `L(a) ∪ L(b)`.
pub fn union(a: &Dfsa, b: &Dfsa) -> Result<Dfsa> {
    let b = b.with_alphabet_order(a.alphabet())?.complete();
    Ok(product(&a.complete(), &b, |x, y| x || y))
}

fn product(a: &Dfsa, b: &Dfsa, accept: impl Fn(bool, bool) -> bool) -> Dfsa {
    let k = a.alphabet().len();
    let start = (a.initial(), b.initial());
    let mut out = Dfsa::new(
        a.alphabet().to_vec(),
        accept(a.is_accepting(start.0), b.is_accepting(start.1)),
    );
    let mut ids: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some((p, q)) = queue.pop_front() {
        let id = ids[&(p, q)];
        for sym in 0..k {
            let (Some(p2), Some(q2)) = (a.next(p, sym), b.next(q, sym)) else {
                continue;
            };
            let target = *ids.entry((p2, q2)).or_insert_with(|| {
                queue.push_back((p2, q2));
                out.add_state(accept(a.is_accepting(p2), b.is_accepting(q2)))
            });
            out.set_next(id, sym, target);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Action, Word};
    use crate::fsa::{compile_regex, is_empty};

    fn abx() -> Vec<Action> {
        ["a", "b", "x"]
            .iter()
            .map(|s| Action::new(s).unwrap())
            .collect()
    }

    #[test]
    fn intersect_with_complement_is_empty() {
        let a = compile_regex("( a | b ) * a x", &abx()).unwrap();
        assert!(is_empty(&intersect(&a, &a.complement()).unwrap()));
    }

    #[test]
    fn union_with_empty_is_identity() {
        let b = compile_regex("a ( b | x ) *", &abx()).unwrap();
        let u = union(&Dfsa::empty_language(abx()), &b).unwrap();
        for s in ["a", "a b x", "b", "", "a a"] {
            let w = Word::parse(s).unwrap();
            assert_eq!(u.accepts(&w), b.accepts(&w), "{s}");
        }
    }

    #[test]
    fn product_size_bound() {
        let a = compile_regex("( a | b ) * a x", &abx()).unwrap();
        let b = compile_regex("a * b x *", &abx()).unwrap();
        let p = intersect(&a, &b).unwrap();
        assert!(p.num_states() <= (a.num_states() + 1) * (b.num_states() + 1));
        let u = union(&a, &b).unwrap();
        assert!(u.num_states() <= (a.num_states() + 1) * (b.num_states() + 1));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let a = Dfsa::universal(abx());
        let b = Dfsa::universal(abx()[..2].to_vec());
        assert!(intersect(&a, &b).is_err());
        assert!(union(&a, &b).is_err());
    }
}
