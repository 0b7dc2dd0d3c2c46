//! `ioco` and language-based conformance checking.
//!
//! Both checks work on determinized models, so nondeterministic and
//! underspecified specifications and implementations are handled alike.
//! Implementation inputs that are not enabled simply end exploration.

mod cover;

pub use cover::witnesses_transition_cover;

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::action::{Action, Word};
use crate::error::Result;
use crate::fsa::{self, Dfsa};
use crate::iolts::{check_same_alphabets, determinize, ensure_quiescence, Iolts};

/// Breadth-first parent links over state pairs: predecessor pair and symbol.
pub(crate) type Parents = HashMap<(usize, usize), Option<((usize, usize), usize)>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Ioco,
    Lang,
}

/// How fault witnesses are reported for a non-conforming pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WitnessStrategy {
    /// The single shortest fault word.
    #[default]
    Shortest,
    /// Words covering every transition of the fault-relevant product.
    Cover,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteStats {
    /// States of the determinized specification (`n_S`).
    pub spec_states: usize,
    /// States of the determinized implementation (`n_I`).
    pub iut_states: usize,
    /// States of the suite automaton, when one was built.
    pub suite_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub desirable_states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forbidden_states: Option<usize>,
    /// `(n_S + 1)² · n_D · n_F`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite_bound: Option<usize>,
    /// Size of the observable alphabet `n_L`, δ included.
    pub alphabet_size: usize,
    /// Pairs visited by the synchronized traversal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explored_pairs: Option<usize>,
}

impl SuiteStats {
    pub fn within_bound(&self) -> bool {
        match (self.suite_states, self.suite_bound) {
            (Some(s), Some(b)) => s <= b,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub relation: Relation,
    pub conforms: bool,
    pub witnesses: Vec<Word>,
    pub stats: SuiteStats,
}

pub fn check_ioco(spec: &Iolts, iut: &Iolts) -> Result<Verdict> {
    check_ioco_with(spec, iut, WitnessStrategy::Shortest)
}

/// Decides `iut ioco spec` by a breadth-first walk over pairs of
/// determinized states reachable by common words. A pair where the
/// implementation enables an output (δ included) the specification does
/// not is a fault.
pub fn check_ioco_with(spec: &Iolts, iut: &Iolts, strategy: WitnessStrategy) -> Result<Verdict> {
    let (spec, iut) = prepare(spec, iut)?;
    let ds = determinize(&spec);
    let di = determinize(&iut).with_alphabet_order(ds.alphabet())?;
    let first_output = spec.inputs().len();
    let k = ds.alphabet().len();

    let start = (ds.initial(), di.initial());
    let mut parent: Parents = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    let mut fault = None;
    'walk: while let Some((s, q)) = queue.pop_front() {
        for sym in 0..k {
            match (ds.next(s, sym), di.next(q, sym)) {
                (Some(s2), Some(q2)) => {
                    if let Entry::Vacant(e) = parent.entry((s2, q2)) {
                        e.insert(Some(((s, q), sym)));
                        queue.push_back((s2, q2));
                    }
                }
                (None, Some(_)) if sym >= first_output => {
                    fault = Some(((s, q), sym));
                    break 'walk;
                }
                _ => {}
            }
        }
    }

    let mut stats = SuiteStats {
        spec_states: ds.num_states(),
        iut_states: di.num_states(),
        alphabet_size: k,
        explored_pairs: Some(parent.len()),
        ..Default::default()
    };
    let witnesses = match (fault, strategy) {
        (None, _) => Vec::new(),
        (Some((mut pair, sym)), WitnessStrategy::Shortest) => {
            let mut symbols = vec![sym];
            while let Some((prev, s)) = parent[&pair] {
                symbols.push(s);
                pair = prev;
            }
            symbols.reverse();
            vec![ds.word_of(&symbols)]
        }
        (Some(_), WitnessStrategy::Cover) => {
            let suite = ioco_suite(&ds, first_output)?;
            stats.suite_states = Some(suite.num_states());
            witnesses_transition_cover(&di, &suite)?
        }
    };
    Ok(Verdict {
        relation: Relation::Ioco,
        conforms: witnesses.is_empty(),
        witnesses,
        stats,
    })
}

/// Decides `iut conf_{D,F} spec`: the implementation conforms iff none of
/// its traces lies in the fault suite built by [`build_fault_suite`].
pub fn check_lang(
    spec: &Iolts,
    iut: &Iolts,
    desirable: &Dfsa,
    forbidden: &Dfsa,
) -> Result<Verdict> {
    check_lang_with(spec, iut, desirable, forbidden, WitnessStrategy::Shortest)
}

pub fn check_lang_with(
    spec: &Iolts,
    iut: &Iolts,
    desirable: &Dfsa,
    forbidden: &Dfsa,
    strategy: WitnessStrategy,
) -> Result<Verdict> {
    let (spec, iut) = prepare(spec, iut)?;
    let ds = determinize(&spec);
    let di = determinize(&iut).with_alphabet_order(ds.alphabet())?;
    let d = desirable.with_alphabet_order(ds.alphabet())?.complete();
    let f = forbidden.with_alphabet_order(ds.alphabet())?.complete();
    let suite = suite_from_parts(&ds, &d, &f)?;

    let witnesses = match strategy {
        WitnessStrategy::Shortest => fsa::shortest_witness(&fsa::intersect(&di, &suite)?)
            .into_iter()
            .collect(),
        WitnessStrategy::Cover => witnesses_transition_cover(&di, &suite)?,
    };
    let stats = SuiteStats {
        spec_states: ds.num_states(),
        iut_states: di.num_states(),
        suite_states: Some(suite.num_states()),
        desirable_states: Some(d.num_states()),
        forbidden_states: Some(f.num_states()),
        suite_bound: Some(suite_bound(ds.num_states(), d.num_states(), f.num_states())),
        alphabet_size: ds.alphabet().len(),
        explored_pairs: None,
    };
    Ok(Verdict {
        relation: Relation::Lang,
        conforms: witnesses.is_empty(),
        witnesses,
        stats,
    })
}

/// Complete automaton accepting `(D ∩ ¬otr(S)) ∪ (F ∩ otr(S))`.
///
/// `desirable` and `forbidden` must be over the observable alphabet of the
/// quiescence-completed specification (δ included). They are completed
/// before use, and the result has at most `(n_S + 1)² · n_D · n_F` states
/// with `n_S` the determinized specification size.
pub fn build_fault_suite(spec: &Iolts, desirable: &Dfsa, forbidden: &Dfsa) -> Result<Dfsa> {
    let ds = determinize(&ensure_quiescence(spec));
    let d = desirable.with_alphabet_order(ds.alphabet())?.complete();
    let f = forbidden.with_alphabet_order(ds.alphabet())?.complete();
    suite_from_parts(&ds, &d, &f)
}

pub fn suite_bound(spec_states: usize, desirable_states: usize, forbidden_states: usize) -> usize {
    (spec_states + 1).pow(2) * desirable_states * forbidden_states
}

fn suite_from_parts(spec_traces: &Dfsa, d: &Dfsa, f: &Dfsa) -> Result<Dfsa> {
    let forbidden_specified = fsa::intersect(f, spec_traces)?;
    let desirable_unspecified = fsa::intersect(d, &spec_traces.complement())?;
    fsa::union(&forbidden_specified, &desirable_unspecified)
}

/// Automaton for `otr(S) · (L_U ∪ {δ})`, the desirable language under
/// which language conformance coincides with `ioco`.
pub fn output_extensions(spec: &Iolts) -> Dfsa {
    let spec = ensure_quiescence(spec);
    extensions_of(&determinize(&spec), spec.inputs().len())
}

fn extensions_of(spec_traces: &Dfsa, first_output: usize) -> Dfsa {
    // state (s, ended): s the spec state after the word (None once outside
    // otr(S)), ended when the last token was an output read inside otr(S)
    let k = spec_traces.alphabet().len();
    let start = (Some(spec_traces.initial()), false);
    let mut out = Dfsa::new(spec_traces.alphabet().to_vec(), false);
    let mut ids: HashMap<(Option<usize>, bool), usize> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some((s, ended)) = queue.pop_front() {
        let id = ids[&(s, ended)];
        for sym in 0..k {
            let next = (
                s.and_then(|s| spec_traces.next(s, sym)),
                s.is_some() && sym >= first_output,
            );
            let target = *ids.entry(next).or_insert_with(|| {
                queue.push_back(next);
                out.add_state(next.1)
            });
            out.set_next(id, sym, target);
        }
    }
    out
}

fn ioco_suite(spec_traces: &Dfsa, first_output: usize) -> Result<Dfsa> {
    let d = extensions_of(spec_traces, first_output);
    let f = Dfsa::empty_language(spec_traces.alphabet().to_vec());
    suite_from_parts(spec_traces, &d, &f)
}

fn prepare(spec: &Iolts, iut: &Iolts) -> Result<(Iolts, Iolts)> {
    check_same_alphabets(spec, iut)?;
    Ok((ensure_quiescence(spec), ensure_quiescence(iut)))
}

/// The observable alphabet of a quiescence-completed copy of `spec`, i.e.
/// the alphabet expected for desirable and forbidden languages.
pub fn suite_alphabet(spec: &Iolts) -> Vec<Action> {
    ensure_quiescence(spec).observable_alphabet()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsa::compile_regex;
    use crate::iolts::parse_model;

    const M1: &str =
        "states: s0 s1\ninitial: s0\ninputs: a\noutputs: x\ntransitions:\ns0 a s1\ns1 x s0\n";

    fn model(text: &str) -> Iolts {
        parse_model(text).unwrap()
    }

    fn m3() -> Iolts {
        model("states: q0 q1\ninitial: q0\ninputs: a\noutputs: x\ntransitions:\nq0 a q1\nq1 x q0\nq0 x q0\n")
    }

    fn m4() -> Iolts {
        model("states: q\ninitial: q\ninputs: a\noutputs: x\ntransitions:\n")
    }

    fn words(v: &Verdict) -> Vec<String> {
        v.witnesses.iter().map(Word::to_string).collect()
    }

    #[test]
    fn ioco_is_reflexive() {
        let v = check_ioco(&model(M1), &model(M1)).unwrap();
        assert!(v.conforms);
        assert!(v.witnesses.is_empty());
    }

    #[test]
    fn unexpected_initial_output() {
        let v = check_ioco(&model(M1), &m3()).unwrap();
        assert!(!v.conforms);
        assert_eq!(words(&v), vec!["x"]);
    }

    #[test]
    fn missing_input_truncates() {
        assert!(check_ioco(&model(M1), &m4()).unwrap().conforms);
    }

    #[test]
    fn visited_pairs_bounded() {
        let v = check_ioco(&model(M1), &m3()).unwrap();
        assert!(v.stats.explored_pairs.unwrap() <= v.stats.spec_states * v.stats.iut_states);
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let other = model("states: q\ninitial: q\ninputs: b\noutputs: x\ntransitions:\n");
        assert!(check_ioco(&model(M1), &other).is_err());
    }

    #[test]
    fn empty_languages_give_empty_suite() {
        let spec = model(M1);
        let alphabet = suite_alphabet(&spec);
        let none = Dfsa::empty_language(alphabet);
        let suite = build_fault_suite(&spec, &none, &none).unwrap();
        assert!(fsa::is_empty(&suite));
        assert!(check_lang(&spec, &m3(), &none, &none).unwrap().conforms);
    }

    #[test]
    fn specified_desirable_word_gives_empty_suite() {
        let spec = model(M1);
        let alphabet = suite_alphabet(&spec);
        let d = compile_regex("a x", &alphabet).unwrap();
        let none = Dfsa::empty_language(alphabet);
        assert!(fsa::is_empty(&build_fault_suite(&spec, &d, &none).unwrap()));
    }

    #[test]
    fn lang_reflexive() {
        let spec = model(M1);
        let alphabet = suite_alphabet(&spec);
        let d = compile_regex("( a | delta ) * a x", &alphabet).unwrap();
        let none = Dfsa::empty_language(alphabet);
        assert!(check_lang(&spec, &spec, &d, &none).unwrap().conforms);
    }

    #[test]
    fn lang_detects_unspecified_desirable_word() {
        let spec = model(M1);
        let iut = model("states: q0 q1 q2\ninitial: q0\ninputs: a\noutputs: x\ntransitions:\nq0 a q1\nq1 x q0\nq1 x q2\nq2 x q2\n");
        let alphabet = suite_alphabet(&spec);
        let d = compile_regex("a x x", &alphabet).unwrap();
        let none = Dfsa::empty_language(alphabet);
        let v = check_lang(&spec, &iut, &d, &none).unwrap();
        assert!(!v.conforms);
        assert_eq!(words(&v), vec!["a x x"]);
        assert!(v.stats.within_bound());
    }

    #[test]
    fn forbidden_specified_word_is_a_fault() {
        let spec = model(M1);
        let alphabet = suite_alphabet(&spec);
        let f = compile_regex("a x", &alphabet).unwrap();
        let none = Dfsa::empty_language(alphabet);
        let v = check_lang(&spec, &spec, &none, &f).unwrap();
        assert_eq!(words(&v), vec!["a x"]);
    }

    #[test]
    fn output_extension_language() {
        let d = output_extensions(&model(M1));
        for (w, expected) in [
            ("x", true),
            ("delta", true),
            ("a", false),
            ("a x", true),
            ("a delta", true),
            ("x x", false),
            ("a a", false),
        ] {
            assert_eq!(d.accepts(&Word::parse(w).unwrap()), expected, "{w}");
        }
    }

    #[test]
    fn ioco_witness_properties() {
        let spec = model(M1);
        let v = check_ioco_with(&spec, &m3(), WitnessStrategy::Cover).unwrap();
        let ds = determinize(&ensure_quiescence(&spec));
        let di = determinize(&ensure_quiescence(&m3()));
        assert_eq!(v.witnesses[0].to_string(), "x");
        for w in &v.witnesses {
            assert!(di.accepts(w));
            let (last, prefix) = w.split_last().unwrap();
            assert!(ds.accepts(prefix));
            assert!(!ds.accepts(w));
            assert!(spec.is_output(last) || last.is_quiescence());
        }
    }
}
