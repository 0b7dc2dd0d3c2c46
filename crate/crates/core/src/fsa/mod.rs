//! Deterministic finite automata over action tokens.
//!
//! Transitions are stored densely as `state * |alphabet| + symbol`, with
//! `None` marking an undefined move. Symbols are indices into the alphabet,
//! whose order is the declaration order used for every tie-break.

mod minimize;
mod product;
mod regex;
pub(crate) mod search;

pub use minimize::minimize;
pub use product::{intersect, union};
pub use regex::{compile_regex, compile_regex_file, TokenRegex};
pub use search::{bounded_language, is_empty, shortest_witness};

use std::collections::HashMap;

use crate::action::{Action, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfsa {
    alphabet: Vec<Action>,
    next: Vec<Option<usize>>,
    accepting: Vec<bool>,
    initial: usize,
}

impl Dfsa {
    /// An automaton with a single state and no transitions.
    pub fn new(alphabet: Vec<Action>, initial_accepting: bool) -> Self {
        let mut a = Dfsa {
            next: Vec::new(),
            accepting: Vec::new(),
            alphabet,
            initial: 0,
        };
        a.add_state(initial_accepting);
        a
    }

    /// The complete one-state automaton accepting nothing.
    pub fn empty_language(alphabet: Vec<Action>) -> Self {
        Self::single_loop(alphabet, false)
    }

    /// The complete one-state automaton accepting every word.
    pub fn universal(alphabet: Vec<Action>) -> Self {
        Self::single_loop(alphabet, true)
    }

    fn single_loop(alphabet: Vec<Action>, accepting: bool) -> Self {
        let mut a = Self::new(alphabet, accepting);
        for sym in 0..a.alphabet.len() {
            a.set_next(0, sym, 0);
        }
        a
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        let id = self.accepting.len();
        self.accepting.push(accepting);
        self.next
            .extend(std::iter::repeat_n(None, self.alphabet.len()));
        id
    }

    pub fn set_initial(&mut self, state: usize) {
        assert!(state < self.num_states());
        self.initial = state;
    }

    pub fn set_accepting(&mut self, state: usize, accepting: bool) {
        self.accepting[state] = accepting;
    }

    pub fn set_next(&mut self, state: usize, symbol: usize, target: usize) {
        assert!(target < self.num_states());
        let k = self.alphabet.len();
        self.next[state * k + symbol] = Some(target);
    }

    pub fn alphabet(&self) -> &[Action] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter_map(|(i, &acc)| acc.then_some(i))
    }

    pub fn symbol(&self, action: &Action) -> Option<usize> {
        self.alphabet.iter().position(|a| a == action)
    }

    #[inline]
    pub fn next(&self, state: usize, symbol: usize) -> Option<usize> {
        self.next[state * self.alphabet.len() + symbol]
    }

    /// State reached from the initial state by `word`, if every move is defined.
    pub fn run(&self, word: &[Action]) -> Option<usize> {
        let mut s = self.initial;
        for a in word {
            s = self.next(s, self.symbol(a)?)?;
        }
        Some(s)
    }

    pub fn run_symbols(&self, symbols: &[usize]) -> Option<usize> {
        symbols
            .iter()
            .try_fold(self.initial, |s, &sym| self.next(s, sym))
    }

    pub fn accepts(&self, word: &[Action]) -> bool {
        self.run(word).is_some_and(|s| self.accepting[s])
    }

    pub fn is_complete(&self) -> bool {
        self.next.iter().all(Option::is_some)
    }

    /// Adds one non-accepting sink when some move is undefined.
    pub fn complete(&self) -> Dfsa {
        if self.is_complete() {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.add_state(false);
        for t in out.next.iter_mut() {
            if t.is_none() {
                *t = Some(sink);
            }
        }
        out
    }

    pub fn complement(&self) -> Dfsa {
        let mut out = self.complete();
        for acc in out.accepting.iter_mut() {
            *acc = !*acc;
        }
        out
    }

    /// The same automaton with its symbols permuted to follow `order`,
    /// which must be the same set of tokens.
    pub fn with_alphabet_order(&self, order: &[Action]) -> Result<Dfsa> {
        if order == self.alphabet.as_slice() {
            return Ok(self.clone());
        }
        let perm = alphabet_permutation(&self.alphabet, order)?;
        let k = order.len();
        let mut next = vec![None; self.num_states() * k];
        for s in 0..self.num_states() {
            for (new_sym, &old_sym) in perm.iter().enumerate() {
                next[s * k + new_sym] = self.next(s, old_sym);
            }
        }
        Ok(Dfsa {
            alphabet: order.to_vec(),
            next,
            accepting: self.accepting.clone(),
            initial: self.initial,
        })
    }

    /// Every defined move as `(source, symbol, target)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let k = self.alphabet.len();
        self.next
            .iter()
            .enumerate()
            .filter_map(move |(i, t)| t.map(|t| (i / k, i % k, t)))
    }

    pub(crate) fn word_of(&self, symbols: &[usize]) -> Word {
        symbols.iter().map(|&s| self.alphabet[s].clone()).collect()
    }
}

/// For each position in `order`, the index of the same token in `from`.
pub(crate) fn alphabet_permutation(from: &[Action], order: &[Action]) -> Result<Vec<usize>> {
    let index: HashMap<&Action, usize> = from.iter().enumerate().map(|(i, a)| (a, i)).collect();
    if index.len() != order.len() || from.len() != order.len() {
        return Err(mismatch(from, order));
    }
    order
        .iter()
        .map(|a| index.get(a).copied().ok_or_else(|| mismatch(from, order)))
        .collect()
}

fn mismatch(a: &[Action], b: &[Action]) -> Error {
    let show = |v: &[Action]| {
        v.iter()
            .map(Action::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    Error::AlphabetMismatch(format!("{{{}}} vs {{{}}}", show(a), show(b)))
}
