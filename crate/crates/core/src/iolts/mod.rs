//! Input/output labeled transition systems.

mod determinize;
mod format;
mod quiescence;
mod traces;

pub use determinize::determinize;
pub(crate) use format::parse_with;
pub(crate) use format::ParseMode;
pub use format::{parse_model, serialize_model};
pub use quiescence::{complete_quiescence, is_quiescent};
pub use traces::traces_bounded;

use std::collections::HashSet;

use crate::action::{is_identifier, is_reserved, Action};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Tau,
    Action(Action),
}

impl Label {
    pub fn action(&self) -> Option<&Action> {
        match self {
            Label::Tau => None,
            Label::Action(a) => Some(a),
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    pub fn is_quiescence(&self) -> bool {
        self.action().is_some_and(Action::is_quiescence)
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Tau => f.write_str(crate::action::TAU),
            Label::Action(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: usize,
    pub label: Label,
    pub target: usize,
}

impl Transition {
    pub fn new(source: usize, label: Label, target: usize) -> Self {
        Transition {
            source,
            label,
            target,
        }
    }
}

/// An IOLTS `(S, s0, L_I, L_U, T)`.
///
/// State order is declaration order and is preserved by every
/// transformation; the test generator relies on it. After quiescence
/// completion δ is the last output token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iolts {
    states: Vec<String>,
    initial: usize,
    inputs: Vec<Action>,
    outputs: Vec<Action>,
    transitions: Vec<Transition>,
    quiescence_completed: bool,
}

impl Iolts {
    /// Builds and validates a user model. δ may appear only as an output,
    /// and then the model must be exactly quiescence-completed.
    pub fn new(
        states: Vec<String>,
        initial: usize,
        inputs: Vec<Action>,
        outputs: Vec<Action>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let quiescence_completed = outputs.iter().any(Action::is_quiescence);
        let m = Iolts {
            states,
            initial,
            inputs,
            outputs,
            transitions,
            quiescence_completed,
        };
        m.validate(ParseMode::Model)?;
        if m.quiescence_completed {
            quiescence::check_completed(&m)?;
        }
        Ok(m)
    }

    /// Builds a model without the user-model restrictions on reserved
    /// names. Used for test purposes, whose input alphabet contains δ.
    pub(crate) fn new_relaxed(
        states: Vec<String>,
        initial: usize,
        inputs: Vec<Action>,
        outputs: Vec<Action>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let m = Iolts {
            states,
            initial,
            inputs,
            outputs,
            transitions,
            quiescence_completed: false,
        };
        m.validate(ParseMode::TestPurpose)?;
        Ok(m)
    }

    fn validate(&self, mode: ParseMode) -> Result<()> {
        let mut seen = HashSet::new();
        for s in &self.states {
            if !is_identifier(s) {
                return Err(Error::InvalidName(s.clone()));
            }
            let allowed = mode == ParseMode::TestPurpose && (s == "pass" || s == "fail");
            if is_reserved(s) && !allowed {
                return Err(Error::Reserved(s.clone()));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::Duplicate(s.clone()));
            }
        }
        if self.initial >= self.states.len() {
            return Err(Error::UnknownState(format!("#{}", self.initial)));
        }
        let mut labels = HashSet::new();
        for a in self.inputs.iter() {
            if a.is_quiescence() && mode != ParseMode::TestPurpose {
                return Err(Error::Reserved(a.to_string()));
            }
            if !labels.insert(a) {
                return Err(Error::Duplicate(a.to_string()));
            }
        }
        for a in self.outputs.iter() {
            if self.inputs.contains(a) {
                return Err(Error::NotDisjoint(a.to_string()));
            }
            if !labels.insert(a) {
                return Err(Error::Duplicate(a.to_string()));
            }
        }
        let n = self.states.len();
        for t in &self.transitions {
            if t.source >= n || t.target >= n {
                return Err(Error::UnknownState(format!("#{}", t.source.max(t.target))));
            }
            if let Label::Action(a) = &t.label {
                if !labels.contains(a) {
                    return Err(Error::UnknownLabel(a.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn inputs(&self) -> &[Action] {
        &self.inputs
    }

    /// Output tokens, including δ once the model is quiescence-completed.
    pub fn outputs(&self) -> &[Action] {
        &self.outputs
    }

    /// `L_U` without δ.
    pub fn user_outputs(&self) -> impl Iterator<Item = &Action> {
        self.outputs.iter().filter(|a| !a.is_quiescence())
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn is_quiescence_completed(&self) -> bool {
        self.quiescence_completed
    }

    /// Inputs followed by outputs, in declaration order.
    pub fn observable_alphabet(&self) -> Vec<Action> {
        self.inputs
            .iter()
            .chain(self.outputs.iter())
            .cloned()
            .collect()
    }

    pub fn is_input(&self, a: &Action) -> bool {
        self.inputs.contains(a)
    }

    pub fn is_output(&self, a: &Action) -> bool {
        self.outputs.contains(a)
    }

    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.source == state)
    }

    /// No τ-moves and at most one transition per `(source, label)`.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.transitions
            .iter()
            .all(|t| !t.label.is_tau() && seen.insert((t.source, &t.label)))
    }

    /// Every input is enabled by a direct transition at every state.
    pub fn is_input_enabled(&self) -> bool {
        let enabled: HashSet<(usize, &Action)> = self
            .transitions
            .iter()
            .filter_map(|t| t.label.action().map(|a| (t.source, a)))
            .collect();
        (0..self.num_states()).all(|s| self.inputs.iter().all(|a| enabled.contains(&(s, a))))
    }

    /// The model with all δ-transitions and the δ token removed.
    pub fn strip_quiescence(&self) -> Iolts {
        let mut m = self.clone();
        m.outputs.retain(|a| !a.is_quiescence());
        m.transitions.retain(|t| !t.label.is_quiescence());
        m.quiescence_completed = false;
        m
    }

    /// Same alphabets and initial state, new states and transitions.
    pub(crate) fn rebuild(
        &self,
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Transition>,
    ) -> Iolts {
        Iolts {
            states,
            initial,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            transitions,
            quiescence_completed: false,
        }
    }

    pub(crate) fn with_transitions(&self, transitions: Vec<Transition>) -> Iolts {
        self.rebuild(self.states.clone(), self.initial, transitions)
    }

    pub(crate) fn mark_completed(mut self, outputs: Vec<Action>) -> Iolts {
        self.outputs = outputs;
        self.quiescence_completed = true;
        self
    }
}

/// Returns the model quiescence-completed, completing a copy if needed.
pub fn ensure_quiescence(m: &Iolts) -> Iolts {
    if m.is_quiescence_completed() {
        m.clone()
    } else {
        complete_quiescence(m).expect("a model without δ can always be completed")
    }
}

/// Fails unless both models share `L_I` and `L_U` as sets.
pub fn check_same_alphabets(a: &Iolts, b: &Iolts) -> Result<()> {
    let set = |v: &mut dyn Iterator<Item = &Action>| v.cloned().collect::<HashSet<_>>();
    if set(&mut a.inputs.iter()) != set(&mut b.inputs.iter()) {
        return Err(Error::AlphabetMismatch("input alphabets differ".into()));
    }
    if set(&mut a.user_outputs()) != set(&mut b.user_outputs()) {
        return Err(Error::AlphabetMismatch("output alphabets differ".into()));
    }
    Ok(())
}
