use super::{Iolts, Label, Transition};
use crate::action::Action;
use crate::error::{Error, Result};

/// A state is quiescent when it has no outgoing output and no τ-move.
pub fn is_quiescent(m: &Iolts, state: usize) -> bool {
    !m.outgoing(state).any(|t| match &t.label {
        Label::Tau => true,
        Label::Action(a) => !a.is_quiescence() && m.is_output(a),
    })
}

/// Adds a δ self-loop at every quiescent state and appends δ to the
/// output alphabet.
pub fn complete_quiescence(m: &Iolts) -> Result<Iolts> {
    if m.is_quiescence_completed() || m.transitions().iter().any(|t| t.label.is_quiescence()) {
        return Err(Error::AlreadyQuiescent);
    }
    let delta = Action::quiescence();
    let mut transitions = m.transitions().to_vec();
    transitions.extend(
        (0..m.num_states())
            .filter(|&s| is_quiescent(m, s))
            .map(|s| Transition::new(s, Label::Action(delta.clone()), s)),
    );
    let mut outputs = m.outputs().to_vec();
    outputs.push(delta);
    Ok(m.with_transitions(transitions).mark_completed(outputs))
}

/// Validates that the δ-transitions of `m` are exactly the quiescence loops.
pub(super) fn check_completed(m: &Iolts) -> Result<()> {
    for t in m.transitions().iter().filter(|t| t.label.is_quiescence()) {
        if t.source != t.target {
            return Err(Error::BadQuiescence(format!(
                "δ-move from `{}` is not a self-loop",
                m.state_name(t.source)
            )));
        }
        if !is_quiescent(m, t.source) {
            return Err(Error::BadQuiescence(format!(
                "state `{}` is not quiescent",
                m.state_name(t.source)
            )));
        }
    }
    for s in 0..m.num_states() {
        let loops = m.outgoing(s).filter(|t| t.label.is_quiescence()).count();
        if is_quiescent(m, s) && loops != 1 {
            return Err(Error::BadQuiescence(format!(
                "quiescent state `{}` needs exactly one δ loop",
                m.state_name(s)
            )));
        }
    }
    Ok(())
}
