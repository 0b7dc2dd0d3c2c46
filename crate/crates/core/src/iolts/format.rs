//! Line-oriented model file format.
//!
//! ```text
//! states: s0 s1
//! initial: s0
//! inputs: a
//! outputs: x
//! transitions:
//! s0 a s1
//! s1 x s0
//! ```
//!
//! `#` starts a comment. Sections appear exactly once, in this order.

use std::collections::HashMap;
use std::fmt::Write;

use super::{Iolts, Label, Transition};
use crate::action::{Action, QUIESCENCE, TAU};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ParseMode {
    /// User models: reserved names rejected, δ only as a completed output.
    Model,
    /// Test purposes: `pass`/`fail` states and δ among the inputs.
    TestPurpose,
}

const SECTIONS: [&str; 5] = ["states", "initial", "inputs", "outputs", "transitions"];

pub fn parse_model(text: &str) -> Result<Iolts> {
    parse_with(text, ParseMode::Model)
}

pub(crate) fn parse_with(text: &str, mode: ParseMode) -> Result<Iolts> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut headers: Vec<Vec<&str>> = Vec::with_capacity(4);
    for section in SECTIONS {
        let Some((line, content)) = lines.next() else {
            return Err(Error::MissingSection(section));
        };
        let (name, rest) = content.split_once(':').ok_or_else(|| Error::Syntax {
            line,
            msg: format!("expected `{section}:`"),
        })?;
        let name = name.trim();
        if name != section {
            return Err(if SECTIONS.contains(&name) {
                Error::Syntax {
                    line,
                    msg: format!("section `{name}` out of order, expected `{section}`"),
                }
            } else {
                Error::Syntax {
                    line,
                    msg: format!("expected `{section}:`, found `{name}`"),
                }
            });
        }
        let items: Vec<&str> = rest.split_whitespace().collect();
        match section {
            "states" if items.is_empty() => {
                return Err(Error::Syntax {
                    line,
                    msg: "at least one state required".into(),
                })
            }
            "initial" if items.len() != 1 => {
                return Err(Error::Syntax {
                    line,
                    msg: "exactly one initial state required".into(),
                })
            }
            "transitions" if !items.is_empty() => {
                return Err(Error::Syntax {
                    line,
                    msg: "transitions start on the next line".into(),
                })
            }
            _ => {}
        }
        if section != "transitions" {
            headers.push(items);
        }
    }

    let states: Vec<String> = headers[0].iter().map(|s| s.to_string()).collect();
    let index: HashMap<&str, usize> = headers[0]
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();
    let initial = *index
        .get(headers[1][0])
        .ok_or_else(|| Error::UnknownState(headers[1][0].to_string()))?;
    let inputs = declare(&headers[2], mode == ParseMode::TestPurpose)?;
    let outputs = declare(&headers[3], mode == ParseMode::Model)?;

    let mut transitions = Vec::new();
    for (line, content) in lines {
        let parts: Vec<&str> = content.split_whitespace().collect();
        let [src, label, dst] = parts[..] else {
            if let Some(name) = content
                .split_once(':')
                .map(|(n, _)| n.trim())
                .filter(|n| SECTIONS.contains(n))
            {
                return Err(Error::Syntax {
                    line,
                    msg: format!("duplicate section `{name}`"),
                });
            }
            return Err(Error::Syntax {
                line,
                msg: "expected `<src> <label> <dst>`".into(),
            });
        };
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownState(s.to_string()))
        };
        let label = match label {
            TAU => Label::Tau,
            QUIESCENCE => {
                let q = Action::quiescence();
                if !inputs.contains(&q) && !outputs.contains(&q) {
                    return Err(Error::Reserved(QUIESCENCE.into()));
                }
                Label::Action(q)
            }
            name => {
                let a = Action::new(name).map_err(|_| Error::UnknownLabel(name.to_string()))?;
                if !inputs.contains(&a) && !outputs.contains(&a) {
                    return Err(Error::UnknownLabel(name.to_string()));
                }
                Label::Action(a)
            }
        };
        transitions.push(Transition::new(lookup(src)?, label, lookup(dst)?));
    }

    match mode {
        ParseMode::Model => Iolts::new(states, initial, inputs, outputs, transitions),
        ParseMode::TestPurpose => Iolts::new_relaxed(states, initial, inputs, outputs, transitions),
    }
}

fn declare(names: &[&str], allow_quiescence: bool) -> Result<Vec<Action>> {
    names
        .iter()
        .map(|&n| {
            if n == QUIESCENCE && allow_quiescence {
                Ok(Action::quiescence())
            } else {
                Action::new(n)
            }
        })
        .collect()
}

/// Canonical text: sections in fixed order, single spaces, transitions in
/// model order, no comments.
pub fn serialize_model(m: &Iolts) -> String {
    let mut out = String::new();
    let join = |v: &mut dyn Iterator<Item = String>| v.fold(String::new(), |acc, s| acc + " " + &s);
    let _ = writeln!(out, "states:{}", join(&mut m.states().iter().cloned()));
    let _ = writeln!(out, "initial: {}", m.state_name(m.initial()));
    let _ = writeln!(
        out,
        "inputs:{}",
        join(&mut m.inputs().iter().map(Action::to_string))
    );
    let _ = writeln!(
        out,
        "outputs:{}",
        join(&mut m.outputs().iter().map(Action::to_string))
    );
    out.push_str("transitions:\n");
    for t in m.transitions() {
        let _ = writeln!(
            out,
            "{} {} {}",
            m.state_name(t.source),
            t.label,
            m.state_name(t.target)
        );
    }
    out
}
