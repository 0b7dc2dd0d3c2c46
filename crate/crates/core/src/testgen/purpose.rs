use std::collections::HashSet;

use crate::action::{Action, Word};
use crate::error::{Error, Result};
use crate::iolts::{parse_with, serialize_model, Iolts, Label, ParseMode, Transition};

/// A test purpose: an IOLTS whose inputs are the implementation outputs
/// (δ included) and whose outputs are the implementation inputs, with
/// terminal `pass` and `fail` states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestPurpose {
    model: Iolts,
    pass: usize,
    fail: usize,
    path: Word,
}

impl TestPurpose {
    pub fn model(&self) -> &Iolts {
        &self.model
    }

    pub fn pass(&self) -> usize {
        self.pass
    }

    pub fn fail(&self) -> usize {
        self.fail
    }

    /// The label sequence leading from the initial state to fail.
    pub fn path(&self) -> &Word {
        &self.path
    }

    pub fn to_text(&self) -> String {
        serialize_model(&self.model)
    }

    /// Reads a test purpose in the model file format. `pass` and `fail`
    /// must be declared states and fail must be reachable by a chain that
    /// avoids pass.
    pub fn parse(text: &str) -> Result<TestPurpose> {
        let model = parse_with(text, ParseMode::TestPurpose)?;
        if model.outputs().iter().any(Action::is_quiescence) {
            return Err(Error::MalformedTestPurpose(
                "δ must be a test purpose input".into(),
            ));
        }
        let pass = model
            .state_index("pass")
            .ok_or_else(|| Error::MalformedTestPurpose("missing `pass` state".into()))?;
        let fail = model
            .state_index("fail")
            .ok_or_else(|| Error::MalformedTestPurpose("missing `fail` state".into()))?;
        let path = chain_to_fail(&model, pass, fail)?;
        Ok(TestPurpose {
            model,
            pass,
            fail,
            path,
        })
    }
}

fn chain_to_fail(model: &Iolts, pass: usize, fail: usize) -> Result<Word> {
    let mut s = model.initial();
    let mut word = Word::new();
    let mut seen = HashSet::new();
    while s != fail {
        if s == pass || !seen.insert(s) {
            return Err(Error::MalformedTestPurpose(
                "no pass-free chain to fail".into(),
            ));
        }
        let mut next = model.outgoing(s).filter(|t| t.target != pass);
        let (Some(t), None) = (next.next(), next.next()) else {
            return Err(Error::MalformedTestPurpose(format!(
                "state `{}` needs exactly one transition not leading to pass",
                model.state_name(s)
            )));
        };
        let Label::Action(a) = &t.label else {
            return Err(Error::MalformedTestPurpose("τ in test purpose".into()));
        };
        word.push(a.clone());
        s = t.target;
    }
    Ok(word)
}

/// Builds the test purpose for a multigraph fault path.
///
/// `outputs` is `L_U`; δ is appended to the test purpose inputs if absent.
/// The chain states are `t0 … t{k-1}` followed by `pass` and `fail`.
pub fn path_to_test_purpose(
    path: &[Action],
    inputs: &[Action],
    outputs: &[Action],
) -> Result<TestPurpose> {
    let mut tp_inputs: Vec<Action> = outputs
        .iter()
        .filter(|a| !a.is_quiescence())
        .cloned()
        .collect();
    tp_inputs.push(Action::quiescence());
    let tp_outputs = inputs.to_vec();

    let Some(last) = path.last() else {
        return Err(Error::MalformedPath("empty path".into()));
    };
    if let Some(a) = path
        .iter()
        .find(|a| !tp_inputs.contains(a) && !tp_outputs.contains(a))
    {
        return Err(Error::MalformedPath(format!("unknown token `{a}`")));
    }
    if !tp_inputs.contains(last) {
        return Err(Error::MalformedPath(format!(
            "last token `{last}` is not an output"
        )));
    }

    let k = path.len();
    let (pass, fail) = (k, k + 1);
    let mut states: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
    states.push("pass".into());
    states.push("fail".into());

    let mut transitions = Vec::new();
    let edge = |s, a: &Action, t| Transition::new(s, Label::Action(a.clone()), t);
    for (i, a) in path.iter().enumerate() {
        let target = if i + 1 == k { fail } else { i + 1 };
        transitions.push(edge(i, a, target));
        for u in tp_inputs.iter().filter(|u| *u != a) {
            transitions.push(edge(i, u, pass));
        }
        if !tp_outputs.contains(a) {
            if let Some(first) = tp_outputs.first() {
                transitions.push(edge(i, first, pass));
            }
        }
    }
    for terminal in [pass, fail] {
        for u in &tp_inputs {
            transitions.push(edge(terminal, u, terminal));
        }
    }

    let model = Iolts::new_relaxed(states, 0, tp_inputs, tp_outputs, transitions)?;
    Ok(TestPurpose {
        model,
        pass,
        fail,
        path: path.iter().cloned().collect(),
    })
}

/// Structural properties every generated test purpose satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TpInvariants {
    pub deterministic: bool,
    pub input_enabled: bool,
    pub output_deterministic: bool,
    /// Acyclic apart from self-loops on pass and fail.
    pub acyclic: bool,
    /// Neither pass nor fail can reach the other.
    pub verdicts_separated: bool,
}

impl TpInvariants {
    pub fn all(&self) -> bool {
        self.deterministic
            && self.input_enabled
            && self.output_deterministic
            && self.acyclic
            && self.verdicts_separated
    }
}

pub fn verify_tp_invariants(tp: &TestPurpose) -> TpInvariants {
    let m = &tp.model;
    let n = m.num_states();
    let terminal = |s: usize| s == tp.pass || s == tp.fail;

    let output_deterministic = (0..n).filter(|&s| !terminal(s)).all(|s| {
        let outs = m
            .outgoing(s)
            .filter(|t| t.label.action().is_some_and(|a| m.is_output(a)))
            .count();
        outs == usize::from(!m.outputs().is_empty())
    }) && (0..n).filter(|&s| terminal(s)).all(|s| {
        m.outgoing(s)
            .all(|t| t.label.action().is_some_and(|a| m.is_input(a)))
    });

    // Kahn's algorithm on the graph without terminal self-loops
    let edges: Vec<&Transition> = m
        .transitions()
        .iter()
        .filter(|t| !(terminal(t.source) && t.source == t.target))
        .collect();
    let mut indegree = vec![0usize; n];
    for t in &edges {
        indegree[t.target] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&s| indegree[s] == 0).collect();
    let mut removed = 0;
    while let Some(s) = ready.pop() {
        removed += 1;
        for t in edges.iter().filter(|t| t.source == s) {
            indegree[t.target] -= 1;
            if indegree[t.target] == 0 {
                ready.push(t.target);
            }
        }
    }
    let acyclic = removed == n;

    let reach = |from: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(s) = stack.pop() {
            for t in m.outgoing(s) {
                if !seen[t.target] {
                    seen[t.target] = true;
                    stack.push(t.target);
                }
            }
        }
        seen
    };
    let verdicts_separated = !reach(tp.pass)[tp.fail] && !reach(tp.fail)[tp.pass];

    TpInvariants {
        deterministic: m.is_deterministic(),
        input_enabled: m.is_input_enabled(),
        output_deterministic,
        acyclic,
        verdicts_separated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<Action> {
        v.iter()
            .map(|s| Action::parse_observable(s).unwrap())
            .collect()
    }

    fn edges(tp: &TestPurpose) -> Vec<String> {
        let m = tp.model();
        m.transitions()
            .iter()
            .map(|t| {
                format!(
                    "{} {} {}",
                    m.state_name(t.source),
                    t.label,
                    m.state_name(t.target)
                )
            })
            .collect()
    }

    #[test]
    fn single_output_path() {
        let tp = path_to_test_purpose(&names(&["x"]), &names(&["a"]), &names(&["x"])).unwrap();
        assert_eq!(tp.model().states(), &["t0", "pass", "fail"]);
        assert_eq!(
            edges(&tp),
            vec![
                "t0 x fail",
                "t0 delta pass",
                "t0 a pass",
                "pass x pass",
                "pass delta pass",
                "fail x fail",
                "fail delta fail",
            ]
        );
        assert!(verify_tp_invariants(&tp).all());
    }

    #[test]
    fn longer_path() {
        let tp = path_to_test_purpose(
            &names(&["a", "a", "b", "b", "x"]),
            &names(&["a", "b"]),
            &names(&["x"]),
        )
        .unwrap();
        let m = tp.model();
        assert_eq!(m.num_states(), 7);
        assert_eq!(tp.path().to_string(), "a a b b x");
        // chain states driven by an input let every output through to pass
        for i in 0..4 {
            let out: Vec<_> = m
                .outgoing(i)
                .map(|t| (t.label.to_string(), t.target))
                .collect();
            assert!(out.contains(&("x".into(), tp.pass())));
            assert!(out.contains(&("delta".into(), tp.pass())));
            assert_eq!(out.len(), 3);
        }
        let last: Vec<_> = m
            .outgoing(4)
            .map(|t| (t.label.to_string(), t.target))
            .collect();
        assert_eq!(
            last,
            vec![
                ("x".into(), tp.fail()),
                ("delta".into(), tp.pass()),
                ("a".into(), tp.pass())
            ]
        );
        assert!(verify_tp_invariants(&tp).all());
    }

    #[test]
    fn malformed_paths() {
        let (i, o) = (names(&["a"]), names(&["x"]));
        assert!(matches!(
            path_to_test_purpose(&[], &i, &o),
            Err(Error::MalformedPath(_))
        ));
        assert!(matches!(
            path_to_test_purpose(&names(&["a"]), &i, &o),
            Err(Error::MalformedPath(_))
        ));
        assert!(matches!(
            path_to_test_purpose(&names(&["y"]), &i, &o),
            Err(Error::MalformedPath(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let tp = path_to_test_purpose(
            &names(&["a", "delta", "x"]),
            &names(&["a", "b"]),
            &names(&["x", "y"]),
        )
        .unwrap();
        let back = TestPurpose::parse(&tp.to_text()).unwrap();
        assert_eq!(back, tp);
    }

    #[test]
    fn parse_rejects_missing_verdicts() {
        let text =
            "states: t0 pass\ninitial: t0\ninputs: x delta\noutputs: a\ntransitions:\nt0 x pass\n";
        assert!(matches!(
            TestPurpose::parse(text),
            Err(Error::MalformedTestPurpose(_))
        ));
    }

    #[test]
    fn detects_broken_invariants() {
        let text = "states: t0 pass fail\ninitial: t0\ninputs: x delta\noutputs: a\ntransitions:\n\
                    t0 x fail\nt0 delta pass\npass x pass\npass delta fail\nfail x fail\nfail delta fail\n";
        let tp = TestPurpose::parse(text).unwrap();
        let inv = verify_tp_invariants(&tp);
        assert!(!inv.verdicts_separated);
        assert!(!inv.output_deterministic);
        assert!(!inv.all());
    }
}
