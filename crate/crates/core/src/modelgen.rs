//! Seeded random models, submachines, mutants and angelic input-enabling.
//!
//! All randomness comes from a SplitMix64 stream, so a seed reproduces the
//! same model bit for bit. Integer draws use the high half of a 64×64-bit
//! product, real draws the top 53 bits.

use std::collections::HashSet;
use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::action::Action;
use crate::conformance::check_ioco;
use crate::error::{Error, Result};
use crate::iolts::{serialize_model, Iolts, Label, Transition};

/// Seeded random source used by every generator.
#[derive(Clone, Debug)]
pub struct Stream(SplitMix64);

impl Stream {
    pub fn new(seed: u64) -> Stream {
        Stream(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub states: usize,
    pub inputs: Vec<Action>,
    pub outputs: Vec<Action>,
    pub deterministic: bool,
    pub input_enabled: bool,
    /// Probability of a transition per (state, label) beyond the spanning
    /// tree and input enabling.
    pub density: f64,
    /// Probability of a τ-move per state; nondeterministic models only.
    pub tau: f64,
    pub seed: u64,
}

impl GenParams {
    /// Deterministic, input-enabled, density 0.3, with inputs `i0 …` and
    /// outputs `o0 …`.
    pub fn new(states: usize, inputs: usize, outputs: usize, seed: u64) -> GenParams {
        GenParams {
            states,
            inputs: numbered("i", inputs),
            outputs: numbered("o", outputs),
            deterministic: true,
            input_enabled: true,
            density: 0.3,
            tau: 0.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if self.states == 0 {
            return bad("at least one state required");
        }
        if !(0.0..=1.0).contains(&self.density) || !(0.0..=1.0).contains(&self.tau) {
            return bad("density and tau must lie in [0, 1]");
        }
        if self.input_enabled && self.density == 0.0 && !self.inputs.is_empty() {
            return bad("input-enabled models need a positive density");
        }
        if self.deterministic && self.tau > 0.0 {
            return bad("deterministic models have no τ-moves");
        }
        if self.states > 1 && self.inputs.is_empty() && self.outputs.is_empty() {
            return bad("more than one state needs at least one label");
        }
        Ok(())
    }

    pub fn provenance(&self) -> String {
        format!(
            "# generator: seed={}, states={}, inputs={}, outputs={}, density={}, deterministic={}, input_enabled={}",
            self.seed,
            self.states,
            self.inputs.len(),
            self.outputs.len(),
            self.density,
            self.deterministic,
            self.input_enabled
        )
    }
}

fn numbered(prefix: &str, n: usize) -> Vec<Action> {
    (0..n)
        .map(|i| Action::new(&format!("{prefix}{i}")).unwrap())
        .collect()
}

/// A random model reachable from its initial state `s0`.
///
/// A random spanning tree comes first, then the missing inputs when input
/// enabling is requested, then one draw per (state, label) at `density`,
/// then τ-moves. Transitions are listed by source, label and target.
pub fn random_iolts(p: &GenParams) -> Result<Iolts> {
    p.validate()?;
    let mut rng = Stream::new(p.seed);
    let n = p.states;
    let labels: Vec<Action> = p.inputs.iter().chain(&p.outputs).cloned().collect();
    let mut edges: Vec<(usize, Option<usize>, usize)> = Vec::new();
    let mut present: HashSet<(usize, Option<usize>, usize)> = HashSet::new();
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut add = |s, l: Option<usize>, t, edges: &mut Vec<_>, used: &mut HashSet<_>| {
        if present.insert((s, l, t)) {
            edges.push((s, l, t));
            if let Some(l) = l {
                used.insert((s, l));
            }
        }
    };

    for s in 1..n {
        let free = |q: usize, used: &HashSet<(usize, usize)>| {
            (0..labels.len())
                .filter(|&l| !used.contains(&(q, l)))
                .collect::<Vec<_>>()
        };
        let parents: Vec<usize> = (0..s)
            .filter(|&q| !p.deterministic || !free(q, &used).is_empty())
            .collect();
        let parent = *rng.pick(&parents);
        let choices = if p.deterministic {
            free(parent, &used)
        } else {
            (0..labels.len()).collect()
        };
        let label = *rng.pick(&choices);
        add(parent, Some(label), s, &mut edges, &mut used);
    }
    if p.input_enabled {
        for s in 0..n {
            for l in 0..p.inputs.len() {
                if !used.contains(&(s, l)) {
                    let t = rng.below(n);
                    add(s, Some(l), t, &mut edges, &mut used);
                }
            }
        }
    }
    for s in 0..n {
        for l in 0..labels.len() {
            let taken = used.contains(&(s, l));
            if rng.chance(p.density) && !(p.deterministic && taken) {
                let t = rng.below(n);
                add(s, Some(l), t, &mut edges, &mut used);
            }
        }
    }
    if !p.deterministic && n > 1 {
        for s in 0..n {
            if rng.chance(p.tau) {
                let t = (s + 1 + rng.below(n - 1)) % n;
                add(s, None, t, &mut edges, &mut used);
            }
        }
    }

    edges.sort_by_key(|&(s, l, t)| (s, l.map_or(0, |l| l + 1), t));
    let transitions = edges
        .into_iter()
        .map(|(s, l, t)| {
            Transition::new(
                s,
                l.map_or(Label::Tau, |l| Label::Action(labels[l].clone())),
                t,
            )
        })
        .collect();
    Iolts::new(
        (0..n).map(|i| format!("s{i}")).collect(),
        0,
        p.inputs.clone(),
        p.outputs.clone(),
        transitions,
    )
}

const SUBMACHINE_ATTEMPTS: usize = 64;

/// Drops each output transition with probability `1 - keep` and removes
/// unreachable states, resampling until the result is `ioco` the source.
/// Falls back to the unchanged model if no sample conforms.
pub fn submachine(spec: &Iolts, keep: f64, seed: u64) -> Result<Iolts> {
    if !(keep > 0.0 && keep <= 1.0) {
        return Err(Error::InvalidParameter(
            "keep fraction must lie in (0, 1]".into(),
        ));
    }
    let spec = spec.strip_quiescence();
    if keep == 1.0 {
        return Ok(spec);
    }
    let mut rng = Stream::new(seed);
    for attempt in 0..SUBMACHINE_ATTEMPTS {
        let kept: Vec<Transition> = spec
            .transitions()
            .iter()
            .filter(|t| {
                let output = t.label.action().is_some_and(|a| spec.is_output(a));
                // draw for every output transition so attempts stay aligned
                !output || rng.chance(keep)
            })
            .cloned()
            .collect();
        let candidate = prune_unreachable(&spec.with_transitions(kept));
        if check_ioco(&spec, &candidate)?.conforms {
            return Ok(candidate);
        }
        log::debug!("submachine attempt {attempt} broke conformance, resampling");
    }
    log::debug!(
        "submachine: no conforming sample in {SUBMACHINE_ATTEMPTS} attempts, keeping the model"
    );
    Ok(spec)
}

/// Removes states unreachable from the initial state, keeping the order of
/// the others.
pub fn prune_unreachable(m: &Iolts) -> Iolts {
    let n = m.num_states();
    let mut seen = vec![false; n];
    let mut stack = vec![m.initial()];
    seen[m.initial()] = true;
    while let Some(s) = stack.pop() {
        for t in m.outgoing(s) {
            if !seen[t.target] {
                seen[t.target] = true;
                stack.push(t.target);
            }
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut states = Vec::new();
    for s in (0..n).filter(|&s| seen[s]) {
        index[s] = states.len();
        states.push(m.state_name(s).to_string());
    }
    let transitions = m
        .transitions()
        .iter()
        .filter(|t| seen[t.source])
        .map(|t| Transition::new(index[t.source], t.label.clone(), index[t.target]))
        .collect();
    m.rebuild(states, index[m.initial()], transitions)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Edit {
    Retarget {
        source: String,
        label: String,
        from: String,
        to: String,
    },
    Relabel {
        source: String,
        from: String,
        to: String,
        target: String,
    },
    /// A fresh state copying the outgoing transitions of `copy_of`, entered
    /// by retargeting one transition.
    Grow {
        state: String,
        copy_of: String,
        source: String,
        label: String,
        from: String,
    },
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edit::Retarget {
                source,
                label,
                from,
                to,
            } => write!(f, "{source} {label} {from}->{to}"),
            Edit::Relabel {
                source,
                from,
                to,
                target,
            } => write!(f, "{source} {from}->{to} {target}"),
            Edit::Grow {
                state,
                copy_of,
                source,
                label,
                from,
            } => {
                write!(f, "+{state}({copy_of}) {source} {label} {from}->{state}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mutant {
    pub model: Iolts,
    pub edits: Vec<Edit>,
    pub seed: u64,
    pub rate: f64,
}

impl Mutant {
    pub fn provenance(&self) -> String {
        let edits: Vec<String> = self.edits.iter().map(Edit::to_string).collect();
        format!(
            "# generator: seed={}, rate={}, edits={}",
            self.seed,
            self.rate,
            edits.join("; ")
        )
    }

    /// The model file text followed by the provenance comment.
    pub fn to_text(&self) -> String {
        serialize_model(&self.model) + &self.provenance() + "\n"
    }
}

/// Edits `⌈rate·|T|⌉` distinct transitions of `m`, each by a retarget or a
/// same-class relabel drawn uniformly from the edits that keep
/// determinism and input-enabledness when `m` has them. With `grow > 0`,
/// that many fresh states are added first.
pub fn mutate(m: &Iolts, rate: f64, seed: u64, grow: usize) -> Result<Mutant> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(
            "mutation rate must lie in (0, 1]".into(),
        ));
    }
    let base = m.strip_quiescence();
    if base.transitions().is_empty() {
        return Err(Error::InvalidParameter("no transitions to mutate".into()));
    }
    let mut rng = Stream::new(seed);
    let mut states: Vec<String> = base.states().to_vec();
    let mut transitions: Vec<Transition> = base.transitions().to_vec();
    let mut edits = Vec::new();

    for g in 0..grow {
        let mut name = format!("g{g}");
        while states.contains(&name) {
            name.push('_');
        }
        let copy_of = rng.below(states.len());
        let fresh = states.len();
        states.push(name.clone());
        let copies: Vec<Transition> = transitions
            .iter()
            .filter(|t| t.source == copy_of)
            .map(|t| Transition::new(fresh, t.label.clone(), t.target))
            .collect();
        let entry = rng.below(transitions.len());
        let t = &mut transitions[entry];
        edits.push(Edit::Grow {
            state: name,
            copy_of: states[copy_of].clone(),
            source: states[t.source].clone(),
            label: t.label.to_string(),
            from: states[t.target].clone(),
        });
        t.target = fresh;
        transitions.extend(copies);
    }

    let k = (rate * base.transitions().len() as f64).ceil() as usize;
    let deterministic = base.is_deterministic();
    let input_enabled = base.is_input_enabled();
    let inputs = base.inputs().to_vec();
    let outputs = base.outputs().to_vec();
    let n = states.len();

    let mut order: Vec<usize> = (0..base.transitions().len()).collect();
    let mut applied = 0;
    for i in 0..order.len() {
        if applied == k {
            break;
        }
        let j = i + rng.below(order.len() - i);
        order.swap(i, j);
        let idx = order[i];
        let t = transitions[idx].clone();

        let exists = |src: usize, label: &Label, dst: usize, ts: &[Transition]| {
            ts.iter()
                .any(|u| u.source == src && &u.label == label && u.target == dst)
        };
        let mut candidates: Vec<Transition> = (0..n)
            .filter(|&q| q != t.target && !exists(t.source, &t.label, q, &transitions))
            .map(|q| Transition::new(t.source, t.label.clone(), q))
            .collect();
        if let Label::Action(a) = &t.label {
            let class = if base.is_input(a) { &inputs } else { &outputs };
            let still_enabled = !input_enabled
                || !base.is_input(a)
                || transitions
                    .iter()
                    .enumerate()
                    .any(|(o, u)| o != idx && u.source == t.source && u.label == t.label);
            for b in class.iter().filter(|b| *b != a) {
                let label = Label::Action(b.clone());
                let clash = if deterministic {
                    transitions
                        .iter()
                        .any(|u| u.source == t.source && u.label == label)
                } else {
                    exists(t.source, &label, t.target, &transitions)
                };
                if still_enabled && !clash {
                    candidates.push(Transition::new(t.source, label, t.target));
                }
            }
        }
        if candidates.is_empty() {
            continue;
        }
        let new = rng.pick(&candidates).clone();
        edits.push(if new.label == t.label {
            Edit::Retarget {
                source: states[t.source].clone(),
                label: t.label.to_string(),
                from: states[t.target].clone(),
                to: states[new.target].clone(),
            }
        } else {
            Edit::Relabel {
                source: states[t.source].clone(),
                from: t.label.to_string(),
                to: new.label.to_string(),
                target: states[t.target].clone(),
            }
        });
        transitions[idx] = new;
        applied += 1;
    }
    if applied < k {
        return Err(Error::InvalidParameter(format!(
            "only {applied} of {k} transitions admit a legal edit"
        )));
    }
    let model = base.rebuild(states, base.initial(), transitions);
    Ok(Mutant {
        model,
        edits,
        seed,
        rate,
    })
}

/// Adds an input self-loop wherever an input is not enabled.
pub fn angelic_input_enable(m: &Iolts) -> Iolts {
    let enabled: HashSet<(usize, &Action)> = m
        .transitions()
        .iter()
        .filter_map(|t| t.label.action().map(|a| (t.source, a)))
        .collect();
    let mut transitions = m.transitions().to_vec();
    for s in 0..m.num_states() {
        for a in m.inputs() {
            if !enabled.contains(&(s, a)) {
                transitions.push(Transition::new(s, Label::Action(a.clone()), s));
            }
        }
    }
    let out = m.with_transitions(transitions);
    if m.is_quiescence_completed() {
        out.mark_completed(m.outputs().to_vec())
    } else {
        out
    }
}
