#![allow(dead_code)]

use ioconf::modelgen::{random_iolts, GenParams, Stream};
use ioconf::{Action, Iolts, Word};

pub const M1: &str =
    "states: s0 s1\ninitial: s0\ninputs: a\noutputs: x\ntransitions:\ns0 a s1\ns1 x s0\n";

/// Random model with up to `max_states` states; determinism, input
/// enabling, density and τ are drawn from `rng`.
pub fn random_model(rng: &mut Stream, max_states: usize, inputs: usize, outputs: usize) -> Iolts {
    let mut p = GenParams::new(1 + rng.below(max_states), inputs, outputs, rng.next_u64());
    p.deterministic = rng.chance(0.5);
    p.input_enabled = rng.chance(0.5);
    p.density = 0.1 + 0.4 * rng.unit();
    if !p.deterministic {
        p.tau = 0.3 * rng.unit();
    }
    random_iolts(&p).unwrap()
}

pub fn deterministic_model(
    seed: u64,
    states: usize,
    inputs: usize,
    outputs: usize,
    density: f64,
    input_enabled: bool,
) -> Iolts {
    let mut p = GenParams::new(states, inputs, outputs, seed);
    p.density = density;
    p.input_enabled = input_enabled;
    random_iolts(&p).unwrap()
}

/// Regex source with exactly `ops` operators over `alphabet`.
pub fn random_regex(rng: &mut Stream, alphabet: &[Action], ops: usize) -> String {
    if ops == 0 {
        return if rng.chance(0.1) {
            "%empty".into()
        } else {
            rng.pick(alphabet).to_string()
        };
    }
    match rng.below(3) {
        0 => format!("( {} ) *", random_regex(rng, alphabet, ops - 1)),
        k => {
            let left = rng.below(ops);
            let (l, r) = (
                random_regex(rng, alphabet, left),
                random_regex(rng, alphabet, ops - 1 - left),
            );
            if k == 1 {
                format!("( {l} ) ( {r} )")
            } else {
                format!("( {l} | {r} )")
            }
        }
    }
}

/// Every word of length at most `depth`.
pub fn all_words(alphabet: &[Action], depth: usize) -> Vec<Word> {
    let mut out = vec![Word::new()];
    let mut layer = vec![Word::new()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut w2 = w.clone();
                    w2.push(a.clone());
                    w2
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
