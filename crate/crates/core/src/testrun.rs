//! Running test purposes against implementation models.
//!
//! A run explores every reachable state of the synchronous product of a
//! test purpose and the determinized implementation, so nondeterministic
//! implementations get a definite verdict.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::action::Word;
use crate::conformance::Parents;
use crate::error::{Error, Result};
use crate::fsa::Dfsa;
use crate::iolts::{determinize, ensure_quiescence, Iolts};
use crate::testgen::{FaultModel, TestPurpose};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TpVerdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TpOutcome {
    pub verdict: TpVerdict,
    /// Shortest word reaching fail.
    pub witness: Option<Word>,
    /// Some reachable chain stimulus was refused by the implementation.
    pub incomplete: bool,
}

/// The determinized implementation, reusable across test purposes.
pub struct Executor {
    det: Dfsa,
    outputs: HashSet<crate::Action>,
    inputs: HashSet<crate::Action>,
}

impl Executor {
    pub fn new(iut: &Iolts) -> Executor {
        let iut = ensure_quiescence(iut);
        Executor {
            det: determinize(&iut),
            inputs: iut.inputs().iter().cloned().collect(),
            outputs: iut.outputs().iter().cloned().collect(),
        }
    }

    pub fn run(&self, tp: &TestPurpose) -> Result<TpOutcome> {
        let m = tp.model();
        if m.inputs().iter().cloned().collect::<HashSet<_>>() != self.outputs {
            return Err(Error::AlphabetMismatch(
                "test purpose inputs must be the implementation outputs and δ".into(),
            ));
        }
        if m.outputs().iter().cloned().collect::<HashSet<_>>() != self.inputs {
            return Err(Error::AlphabetMismatch(
                "test purpose outputs must be the implementation inputs".into(),
            ));
        }

        // per TP state: (symbol, target, is stimulus)
        let mut moves: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); m.num_states()];
        for t in m.transitions() {
            let Some(a) = t.label.action() else {
                return Err(Error::MalformedTestPurpose("τ in test purpose".into()));
            };
            let sym = self.det.symbol(a).expect("alphabets checked");
            moves[t.source].push((sym, t.target, m.is_output(a)));
        }

        let start = (m.initial(), self.det.initial());
        let mut parent: Parents = HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        let mut incomplete = false;
        while let Some((t, q)) = queue.pop_front() {
            if t == tp.fail() {
                let mut symbols = Vec::new();
                let mut pair = (t, q);
                while let Some((prev, sym)) = parent[&pair] {
                    symbols.push(sym);
                    pair = prev;
                }
                symbols.reverse();
                let witness = symbols
                    .iter()
                    .map(|&s| self.det.alphabet()[s].clone())
                    .collect();
                return Ok(TpOutcome {
                    verdict: TpVerdict::Fail,
                    witness: Some(witness),
                    incomplete,
                });
            }
            if t == tp.pass() {
                continue;
            }
            for &(sym, t2, stimulus) in &moves[t] {
                match self.det.next(q, sym) {
                    Some(q2) => {
                        if let Entry::Vacant(e) = parent.entry((t2, q2)) {
                            e.insert(Some(((t, q), sym)));
                            queue.push_back((t2, q2));
                        }
                    }
                    None if stimulus && t2 != tp.pass() => incomplete = true,
                    None => {}
                }
            }
        }
        Ok(TpOutcome {
            verdict: TpVerdict::Pass,
            witness: None,
            incomplete,
        })
    }
}

pub fn run_tp(iut: &Iolts, tp: &TestPurpose) -> Result<TpOutcome> {
    Executor::new(iut).run(tp)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Stop after the first failing test purpose (in index order).
    pub fail_fast: bool,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TpRecord {
    pub id: usize,
    pub verdict: TpVerdict,
    pub witness: Option<Word>,
    pub incomplete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub overall: TpVerdict,
    pub tps: Vec<TpRecord>,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = &TpRecord> {
        self.tps.iter().filter(|r| r.verdict == TpVerdict::Fail)
    }
}

pub fn run_fault_model(iut: &Iolts, model: &FaultModel) -> Result<RunReport> {
    run_fault_model_with(iut, model, RunOptions::default())
}

pub fn run_fault_model_with(
    iut: &Iolts,
    model: &FaultModel,
    opts: RunOptions,
) -> Result<RunReport> {
    let started = Instant::now();
    let exec = Executor::new(iut);
    let run_all = || -> Result<Vec<TpRecord>> {
        let record = |(id, tp): (usize, &TestPurpose)| {
            exec.run(tp).map(|o| TpRecord {
                id,
                verdict: o.verdict,
                witness: o.witness,
                incomplete: o.incomplete,
            })
        };
        if !opts.fail_fast {
            return model.purposes.par_iter().enumerate().map(record).collect();
        }
        let mut out = Vec::new();
        let chunk = rayon::current_num_threads().max(1) * 4;
        for (c, tps) in model.purposes.chunks(chunk).enumerate() {
            let batch: Vec<TpRecord> = tps
                .par_iter()
                .enumerate()
                .map(|(i, tp)| record((c * chunk + i, tp)))
                .collect::<Result<_>>()?;
            if let Some(first) = batch.iter().position(|r| r.verdict == TpVerdict::Fail) {
                out.extend(batch.into_iter().take(first + 1));
                return Ok(out);
            }
            out.extend(batch);
        }
        Ok(out)
    };
    let tps = if opts.workers == 0 {
        run_all()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run_all)?
    };
    let overall = if tps.iter().any(|r| r.verdict == TpVerdict::Fail) {
        TpVerdict::Fail
    } else {
        TpVerdict::Pass
    };
    Ok(RunReport {
        overall,
        tps,
        elapsed_ms: started.elapsed().as_secs_f64() * 1000.0,
    })
}
