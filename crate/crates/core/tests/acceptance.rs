//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{all_words, deterministic_model, random_model, random_regex, M1};
use ioconf::conformance::{
    build_fault_suite, check_ioco, check_lang, output_extensions, suite_alphabet, suite_bound,
};
use ioconf::fsa::{bounded_language, compile_regex, Dfsa};
use ioconf::iolts::{determinize, ensure_quiescence, parse_model, traces_bounded};
use ioconf::modelgen::{angelic_input_enable, mutate, submachine, Stream};
use ioconf::testgen::{build_multigraph, generate_fault_model, verify_tp_invariants, Manifest};
use ioconf::testrun::{run_fault_model, TpVerdict};
use ioconf::{Iolts, Word};

type Outcome = Result<String, String>;

/// Name, check and time limit.
type Criterion = (&'static str, fn() -> Outcome, Duration);

const FOUR_STATE: &str = "\
states: s0 s1 s2 s3
initial: s0
inputs: a b
outputs: x
transitions:
s0 a s1
s0 b s3
s1 a s3
s1 b s2
s1 x s2
s2 x s3
s2 a s2
s2 b s0
s3 a s3
s3 b s0
";

fn model(text: &str) -> Iolts {
    parse_model(text).unwrap()
}

fn multigraph_geometry() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut levels = Vec::new();
    for (text, m) in [(FOUR_STATE, 4), (M1, 2)] {
        let fm = generate_fault_model(&model(text), m, 1000).map_err(|e| e.to_string())?;
        fm.write_dir(dir.path()).map_err(|e| e.to_string())?;
        let manifest: Manifest = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("manifest.json")).unwrap(),
        )
        .unwrap();
        levels.push(manifest.levels);
    }
    if levels == [17, 5] {
        Ok(format!("levels {levels:?}"))
    } else {
        Err(format!("levels {levels:?}, expected [17, 5]"))
    }
}

fn suite_size_bound() -> Outcome {
    let mut rng = Stream::new(0x5017e);
    let mut max_ratio: f64 = 0.0;
    for case in 0..100 {
        let (inputs, outputs) = (1 + rng.below(2), 1 + rng.below(2));
        let spec = random_model(&mut rng, 6, inputs, outputs);
        let alphabet = suite_alphabet(&spec);
        let (d_ops, f_ops) = (rng.below(5), rng.below(5));
        let d_src = random_regex(&mut rng, &alphabet, d_ops);
        let f_src = random_regex(&mut rng, &alphabet, f_ops);
        let d = compile_regex(&d_src, &alphabet).unwrap();
        let f = compile_regex(&f_src, &alphabet).unwrap();
        let suite = build_fault_suite(&spec, &d, &f).unwrap();
        let n_s = determinize(&ensure_quiescence(&spec)).num_states();
        let bound = suite_bound(n_s, d.complete().num_states(), f.complete().num_states());
        if suite.num_states() > bound {
            return Err(format!(
                "case {case}: {} states > bound {bound}",
                suite.num_states()
            ));
        }
        max_ratio = max_ratio.max(suite.num_states() as f64 / bound as f64);

        // language oracle on short words, built from explicit trace sets
        let traces = traces_bounded(&ensure_quiescence(&spec), 3);
        for w in all_words(&alphabet, 3) {
            let specified = traces.contains(&w);
            let expected = (d.accepts(&w) && !specified) || (f.accepts(&w) && specified);
            if suite.accepts(&w) != expected {
                return Err(format!(
                    "case {case}: suite disagrees on `{w}` (D = {d_src}, F = {f_src})"
                ));
            }
        }
    }
    Ok(format!(
        "100/100 within bound, max states/bound {max_ratio:.3}"
    ))
}

fn ioco_language_cross_check() -> Outcome {
    let mut rng = Stream::new(0x1e44a);
    let (mut faulty, mut agree) = (0, 0);
    for case in 0..200 {
        let (spec, iut) = loop {
            let spec = random_model(&mut rng, 6, 2, 2);
            if case % 2 == 1 {
                let sub = submachine(&spec, 0.3 + 0.6 * rng.unit(), rng.next_u64()).unwrap();
                break (spec, sub);
            }
            // tiny models may admit no legal edit; draw another
            let rate = 0.05 + 0.3 * rng.unit();
            if let Ok(mutant) = mutate(&spec, rate, rng.next_u64(), 0) {
                break (spec, mutant.model);
            }
        };
        let ioco = check_ioco(&spec, &iut).unwrap();
        let empty = Dfsa::empty_language(suite_alphabet(&spec));
        let lang = check_lang(&spec, &iut, &output_extensions(&spec), &empty).unwrap();
        if ioco.conforms != lang.conforms {
            return Err(format!(
                "case {case}: ioco {} vs language {}",
                ioco.conforms, lang.conforms
            ));
        }
        agree += 1;
        faulty += usize::from(!ioco.conforms);
    }
    Ok(format!("{agree}/200 agree ({faulty} non-conforming)"))
}

fn determinization_oracle() -> Outcome {
    let mut rng = Stream::new(0xde7);
    let mut with_tau = 0;
    for case in 0..100 {
        let mut p = ioconf::modelgen::GenParams::new(
            1 + rng.below(5),
            1 + rng.below(2),
            1 + rng.below(2),
            rng.next_u64(),
        );
        p.deterministic = false;
        p.input_enabled = false;
        p.density = 0.1 + 0.3 * rng.unit();
        p.tau = 0.5;
        let mut m = ioconf::modelgen::random_iolts(&p).unwrap();
        if case % 2 == 1 {
            m = ensure_quiescence(&m);
        }
        with_tau += usize::from(m.transitions().iter().any(|t| t.label.is_tau()));
        let expected = traces_bounded(&m, 8);
        let got: BTreeSet<Word> = bounded_language(&determinize(&m), 8);
        if expected != got {
            return Err(format!(
                "case {case}: {} explicit traces vs {} from the automaton",
                expected.len(),
                got.len()
            ));
        }
    }
    Ok(format!("100/100 equal ({with_tau} with τ)"))
}

fn tp_structure() -> Outcome {
    let mut rng = Stream::new(0x7e57);
    let mut total = 0;
    for case in 0..50 {
        let spec = deterministic_model(
            rng.next_u64(),
            2 + rng.below(5),
            1 + rng.below(3),
            1 + rng.below(3),
            0.3,
            rng.chance(0.5),
        );
        let m = 1 + rng.below(3);
        let fm = generate_fault_model(&spec, m, 200).unwrap();
        let traces = determinize(&ensure_quiescence(&spec));
        for (i, tp) in fm.purposes.iter().enumerate() {
            let inv = verify_tp_invariants(tp);
            if !inv.all() {
                return Err(format!("model {case}, tp {i}: {inv:?}"));
            }
            let (_, prefix) = tp.path().split_last().unwrap();
            if !traces.accepts(prefix) || traces.accepts(tp.path()) {
                return Err(format!(
                    "model {case}, tp {i}: path `{}` is not a fault path",
                    tp.path()
                ));
            }
        }
        total += fm.len();
    }
    Ok(format!(
        "{total} test purposes from 50 models, all well-formed"
    ))
}

/// Largest exhaustive fault model accepted when sampling specifications.
const EXHAUSTIVE_CAP: u128 = 20_000;

fn m_completeness() -> Outcome {
    let mut rng = Stream::new(0xc0de);
    let m = 3;
    let (mut specs, mut runs, mut faulty, mut rejected, mut tps) = (0, 0, 0, 0, 0);
    while specs < 20 {
        let spec = deterministic_model(
            rng.next_u64(),
            1 + rng.below(3),
            2,
            2,
            0.1 + 0.2 * rng.unit(),
            false,
        );
        if build_multigraph(&spec, m).unwrap().count_fault_paths() > EXHAUSTIVE_CAP {
            rejected += 1;
            continue;
        }
        let fm = generate_fault_model(&spec, m, EXHAUSTIVE_CAP as usize).unwrap();
        if !fm.is_exhaustive() {
            return Err("fault model unexpectedly truncated".into());
        }
        specs += 1;
        tps += fm.len();
        for k in 0..50 {
            let iut = match k % 5 {
                0..=2 => deterministic_model(
                    rng.next_u64(),
                    1 + rng.below(3),
                    2,
                    2,
                    0.2 + 0.5 * rng.unit(),
                    true,
                ),
                3 => angelic_input_enable(
                    &submachine(&spec, 0.3 + 0.6 * rng.unit(), rng.next_u64()).unwrap(),
                ),
                _ => match mutate(&spec, 0.2 + 0.3 * rng.unit(), rng.next_u64(), 0) {
                    Ok(mutant) => angelic_input_enable(&mutant.model),
                    Err(_) => {
                        deterministic_model(rng.next_u64(), 1 + rng.below(3), 2, 2, 0.5, true)
                    }
                },
            };
            debug_assert!(
                iut.is_input_enabled() && iut.is_deterministic() && iut.num_states() <= m
            );
            let expected = check_ioco(&spec, &iut).unwrap().conforms;
            let report = run_fault_model(&iut, &fm).unwrap();
            if (report.overall == TpVerdict::Pass) != expected {
                return Err(format!(
                    "spec {specs}, iut {k}: suite says {:?}, ioco says conforms={expected}",
                    report.overall
                ));
            }
            runs += 1;
            faulty += usize::from(!expected);
        }
    }
    Ok(format!(
        "{runs} verdicts agree ({faulty} non-conforming), {tps} test purposes, {rejected} specs over the {EXHAUSTIVE_CAP}-path cap resampled"
    ))
}

fn mutation_detection() -> Outcome {
    let mut rng = Stream::new(0x15);
    let (n, m, limit) = (15, 15, 1000);
    let mut lines = Vec::new();
    let (mut detected_all, mut faulty_all, mut truncated_misses) = (0, 0, 0);
    let specs: Vec<Iolts> = (0..5)
        .map(|_| deterministic_model(rng.next_u64(), n, 2, 3, 0.15, true))
        .collect();
    let models: Vec<_> = specs
        .iter()
        .map(|s| generate_fault_model(s, m, limit).unwrap())
        .collect();
    for rate in [0.01, 0.02, 0.04] {
        let (mut detected, mut faulty) = (0, 0);
        for (spec, fm) in specs.iter().zip(&models) {
            for _ in 0..8 {
                let mutant = mutate(spec, rate, rng.next_u64(), 0).unwrap().model;
                let verdict = check_ioco(spec, &mutant).unwrap();
                let report = run_fault_model(&mutant, fm).unwrap();
                match (verdict.conforms, report.overall) {
                    (true, TpVerdict::Fail) => {
                        return Err(format!("conforming mutant failed at rate {rate}"))
                    }
                    (true, TpVerdict::Pass) => {}
                    (false, TpVerdict::Fail) => {
                        faulty += 1;
                        detected += 1;
                    }
                    (false, TpVerdict::Pass) => {
                        faulty += 1;
                        let len = verdict.witnesses[0].len();
                        if !fm.manifest.truncated && len <= m * n {
                            return Err(format!(
                                "missed a fault of length {len} with an exhaustive model"
                            ));
                        }
                        truncated_misses += 1;
                    }
                }
            }
        }
        lines.push(format!("{}%: {detected}/{faulty}", rate * 100.0));
        detected_all += detected;
        faulty_all += faulty;
    }
    let rate = if faulty_all == 0 {
        1.0
    } else {
        detected_all as f64 / faulty_all as f64
    };
    Ok(format!(
        "detection {} (overall {:.1}%, {truncated_misses} misses all under truncated models)",
        lines.join(", "),
        rate * 100.0
    ))
}

fn language_scenario() -> Outcome {
    let spec = model(
        "states: s0 s1\ninitial: s0\ninputs: a b\noutputs: x\ntransitions:\ns0 a s1\ns1 b s0\n",
    );
    let iut = model(
        "states: q0 q1 q2\ninitial: q0\ninputs: a b\noutputs: x\ntransitions:\nq0 a q1\nq1 b q0\nq1 a q2\nq2 x q0\n",
    );
    let alphabet = suite_alphabet(&spec);
    let d = compile_regex("(a|b)* a x", &alphabet).unwrap();
    let ioco = check_ioco(&spec, &iut).unwrap();
    let lang = check_lang(&spec, &iut, &d, &Dfsa::empty_language(alphabet)).unwrap();
    let witness = lang
        .witnesses
        .first()
        .map(Word::to_string)
        .unwrap_or_default();
    if ioco.conforms && !lang.conforms && witness.ends_with("a x") {
        Ok(format!(
            "ioco conforms, language check fails with `{witness}`"
        ))
    } else {
        Err(format!(
            "ioco conforms={}, language conforms={}, witness `{witness}`",
            ioco.conforms, lang.conforms
        ))
    }
}

fn angelic_false_positive() -> Outcome {
    let spec = model(
        "states: s0 s1 s2 s3\ninitial: s0\ninputs: a b\noutputs: x y\ntransitions:\ns0 a s1\ns1 x s2\ns2 b s3\ns3 y s0\n",
    );
    let iut = model("states: q0 q1 q2\ninitial: q0\ninputs: a b\noutputs: x y\ntransitions:\nq0 a q1\nq1 x q2\n");
    let before = check_ioco(&spec, &iut).unwrap();
    let after = check_ioco(&spec, &angelic_input_enable(&iut)).unwrap();
    let witness = after
        .witnesses
        .first()
        .map(Word::to_string)
        .unwrap_or_default();
    if before.conforms && !after.conforms {
        Ok(format!(
            "conforms before completion, fails after with `{witness}`"
        ))
    } else {
        Err(format!(
            "before conforms={}, after conforms={}",
            before.conforms, after.conforms
        ))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "multigraph geometry",
            multigraph_geometry,
            Duration::from_secs(1),
        ),
        (
            "suite size bound",
            suite_size_bound,
            Duration::from_secs(30),
        ),
        (
            "ioco as language conformance",
            ioco_language_cross_check,
            Duration::from_secs(60),
        ),
        (
            "determinization oracle",
            determinization_oracle,
            Duration::from_secs(60),
        ),
        (
            "test purpose structure",
            tp_structure,
            Duration::from_secs(60),
        ),
        (
            "m-completeness at desk scale",
            m_completeness,
            Duration::from_secs(300),
        ),
        (
            "mutation detection",
            mutation_detection,
            Duration::from_secs(300),
        ),
        (
            "language scenario",
            language_scenario,
            Duration::from_secs(1),
        ),
        (
            "angelic completion false positive",
            angelic_false_positive,
            Duration::from_secs(1),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
