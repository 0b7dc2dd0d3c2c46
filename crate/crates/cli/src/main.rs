use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ioconf::conformance::{self, Verdict, WitnessStrategy};
use ioconf::fsa::{compile_regex_file, Dfsa};
use ioconf::iolts::{complete_quiescence, parse_model, serialize_model};
use ioconf::modelgen::{self, GenParams};
use ioconf::testgen::{generate_fault_model, FaultModel, DEFAULT_LIMIT};
use ioconf::testrun::{run_fault_model_with, RunOptions, TpVerdict};
use ioconf::Iolts;

/// Conformance checking and test generation for IOLTS models.
///
/// Exit status: 0 when the implementation conforms or every test passes,
/// 1 when a fault is found, 2 on usage or input errors.
#[derive(Parser)]
#[command(name = "ioconf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check `iut ioco spec`.
    CheckIoco {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        iut: PathBuf,
        #[arg(long, value_enum, default_value_t = Witness::Single)]
        witness: Witness,
        /// Write the verdict as JSON; `-` for standard output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check language conformance for desirable and forbidden languages.
    CheckLang {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        iut: PathBuf,
        /// Regex or word-list file; absent means the empty language.
        #[arg(long)]
        desirable: Option<PathBuf>,
        #[arg(long)]
        forbidden: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Witness::Single)]
        witness: Witness,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate a fault model of test purposes into a directory.
    GenSuite {
        #[arg(long)]
        spec: PathBuf,
        /// Bound on implementation states.
        #[arg(short)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run a fault model directory against an implementation.
    RunSuite {
        #[arg(long)]
        iut: PathBuf,
        #[arg(long)]
        suite: PathBuf,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        parallel: usize,
        #[arg(long)]
        fail_fast: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate a random model.
    GenModel {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        inputs: usize,
        #[arg(long)]
        outputs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long)]
        nondeterministic: bool,
        /// Probability of a τ-move per state (nondeterministic only).
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        #[arg(long)]
        partial: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Apply random retarget/relabel edits to a model.
    Mutate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra states to add before editing.
        #[arg(long, default_value_t = 0)]
        grow: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Extract a random conforming submachine.
    Submachine {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 0.7)]
        keep: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Add δ self-loops or input self-loops to a model.
    Complete {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Witness {
    Single,
    Cover,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Quiescence,
    InputEnable,
}

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_model(path: &Path) -> Result<Iolts, Failure> {
    parse_model(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_language(path: Option<&Path>, spec: &Iolts) -> Result<Dfsa, Failure> {
    let alphabet = conformance::suite_alphabet(spec);
    match path {
        None => Ok(Dfsa::empty_language(alphabet)),
        Some(p) => compile_regex_file(&read(p)?, &alphabet)
            .map_err(|e| format!("{}: {e}", p.display()).into()),
    }
}

/// Human-readable text goes to stdout unless JSON does.
struct Output {
    json: Option<PathBuf>,
}

impl Output {
    fn human(&self) -> Box<dyn Write> {
        if self.json.as_deref() == Some(Path::new("-")) {
            Box::new(std::io::stderr())
        } else {
            Box::new(std::io::stdout())
        }
    }

    fn json(&self, value: &impl serde::Serialize) -> Result<(), Failure> {
        let Some(path) = &self.json else {
            return Ok(());
        };
        let text = serde_json::to_string_pretty(value)? + "\n";
        if path == Path::new("-") {
            std::io::stdout().write_all(text.as_bytes())?;
        } else {
            fs::write(path, text)?;
        }
        Ok(())
    }
}

fn emit_model(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn strategy(w: Witness) -> WitnessStrategy {
    match w {
        Witness::Single => WitnessStrategy::Shortest,
        Witness::Cover => WitnessStrategy::Cover,
    }
}

fn report_verdict(v: &Verdict, out: &Output) -> Result<bool, Failure> {
    let mut h = out.human();
    writeln!(
        h,
        "{}",
        if v.conforms {
            "conforms"
        } else {
            "does not conform"
        }
    )?;
    for w in &v.witnesses {
        writeln!(h, "witness: {w}")?;
    }
    let s = &v.stats;
    if let (Some(states), Some(bound)) = (s.suite_states, s.suite_bound) {
        writeln!(
            h,
            "suite: {states} states, bound {bound} ({}), spec {} / iut {} determinized states",
            if s.within_bound() {
                "within"
            } else {
                "EXCEEDED"
            },
            s.spec_states,
            s.iut_states
        )?;
    }
    out.json(v)?;
    Ok(v.conforms)
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::CheckIoco {
            spec,
            iut,
            witness,
            json,
        } => {
            let v = conformance::check_ioco_with(
                &load_model(&spec)?,
                &load_model(&iut)?,
                strategy(witness),
            )?;
            report_verdict(&v, &Output { json })
        }
        Command::CheckLang {
            spec,
            iut,
            desirable,
            forbidden,
            witness,
            json,
        } => {
            let spec = load_model(&spec)?;
            let iut = load_model(&iut)?;
            let d = load_language(desirable.as_deref(), &spec)?;
            let f = load_language(forbidden.as_deref(), &spec)?;
            let v = conformance::check_lang_with(&spec, &iut, &d, &f, strategy(witness))?;
            report_verdict(&v, &Output { json })
        }
        Command::GenSuite {
            spec,
            m,
            limit,
            out,
        } => {
            let fm = generate_fault_model(&load_model(&spec)?, m, limit)?;
            fm.write_dir(&out)?;
            let mf = &fm.manifest;
            println!(
                "{} test purposes, {} levels (m = {}, n = {}) in {}",
                fm.len(),
                mf.levels,
                mf.m,
                mf.n,
                out.display()
            );
            if mf.truncated {
                eprintln!(
                    "warning: more than {limit} fault paths; the fault model is not exhaustive"
                );
            }
            Ok(true)
        }
        Command::RunSuite {
            iut,
            suite,
            parallel,
            fail_fast,
            json,
        } => {
            let fm = FaultModel::read_dir(&suite)?;
            let report = run_fault_model_with(
                &load_model(&iut)?,
                &fm,
                RunOptions {
                    fail_fast,
                    workers: parallel,
                },
            )?;
            let out = Output { json };
            let mut h = out.human();
            let failed: Vec<_> = report.failures().collect();
            let incomplete = report.tps.iter().filter(|r| r.incomplete).count();
            writeln!(
                h,
                "{}: {} of {} test purposes failed",
                overall(report.overall),
                failed.len(),
                report.tps.len()
            )?;
            for r in &failed {
                writeln!(
                    h,
                    "tp-{:04} fail: {}",
                    r.id,
                    r.witness
                        .as_ref()
                        .map(|w| w.to_string())
                        .unwrap_or_default()
                )?;
            }
            if incomplete > 0 {
                writeln!(
                    h,
                    "{incomplete} runs incomplete (stimulus refused by the implementation)"
                )?;
            }
            if fm.manifest.truncated {
                writeln!(
                    h,
                    "note: the fault model is truncated; a pass is not a conformance proof"
                )?;
            }
            out.json(&report)?;
            Ok(report.overall == TpVerdict::Pass)
        }
        Command::GenModel {
            states,
            inputs,
            outputs,
            seed,
            density,
            nondeterministic,
            tau,
            partial,
            out,
        } => {
            let p = GenParams {
                deterministic: !nondeterministic,
                input_enabled: !partial,
                density,
                tau,
                ..GenParams::new(states, inputs, outputs, seed)
            };
            let m = modelgen::random_iolts(&p)?;
            emit_model(
                &(serialize_model(&m) + &p.provenance() + "\n"),
                out.as_deref(),
            )?;
            Ok(true)
        }
        Command::Mutate {
            model,
            rate,
            seed,
            grow,
            out,
        } => {
            let mutant = modelgen::mutate(&load_model(&model)?, rate, seed, grow)?;
            emit_model(&mutant.to_text(), out.as_deref())?;
            Ok(true)
        }
        Command::Submachine {
            model,
            keep,
            seed,
            out,
        } => {
            let sub = modelgen::submachine(&load_model(&model)?, keep, seed)?;
            let text = serialize_model(&sub) + &format!("# generator: seed={seed}, keep={keep}\n");
            emit_model(&text, out.as_deref())?;
            Ok(true)
        }
        Command::Complete { model, mode, out } => {
            let m = load_model(&model)?;
            let done = match mode {
                Mode::Quiescence if m.is_quiescence_completed() => m,
                Mode::Quiescence => complete_quiescence(&m)?,
                Mode::InputEnable => modelgen::angelic_input_enable(&m),
            };
            emit_model(&serialize_model(&done), out.as_deref())?;
            Ok(true)
        }
    }
}

fn overall(v: TpVerdict) -> &'static str {
    match v {
        TpVerdict::Pass => "pass",
        TpVerdict::Fail => "fail",
    }
}
