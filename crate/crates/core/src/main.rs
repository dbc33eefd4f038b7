use clap::{Args, Parser, Subcommand};
use linlam::config::Config;
use linlam::eval::{normalize, normalize_traced};
use linlam::lambdaq::{
    adequacy_check, run, translate_program, translate_type, GateTable, Program,
};
use linlam::prelude::Prelude;
use linlam::semantics::{check_unitary_endo, parse_type, ArrowKind, Type, Verdict};
use linlam::syntax::{canonicalize, default_eps, parse_term_with};
use linlam::typing::{check_orthogonality, infer, parse_judgment, parse_orthogonality, validate_semantically};
use linlam::{EvalOutcome, Error};
use serde_json::{json, Value};
use std::process::ExitCode;

/// Evaluate, type and check terms of the unitary linear-algebraic lambda
/// calculus, and run λ_Q programs.
///
/// Exit status: 0 pass/yes, 1 fail/no, 2 unsupported or error.
/// `LINLAM_EPS` overrides the comparison tolerance (default 1e-9).
#[derive(Parser)]
#[command(name = "linlam", version)]
struct Cli {
    /// Print structured JSON records instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Fuel {
    /// Reduction step budget.
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalise a term.
    Eval {
        expr: String,
        #[command(flatten)]
        fuel: Fuel,
        /// Print every intermediate distribution.
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether a closed term is a unitary map `#D1 -> #D2` or `#D1 => #D2`.
    CheckUnitary {
        expr: String,
        #[arg(long = "type")]
        ty: String,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Derive `ctx |- expr : type`.
    Typecheck {
        judgment: String,
        /// Fall back to the semantic check when no derivation is found.
        #[arg(long)]
        semantic: bool,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Decide an orthogonality judgment `ctx |- <d1 | e1 _|_ d2 | e2> : type`.
    Orth {
        judgment: String,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// λ_Q programs.
    Lq {
        #[command(subcommand)]
        cmd: LqCmd,
    },
}

#[derive(Args)]
struct LqFile {
    /// Program document `{amplitudes, wires, term}`.
    file: String,
    /// Extra gates, as a JSON map from names to 2×2 matrices of `{re, im}`.
    #[arg(long)]
    gates: Option<String>,
}

#[derive(Subcommand)]
enum LqCmd {
    /// Type-check a program.
    Typecheck {
        #[command(flatten)]
        file: LqFile,
    },
    /// Run a program to a value.
    Run {
        #[command(flatten)]
        file: LqFile,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Translate a program into a distribution.
    Translate {
        #[command(flatten)]
        file: LqFile,
    },
    /// Run a program and compare every step with its translation.
    Adequacy {
        #[command(flatten)]
        file: LqFile,
        #[command(flatten)]
        fuel: Fuel,
    },
}

/// What a command printed, and how it ended.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

fn line_col(src: &str, pos: usize) -> (usize, usize) {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn describe(e: &Error, src: &str) -> String {
    match e {
        Error::Parse { pos, msg } => {
            let (l, c) = line_col(src, *pos);
            format!("parse error at line {l}, column {c}: {msg}")
        }
        _ => e.to_string(),
    }
}

fn verdict(v: Verdict, extra: Value) -> Outcome {
    let mut json = json!({ "verdict": v.as_str() });
    if let (Value::Object(m), Value::Object(x)) = (&mut json, extra) {
        m.extend(x);
    }
    Outcome { code: v.exit_code() as u8, text: v.as_str().to_string(), json }
}

fn config(fuel: &Fuel) -> Config {
    Config { fuel: fuel.fuel, ..Config::default() }
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn load(f: &LqFile) -> Result<(Program, GateTable), Error> {
    let gates = match &f.gates {
        Some(p) => GateTable::from_json(&read(p)?)?,
        None => GateTable::standard(),
    };
    Ok((Program::from_json(&read(&f.file)?, &gates, default_eps())?, gates))
}

fn eval(expr: &str, fuel: &Fuel, trace: bool) -> Result<Outcome, Error> {
    let d = canonicalize(&parse_term_with(expr, &Prelude)?);
    let (out, snaps) = if trace { normalize_traced(&d, fuel.fuel) } else { (normalize(&d, fuel.fuel), Vec::new()) };
    let mut text: Vec<String> = snaps.iter().map(|s| format!("→ {s}")).collect();
    let trace_json: Vec<Value> = snaps.iter().map(|s| s.to_json()).collect();
    Ok(match out {
        EvalOutcome::Normal { result, steps } => {
            text.push(result.to_string());
            Outcome {
                code: 0,
                text: text.join("\n"),
                json: json!({ "normal": true, "steps": steps, "result": result.to_json(), "trace": trace_json }),
            }
        }
        EvalOutcome::OutOfFuel { partial, steps } => {
            text.push(format!("out of fuel after {steps} steps: {partial}"));
            Outcome {
                code: 2,
                text: text.join("\n"),
                json: json!({ "normal": false, "steps": steps, "result": partial.to_json(), "trace": trace_json }),
            }
        }
    })
}

fn check_unitary(expr: &str, ty: &str, fuel: &Fuel) -> Result<Outcome, Error> {
    let f = canonicalize(&parse_term_with(expr, &Prelude)?);
    let (a, b, kind) = match parse_type(ty)? {
        Type::PureArrow(a, b) => (*a, *b, ArrowKind::Pure),
        Type::UnitArrow(a, b) => (*a, *b, ArrowKind::Unit),
        other => return Err(Error::UnsupportedType(format!("expected an arrow type, got {other}"))),
    };
    let r = check_unitary_endo(&f, &a, &b, kind, &config(fuel))?;
    Ok(Outcome { code: r.verdict.exit_code() as u8, text: r.to_string().trim_end().to_string(), json: r.to_json() })
}

fn typecheck(src: &str, semantic: bool, fuel: &Fuel) -> Result<Outcome, Error> {
    let j = parse_judgment(src, &Prelude)?;
    let cfg = config(fuel);
    match infer(&j.ctx, &j.term, &j.ty, &cfg) {
        Ok(d) => {
            let mut o = verdict(Verdict::Yes, json!({ "derivation": d.to_string() }));
            o.text = format!("yes\n{d}");
            Ok(o)
        }
        Err(e) if semantic => {
            let v = validate_semantically(&j, &cfg);
            let mut o = verdict(v, json!({ "search": e.to_string(), "semantic": true }));
            o.text = format!("{} (semantic; {e})", v.as_str());
            Ok(o)
        }
        Err(e) => {
            let mut o = verdict(Verdict::No, json!({ "search": e.to_string() }));
            o.text = format!("no ({e})");
            Ok(o)
        }
    }
}

fn orth(src: &str, fuel: &Fuel) -> Result<Outcome, Error> {
    let j = parse_orthogonality(src, &Prelude)?;
    Ok(verdict(check_orthogonality(&j, &config(fuel)), json!({})))
}

fn lq(cmd: &LqCmd) -> Result<Outcome, Error> {
    match cmd {
        LqCmd::Typecheck { file } => {
            let (p, _) = load(file)?;
            match p.typecheck() {
                Ok(a) => Ok(Outcome {
                    code: 0,
                    text: format!("{a}\ntranslates to {}", translate_type(&a)),
                    json: json!({ "verdict": "yes", "type": a.to_string(), "translated": translate_type(&a).to_string() }),
                }),
                Err(Error::Type(msg)) => Ok(Outcome {
                    code: 1,
                    text: format!("no ({msg})"),
                    json: json!({ "verdict": "no", "error": msg }),
                }),
                Err(e) => Err(e),
            }
        }
        LqCmd::Run { file, fuel } => {
            let (p, gates) = load(file)?;
            let (end, rules) = run(&p, &gates, fuel.fuel)?;
            let names: Vec<&str> = rules.iter().map(|r| r.name()).collect();
            Ok(Outcome {
                code: 0,
                text: format!("{end}\n{} steps: {}", rules.len(), names.join(", ")),
                json: json!({ "program": end.to_json(), "rules": names }),
            })
        }
        LqCmd::Translate { file } => {
            let (p, gates) = load(file)?;
            let d = translate_program(&p, &gates)?;
            Ok(Outcome { code: 0, text: d.to_string(), json: d.to_json() })
        }
        LqCmd::Adequacy { file, fuel } => {
            let (p, gates) = load(file)?;
            match adequacy_check(&p, &gates, fuel.fuel, &Config::default()) {
                Ok(r) => {
                    let names: Vec<&str> = r.rules.iter().map(|k| k.name()).collect();
                    Ok(Outcome {
                        code: 0,
                        text: format!(
                            "pass: {} steps ({})\nnormal form: {}\ntranslation typed: {}",
                            names.len(),
                            names.join(", "),
                            r.normal_form,
                            r.typed
                        ),
                        json: json!({
                            "verdict": "pass",
                            "rules": names,
                            "normal_form": r.normal_form.to_json(),
                            "final": r.final_program.to_json(),
                            "typed": r.typed.as_str(),
                        }),
                    })
                }
                Err(e @ Error::AdequacyViolation { .. }) => Ok(Outcome {
                    code: 1,
                    text: format!("fail: {e}"),
                    json: json!({ "verdict": "fail", "error": e.to_string() }),
                }),
                Err(e) => Err(e),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (res, src) = match &cli.cmd {
        Cmd::Eval { expr, fuel, trace } => (eval(expr, fuel, *trace), expr.as_str()),
        Cmd::CheckUnitary { expr, ty, fuel } => (check_unitary(expr, ty, fuel), expr.as_str()),
        Cmd::Typecheck { judgment, semantic, fuel } => (typecheck(judgment, *semantic, fuel), judgment.as_str()),
        Cmd::Orth { judgment, fuel } => (orth(judgment, fuel), judgment.as_str()),
        Cmd::Lq { cmd } => (lq(cmd), ""),
    };
    match res {
        Ok(o) => {
            if cli.json {
                println!("{}", o.json);
            } else {
                println!("{}", o.text);
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            let msg = describe(&e, src);
            if cli.json {
                println!("{}", json!({ "verdict": "error", "error": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
