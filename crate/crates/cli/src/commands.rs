use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use scl_core::eval::{eval_eso, eval_fo, eval_pl, EsoMode};
use scl_core::logic::{FOAssignment, KInterpretation, Literal, PLAssignment, PLFormula};
use scl_core::machine::{wrap_with_clock, ClockPolynomial};
use scl_core::machine::{decide_nondet, run_monitored, Monitors, NondetOutcome, ViolationKind};
use scl_core::reductions::{
    cook_compile, cook_decode_guess, decode_object, encode_object, fagin_compile, fagin_input, flatten,
    sat_to_etk, Object, ObjectKind,
};
use scl_core::semiring::{axiom_check, parse_value, SemiringId, Value};
use scl_core::solvers::{etk_bounded, k_equivalence_sample, sat_bruteforce, EtkOutcome, Equivalence, SatOutcome};
use scl_core::syntax::Valuation;
use scl_core::Error;

use crate::inputs::{self, Formula};
use crate::{Check, Command, EsoSearch, Kind, Layer, Reduction, Search};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    Bound = 2,
}

pub fn error_status(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BoundExceeded { .. }) => 2,
        _ => 3,
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Negative
    }
}

pub fn execute(cmd: Command, out: &mut String) -> Result<Status> {
    match cmd {
        Command::Eval {
            formula,
            valuation,
            semiring,
            layer,
            witness,
            search_mode,
            search,
        } => eval(&formula, &valuation, semiring.as_deref(), layer, witness.as_deref(), search_mode, &search, out),
        Command::Sat {
            formula,
            semiring,
            assignment_out,
            search,
        } => {
            let (f, id) = inputs::pl_formula(&formula, semiring.as_deref())?;
            match sat_bruteforce(&f, &inputs::budget(&search, id)?)? {
                SatOutcome::Satisfied(s) => {
                    let value = eval_pl(&f, &s)?;
                    let cells: Vec<String> = s.iter().map(|(l, v)| format!("s({l})={v}")).collect();
                    writeln!(out, "{} value={value}", cells.join(" "))?;
                    if let Some(path) = assignment_out {
                        write_file(&path, &s.to_string())?;
                    }
                    Ok(Status::Ok)
                }
                SatOutcome::NoneWithinBounds => {
                    writeln!(out, "unsatisfiable within bounds")?;
                    Ok(Status::Negative)
                }
            }
        }
        Command::Run {
            machine,
            input,
            budget,
            trace,
            non_arithmetic,
            closure,
        } => {
            let m = inputs::machine(&machine)?;
            let x = inputs::values(&input, m.semiring)?;
            let monitors = Monitors {
                non_arithmetic,
                closure: closure.map(|c| inputs::value_set(&c, m.semiring)).transpose()?,
            };
            let (r, violations) = run_monitored(&m, &x, budget, &monitors)?;
            if trace {
                // the monitored run does not record traces
                let traced = scl_core::machine::run(&m, &x, budget, true)?;
                for line in traced.trace.map(|t| t.lines()).unwrap_or_default() {
                    writeln!(out, "{line}")?;
                }
            }
            for v in &violations {
                match &v.kind {
                    ViolationKind::NonArithmetic { lhs, rhs } => {
                        writeln!(out, "violation t={} node={} non-arithmetic {lhs} {rhs}", v.step, v.node)?
                    }
                    ViolationKind::Closure { coordinate, value } => writeln!(
                        out,
                        "violation t={} node={} closure cell {coordinate} holds {value}",
                        v.step, v.node
                    )?,
                }
            }
            match r.output() {
                Some(o) => {
                    writeln!(out, "output={} accepted={} steps={}", inputs::tuple(o), r.accepted(), r.steps)?;
                    Ok(status(r.accepted()))
                }
                None => {
                    writeln!(out, "budget exhausted after {} steps", r.steps)?;
                    Ok(Status::Bound)
                }
            }
        }
        Command::DecideNondet {
            machine,
            input,
            max_len,
            budget,
            universe,
        } => {
            let m = inputs::machine(&machine)?;
            let x = inputs::values(&input, m.semiring)?;
            let u = match universe {
                Some(text) => inputs::value_set(&text, m.semiring)?,
                None => m.semiring.default_universe(),
            };
            match decide_nondet(&m, &x, &u, max_len, budget)? {
                NondetOutcome::Accepted { guess } => {
                    writeln!(out, "accepted guess={}", inputs::tuple(&guess))?;
                    Ok(Status::Ok)
                }
                NondetOutcome::RejectedWithinBounds => {
                    writeln!(out, "rejected within bounds")?;
                    Ok(Status::Negative)
                }
            }
        }
        Command::Reduce(r) => reduce(r, out),
        Command::DecodeGuess {
            machine,
            input,
            steps,
            assignment,
        } => {
            let m = inputs::machine(&machine)?;
            let x = inputs::values(&input, m.semiring)?;
            let art = cook_compile(&m, &x, steps)?;
            let Valuation::Assignment(s) = inputs::valuation(&assignment, Some(m.semiring))? else {
                bail!("{assignment} is an interpretation, expected an assignment");
            };
            writeln!(out, "guess={}", inputs::tuple(&cook_decode_guess(&art, &s)?))?;
            Ok(Status::Ok)
        }
        Command::WrapClock { machine, poly } => {
            let m = inputs::machine(&machine)?;
            let t: ClockPolynomial = poly.parse()?;
            write!(out, "{}", wrap_with_clock(&m, &t)?)?;
            Ok(Status::Ok)
        }
        Command::Encode { kind, file, semiring } => {
            let id = semiring.as_deref().map(inputs::semiring).transpose()?;
            let (object, id) = match kind {
                Kind::Pl | Kind::Fo => {
                    let layer = if kind == Kind::Pl { Layer::Pl } else { Layer::Fo };
                    match inputs::formula(&file, semiring.as_deref(), layer)? {
                        (Formula::Pl(f), id) => (Object::Pl(f), id),
                        (Formula::Fo(f), id) => (Object::Fo(f), id),
                        (Formula::Eso(_), _) => unreachable!(),
                    }
                }
                Kind::Interpretation | Kind::Assignment => match (kind, inputs::valuation(&file, id)?) {
                    (Kind::Assignment, Valuation::Assignment(s)) => {
                        let id = s.semiring;
                        (Object::Assignment(s), id)
                    }
                    (Kind::Interpretation, Valuation::Interpretation(pi)) => {
                        let id = pi.semiring;
                        (Object::Interpretation(pi), id)
                    }
                    _ => bail!("{file} is not an {} file", kind_name(kind)),
                },
            };
            writeln!(out, "semiring {id}")?;
            for v in encode_object(&object, id)? {
                writeln!(out, "{v}")?;
            }
            Ok(Status::Ok)
        }
        Command::Decode { kind, file } => {
            let values = read_encoding(&inputs::read(&file)?).with_context(|| file.clone())?;
            let k = match kind {
                Kind::Pl => ObjectKind::Pl,
                Kind::Fo => ObjectKind::Fo,
                Kind::Interpretation => ObjectKind::Interpretation,
                Kind::Assignment => ObjectKind::Assignment,
            };
            match decode_object(k, &values)? {
                Object::Pl(f) => writeln!(out, "{f}")?,
                Object::Fo(f) => writeln!(out, "{f}")?,
                Object::Interpretation(pi) => write!(out, "{pi}")?,
                Object::Assignment(s) => write!(out, "{s}")?,
            }
            Ok(Status::Ok)
        }
        Command::Check(c) => check(c, out),
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Pl => "propositional",
        Kind::Fo => "first-order",
        Kind::Interpretation => "interpretation",
        Kind::Assignment => "assignment",
    }
}

fn write_file(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {path}"))
}

/// `semiring <id>` followed by one value literal per line.
fn read_encoding(text: &str) -> Result<Vec<Value>> {
    let mut lines = text
        .lines()
        .map(|l| l.split("//").next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let id = match lines.next().and_then(|l| l.strip_prefix("semiring ")) {
        Some(id) => inputs::semiring(id.trim())?,
        None => bail!("expected a `semiring <id>` line first"),
    };
    lines.map(|l| Ok(parse_value(l, id)?)).collect()
}

#[allow(clippy::too_many_arguments)]
fn eval(
    formula: &str,
    valuation: &str,
    semiring: Option<&str>,
    layer: Layer,
    witness: Option<&str>,
    search_mode: EsoSearch,
    search: &Search,
    out: &mut String,
) -> Result<Status> {
    let semiring = match semiring {
        Some(s) => Some(s.to_string()),
        None => Some(inputs::valuation(valuation, None)?.semiring().to_string()),
    };
    let (f, id) = inputs::formula(formula, semiring.as_deref(), layer)?;
    let val = inputs::valuation(valuation, Some(id))?;
    let v = match (f, val) {
        (Formula::Pl(f), Valuation::Assignment(s)) => eval_pl(&f, &s)?,
        (Formula::Fo(f), Valuation::Interpretation(pi)) => {
            if !f.is_sentence() {
                bail!("{formula} has free variables");
            }
            eval_fo(&f, &pi, &FOAssignment::new())?
        }
        (Formula::Eso(s), Valuation::Interpretation(pi)) => {
            let mode = match witness {
                Some(w) => match inputs::valuation(w, Some(id))? {
                    Valuation::Interpretation(ext) => EsoMode::Witness(ext),
                    Valuation::Assignment(_) => bail!("{w} is not an interpretation file"),
                },
                None => {
                    let b = inputs::budget(search, id)?;
                    match search_mode {
                        EsoSearch::Exhaustive => EsoMode::exhaustive(b.universe, b.max_candidates),
                        EsoSearch::ModelDefining => EsoMode::model_defining(b.universe, b.max_candidates),
                    }
                }
            };
            eval_eso(&s, &pi, &mode)?
        }
        (Formula::Pl(_), _) => bail!("a propositional formula needs an assignment file"),
        (_, _) => bail!("a first-order or ESO formula needs an interpretation file"),
    };
    writeln!(out, "{v}")?;
    Ok(Status::Ok)
}

fn reduce(r: Reduction, out: &mut String) -> Result<Status> {
    match r {
        Reduction::Cook { machine, input, steps } => {
            let m = inputs::machine(&machine)?;
            let x = inputs::values(&input, m.semiring)?;
            let art = cook_compile(&m, &x, steps)?;
            writeln!(out, "semiring {}", m.semiring)?;
            writeln!(
                out,
                "// steps={} input_len={} window={} nodes={}",
                art.steps, art.input_len, art.window, art.nodes
            )?;
            writeln!(out, "// v<t>_<p> is cell p at time t (n marks a negative p); q<t>_<s> is node s at time t")?;
            writeln!(out, "{}", art.formula)?;
        }
        Reduction::Fagin {
            machine,
            input,
            z,
            interpretation_out,
        } => {
            let m = inputs::machine(&machine)?;
            let art = fagin_compile(&m, z)?;
            writeln!(out, "semiring {}", m.semiring)?;
            writeln!(out, "// z={} nodes={}", art.z, art.nodes)?;
            writeln!(out, "{}", art.sentence)?;
            match interpretation_out {
                Some(path) => {
                    let x = inputs::values(&input, m.semiring)?;
                    write_file(&path, &fagin_input(m.semiring, &x)?.to_string())?;
                }
                None if !input.is_empty() => bail!("input values given without --interpretation-out"),
                None => {}
            }
        }
        Reduction::Etk {
            formula,
            semiring,
            consts,
            solve,
            search,
        } => {
            let (f, id) = inputs::pl_formula(&formula, semiring.as_deref())?;
            let x = match consts {
                Some(text) => inputs::value_set(&text, id)?,
                None => vec![id.zero(), id.one()],
            };
            let art = sat_to_etk(&f, &x, id)?;
            writeln!(out, "semiring {id}")?;
            for (lit, var) in &art.literal_map {
                writeln!(out, "// {var} = {lit}")?;
            }
            writeln!(out, "{}", art.sentence)?;
            if solve {
                match etk_bounded(&art.sentence, &inputs::budget(&search, id)?)? {
                    EtkOutcome::True(vals) => {
                        let cells: Vec<String> = vals.iter().map(|(x, v)| format!("{x}={v}")).collect();
                        writeln!(out, "true {}", cells.join(" "))?;
                    }
                    EtkOutcome::FalseWithinBounds => {
                        writeln!(out, "false within bounds")?;
                        return Ok(Status::Negative);
                    }
                }
            }
        }
        Reduction::Flatten { formula, semiring } => {
            let (f, id) = inputs::pl_formula(&formula, semiring.as_deref())?;
            writeln!(out, "semiring {id}")?;
            writeln!(out, "{}", flatten(&f, id)?)?;
        }
    }
    Ok(Status::Ok)
}

fn check(c: Check, out: &mut String) -> Result<Status> {
    match c {
        Check::Axioms { semiring, sample } => {
            let id = inputs::semiring(&semiring)?;
            let sample = match sample {
                Some(text) => inputs::value_set(&text, id)?,
                None => id.default_universe(),
            };
            let report = axiom_check(id, &sample);
            for v in &report.violations {
                let ws: Vec<String> = v.witnesses.iter().map(|w| w.to_string()).collect();
                writeln!(out, "violation {} {}", v.law, ws.join(" "))?;
            }
            writeln!(out, "{id}: {} violations over {} values", report.violations.len(), sample.len())?;
            Ok(status(report.is_clean()))
        }
        Check::Equivalence {
            left,
            right,
            semiring,
            layer,
            samples,
            search,
        } => {
            let (l, id) = inputs::formula(&left, semiring.as_deref(), layer)?;
            let (r, _) = inputs::formula(&right, Some(id.name()), layer)?;
            match (l, r) {
                (Formula::Pl(l), Formula::Pl(r)) => pl_equivalence(&l, &r, id, &search, out),
                (Formula::Fo(l), Formula::Fo(r)) => {
                    if samples.is_empty() {
                        bail!("first-order equivalence needs interpretation files (--on)");
                    }
                    let mut pis: Vec<KInterpretation> = Vec::new();
                    for path in &samples {
                        match inputs::valuation(path, Some(id))? {
                            Valuation::Interpretation(pi) => pis.push(pi),
                            Valuation::Assignment(_) => bail!("{path} is not an interpretation file"),
                        }
                    }
                    match k_equivalence_sample(&l, &r, &pis)? {
                        Equivalence::EquivalentOnSamples => {
                            writeln!(out, "equivalent on {} samples", pis.len())?;
                            Ok(Status::Ok)
                        }
                        Equivalence::Counterexample { index, left: a, right: b } => {
                            writeln!(out, "differ on {}: {a} vs {b}", samples[index])?;
                            Ok(Status::Negative)
                        }
                    }
                }
                _ => bail!("both formulas must be propositional or both first-order"),
            }
        }
    }
}

/// Compares two propositional formulas on every assignment of their
/// literals over the universe.
fn pl_equivalence(l: &PLFormula, r: &PLFormula, id: SemiringId, search: &Search, out: &mut String) -> Result<Status> {
    let budget = inputs::budget(search, id)?;
    let mut lits: Vec<Literal> = l.literals();
    lits.extend(r.literals());
    lits.sort();
    lits.dedup();
    let u = &budget.universe;
    let needed = (0..lits.len()).fold(1u128, |acc, _| acc.saturating_mul(u.len() as u128));
    if needed > budget.max_candidates {
        return Err(Error::BoundExceeded {
            needed,
            cap: budget.max_candidates,
        }
        .into());
    }
    let mut idx = vec![0usize; lits.len()];
    loop {
        let mut s = PLAssignment::new(id);
        for (lit, &k) in lits.iter().zip(&idx) {
            s.set(lit.clone(), u[k].clone())?;
        }
        let (a, b) = (eval_pl(l, &s)?, eval_pl(r, &s)?);
        if a != b {
            let cells: Vec<String> = s.iter().map(|(l, v)| format!("s({l})={v}")).collect();
            writeln!(out, "differ at {}: {a} vs {b}", cells.join(" "))?;
            return Ok(Status::Negative);
        }
        // odometer, last literal fastest
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                writeln!(out, "equivalent on {needed} assignments")?;
                return Ok(Status::Ok);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < u.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
