use rayon::prelude::*;

use super::{BranchRel, Dir, Machine, Node, Op, Tape};
use crate::error::{Error, Result};
use crate::semiring::{compare, Relation, SemiringId, SemiringProfile, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub node: usize,
    pub tape: Tape,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted { output: Vec<Value>, accepted: bool },
    BudgetExhausted,
}

/// `configs[t]` is the configuration at time t; `writes[t]` is the cell
/// written by the step from t to t+1, if any.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub configs: Vec<Configuration>,
    pub writes: Vec<Option<(i64, Value)>>,
}

impl Trace {
    /// One `t=<k> node=<m> write@<i>=<v>` line per step.
    pub fn lines(&self) -> Vec<String> {
        self.writes
            .iter()
            .enumerate()
            .map(|(t, w)| {
                let node = self.configs[t].node;
                match w {
                    Some((i, v)) => format!("t={t} node={node} write@{i}={v}"),
                    None => format!("t={t} node={node}"),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub steps: u64,
    pub trace: Option<Trace>,
}

impl RunResult {
    pub fn accepted(&self) -> bool {
        matches!(self.outcome, RunOutcome::Halted { accepted: true, .. })
    }

    pub fn output(&self) -> Option<&[Value]> {
        match &self.outcome {
            RunOutcome::Halted { output, .. } => Some(output),
            RunOutcome::BudgetExhausted => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accepted,
    Rejected,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NondetOutcome {
    Accepted { guess: Vec<Value> },
    RejectedWithinBounds,
}

/// `(…,0,1^m,0,1^n,0 . x₁,…,x_n,x′₁,…,x′_m,0,…)`; without a guess the
/// `1^m,0` block is absent.
pub fn init_input(semiring: SemiringId, x: &[Value], guess: Option<&[Value]>) -> Tape {
    let mut tape = Tape::new(semiring);
    let one = semiring.one();
    let n = x.len() as i64;
    for (k, v) in x.iter().enumerate() {
        tape.set(k as i64 + 1, v.clone());
        tape.set(-(k as i64) - 1, one.clone());
    }
    if let Some(g) = guess {
        for (k, v) in g.iter().enumerate() {
            tape.set(n + 1 + k as i64, v.clone());
            tape.set(-(n + 2 + k as i64), one.clone());
        }
    }
    tape
}

/// Cells `1..=ℓ`, where ℓ counts the ones at −1, −2, … .
pub fn read_output(tape: &Tape) -> Vec<Value> {
    let mut len = 0i64;
    while tape.get(-len - 1).is_one() {
        len += 1;
    }
    (1..=len).map(|i| tape.get(i).clone()).collect()
}

fn accepted(output: &[Value]) -> bool {
    output.first().is_some_and(|v| !v.is_zero())
}

fn check_values(m: &Machine, values: &[Value]) -> Result<()> {
    match values.iter().find(|v| v.id() != m.semiring) {
        Some(v) => Err(Error::SemiringMismatch {
            left: m.semiring,
            right: v.id(),
        }),
        None => Ok(()),
    }
}

/// Applies one node and reports the cell it wrote.
fn apply(
    m: &Machine,
    profile: &SemiringProfile,
    cfg: &mut Configuration,
) -> Result<Option<(i64, Value)>> {
    let node = m.node(cfg.node);
    let mut write = None;
    cfg.node = match node {
        Node::Output => {
            return Err(Error::Contract(
                "cannot step a configuration at the output node".into(),
            ))
        }
        Node::Input { next } => *next,
        Node::Compute { target, op, next } => {
            let v = match op {
                Op::Add(j, k) => cfg.tape.get(*j).add(cfg.tape.get(*k))?,
                Op::Mul(j, k) => cfg.tape.get(*j).mul(cfg.tape.get(*k))?,
                Op::Const(c) => c.clone(),
            };
            cfg.tape.set(*target, v.clone());
            write = Some((*target, v));
            *next
        }
        Node::Branch { rel, neg, pos } => {
            let rel = match rel {
                BranchRel::Eq => Relation::Eq,
                BranchRel::Leq => Relation::Leq,
            };
            if compare(profile, rel, cfg.tape.get(1), cfg.tape.get(2))?.holds() {
                *neg
            } else {
                *pos
            }
        }
        Node::Shift { dir, next } => {
            match dir {
                Dir::Left => cfg.tape.shift_left(),
                Dir::Right => cfg.tape.shift_right(),
            }
            *next
        }
    };
    cfg.steps += 1;
    Ok(write)
}

pub fn step(m: &Machine, cfg: &Configuration) -> Result<Configuration> {
    let mut next = cfg.clone();
    apply(m, &SemiringProfile::of(m.semiring), &mut next)?;
    Ok(next)
}

/// Runs from an arbitrary configuration for at most `budget` further steps.
pub fn run_from(m: &Machine, start: Configuration, budget: u64, trace: bool) -> Result<RunResult> {
    let profile = SemiringProfile::of(m.semiring);
    let out = m.output_label();
    let mut cfg = start;
    let first = cfg.steps;
    let mut tr = trace.then(Trace::default);
    loop {
        if cfg.node == out {
            let output = read_output(&cfg.tape);
            let accepted = accepted(&output);
            if let Some(t) = tr.as_mut() {
                t.configs.push(cfg.clone());
            }
            return Ok(RunResult {
                outcome: RunOutcome::Halted { output, accepted },
                steps: cfg.steps - first,
                trace: tr,
            });
        }
        if cfg.steps - first >= budget {
            if let Some(t) = tr.as_mut() {
                t.configs.push(cfg.clone());
            }
            return Ok(RunResult {
                outcome: RunOutcome::BudgetExhausted,
                steps: cfg.steps - first,
                trace: tr,
            });
        }
        if let Some(t) = tr.as_mut() {
            t.configs.push(cfg.clone());
        }
        let w = apply(m, &profile, &mut cfg)?;
        if let Some(t) = tr.as_mut() {
            t.writes.push(w);
        }
    }
}

fn start(m: &Machine, x: &[Value], guess: Option<&[Value]>) -> Result<Configuration> {
    check_values(m, x)?;
    if let Some(g) = guess {
        check_values(m, g)?;
    }
    Ok(Configuration {
        node: 1,
        tape: init_input(m.semiring, x, guess),
        steps: 0,
    })
}

pub fn run(m: &Machine, x: &[Value], budget: u64, trace: bool) -> Result<RunResult> {
    run_from(m, start(m, x, None)?, budget, trace)
}

/// Runs with the non-deterministic input mapping.
pub fn run_guess(
    m: &Machine,
    x: &[Value],
    guess: &[Value],
    budget: u64,
    trace: bool,
) -> Result<RunResult> {
    run_from(m, start(m, x, Some(guess))?, budget, trace)
}

pub fn decide(m: &Machine, x: &[Value], budget: u64) -> Result<Decision> {
    let r = run(m, x, budget, false)?;
    Ok(match r.outcome {
        RunOutcome::Halted { accepted: true, .. } => Decision::Accepted,
        RunOutcome::Halted { .. } => Decision::Rejected,
        RunOutcome::BudgetExhausted => Decision::BudgetExhausted,
    })
}

/// Tries every guess in `universe^≤max_len`, shortest first and
/// lexicographically in universe order within a length.
pub fn decide_nondet(
    m: &Machine,
    x: &[Value],
    universe: &[Value],
    max_len: usize,
    budget: u64,
) -> Result<NondetOutcome> {
    if universe.is_empty() {
        return Err(Error::Validation("guess universe is empty".into()));
    }
    check_values(m, x)?;
    check_values(m, universe)?;
    let base = universe.len() as u128;
    for len in 0..=max_len {
        let count = base
            .checked_pow(len as u32)
            .filter(|c| *c <= u64::MAX as u128)
            .ok_or(Error::BoundExceeded {
                needed: u128::MAX,
                cap: u64::MAX as u128,
            })? as u64;
        let decode = |mut idx: u64| -> Vec<Value> {
            let mut g = vec![universe[0].clone(); len];
            for slot in g.iter_mut().rev() {
                *slot = universe[(idx % base as u64) as usize].clone();
                idx /= base as u64;
            }
            g
        };
        let hit = (0..count)
            .into_par_iter()
            .map(|idx| {
                let g = decode(idx);
                run_guess(m, x, &g, budget, false).map(|r| r.accepted().then_some(g))
            })
            .find_first(|r| !matches!(r, Ok(None)));
        match hit {
            Some(Ok(Some(guess))) => return Ok(NondetOutcome::Accepted { guess }),
            Some(Err(e)) => return Err(e),
            _ => {}
        }
    }
    Ok(NondetOutcome::RejectedWithinBounds)
}

#[derive(Debug, Clone, Default)]
pub struct Monitors {
    pub non_arithmetic: bool,
    /// The value set X of the closure monitor.
    pub closure: Option<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// An add or mul with no neutral operand.
    NonArithmetic { lhs: Value, rhs: Value },
    /// A tape value outside X.
    Closure { coordinate: i64, value: Value },
}

/// `step` is the time of the configuration in which the violation was
/// observed; `node` is 0 for the initial tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub step: u64,
    pub node: usize,
    pub kind: ViolationKind,
}

pub fn run_monitored(
    m: &Machine,
    x: &[Value],
    budget: u64,
    monitors: &Monitors,
) -> Result<(RunResult, Vec<Violation>)> {
    let id = m.semiring;
    if let Some(xs) = &monitors.closure {
        check_values(m, xs)?;
        if !xs.contains(&id.zero()) || !xs.contains(&id.one()) {
            return Err(Error::Validation(
                "closure set must contain 0 and 1".into(),
            ));
        }
    }
    let outside = |v: &Value| {
        monitors
            .closure
            .as_ref()
            .is_some_and(|xs| !xs.contains(v))
    };
    let profile = SemiringProfile::of(id);
    let mut cfg = start(m, x, None)?;
    let mut violations = Vec::new();
    for (i, v) in cfg.tape.nonzero() {
        if outside(&v) {
            violations.push(Violation {
                step: 0,
                node: 0,
                kind: ViolationKind::Closure {
                    coordinate: i,
                    value: v,
                },
            });
        }
    }
    let out = m.output_label();
    let mut steps = 0;
    while cfg.node != out && steps < budget {
        let label = cfg.node;
        if monitors.non_arithmetic {
            if let Node::Compute { op, .. } = m.node(label) {
                let operands = match op {
                    Op::Add(j, k) => Some((*j, *k, id.zero())),
                    Op::Mul(j, k) => Some((*j, *k, id.one())),
                    Op::Const(_) => None,
                };
                if let Some((j, k, neutral)) = operands {
                    let (l, r) = (cfg.tape.get(j), cfg.tape.get(k));
                    if *l != neutral && *r != neutral {
                        violations.push(Violation {
                            step: steps,
                            node: label,
                            kind: ViolationKind::NonArithmetic {
                                lhs: l.clone(),
                                rhs: r.clone(),
                            },
                        });
                    }
                }
            }
        }
        let w = apply(m, &profile, &mut cfg)?;
        steps += 1;
        if let Some((i, v)) = w {
            if outside(&v) {
                violations.push(Violation {
                    step: steps,
                    node: label,
                    kind: ViolationKind::Closure {
                        coordinate: i,
                        value: v,
                    },
                });
            }
        }
    }
    let outcome = if cfg.node == out {
        let output = read_output(&cfg.tape);
        let accepted = accepted(&output);
        RunOutcome::Halted { output, accepted }
    } else {
        RunOutcome::BudgetExhausted
    };
    Ok((
        RunResult {
            outcome,
            steps,
            trace: None,
        },
        violations,
    ))
}
