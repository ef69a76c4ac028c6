//! Register-free BSS machines over a semiring: a node graph acting on a
//! bi-infinite tape of semiring values.

mod clock;
mod run;
mod tape;

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::semiring::{SemiringId, SemiringProfile, Value};

pub use clock::{clock_step_bound, wrap_with_clock, ClockPolynomial, CLOCK_FACTOR};
pub use run::{
    decide, decide_nondet, init_input, read_output, run, run_from, run_guess, run_monitored, step,
    Configuration, Decision, Monitors, NondetOutcome, RunOutcome, RunResult, Trace, Violation,
    ViolationKind,
};
pub use tape::Tape;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Op {
    Add(i64, i64),
    Mul(i64, i64),
    Const(Value),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchRel {
    Eq,
    Leq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Left,
    Right,
}

/// A node; `next`, `neg` and `pos` are 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Input { next: usize },
    Output,
    Compute { target: i64, op: Op, next: usize },
    Branch { rel: BranchRel, neg: usize, pos: usize },
    Shift { dir: Dir, next: usize },
}

impl Node {
    pub fn successors(&self) -> Vec<usize> {
        match self {
            Node::Input { next } | Node::Compute { next, .. } | Node::Shift { next, .. } => {
                vec![*next]
            }
            Node::Branch { neg, pos, .. } => vec![*neg, *pos],
            Node::Output => vec![],
        }
    }

    /// Tape coordinates read or written by this node.
    pub fn coordinates(&self) -> Vec<i64> {
        match self {
            Node::Compute { target, op, .. } => match op {
                Op::Add(j, k) | Op::Mul(j, k) => vec![*target, *j, *k],
                Op::Const(_) => vec![*target],
            },
            Node::Branch { .. } => vec![1, 2],
            _ => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub name: String,
    pub semiring: SemiringId,
    nodes: Vec<Node>,
}

impl Machine {
    /// Builds and validates a machine; `nodes[0]` carries label 1.
    pub fn new(name: &str, semiring: SemiringId, nodes: Vec<Node>) -> Result<Machine> {
        let m = Machine {
            name: name.to_string(),
            semiring,
            nodes,
        };
        m.validate()?;
        Ok(m)
    }

    /// Number of nodes, which is also the output label N.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn output_label(&self) -> usize {
        self.nodes.len()
    }

    /// Node with 1-based `label`.
    pub fn node(&self, label: usize) -> &Node {
        &self.nodes[label - 1]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Iterates `(label, node)`.
    pub fn labelled(&self) -> impl Iterator<Item = (usize, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (i + 1, n))
    }

    /// The machine-constant profile.
    pub fn constants(&self) -> Vec<Value> {
        let set: BTreeSet<Value> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Compute {
                    op: Op::Const(c), ..
                } => Some(c.clone()),
                _ => None,
            })
            .collect();
        set.into_iter().collect()
    }

    /// max(2, |i|, |j|, |k|) over all compute nodes.
    pub fn max_index(&self) -> i64 {
        self.nodes
            .iter()
            .flat_map(|n| n.coordinates())
            .map(|c| c.abs())
            .max()
            .unwrap_or(0)
            .max(2)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Machine(m));
        let n = self.nodes.len();
        if n < 2 {
            return bad(format!("a machine needs at least 2 nodes, got {n}"));
        }
        let profile = SemiringProfile::of(self.semiring);
        for (label, node) in self.labelled() {
            match node {
                Node::Input { .. } if label != 1 => {
                    return bad(format!("node {label}: input node must be node 1"))
                }
                Node::Output if label != n => {
                    return bad(format!("node {label}: output node must be node {n}"))
                }
                Node::Branch {
                    rel: BranchRel::Leq,
                    ..
                } if !profile.ordered => {
                    return bad(format!(
                        "node {label}: rel<= needs an ordered semiring, {} is not",
                        self.semiring
                    ))
                }
                Node::Compute {
                    op: Op::Const(c), ..
                } if c.id() != self.semiring => {
                    return bad(format!(
                        "node {label}: constant {c} is not in {}",
                        self.semiring
                    ))
                }
                _ => {}
            }
            for s in node.successors() {
                if s == 0 || s > n {
                    return bad(format!("node {label}: successor {s} out of range 1..{n}"));
                }
            }
        }
        if !matches!(self.nodes[0], Node::Input { .. }) {
            return bad("node 1 must be the input node".into());
        }
        if !matches!(self.nodes[n - 1], Node::Output) {
            return bad(format!("node {n} must be the output node"));
        }
        // connectivity of the underlying undirected graph
        let mut adj = vec![Vec::new(); n + 1];
        for (label, node) in self.labelled() {
            for s in node.successors() {
                adj[label].push(s);
                adj[s].push(label);
            }
        }
        let mut seen = vec![false; n + 1];
        let mut queue = VecDeque::from([1usize]);
        seen[1] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if let Some(lost) = (1..=n).find(|&l| !seen[l]) {
            return bad(format!("node {lost} is not connected to the rest of the graph"));
        }
        Ok(())
    }
}
