//! Machine listings:
//!
//! ```text
//! machine double semiring natural
//! node 1 input next=2
//! node 2 add i=1 j=1 k=1 next=3
//! node 3 output
//! ```
//!
//! Other node lines: `mul i= j= k= next=`, `const i= c=#v next=`,
//! `branch neg= pos= rel==` (or `rel=<=`), `shiftl next=`, `shiftr next=`.
//! Nodes may be listed in any order; `//` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use super::lex::{err, literal_len};
use crate::error::{Error, Result};
use crate::machine::{BranchRel, Dir, Machine, Node, Op};
use crate::semiring::{parse_value, SemiringId};

/// Whitespace-separated words with their 1-based columns; a `#poly{…}`
/// literal stays one word even if it contains spaces.
fn words(line: &str) -> Vec<(usize, String)> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            if chars[i] == '#' {
                i += literal_len(&chars[i..]).unwrap_or(chars.len() - i);
            } else {
                i += 1;
            }
        }
        out.push((start + 1, chars[start..i].iter().collect()));
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find("//") {
        Some(k) => &line[..k],
        None => line,
    }
}

struct Line {
    no: usize,
    words: Vec<(usize, String)>,
}

impl Line {
    fn fail(&self, col: usize, msg: impl Into<String>) -> Error {
        err(self.no, col, msg)
    }

    /// `key=value` arguments after the kind word.
    fn args(&self) -> Result<BTreeMap<String, (usize, String)>> {
        let mut out = BTreeMap::new();
        for (col, w) in &self.words[3..] {
            let Some((k, v)) = w.split_once('=') else {
                return Err(self.fail(*col, format!("expected key=value, found `{w}`")));
            };
            if out.insert(k.to_string(), (*col, v.to_string())).is_some() {
                return Err(self.fail(*col, format!("argument `{k}` given twice")));
            }
        }
        Ok(out)
    }
}

struct Args {
    line: Line,
    map: BTreeMap<String, (usize, String)>,
}

impl Args {
    fn raw(&mut self, key: &str) -> Result<(usize, String)> {
        self.map
            .remove(key)
            .ok_or_else(|| self.line.fail(self.line.words[2].0, format!("missing `{key}=`")))
    }

    fn int<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (col, v) = self.raw(key)?;
        v.parse()
            .map_err(|_| self.line.fail(col, format!("`{key}={v}` is not an integer in range")))
    }

    fn done(self) -> Result<()> {
        match self.map.into_iter().next() {
            Some((k, (col, _))) => Err(self.line.fail(col, format!("unknown argument `{k}`"))),
            None => Ok(()),
        }
    }
}

fn parse_node(line: Line, id: SemiringId) -> Result<(usize, Node)> {
    let w = &line.words;
    if w.len() < 3 || w[0].1 != "node" {
        return Err(line.fail(w[0].0, "expected `node <label> <kind> ...`"));
    }
    let label: usize = w[1]
        .1
        .parse()
        .ok()
        .filter(|&l| l > 0)
        .ok_or_else(|| line.fail(w[1].0, format!("bad label `{}`", w[1].1)))?;
    let kind = w[2].1.clone();
    let kind_col = w[2].0;
    let map = line.args()?;
    let mut a = Args { line, map };
    let node = match kind.as_str() {
        "input" => Node::Input { next: a.int("next")? },
        "output" => Node::Output,
        "add" | "mul" => {
            let target = a.int("i")?;
            let (j, k) = (a.int("j")?, a.int("k")?);
            Node::Compute {
                target,
                op: if kind == "add" { Op::Add(j, k) } else { Op::Mul(j, k) },
                next: a.int("next")?,
            }
        }
        "const" => {
            let target = a.int("i")?;
            let (col, text) = a.raw("c")?;
            let c = parse_value(&text, id).map_err(|e| a.line.fail(col, e.to_string()))?;
            Node::Compute {
                target,
                op: Op::Const(c),
                next: a.int("next")?,
            }
        }
        "branch" => {
            let (neg, pos) = (a.int("neg")?, a.int("pos")?);
            let rel = match a.map.remove("rel") {
                None => BranchRel::Eq,
                Some((_, r)) if r == "=" => BranchRel::Eq,
                Some((_, r)) if r == "<=" => BranchRel::Leq,
                Some((col, r)) => return Err(a.line.fail(col, format!("unknown relation `{r}`"))),
            };
            Node::Branch { rel, neg, pos }
        }
        "shiftl" | "shiftr" => Node::Shift {
            dir: if kind == "shiftl" { Dir::Left } else { Dir::Right },
            next: a.int("next")?,
        },
        other => return Err(a.line.fail(kind_col, format!("unknown node kind `{other}`"))),
    };
    a.done()?;
    Ok((label, node))
}

/// Parses and validates a machine listing.
pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| Line {
            no: k + 1,
            words: words(strip_comment(l)),
        })
        .filter(|l| !l.words.is_empty());
    let header = lines.next().ok_or_else(|| err(1, 1, "empty machine description"))?;
    let hw: Vec<&str> = header.words.iter().map(|(_, w)| w.as_str()).collect();
    let (name, id) = match hw.as_slice() {
        ["machine", name, "semiring", id] => (
            name.to_string(),
            id.parse::<SemiringId>()
                .map_err(|e| header.fail(header.words[3].0, e.to_string()))?,
        ),
        _ => return Err(header.fail(1, "expected `machine <name> semiring <id>`")),
    };
    let mut nodes: BTreeMap<usize, (usize, Node)> = BTreeMap::new();
    for line in lines {
        let (no, col) = (line.no, line.words[0].0);
        let (label, node) = parse_node(line, id)?;
        if nodes.insert(label, (no, node)).is_some() {
            return Err(err(no, col, format!("duplicate label {label}")));
        }
    }
    if let Some((expected, (&label, &(no, _)))) = nodes.iter().enumerate().find(|(k, (l, _))| **l != k + 1) {
        let missing = expected + 1;
        return Err(Error::Machine(format!(
            "line {no}: labels must run 1..N, node {missing} is missing before {label}"
        )));
    }
    Machine::new(&name, id, nodes.into_values().map(|(_, n)| n).collect())
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Input { next } => write!(f, "input next={next}"),
            Node::Output => write!(f, "output"),
            Node::Compute { target, op, next } => match op {
                Op::Add(j, k) => write!(f, "add i={target} j={j} k={k} next={next}"),
                Op::Mul(j, k) => write!(f, "mul i={target} j={j} k={k} next={next}"),
                Op::Const(c) => write!(f, "const i={target} c={c} next={next}"),
            },
            Node::Branch { rel, neg, pos } => {
                let r = match rel {
                    BranchRel::Eq => "=",
                    BranchRel::Leq => "<=",
                };
                write!(f, "branch neg={neg} pos={pos} rel={r}")
            }
            Node::Shift { dir, next } => match dir {
                Dir::Left => write!(f, "shiftl next={next}"),
                Dir::Right => write!(f, "shiftr next={next}"),
            },
        }
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "machine {} semiring {}", self.name, self.semiring)?;
        for (label, node) in self.labelled() {
            writeln!(f, "node {label} {node}")?;
        }
        Ok(())
    }
}
