//! Timer wrapper. M′ spreads the input so that M's cell i lives on cell 7i,
//! keeps a binary countdown on the cells in between, simulates M one step
//! per decrement and compacts M's output back when M halts.
//!
//! Block b is cells 7b..7b+6. Track 0 holds M's tape, tracks 1 and 2 are
//! the branch registers, 3/4 the counter bit and extent flag, 5/6 a second
//! binary number P used while t(n) is computed (and markers elsewhere).
//! Every test is an equality branch against a cell whose value is known
//! to the control, and every write of a fresh value is a constant 0 or 1, so
//! M′ adds no constants beyond 0 and 1.

use std::fmt;
use std::str::FromStr;

use super::{BranchRel, Dir, Machine, Node, Op};
use crate::error::{Error, Result};
use crate::semiring::{SemiringId, Value};

/// t(n) = Σ coeffs[d]·n^d.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClockPolynomial {
    pub coeffs: Vec<u64>,
}

impl ClockPolynomial {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ClockPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, n: u64) -> u128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc.saturating_mul(n as u128).saturating_add(c as u128))
    }
}

impl fmt::Display for ClockPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match d {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{d}"),
            };
            terms.push(match (c, d) {
                (_, 0) => c.to_string(),
                (1, _) => var,
                _ => format!("{c}*{var}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl FromStr for ClockPolynomial {
    type Err = Error;

    /// Sums of terms `c`, `n`, `c*n`, `n^k`, `c*n^k` (`cn^k` also works).
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse {
            line: 1,
            col: 1,
            msg: m,
        };
        let mut coeffs: Vec<u64> = Vec::new();
        for raw in s.split('+') {
            let term: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(bad(format!("empty term in `{s}`")));
            }
            let (coef, deg) = match term.find('n') {
                None => (term.as_str(), 0usize),
                Some(at) => {
                    let head = term[..at].trim_end_matches('*');
                    let tail = &term[at + 1..];
                    let deg = match tail.strip_prefix('^') {
                        Some(k) => k
                            .parse()
                            .map_err(|_| bad(format!("bad exponent in `{term}`")))?,
                        None if tail.is_empty() => 1,
                        None => return Err(bad(format!("bad term `{term}`"))),
                    };
                    (if head.is_empty() { "1" } else { head }, deg)
                }
            };
            let c: u64 = coef
                .parse()
                .map_err(|_| bad(format!("bad coefficient in `{term}`")))?;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            coeffs[deg] = coeffs[deg]
                .checked_add(c)
                .ok_or_else(|| bad("coefficient overflow".into()))?;
        }
        Ok(ClockPolynomial::new(coeffs))
    }
}

const S: i64 = 7;
const DATA: i64 = 0;
const CB: i64 = 3;
const CF: i64 = 4;
const PB: i64 = 5;
const PF: i64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Label(usize);

#[derive(Debug, Clone, Copy)]
enum Slot {
    Unbound,
    Node(usize),
    Alias(Label),
}

#[derive(Debug, Clone)]
enum Ins {
    Input(Label),
    Output,
    Compute(i64, Op, Label),
    Branch(BranchRel, Label, Label),
    Shift(Dir, Label),
}

/// Emits nodes whose successors are symbolic labels. `pos` is the head
/// position in whatever frame the current code is written against.
struct Asm {
    id: SemiringId,
    code: Vec<Ins>,
    labels: Vec<Slot>,
    pending: Vec<Label>,
    pos: i64,
}

impl Asm {
    fn new(id: SemiringId) -> Asm {
        let mut a = Asm {
            id,
            code: Vec::new(),
            labels: Vec::new(),
            pending: Vec::new(),
            pos: 0,
        };
        let next = a.label();
        a.code.push(Ins::Input(next));
        a.pending.push(next);
        a
    }

    fn label(&mut self) -> Label {
        self.labels.push(Slot::Unbound);
        Label(self.labels.len() - 1)
    }

    /// The next emitted node also answers to `l`.
    fn bind(&mut self, l: Label) {
        self.pending.push(l);
    }

    fn bind_at(&mut self, l: Label, pos: i64) {
        self.bind(l);
        self.pos = pos;
    }

    /// A label for the next emitted node; the frame is rebased so that the
    /// head sits at 0.
    fn top(&mut self) -> Label {
        let l = self.label();
        self.bind(l);
        self.pos = 0;
        l
    }

    fn emit(&mut self, ins: Ins) {
        assert!(!self.pending.is_empty(), "unreachable code emitted");
        let idx = self.code.len();
        for l in self.pending.drain(..) {
            self.labels[l.0] = Slot::Node(idx);
        }
        self.code.push(ins);
    }

    fn seq(&mut self, make: impl FnOnce(Label) -> Ins) {
        let next = self.label();
        let ins = make(next);
        self.emit(ins);
        self.pending.push(next);
    }

    fn goto(&mut self, target: Label) {
        for l in self.pending.drain(..) {
            self.labels[l.0] = Slot::Alias(target);
        }
    }

    fn branch(&mut self, rel: BranchRel) -> (Label, Label) {
        let neg = self.label();
        let pos = self.label();
        self.emit(Ins::Branch(rel, neg, pos));
        (neg, pos)
    }

    fn value(&self, b: bool) -> Value {
        if b {
            self.id.one()
        } else {
            self.id.zero()
        }
    }

    fn put(&mut self, cell: i64, b: bool) {
        let (t, v) = (cell - self.pos, self.value(b));
        self.seq(|n| Ins::Compute(t, Op::Const(v), n));
    }

    fn put_value(&mut self, cell: i64, v: Value) {
        let t = cell - self.pos;
        self.seq(|n| Ins::Compute(t, Op::Const(v), n));
    }

    fn add(&mut self, dst: i64, a: i64, b: i64) {
        let p = self.pos;
        self.seq(|n| Ins::Compute(dst - p, Op::Add(a - p, b - p), n));
    }

    fn mul(&mut self, dst: i64, a: i64, b: i64) {
        let p = self.pos;
        self.seq(|n| Ins::Compute(dst - p, Op::Mul(a - p, b - p), n));
    }

    /// Moves the head to `cell`.
    fn move_to(&mut self, cell: i64) {
        while self.pos < cell {
            self.seq(|n| Ins::Shift(Dir::Left, n));
            self.pos += 1;
        }
        while self.pos > cell {
            self.seq(|n| Ins::Shift(Dir::Right, n));
            self.pos -= 1;
        }
    }

    // ---- block-level helpers; the head sits on a block start ----

    /// Cell `track` of the block `db` blocks away from the head.
    fn at(&self, db: i64, track: i64) -> i64 {
        debug_assert_eq!(self.pos.rem_euclid(S), 0);
        self.pos + S * db + track
    }

    /// Compares a {0,1}-valued cell with `want` through the head block's
    /// registers and clears them again. Returns (equal, different), both
    /// at the unchanged head position.
    fn test(&mut self, cell: i64, want: bool) -> (Label, Label) {
        let p = self.pos;
        self.add(p + 1, cell, p + S + 1);
        if want {
            self.put(p + 2, true);
        }
        let (eq, ne) = self.branch(BranchRel::Eq);
        let (yes, no) = (self.label(), self.label());
        for (arm, out) in [(eq, yes), (ne, no)] {
            self.bind_at(arm, p);
            self.put(p + 1, false);
            if want {
                self.put(p + 2, false);
            }
            self.goto(out);
        }
        (yes, no)
    }

    /// While the neighbouring block in direction `dir` has `track == want`,
    /// step onto it. Ends rebased on the block where it stopped.
    fn walk_while(&mut self, dir: i64, track: i64, want: bool) {
        let top = self.top();
        let (go, stop) = self.test(self.at(dir, track), want);
        self.bind_at(go, 0);
        self.move_to(S * dir);
        self.goto(top);
        self.bind_at(stop, 0);
    }

    /// Steps at least once in direction `dir`, until the current block has
    /// `track == want`.
    fn step_until(&mut self, dir: i64, track: i64, want: bool) {
        let top = self.top();
        self.move_to(S * dir);
        let (hit, miss) = self.test(self.at(0, track), want);
        self.bind_at(miss, S * dir);
        self.goto(top);
        self.bind_at(hit, 0);
    }

    fn finish(mut self, name: &str, out: Label) -> Result<Machine> {
        self.bind(out);
        self.emit(Ins::Output);
        let resolve = |mut l: Label| -> Result<usize> {
            for _ in 0..self.labels.len() + 1 {
                match self.labels[l.0] {
                    Slot::Node(i) => return Ok(i + 1),
                    Slot::Alias(t) => l = t,
                    Slot::Unbound => break,
                }
            }
            Err(Error::Contract(format!("clock wrapper left label {} open", l.0)))
        };
        let mut nodes = Vec::with_capacity(self.code.len());
        for ins in &self.code {
            nodes.push(match ins {
                Ins::Input(n) => Node::Input { next: resolve(*n)? },
                Ins::Output => Node::Output,
                Ins::Compute(t, op, n) => Node::Compute {
                    target: *t,
                    op: op.clone(),
                    next: resolve(*n)?,
                },
                Ins::Branch(rel, a, b) => Node::Branch {
                    rel: *rel,
                    neg: resolve(*a)?,
                    pos: resolve(*b)?,
                },
                Ins::Shift(d, n) => Node::Shift {
                    dir: *d,
                    next: resolve(*n)?,
                },
            });
        }
        Machine::new(name, self.id, nodes)
    }
}

/// Rearranges `0 1^n [0] x1..xn` into the spread layout: x_j on cell 7j,
/// ones on track 0 of blocks -1..-n. Ends on block 0 of that layout.
fn spread_input(a: &mut Asm) {
    use BranchRel::Eq;
    let spread = a.label();

    // n = 0 leaves an all-zero tape, which already is the layout
    a.pos = 0;
    a.move_to(-2);
    let (empty, some) = a.branch(Eq);
    a.bind_at(empty, -2);
    a.move_to(0);
    a.goto(spread);
    a.bind_at(some, -2);

    // 0 1^n 0 → 1 0^n 1: the right end becomes the end mark E, the left
    // zero the start flag, the ones become gaps
    a.put(0, true);
    a.put(-1, false);
    a.move_to(-3);
    let scan = a.top(); // probe 1, its right neighbour 2 is a gap
    let (end, unit) = a.branch(Eq);
    a.bind_at(unit, 0);
    a.put(1, false);
    a.move_to(-1);
    a.goto(scan);
    a.bind_at(end, 0);
    a.put(1, true);
    a.move_to(1);
    let seek = a.top(); // 1 is a gap, probe 2
    let (gap, mark) = a.branch(Eq);
    a.bind_at(gap, 0);
    a.move_to(1);
    a.goto(seek);
    a.bind_at(mark, 0);
    a.move_to(2);

    // one value per round: F x1 F x2 .. F [gaps] E xj ..
    // → F x1 F .. F xj F [gaps] E ..
    let round = a.top(); // E on 0, xj on 1
    a.mul(0, 1, 0);
    a.put(1, true);
    a.add(-1, 0, -1);
    a.put(0, false);
    a.move_to(-3);
    let slide = a.top(); // value on 2, a gap on 3
    a.add(3, 2, 3);
    a.put(2, true);
    let (flag, gap) = a.branch(Eq);
    a.bind_at(gap, 0);
    a.add(1, 3, 1);
    a.put(2, false);
    a.put(3, false);
    a.move_to(-1);
    a.goto(slide);
    a.bind_at(flag, 0);
    a.put(2, false);
    a.add(2, 3, 2);
    a.put(3, true);
    a.move_to(2);
    let (last, more) = a.branch(Eq);
    a.bind_at(more, 2);
    a.move_to(3);
    let seek = a.top();
    let (gap, mark) = a.branch(Eq);
    a.bind_at(gap, 0);
    a.move_to(1);
    a.goto(seek);
    a.bind_at(mark, 0);
    a.move_to(2);
    a.goto(round);
    a.bind_at(last, 2);

    // F0 x1 F1 .. xn Fn: peel xn off and move the rest 5 cells left, n
    // times. Each round leaves a marker on track 5 of xk's block.
    a.put(4, false);
    a.move_to(2);
    let peel = a.top(); // xk on 0, its flag on 1, previous flag on -1
    a.put(1, false);
    a.put(5, true);
    a.mul(-1, -2, -1);
    a.put(-2, true);
    a.move_to(-4);
    let (more, first) = a.branch(Eq);
    a.bind_at(first, -4);
    a.mul(-2, -1, -2);
    a.put(-1, true); // F0 stays as the origin mark
    a.move_to(-7);
    let convert = a.label();
    a.goto(convert);
    a.bind_at(more, -4);
    a.mul(-2, -1, -2);
    a.put(-1, true);
    a.move_to(-3);
    let back = a.top(); // on a flag; is there one at -2?
    a.mul(0, -1, 0);
    a.put(-1, true);
    a.move_to(-3);
    let (yes, no) = a.branch(Eq);
    a.bind_at(yes, -3);
    a.mul(-1, 0, -1);
    a.put(0, true);
    a.move_to(-2);
    a.goto(back);
    a.bind_at(no, -3);
    a.mul(-1, 0, -1);
    a.put(0, true);
    a.move_to(0);
    let copy = a.top(); // on a flag; is there one at 2?
    a.mul(0, 1, 0);
    a.put(1, true);
    let (next, last) = a.branch(Eq);
    a.bind_at(next, 0);
    a.mul(1, 0, 1);
    a.put(0, true);
    a.put(-5, true);
    a.mul(-4, 1, 0);
    a.move_to(2);
    a.goto(copy);
    a.bind_at(last, 0);
    a.mul(1, 0, 1);
    a.put(0, true);
    a.put(-5, true);
    for c in -4..=0 {
        a.put(c, false);
    }
    a.move_to(-6);
    a.goto(peel);

    // markers on blocks 1..n, origin mark on track 6 of block 0. Slide the
    // marker run to blocks -n..-1 and turn it into track-0 ones.
    a.bind_at(convert, 0);
    a.move_to(S);
    let slide = a.top(); // left end of the run
    a.put(a.at(-1, PB), true);
    a.walk_while(1, PB, true);
    a.put(a.at(0, PB), false);
    let (home, away) = a.test(a.at(0, PF), true);
    a.bind_at(away, 0);
    a.walk_while(-1, PB, true);
    a.goto(slide);
    a.bind_at(home, 0);
    a.move_to(-S);
    let ones = a.top();
    let (mark, none) = a.test(a.at(0, PB), true);
    a.bind_at(mark, 0);
    a.put(a.at(0, PB), false);
    a.put(a.at(0, DATA), true);
    a.move_to(-S);
    a.goto(ones);
    a.bind_at(none, 0);
    a.step_until(1, PF, true);
    a.put(a.at(0, PF), false);
    a.goto(spread);

    a.bind_at(spread, 0);
}

/// Writes `v` in binary on (bit, flag) tracks of blocks 0.. (at least one
/// block). The tracks are assumed clear.
fn write_number(a: &mut Asm, v: u64, bit: i64, flag: i64) {
    let width = (64 - v.leading_zeros()).max(1) as i64;
    for b in 0..width {
        if (v >> b) & 1 == 1 {
            a.put(a.at(b, bit), true);
        }
        a.put(a.at(b, flag), true);
    }
}

/// P := C, C := 0 keeping C's extent flags.
fn move_counter_to_p(a: &mut Asm) {
    let top = a.top();
    let (live, past) = a.test(a.at(0, CF), true);
    a.bind_at(live, 0);
    a.add(a.at(0, PB), a.at(0, CB), a.at(0, PB));
    a.put(a.at(0, PF), true);
    a.put(a.at(0, CB), false);
    a.move_to(S);
    a.goto(top);
    a.bind_at(past, 0);
    a.move_to(-S);
    a.walk_while(-1, CF, true);
}

/// C := C + P, carry kept in the control. Returns to block 0.
fn add_p_to_c(a: &mut Asm) {
    let tops = [a.label(), a.label()];
    let done = a.label();
    a.goto(tops[0]);
    for carry in 0..2u8 {
        a.bind_at(tops[carry as usize], 0);
        let (p_live, p_past) = a.test(a.at(0, PF), true);
        a.bind_at(p_live, 0);
        let (pb1, pb0) = a.test(a.at(0, PB), true);
        let mut arms = vec![(pb1, carry + 1), (pb0, carry)];
        if carry == 0 {
            a.bind_at(p_past, 0);
            a.goto(done);
        } else {
            arms.push((p_past, 1));
        }
        for (arm, partial) in arms {
            a.bind_at(arm, 0);
            let (c1, c0) = a.test(a.at(0, CB), true);
            for (lab, cb) in [(c1, 1u8), (c0, 0u8)] {
                a.bind_at(lab, 0);
                let s = partial + cb;
                a.put(a.at(0, CB), s % 2 == 1);
                a.put(a.at(0, CF), true);
                a.move_to(S);
                a.goto(tops[(s / 2) as usize]);
            }
        }
    }
    a.bind_at(done, 0);
    a.walk_while(-1, CF, true);
}

/// Clears P. C's extent covers P's, so the walk back follows C flags.
fn clear_p(a: &mut Asm) {
    let top = a.top();
    let (live, past) = a.test(a.at(0, PF), true);
    a.bind_at(live, 0);
    a.put(a.at(0, PB), false);
    a.put(a.at(0, PF), false);
    a.move_to(S);
    a.goto(top);
    a.bind_at(past, 0);
    a.move_to(-S);
    a.walk_while(-1, CF, true);
}

/// Runs `body` n times, n being the count of ones left of block 0. A
/// marker on track 5 of the negative blocks keeps the count.
fn repeat_n(a: &mut Asm, body: impl Fn(&mut Asm)) {
    let (some, none) = a.test(a.at(-1, DATA), true);
    a.bind_at(some, 0);
    a.put(a.at(-1, PB), true);
    let again = a.top();
    body(a);
    a.step_until(-1, PB, true);
    a.put(a.at(0, PB), false);
    let (more, end) = a.test(a.at(-1, DATA), true);
    a.bind_at(more, 0);
    a.put(a.at(-1, PB), true);
    a.step_until(1, CF, true);
    a.goto(again);
    a.bind_at(end, 0);
    a.step_until(1, CF, true);
    a.bind_at(none, 0);
}

/// C := t(n) by Horner's rule.
fn load_counter(a: &mut Asm, t: &ClockPolynomial) {
    let d = t.coeffs.len() - 1;
    write_number(a, t.coeffs[d], CB, CF);
    for &c in t.coeffs[..d].iter().rev() {
        move_counter_to_p(a);
        repeat_n(a, add_p_to_c);
        clear_p(a);
        if c > 0 {
            write_number(a, c, PB, PF);
            add_p_to_c(a);
            clear_p(a);
        }
    }
}

/// Counts C down by one and returns to block 0; jumps to `timeout` if C
/// was already zero (no flagged block left to borrow from).
fn decrement(a: &mut Asm, timeout: Label) {
    let top = a.top();
    let (live, past) = a.test(a.at(0, CF), true);
    a.bind_at(past, 0);
    a.goto(timeout);
    a.bind_at(live, 0);
    let (one, zero) = a.test(a.at(0, CB), true);
    a.bind_at(zero, 0);
    a.put(a.at(0, CB), true);
    a.move_to(S);
    a.goto(top);
    a.bind_at(one, 0);
    a.put(a.at(0, CB), false);
    a.walk_while(-1, CF, true);
}

/// After the head moved one block right the counter sits on blocks
/// -1..; copy it up by one block, top first.
fn counter_up(a: &mut Asm) {
    a.move_to(-S);
    a.walk_while(1, CF, true);
    let top = a.top();
    a.add(a.at(1, CB), a.at(0, CB), a.at(1, 1));
    a.put(a.at(1, CF), true);
    let (more, bottom) = a.test(a.at(-1, CF), true);
    a.bind_at(more, 0);
    a.move_to(-S);
    a.goto(top);
    a.bind_at(bottom, 0);
    a.put(a.at(0, CB), false);
    a.put(a.at(0, CF), false);
    a.move_to(S);
}

/// After the head moved one block left the counter sits on blocks 1..;
/// copy it down by one block, bottom first.
fn counter_down(a: &mut Asm) {
    a.move_to(S);
    let top = a.top();
    a.add(a.at(-1, CB), a.at(0, CB), a.at(1, 1));
    a.put(a.at(-1, CF), true);
    let (more, last) = a.test(a.at(1, CF), true);
    a.bind_at(more, 0);
    a.move_to(S);
    a.goto(top);
    a.bind_at(last, 0);
    a.put(a.at(0, CB), false);
    a.put(a.at(0, CF), false);
    a.move_to(-S);
    a.walk_while(-1, CF, true);
}

/// One copy of M's node, preceded by the countdown. Head on block 0.
fn simulate_node(a: &mut Asm, node: &Node, entry: &[Label], timeout: Label) {
    let go = |a: &mut Asm, label: usize| a.goto(entry[label - 1]);
    decrement(a, timeout);
    match node {
        Node::Input { next } => go(a, *next),
        Node::Output => unreachable!("output has its own code"),
        Node::Compute { target, op, next } => {
            let t = S * target;
            match op {
                Op::Add(j, k) => a.add(t, S * j, S * k),
                Op::Mul(j, k) => a.mul(t, S * j, S * k),
                Op::Const(v) => a.put_value(t, v.clone()),
            }
            go(a, *next);
        }
        Node::Branch { rel, neg, pos } => {
            a.add(1, S, S + 1);
            a.add(2, 2 * S, S + 1);
            let (holds, fails) = a.branch(*rel);
            for (arm, to) in [(holds, *neg), (fails, *pos)] {
                a.bind_at(arm, 0);
                a.put(1, false);
                a.put(2, false);
                go(a, to);
            }
        }
        Node::Shift { dir, next } => {
            match dir {
                Dir::Left => {
                    a.move_to(S);
                    a.pos = 0;
                    counter_up(a);
                }
                Dir::Right => {
                    a.move_to(-S);
                    a.pos = 0;
                    counter_down(a);
                }
            }
            go(a, *next);
        }
    }
}

/// M halted with the head on block 0. Clears the counter and rebuilds
/// `0 1^l [E] y1..yl` with the head on E, then jumps to `out`.
fn collect_output(a: &mut Asm, out: Label) {
    use BranchRel::Eq;

    a.walk_while(1, CF, true);
    let clear = a.top();
    a.put(a.at(0, CB), false);
    a.put(a.at(0, CF), false);
    let (more, base) = a.test(a.at(-1, CF), true);
    a.bind_at(more, 0);
    a.move_to(-S);
    a.goto(clear);
    a.bind_at(base, 0);

    let (some, none) = a.test(a.at(-1, DATA), true);
    a.bind_at(none, 0);
    a.goto(out);
    a.bind_at(some, 0);

    // markers on blocks -1..-l, then slide them to 1..l
    a.put(a.at(0, PF), true);
    a.move_to(-S);
    let mark = a.top();
    a.put(a.at(0, PB), true);
    let (more, end) = a.test(a.at(-1, DATA), true);
    a.bind_at(more, 0);
    a.move_to(-S);
    a.goto(mark);
    a.bind_at(end, 0);
    let slide = a.top(); // left end of the run
    a.walk_while(1, PB, true);
    a.put(a.at(1, PB), true);
    a.walk_while(-1, PB, true);
    a.put(a.at(0, PB), false);
    a.move_to(S);
    let (home, away) = a.test(a.at(-1, PF), true);
    a.bind_at(away, S);
    a.goto(slide);
    a.bind_at(home, S);

    // gather y1..yl into a run `g0 y1 g1 .. yk gk` moving right: g0 is the
    // origin mark on cell 6, each round picks up the next marked value
    a.put(8, true);
    a.put(12, false);
    a.move_to(7);
    let gather = a.top(); // yk on 0, gk on 1, next marker on 12
    a.put(13, true);
    a.move_to(11);
    let (marked, finished) = a.branch(Eq);
    a.bind_at(marked, 11);
    a.put(13, false);
    a.put(12, false);
    a.put(8, true);
    a.move_to(1);
    let copy = a.top(); // on a flag: copy it and its value 5 right
    a.put(5, true);
    a.mul(4, -1, 0);
    a.put(-1, true);
    a.move_to(-3);
    let (flag, start) = a.branch(Eq);
    a.bind_at(flag, -3);
    a.move_to(-2);
    a.goto(copy);
    a.bind_at(start, -3);
    a.put(-1, false);
    for c in 0..=4 {
        a.put(c, false);
    }
    a.move_to(5);
    let fwd = a.top(); // on a flag; is there one at 2?
    a.mul(0, 1, 0);
    a.put(1, true);
    let (next, last) = a.branch(Eq);
    a.bind_at(next, 0);
    a.mul(1, 0, 1);
    a.put(0, true);
    a.move_to(2);
    a.goto(fwd);
    a.bind_at(last, 0);
    a.mul(1, 0, 1);
    a.put(0, true);
    a.move_to(-1);
    a.goto(gather);

    // g0 y1 g1 .. yl gl E: undo the spreading of the input in reverse
    a.bind_at(finished, 11);
    a.put(13, false);
    a.put(2, true);
    a.move_to(0);
    let round = a.top(); // yj on 0, gj on 1
    a.put(1, false);
    a.add(1, 0, 1);
    a.put(0, false);
    let slide = a.top(); // gap on 0, value on 1
    a.add(0, 1, 0);
    a.put(1, true);
    let (mark, gap) = a.branch(Eq);
    a.bind_at(gap, 0);
    a.add(2, 0, 2);
    a.put(1, false);
    a.put(0, false);
    a.move_to(1);
    a.goto(slide);
    a.bind_at(mark, 0);
    a.mul(2, 0, 2);
    a.put(0, false);
    // E on 1, gaps to its left up to the previous flag
    a.move_to(-2);
    let seek = a.top(); // probe 1, 2 is a gap
    let (gap, flag) = a.branch(Eq);
    a.bind_at(gap, 0);
    a.move_to(-1);
    a.goto(seek);
    a.bind_at(flag, 0);
    a.mul(1, 0, 1);
    a.put(0, true);
    a.move_to(-2);
    let (more, first) = a.branch(Eq);
    a.bind_at(more, -2);
    a.mul(0, 1, 0);
    a.put(1, true);
    a.move_to(0);
    a.goto(round);
    a.bind_at(first, -2);
    a.mul(0, 1, 0);
    a.put(1, false);
    a.put(2, true);
    a.move_to(1);
    let ones = a.top(); // 1 is a one now, probe 2
    let (end, gap) = a.branch(Eq);
    a.bind_at(gap, 0);
    a.put(2, true);
    a.move_to(1);
    a.goto(ones);
    a.bind_at(end, 0);
    a.put(2, false);
    a.move_to(2);
    a.goto(out);
}

/// Constant factor of [`clock_step_bound`].
pub const CLOCK_FACTOR: u128 = 400;

/// Step bound asserted for `wrap_with_clock(m, t)` on inputs of length n:
/// C·(t(n) + n + 1)·⌈log₂(t(n) + 2)⌉. The relocation phases are quadratic
/// in n and in the output length, so C only covers small n (checked up to 4).
pub fn clock_step_bound(t: &ClockPolynomial, n: u64) -> u128 {
    let tn = t.eval(n);
    let log = u128::BITS - (tn + 1).leading_zeros();
    CLOCK_FACTOR * (tn + n as u128 + 1) * log as u128
}

/// Builds M′ with f_M′(x) = f_M(x) whenever M halts on x within t(|x|)
/// steps, and M′ halting with empty output otherwise. M′ uses no constants
/// beyond M's, 0 and 1, and runs in O((t(n) + n)·log(t(n) + 2) + n² + l²)
/// steps, the last two terms paying for moving the input and output.
pub fn wrap_with_clock(m: &Machine, t: &ClockPolynomial) -> Result<Machine> {
    let id = m.semiring;
    let name = format!("{}_clocked", m.name);
    let mut a = Asm::new(id);
    let out = a.label();
    if t.is_zero() {
        a.put(-1, false);
        a.goto(out);
        return a.finish(&name, out);
    }
    spread_input(&mut a);
    load_counter(&mut a, t);
    let entry: Vec<Label> = (0..m.len()).map(|_| a.label()).collect();
    a.goto(entry[0]);
    for (i, node) in m.nodes().iter().enumerate() {
        a.bind_at(entry[i], 0);
        if let Node::Output = node {
            collect_output(&mut a, out);
        } else {
            simulate_node(&mut a, node, &entry, out);
        }
    }
    a.finish(&name, out)
}
