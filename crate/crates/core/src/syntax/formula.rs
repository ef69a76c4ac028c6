//! Formula surface syntax. Binding strength, tightest first:
//!
//! | level | forms                                   | associativity |
//! |-------|-----------------------------------------|---------------|
//! | 0     | `p`, `~p`, `#v`, `R(x,y)`, `!R(x)`, `( )` |               |
//! | 1     | `=`, `<=`, `!=`, `!<=`, FO `x = y`, `x != y` | none     |
//! | 2     | `\|`                                     | left          |
//! | 3     | `&`                                     | left          |
//! | 4     | `not`                                   | prefix        |
//! | 5     | `and`                                   | left          |
//! | 6     | `or`                                    | left          |
//! | 7     | `->`                                    | right         |
//! | 8     | `exists x`, `forall x`                  | prefix        |
//!
//! Prefix forms may also open an operand at any level, taking everything to
//! their right. The printer emits the fewest parentheses that parse back to
//! the same tree.

use std::fmt;

use super::lex::{Cursor, Tok};
use crate::error::Result;
use crate::logic::{validate_eso, validate_fo, validate_pl, ESOSentence, FOFormula, PLFormula, Vocabulary};
use crate::semiring::{parse_value, SemiringId, Value};

const TOP: u8 = 8;

#[derive(Clone, Copy)]
enum Bin {
    And,
    Or,
    Eq,
    Leq,
    Neq,
    NotLeq,
    BAnd,
    BOr,
    BImp,
}

impl Bin {
    fn level(self) -> u8 {
        match self {
            Bin::Eq | Bin::Leq | Bin::Neq | Bin::NotLeq => 1,
            Bin::Or => 2,
            Bin::And => 3,
            Bin::BAnd => 5,
            Bin::BOr => 6,
            Bin::BImp => 7,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Bin::And => "&",
            Bin::Or => "|",
            Bin::Eq => "=",
            Bin::Leq => "<=",
            Bin::Neq => "!=",
            Bin::NotLeq => "!<=",
            Bin::BAnd => "and",
            Bin::BOr => "or",
            Bin::BImp => "->",
        }
    }

    /// Allowed levels of the (left, right) operands.
    fn operand_levels(self) -> (u8, u8) {
        let l = self.level();
        match self {
            Bin::Eq | Bin::Leq | Bin::Neq | Bin::NotLeq => (0, 0),
            Bin::BImp => (l - 1, l),
            _ => (l, l - 1),
        }
    }
}

/// What the shared parser and printer need from a formula family.
trait Surface: Sized {
    fn bin(op: Bin, a: Self, b: Self) -> Self;
    fn bnot(a: Self) -> Self;
    fn constant(v: Value) -> Self;
    /// A level-0 form, or a layer-specific level-1 form. `None` if the
    /// next token does not start one.
    fn atom(p: &mut Parser) -> Result<Option<(Self, u8)>>;
    fn quantifier(p: &mut Parser, kw: &str, body: impl FnOnce(&mut Parser) -> Result<Self>) -> Result<Self>;
}

struct Parser {
    cur: Cursor,
    id: SemiringId,
}

fn comparison(t: &Tok) -> Option<Bin> {
    match t {
        Tok::Eq => Some(Bin::Eq),
        Tok::Leq => Some(Bin::Leq),
        Tok::Neq => Some(Bin::Neq),
        Tok::NotLeq => Some(Bin::NotLeq),
        _ => None,
    }
}

impl Parser {
    fn formula<F: Surface>(&mut self, level: u8) -> Result<F> {
        match level {
            0 => self.primary::<F>().map(|(f, _)| f),
            1 => {
                let (lhs, l) = self.primary::<F>()?;
                if l > 0 {
                    return Ok(lhs);
                }
                let Some(op) = comparison(self.cur.peek()) else {
                    return Ok(lhs);
                };
                self.cur.next();
                let (rhs, r) = self.primary::<F>()?;
                if r > 0 {
                    return Err(self.cur.error("parenthesize a comparison operand"));
                }
                Ok(F::bin(op, lhs, rhs))
            }
            2 | 3 | 5 | 6 => {
                let (op, tok) = match level {
                    2 => (Bin::Or, Tok::Bar),
                    3 => (Bin::And, Tok::Amp),
                    5 => (Bin::BAnd, Tok::Ident("and".into())),
                    _ => (Bin::BOr, Tok::Ident("or".into())),
                };
                let mut acc = self.formula::<F>(level - 1)?;
                while self.cur.eat(&tok) {
                    acc = F::bin(op, acc, self.formula::<F>(level - 1)?);
                }
                Ok(acc)
            }
            4 => {
                if self.cur.is_keyword("not") {
                    self.cur.next();
                    return Ok(F::bnot(self.formula::<F>(4)?));
                }
                self.formula::<F>(3)
            }
            7 => {
                let lhs = self.formula::<F>(6)?;
                if self.cur.eat(&Tok::Arrow) {
                    return Ok(F::bin(Bin::BImp, lhs, self.formula::<F>(7)?));
                }
                Ok(lhs)
            }
            _ => {
                for kw in ["exists", "forall"] {
                    if self.cur.is_keyword(kw) {
                        self.cur.next();
                        return F::quantifier(self, kw, |p| p.formula::<F>(TOP));
                    }
                }
                self.formula::<F>(7)
            }
        }
    }

    /// Returns the form and its level (0, or 1 for a complete layer
    /// comparison such as `x = y`).
    fn primary<F: Surface>(&mut self) -> Result<(F, u8)> {
        if self.cur.eat(&Tok::LParen) {
            let f = self.formula::<F>(TOP)?;
            self.cur.expect(&Tok::RParen, "`)`")?;
            return Ok((f, 0));
        }
        if let Tok::Lit(text) = self.cur.peek() {
            let v = parse_value(text, self.id).map_err(|e| self.cur.error(e.to_string()))?;
            self.cur.next();
            return Ok((F::constant(v), 0));
        }
        if self.cur.is_keyword("not") || self.cur.is_keyword("exists") || self.cur.is_keyword("forall") {
            let level = if self.cur.is_keyword("not") { 4 } else { TOP };
            return Ok((self.formula::<F>(level)?, 0));
        }
        match F::atom(self)? {
            Some(f) => Ok(f),
            None => Err(self.cur.unexpected("a formula")),
        }
    }

    fn var_list(&mut self) -> Result<Vec<String>> {
        self.cur.expect(&Tok::LParen, "`(`")?;
        let mut vars = Vec::new();
        if !self.cur.eat(&Tok::RParen) {
            loop {
                vars.push(self.cur.ident("a variable")?);
                if self.cur.eat(&Tok::RParen) {
                    break;
                }
                self.cur.expect(&Tok::Comma, "`,` or `)`")?;
            }
        }
        Ok(vars)
    }
}

fn pl_bin(op: Bin, a: PLFormula, b: PLFormula) -> PLFormula {
    match op {
        Bin::And => PLFormula::and(a, b),
        Bin::Or => PLFormula::or(a, b),
        Bin::Eq => PLFormula::eq(a, b),
        Bin::Leq => PLFormula::leq(a, b),
        Bin::Neq => PLFormula::neq(a, b),
        Bin::NotLeq => PLFormula::not_leq(a, b),
        Bin::BAnd => PLFormula::band(a, b),
        Bin::BOr => PLFormula::bor(a, b),
        Bin::BImp => PLFormula::bimp(a, b),
    }
}

impl Surface for PLFormula {
    fn bin(op: Bin, a: Self, b: Self) -> Self {
        pl_bin(op, a, b)
    }

    fn bnot(a: Self) -> Self {
        PLFormula::bnot(a)
    }

    fn constant(v: Value) -> Self {
        PLFormula::Const(v)
    }

    fn atom(p: &mut Parser) -> Result<Option<(Self, u8)>> {
        if p.cur.eat(&Tok::Tilde) {
            return Ok(Some((PLFormula::NegProp(p.cur.ident("a proposition")?), 0)));
        }
        if matches!(p.cur.peek(), Tok::Ident(_)) {
            return Ok(Some((PLFormula::Prop(p.cur.ident("a proposition")?), 0)));
        }
        Ok(None)
    }

    fn quantifier(p: &mut Parser, _: &str, _: impl FnOnce(&mut Parser) -> Result<Self>) -> Result<Self> {
        Err(p.cur.error("quantifiers are not propositional"))
    }
}

impl Surface for FOFormula {
    fn bin(op: Bin, a: Self, b: Self) -> Self {
        match op {
            Bin::And => FOFormula::and(a, b),
            Bin::Or => FOFormula::or(a, b),
            Bin::Eq => FOFormula::eq(a, b),
            Bin::Leq => FOFormula::leq(a, b),
            Bin::Neq => FOFormula::neq(a, b),
            Bin::NotLeq => FOFormula::not_leq(a, b),
            Bin::BAnd => FOFormula::band(a, b),
            Bin::BOr => FOFormula::bor(a, b),
            Bin::BImp => FOFormula::bimp(a, b),
        }
    }

    fn bnot(a: Self) -> Self {
        FOFormula::bnot(a)
    }

    fn constant(v: Value) -> Self {
        FOFormula::Const(v)
    }

    fn atom(p: &mut Parser) -> Result<Option<(Self, u8)>> {
        if p.cur.eat(&Tok::Bang) {
            let r = p.cur.ident("a relation")?;
            return Ok(Some((FOFormula::NegAtom(r, p.var_list()?), 0)));
        }
        if !matches!(p.cur.peek(), Tok::Ident(_)) {
            return Ok(None);
        }
        let name = p.cur.ident("a relation or variable")?;
        if *p.cur.peek() == Tok::LParen {
            return Ok(Some((FOFormula::Atom(name, p.var_list()?), 0)));
        }
        let neq = match p.cur.next() {
            Tok::Eq => false,
            Tok::Neq => true,
            _ => return Err(p.cur.error(format!("variable `{name}` must be compared with `=` or `!=`"))),
        };
        let y = p.cur.ident("a variable")?;
        let f = if neq {
            FOFormula::VarNeq(name, y)
        } else {
            FOFormula::VarEq(name, y)
        };
        Ok(Some((f, 1)))
    }

    fn quantifier(p: &mut Parser, kw: &str, body: impl FnOnce(&mut Parser) -> Result<Self>) -> Result<Self> {
        let x = p.cur.ident("a variable")?;
        let b = Box::new(body(p)?);
        Ok(if kw == "exists" {
            FOFormula::Exists(x, b)
        } else {
            FOFormula::Forall(x, b)
        })
    }
}

fn parse_with<F: Surface>(cur: Cursor, id: SemiringId) -> Result<(F, Cursor)> {
    let mut p = Parser { cur, id };
    let f = p.formula::<F>(TOP)?;
    Ok((f, p.cur))
}

/// Parses and validates a propositional formula over `id`.
pub fn parse_pl(text: &str, id: SemiringId) -> Result<PLFormula> {
    let (f, cur) = parse_with::<PLFormula>(Cursor::new(text)?, id)?;
    cur.end()?;
    validate_pl(&f, &id.profile())?;
    Ok(f)
}

/// Parses a first-order formula over `id` and checks that every relation
/// is used with one arity.
pub fn parse_fo(text: &str, id: SemiringId) -> Result<FOFormula> {
    let (f, cur) = parse_with::<FOFormula>(Cursor::new(text)?, id)?;
    cur.end()?;
    check_fo(&f, id)?;
    Ok(f)
}

fn check_fo(f: &FOFormula, id: SemiringId) -> Result<()> {
    let mut vocab = Vocabulary::new();
    let mut clash = None;
    collect_arities(f, &mut vocab, &mut clash);
    if let Some(r) = clash {
        return Err(crate::Error::Validation(format!("relation {r} used with two arities")));
    }
    validate_fo(f, &id.profile(), &vocab)
}

fn collect_arities(f: &FOFormula, vocab: &mut Vocabulary, clash: &mut Option<String>) {
    if let FOFormula::Atom(r, xs) | FOFormula::NegAtom(r, xs) = f {
        if *vocab.entry(r.clone()).or_insert(xs.len()) != xs.len() {
            clash.get_or_insert_with(|| r.clone());
        }
    }
    for c in f.children() {
        collect_arities(c, vocab, clash);
    }
}

/// Parses `EXISTS R/k, S/j . matrix` (the prefix may be repeated or empty).
/// The matrix must be a sentence.
pub fn parse_eso(text: &str, id: SemiringId) -> Result<ESOSentence> {
    let mut cur = Cursor::new(text)?;
    let mut prefix = Vec::new();
    while cur.is_keyword("EXISTS") {
        cur.next();
        loop {
            let r = cur.ident("a relation")?;
            cur.expect(&Tok::Slash, "`/`")?;
            let k = cur.num("an arity")? as usize;
            prefix.push((r, k));
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(&Tok::Dot, "`.`")?;
    }
    let (matrix, cur) = parse_with::<FOFormula>(cur, id)?;
    cur.end()?;
    check_fo(&matrix, id)?;
    let s = ESOSentence { prefix, matrix };
    let base: Vocabulary = s
        .matrix
        .relations()
        .into_iter()
        .filter(|(r, _)| !s.prefix.iter().any(|(q, _)| q == r))
        .collect();
    validate_eso(&s, &id.profile(), &base)?;
    Ok(s)
}

/// A view of one node for the printer.
enum Shape<'a, F> {
    Leaf(String),
    Bin(Bin, &'a F, &'a F),
    Not(&'a F),
    Quant(&'static str, &'a str, &'a F),
    /// Level-1 leaves such as `x = y`.
    Cmp(String),
}

trait Print: Sized {
    fn shape(&self) -> Shape<'_, Self>;
}

impl Print for PLFormula {
    fn shape(&self) -> Shape<'_, Self> {
        use PLFormula as P;
        match self {
            P::Prop(p) => Shape::Leaf(p.clone()),
            P::NegProp(p) => Shape::Leaf(format!("~{p}")),
            P::Const(v) => Shape::Leaf(v.to_string()),
            P::And(a, b) => Shape::Bin(Bin::And, a, b),
            P::Or(a, b) => Shape::Bin(Bin::Or, a, b),
            P::Eq(a, b) => Shape::Bin(Bin::Eq, a, b),
            P::Leq(a, b) => Shape::Bin(Bin::Leq, a, b),
            P::Neq(a, b) => Shape::Bin(Bin::Neq, a, b),
            P::NotLeq(a, b) => Shape::Bin(Bin::NotLeq, a, b),
            P::BNot(a) => Shape::Not(a),
            P::BAnd(a, b) => Shape::Bin(Bin::BAnd, a, b),
            P::BOr(a, b) => Shape::Bin(Bin::BOr, a, b),
            P::BImp(a, b) => Shape::Bin(Bin::BImp, a, b),
        }
    }
}

impl Print for FOFormula {
    fn shape(&self) -> Shape<'_, Self> {
        use FOFormula as F;
        match self {
            F::VarEq(x, y) => Shape::Cmp(format!("{x} = {y}")),
            F::VarNeq(x, y) => Shape::Cmp(format!("{x} != {y}")),
            F::Const(v) => Shape::Leaf(v.to_string()),
            F::Atom(r, xs) => Shape::Leaf(format!("{r}({})", xs.join(","))),
            F::NegAtom(r, xs) => Shape::Leaf(format!("!{r}({})", xs.join(","))),
            F::And(a, b) => Shape::Bin(Bin::And, a, b),
            F::Or(a, b) => Shape::Bin(Bin::Or, a, b),
            F::Eq(a, b) => Shape::Bin(Bin::Eq, a, b),
            F::Leq(a, b) => Shape::Bin(Bin::Leq, a, b),
            F::Neq(a, b) => Shape::Bin(Bin::Neq, a, b),
            F::NotLeq(a, b) => Shape::Bin(Bin::NotLeq, a, b),
            F::Exists(x, a) => Shape::Quant("exists", x, a),
            F::Forall(x, a) => Shape::Quant("forall", x, a),
            F::BNot(a) => Shape::Not(a),
            F::BAnd(a, b) => Shape::Bin(Bin::BAnd, a, b),
            F::BOr(a, b) => Shape::Bin(Bin::BOr, a, b),
            F::BImp(a, b) => Shape::Bin(Bin::BImp, a, b),
        }
    }
}

fn level<F: Print>(f: &F) -> u8 {
    match f.shape() {
        Shape::Leaf(_) => 0,
        Shape::Cmp(_) => 1,
        Shape::Bin(op, ..) => op.level(),
        Shape::Not(_) => 4,
        Shape::Quant(..) => TOP,
    }
}

// Left spines are walked in a loop so the long conjunctions the
// reductions emit print without deep recursion.
fn write<F: Print>(f: &F, allowed: u8, out: &mut String) {
    if level(f) > allowed {
        out.push('(');
        write(f, TOP, out);
        out.push(')');
        return;
    }
    match f.shape() {
        Shape::Leaf(s) | Shape::Cmp(s) => out.push_str(&s),
        Shape::Not(a) => {
            out.push_str("not ");
            write(a, 4, out);
        }
        Shape::Quant(kw, x, a) => {
            out.push_str(kw);
            out.push(' ');
            out.push_str(x);
            out.push(' ');
            write(a, TOP, out);
        }
        Shape::Bin(op, a, b) => {
            let (la, lb) = op.operand_levels();
            let mut rights = vec![b];
            let mut left = a;
            // a left-associative chain of one operator prints flat
            while la == op.level() {
                match left.shape() {
                    Shape::Bin(inner, a2, b2) if inner.symbol() == op.symbol() => {
                        rights.push(b2);
                        left = a2;
                    }
                    _ => break,
                }
            }
            write(left, la, out);
            for b in rights.into_iter().rev() {
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                write(b, lb, out);
            }
        }
    }
}

fn render<F: Print>(f: &F) -> String {
    let mut out = String::new();
    write(f, TOP, &mut out);
    out
}

impl fmt::Display for PLFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Display for ESOSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            let rels: Vec<String> = self.prefix.iter().map(|(r, k)| format!("{r}/{k}")).collect();
            write!(f, "EXISTS {} . ", rels.join(", "))?;
        }
        write!(f, "{}", self.matrix)
    }
}
