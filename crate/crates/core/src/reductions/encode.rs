//! Encodings of formulas, interpretations and assignments as strings over
//! K. Structure uses only the elements 0 and 1; constants are copied
//! verbatim as single elements.
//!
//! A token is a 3-element tag followed by its payload:
//!
//! | tag | meaning | payload |
//! |-----|---------|---------|
//! | 000 | end | none |
//! | 001 | proposition or variable | name index |
//! | 010 | relation symbol | name index (plus arity where needed) |
//! | 011 | operator | 4-element opcode |
//! | 100 | constant | one verbatim element |
//! | 101 | length block | byte length, then 8 elements per byte |
//! | 110 | domain index | number |
//! | 111 | reserved | |
//!
//! Numbers are written as pairs (1, bit), most significant first, closed by
//! a single 0; zero is the lone 0. Every string opens with a name table
//! (length blocks, then end) and closes with end.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::{FOFormula, KInterpretation, Literal, PLAssignment, PLFormula, RelTable};
use crate::semiring::{SemiringId, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Pl(PLFormula),
    Fo(FOFormula),
    Interpretation(KInterpretation),
    Assignment(PLAssignment),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectKind {
    Pl,
    Fo,
    Interpretation,
    Assignment,
}

const END: u8 = 0b000;
const NAME: u8 = 0b001;
const REL: u8 = 0b010;
const OP: u8 = 0b011;
const CONST: u8 = 0b100;
const BLOCK: u8 = 0b101;
const DOMAIN: u8 = 0b110;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Code {
    And = 0,
    Or,
    Eq,
    Leq,
    Neq,
    NotLeq,
    BNot,
    BAnd,
    BOr,
    BImp,
    Negate,
    Exists,
    Forall,
    VarEq,
    VarNeq,
}

const CODES: [Code; 15] = [
    Code::And,
    Code::Or,
    Code::Eq,
    Code::Leq,
    Code::Neq,
    Code::NotLeq,
    Code::BNot,
    Code::BAnd,
    Code::BOr,
    Code::BImp,
    Code::Negate,
    Code::Exists,
    Code::Forall,
    Code::VarEq,
    Code::VarNeq,
];

struct Writer {
    id: SemiringId,
    out: Vec<Value>,
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Writer {
    fn new(id: SemiringId) -> Writer {
        Writer {
            id,
            out: Vec::new(),
            names: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn learn(&mut self, name: &str) {
        if !self.index.contains_key(name) {
            self.index.insert(name.to_string(), self.names.len());
            self.names.push(name.to_string());
        }
    }

    fn bit(&mut self, b: bool) {
        self.out.push(self.id.bool(b));
    }

    fn tag(&mut self, t: u8) {
        for k in (0..3).rev() {
            self.bit(t >> k & 1 == 1);
        }
    }

    fn num(&mut self, v: u64) {
        let width = 64 - v.leading_zeros();
        for k in (0..width).rev() {
            self.bit(true);
            self.bit(v >> k & 1 == 1);
        }
        self.bit(false);
    }

    fn op(&mut self, c: Code) {
        self.tag(OP);
        for k in (0..4).rev() {
            self.bit((c as u8) >> k & 1 == 1);
        }
    }

    fn name(&mut self, tag: u8, name: &str) {
        self.tag(tag);
        self.num(self.index[name] as u64);
    }

    fn constant(&mut self, v: &Value) -> Result<()> {
        if v.id() != self.id {
            return Err(Error::SemiringMismatch {
                left: self.id,
                right: v.id(),
            });
        }
        self.tag(CONST);
        self.out.push(v.clone());
        Ok(())
    }

    fn table(&mut self) {
        for name in self.names.clone() {
            self.tag(BLOCK);
            self.num(name.len() as u64);
            for byte in name.bytes() {
                for k in (0..8).rev() {
                    self.bit(byte >> k & 1 == 1);
                }
            }
        }
        self.tag(END);
    }

    fn pl(&mut self, f: &PLFormula) -> Result<()> {
        use PLFormula as P;
        let bin = |w: &mut Writer, c: Code, a: &PLFormula, b: &PLFormula| -> Result<()> {
            w.op(c);
            w.pl(a)?;
            w.pl(b)
        };
        match f {
            P::Prop(p) => self.name(NAME, p),
            P::NegProp(p) => {
                self.op(Code::Negate);
                self.name(NAME, p);
            }
            P::Const(c) => self.constant(c)?,
            P::And(a, b) => bin(self, Code::And, a, b)?,
            P::Or(a, b) => bin(self, Code::Or, a, b)?,
            P::Eq(a, b) => bin(self, Code::Eq, a, b)?,
            P::Leq(a, b) => bin(self, Code::Leq, a, b)?,
            P::Neq(a, b) => bin(self, Code::Neq, a, b)?,
            P::NotLeq(a, b) => bin(self, Code::NotLeq, a, b)?,
            P::BAnd(a, b) => bin(self, Code::BAnd, a, b)?,
            P::BOr(a, b) => bin(self, Code::BOr, a, b)?,
            P::BImp(a, b) => bin(self, Code::BImp, a, b)?,
            P::BNot(a) => {
                self.op(Code::BNot);
                self.pl(a)?;
            }
        }
        Ok(())
    }

    fn atom(&mut self, r: &str, args: &[String]) {
        self.name(REL, r);
        self.num(args.len() as u64);
        for x in args {
            self.name(NAME, x);
        }
    }

    fn fo(&mut self, f: &FOFormula) -> Result<()> {
        use FOFormula as Fo;
        let bin = |w: &mut Writer, c: Code, a: &FOFormula, b: &FOFormula| -> Result<()> {
            w.op(c);
            w.fo(a)?;
            w.fo(b)
        };
        match f {
            Fo::VarEq(x, y) | Fo::VarNeq(x, y) => {
                let c = if matches!(f, Fo::VarEq(..)) {
                    Code::VarEq
                } else {
                    Code::VarNeq
                };
                self.op(c);
                self.name(NAME, x);
                self.name(NAME, y);
            }
            Fo::Const(c) => self.constant(c)?,
            Fo::Atom(r, args) => self.atom(r, args),
            Fo::NegAtom(r, args) => {
                self.op(Code::Negate);
                self.atom(r, args);
            }
            Fo::Exists(x, a) | Fo::Forall(x, a) => {
                let c = if matches!(f, Fo::Exists(..)) {
                    Code::Exists
                } else {
                    Code::Forall
                };
                self.op(c);
                self.name(NAME, x);
                self.fo(a)?;
            }
            Fo::And(a, b) => bin(self, Code::And, a, b)?,
            Fo::Or(a, b) => bin(self, Code::Or, a, b)?,
            Fo::Eq(a, b) => bin(self, Code::Eq, a, b)?,
            Fo::Leq(a, b) => bin(self, Code::Leq, a, b)?,
            Fo::Neq(a, b) => bin(self, Code::Neq, a, b)?,
            Fo::NotLeq(a, b) => bin(self, Code::NotLeq, a, b)?,
            Fo::BAnd(a, b) => bin(self, Code::BAnd, a, b)?,
            Fo::BOr(a, b) => bin(self, Code::BOr, a, b)?,
            Fo::BImp(a, b) => bin(self, Code::BImp, a, b)?,
            Fo::BNot(a) => {
                self.op(Code::BNot);
                self.fo(a)?;
            }
        }
        Ok(())
    }
}

fn fo_names(f: &FOFormula, w: &mut Writer) {
    match f {
        FOFormula::VarEq(x, y) | FOFormula::VarNeq(x, y) => {
            w.learn(x);
            w.learn(y);
        }
        FOFormula::Atom(r, args) | FOFormula::NegAtom(r, args) => {
            w.learn(r);
            for x in args {
                w.learn(x);
            }
        }
        FOFormula::Exists(x, a) | FOFormula::Forall(x, a) => {
            w.learn(x);
            fo_names(a, w);
        }
        _ => {
            for c in f.children() {
                fo_names(c, w);
            }
        }
    }
}

/// The encoding of `o`; formulas take their semiring from `id`.
pub fn encode_object(o: &Object, id: SemiringId) -> Result<Vec<Value>> {
    let mut w = Writer::new(id);
    match o {
        Object::Pl(f) => {
            for p in f.propositions() {
                w.learn(&p);
            }
            w.table();
            w.pl(f)?;
        }
        Object::Fo(f) => {
            fo_names(f, &mut w);
            w.table();
            w.fo(f)?;
        }
        Object::Interpretation(pi) => {
            if pi.semiring != id {
                return Err(Error::SemiringMismatch {
                    left: id,
                    right: pi.semiring,
                });
            }
            for (r, _) in pi.relations() {
                w.learn(r);
            }
            w.table();
            w.tag(DOMAIN);
            w.num(pi.domain as u64);
            for (r, t) in pi.relations() {
                w.name(REL, r);
                w.num(t.arity as u64);
                for (p, n) in t.pos.iter().zip(&t.neg) {
                    w.constant(p)?;
                    w.constant(n)?;
                }
            }
            w.tag(END);
        }
        Object::Assignment(s) => {
            if s.semiring != id {
                return Err(Error::SemiringMismatch {
                    left: id,
                    right: s.semiring,
                });
            }
            for (l, _) in s.iter() {
                w.learn(&l.name);
            }
            w.table();
            for (l, v) in s.iter() {
                if l.negated {
                    w.op(Code::Negate);
                }
                w.name(NAME, &l.name);
                w.constant(v)?;
            }
            w.tag(END);
        }
    }
    w.tag(END);
    Ok(w.out)
}

struct Reader<'a> {
    e: &'a [Value],
    at: usize,
    id: SemiringId,
    names: Vec<String>,
}

impl Reader<'_> {
    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Decode {
            offset: self.at,
            msg: msg.into(),
        })
    }

    fn bit(&mut self) -> Result<bool> {
        let Some(v) = self.e.get(self.at) else {
            return self.fail("unexpected end of string");
        };
        let b = if v.id() != self.id {
            return self.fail(format!("element {v} is not in {}", self.id));
        } else if v.is_zero() {
            false
        } else if v.is_one() {
            true
        } else {
            return self.fail(format!("expected 0 or 1, found {v}"));
        };
        self.at += 1;
        Ok(b)
    }

    fn bits(&mut self, k: usize) -> Result<u8> {
        let mut v = 0u8;
        for _ in 0..k {
            v = v << 1 | self.bit()? as u8;
        }
        Ok(v)
    }

    fn tag(&mut self) -> Result<u8> {
        self.bits(3)
    }

    fn expect(&mut self, want: u8, what: &str) -> Result<()> {
        let start = self.at;
        let t = self.tag()?;
        if t != want {
            self.at = start;
            return self.fail(format!("expected {what} tag {want:03b}, found {t:03b}"));
        }
        Ok(())
    }

    fn num(&mut self) -> Result<u64> {
        let mut v: u64 = 0;
        while self.bit()? {
            if v >> 63 != 0 {
                return self.fail("number overflows 64 bits");
            }
            v = v << 1 | self.bit()? as u64;
        }
        Ok(v)
    }

    fn usize(&mut self) -> Result<usize> {
        let start = self.at;
        let v = self.num()?;
        usize::try_from(v).or_else(|_| {
            self.at = start;
            self.fail("number too large")
        })
    }

    fn name_ref(&mut self) -> Result<String> {
        let start = self.at;
        let i = self.usize()?;
        match self.names.get(i) {
            Some(n) => Ok(n.clone()),
            None => {
                self.at = start;
                self.fail(format!("name index {i} outside the table"))
            }
        }
    }

    fn name(&mut self, tag: u8) -> Result<String> {
        self.expect(tag, if tag == NAME { "name" } else { "relation" })?;
        self.name_ref()
    }

    fn constant_body(&mut self) -> Result<Value> {
        let Some(v) = self.e.get(self.at) else {
            return self.fail("missing constant");
        };
        if v.id() != self.id {
            return self.fail(format!("constant {v} is not in {}", self.id));
        }
        self.at += 1;
        Ok(v.clone())
    }

    fn constant(&mut self) -> Result<Value> {
        self.expect(CONST, "constant")?;
        self.constant_body()
    }

    fn code(&mut self) -> Result<Code> {
        let c = self.bits(4)? as usize;
        match CODES.get(c) {
            Some(c) => Ok(*c),
            None => {
                self.at -= 4;
                self.fail(format!("unknown opcode {c:04b}"))
            }
        }
    }

    fn table(&mut self) -> Result<()> {
        loop {
            let start = self.at;
            match self.tag()? {
                END => return Ok(()),
                BLOCK => {
                    let len = self.usize()?;
                    if len > self.e.len() {
                        return self.fail("name longer than the string");
                    }
                    let bytes = (0..len).map(|_| self.bits(8)).collect::<Result<Vec<u8>>>()?;
                    match String::from_utf8(bytes) {
                        Ok(s) => self.names.push(s),
                        Err(_) => {
                            self.at = start;
                            return self.fail("name is not UTF-8");
                        }
                    }
                }
                t => {
                    self.at = start;
                    return self.fail(format!("expected a name block, found tag {t:03b}"));
                }
            }
        }
    }

    fn pl(&mut self) -> Result<PLFormula> {
        use PLFormula as P;
        let start = self.at;
        Ok(match self.tag()? {
            NAME => P::Prop(self.name_ref()?),
            CONST => P::Const(self.constant_body()?),
            OP => {
                let c = self.code()?;
                match c {
                    Code::Negate => P::NegProp(self.name(NAME)?),
                    Code::BNot => P::bnot(self.pl()?),
                    Code::Exists | Code::Forall | Code::VarEq | Code::VarNeq => {
                        self.at = start;
                        return self.fail("first-order operator in a propositional formula");
                    }
                    _ => {
                        let a = self.pl()?;
                        let b = self.pl()?;
                        match c {
                            Code::And => P::and(a, b),
                            Code::Or => P::or(a, b),
                            Code::Eq => P::eq(a, b),
                            Code::Leq => P::leq(a, b),
                            Code::Neq => P::neq(a, b),
                            Code::NotLeq => P::not_leq(a, b),
                            Code::BAnd => P::band(a, b),
                            Code::BOr => P::bor(a, b),
                            _ => P::bimp(a, b),
                        }
                    }
                }
            }
            t => {
                self.at = start;
                return self.fail(format!("unexpected tag {t:03b} in a formula"));
            }
        })
    }

    fn atom_body(&mut self) -> Result<(String, Vec<String>)> {
        let r = self.name_ref()?;
        let arity = self.usize()?;
        if arity > self.e.len() {
            return self.fail("arity longer than the string");
        }
        let args = (0..arity)
            .map(|_| self.name(NAME))
            .collect::<Result<Vec<_>>>()?;
        Ok((r, args))
    }

    fn fo(&mut self) -> Result<FOFormula> {
        use FOFormula as Fo;
        let start = self.at;
        Ok(match self.tag()? {
            CONST => Fo::Const(self.constant_body()?),
            REL => {
                let (r, args) = self.atom_body()?;
                Fo::Atom(r, args)
            }
            OP => {
                let c = self.code()?;
                match c {
                    Code::Negate => {
                        self.expect(REL, "relation")?;
                        let (r, args) = self.atom_body()?;
                        Fo::NegAtom(r, args)
                    }
                    Code::VarEq => Fo::VarEq(self.name(NAME)?, self.name(NAME)?),
                    Code::VarNeq => Fo::VarNeq(self.name(NAME)?, self.name(NAME)?),
                    Code::Exists => {
                        let x = self.name(NAME)?;
                        Fo::exists(&x, self.fo()?)
                    }
                    Code::Forall => {
                        let x = self.name(NAME)?;
                        Fo::forall(&x, self.fo()?)
                    }
                    Code::BNot => Fo::bnot(self.fo()?),
                    _ => {
                        let a = self.fo()?;
                        let b = self.fo()?;
                        match c {
                            Code::And => Fo::and(a, b),
                            Code::Or => Fo::or(a, b),
                            Code::Eq => Fo::eq(a, b),
                            Code::Leq => Fo::leq(a, b),
                            Code::Neq => Fo::neq(a, b),
                            Code::NotLeq => Fo::not_leq(a, b),
                            Code::BAnd => Fo::band(a, b),
                            Code::BOr => Fo::bor(a, b),
                            _ => Fo::bimp(a, b),
                        }
                    }
                }
            }
            t => {
                self.at = start;
                return self.fail(format!("unexpected tag {t:03b} in a formula"));
            }
        })
    }

    fn interpretation(&mut self) -> Result<KInterpretation> {
        self.expect(DOMAIN, "domain")?;
        let domain = self.usize()?;
        let mut pi = KInterpretation::new(self.id, domain, &Default::default());
        loop {
            let start = self.at;
            match self.tag()? {
                END => return Ok(pi),
                REL => {
                    let r = self.name_ref()?;
                    let arity = self.usize()?;
                    let count = domain
                        .checked_pow(arity as u32)
                        .filter(|c| c.saturating_mul(8) <= self.e.len())
                        .ok_or(Error::Decode {
                            offset: self.at,
                            msg: "relation table longer than the string".into(),
                        })?;
                    if pi.relation(&r).is_some() {
                        self.at = start;
                        return self.fail(format!("relation {r} listed twice"));
                    }
                    let mut t = RelTable {
                        arity,
                        pos: Vec::with_capacity(count),
                        neg: Vec::with_capacity(count),
                    };
                    for _ in 0..count {
                        t.pos.push(self.constant()?);
                        t.neg.push(self.constant()?);
                    }
                    pi.add_relation(&r, arity);
                    *pi.relation_mut(&r).expect("just added") = t;
                }
                t => {
                    self.at = start;
                    return self.fail(format!("expected a relation, found tag {t:03b}"));
                }
            }
        }
    }

    fn assignment(&mut self) -> Result<PLAssignment> {
        let mut s = PLAssignment::new(self.id);
        loop {
            let start = self.at;
            let lit = match self.tag()? {
                END => return Ok(s),
                NAME => Literal::pos(&self.name_ref()?),
                OP => match self.code()? {
                    Code::Negate => Literal::neg(&self.name(NAME)?),
                    _ => {
                        self.at = start;
                        return self.fail("expected a literal");
                    }
                },
                t => {
                    self.at = start;
                    return self.fail(format!("expected a literal, found tag {t:03b}"));
                }
            };
            if s.get(&lit).is_some() {
                self.at = start;
                return self.fail(format!("literal {lit} listed twice"));
            }
            let v = self.constant()?;
            s.set(lit, v)?;
        }
    }
}

/// Inverse of [`encode_object`]; the semiring is read off the elements.
pub fn decode_object(kind: ObjectKind, e: &[Value]) -> Result<Object> {
    let Some(first) = e.first() else {
        return Err(Error::Decode {
            offset: 0,
            msg: "empty string".into(),
        });
    };
    let mut r = Reader {
        e,
        at: 0,
        id: first.id(),
        names: Vec::new(),
    };
    r.table()?;
    let o = match kind {
        ObjectKind::Pl => Object::Pl(r.pl()?),
        ObjectKind::Fo => Object::Fo(r.fo()?),
        ObjectKind::Interpretation => Object::Interpretation(r.interpretation()?),
        ObjectKind::Assignment => Object::Assignment(r.assignment()?),
    };
    r.expect(END, "end")?;
    if r.at != e.len() {
        return r.fail("trailing elements");
    }
    Ok(o)
}
