//! Assignment and interpretation files.
//!
//! ```text
//! semiring natural
//! p = #3
//! ~p = #0
//! ```
//!
//! An interpretation file adds `domain <n>` and lists facts instead:
//! `R(0,1) = #v`, `!R(0,1) = #v`, `C() = #v`. Optional lines are
//! `relation R/2` (declares a relation, useful when it has no facts) and
//! `ordered` (adds `Lt` valued by index order). Unlisted literals are 0 and
//! reported as warnings.

use std::collections::BTreeMap;
use std::fmt;

use super::lex::{err, Cursor, Tok};
use crate::error::{Error, Result};
use crate::logic::{KInterpretation, Literal, PLAssignment, Vocabulary, ORDER_REL};
use crate::semiring::{parse_value, SemiringId, Value};

/// Contents of an assignment or interpretation file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Assignment(PLAssignment),
    Interpretation(KInterpretation),
}

impl Valuation {
    pub fn semiring(&self) -> SemiringId {
        match self {
            Valuation::Assignment(s) => s.semiring,
            Valuation::Interpretation(pi) => pi.semiring,
        }
    }
}

struct Fact {
    line: usize,
    name: String,
    /// `None` for a proposition.
    tuple: Option<Vec<usize>>,
    negated: bool,
    value: String,
    value_col: usize,
}

/// Re-bases errors from a one-line cursor onto line `no`.
fn on_line<T>(no: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { col, msg, .. } => err(no, col, msg),
        other => other,
    })
}

fn parse_fact(no: usize, text: &str) -> Result<Fact> {
    let mut cur = Cursor::new(text)?;
    let negated = cur.eat(&Tok::Tilde) || cur.eat(&Tok::Bang);
    let name = cur.ident("a literal")?;
    let tuple = if cur.eat(&Tok::LParen) {
        let mut t = Vec::new();
        if !cur.eat(&Tok::RParen) {
            loop {
                t.push(cur.num("a domain index")? as usize);
                if cur.eat(&Tok::RParen) {
                    break;
                }
                cur.expect(&Tok::Comma, "`,` or `)`")?;
            }
        }
        Some(t)
    } else {
        None
    };
    cur.expect(&Tok::Eq, "`=`")?;
    let value_col = text.find('#').map_or(1, |k| text[..k].chars().count() + 1);
    let value = match cur.next() {
        Tok::Lit(v) => v,
        _ => return Err(err(1, value_col, "expected a value literal")),
    };
    cur.end()?;
    Ok(Fact {
        line: no,
        name,
        tuple,
        negated,
        value,
        value_col,
    })
}

/// Parses either file kind; the presence of a `domain` line selects an
/// interpretation. `default` supplies the semiring when the file has no
/// `semiring` line and must agree with it otherwise. Returns warnings
/// about literals that were not listed.
pub fn parse_valuation(text: &str, default: Option<SemiringId>) -> Result<(Valuation, Vec<String>)> {
    let mut semiring = None;
    let mut domain = None;
    let mut ordered = false;
    let mut declared: Vocabulary = Vocabulary::new();
    let mut facts = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        let words: Vec<&str> = line.split_whitespace().collect();
        let col = raw.len() - raw.trim_start().len() + 1;
        match words.as_slice() {
            [] => {}
            ["semiring", id] => {
                let id: SemiringId = on_line(no, id.parse().map_err(|e: Error| err(1, col, e.to_string())))?;
                if semiring.replace(id).is_some() {
                    return Err(err(no, col, "second `semiring` line"));
                }
            }
            ["domain", n] => {
                let n: usize = n.parse().map_err(|_| err(no, col, format!("bad domain size `{n}`")))?;
                if domain.replace(n).is_some() {
                    return Err(err(no, col, "second `domain` line"));
                }
            }
            ["ordered"] => ordered = true,
            ["relation", decl] => {
                let (r, k) = decl
                    .split_once('/')
                    .and_then(|(r, k)| Some((r, k.parse::<usize>().ok()?)))
                    .ok_or_else(|| err(no, col, format!("expected `relation R/k`, found `{decl}`")))?;
                declared.insert(r.to_string(), k);
            }
            _ => facts.push(on_line(no, parse_fact(no, line)).map_err(|e| shift(e, col - 1))?),
        }
    }
    let id = match (semiring, default) {
        (Some(a), Some(b)) if a != b => return Err(Error::SemiringMismatch { left: b, right: a }),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(err(1, 1, "no `semiring` line and no semiring given")),
    };
    let value = |f: &Fact| on_line(f.line, parse_value(&f.value, id).map_err(|e| err(1, f.value_col, e.to_string())));
    match domain {
        None => {
            if ordered || !declared.is_empty() {
                return Err(err(1, 1, "`ordered` and `relation` need a `domain` line"));
            }
            let mut s = PLAssignment::new(id);
            for f in &facts {
                if f.tuple.is_some() {
                    return Err(err(f.line, 1, "relational fact in an assignment file (missing `domain`?)"));
                }
                let lit = if f.negated {
                    Literal::neg(&f.name)
                } else {
                    Literal::pos(&f.name)
                };
                if s.get(&lit).is_some() {
                    return Err(err(f.line, 1, format!("`{lit}` listed twice")));
                }
                s.set(lit, value(f)?)?;
            }
            Ok((Valuation::Assignment(s), Vec::new()))
        }
        Some(n) => interpretation(id, n, ordered, declared, &facts, value),
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { line, col, msg } => err(line, col + by, msg),
        other => other,
    }
}

fn interpretation(
    id: SemiringId,
    domain: usize,
    ordered: bool,
    mut vocab: Vocabulary,
    facts: &[Fact],
    value: impl Fn(&Fact) -> Result<Value>,
) -> Result<(Valuation, Vec<String>)> {
    for f in facts {
        let Some(t) = &f.tuple else {
            return Err(err(f.line, 1, format!("`{}` needs an argument list in an interpretation", f.name)));
        };
        let arity = *vocab.entry(f.name.clone()).or_insert(t.len());
        if arity != t.len() {
            return Err(err(f.line, 1, format!("{} has arity {arity}, got {}", f.name, t.len())));
        }
        if let Some(a) = t.iter().find(|&&a| a >= domain) {
            return Err(err(f.line, 1, format!("domain index {a} out of range 0..{domain}")));
        }
    }
    let mut pi = if ordered {
        vocab.remove(ORDER_REL);
        KInterpretation::ordered(id, domain, &vocab)
    } else {
        KInterpretation::new(id, domain, &vocab)
    };
    let mut listed: BTreeMap<(String, Vec<usize>, bool), usize> = BTreeMap::new();
    for f in facts {
        let t = f.tuple.clone().unwrap_or_default();
        if let Some(prev) = listed.insert((f.name.clone(), t.clone(), f.negated), f.line) {
            return Err(err(f.line, 1, format!("fact already listed on line {prev}")));
        }
        on_line(f.line, pi.set(&f.name, &t, f.negated, value(f)?))?;
    }
    let mut warnings = Vec::new();
    for (name, arity) in &vocab {
        if ordered && name == ORDER_REL {
            continue;
        }
        let total = 2 * domain.pow(*arity as u32);
        let given = listed.keys().filter(|(r, ..)| r == name).count();
        if given < total {
            warnings.push(format!("{name}: {} of {total} literals not listed, set to 0", total - given));
        }
    }
    Ok((Valuation::Interpretation(pi), warnings))
}

impl fmt::Display for PLAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semiring {}", self.semiring)?;
        for (l, v) in self.iter() {
            writeln!(f, "{l} = {v}")?;
        }
        Ok(())
    }
}

impl fmt::Display for KInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semiring {}", self.semiring)?;
        writeln!(f, "domain {}", self.domain)?;
        for (name, t) in self.relations() {
            writeln!(f, "relation {name}/{}", t.arity)?;
        }
        for (name, tuple, negated, v) in self.literals() {
            let args: Vec<String> = tuple.iter().map(|a| a.to_string()).collect();
            let bang = if negated { "!" } else { "" };
            writeln!(f, "{bang}{name}({}) = {v}", args.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Assignment(s) => s.fmt(f),
            Valuation::Interpretation(pi) => pi.fmt(f),
        }
    }
}
