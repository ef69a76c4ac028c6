//! Reading files and flag values.

use anyhow::{bail, Context, Result};
use scl_core::logic::{ESOSentence, FOFormula, PLFormula};
use scl_core::machine::Machine;
use scl_core::semiring::{parse_value, SemiringId, Value};
use scl_core::solvers::{SearchBudget, DEFAULT_MAX_CANDIDATES};
use scl_core::syntax::{parse_eso, parse_fo, parse_machine, parse_pl, parse_valuation, Valuation};

use crate::{Layer, Search};

pub fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
}

pub fn semiring(name: &str) -> Result<SemiringId> {
    Ok(name.parse()?)
}

/// Blanks a leading `semiring <id>` line (keeping line numbers) and returns
/// the semiring it names.
fn split_header(text: &str) -> Result<(Option<SemiringId>, String)> {
    let mut lines: Vec<&str> = text.lines().collect();
    for line in lines.iter_mut() {
        let t = line.split("//").next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        if let Some(id) = t.strip_prefix("semiring ") {
            let id = semiring(id.trim())?;
            *line = "";
            return Ok((Some(id), lines.join("\n")));
        }
        break;
    }
    Ok((None, text.to_string()))
}

/// The flag wins only if it agrees with the file header.
fn resolve(flag: Option<&str>, header: Option<SemiringId>, what: &str) -> Result<SemiringId> {
    match (flag.map(semiring).transpose()?, header) {
        (Some(a), Some(b)) if a != b => bail!("--semiring {a} disagrees with {what} header `semiring {b}`"),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => bail!("{what} names no semiring; pass --semiring"),
    }
}

pub enum Formula {
    Pl(PLFormula),
    Fo(FOFormula),
    Eso(ESOSentence),
}

pub fn formula(path: &str, flag: Option<&str>, layer: Layer) -> Result<(Formula, SemiringId)> {
    let (header, text) = split_header(&read(path)?)?;
    let id = resolve(flag, header, path)?;
    let f = match layer {
        Layer::Pl => Formula::Pl(parse_pl(&text, id).with_context(|| path.to_string())?),
        Layer::Fo => Formula::Fo(parse_fo(&text, id).with_context(|| path.to_string())?),
        Layer::Eso => Formula::Eso(parse_eso(&text, id).with_context(|| path.to_string())?),
        Layer::Auto => {
            let starts_eso = text
                .lines()
                .map(|l| l.split("//").next().unwrap_or("").trim())
                .find(|l| !l.is_empty())
                .is_some_and(|l| l.starts_with("EXISTS"));
            if starts_eso {
                Formula::Eso(parse_eso(&text, id).with_context(|| path.to_string())?)
            } else {
                match parse_pl(&text, id) {
                    Ok(f) => Formula::Pl(f),
                    Err(pl) => match parse_fo(&text, id) {
                        Ok(f) => Formula::Fo(f),
                        Err(fo) => bail!("{path}: not a propositional formula ({pl}) nor a first-order one ({fo})"),
                    },
                }
            }
        }
    };
    Ok((f, id))
}

pub fn pl_formula(path: &str, flag: Option<&str>) -> Result<(PLFormula, SemiringId)> {
    match formula(path, flag, Layer::Pl)? {
        (Formula::Pl(f), id) => Ok((f, id)),
        _ => unreachable!(),
    }
}

pub fn valuation(path: &str, id: Option<SemiringId>) -> Result<Valuation> {
    let (v, warnings) = parse_valuation(&read(path)?, id).with_context(|| path.to_string())?;
    for w in warnings {
        eprintln!("warning: {path}: {w}");
    }
    Ok(v)
}

pub fn machine(path: &str) -> Result<Machine> {
    parse_machine(&read(path)?).with_context(|| path.to_string())
}

pub fn values(items: &[String], id: SemiringId) -> Result<Vec<Value>> {
    items
        .iter()
        .map(|t| parse_value(t, id).with_context(|| format!("input value `{t}`")))
        .collect()
}

/// `#0,#1/2,#1` or an integer range `a..b` (inclusive), read as `#a`…`#b`.
pub fn value_set(text: &str, id: SemiringId) -> Result<Vec<Value>> {
    if let Some((a, b)) = text.split_once("..") {
        if let (Ok(a), Ok(b)) = (a.trim().parse::<u64>(), b.trim().parse::<u64>()) {
            return (a..=b)
                .map(|k| parse_value(&format!("#{k}"), id).map_err(Into::into))
                .collect();
        }
    }
    text.split(',')
        .map(|t| parse_value(t, id).with_context(|| format!("value `{t}`")))
        .collect()
}

pub fn max_candidates(flag: Option<u128>) -> Result<u128> {
    let base = flag.unwrap_or(DEFAULT_MAX_CANDIDATES);
    match std::env::var("SCL_MAX_CANDIDATES") {
        Ok(v) => {
            let cap: u128 = v.trim().parse().context("SCL_MAX_CANDIDATES is not a number")?;
            Ok(base.min(cap))
        }
        Err(_) => Ok(base),
    }
}

pub fn budget(s: &Search, id: SemiringId) -> Result<SearchBudget> {
    let universe = match &s.universe {
        Some(text) => value_set(text, id)?,
        None => id.default_universe(),
    };
    Ok(SearchBudget::new(universe, max_candidates(s.max_candidates)?)?)
}

pub fn tuple(vs: &[Value]) -> String {
    let items: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("({})", items.join(", "))
}
