//! Text syntax for sums and relations: `2*x^2*y + (-1)*z <= 1`, `x + y + 1 == 0`.

use std::collections::BTreeMap;

use super::{FormalSum, Monomial, RelMode, Relation};
use crate::error::{Error, Result};
use crate::ground::{GroundTag, GroundValue};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' | '[' => {
                let close = if c == '(' { ')' } else { ']' };
                let j = cs[i..]
                    .iter()
                    .position(|&d| d == close)
                    .ok_or_else(|| Error::Parse(format!("unclosed {c} in {s:?}")))?;
                out.push(Tok::Num(cs[i..=i + j].iter().collect()));
                i += j + 1;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < cs.len() && (cs[j].is_ascii_digit() || cs[j] == '/') {
                    j += 1;
                }
                out.push(Tok::Num(cs[i..j].iter().collect()));
                i = j;
            }
            a if a.is_alphabetic() || a == '_' => {
                let mut j = i;
                while j < cs.len() && (cs[j].is_alphanumeric() || cs[j] == '_' || cs[j] == '\'') {
                    j += 1;
                }
                out.push(Tok::Ident(cs[i..j].iter().collect()));
                i = j;
            }
            _ => return Err(Error::Parse(format!("unexpected {c:?} in {s:?}"))),
        }
    }
    Ok(out)
}

fn parse_coeff(tag: GroundTag, text: &str) -> Result<GroundValue> {
    let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')'));
    if let (Some(inner), false) = (inner, matches!(tag, GroundTag::TropN(_))) {
        // parenthesized scalar such as (-1) or (3/2)
        let t = inner.trim();
        if let Some(rest) = t.strip_prefix('-') {
            return GroundValue::parse(tag, rest)?.neg().map_err(|e| Error::Parse(e.to_string()));
        }
        return GroundValue::parse(tag, t);
    }
    GroundValue::parse(tag, text)
}

pub(crate) fn parse_sum(tag: GroundTag, gens: &[String], text: &str) -> Result<FormalSum> {
    let toks = tokenize(text)?;
    let mut terms = Vec::new();
    let mut i = 0;
    if toks.is_empty() {
        return Ok(FormalSum::zero());
    }
    loop {
        let mut negate = false;
        while i < toks.len() && matches!(toks[i], Tok::Plus | Tok::Minus) {
            if toks[i] == Tok::Minus {
                negate = !negate;
            }
            i += 1;
        }
        let mut coeff = GroundValue::one(tag);
        let mut exps: BTreeMap<String, u32> = BTreeMap::new();
        let mut factors = 0;
        while i < toks.len() && !matches!(toks[i], Tok::Plus | Tok::Minus) {
            match &toks[i] {
                Tok::Star => {
                    i += 1;
                    continue;
                }
                Tok::Num(n) => {
                    coeff = coeff.mul(&parse_coeff(tag, n)?)?;
                    i += 1;
                }
                Tok::Ident(name) => {
                    if !gens.iter().any(|g| g == name) {
                        return Err(Error::Parse(format!("unknown generator {name:?}")));
                    }
                    i += 1;
                    let mut e = 1u32;
                    if i < toks.len() && toks[i] == Tok::Caret {
                        match toks.get(i + 1) {
                            Some(Tok::Num(n)) => {
                                e = n.parse().map_err(|_| Error::Parse(format!("bad exponent {n:?}")))?;
                                i += 2;
                            }
                            _ => return Err(Error::Parse("exponent expected after ^".into())),
                        }
                    }
                    *exps.entry(name.clone()).or_insert(0) += e;
                }
                Tok::Caret => return Err(Error::Parse(format!("misplaced ^ in {text:?}"))),
                _ => unreachable!(),
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(Error::Parse(format!("empty term in {text:?}")));
        }
        if negate {
            coeff = coeff.neg().map_err(|_| Error::Parse(format!("{tag} has no -1 in {text:?}")))?;
        }
        terms.push(Monomial::new(coeff, exps));
        if i >= toks.len() {
            break;
        }
    }
    Ok(FormalSum::new(terms))
}

pub(crate) fn parse_relation(tag: GroundTag, gens: &[String], text: &str) -> Result<Relation> {
    for (op, mode) in [("<=", RelMode::Le), ("≤", RelMode::Le), ("==", RelMode::Eq), ("≡", RelMode::Eq), ("=", RelMode::Eq)] {
        if let Some((l, r)) = text.split_once(op) {
            return Ok(Relation {
                mode,
                lhs: parse_sum(tag, gens, l)?,
                rhs: parse_sum(tag, gens, r)?,
            });
        }
    }
    Err(Error::Parse(format!("no relation operator in {text:?}")))
}
