//! Exact scalars for the built-in ground blueprints and semirings.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The ground a presentation is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundTag {
    F1,
    F1Sq,
    Bool,
    Nat,
    Int,
    Rat,
    RPlus,
    Trop,
    OTrop,
    TropN(u32),
    /// Free abelian group of the given rank, lex ordered, with a formal zero.
    /// `idempotent` selects the completion with max as addition.
    OrdGroup { rank: u32, idempotent: bool },
}

impl GroundTag {
    pub fn is_idempotent(self) -> bool {
        matches!(
            self,
            GroundTag::Bool
                | GroundTag::Trop
                | GroundTag::OTrop
                | GroundTag::TropN(_)
                | GroundTag::OrdGroup { idempotent: true, .. }
        )
    }

    pub fn has_minus_one(self) -> bool {
        matches!(self, GroundTag::F1Sq | GroundTag::Int | GroundTag::Rat)
    }

    pub fn has_addition(self) -> bool {
        !matches!(
            self,
            GroundTag::F1 | GroundTag::F1Sq | GroundTag::OrdGroup { idempotent: false, .. }
        )
    }

    pub fn has_pos_order(self) -> bool {
        matches!(
            self,
            GroundTag::RPlus
                | GroundTag::Trop
                | GroundTag::OTrop
                | GroundTag::TropN(_)
                | GroundTag::OrdGroup { .. }
                | GroundTag::Bool
                | GroundTag::Nat
        )
    }

    /// Every nonzero element is invertible.
    pub fn is_semifield(self) -> bool {
        matches!(
            self,
            GroundTag::Rat
                | GroundTag::Bool
                | GroundTag::Trop
                | GroundTag::RPlus
                | GroundTag::TropN(_)
                | GroundTag::OrdGroup { .. }
        )
    }

    pub fn name(self) -> String {
        match self {
            GroundTag::F1 => "F1".into(),
            GroundTag::F1Sq => "F1SQ".into(),
            GroundTag::Bool => "BOOL".into(),
            GroundTag::Nat => "NAT".into(),
            GroundTag::Int => "INT".into(),
            GroundTag::Rat => "RAT".into(),
            GroundTag::RPlus => "RPLUS".into(),
            GroundTag::Trop => "TROP".into(),
            GroundTag::OTrop => "OTROP".into(),
            GroundTag::TropN(n) => format!("TROPN({n})"),
            GroundTag::OrdGroup { rank, idempotent: false } => format!("ORDGROUP({rank})"),
            GroundTag::OrdGroup { rank, idempotent: true } => format!("ORDGROUP_B({rank})"),
        }
    }
}

impl fmt::Display for GroundTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn paren_arg(s: &str, head: &str) -> Option<u32> {
    let rest = s.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    rest.trim().parse().ok()
}

impl FromStr for GroundTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let u = s.trim().to_ascii_uppercase();
        let tag = match u.as_str() {
            "F1" => GroundTag::F1,
            "F1SQ" => GroundTag::F1Sq,
            "BOOL" => GroundTag::Bool,
            "NAT" => GroundTag::Nat,
            "INT" => GroundTag::Int,
            "RAT" => GroundTag::Rat,
            "RPLUS" => GroundTag::RPlus,
            "TROP" => GroundTag::Trop,
            "OTROP" => GroundTag::OTrop,
            _ => {
                if let Some(n) = paren_arg(&u, "TROPN") {
                    if n == 0 {
                        return Err(Error::Parse("TROPN(n) needs n >= 1".into()));
                    }
                    GroundTag::TropN(n)
                } else if let Some(rank) = paren_arg(&u, "ORDGROUP_B") {
                    GroundTag::OrdGroup { rank, idempotent: true }
                } else if let Some(rank) = paren_arg(&u, "ORDGROUP") {
                    GroundTag::OrdGroup { rank, idempotent: false }
                } else {
                    return Err(Error::Parse(format!("unknown ground tag {s:?}")));
                }
            }
        };
        Ok(tag)
    }
}

impl Serialize for GroundTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for GroundTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Payload {
    Bit(bool),
    Sign(i8),
    Rat(Q),
    Tuple(Option<Vec<Q>>),
    Word(Option<Vec<i64>>),
}

/// An exact scalar of some ground. The derived `Ord` is only a canonical
/// sort order; use [`GroundValue::cmp_order`] for the ground's own order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundValue {
    tag: GroundTag,
    v: Payload,
}

fn check_tag(a: &GroundValue, b: &GroundValue) -> Result<()> {
    if a.tag != b.tag {
        return Err(Error::TagMismatch(format!("{} vs {}", a.tag, b.tag)));
    }
    Ok(())
}

fn lex_cmp<T: Ord>(a: &[T], b: &[T]) -> Ordering {
    a.iter().cmp(b.iter())
}

impl GroundValue {
    pub fn zero(tag: GroundTag) -> Self {
        let v = match tag {
            GroundTag::F1 | GroundTag::Bool => Payload::Bit(false),
            GroundTag::F1Sq => Payload::Sign(0),
            GroundTag::TropN(_) => Payload::Tuple(None),
            GroundTag::OrdGroup { .. } => Payload::Word(None),
            _ => Payload::Rat(Q::zero()),
        };
        GroundValue { tag, v }
    }

    pub fn one(tag: GroundTag) -> Self {
        let v = match tag {
            GroundTag::F1 | GroundTag::Bool => Payload::Bit(true),
            GroundTag::F1Sq => Payload::Sign(1),
            GroundTag::TropN(n) => Payload::Tuple(Some(vec![Q::one(); n as usize])),
            GroundTag::OrdGroup { rank, .. } => Payload::Word(Some(vec![0; rank as usize])),
            _ => Payload::Rat(Q::one()),
        };
        GroundValue { tag, v }
    }

    /// Rational-valued grounds (NAT, INT, RAT, RPLUS, TROP, OTROP); also
    /// accepts 0/1 for F1, BOOL and 0/±1 for F1SQ.
    pub fn rational(tag: GroundTag, x: Q) -> Result<Self> {
        let bad = || Error::Invalid(format!("{x} is not an element of {tag}"));
        let v = match tag {
            GroundTag::F1 | GroundTag::Bool => {
                if x.is_zero() {
                    Payload::Bit(false)
                } else if x.is_one() {
                    Payload::Bit(true)
                } else {
                    return Err(bad());
                }
            }
            GroundTag::F1Sq => {
                if x.is_zero() {
                    Payload::Sign(0)
                } else if x.is_one() {
                    Payload::Sign(1)
                } else if x == -Q::one() {
                    Payload::Sign(-1)
                } else {
                    return Err(bad());
                }
            }
            GroundTag::Nat => {
                if !x.is_integer() || x.is_negative() {
                    return Err(bad());
                }
                Payload::Rat(x)
            }
            GroundTag::Int => {
                if !x.is_integer() {
                    return Err(bad());
                }
                Payload::Rat(x)
            }
            GroundTag::Rat => Payload::Rat(x),
            GroundTag::RPlus | GroundTag::Trop => {
                if x.is_negative() {
                    return Err(bad());
                }
                Payload::Rat(x)
            }
            GroundTag::OTrop => {
                if x.is_negative() || x > Q::one() {
                    return Err(bad());
                }
                Payload::Rat(x)
            }
            GroundTag::TropN(_) | GroundTag::OrdGroup { .. } => {
                if x.is_zero() {
                    return Ok(GroundValue::zero(tag));
                }
                if x.is_one() {
                    return Ok(GroundValue::one(tag));
                }
                return Err(bad());
            }
        };
        Ok(GroundValue { tag, v })
    }

    pub fn int(tag: GroundTag, n: i64) -> Result<Self> {
        Self::rational(tag, q(n))
    }

    pub fn tuple(tag: GroundTag, xs: Vec<Q>) -> Result<Self> {
        match tag {
            GroundTag::TropN(n) if xs.len() == n as usize => {
                if xs.iter().any(|x| !x.is_positive()) {
                    return Err(Error::Invalid("TROPN coordinates must be positive".into()));
                }
                Ok(GroundValue { tag, v: Payload::Tuple(Some(xs)) })
            }
            _ => Err(Error::Invalid(format!("tuple of length {} is not in {tag}", xs.len()))),
        }
    }

    pub fn word(tag: GroundTag, e: Vec<i64>) -> Result<Self> {
        match tag {
            GroundTag::OrdGroup { rank, .. } if e.len() == rank as usize => {
                Ok(GroundValue { tag, v: Payload::Word(Some(e)) })
            }
            _ => Err(Error::Invalid(format!("word of length {} is not in {tag}", e.len()))),
        }
    }

    pub fn tag(&self) -> GroundTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        matches!(
            self.v,
            Payload::Bit(false) | Payload::Sign(0) | Payload::Tuple(None) | Payload::Word(None)
        ) || matches!(&self.v, Payload::Rat(x) if x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == GroundValue::one(self.tag)
    }

    /// The value as a rational number, where that makes sense.
    pub fn to_rational(&self) -> Option<Q> {
        match &self.v {
            Payload::Bit(b) => Some(if *b { Q::one() } else { Q::zero() }),
            Payload::Sign(s) => Some(q(*s as i64)),
            Payload::Rat(x) => Some(x.clone()),
            _ => None,
        }
    }

    pub fn tuple_coords(&self) -> Option<&[Q]> {
        match &self.v {
            Payload::Tuple(Some(xs)) => Some(xs),
            _ => None,
        }
    }

    pub fn word_exps(&self) -> Option<&[i64]> {
        match &self.v {
            Payload::Word(Some(e)) => Some(e),
            _ => None,
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        check_tag(self, o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(GroundValue::zero(self.tag));
        }
        let v = match (&self.v, &o.v) {
            (Payload::Bit(_), Payload::Bit(_)) => Payload::Bit(true),
            (Payload::Sign(a), Payload::Sign(b)) => Payload::Sign(a * b),
            (Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a * b),
            (Payload::Tuple(Some(a)), Payload::Tuple(Some(b))) => {
                Payload::Tuple(Some(a.iter().zip(b).map(|(x, y)| x * y).collect()))
            }
            (Payload::Word(Some(a)), Payload::Word(Some(b))) => {
                Payload::Word(Some(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => unreachable!("payload matches tag"),
        };
        Ok(GroundValue { tag: self.tag, v })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GroundValue::one(self.tag);
        for _ in 0..e {
            acc = acc.mul(self).expect("same tag");
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        check_tag(self, o)?;
        let tag = self.tag;
        if !tag.has_addition() {
            return Err(Error::NoAddition(tag.name()));
        }
        if tag.is_idempotent() {
            return Ok(match self.cmp_order(o).expect("idempotent grounds are ordered") {
                Ordering::Less => o.clone(),
                _ => self.clone(),
            });
        }
        match (&self.v, &o.v) {
            (Payload::Rat(a), Payload::Rat(b)) => Ok(GroundValue { tag, v: Payload::Rat(a + b) }),
            _ => unreachable!("additive payloads are rational"),
        }
    }

    pub fn neg(&self) -> Result<Self> {
        let v = match &self.v {
            Payload::Sign(s) => Payload::Sign(-s),
            Payload::Rat(x) if self.tag.has_minus_one() => Payload::Rat(-x),
            _ => return Err(Error::UnsupportedGround(format!("{} has no -1", self.tag))),
        };
        Ok(GroundValue { tag: self.tag, v })
    }

    /// Multiplicative inverse if the value is a unit of its ground.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let v = match &self.v {
            Payload::Bit(_) => Payload::Bit(true),
            Payload::Sign(s) => Payload::Sign(*s),
            Payload::Rat(x) => {
                let inv = x.recip();
                match self.tag {
                    GroundTag::Nat | GroundTag::OTrop if !inv.is_one() => return None,
                    GroundTag::Int if !inv.is_integer() => return None,
                    _ => Payload::Rat(inv),
                }
            }
            Payload::Tuple(Some(xs)) => Payload::Tuple(Some(xs.iter().map(|x| x.recip()).collect())),
            Payload::Word(Some(e)) => Payload::Word(Some(e.iter().map(|x| -x).collect())),
            _ => return None,
        };
        Some(GroundValue { tag: self.tag, v })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        self.mul(&o.inverse()?).ok()
    }

    /// The ground's total order (for tags with a positive order), zero lowest.
    pub fn cmp_order(&self, o: &Self) -> Option<Ordering> {
        if self.tag != o.tag || !self.tag.has_pos_order() {
            return None;
        }
        Some(match (&self.v, &o.v) {
            (Payload::Bit(a), Payload::Bit(b)) => a.cmp(b),
            (Payload::Rat(a), Payload::Rat(b)) => a.cmp(b),
            (Payload::Tuple(a), Payload::Tuple(b)) => match (a, b) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(a), Some(b)) => lex_cmp(a, b),
            },
            (Payload::Word(a), Payload::Word(b)) => match (a, b) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(a), Some(b)) => lex_cmp(a, b),
            },
            _ => return None,
        })
    }

    /// Canonical image under the structure map of grounds, when one exists.
    pub fn coerce(&self, to: GroundTag) -> Option<Self> {
        use GroundTag::*;
        let from = self.tag;
        if from == to {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(GroundValue::zero(to));
        }
        match (from, to) {
            (F1, _) => Some(GroundValue::one(to)),
            (F1Sq, Int | Rat) | (Nat, Int | Rat | RPlus) | (Int, Rat) | (OTrop, Trop) => {
                GroundValue::rational(to, self.to_rational()?).ok()
            }
            (Nat, _) if to.is_idempotent() => Some(GroundValue::one(to)),
            (Bool, _) if to.is_idempotent() => Some(GroundValue::one(to)),
            _ => None,
        }
    }

    pub fn parse(tag: GroundTag, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("{s:?} is not a value of {tag}"));
        match tag {
            GroundTag::TropN(n) => {
                if s == "0" {
                    return Ok(GroundValue::zero(tag));
                }
                let inner = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let xs = inner
                    .split(',')
                    .map(|t| parse_rational(t).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()?;
                if xs.len() != n as usize {
                    return Err(bad());
                }
                GroundValue::tuple(tag, xs).map_err(|_| bad())
            }
            GroundTag::OrdGroup { .. } => {
                if s == "0" {
                    return Ok(GroundValue::zero(tag));
                }
                if s == "1" {
                    return Ok(GroundValue::one(tag));
                }
                let inner = s
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(bad)?;
                let e = inner
                    .split(',')
                    .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                GroundValue::word(tag, e).map_err(|_| bad())
            }
            _ => {
                let x = parse_rational(s).ok_or_else(bad)?;
                GroundValue::rational(tag, x).map_err(|_| bad())
            }
        }
    }
}

pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

pub fn fmt_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for GroundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.v {
            Payload::Bit(b) => write!(f, "{}", *b as u8),
            Payload::Sign(s) => write!(f, "{s}"),
            Payload::Rat(x) => f.write_str(&fmt_rational(x)),
            Payload::Tuple(None) | Payload::Word(None) => f.write_str("0"),
            Payload::Tuple(Some(xs)) => {
                let parts: Vec<_> = xs.iter().map(fmt_rational).collect();
                write!(f, "({})", parts.join(","))
            }
            Payload::Word(Some(e)) => {
                let parts: Vec<_> = e.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Multiplication in the ground.
pub fn g_mul(a: &GroundValue, b: &GroundValue) -> Result<GroundValue> {
    a.mul(b)
}

/// Addition in the ground.
pub fn g_add(a: &GroundValue, b: &GroundValue) -> Result<GroundValue> {
    a.add(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    Alg,
    Pos,
}

fn same_tag(vals: &[&GroundValue]) -> Result<Option<GroundTag>> {
    let mut tag = None;
    for v in vals {
        match tag {
            None => tag = Some(v.tag),
            Some(t) if t != v.tag => {
                return Err(Error::TagMismatch(format!("{} vs {}", t, v.tag)));
            }
            _ => {}
        }
    }
    Ok(tag)
}

fn fold_sum(tag: GroundTag, xs: &[GroundValue]) -> Result<GroundValue> {
    xs.iter().try_fold(GroundValue::zero(tag), |acc, x| acc.add(x))
}

/// Decides `Σlhs ≤ Σrhs` in the ground (pos) or `Σlhs ≡ Σrhs` (alg).
pub fn g_leq_sum(mode: OrderMode, lhs: &[GroundValue], rhs: &[GroundValue]) -> Result<bool> {
    let all: Vec<&GroundValue> = lhs.iter().chain(rhs).collect();
    let Some(tag) = same_tag(&all)? else {
        return Ok(true);
    };
    match mode {
        OrderMode::Alg => {
            if tag.has_addition() {
                return Ok(fold_sum(tag, lhs)? == fold_sum(tag, rhs)?);
            }
            if tag == GroundTag::F1Sq {
                let s = |xs: &[GroundValue]| xs.iter().map(|x| x.to_rational().unwrap()).sum::<Q>();
                return Ok(s(lhs) == s(rhs));
            }
            let canon = |xs: &[GroundValue]| {
                let mut v: Vec<GroundValue> = xs.iter().filter(|x| !x.is_zero()).cloned().collect();
                v.sort();
                v
            };
            Ok(canon(lhs) == canon(rhs))
        }
        OrderMode::Pos => {
            if !tag.has_pos_order() {
                return Err(Error::NoOrder(tag.name()));
            }
            if matches!(tag, GroundTag::RPlus | GroundTag::Nat) {
                return Ok(fold_sum(tag, lhs)? <= fold_sum(tag, rhs)?);
            }
            let max = |xs: &[GroundValue]| {
                xs.iter().fold(GroundValue::zero(tag), |m, x| {
                    if x.cmp_order(&m) == Some(Ordering::Greater) {
                        x.clone()
                    } else {
                        m
                    }
                })
            };
            Ok(max(lhs).cmp_order(&max(rhs)) != Some(Ordering::Greater))
        }
    }
}

/// The kind of a base valuation on the ground.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValuationKind {
    Trivial,
    #[serde(rename = "p_adic")]
    PAdic { p: u64 },
    Archimedean,
    /// Components are primes, with 0 standing for a trivial component.
    LexComposite { components: Vec<u64> },
    Identity,
}

/// A base valuation `v: k -> T` as a computable scalar map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseValuation {
    pub kind: ValuationKind,
    pub source: GroundTag,
    pub target: GroundTag,
}

fn is_rational_ground(t: GroundTag) -> bool {
    matches!(t, GroundTag::F1 | GroundTag::F1Sq | GroundTag::Nat | GroundTag::Int | GroundTag::Rat)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Exponent of `p` in a nonzero rational.
pub fn p_adic_order(x: &Q, p: u64) -> i64 {
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0;
        while !n.is_zero() && n.is_multiple_of(&p) {
            n /= &p;
            k += 1;
        }
        k
    };
    count(x.numer()) - count(x.denom())
}

/// `|x|_p = p^(-ord_p x)`, with `|0|_p = 0`.
pub fn p_adic_abs(x: &Q, p: u64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let k = p_adic_order(x, p);
    let pp = q(p as i64);
    if k >= 0 {
        num_traits::pow(pp, k as usize).recip()
    } else {
        num_traits::pow(pp, (-k) as usize)
    }
}

/// Builds a base valuation after checking that source and target fit the kind.
pub fn base_valuation(kind: ValuationKind, source: GroundTag, target: GroundTag) -> Result<BaseValuation> {
    let incompatible = |why: &str| Err(Error::Incompatible(format!("{kind:?} from {source} to {target}: {why}")));
    match &kind {
        ValuationKind::Trivial => {
            if !target.is_idempotent() && source != GroundTag::F1 {
                return incompatible("target must be idempotent unless the source is F1");
            }
        }
        ValuationKind::Identity => {
            if source != target {
                return incompatible("identity needs equal grounds");
            }
        }
        ValuationKind::PAdic { p } => {
            if !is_prime(*p) {
                return incompatible("p must be prime");
            }
            if !is_rational_ground(source) || !matches!(target, GroundTag::Trop | GroundTag::OTrop) {
                return incompatible("needs a subring of Q and target TROP or OTROP");
            }
        }
        ValuationKind::Archimedean => {
            if !is_rational_ground(source) || target != GroundTag::RPlus {
                return incompatible("needs a subring of Q and target RPLUS");
            }
        }
        ValuationKind::LexComposite { components } => {
            let GroundTag::TropN(n) = target else {
                return incompatible("target must be TROPN");
            };
            if !is_rational_ground(source) || components.len() != n as usize {
                return incompatible("needs a subring of Q and one component per coordinate");
            }
            let primes: Vec<u64> = components.iter().copied().filter(|&p| p != 0).collect();
            if primes.iter().any(|&p| !is_prime(p)) {
                return incompatible("components must be primes or 0");
            }
            if primes.windows(2).any(|w| w[0] != w[1]) {
                return incompatible("distinct primes do not give an ultrametric lex valuation");
            }
        }
    }
    Ok(BaseValuation { kind, source, target })
}

impl BaseValuation {
    pub fn trivial(source: GroundTag, target: GroundTag) -> Result<Self> {
        base_valuation(ValuationKind::Trivial, source, target)
    }

    pub fn p_adic(p: u64, source: GroundTag, target: GroundTag) -> Result<Self> {
        base_valuation(ValuationKind::PAdic { p }, source, target)
    }

    pub fn apply(&self, c: &GroundValue) -> Result<GroundValue> {
        if c.tag() != self.source {
            return Err(Error::TagMismatch(format!("valuation on {} applied to {}", self.source, c.tag())));
        }
        let t = self.target;
        if c.is_zero() {
            return Ok(GroundValue::zero(t));
        }
        match &self.kind {
            ValuationKind::Identity => Ok(c.clone()),
            ValuationKind::Trivial => Ok(GroundValue::one(t)),
            ValuationKind::PAdic { p } => {
                let x = c.to_rational().expect("rational ground");
                GroundValue::rational(t, p_adic_abs(&x, *p))
                    .map_err(|_| Error::Incompatible(format!("|{x}|_{p} is not in {t}")))
            }
            ValuationKind::Archimedean => {
                let x = c.to_rational().expect("rational ground");
                GroundValue::rational(t, x.abs())
            }
            ValuationKind::LexComposite { components } => {
                let x = c.to_rational().expect("rational ground");
                let xs = components
                    .iter()
                    .map(|&p| if p == 0 { Q::one() } else { p_adic_abs(&x, p) })
                    .collect();
                GroundValue::tuple(t, xs)
            }
        }
    }

    /// Base-`p` logarithm of `|c|` for the p-adic and trivial kinds, used
    /// for log coordinates. Trivial valuations report 0 for nonzero values.
    pub fn log_abs(&self, c: &GroundValue) -> Option<Q> {
        if c.is_zero() {
            return None;
        }
        match &self.kind {
            ValuationKind::Trivial => Some(Q::zero()),
            ValuationKind::PAdic { p } => Some(q(-p_adic_order(&c.to_rational()?, *p))),
            _ => None,
        }
    }

    /// Base of the logarithm used by [`BaseValuation::log_abs`].
    pub fn log_base(&self) -> u64 {
        match &self.kind {
            ValuationKind::PAdic { p } => *p,
            _ => 2,
        }
    }
}

/// Small helper for conversions in tests and examples.
pub fn q_to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(tag: GroundTag, s: &str) -> GroundValue {
        GroundValue::parse(tag, s).unwrap()
    }

    #[test]
    fn spec_mul_examples() {
        let t = GroundTag::Trop;
        assert_eq!(g_mul(&v(t, "1/2"), &v(t, "1/2")).unwrap(), v(t, "1/4"));
        let s = GroundTag::F1Sq;
        assert_eq!(g_mul(&v(s, "-1"), &v(s, "-1")).unwrap(), v(s, "1"));
        let n = GroundTag::TropN(2);
        assert_eq!(g_mul(&v(n, "(2,1)"), &v(n, "(3,4)")).unwrap(), v(n, "(6,4)"));
    }

    #[test]
    fn spec_add_examples() {
        let t = GroundTag::Trop;
        assert_eq!(g_add(&v(t, "3"), &v(t, "5")).unwrap(), v(t, "5"));
        let b = GroundTag::Bool;
        assert_eq!(g_add(&v(b, "1"), &v(b, "1")).unwrap(), v(b, "1"));
        let n = GroundTag::TropN(2);
        assert_eq!(g_add(&v(n, "(2,1)"), &v(n, "(2,3)")).unwrap(), v(n, "(2,3)"));
        assert!(matches!(g_add(&v(GroundTag::F1, "1"), &v(GroundTag::F1, "1")), Err(Error::NoAddition(_))));
        assert!(matches!(g_add(&v(t, "1"), &v(b, "1")), Err(Error::TagMismatch(_))));
    }

    #[test]
    fn spec_leq_examples() {
        let t = GroundTag::Trop;
        assert!(g_leq_sum(OrderMode::Pos, &[v(t, "3"), v(t, "1")], &[v(t, "5")]).unwrap());
        let i = GroundTag::Int;
        assert!(g_leq_sum(OrderMode::Alg, &[v(i, "2"), v(i, "3")], &[v(i, "5")]).unwrap());
        let r = GroundTag::RPlus;
        assert!(!g_leq_sum(OrderMode::Pos, &[v(r, "5")], &[v(r, "2"), v(r, "2")]).unwrap());
        assert!(matches!(g_leq_sum(OrderMode::Pos, &[v(i, "1")], &[]), Err(Error::NoOrder(_))));
    }

    #[test]
    fn spec_valuation_examples() {
        let r = GroundTag::Rat;
        let p2 = BaseValuation::p_adic(2, r, GroundTag::Trop).unwrap();
        assert_eq!(p2.apply(&v(r, "12")).unwrap(), v(GroundTag::Trop, "1/4"));
        let tr = BaseValuation::trivial(r, GroundTag::Trop).unwrap();
        assert_eq!(tr.apply(&v(r, "-7")).unwrap(), v(GroundTag::Trop, "1"));
        let ar = base_valuation(ValuationKind::Archimedean, r, GroundTag::RPlus).unwrap();
        assert_eq!(ar.apply(&v(r, "-3/2")).unwrap(), v(GroundTag::RPlus, "3/2"));
        assert!(base_valuation(ValuationKind::Archimedean, r, GroundTag::Trop).is_err());
        assert!(base_valuation(ValuationKind::LexComposite { components: vec![2, 3] }, r, GroundTag::TropN(2)).is_err());
    }

    #[test]
    fn text_round_trip() {
        for (tag, s) in [
            (GroundTag::Rat, "-3/7"),
            (GroundTag::TropN(3), "(1,1/2,5)"),
            (GroundTag::TropN(3), "0"),
            (GroundTag::F1Sq, "-1"),
            (GroundTag::Bool, "1"),
            (GroundTag::OrdGroup { rank: 2, idempotent: true }, "[1,-2]"),
        ] {
            assert_eq!(v(tag, s).to_string(), s);
        }
        for s in ["TROPN(2)", "ORDGROUP(3)", "ORDGROUP_B(1)", "RAT", "F1SQ"] {
            assert_eq!(s.parse::<GroundTag>().unwrap().name(), s);
        }
        assert!(GroundValue::parse(GroundTag::OTrop, "3/2").is_err());
        assert!(GroundValue::parse(GroundTag::Nat, "-1").is_err());
    }
}
