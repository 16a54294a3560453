use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FormalSum, Monomial, Presentation, RelMode, Relation};
use crate::error::{Error, Result};
use crate::ground::{GroundTag, GroundValue};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    pub coeff: String,
    #[serde(default)]
    pub exps: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    pub mode: String,
    pub lhs: Vec<MonomialJson>,
    pub rhs: Vec<MonomialJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub ground: GroundTag,
    pub generators: Vec<String>,
    #[serde(default)]
    pub monoid_relations: Vec<[MonomialJson; 2]>,
    #[serde(default)]
    pub subaddition: Vec<RelationJson>,
}

impl MonomialJson {
    pub fn from_monomial(m: &Monomial) -> Self {
        MonomialJson { coeff: m.coeff.to_string(), exps: m.exps.clone() }
    }

    pub fn to_monomial(&self, tag: GroundTag) -> Result<Monomial> {
        Ok(Monomial::new(GroundValue::parse(tag, &self.coeff)?, self.exps.clone()))
    }
}

impl RelationJson {
    pub fn from_relation(r: &Relation) -> Self {
        let side = |s: &FormalSum| s.terms.iter().map(MonomialJson::from_monomial).collect();
        RelationJson {
            mode: match r.mode {
                RelMode::Le => "le".into(),
                RelMode::Eq => "eq".into(),
            },
            lhs: side(&r.lhs),
            rhs: side(&r.rhs),
        }
    }

    pub fn to_relation(&self, tag: GroundTag) -> Result<Relation> {
        let mode = match self.mode.as_str() {
            "le" => RelMode::Le,
            "eq" => RelMode::Eq,
            m => return Err(Error::Parse(format!("relation mode must be le or eq, got {m:?}"))),
        };
        let side = |xs: &[MonomialJson]| -> Result<FormalSum> {
            Ok(FormalSum::new(xs.iter().map(|m| m.to_monomial(tag)).collect::<Result<_>>()?))
        };
        Ok(Relation { mode, lhs: side(&self.lhs)?, rhs: side(&self.rhs)? })
    }
}

impl PresentationJson {
    pub fn from_presentation(p: &Presentation) -> Self {
        PresentationJson {
            ground: p.ground,
            generators: p.generators.clone(),
            monoid_relations: p
                .monoid_relations
                .iter()
                .map(|(a, b)| [MonomialJson::from_monomial(a), MonomialJson::from_monomial(b)])
                .collect(),
            subaddition: p.subaddition.iter().map(RelationJson::from_relation).collect(),
        }
    }

    pub fn into_presentation(self) -> Result<Presentation> {
        let tag = self.ground;
        let mut p = Presentation::new(tag, &[]);
        p.generators = self.generators;
        for [a, b] in &self.monoid_relations {
            p.monoid_relations.push((a.to_monomial(tag)?, b.to_monomial(tag)?));
        }
        for r in &self.subaddition {
            p.subaddition.push(r.to_relation(tag)?);
        }
        p.validate()?;
        Ok(p)
    }
}
