//! JSON encodings of fibered semi-groups, bimodules, cobordism data and
//! theory descriptors. Elements are written in their canonical printed form.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use fsgrp_core::bimod::FiberedBimodule;
use fsgrp_core::ccob::{signs, CobObject, Cobordism};
use fsgrp_core::finset::PairSet;
use fsgrp_core::theory::{ConstantSheaf, FreeBoundary, LocalTheory};
use fsgrp_core::{FiberedSemiGroup, FinMap, FinSet, Token};
use serde::{Deserialize, Serialize};

/// `{"pairs": [[a, b, a·b], ...]}`, one row per element of the fiber product.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionJson {
    pub pairs: Vec<(String, String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsgrpJson {
    pub total: Vec<String>,
    pub base: Vec<String>,
    pub proj: BTreeMap<String, String>,
    pub mul: ActionJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleJson {
    pub left: FsgrpJson,
    pub right: FsgrpJson,
    pub carrier: Vec<String>,
    pub src: BTreeMap<String, String>,
    pub tgt: BTreeMap<String, String>,
    pub lact: ActionJson,
    pub ract: ActionJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectJson {
    pub components: Vec<String>,
    pub orientation: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismJson {
    pub source: ObjectJson,
    pub target: ObjectJson,
    pub regions: Vec<String>,
    pub in_src: BTreeMap<String, String>,
    pub in_tgt: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "theory")]
pub enum TheoryJson {
    #[serde(rename = "constant")]
    Constant {
        #[serde(rename = "S")]
        values: Vec<String>,
    },
    #[serde(rename = "free_boundary")]
    FreeBoundary {
        #[serde(rename = "S")]
        values: Vec<String>,
        fill: String,
    },
}

/// What a `build` input file describes.
pub enum Shape {
    Object(CobObject),
    Cobordism(Cobordism),
}

fn token(text: &str, at: &str) -> Result<Token> {
    Token::parse(text).with_context(|| format!("{at}: {text:?} is not a valid element"))
}

fn set(items: &[String], at: &str) -> Result<FinSet> {
    let tokens = items.iter().map(|s| token(s, at)).collect::<Result<Vec<_>>>()?;
    FinSet::new(tokens).with_context(|| format!("{at}: elements must be distinct"))
}

fn map(dom: &FinSet, cod: &FinSet, table: &BTreeMap<String, String>, at: &str) -> Result<FinMap> {
    let pairs = table
        .iter()
        .map(|(k, v)| Ok((token(k, at)?, token(v, at)?)))
        .collect::<Result<Vec<_>>>()?;
    FinMap::new(dom.clone(), cod.clone(), pairs).with_context(|| format!("{at}: not a total map"))
}

fn action(pairs: &PairSet, cod: &FinSet, rows: &ActionJson, at: &str) -> Result<FinMap> {
    let rows = rows
        .pairs
        .iter()
        .map(|(a, b, r)| Ok((Token::pair(&token(a, at)?, &token(b, at)?), token(r, at)?)))
        .collect::<Result<Vec<_>>>()?;
    FinMap::new(pairs.carrier.clone(), cod.clone(), rows)
        .with_context(|| format!("{at}: the listed pairs must be exactly the fiber product"))
}

fn strings(s: &FinSet) -> Vec<String> {
    s.iter().map(Token::to_string).collect()
}

fn table(m: &FinMap) -> BTreeMap<String, String> {
    m.dom().iter().zip(m.table()).map(|(x, &j)| (x.to_string(), m.cod().get(j).to_string())).collect()
}

fn rows(pairs: &PairSet, left: &FinSet, right: &FinSet, act: &FinMap) -> ActionJson {
    let pairs = (0..pairs.carrier.len())
        .map(|k| {
            let (i, j) = pairs.components(k);
            (left.get(i).to_string(), right.get(j).to_string(), act.cod().get(act.index(k)).to_string())
        })
        .collect();
    ActionJson { pairs }
}

impl FsgrpJson {
    pub fn decode(&self, at: &str) -> Result<FiberedSemiGroup> {
        let total = set(&self.total, &format!("{at}total"))?;
        let base = set(&self.base, &format!("{at}base"))?;
        let proj = map(&total, &base, &self.proj, &format!("{at}proj"))?;
        let pairs = fsgrp_core::finset::fiber_product(&proj, &proj)?;
        let mul = action(&pairs, &total, &self.mul, &format!("{at}mul.pairs"))?;
        Ok(FiberedSemiGroup::new(total, base, proj, mul)?)
    }

    pub fn encode(e: &FiberedSemiGroup) -> Self {
        FsgrpJson {
            total: strings(e.total()),
            base: strings(e.base()),
            proj: table(e.proj()),
            mul: rows(e.pairs(), e.total(), e.total(), e.mul()),
        }
    }
}

impl BimoduleJson {
    pub fn decode(&self) -> Result<FiberedBimodule> {
        let left = self.left.decode("left.")?;
        let right = self.right.decode("right.")?;
        let carrier = set(&self.carrier, "carrier")?;
        let src = map(&carrier, left.base(), &self.src, "src")?;
        let tgt = map(&carrier, right.base(), &self.tgt, "tgt")?;
        let lpairs = fsgrp_core::finset::fiber_product(left.proj(), &src)?;
        let rpairs = fsgrp_core::finset::fiber_product(&tgt, right.proj())?;
        let lact = action(&lpairs, &carrier, &self.lact, "lact.pairs")?;
        let ract = action(&rpairs, &carrier, &self.ract, "ract.pairs")?;
        Ok(FiberedBimodule::new(left, right, carrier, src, tgt, lact, ract)?)
    }

    pub fn encode(b: &FiberedBimodule) -> Self {
        BimoduleJson {
            left: FsgrpJson::encode(b.left_sgrp()),
            right: FsgrpJson::encode(b.right_sgrp()),
            carrier: strings(b.carrier()),
            src: table(b.src()),
            tgt: table(b.tgt()),
            lact: rows(b.left_pairs(), b.left_sgrp().total(), b.carrier(), b.lact()),
            ract: rows(b.right_pairs(), b.carrier(), b.right_sgrp().total(), b.ract()),
        }
    }
}

impl ObjectJson {
    pub fn decode(&self, at: &str) -> Result<CobObject> {
        let components = set(&self.components, &format!("{at}components"))?;
        let orientation = map(&components, &signs(), &self.orientation, &format!("{at}orientation"))?;
        Ok(CobObject::new(components, orientation)?)
    }
}

impl CobordismJson {
    pub fn decode(&self) -> Result<Cobordism> {
        let source = self.source.decode("source.")?;
        let target = self.target.decode("target.")?;
        let regions = set(&self.regions, "regions")?;
        let in_src = map(source.components(), &regions, &self.in_src, "in_src")?;
        let in_tgt = map(target.components(), &regions, &self.in_tgt, "in_tgt")?;
        Ok(Cobordism::new(source, target, regions, in_src, in_tgt)?)
    }
}

impl TheoryJson {
    pub fn set_size(&self) -> usize {
        match self {
            TheoryJson::Constant { values } | TheoryJson::FreeBoundary { values, .. } => values.len(),
        }
    }

    pub fn decode(&self) -> Result<Box<dyn LocalTheory>> {
        Ok(match self {
            TheoryJson::Constant { values } => Box::new(ConstantSheaf::new(set(values, "S")?)?),
            TheoryJson::FreeBoundary { values, fill } => {
                Box::new(FreeBoundary::new(set(values, "S")?, &token(fill, "fill")?)?)
            }
        })
    }
}

/// Parses `text` as `T`, reporting the line and column of a syntax error.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).with_context(|| format!("malformed {what}"))
}

/// Objects carry `components`, cobordisms `source`.
pub fn parse_shape(text: &str) -> Result<Shape> {
    let value: serde_json::Value = parse(text, "JSON")?;
    let Some(fields) = value.as_object() else {
        bail!("expected a JSON object describing an object or a cobordism");
    };
    if fields.contains_key("components") {
        Ok(Shape::Object(parse::<ObjectJson>(text, "object")?.decode("")?))
    } else if fields.contains_key("source") {
        Ok(Shape::Cobordism(parse::<CobordismJson>(text, "cobordism")?.decode()?))
    } else {
        bail!("expected an object (with \"components\") or a cobordism (with \"source\")")
    }
}
