use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::guard::Guard;
use super::spec::{AlgebraSpec, Branch, Bracket, ParamValue, PiecewiseRule, Support};
use crate::poly::{parse, ParamSet, Sym};
use crate::{Error, Result};

#[derive(Serialize, Deserialize, Default)]
struct SupportDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct BracketDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    guard: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<i64>,
    poly: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    name: String,
    #[serde(default)]
    params: BTreeMap<String, String>,
    support: SupportDoc,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    components: BTreeMap<i64, String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    truncated: bool,
    brackets: Vec<BracketDoc>,
}

pub fn parse_param_value(text: &str) -> Result<ParamValue> {
    let t = text.trim();
    if t == "free" {
        return Ok(ParamValue::Free);
    }
    BigRational::from_str(t)
        .map(ParamValue::Fixed)
        .map_err(|_| Error::Malformed(format!("parameter value `{t}` is neither `free` nor a rational")))
}

fn param_value_text(v: &ParamValue) -> String {
    match v {
        ParamValue::Free => "free".into(),
        ParamValue::Fixed(q) => q.to_string(),
    }
}

impl AlgebraSpec {
    pub fn from_json(text: &str) -> Result<AlgebraSpec> {
        let doc: SpecDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut params = BTreeMap::new();
        for (k, v) in &doc.params {
            params.insert(Sym::from(k.as_str()), parse_param_value(v)?);
        }
        let names = ParamSet::new(doc.params.keys().map(String::as_str));
        let support = match (doc.support.window, doc.support.rule) {
            (Some([lo, hi]), None) if lo <= hi => Support::Window(lo, hi),
            (None, Some(true)) => match doc.support.min {
                Some(m) => Support::AtLeast(m),
                None => Support::All,
            },
            _ => return Err(Error::Malformed("support must be {window:[lo,hi]} or {rule:true}".into())),
        };
        let tabular = doc.brackets.iter().any(|b| b.i.is_some() || b.j.is_some());
        let bracket = if tabular {
            let mut t = BTreeMap::new();
            for b in &doc.brackets {
                let (Some(i), Some(j), None) = (b.i, b.j, &b.guard) else {
                    return Err(Error::Malformed(
                        "table entries need i and j and no guard".into(),
                    ));
                };
                let p = parse(&b.poly, &names)?;
                if t.insert((i, j), p).is_some() {
                    return Err(Error::Malformed(format!("duplicate entry ({i},{j})")));
                }
            }
            Bracket::Table(t.into_iter().filter(|(_, p)| !p.is_zero()).collect())
        } else {
            let branches = doc
                .brackets
                .iter()
                .map(|b| {
                    Ok(Branch {
                        guard: Guard::parse(b.guard.as_deref().unwrap_or(""))?,
                        poly: parse(&b.poly, &names)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Bracket::Rule(PiecewiseRule::new(branches)?)
        };
        Ok(AlgebraSpec::new(doc.name, params, support, bracket)?
            .with_labels(doc.components)
            .with_truncation(doc.truncated))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let support = match self.support() {
            Support::Window(lo, hi) => SupportDoc {
                window: Some([lo, hi]),
                ..Default::default()
            },
            Support::All => SupportDoc {
                rule: Some(true),
                ..Default::default()
            },
            Support::AtLeast(m) => SupportDoc {
                rule: Some(true),
                min: Some(m),
                ..Default::default()
            },
        };
        let brackets = match self.bracket() {
            Bracket::Table(t) => t
                .iter()
                .map(|((i, j), p)| BracketDoc {
                    guard: None,
                    i: Some(*i),
                    j: Some(*j),
                    poly: p.to_string(),
                })
                .collect(),
            Bracket::Rule(r) => r
                .branches()
                .iter()
                .map(|b| BracketDoc {
                    guard: (!b.guard.is_always()).then(|| b.guard.to_string()),
                    i: None,
                    j: None,
                    poly: b.poly.to_string(),
                })
                .collect(),
        };
        let doc = SpecDoc {
            name: self.name().to_string(),
            params: self
                .params()
                .iter()
                .map(|(k, v)| (k.to_string(), param_value_text(v)))
                .collect(),
            support,
            components: self.labels().clone(),
            truncated: self.is_truncated(),
            brackets,
        };
        serde_json::to_value(doc).expect("serializable")
    }
}
