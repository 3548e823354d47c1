//! JSON forms of groups, endomorphisms, distributions and instances.
//!
//! Groups are `{"cyclic_orders": [9, 3]}`, endomorphisms `{"matrix": [[5, 0], [0, 2]]}`,
//! distributions `{"probs": {"0,3": "1/6", "1,0": "5/6"}}`. A canonical instance
//! is `{"group", "alpha", "mu1", "mu2"}`; general forms replace `alpha` with
//! `alpha1`, `alpha2`, `beta1`, `beta2`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FiniteAbelianGroup, GroupElement, Subgroup};
use crate::predicates::FormsInstance;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    cyclic_orders: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndomorphismSpec {
    matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionSpec {
    probs: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalSpec {
    group: GroupSpec,
    alpha: EndomorphismSpec,
    mu1: DistributionSpec,
    mu2: DistributionSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralSpec {
    group: GroupSpec,
    alpha1: EndomorphismSpec,
    alpha2: EndomorphismSpec,
    beta1: EndomorphismSpec,
    beta2: EndomorphismSpec,
    mu1: DistributionSpec,
    mu2: DistributionSpec,
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

impl GroupSpec {
    fn build(self) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(&self.cyclic_orders)
    }
}

impl EndomorphismSpec {
    fn build(self, group: &FiniteAbelianGroup) -> Result<Endomorphism> {
        Endomorphism::new(group, &self.matrix)
    }
}

impl DistributionSpec {
    fn build(self, group: &FiniteAbelianGroup) -> Result<Distribution> {
        let masses = self
            .probs
            .iter()
            .map(|(k, p)| Ok((parse_element(group, k)?, parse_fraction(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(group, masses)
    }
}

/// `"a/b"` or an integer; a zero denominator is a parse error.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| Error::Parse(format!("fraction {s:?}: {e}")))
}

/// Comma-separated coordinates, e.g. `"0,3"`; each must already be reduced.
pub fn parse_element(group: &FiniteAbelianGroup, s: &str) -> Result<GroupElement> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<u64>().map_err(|e| Error::Parse(format!("element {s:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    group.element(&coords)
}

pub fn parse_group(s: &str) -> Result<FiniteAbelianGroup> {
    from_str::<GroupSpec>(s)?.build()
}

pub fn parse_endomorphism(group: &FiniteAbelianGroup, s: &str) -> Result<Endomorphism> {
    from_str::<EndomorphismSpec>(s)?.build(group)
}

pub fn parse_distribution(group: &FiniteAbelianGroup, s: &str) -> Result<Distribution> {
    from_str::<DistributionSpec>(s)?.build(group)
}

/// Either instance form, told apart by the presence of `alpha`.
pub fn parse_instance(s: &str) -> Result<FormsInstance> {
    let v: Value = from_str(s)?;
    if v.get("alpha").is_some() {
        let doc: CanonicalSpec = from_value(v)?;
        let g = doc.group.build()?;
        let alpha = doc.alpha.build(&g)?;
        FormsInstance::canonical(alpha, doc.mu1.build(&g)?, doc.mu2.build(&g)?)
    } else {
        let doc: GeneralSpec = from_value(v)?;
        let g = doc.group.build()?;
        FormsInstance::new(
            doc.alpha1.build(&g)?,
            doc.alpha2.build(&g)?,
            doc.beta1.build(&g)?,
            doc.beta2.build(&g)?,
            doc.mu1.build(&g)?,
            doc.mu2.build(&g)?,
        )
    }
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("cyclic_orders", self.cyclic_orders())?;
        map.end()
    }
}

impl Serialize for Endomorphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("matrix", self.matrix())?;
        map.end()
    }
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let probs: BTreeMap<String, String> = self
            .masses()
            .map(|(i, p)| (self.group().element_at(i).to_string(), p.to_string()))
            .collect();
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("probs", &probs)?;
        map.end()
    }
}

/// A subgroup is written as its sorted element list.
impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

impl Serialize for FormsInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("group", self.group())?;
        match self.alpha() {
            Ok(alpha) => map.serialize_entry("alpha", alpha)?,
            Err(_) => {
                map.serialize_entry("alpha1", &self.alpha1)?;
                map.serialize_entry("alpha2", &self.alpha2)?;
                map.serialize_entry("beta1", &self.beta1)?;
                map.serialize_entry("beta2", &self.beta2)?;
            }
        }
        map.serialize_entry("mu1", &self.mu1)?;
        map.serialize_entry("mu2", &self.mu2)?;
        map.end()
    }
}
