//! Scenario configuration documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curvecfg::{AbelianGroup, GroupElement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    CalabiYau,
    KodairaOne,
    GeneralType,
    WeakFano,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::CalabiYau => "calabi_yau",
            Family::KodairaOne => "kodaira_one",
            Family::GeneralType => "general_type",
            Family::WeakFano => "weak_fano",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.replace('-', "_").as_str() {
            "calabi_yau" | "cy" => Some(Family::CalabiYau),
            "kodaira_one" | "k1" => Some(Family::KodairaOne),
            "general_type" | "gt" => Some(Family::GeneralType),
            "weak_fano" | "wf" => Some(Family::WeakFano),
            _ => None,
        }
    }

    /// Short prefix of claim identifiers.
    pub fn prefix(self) -> &'static str {
        match self {
            Family::CalabiYau => "cy",
            Family::KodairaOne => "k1",
            Family::GeneralType => "gt",
            Family::WeakFano => "wf",
        }
    }

    /// Point names a configuration of this family must assign.
    pub fn point_names(self) -> Vec<String> {
        match self {
            Family::CalabiYau | Family::KodairaOne => (1..=11).map(|j| format!("p{j}")).collect(),
            Family::GeneralType | Family::WeakFano => vec!["p".to_string()],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub free_rank: usize,
    #[serde(default)]
    pub torsion_orders: Vec<u64>,
}

/// Coordinates of `p - p0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default)]
    pub free: Vec<i64>,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_degree: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub family: Family,
    #[serde(default)]
    pub group: GroupSpec,
    #[serde(default)]
    pub points: BTreeMap<String, PointSpec>,
    #[serde(default)]
    pub parameters: Parameters,
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// Smallest `d` accepted for general type with `r` lines.
pub fn general_type_min_d(r: u32) -> i64 {
    let r = i64::from(r);
    2 * (3 * r + r * (r - 1) / 2 + 2)
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid("config", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn group(&self) -> Result<AbelianGroup> {
        AbelianGroup::new(self.group.free_rank, self.group.torsion_orders.clone())
            .map_err(|_| invalid("group.torsion_orders", "every torsion order must be at least 2"))
    }

    pub fn point(&self, name: &str) -> Result<GroupElement> {
        let group = self.group()?;
        let spec = self
            .points
            .get(name)
            .ok_or_else(|| invalid(&format!("points.{name}"), "missing"))?;
        let free = if spec.free.is_empty() { vec![0; group.free_rank] } else { spec.free.clone() };
        let torsion = if spec.torsion.is_empty() {
            vec![0; group.torsion_orders.len()]
        } else {
            spec.torsion.clone()
        };
        group.element(free, torsion).map_err(|_| {
            invalid(
                &format!("points.{name}"),
                format!(
                    "expected {} free and {} torsion coordinates",
                    group.free_rank,
                    group.torsion_orders.len()
                ),
            )
        })
    }

    /// Checks the shape of the document against the family's needs.
    pub fn validate(&self) -> Result<()> {
        self.group()?;
        let names = self.family.point_names();
        for name in &names {
            self.point(name)?;
        }
        if let Some(extra) = self.points.keys().find(|k| !names.contains(k)) {
            return Err(invalid(&format!("points.{extra}"), "not a point of this family"));
        }
        let p = &self.parameters;
        match self.family {
            Family::GeneralType => {
                let r = p.r.ok_or_else(|| invalid("parameters.r", "missing"))?;
                if r < 4 {
                    return Err(Error::Precondition(format!(
                        "r = {r}: r ≥ 4 required for the K_Z ampleness certificate"
                    )));
                }
                let bound = general_type_min_d(r);
                if let Some(d) = p.d {
                    if d < bound {
                        return Err(Error::Precondition(format!(
                            "d = {d} is below the bound 2(3r + r(r-1)/2 + 2) = {bound}"
                        )));
                    }
                }
            }
            Family::KodairaOne => {
                if p.cover_degree == Some(0) {
                    return Err(invalid("parameters.cover_degree", "must be positive"));
                }
            }
            Family::CalabiYau | Family::WeakFano => {}
        }
        if self.family != Family::GeneralType && (p.r.is_some() || p.d.is_some()) {
            return Err(invalid("parameters", "r and d only apply to general_type"));
        }
        if self.family != Family::KodairaOne && p.cover_degree.is_some() {
            return Err(invalid("parameters.cover_degree", "only applies to kodaira_one"));
        }
        Ok(())
    }

    /// Cyclic configuration: every point at `p0` except the last, which
    /// generates `Z/n` (or `Z` when `n` is `None`).
    pub fn cyclic(family: Family, n: Option<u64>) -> Self {
        let (group, last) = match n {
            None => (
                GroupSpec {
                    free_rank: 1,
                    torsion_orders: vec![],
                },
                PointSpec {
                    free: vec![1],
                    torsion: vec![],
                },
            ),
            Some(1) => (GroupSpec::default(), PointSpec::default()),
            Some(n) => (
                GroupSpec {
                    free_rank: 0,
                    torsion_orders: vec![n],
                },
                PointSpec {
                    free: vec![],
                    torsion: vec![1],
                },
            ),
        };
        let names = family.point_names();
        let mut points = BTreeMap::new();
        for (j, name) in names.iter().enumerate() {
            let spec = if j + 1 == names.len() { last.clone() } else { PointSpec::default() };
            points.insert(name.clone(), spec);
        }
        let parameters = match family {
            Family::GeneralType => Parameters {
                r: Some(4),
                d: Some(general_type_min_d(4)),
                cover_degree: None,
            },
            Family::KodairaOne => Parameters {
                cover_degree: Some(2),
                ..Parameters::default()
            },
            _ => Parameters::default(),
        };
        ScenarioConfig {
            family,
            group,
            points,
            parameters,
        }
    }
}
