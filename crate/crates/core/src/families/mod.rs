//! Builders for the four families of generalised log canonical surfaces
//! with unbounded Cartier index, together with the ledger of exact checks
//! each build runs.

mod calabi_yau;
pub mod config;
pub mod divergence;
pub mod general_type;
mod kodaira_one;
mod weak_fano;

use crate::contract::DiscrepancyEntry;
use crate::curvecfg::Order;
use crate::error::Result;
use crate::lattice::SurfaceLattice;
use crate::positivity::PositivityReport;
use crate::rational::Rational;

pub use calabi_yau::build_calabi_yau;
pub use config::{Family, ScenarioConfig};
pub use divergence::DivergenceWitness;
pub use general_type::build_general_type;
pub use kodaira_one::build_kodaira_one;
pub use weak_fano::build_weak_fano;

/// A checked quantity: exact number, infinity, or a yes/no fact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Rational(Rational),
    Infinite,
    Bool(bool),
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::Rational(q)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<Order> for Value {
    fn from(o: Order) -> Self {
        match o {
            Order::Finite(n) => Value::Rational(Rational::from_integer(n.into())),
            Order::Infinite => Value::Infinite,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Rational(q) => write!(f, "{q}"),
            Value::Infinite => write!(f, "infinite"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub claim_id: String,
    pub anchor: String,
    pub expected: Value,
    pub computed: Value,
    pub equal: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn check(&mut self, claim_id: &str, anchor: &str, expected: impl Into<Value>, computed: impl Into<Value>) {
        let expected = expected.into();
        let computed = computed.into();
        let equal = expected == computed;
        self.entries.push(LedgerEntry {
            claim_id: claim_id.to_string(),
            anchor: anchor.to_string(),
            expected,
            computed,
            equal,
        });
    }

    pub fn all_equal(&self) -> bool {
        self.entries.iter().all(|e| e.equal)
    }

    pub fn first_mismatch(&self) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| !e.equal)
    }

    pub fn get(&self, claim_id: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.claim_id == claim_id)
    }

    /// Appends `suffix` to every claim id.
    pub fn suffixed(mut self, suffix: &str) -> Self {
        for e in &mut self.entries {
            e.claim_id = format!("{}.{suffix}", e.claim_id);
        }
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Perturb the base intersection form, for exercising the mismatch path.
    pub corrupt_gram: bool,
    /// Override the divergence search bound.
    pub divergence_bound: Option<u64>,
}

impl BuildOptions {
    pub(crate) fn plane(&self) -> SurfaceLattice {
        let s = SurfaceLattice::projective_plane();
        if self.corrupt_gram {
            s.with_gram_entry("H", "H", Rational::from_integer(2.into())).expect("H exists")
        } else {
            s
        }
    }

    pub(crate) fn ruled(&self, genus: u32, invariant: u32) -> SurfaceLattice {
        let s = SurfaceLattice::ruled_surface(genus, invariant);
        if self.corrupt_gram {
            s.with_gram_entry("C-", "C-", Rational::from_integer((-2).into())).expect("C- exists")
        } else {
            s
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceSummary {
    pub name: String,
    pub rank: usize,
    pub canonical_square: Rational,
    pub cover_degree: u32,
}

impl SurfaceSummary {
    pub(crate) fn of(name: &str, s: &SurfaceLattice) -> Result<Self> {
        Ok(SurfaceSummary {
            name: name.to_string(),
            rank: s.rank(),
            canonical_square: s.self_intersection(s.canonical())?,
            cover_degree: s.cover_degree(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub config: ScenarioConfig,
    pub surfaces: Vec<SurfaceSummary>,
    pub positivity: Vec<PositivityReport>,
    pub discrepancies: Vec<DiscrepancyEntry>,
    pub volume: Rational,
    pub coefficient_set: Vec<Rational>,
    /// Order of the torsion datum that drives the family.
    pub torsion_order: Order,
    pub semiample_multiple: Order,
    pub cartier_index: Order,
    pub divergence: Option<DivergenceWitness>,
    pub ledger: Ledger,
}

/// Validates `cfg` and runs the matching builder.
pub fn build(cfg: &ScenarioConfig, opts: &BuildOptions) -> Result<ScenarioReport> {
    cfg.validate()?;
    match cfg.family {
        Family::CalabiYau => build_calabi_yau(cfg, opts),
        Family::KodairaOne => build_kodaira_one(cfg, opts),
        Family::GeneralType => build_general_type(cfg, opts),
        Family::WeakFano => build_weak_fano(cfg, opts),
    }
}

/// One row of a sweep over the torsion order of the moving point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub param: u64,
    pub torsion_order: Order,
    pub semiample_multiple: Order,
    pub cartier_index: Order,
    pub divergence: Option<DivergenceWitness>,
}

pub fn sweep(family: Family, params: &[u64], opts: &BuildOptions) -> Result<Vec<SweepRow>> {
    if params.is_empty() {
        return Err(crate::error::Error::Empty("parameter range"));
    }
    params
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(crate::error::Error::InvalidConfig {
                    field: "param".into(),
                    reason: "torsion order must be at least 1".into(),
                });
            }
            let rep = build(&ScenarioConfig::cyclic(family, Some(n)), opts)?;
            Ok(SweepRow {
                param: n,
                torsion_order: rep.torsion_order,
                semiample_multiple: rep.semiample_multiple,
                cartier_index: rep.cartier_index,
                divergence: rep.divergence,
            })
        })
        .collect()
}

/// One pinned run of the verification battery.
#[derive(Debug, Clone)]
pub struct BatteryRun {
    pub label: String,
    pub config: ScenarioConfig,
    pub outcome: std::result::Result<ScenarioReport, crate::error::Error>,
    pub ledger: Ledger,
}

/// Pinned configurations covering all four families.
pub fn battery_configs() -> Vec<(String, ScenarioConfig)> {
    let mut out = Vec::new();
    for n in [5, 7, 9] {
        out.push((format!("n{n}"), ScenarioConfig::cyclic(Family::CalabiYau, Some(n))));
    }
    out.push(("n7".into(), ScenarioConfig::cyclic(Family::KodairaOne, Some(7))));
    for r in [4u32, 5] {
        let mut cfg = ScenarioConfig::cyclic(Family::GeneralType, Some(5));
        cfg.parameters.r = Some(r);
        cfg.parameters.d = Some(config::general_type_min_d(r));
        out.push((format!("r{r}"), cfg));
    }
    for n in [1, 9] {
        out.push((format!("n{n}"), ScenarioConfig::cyclic(Family::WeakFano, Some(n))));
    }
    out
}

/// Runs every pinned configuration. A build that fails outright is
/// recorded as a single failing `<prefix>.build` claim.
pub fn run_battery(opts: &BuildOptions) -> Vec<BatteryRun> {
    battery_configs()
        .into_iter()
        .map(|(label, cfg)| {
            let outcome = build(&cfg, opts);
            let ledger = match &outcome {
                Ok(rep) => rep.ledger.clone().suffixed(&label),
                Err(e) => {
                    let mut l = Ledger::default();
                    l.entries.push(LedgerEntry {
                        claim_id: format!("{}.build.{label}", cfg.family.prefix()),
                        anchor: format!("scenario builds: {e}"),
                        expected: Value::Bool(true),
                        computed: Value::Bool(false),
                        equal: false,
                    });
                    l
                }
            };
            BatteryRun {
                label,
                config: cfg,
                outcome,
                ledger,
            }
        })
        .collect()
}
