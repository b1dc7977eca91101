//! The report document: scenario echoes, the claim ledger and positivity
//! evidence, with every rational written as a numerator/denominator pair of
//! decimal strings.

use serde::{Deserialize, Serialize};

use crate::contract::DiscrepancyEntry;
use crate::curvecfg::Order;
use crate::error::{Error, Result};
use crate::families::{BatteryRun, DivergenceWitness, Family, LedgerEntry, ScenarioConfig, ScenarioReport, SweepRow, Value};
use crate::positivity::{PositivityReport, Verdict};
use crate::rational::{Rational, RationalRepr};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueRepr {
    Rational { num: String, den: String },
    Infinite,
    LowerBound { num: String, den: String },
    Bool { value: bool },
}

impl ValueRepr {
    fn rational(q: &Rational) -> Self {
        let r = RationalRepr::from(q);
        ValueRepr::Rational { num: r.num, den: r.den }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            ValueRepr::Rational { num, den } => RationalRepr {
                num: num.clone(),
                den: den.clone(),
            }
            .parse()
            .ok(),
            _ => None,
        }
    }

    pub fn display(&self) -> String {
        match self {
            ValueRepr::Rational { num, den } if den == "1" => num.clone(),
            ValueRepr::Rational { num, den } => format!("{num}/{den}"),
            ValueRepr::Infinite => "infinite".into(),
            ValueRepr::LowerBound { num, den } if den == "1" => format!(">={num}"),
            ValueRepr::LowerBound { num, den } => format!(">={num}/{den}"),
            ValueRepr::Bool { value } => value.to_string(),
        }
    }
}

impl From<&Value> for ValueRepr {
    fn from(v: &Value) -> Self {
        match v {
            Value::Rational(q) => ValueRepr::rational(q),
            Value::Infinite => ValueRepr::Infinite,
            Value::Bool(b) => ValueRepr::Bool { value: *b },
        }
    }
}

impl From<Order> for ValueRepr {
    fn from(o: Order) -> Self {
        ValueRepr::from(&Value::from(o))
    }
}

impl From<&DivergenceWitness> for ValueRepr {
    fn from(w: &DivergenceWitness) -> Self {
        match w {
            DivergenceWitness::Exact(q) => ValueRepr::rational(q),
            DivergenceWitness::Infinite => ValueRepr::Infinite,
            DivergenceWitness::LowerBound(q) => {
                let r = RationalRepr::from(q);
                ValueRepr::LowerBound { num: r.num, den: r.den }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub claim_id: String,
    pub anchor: String,
    pub expected: ValueRepr,
    pub computed: ValueRepr,
    pub verdict: String,
}

impl From<&LedgerEntry> for LedgerRow {
    fn from(e: &LedgerEntry) -> Self {
        LedgerRow {
            claim_id: e.claim_id.clone(),
            anchor: e.anchor.clone(),
            expected: (&e.expected).into(),
            computed: (&e.computed).into(),
            verdict: if e.equal { "equal" } else { "mismatch" }.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub what: String,
    pub value: RationalRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub against: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRow {
    pub name: String,
    pub coeff: RationalRepr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityRow {
    pub subject: String,
    pub verdict: Verdict,
    pub criterion: String,
    pub witnesses: Vec<WitnessRow>,
    pub decomposition: Vec<TermRow>,
    pub notes: Vec<String>,
}

impl From<&PositivityReport> for PositivityRow {
    fn from(r: &PositivityReport) -> Self {
        PositivityRow {
            subject: r.subject.to_string(),
            verdict: r.verdict,
            criterion: r.criterion.clone(),
            witnesses: r
                .witnesses
                .iter()
                .map(|w| WitnessRow {
                    what: w.what.clone(),
                    value: (&w.value).into(),
                    against: w.against.as_ref().map(|c| c.to_string()),
                })
                .collect(),
            decomposition: r
                .decomposition
                .iter()
                .map(|(name, q)| TermRow {
                    name: name.clone(),
                    coeff: q.into(),
                })
                .collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyRow {
    pub curve: String,
    pub multiplicity: RationalRepr,
    pub discrepancy: RationalRepr,
}

impl From<&DiscrepancyEntry> for DiscrepancyRow {
    fn from(e: &DiscrepancyEntry) -> Self {
        DiscrepancyRow {
            curve: e.curve.clone(),
            multiplicity: (&e.multiplicity).into(),
            discrepancy: (&e.discrepancy).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSection {
    pub label: String,
    pub config: ScenarioConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<RationalRepr>,
    #[serde(default)]
    pub coefficient_set: Vec<RationalRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_order: Option<ValueRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiample_multiple: Option<ValueRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartier_index: Option<ValueRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence_witness: Option<ValueRepr>,
    #[serde(default)]
    pub discrepancies: Vec<DiscrepancyRow>,
    #[serde(default)]
    pub positivity: Vec<PositivityRow>,
    pub ledger: Vec<LedgerRow>,
}

impl ScenarioSection {
    pub fn from_report(label: &str, rep: &ScenarioReport, ledger: &[LedgerEntry]) -> Self {
        ScenarioSection {
            label: label.to_string(),
            config: rep.config.clone(),
            error: None,
            volume: Some((&rep.volume).into()),
            coefficient_set: rep.coefficient_set.iter().map(RationalRepr::from).collect(),
            torsion_order: Some(rep.torsion_order.into()),
            semiample_multiple: Some(rep.semiample_multiple.into()),
            cartier_index: Some(rep.cartier_index.into()),
            divergence_witness: rep.divergence.as_ref().map(ValueRepr::from),
            discrepancies: rep.discrepancies.iter().map(DiscrepancyRow::from).collect(),
            positivity: rep.positivity.iter().map(PositivityRow::from).collect(),
            ledger: ledger.iter().map(LedgerRow::from).collect(),
        }
    }

    fn from_run(run: &BatteryRun) -> Self {
        match &run.outcome {
            Ok(rep) => Self::from_report(&run.label, rep, &run.ledger.entries),
            Err(e) => ScenarioSection {
                label: run.label.clone(),
                config: run.config.clone(),
                error: Some(e.to_string()),
                volume: None,
                coefficient_set: Vec::new(),
                torsion_order: None,
                semiample_multiple: None,
                cartier_index: None,
                divergence_witness: None,
                discrepancies: Vec::new(),
                positivity: Vec::new(),
                ledger: run.ledger.entries.iter().map(LedgerRow::from).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRowRepr {
    pub param: u64,
    pub torsion_order: ValueRepr,
    pub semiample_multiple: ValueRepr,
    pub cartier_index: ValueRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence_witness: Option<ValueRepr>,
}

impl From<&SweepRow> for SweepRowRepr {
    fn from(r: &SweepRow) -> Self {
        SweepRowRepr {
            param: r.param,
            torsion_order: r.torsion_order.into(),
            semiample_multiple: r.semiample_multiple.into(),
            cartier_index: r.cartier_index.into(),
            divergence_witness: r.divergence.as_ref().map(ValueRepr::from),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_micros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    #[serde(default)]
    pub scenarios: Vec<ScenarioSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepTable>,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTable {
    pub family: Family,
    pub rows: Vec<SweepRowRepr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "markdown" | "md" => Some(Format::Markdown),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

impl ReportDocument {
    fn empty(command: &str) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            scenarios: Vec::new(),
            sweep: None,
            timing: Timing::default(),
        }
    }

    pub fn from_battery(runs: &[BatteryRun]) -> Self {
        let mut doc = Self::empty("verify");
        doc.scenarios = runs.iter().map(ScenarioSection::from_run).collect();
        doc
    }

    pub fn from_scenario(rep: &ScenarioReport) -> Self {
        let mut doc = Self::empty("scenario");
        let label = rep.config.family.name();
        doc.scenarios.push(ScenarioSection::from_report(label, rep, &rep.ledger.entries));
        doc
    }

    pub fn from_sweep(family: Family, rows: &[SweepRow]) -> Self {
        let mut doc = Self::empty("sweep");
        doc.sweep = Some(SweepTable {
            family,
            rows: rows.iter().map(SweepRowRepr::from).collect(),
        });
        doc
    }

    pub fn with_elapsed(mut self, micros: u64) -> Self {
        self.timing.elapsed_micros = micros;
        self
    }

    pub fn ledger(&self) -> impl Iterator<Item = &LedgerRow> {
        self.scenarios.iter().flat_map(|s| s.ledger.iter())
    }

    pub fn first_mismatch(&self) -> Option<&LedgerRow> {
        self.ledger().find(|r| r.verdict != "equal")
    }

    pub fn all_equal(&self) -> bool {
        self.first_mismatch().is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig {
            field: "report".into(),
            reason: e.to_string(),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json() + "\n",
            Format::Markdown => self.to_markdown(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {} report\n\nschema version {}\n", self.command, self.schema_version);
        for s in &self.scenarios {
            out.push_str(&format!("\n## {} ({})\n\n", s.config.family.name(), s.label));
            if let Some(e) = &s.error {
                out.push_str(&format!("build failed: {e}\n\n"));
            }
            let summary = [
                ("volume", s.volume.as_ref().map(|v| v.to_string())),
                ("torsion order", s.torsion_order.as_ref().map(ValueRepr::display)),
                ("semiample multiple", s.semiample_multiple.as_ref().map(ValueRepr::display)),
                ("Cartier index estimate", s.cartier_index.as_ref().map(ValueRepr::display)),
                ("divergence witness", s.divergence_witness.as_ref().map(ValueRepr::display)),
            ];
            for (name, v) in summary {
                if let Some(v) = v {
                    out.push_str(&format!("- {name}: {v}\n"));
                }
            }
            if !s.coefficient_set.is_empty() {
                let set: Vec<String> = s.coefficient_set.iter().map(|q| q.to_string()).collect();
                out.push_str(&format!("- coefficient set: {{{}}}\n", set.join(", ")));
            }
            out.push_str("\n| claim | expected | computed | verdict | statement |\n|---|---|---|---|---|\n");
            for r in &s.ledger {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    r.claim_id,
                    r.expected.display(),
                    r.computed.display(),
                    r.verdict,
                    md_cell(&r.anchor)
                ));
            }
            if !s.positivity.is_empty() {
                out.push_str("\n| subject | verdict | criterion |\n|---|---|---|\n");
                for p in &s.positivity {
                    out.push_str(&format!(
                        "| {} | {:?} | {} |\n",
                        md_cell(&p.subject),
                        p.verdict,
                        md_cell(&p.criterion)
                    ));
                }
            }
        }
        if let Some(t) = &self.sweep {
            out.push_str(&format!(
                "\n## sweep: {}\n\n| n | torsion order | semiample multiple | Cartier index | divergence witness |\n|---|---|---|---|---|\n",
                t.family.name()
            ));
            for r in &t.rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    r.param,
                    r.torsion_order.display(),
                    r.semiample_multiple.display(),
                    r.cartier_index.display(),
                    r.divergence_witness.as_ref().map_or("n/a".into(), ValueRepr::display)
                ));
            }
        }
        out
    }

    /// Sweeps become one row per parameter; scenario reports one row per
    /// ledger claim followed by `info` rows for the summary values.
    pub fn to_csv(&self) -> String {
        if let Some(t) = &self.sweep {
            let mut out = String::from("param,torsion_order,semiample_multiple,cartier_index,divergence_witness\n");
            for r in &t.rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.param,
                    r.torsion_order.display(),
                    r.semiample_multiple.display(),
                    r.cartier_index.display(),
                    r.divergence_witness.as_ref().map_or("n/a".into(), ValueRepr::display)
                ));
            }
            return out;
        }
        let mut out = String::from("scenario,claim_id,expected,computed,verdict,anchor\n");
        for s in &self.scenarios {
            for r in &s.ledger {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_field(&s.label),
                    csv_field(&r.claim_id),
                    csv_field(&r.expected.display()),
                    csv_field(&r.computed.display()),
                    r.verdict,
                    csv_field(&r.anchor)
                ));
            }
            let summary = [
                ("volume", s.volume.as_ref().map(|v| v.to_string())),
                ("torsion_order", s.torsion_order.as_ref().map(ValueRepr::display)),
                ("semiample_multiple", s.semiample_multiple.as_ref().map(ValueRepr::display)),
                ("cartier_index", s.cartier_index.as_ref().map(ValueRepr::display)),
                ("divergence_witness", s.divergence_witness.as_ref().map(ValueRepr::display)),
            ];
            for (name, v) in summary {
                if let Some(v) = v {
                    out.push_str(&format!("{},{name},,{},info,\n", csv_field(&s.label), csv_field(&v)));
                }
            }
        }
        out
    }
}
