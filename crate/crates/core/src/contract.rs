//! Numerical contraction of a negative definite configuration of marked
//! curves: pullbacks, pushforward intersections, log discrepancies and the
//! index computations that only need the restriction to contracted
//! elliptic curves.

use std::collections::BTreeMap;
use std::sync::RwLock;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::curvecfg::{restrict, triviality_order, Order};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::linalg;
use crate::positivity::PositivityReport;
use crate::rational::{self, Rational};

#[derive(Debug)]
pub struct Contraction {
    upstairs: SurfaceLattice,
    names: Vec<String>,
    classes: Vec<DivisorClass>,
    gram: linalg::Matrix,
    cache: Option<RwLock<BTreeMap<DivisorClass, Vec<Rational>>>>,
}

impl Clone for Contraction {
    fn clone(&self) -> Self {
        let cache = self.cache.as_ref().map(|c| {
            RwLock::new(c.read().map(|m| m.clone()).unwrap_or_default())
        });
        Contraction {
            upstairs: self.upstairs.clone(),
            names: self.names.clone(),
            classes: self.classes.clone(),
            gram: self.gram.clone(),
            cache,
        }
    }
}

impl Contraction {
    /// Contracts the named marked curves. Fails unless their Gram matrix is
    /// negative definite.
    pub fn new<S: AsRef<str>>(s: &SurfaceLattice, curves: &[S]) -> Result<Self> {
        let names: Vec<String> = curves.iter().map(|c| c.as_ref().to_string()).collect();
        let classes = names
            .iter()
            .map(|n| s.strict_transform(n))
            .collect::<Result<Vec<_>>>()?;
        if !s.is_negative_definite(&classes)? {
            return Err(Error::NotNegativeDefinite(names.join(", ")));
        }
        let gram = s.gram_of(&classes)?;
        Ok(Contraction {
            upstairs: s.clone(),
            names,
            classes,
            gram,
            cache: Some(RwLock::new(BTreeMap::new())),
        })
    }

    /// Same contraction without memoisation of solved pullbacks.
    pub fn uncached(mut self) -> Self {
        self.cache = None;
        self
    }

    pub fn upstairs(&self) -> &SurfaceLattice {
        &self.upstairs
    }

    pub fn curve_names(&self) -> &[String] {
        &self.names
    }

    pub fn curve_classes(&self) -> &[DivisorClass] {
        &self.classes
    }

    /// Snapshot of the memoised `(strict class, b_j)` pairs.
    pub fn cached(&self) -> Vec<(DivisorClass, Vec<Rational>)> {
        match &self.cache {
            Some(c) => c
                .read()
                .map(|m| m.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
                .unwrap_or_default(),
            None => Vec::new(),
        }
    }

    /// Coefficients `b_j` with `(D + sum b_j E_j).E_k = 0` for every `k`.
    pub fn pullback_coefficients(&self, d: &DivisorClass) -> Result<Vec<Rational>> {
        if let Some(cache) = &self.cache {
            if let Some(b) = cache.read().ok().and_then(|m| m.get(d).cloned()) {
                return Ok(b);
            }
        }
        let rhs = self
            .classes
            .iter()
            .map(|e| self.upstairs.intersect(d, e).map(|v| -v))
            .collect::<Result<Vec<_>>>()?;
        let b = linalg::solve(&self.gram, &rhs)?;
        if let Some(cache) = &self.cache {
            if let Ok(mut m) = cache.write() {
                m.insert(d.clone(), b.clone());
            }
        }
        Ok(b)
    }

    pub fn numerical_pullback(&self, d: &DivisorClass) -> Result<DivisorClass> {
        let b = self.pullback_coefficients(d)?;
        Ok(self
            .classes
            .iter()
            .zip(&b)
            .fold(d.clone(), |acc, (e, bj)| &acc + &e.scale(bj)))
    }

    /// Intersection of the pushforwards, computed upstairs on pullbacks.
    pub fn pushforward_intersection(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
        let p1 = self.numerical_pullback(d1)?;
        let p2 = self.numerical_pullback(d2)?;
        self.upstairs.intersect(&p1, &p2)
    }

    fn elliptic_curves(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str).filter(|n| {
            self.upstairs
                .curve(n)
                .map(|c| c.genus == 1)
                .unwrap_or(false)
        })
    }

    /// Upstairs class `K_Y + B + M'` and its pullback, together with the
    /// log discrepancy of every contracted curve.
    pub fn log_discrepancies(&self, boundary: &[(String, Rational)], m: &DivisorClass) -> Result<DiscrepancyTable> {
        let s = &self.upstairs;
        s.check(m)?;
        let mut class = s.canonical().clone();
        for (name, c) in boundary {
            if c.is_negative() || *c > Rational::one() {
                return Err(Error::Precondition(format!(
                    "boundary coefficient {} of `{name}` is outside [0, 1]",
                    rational::display(c)
                )));
            }
            class = &class + &s.strict_transform(name)?.scale(c);
        }
        class = &class + m;
        let b = self.pullback_coefficients(&class)?;
        let pullback = self.numerical_pullback(&class)?;
        let mut entries = Vec::new();
        for (name, bj) in self.names.iter().zip(&b) {
            let own: Rational = boundary
                .iter()
                .filter(|(n, _)| n == name)
                .map(|(_, c)| c.clone())
                .sum();
            entries.push(DiscrepancyEntry {
                curve: name.clone(),
                multiplicity: bj + own.clone(),
                discrepancy: Rational::one() - bj - own,
            });
        }
        let class_kind = if entries.iter().all(|e| e.discrepancy.is_positive()) {
            GlcClass::Klt
        } else if entries.iter().all(|e| !e.discrepancy.is_negative()) {
            GlcClass::Lc
        } else {
            GlcClass::NotLc
        };
        Ok(DiscrepancyTable {
            entries,
            classification: class_kind,
            upstairs: class,
            pullback,
        })
    }

    /// Least `m` such that `m L` restricts trivially to every contracted
    /// elliptic curve. `nef` must certify nefness of `l`.
    pub fn semiample_multiple(&self, l: &DivisorClass, nef: &PositivityReport) -> Result<Order> {
        if nef.subject != *l || !nef.verdict.implies_nef() {
            return Err(Error::Evidence("no nef certificate for the class".into()));
        }
        for (name, e) in self.names.iter().zip(&self.classes) {
            if !self.upstairs.intersect(l, e)?.is_zero() {
                return Err(Error::NotOrthogonal(name.clone()));
            }
        }
        let mut m = Order::Finite(1);
        for name in self.elliptic_curves() {
            m = m.lcm(triviality_order(&restrict(&self.upstairs, l, name)?));
        }
        Ok(m)
    }

    /// Least `l` with `l * pullback(D)` integral and restricting trivially to
    /// every contracted elliptic curve.
    pub fn cartier_index_estimate(&self, d: &DivisorClass) -> Result<Order> {
        let b = self.pullback_coefficients(d)?;
        let p = self.numerical_pullback(d)?;
        let den = rational::common_denominator(b.iter().chain(p.terms().map(|(_, q)| q)));
        let den_i = den.to_i64().ok_or(Error::BoundExceeded(i64::MAX as u64))?;
        let integral = p.scale_int(den_i);
        let mut t = Order::Finite(1);
        for name in self.elliptic_curves() {
            t = t.lcm(triviality_order(&restrict(&self.upstairs, &integral, name)?));
        }
        Ok(match t {
            Order::Finite(t) => Order::Finite(t * den_i as u64),
            Order::Infinite => Order::Infinite,
        })
    }

    /// Assembles a generalised pair after checking the evidence for it.
    pub fn glc_assemble(
        &self,
        boundary: &[(String, Rational)],
        m: &DivisorClass,
        nef: &PositivityReport,
        ample: &PositivityReport,
    ) -> Result<GlcPair> {
        if nef.subject != *m || !nef.verdict.implies_nef() {
            return Err(Error::Evidence("moduli part lacks a nef certificate".into()));
        }
        let table = self.log_discrepancies(boundary, m)?;
        if table.classification == GlcClass::NotLc {
            let worst = table
                .entries
                .iter()
                .find(|e| e.discrepancy.is_negative())
                .map(|e| e.curve.clone())
                .unwrap_or_default();
            return Err(Error::NotLogCanonical(worst));
        }
        let certified = ample.verdict.implies_ample()
            && ample
                .subject
                .ratio_to(&table.pullback)
                .is_some_and(|k| k.is_positive());
        if !certified {
            return Err(Error::Evidence("no ampleness certificate for K + B + M".into()));
        }
        let volume = self.upstairs.self_intersection(&table.pullback)?;
        Ok(GlcPair {
            contraction: self.clone(),
            boundary: boundary.to_vec(),
            moduli: m.clone(),
            nef_report: nef.clone(),
            ample_report: ample.clone(),
            discrepancies: table,
            volume,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlcClass {
    Klt,
    Lc,
    NotLc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyEntry {
    pub curve: String,
    pub multiplicity: Rational,
    pub discrepancy: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyTable {
    pub entries: Vec<DiscrepancyEntry>,
    pub classification: GlcClass,
    /// `K_Y + B + M'` before correction.
    pub upstairs: DivisorClass,
    pub pullback: DivisorClass,
}

impl DiscrepancyTable {
    pub fn get(&self, curve: &str) -> Option<&Rational> {
        self.entries
            .iter()
            .find(|e| e.curve == curve)
            .map(|e| &e.discrepancy)
    }
}

#[derive(Debug, Clone)]
pub struct GlcPair {
    pub contraction: Contraction,
    pub boundary: Vec<(String, Rational)>,
    pub moduli: DivisorClass,
    pub nef_report: PositivityReport,
    pub ample_report: PositivityReport,
    pub discrepancies: DiscrepancyTable,
    pub volume: Rational,
}

impl GlcPair {
    /// Distinct nonzero-or-zero boundary coefficients, sorted.
    pub fn coefficient_set(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.boundary.iter().map(|(_, c)| c.clone()).collect();
        out.push(Rational::zero());
        out.sort();
        out.dedup();
        out
    }
}
