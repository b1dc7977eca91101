//! Picard lattices of blown-up surfaces.
//!
//! A [`SurfaceLattice`] is a free module on named basis classes with an exact
//! symmetric Gram matrix, a canonical class, a list of marked curves and the
//! record of how it was built. Blow-ups always happen at distinct points of
//! the current surface, so exceptional classes are mutually orthogonal and
//! orthogonal to everything that existed before.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curvecfg::{GroupElement, MarkedCurve};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::positivity::PositivityReport;
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Hyperplane,
    Fiber,
    Section,
    Exceptional,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub name: String,
    pub kind: BasisKind,
}

impl BasisLabel {
    pub fn new(name: impl Into<String>, kind: BasisKind) -> Self {
        BasisLabel {
            name: name.into(),
            kind,
        }
    }
}

/// A formal rational combination of basis classes. Absent labels have
/// coefficient zero; zero coefficients are never stored, so structural
/// equality is equality of classes.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    coeffs: BTreeMap<String, Rational>,
}

impl DivisorClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The class of a single basis label.
    pub fn basis(label: &str) -> Self {
        Self::term(label, int(1))
    }

    pub fn term(label: &str, coeff: Rational) -> Self {
        let mut c = Self::zero();
        c.add_term(label, coeff);
        c
    }

    pub fn from_terms<S: AsRef<str>>(terms: impl IntoIterator<Item = (S, Rational)>) -> Self {
        let mut c = Self::zero();
        for (label, q) in terms {
            c.add_term(label.as_ref(), q);
        }
        c
    }

    /// Integer-coefficient shorthand used heavily by the family builders.
    pub fn from_ints<S: AsRef<str>>(terms: impl IntoIterator<Item = (S, i64)>) -> Self {
        Self::from_terms(terms.into_iter().map(|(l, n)| (l, int(n))))
    }

    pub fn add_term(&mut self, label: &str, coeff: Rational) {
        let entry = self.coeffs.entry(label.to_string()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(label);
        }
    }

    pub fn coeff(&self, label: &str) -> Rational {
        self.coeffs.get(label).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        DivisorClass {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * q)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&int(n))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|q| q.is_integer())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> num_bigint::BigInt {
        rational::common_denominator(self.coeffs.values())
    }

    /// If `self == k * other` for a rational `k`, returns `k`.
    pub fn ratio_to(&self, other: &DivisorClass) -> Option<Rational> {
        let (label, q) = other.coeffs.iter().next()?;
        let k = self.coeff(label) / q;
        (other.scale(&k) == *self).then_some(k)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (label, q)) in self.coeffs.iter().enumerate() {
            let mag = q.abs();
            let sign = if q.is_negative() { "-" } else { "+" };
            match (i, q.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "{label}")?;
            } else if mag.is_integer() {
                write!(f, "{}{label}", rational::display(&mag))?;
            } else {
                write!(f, "({}){label}", rational::display(&mag))?;
            }
        }
        Ok(())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_term(k, v.clone());
        }
        out
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self + &(-rhs)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&int(-1))
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl Mul<DivisorClass> for Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scale(&self)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scale_int(self)
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale_int(self)
    }
}

impl<'a> std::iter::Sum<&'a DivisorClass> for DivisorClass {
    fn sum<I: Iterator<Item = &'a DivisorClass>>(iter: I) -> Self {
        iter.fold(DivisorClass::zero(), |acc, c| &acc + c)
    }
}

impl std::iter::Sum<DivisorClass> for DivisorClass {
    fn sum<I: Iterator<Item = DivisorClass>>(iter: I) -> Self {
        iter.fold(DivisorClass::zero(), |acc, c| &acc + &c)
    }
}

/// What the lattice was built from, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Construction {
    ProjectivePlane,
    RuledSurface { genus: u32, invariant: u32 },
    MarkCurve { name: String },
    BlowUp { label: String, incidences: Vec<(String, u32)> },
    Cover { degree: u32 },
}

/// The base surface a lattice was built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Plane,
    Ruled { genus: u32, invariant: u32 },
}

/// A point being blown up on a marked curve.
#[derive(Debug, Clone)]
pub struct Incidence {
    pub curve: String,
    pub multiplicity: i64,
    /// Class of `p - p0` in the curve's `Pic^0`; identity when absent.
    pub point: Option<GroupElement>,
}

impl Incidence {
    pub fn on(curve: &str) -> Self {
        Incidence {
            curve: curve.to_string(),
            multiplicity: 1,
            point: None,
        }
    }

    pub fn with_multiplicity(curve: &str, multiplicity: i64) -> Self {
        Incidence {
            curve: curve.to_string(),
            multiplicity,
            point: None,
        }
    }

    pub fn at(curve: &str, point: GroupElement) -> Self {
        Incidence {
            curve: curve.to_string(),
            multiplicity: 1,
            point: Some(point),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceLattice {
    basis: Vec<BasisLabel>,
    index: HashMap<String, usize>,
    gram: Matrix,
    canonical: DivisorClass,
    marked: Vec<MarkedCurve>,
    history: Vec<Construction>,
    cover_degree: u32,
}

impl SurfaceLattice {
    fn from_parts(basis: Vec<BasisLabel>, gram: Matrix, canonical: DivisorClass, base: Construction) -> Self {
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.name.clone(), i))
            .collect();
        SurfaceLattice {
            basis,
            index,
            gram,
            canonical,
            marked: Vec::new(),
            history: vec![base],
            cover_degree: 1,
        }
    }

    /// `P^2`: basis `[H]`, `H^2 = 1`, `K = -3H`.
    pub fn projective_plane() -> Self {
        Self::from_parts(
            vec![BasisLabel::new("H", BasisKind::Hyperplane)],
            vec![vec![int(1)]],
            DivisorClass::term("H", int(-3)),
            Construction::ProjectivePlane,
        )
    }

    /// Ruled surface over a genus `g` curve with invariant `d`: basis
    /// `[C-, F]` with `(C-)^2 = -d`, `C-.F = 1`, `F^2 = 0` and
    /// `K = -2C- + (2g - 2 - d)F`.
    pub fn ruled_surface(genus: u32, invariant: u32) -> Self {
        let d = i64::from(invariant);
        let g = i64::from(genus);
        Self::from_parts(
            vec![
                BasisLabel::new("C-", BasisKind::Section),
                BasisLabel::new("F", BasisKind::Fiber),
            ],
            vec![vec![int(-d), int(1)], vec![int(1), int(0)]],
            DivisorClass::from_ints([("C-", -2), ("F", 2 * g - 2 - d)]),
            Construction::RuledSurface { genus, invariant },
        )
    }

    pub fn base(&self) -> Base {
        match self.history[0] {
            Construction::RuledSurface { genus, invariant } => Base::Ruled { genus, invariant },
            _ => Base::Plane,
        }
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn history(&self) -> &[Construction] {
        &self.history
    }

    pub fn marked_curves(&self) -> &[MarkedCurve] {
        &self.marked
    }

    /// Degree of the finite cover this lattice was scaled by (1 if none).
    pub fn cover_degree(&self) -> u32 {
        self.cover_degree
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn label_kind(&self, label: &str) -> Result<BasisKind> {
        self.index
            .get(label)
            .map(|&i| self.basis[i].kind)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn exceptional_labels(&self) -> impl Iterator<Item = &str> {
        self.basis
            .iter()
            .filter(|b| b.kind == BasisKind::Exceptional)
            .map(|b| b.name.as_str())
    }

    /// The class of a basis label, checked against this lattice.
    pub fn class(&self, label: &str) -> Result<DivisorClass> {
        self.label_kind(label)?;
        Ok(DivisorClass::basis(label))
    }

    /// Sum of the classes of several basis labels.
    pub fn sum_of<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<DivisorClass> {
        labels
            .into_iter()
            .map(|l| self.class(l.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(|v: Vec<DivisorClass>| v.into_iter().sum())
    }

    pub fn check(&self, d: &DivisorClass) -> Result<()> {
        for label in d.support() {
            if !self.index.contains_key(label) {
                return Err(Error::UnknownLabel(label.to_string()));
            }
        }
        Ok(())
    }

    /// Total transform of a class from an earlier stage of the construction:
    /// the same coefficients, zero on the newer exceptional labels.
    pub fn total_transform(&self, d: &DivisorClass) -> Result<DivisorClass> {
        self.check(d)?;
        Ok(d.clone())
    }

    /// Current (strict transform) class of a marked curve.
    pub fn strict_transform(&self, curve: &str) -> Result<DivisorClass> {
        Ok(self.curve(curve)?.class.clone())
    }

    pub fn curve(&self, name: &str) -> Result<&MarkedCurve> {
        self.marked
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    /// Exact pairing `D1^T G D2`.
    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
        let mut total = Rational::zero();
        for (a, qa) in d1.terms() {
            let i = *self
                .index
                .get(a)
                .ok_or_else(|| Error::UnknownLabel(a.to_string()))?;
            for (b, qb) in d2.terms() {
                let j = *self
                    .index
                    .get(b)
                    .ok_or_else(|| Error::UnknownLabel(b.to_string()))?;
                let g = &self.gram[i][j];
                if !g.is_zero() {
                    total += qa * qb * g;
                }
            }
        }
        Ok(total)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Result<Rational> {
        self.intersect(d, d)
    }

    /// Gram matrix of a list of classes.
    pub fn gram_of(&self, classes: &[DivisorClass]) -> Result<Matrix> {
        classes
            .iter()
            .map(|a| classes.iter().map(|b| self.intersect(a, b)).collect())
            .collect()
    }

    pub fn is_negative_definite(&self, classes: &[DivisorClass]) -> Result<bool> {
        if classes.is_empty() {
            return Err(Error::Empty("class list"));
        }
        Ok(linalg::is_negative_definite(&self.gram_of(classes)?))
    }

    /// Adds a marked curve (on the base surface or any later stage).
    pub fn mark_curve(&self, curve: MarkedCurve) -> Result<Self> {
        if self.marked.iter().any(|c| c.name == curve.name) {
            return Err(Error::DuplicateCurve(curve.name));
        }
        self.check(&curve.class)?;
        let mut out = self.clone();
        out.history.push(Construction::MarkCurve {
            name: curve.name.clone(),
        });
        out.marked.push(curve);
        Ok(out)
    }

    /// Blows up one point. The new label `E` gets `E^2 = -1`, orthogonal to
    /// all older labels, `K` gains `+E`, and every incident marked curve
    /// passes to its strict transform `C - mE`.
    pub fn blow_up(&self, label: &str, incidences: &[Incidence]) -> Result<Self> {
        if self.index.contains_key(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        if self.cover_degree != 1 {
            return Err(Error::WrongShape("cannot blow up a scaled cover lattice".into()));
        }
        for inc in incidences {
            if inc.multiplicity < 0 {
                return Err(Error::NegativeMultiplicity {
                    curve: inc.curve.clone(),
                    multiplicity: inc.multiplicity,
                });
            }
            let curve = self.curve(&inc.curve)?;
            let is_exceptional_curve = curve.class.terms().count() == 1
                && curve.class.terms().all(|(l, q)| {
                    q.is_one() && self.label_kind(l).ok() == Some(BasisKind::Exceptional)
                });
            if is_exceptional_curve && inc.multiplicity > 0 {
                return Err(Error::InfinitelyNear(inc.curve.clone()));
            }
            if inc.point.is_some() && curve.restriction.is_none() {
                return Err(Error::NoRestrictionGroup(inc.curve.clone()));
            }
        }

        let mut out = self.clone();
        let n = out.basis.len();
        for row in out.gram.iter_mut() {
            row.push(Rational::zero());
        }
        let mut new_row = vec![Rational::zero(); n + 1];
        new_row[n] = int(-1);
        out.gram.push(new_row);
        out.basis.push(BasisLabel::new(label, BasisKind::Exceptional));
        out.index.insert(label.to_string(), n);
        out.canonical.add_term(label, int(1));

        let mut record = Vec::new();
        for inc in incidences {
            let m = inc.multiplicity;
            record.push((inc.curve.clone(), m as u32));
            if m == 0 {
                continue;
            }
            let curve = out
                .marked
                .iter_mut()
                .find(|c| c.name == inc.curve)
                .expect("checked above");
            curve.class.add_term(label, int(-m));
            curve.points.insert(label.to_string(), m as u32);
            if let Some(res) = curve.restriction.as_mut() {
                let point = match &inc.point {
                    Some(p) => {
                        if !res.group.contains(p) {
                            return Err(Error::GroupMismatch);
                        }
                        p.clone()
                    }
                    None => res.group.identity(),
                };
                res.point_map.insert(label.to_string(), point);
            }
        }
        out.history.push(Construction::BlowUp {
            label: label.to_string(),
            incidences: record,
        });
        Ok(out)
    }

    /// Volume of a nef and big class: its self-intersection. Requires a
    /// report certifying (at least) nefness of `d` itself.
    pub fn volume_nef_big(&self, d: &DivisorClass, nef_evidence: &PositivityReport) -> Result<Rational> {
        if nef_evidence.subject != *d {
            return Err(Error::Evidence("report subject differs from the class".into()));
        }
        if !nef_evidence.verdict.implies_nef() {
            return Err(Error::Evidence(format!(
                "verdict `{:?}` does not certify nefness",
                nef_evidence.verdict
            )));
        }
        let vol = self.self_intersection(d)?;
        if !vol.is_positive() {
            return Err(Error::Evidence(format!(
                "self-intersection {} is not positive",
                rational::display(&vol)
            )));
        }
        Ok(vol)
    }

    /// Numerical model of pulling back along a degree `n` finite cover:
    /// the intersection form is multiplied by `n`, labels and classes are
    /// kept. Ramification corrections are the caller's business.
    pub fn scale_cover(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroCoverDegree);
        }
        let mut out = self.clone();
        let factor = int(i64::from(n));
        for row in out.gram.iter_mut() {
            for g in row.iter_mut() {
                *g *= &factor;
            }
        }
        out.cover_degree *= n;
        out.history.push(Construction::Cover { degree: n });
        Ok(out)
    }

    /// Overwrites a symmetric pair of Gram entries. Only meant for fault
    /// injection in verification harnesses.
    pub fn with_gram_entry(&self, a: &str, b: &str, value: Rational) -> Result<Self> {
        let i = *self.index.get(a).ok_or_else(|| Error::UnknownLabel(a.into()))?;
        let j = *self.index.get(b).ok_or_else(|| Error::UnknownLabel(b.into()))?;
        let mut out = self.clone();
        out.gram[i][j] = value.clone();
        out.gram[j][i] = value;
        Ok(out)
    }
}
