//! Marked curves, point configurations on them, and restriction of divisor
//! classes to elliptic curves.
//!
//! `Pic^0` of an elliptic curve is modelled as an abstract group
//! `Z^free_rank + Z/n_1 + ... + Z/n_k`. A blown-up point `p` on a marked
//! curve carries the element `p - p0`, where `p0` is the group identity and
//! the hyperplane class restricts to `e * p0` on a plane curve of degree `e`.
//! Restricting `L` to the curve gives `(L.C, sum_j coeff_j(L) * (p_j - p0))`
//! over the exceptional labels `E_j` lying over points of the curve.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion_orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion_orders: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = torsion_orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidConfig {
                field: "torsion_orders".into(),
                reason: format!("order {bad} is below 2"),
            });
        }
        Ok(AbelianGroup {
            free_rank,
            torsion_orders,
        })
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion_orders: Vec::new(),
        }
    }

    /// `Z/n`; the trivial group for `n == 1`.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        if n == 1 {
            Self::trivial()
        } else {
            AbelianGroup {
                free_rank: 0,
                torsion_orders: vec![n],
            }
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion_orders: Vec::new(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion_orders.len()],
        }
    }

    pub fn element(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<GroupElement> {
        if free.len() != self.free_rank || torsion.len() != self.torsion_orders.len() {
            return Err(Error::GroupMismatch);
        }
        let torsion = torsion
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&t, &n)| t.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement {
            group: self.clone(),
            free,
            torsion,
        })
    }

    /// Generator of the `j`-th torsion summand.
    pub fn torsion_generator(&self, j: usize) -> GroupElement {
        let mut e = self.identity();
        e.torsion[j] = 1 % self.torsion_orders[j];
        e
    }

    pub fn free_generator(&self, j: usize) -> GroupElement {
        let mut e = self.identity();
        e.free[j] = 1;
        e
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.group == *self
    }

    /// Least common multiple of the torsion orders.
    pub fn exponent(&self) -> u64 {
        self.torsion_orders.iter().fold(1, |acc, &n| acc.lcm(&n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: AbelianGroup,
    free: Vec<i64>,
    torsion: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn free_coords(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion_coords(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&t| t == 0)
    }

    pub fn has_free_part(&self) -> bool {
        self.free.iter().any(|&x| x != 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElement {
            group: self.group.clone(),
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .zip(&self.group.torsion_orders)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        })
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        GroupElement {
            group: self.group.clone(),
            free: self.free.iter().map(|x| x * k).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&self.group.torsion_orders)
                .map(|(&t, &n)| ((i128::from(t) * i128::from(k)).rem_euclid(i128::from(n))) as u64)
                .collect(),
        }
    }

    pub fn neg(&self) -> GroupElement {
        self.scale(-1)
    }

    /// Smallest `m >= 1` with `m x = 0`.
    pub fn order(&self) -> Order {
        if self.has_free_part() {
            return Order::Infinite;
        }
        Order::Finite(
            self.torsion
                .iter()
                .zip(&self.group.torsion_orders)
                .map(|(&t, &n)| n / t.gcd(&n))
                .fold(1, |acc, o| acc.lcm(&o)),
        )
    }
}

/// Order of a group element, or of the restriction of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// Least common multiple, absorbing `Infinite`.
    pub fn lcm(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.lcm(&b)),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Restriction data of an elliptic marked curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRestriction {
    pub group: AbelianGroup,
    /// Exceptional label -> class of `p - p0` of the blown-up point.
    pub point_map: BTreeMap<String, GroupElement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkedCurve {
    pub name: String,
    /// Current class (strict transform after blow-ups).
    pub class: DivisorClass,
    pub genus: u32,
    /// Degree `e` of the plane model, when there is one.
    pub plane_degree: Option<u32>,
    /// Exceptional labels over points of this curve, with multiplicity.
    pub points: BTreeMap<String, u32>,
    pub restriction: Option<CurveRestriction>,
}

impl MarkedCurve {
    pub fn new(name: &str, class: DivisorClass, genus: u32) -> Self {
        MarkedCurve {
            name: name.to_string(),
            class,
            genus,
            plane_degree: None,
            points: BTreeMap::new(),
            restriction: None,
        }
    }

    /// A degree `e` plane curve, class `eH`.
    pub fn plane_curve(name: &str, degree: u32, genus: u32) -> Self {
        let mut c = Self::new(name, DivisorClass::term("H", int(i64::from(degree))), genus);
        c.plane_degree = Some(degree);
        c
    }

    pub fn with_plane_degree(mut self, e: u32) -> Self {
        self.plane_degree = Some(e);
        self
    }

    /// Attaches a `Pic^0` model. Only elliptic curves carry one.
    pub fn with_restriction(mut self, group: AbelianGroup) -> Result<Self> {
        if self.genus != 1 {
            return Err(Error::WrongShape(format!(
                "curve `{}` has genus {}, restriction groups need genus 1",
                self.name, self.genus
            )));
        }
        self.restriction = Some(CurveRestriction {
            group,
            point_map: BTreeMap::new(),
        });
        Ok(self)
    }

    /// `e^2 - sum m_j^2`, the expected self-intersection of the strict
    /// transform of a plane curve.
    pub fn expected_self_intersection(&self) -> Option<Rational> {
        let e = i64::from(self.plane_degree?);
        let loss: i64 = self.points.values().map(|&m| i64::from(m).pow(2)).sum();
        Some(int(e * e - loss))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionClass {
    pub degree: i64,
    pub element: GroupElement,
}

impl RestrictionClass {
    pub fn is_trivial(&self) -> bool {
        self.degree == 0 && self.element.is_identity()
    }

    pub fn add(&self, other: &RestrictionClass) -> Result<RestrictionClass> {
        Ok(RestrictionClass {
            degree: self.degree + other.degree,
            element: self.element.add(&other.element)?,
        })
    }
}

/// Restriction of an integral class to an elliptic marked curve.
pub fn restrict(s: &SurfaceLattice, l: &DivisorClass, curve: &str) -> Result<RestrictionClass> {
    let c = s.curve(curve)?;
    let res = c
        .restriction
        .as_ref()
        .ok_or_else(|| Error::NoRestrictionGroup(curve.to_string()))?;
    for (label, q) in l.terms() {
        if !q.is_integer() {
            return Err(Error::NonIntegral {
                label: label.to_string(),
                value: rational::display(q),
            });
        }
    }
    let degree = s.intersect(l, &c.class)?;
    let degree = rational::to_i64(&degree).ok_or_else(|| Error::NonIntegral {
        label: curve.to_string(),
        value: rational::display(&degree),
    })?;
    let mut element = res.group.identity();
    for label in c.points.keys() {
        let coeff = l.coeff(label);
        if coeff == int(0) {
            continue;
        }
        let point = res.point_map.get(label).ok_or_else(|| Error::MissingPoint {
            curve: curve.to_string(),
            label: label.clone(),
        })?;
        let k = rational::to_i64(&coeff).ok_or_else(|| Error::NonIntegral {
            label: label.clone(),
            value: rational::display(&coeff),
        })?;
        element = element.add(&point.scale(k))?;
    }
    Ok(RestrictionClass { degree, element })
}

/// Least `m >= 1` making `m * rc` trivial.
pub fn triviality_order(rc: &RestrictionClass) -> Order {
    if rc.degree != 0 {
        return Order::Infinite;
    }
    rc.element.order()
}
