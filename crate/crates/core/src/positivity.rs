//! Sufficient criteria for (very) ampleness on blow-ups of `P^2` and of
//! ruled surfaces, nefness against a declared curve list, and Nakai-style
//! ampleness certificates from ample-plus-effective decompositions.
//!
//! Every criterion here is sufficient only. When its hypotheses fail the
//! verdict is [`Verdict::Inconclusive`], never "not ample".

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Base, BasisKind, DivisorClass, SurfaceLattice};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    VeryAmple,
    Ample,
    Nef,
    Inconclusive,
    Violated,
}

impl Verdict {
    pub fn implies_ample(self) -> bool {
        matches!(self, Verdict::VeryAmple | Verdict::Ample)
    }

    pub fn implies_nef(self) -> bool {
        matches!(self, Verdict::VeryAmple | Verdict::Ample | Verdict::Nef)
    }
}

/// One exact number backing a verdict. When `against` is set, `value` is
/// the intersection of the subject with that class.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub what: String,
    pub against: Option<DivisorClass>,
    pub value: Rational,
}

impl Witness {
    fn number(what: impl Into<String>, value: Rational) -> Self {
        Witness {
            what: what.into(),
            against: None,
            value,
        }
    }

    fn degree(what: impl Into<String>, against: DivisorClass, value: Rational) -> Self {
        Witness {
            what: what.into(),
            against: Some(against),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub subject: DivisorClass,
    pub verdict: Verdict,
    pub criterion: String,
    pub witnesses: Vec<Witness>,
    /// Terms of the decomposition used, `(name, coefficient)`.
    pub decomposition: Vec<(String, Rational)>,
    pub notes: Vec<String>,
}

impl PositivityReport {
    fn new(subject: &DivisorClass, criterion: &str) -> Self {
        PositivityReport {
            subject: subject.clone(),
            verdict: Verdict::Inconclusive,
            criterion: criterion.to_string(),
            witnesses: Vec::new(),
            decomposition: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn witness(&self, what: &str) -> Option<&Rational> {
        self.witnesses.iter().find(|w| w.what == what).map(|w| &w.value)
    }

    /// Recomputes every intersection witness from the Gram matrix.
    pub fn recheck(&self, s: &SurfaceLattice) -> Result<bool> {
        for w in &self.witnesses {
            if let Some(c) = &w.against {
                if s.intersect(&self.subject, c)? != w.value {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn integer_coeff(l: &DivisorClass, label: &str) -> Result<i64> {
    let q = l.coeff(label);
    rational::to_i64(&q).ok_or_else(|| Error::NonIntegral {
        label: label.to_string(),
        value: rational::display(&q),
    })
}

/// Reads `L = dH - sum m_i E_i` on a blow-up of `P^2`; only labels with a
/// nonzero coefficient are returned, and all of them must have `m_i > 0`.
fn plane_shape(s: &SurfaceLattice, l: &DivisorClass) -> Result<(i64, Vec<(String, i64)>)> {
    if s.base() != Base::Plane {
        return Err(Error::WrongShape("expected a blow-up of P^2".into()));
    }
    s.check(l)?;
    let d = integer_coeff(l, "H")?;
    if d <= 0 {
        return Err(Error::Precondition(format!("d = {d} must be positive")));
    }
    let mut mults = Vec::new();
    for (label, _) in l.terms() {
        if s.label_kind(label)? != BasisKind::Exceptional {
            continue;
        }
        let m = -integer_coeff(l, label)?;
        if m <= 0 {
            return Err(Error::Precondition(format!(
                "multiplicity at `{label}` is {m}, must be positive"
            )));
        }
        mults.push((label.to_string(), m));
    }
    Ok((d, mults))
}

fn require_on_curve(s: &SurfaceLattice, curve: &str, mults: &[(String, i64)]) -> Result<u32> {
    let c = s.curve(curve)?;
    for (label, _) in mults {
        if !c.points.contains_key(label) {
            return Err(Error::Precondition(format!(
                "point `{label}` is not on curve `{curve}`"
            )));
        }
    }
    c.plane_degree
        .ok_or_else(|| Error::WrongShape(format!("curve `{curve}` has no plane degree")))
}

/// `L = dH - sum m_i E_i` is very ample when `d >= 1 + sum m_i`.
pub fn very_ample_p2_blowup(s: &SurfaceLattice, l: &DivisorClass) -> Result<PositivityReport> {
    let (d, mults) = plane_shape(s, l)?;
    let bound = 1 + mults.iter().map(|(_, m)| m).sum::<i64>();
    let mut rep = PositivityReport::new(l, "plane blow-up: d >= 1 + sum m_i");
    rep.witnesses.push(Witness::number("d", int(d)));
    rep.witnesses.push(Witness::number("1 + sum m_i", int(bound)));
    if d >= bound {
        rep.verdict = Verdict::VeryAmple;
    }
    Ok(rep)
}

/// Points on a plane curve `C` of degree `e`: `L` is ample when `L.C > 0`
/// and `d` exceeds the sum of any `e` multiplicities.
pub fn ample_points_on_curve(s: &SurfaceLattice, l: &DivisorClass, curve: &str) -> Result<PositivityReport> {
    let (d, mut mults) = plane_shape(s, l)?;
    let e = require_on_curve(s, curve, &mults)?;
    let strict = s.strict_transform(curve)?;
    let lf = s.intersect(l, &strict)?;
    mults.sort_by(|a, b| b.1.cmp(&a.1));
    let top: i64 = mults.iter().take(e as usize).map(|(_, m)| m).sum();

    let mut rep = PositivityReport::new(l, "points on a plane curve: L.C > 0 and d > sum of e largest m_i");
    rep.witnesses.push(Witness::degree(format!("L.{curve}"), strict, lf.clone()));
    rep.witnesses.push(Witness::number("d", int(d)));
    rep.witnesses.push(Witness::number("sum of e largest m_i", int(top)));
    rep.notes.push(format!("L.C read as e*d - sum m_i with e = {e}"));
    if e != 3 {
        rep.notes.push("e != 3: relies on the e*d reading of the curve degree condition".into());
    }
    if lf.is_positive() && d > top {
        rep.verdict = Verdict::Ample;
    }
    Ok(rep)
}

/// `L = dH - m sum_{i<=r} E_i` with all points on a degree `e` curve is very
/// ample when `(d + 3)e > r(m + 1)` and `r >= e^2 + 2`.
pub fn very_ample_equal_mult(s: &SurfaceLattice, l: &DivisorClass, curve: &str, m: i64) -> Result<PositivityReport> {
    let (d, mults) = plane_shape(s, l)?;
    if let Some((label, other)) = mults.iter().find(|(_, mi)| *mi != m) {
        return Err(Error::Precondition(format!(
            "unequal multiplicities: `{label}` has {other}, expected {m}"
        )));
    }
    let e = i64::from(require_on_curve(s, curve, &mults)?);
    let r = mults.len() as i64;
    let lhs = (d + 3) * e;
    let rhs = r * (m + 1);
    let mut rep = PositivityReport::new(l, "equal multiplicities on a plane curve: (d+3)e > r(m+1), r >= e^2 + 2");
    rep.witnesses.push(Witness::number("(d+3)e", int(lhs)));
    rep.witnesses.push(Witness::number("r(m+1)", int(rhs)));
    rep.witnesses.push(Witness::number("r", int(r)));
    rep.witnesses.push(Witness::number("e^2 + 2", int(e * e + 2)));
    if lhs > rhs && r >= e * e + 2 {
        rep.verdict = Verdict::VeryAmple;
    }
    Ok(rep)
}

/// `L = aC- + bF - sum m_i E_i` on a blown-up ruled surface is very ample
/// when `b >= a d + 2g + 1 + sum m_i` and `a - sum_{i in G} m_i >= 1` for
/// every group `G` of blown-up points sharing a fiber. Points not listed in
/// `fiber_groups` sit on their own fibers.
pub fn very_ample_ruled_blowup(
    s: &SurfaceLattice,
    l: &DivisorClass,
    fiber_groups: &[Vec<String>],
) -> Result<PositivityReport> {
    let Base::Ruled { genus, invariant } = s.base() else {
        return Err(Error::WrongShape("expected a blow-up of a ruled surface".into()));
    };
    s.check(l)?;
    let a = integer_coeff(l, "C-")?;
    let b = integer_coeff(l, "F")?;
    if a <= 0 || b <= 0 {
        return Err(Error::Precondition(format!("a = {a}, b = {b} must be positive")));
    }
    let mut mults = Vec::new();
    for label in s.exceptional_labels() {
        let c = integer_coeff(l, label)?;
        if c > 0 {
            return Err(Error::Precondition(format!(
                "multiplicity at `{label}` is {}, must be positive",
                -c
            )));
        }
        if c < 0 {
            mults.push((label.to_string(), -c));
        }
    }
    let mult_of = |label: &str| mults.iter().find(|(l, _)| l == label).map_or(0, |(_, m)| *m);

    let mut groups: Vec<Vec<String>> = Vec::new();
    for g in fiber_groups {
        for label in g {
            if s.label_kind(label)? != BasisKind::Exceptional {
                return Err(Error::Precondition(format!("`{label}` is not an exceptional label")));
            }
        }
        groups.push(g.clone());
    }
    for (label, _) in &mults {
        if !groups.iter().any(|g| g.contains(label)) {
            groups.push(vec![label.clone()]);
        }
    }

    let d = i64::from(invariant);
    let g = i64::from(genus);
    let bound = a * d + 2 * g + 1 + mults.iter().map(|(_, m)| m).sum::<i64>();
    let mut rep = PositivityReport::new(l, "ruled blow-up: b >= ad + 2g + 1 + sum m_i, fiber condition");
    rep.witnesses.push(Witness::number("b", int(b)));
    rep.witnesses.push(Witness::number("ad + 2g + 1 + sum m_i", int(bound)));
    let mut fibers_ok = true;
    for group in &groups {
        let slack = a - group.iter().map(|l| mult_of(l)).sum::<i64>();
        let fiber = group.iter().fold(DivisorClass::basis("F"), |acc, l| {
            if mult_of(l) > 0 {
                &acc - &DivisorClass::basis(l)
            } else {
                acc
            }
        });
        rep.witnesses.push(Witness::degree(
            format!("L.(F - sum E over [{}])", group.join(",")),
            fiber,
            int(slack),
        ));
        fibers_ok &= slack >= 1;
    }
    if b >= bound && fibers_ok {
        rep.verdict = Verdict::VeryAmple;
    }
    Ok(rep)
}

/// `L = scale * ample.subject + sum c_i C_i` with `scale > 0`, `c_i >= 0`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub ample: PositivityReport,
    pub scale: Rational,
    pub effective: Vec<(String, Rational)>,
}

impl Decomposition {
    pub fn new(ample: PositivityReport, scale: Rational, effective: Vec<(String, Rational)>) -> Self {
        Decomposition {
            ample,
            scale,
            effective,
        }
    }
}

/// Nefness of `L` given that `curves` lists every curve on which `L` could
/// have nonpositive degree, plus an ample-plus-effective decomposition
/// supported on those curves.
pub fn nef_against(
    s: &SurfaceLattice,
    l: &DivisorClass,
    curves: &[&str],
    decomposition: Option<&Decomposition>,
) -> Result<PositivityReport> {
    if curves.is_empty() {
        return Err(Error::Empty("curve list"));
    }
    let mut rep = PositivityReport::new(l, "nef against declared curves with ample + effective decomposition");
    for &name in curves {
        let c = s.strict_transform(name)?;
        let v = s.intersect(l, &c)?;
        let negative = v.is_negative();
        rep.witnesses.push(Witness::degree(format!("L.{name}"), c, v));
        if negative {
            rep.verdict = Verdict::Violated;
            rep.notes.push(format!("negative degree on `{name}`"));
            return Ok(rep);
        }
    }
    let Some(dec) = decomposition else {
        rep.notes.push("no decomposition supplied".into());
        return Ok(rep);
    };
    if !dec.ample.verdict.implies_ample() || !dec.scale.is_positive() {
        rep.notes.push("ample part is not certified".into());
        return Ok(rep);
    }
    let mut sum = dec.ample.subject.scale(&dec.scale);
    for (name, c) in &dec.effective {
        if c.is_negative() || !curves.contains(&name.as_str()) {
            rep.notes.push(format!("effective term `{name}` is not a listed curve with c >= 0"));
            return Ok(rep);
        }
        sum = &sum + &s.strict_transform(name)?.scale(c);
    }
    if sum != *l {
        rep.notes.push("decomposition identity fails".into());
        return Ok(rep);
    }
    rep.decomposition.push((format!("ample[{}]", dec.ample.criterion), dec.scale.clone()));
    rep.decomposition.extend(dec.effective.iter().cloned());
    rep.verdict = Verdict::Nef;
    Ok(rep)
}

/// Nakai-Moishezon certificate for the class downstairs of a contraction.
///
/// Requires `k L = ample + sum c_i C_i` for some positive rational `k`
/// (found by the engine), `L^2 > 0`, `L.C > 0` for every support curve that
/// survives the contraction and `L.C = 0` for every contracted curve.
pub fn ample_certificate(
    s: &SurfaceLattice,
    l: &DivisorClass,
    ample: &PositivityReport,
    effective: &[(String, Rational)],
    contracted: &[String],
) -> Result<PositivityReport> {
    if !ample.verdict.implies_ample() {
        return Err(Error::Precondition("ample part is not certified ample".into()));
    }
    let mut sum = ample.subject.clone();
    for (name, c) in effective {
        if !c.is_positive() {
            return Err(Error::Precondition(format!("coefficient of `{name}` must be positive")));
        }
        sum = &sum + &s.strict_transform(name)?.scale(c);
    }
    let k = sum
        .ratio_to(l)
        .filter(|k| k.is_positive())
        .ok_or_else(|| Error::IdentityFails(format!("{sum} is not a positive multiple of {l}")))?;

    let mut rep = PositivityReport::new(l, "Nakai-Moishezon: kL = ample + effective");
    rep.witnesses.push(Witness::number("k", k.clone()));
    let l2 = s.self_intersection(l)?;
    if !l2.is_positive() {
        return Err(Error::DegreeNotPositive(format!("L^2 = {}", rational::display(&l2))));
    }
    rep.witnesses.push(Witness::degree("L^2", l.clone(), l2));

    let mut checked: Vec<&str> = Vec::new();
    for (name, _) in effective {
        let c = s.strict_transform(name)?;
        let v = s.intersect(l, &c)?;
        if contracted.contains(name) {
            if !v.is_zero() {
                return Err(Error::NotOrthogonal(name.clone()));
            }
        } else if !v.is_positive() {
            return Err(Error::DegreeNotPositive(format!("L.{name} = {}", rational::display(&v))));
        }
        rep.witnesses.push(Witness::degree(format!("L.{name}"), c, v));
        checked.push(name);
    }
    for name in contracted {
        if checked.contains(&name.as_str()) {
            continue;
        }
        let c = s.strict_transform(name)?;
        let v = s.intersect(l, &c)?;
        if !v.is_zero() {
            return Err(Error::NotOrthogonal(name.clone()));
        }
        rep.witnesses.push(Witness::degree(format!("L.{name}"), c, v));
    }
    rep.decomposition.push((format!("ample[{}]", ample.criterion), int(1)));
    rep.decomposition.extend(effective.iter().cloned());
    rep.verdict = Verdict::Ample;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvecfg::MarkedCurve;
    use crate::lattice::Incidence;

    fn cubic_blowup(r: usize) -> SurfaceLattice {
        let mut s = SurfaceLattice::projective_plane()
            .mark_curve(MarkedCurve::plane_curve("C", 3, 1))
            .unwrap();
        for j in 1..=r {
            s = s.blow_up(&format!("E{j}"), &[Incidence::on("C")]).unwrap();
        }
        s
    }

    fn line_class(d: i64, m: &[i64]) -> DivisorClass {
        let mut terms = vec![("H".to_string(), d)];
        terms.extend(m.iter().enumerate().map(|(j, &mj)| (format!("E{}", j + 1), -mj)));
        DivisorClass::from_ints(terms)
    }

    #[test]
    fn plane_bound() {
        let s = cubic_blowup(3);
        let r = very_ample_p2_blowup(&s, &line_class(3, &[1, 1, 1])).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let r = very_ample_p2_blowup(&s, &line_class(4, &[1, 1, 1])).unwrap();
        assert_eq!(r.verdict, Verdict::VeryAmple);
        let s1 = cubic_blowup(1);
        assert_eq!(
            very_ample_p2_blowup(&s1, &line_class(2, &[1])).unwrap().verdict,
            Verdict::VeryAmple
        );
        assert!(very_ample_p2_blowup(&s1, &line_class(0, &[1])).is_err());
        assert!(very_ample_p2_blowup(&s1, &line_class(3, &[-1])).is_err());
        let ruled = SurfaceLattice::ruled_surface(1, 3);
        assert!(matches!(
            very_ample_p2_blowup(&ruled, &DivisorClass::basis("F")),
            Err(Error::WrongShape(_))
        ));
    }

    #[test]
    fn points_on_cubic() {
        let s = cubic_blowup(11);
        for m in 1..6 {
            let l = line_class(11 * m - 3, &[3 * m - 1; 11]);
            let rep = ample_points_on_curve(&s, &l, "C").unwrap();
            assert_eq!(rep.verdict, Verdict::Ample, "m = {m}");
            assert_eq!(rep.witness("L.C"), Some(&int(2)));
            assert!(rep.recheck(&s).unwrap());
        }
        // 3d = sum m_i gives L.C = 0
        let l = line_class(11, &[3; 11]);
        let rep = ample_points_on_curve(&s, &l, "C").unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert_eq!(rep.witness("L.C"), Some(&int(0)));
    }

    #[test]
    fn points_not_on_curve_rejected() {
        let s = cubic_blowup(2).blow_up("X", &[]).unwrap();
        let l = DivisorClass::from_ints([("H", 5), ("X", -1)]);
        assert!(matches!(ample_points_on_curve(&s, &l, "C"), Err(Error::Precondition(_))));
    }

    #[test]
    fn four_points_brute_force_nakai() {
        // Nakai check against F, E_i and lines through pairs of points.
        let s = cubic_blowup(4);
        let l = line_class(4, &[1; 4]);
        let rep = ample_points_on_curve(&s, &l, "C").unwrap();
        assert_eq!(rep.verdict, Verdict::Ample);
        let mut curves = vec![s.strict_transform("C").unwrap()];
        for i in 1..=4 {
            curves.push(DivisorClass::basis(&format!("E{i}")));
            for j in i + 1..=4 {
                curves.push(DivisorClass::from_ints([
                    ("H".to_string(), 1),
                    (format!("E{i}"), -1),
                    (format!("E{j}"), -1),
                ]));
            }
        }
        assert!(s.self_intersection(&l).unwrap() > int(0));
        for c in &curves {
            assert!(s.intersect(&l, c).unwrap() > int(0), "{c}");
        }
    }

    #[test]
    fn equal_multiplicity_bound() {
        let s = cubic_blowup(11);
        let a = line_class(5, &[1; 11]);
        let rep = very_ample_equal_mult(&s, &a, "C", 1).unwrap();
        assert_eq!(rep.verdict, Verdict::VeryAmple);
        assert_eq!(rep.witness("(d+3)e"), Some(&int(24)));
        assert_eq!(rep.witness("r(m+1)"), Some(&int(22)));

        let s10 = cubic_blowup(10);
        let rep = very_ample_equal_mult(&s10, &line_class(5, &[1; 10]), "C", 1).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);

        let s12 = cubic_blowup(12);
        let rep = very_ample_equal_mult(&s12, &line_class(5, &[1; 12]), "C", 1).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);

        let mut uneven = vec![1; 11];
        uneven[0] = 2;
        assert!(very_ample_equal_mult(&s, &line_class(9, &uneven), "C", 1).is_err());
    }

    fn ruled_one_point() -> SurfaceLattice {
        SurfaceLattice::ruled_surface(1, 3)
            .mark_curve(MarkedCurve::new("G-", DivisorClass::basis("C-"), 1))
            .unwrap()
            .blow_up("E", &[Incidence::on("G-")])
            .unwrap()
    }

    #[test]
    fn ruled_criterion() {
        let y = ruled_one_point();
        let l = DivisorClass::from_ints([("C-", 5), ("F", 24), ("E", -1)]);
        let rep = very_ample_ruled_blowup(&y, &l, &[]).unwrap();
        assert_eq!(rep.verdict, Verdict::VeryAmple);
        assert_eq!(rep.witness("ad + 2g + 1 + sum m_i"), Some(&int(19)));
        assert!(rep.recheck(&y).unwrap());

        let l = DivisorClass::from_ints([("C-", 5), ("F", 18), ("E", -1)]);
        assert_eq!(very_ample_ruled_blowup(&y, &l, &[]).unwrap().verdict, Verdict::Inconclusive);

        let y2 = y.blow_up("E2", &[]).unwrap();
        let l = DivisorClass::from_ints([("C-", 2), ("F", 40), ("E", -1), ("E2", -1)]);
        let same_fiber = vec![vec!["E".to_string(), "E2".to_string()]];
        assert_eq!(
            very_ample_ruled_blowup(&y2, &l, &same_fiber).unwrap().verdict,
            Verdict::Inconclusive
        );
        assert_eq!(very_ample_ruled_blowup(&y2, &l, &[]).unwrap().verdict, Verdict::VeryAmple);
        let bad = DivisorClass::from_ints([("C-", 0), ("F", 40)]);
        assert!(very_ample_ruled_blowup(&y2, &bad, &[]).is_err());
    }

    #[test]
    fn nef_and_certificate() {
        let y = ruled_one_point();
        let l = DivisorClass::from_ints([("C-", 5), ("F", 24), ("E", -1)]);
        let va = very_ample_ruled_blowup(&y, &l, &[]).unwrap();
        let n8 = DivisorClass::from_ints([("C-", 7), ("F", 24), ("E", -3)]);
        let n = n8.scale(&crate::rational::frac(1, 8));
        let cert = ample_certificate(&y, &n, &va, &[("G-".into(), int(2))], &["G-".into()]).unwrap();
        assert_eq!(cert.verdict, Verdict::Ample);
        assert_eq!(cert.witness("k"), Some(&int(8)));
        assert_eq!(cert.witness("L^2"), Some(&crate::rational::frac(45, 16)));
        assert!(cert.recheck(&y).unwrap());

        let perturbed = &n + &DivisorClass::basis("E");
        assert!(matches!(
            ample_certificate(&y, &perturbed, &va, &[("G-".into(), int(2))], &["G-".into()]),
            Err(Error::IdentityFails(_))
        ));

        let bad = DivisorClass::from_ints([("C-", 1), ("F", 1)]);
        let rep = nef_against(&y, &bad, &["G-"], None).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
        assert!(nef_against(&y, &bad, &[], None).is_err());
    }
}
