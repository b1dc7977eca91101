//! Eleven points on a plane cubic: a Calabi-Yau surface with a simple
//! elliptic singularity and an ample Weil divisor of growing index.

use crate::contract::Contraction;
use crate::curvecfg::{GroupElement, MarkedCurve, Order};
use crate::error::Result;
use crate::lattice::{DivisorClass, Incidence, SurfaceLattice};
use crate::positivity::{self, Decomposition, PositivityReport, Verdict};
use crate::rational::int;

use super::divergence::{self, DivergenceWitness};
use super::{BuildOptions, Ledger, ScenarioConfig, ScenarioReport, SurfaceSummary};

/// `n` if `3 ∤ n`, `n/3` otherwise.
pub(crate) fn m_rule(n: Order) -> Order {
    match n {
        Order::Finite(n) if n % 3 == 0 => Order::Finite(n / 3),
        other => other,
    }
}

/// Points `p1..p11` of the configuration, as `p - p0`.
pub(crate) fn eleven_points(cfg: &ScenarioConfig) -> Result<Vec<GroupElement>> {
    (1..=11).map(|j| cfg.point(&format!("p{j}"))).collect()
}

/// Order of `sum_j (p0 - p_j)`.
pub(crate) fn sum_order(points: &[GroupElement]) -> Result<Order> {
    let mut acc = points[0].group().identity();
    for p in points {
        acc = acc.add(&p.neg())?;
    }
    Ok(acc.order())
}

pub(crate) fn cy_divergence(points: &[GroupElement], opts: &BuildOptions) -> DivergenceWitness {
    let xs: Vec<GroupElement> = points.iter().map(GroupElement::neg).collect();
    let bound = opts
        .divergence_bound
        .unwrap_or_else(|| divergence::default_cy_bound(&xs));
    divergence::calabi_yau(&xs, bound)
}

pub(crate) fn sum_e(s: &SurfaceLattice, labels: impl IntoIterator<Item = String>) -> Result<DivisorClass> {
    s.sum_of(labels)
}

/// `A = 5H - sum E_j`, its very ampleness report, and `M = A + 2F` with a
/// nef report.
pub(crate) fn polarisation(s: &SurfaceLattice) -> Result<(DivisorClass, PositivityReport, DivisorClass, PositivityReport)> {
    let e = sum_e(s, (1..=11).map(|j| format!("E{j}")))?;
    let a = &DivisorClass::from_ints([("H", 5)]) - &e;
    let rep_a = positivity::very_ample_equal_mult(s, &a, "F", 1)?;
    let f = s.strict_transform("F")?;
    let m = &a + &f.scale_int(2);
    let dec = Decomposition::new(rep_a.clone(), int(1), vec![("F".into(), int(2))]);
    let nef = positivity::nef_against(s, &m, &["F"], Some(&dec))?;
    Ok((a, rep_a, m, nef))
}

pub fn build_calabi_yau(cfg: &ScenarioConfig, opts: &BuildOptions) -> Result<ScenarioReport> {
    cfg.validate()?;
    let group = cfg.group()?;
    let points = eleven_points(cfg)?;
    let mut s = opts
        .plane()
        .mark_curve(MarkedCurve::plane_curve("F", 3, 1).with_restriction(group)?)?;
    for (j, p) in points.iter().enumerate() {
        s = s.blow_up(&format!("E{}", j + 1), &[Incidence::at("F", p.clone())])?;
    }

    let mut ledger = Ledger::default();
    let (a, rep_a, m, nef) = polarisation(&s)?;
    ledger.check("cy.A2", "vol(A) = A^2 = 25 - 11 = 14", int(14), s.self_intersection(&a)?);
    ledger.check(
        "cy.A.very_ample",
        "(d+3)e = 24 > 22 = r(m+1) and r = 11 >= e^2 + 2",
        true,
        rep_a.verdict == Verdict::VeryAmple
            && rep_a.witness("(d+3)e") == Some(&int(24))
            && rep_a.witness("r(m+1)") == Some(&int(22)),
    );
    let f = s.strict_transform("F")?;
    ledger.check("cy.F2", "F^2 = -2", int(-2), s.self_intersection(&f)?);
    ledger.check("cy.MF", "(A + 2F).F = 0", int(0), s.intersect(&m, &f)?);
    let expected_m = DivisorClass::from_ints([("H", 11)]) - sum_e(&s, (1..=11).map(|j| format!("E{j}")))?.scale_int(3);
    ledger.check("cy.M_class", "A + 2F = 11H - 3E", true, m == expected_m);
    ledger.check("cy.M_nef", "A + 2F is nef", true, nef.verdict.implies_nef());

    let c = Contraction::new(&s, &["F"])?;
    let tk = c.log_discrepancies(&[], &DivisorClass::zero())?;
    ledger.check("cy.KF", "K_Y + F is the pullback of K_X", true, tk.pullback == s.canonical() + &f);
    ledger.check("cy.K0", "K_Y + F ~ 0", true, tk.pullback.is_zero());

    let table = c.log_discrepancies(&[], &m)?;
    let cert = positivity::ample_certificate(&s, &table.pullback, &rep_a, &[("F".into(), int(2))], &["F".into()])?;
    let pair = c.glc_assemble(&[], &m, &nef, &cert)?;
    ledger.check("cy.disc", "a(F) = 0, simple elliptic", int(0), table.get("F").cloned().unwrap_or(int(-1)));
    ledger.check(
        "cy.lc",
        "generalised lc, not klt",
        true,
        table.classification == crate::contract::GlcClass::Lc,
    );
    ledger.check("cy.vol", "vol(K_X + M) = (11H - 3E)^2 = 22", int(22), pair.volume.clone());
    ledger.check("cy.volW", "vol(-K_W) = M^2 = 22", int(22), s.self_intersection(&m)?);

    let n = sum_order(&points)?;
    let semiample = c.semiample_multiple(&m, &nef)?;
    ledger.check("cy.mrule", "m = n if 3 does not divide n, else n/3", m_rule(n), semiample);
    let cartier = c.cartier_index_estimate(&m)?;

    Ok(ScenarioReport {
        config: cfg.clone(),
        surfaces: vec![SurfaceSummary::of("Y", &s)?],
        positivity: vec![rep_a, nef, cert],
        discrepancies: table.entries.clone(),
        volume: pair.volume,
        coefficient_set: vec![int(0), int(1)],
        torsion_order: n,
        semiample_multiple: semiample,
        cartier_index: cartier,
        divergence: Some(cy_divergence(&points, opts)),
        ledger,
    })
}
