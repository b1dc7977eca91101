//! The eleven-point surface with nine points on a pencil of cubics, and the
//! double cover branched along two fibres.

use crate::contract::{Contraction, GlcClass};
use crate::curvecfg::MarkedCurve;
use crate::error::Result;
use crate::lattice::{DivisorClass, Incidence};
use crate::positivity;
use crate::rational::{frac, int};

use super::calabi_yau::{cy_divergence, eleven_points, m_rule, polarisation, sum_e, sum_order};
use super::{BuildOptions, Ledger, ScenarioConfig, ScenarioReport, SurfaceSummary};

pub fn build_kodaira_one(cfg: &ScenarioConfig, opts: &BuildOptions) -> Result<ScenarioReport> {
    cfg.validate()?;
    let group = cfg.group()?;
    let points = eleven_points(cfg)?;
    let cover = cfg.parameters.cover_degree.unwrap_or(2);

    let mut s = opts
        .plane()
        .mark_curve(MarkedCurve::plane_curve("F", 3, 1).with_restriction(group)?)?
        .mark_curve(MarkedCurve::plane_curve("D", 3, 1))?
        .mark_curve(MarkedCurve::plane_curve("G1", 3, 1))?
        .mark_curve(MarkedCurve::plane_curve("G2", 3, 1))?;
    for (j, p) in points.iter().enumerate() {
        let label = format!("E{}", j + 1);
        let on_f = Incidence::at("F", p.clone());
        if j < 9 {
            s = s.blow_up(
                &label,
                &[on_f, Incidence::on("D"), Incidence::on("G1"), Incidence::on("G2")],
            )?;
        } else {
            s = s.blow_up(&label, &[on_f])?;
        }
    }

    let mut ledger = Ledger::default();
    let g1 = s.strict_transform("G1")?;
    let g2 = s.strict_transform("G2")?;
    let f = s.strict_transform("F")?;
    let nine = DivisorClass::from_ints([("H", 3)]) - sum_e(&s, (1..=9).map(|j| format!("E{j}")))?;
    ledger.check("k1.G_class", "G ~ 3H - (E_1 + ... + E_9)", true, g1 == nine && g2 == nine);
    ledger.check("k1.G2", "G^2 = 0", int(0), s.self_intersection(&g1)?);
    ledger.check("k1.GF", "G.F = 0", int(0), s.intersect(&g1, &f)?);

    let (_, rep_a, m, nef) = polarisation(&s)?;
    let mg = s.intersect(&m, &g1)?;
    let m2 = s.self_intersection(&m)?;
    ledger.check("k1.MG", "M.G = 33 - 3*9 = 6", int(6), mg.clone());
    ledger.check("k1.M2", "M^2 = 22", int(22), m2.clone());

    let boundary = vec![("G1".to_string(), frac(1, 2)), ("G2".to_string(), frac(1, 2))];
    let c = Contraction::new(&s, &["F"])?;
    let table = c.log_discrepancies(&boundary, &m)?;
    ledger.check("k1.disc", "a(F) = 0", int(0), table.get("F").cloned().unwrap_or(int(-1)));
    ledger.check("k1.lc", "generalised lc, not klt", true, table.classification == GlcClass::Lc);
    let effective = vec![
        ("F".to_string(), int(2)),
        ("G1".to_string(), frac(1, 2)),
        ("G2".to_string(), frac(1, 2)),
    ];
    let cert = positivity::ample_certificate(&s, &table.pullback, &rep_a, &effective, &["F".into()])?;
    let pair = c.glc_assemble(&boundary, &m, &nef, &cert)?;
    ledger.check("k1.volY", "(K + F + (G1 + G2)/2 + M)^2 = 2 M.G + M^2 = 34", int(34), pair.volume.clone());

    let v = s.scale_cover(cover)?;
    let vol = v.self_intersection(&table.pullback)?;
    let factor = int(i64::from(cover));
    ledger.check("k1.vol", "vol(K_U + M_U) = 2(2*6 + 22) = 68", &factor * int(2 * 6 + 22), vol.clone());
    ledger.check(
        "k1.vol_formula",
        "vol = deg * (2 M.G + M^2)",
        &factor * (int(2) * mg + m2),
        vol.clone(),
    );

    let n = sum_order(&points)?;
    let semiample = c.semiample_multiple(&m, &nef)?;
    ledger.check("k1.mrule", "m = n if 3 does not divide n, else n/3", m_rule(n), semiample);
    let cartier = c.cartier_index_estimate(&m)?;

    Ok(ScenarioReport {
        config: cfg.clone(),
        surfaces: vec![SurfaceSummary::of("Y", &s)?, SurfaceSummary::of("V", &v)?],
        positivity: vec![rep_a, nef, cert],
        discrepancies: table.entries.clone(),
        volume: vol,
        coefficient_set: vec![int(0), int(1)],
        torsion_order: n,
        semiample_multiple: semiample,
        cartier_index: cartier,
        divergence: Some(cy_divergence(&points, opts)),
        ledger,
    })
}
