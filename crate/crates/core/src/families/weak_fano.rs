//! One point blown up on the negative section of the ruled surface over an
//! elliptic curve with invariant 3, then the strict transform of the section
//! contracted.

use crate::contract::{Contraction, GlcClass};
use crate::curvecfg::MarkedCurve;
use crate::error::Result;
use crate::lattice::{DivisorClass, Incidence};
use crate::positivity::{self, Decomposition, Verdict};
use crate::rational::{frac, int, Rational};

use super::divergence;
use super::{BuildOptions, Ledger, ScenarioConfig, ScenarioReport, SurfaceSummary};

fn class(c_minus: Rational, f: Rational, e: Rational) -> DivisorClass {
    DivisorClass::from_terms([("C-", c_minus), ("F", f), ("E", e)])
}

pub fn build_weak_fano(cfg: &ScenarioConfig, opts: &BuildOptions) -> Result<ScenarioReport> {
    cfg.validate()?;
    let group = cfg.group()?;
    let p = cfg.point("p")?;
    let w = opts.ruled(1, 3);
    let kz_total = w.canonical() + &DivisorClass::basis("C-");
    let section = MarkedCurve::new("G-", DivisorClass::basis("C-"), 1)
        .with_plane_degree(3)
        .with_restriction(group)?;
    let y = w
        .mark_curve(section)?
        .blow_up("E", &[Incidence::at("G-", p.clone())])?
        .mark_curve(MarkedCurve::new("E", DivisorClass::basis("E"), 0))?;

    let mut ledger = Ledger::default();
    let g = y.strict_transform("G-")?;
    let e = DivisorClass::basis("E");
    let c_plus = DivisorClass::from_ints([("C-", 1), ("F", 3)]);
    ledger.check("wf.G2", "(G^-)^2 = -4", int(-4), y.self_intersection(&g)?);

    let c = Contraction::new(&y, &["G-"])?;
    let coeff = c.pullback_coefficients(&e)?;
    ledger.check("wf.pullback", "pi^* E_X = E + G^-/4", frac(1, 4), coeff[0].clone());
    ledger.check("wf.EX2", "(E_X)^2 = -3/4", frac(-3, 4), c.pushforward_intersection(&e, &e)?);
    ledger.check("wf.CX2", "(C_X^+)^2 = 3", int(3), c.pushforward_intersection(&c_plus, &c_plus)?);

    let n_strict = &c_plus - &e.scale(&frac(1, 2));
    let n_y = c.numerical_pullback(&n_strict)?;
    ledger.check(
        "wf.NY",
        "N_Y = 7/8 C^- + 3F - 3/8 E",
        true,
        n_y == class(frac(7, 8), int(3), frac(-3, 8)),
    );
    ledger.check("wf.N2", "N^2 = 3 + (1/4)(-3/4) = 45/16", frac(45, 16), y.self_intersection(&n_y)?);

    let l = DivisorClass::from_ints([("C-", 5), ("F", 24), ("E", -1)]);
    let rep_l = positivity::very_ample_ruled_blowup(&y, &l, &[])?;
    ledger.check(
        "wf.L_very_ample",
        "b = 24 >= ad + 2g + 1 + m = 19 and a - m = 4 >= 1",
        true,
        rep_l.verdict == Verdict::VeryAmple
            && rep_l.witness("b") == Some(&int(24))
            && rep_l.witness("ad + 2g + 1 + sum m_i") == Some(&int(19)),
    );
    ledger.check("wf.8N", "L + 2G^- = 8 N_Y", true, &l + &g.scale_int(2) == n_y.scale_int(8));
    let cert_n = positivity::ample_certificate(&y, &n_y, &rep_l, &[("G-".into(), int(2))], &["G-".into()])?;
    ledger.check("wf.N_ample", "N is ample", true, cert_n.verdict.implies_ample());

    // K_X = f^* K_Z + m E_X
    let tk = c.log_discrepancies(&[], &DivisorClass::zero())?;
    let kx = tk.pullback.clone();
    let ex = c.numerical_pullback(&e)?;
    ledger.check("wf.KG", "K_Y + G^- = pi^* K_X", true, kx == y.canonical() + &g);
    let diff = &kx - &kz_total;
    let m_coef = y.intersect(&diff, &e)? / y.intersect(&ex, &e)?;
    ledger.check("wf.m0", "K_X = f^* K_Z + m E_X with m = 0", int(0), m_coef.clone());
    ledger.check("wf.m0_identity", "the difference is a multiple of E_X", true, diff == ex.scale(&m_coef));

    let anti = -&kx;
    let curves = ["G-", "E"];
    let anti_dec = Decomposition::new(rep_l.clone(), frac(1, 8), vec![("G-".into(), frac(3, 8)), ("E".into(), frac(1, 2))]);
    let anti_nef = positivity::nef_against(&y, &anti, &curves, Some(&anti_dec))?;
    ledger.check("wf.antiK_nef", "-K_X is nef", true, anti_nef.verdict.implies_nef());
    ledger.check("wf.antiK2", "(-K_X)^2 = 3 > 0", int(3), y.self_intersection(&anti)?);
    ledger.check("wf.antiK_EX", "-K_X . E_X = 0", int(0), y.intersect(&anti, &ex)?);

    // M' = 16 C^+ - 4E - G^- is integral and nef, M_Y = M'/8.
    let m_prime = &(&c_plus.scale_int(16) - &e.scale_int(4)) - &g;
    let dec_prime = Decomposition::new(rep_l.clone(), int(2), vec![("G-".into(), int(5)), ("E".into(), int(4))]);
    let nef_prime = positivity::nef_against(&y, &m_prime, &curves, Some(&dec_prime))?;
    ledger.check(
        "wf.Mprime_nef",
        "16C^+ - 4E - G^- is a nef Cartier divisor",
        true,
        m_prime.is_integral() && nef_prime.verdict.implies_nef(),
    );
    let m_y = m_prime.scale(&frac(1, 8));
    let m_strict = &c_plus.scale_int(2) - &e.scale(&frac(1, 2));
    ledger.check("wf.MY", "pi^* M = (16C^+ - 4E - G^-)/8", true, c.numerical_pullback(&m_strict)? == m_y);
    let dec_m = Decomposition::new(rep_l.clone(), frac(1, 4), vec![("G-".into(), frac(5, 8)), ("E".into(), frac(1, 2))]);
    let nef_m = positivity::nef_against(&y, &m_y, &curves, Some(&dec_m))?;

    let table = c.log_discrepancies(&[], &m_y)?;
    ledger.check("wf.KM", "K_Y + G^- + M_Y = N_Y", true, table.pullback == n_y);
    ledger.check("wf.lc", "generalised lc, not klt", true, table.classification == GlcClass::Lc);
    let cert = positivity::ample_certificate(&y, &table.pullback, &rep_l, &[("G-".into(), int(2))], &["G-".into()])?;
    let pair = c.glc_assemble(&[], &m_y, &nef_m, &cert)?;
    ledger.check("wf.vol", "vol(K_X + M) = 45/16", frac(45, 16), pair.volume.clone());

    let semiample = c.semiample_multiple(&m_prime, &nef_prime)?;
    let cartier = c.cartier_index_estimate(&e)?;
    let bound = opts
        .divergence_bound
        .unwrap_or_else(|| divergence::default_wf_bound(&p));

    Ok(ScenarioReport {
        config: cfg.clone(),
        surfaces: vec![SurfaceSummary::of("Y", &y)?],
        positivity: vec![rep_l, cert_n, anti_nef, nef_prime, nef_m, cert],
        discrepancies: table.entries.clone(),
        volume: pair.volume,
        coefficient_set: vec![int(0), frac(1, 8)],
        torsion_order: p.order(),
        semiample_multiple: semiample,
        cartier_index: cartier,
        divergence: Some(divergence::weak_fano(&p, bound)),
        ledger,
    })
}
