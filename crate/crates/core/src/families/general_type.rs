//! A cubic and `r` general lines: contracting their strict transforms on
//! the blow-up at all nodes gives a stable surface `Z`; blowing up one more
//! point of the cubic gives surfaces with `K` nef, big and not ample.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::contract::{Contraction, GlcClass};
use crate::curvecfg::MarkedCurve;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Incidence, SurfaceLattice};
use crate::positivity::{self, Decomposition, Verdict};
use crate::rational::{self, frac, int, Rational};

use super::config::general_type_min_d;
use super::{BuildOptions, Ledger, ScenarioConfig, ScenarioReport, SurfaceSummary};

fn e_label(j: u32, l: u32) -> String {
    format!("E{j}_{l}")
}

fn f_label(j: u32, k: u32) -> String {
    format!("F{j}_{k}")
}

fn line(j: u32) -> String {
    format!("L{j}")
}

fn pairs(r: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=r).flat_map(move |j| (j + 1..=r).map(move |k| (j, k)))
}

fn node_labels(r: u32) -> Vec<String> {
    let mut out: Vec<String> = (1..=r).flat_map(|j| (1..=3).map(move |l| e_label(j, l))).collect();
    out.extend(pairs(r).map(|(j, k)| f_label(j, k)));
    out
}

/// `(r - 3) / (2(r + 1))`, the coefficient of each `L'_j` in the pullback
/// of `K_Z`.
pub fn line_coefficient(r: u32) -> Rational {
    let r = i64::from(r);
    frac(r - 3, 2 * (r + 1))
}

/// `r(r - 1)(r - 3) / (2(r + 1))`.
pub fn kz_square(r: u32) -> Rational {
    let r = i64::from(r);
    frac(r * (r - 1) * (r - 3), 2 * (r + 1))
}

/// The blow-up `W` of `P^2` at the nodes of the cubic plus `r` lines.
pub fn build_w(r: u32, opts: &BuildOptions, group: crate::curvecfg::AbelianGroup) -> Result<SurfaceLattice> {
    let mut s = opts
        .plane()
        .mark_curve(MarkedCurve::plane_curve("C", 3, 1).with_restriction(group)?)?;
    for j in 1..=r {
        s = s.mark_curve(MarkedCurve::plane_curve(&line(j), 1, 0))?;
    }
    for j in 1..=r {
        for l in 1..=3 {
            s = s.blow_up(&e_label(j, l), &[Incidence::on("C"), Incidence::on(&line(j))])?;
        }
    }
    for (j, k) in pairs(r) {
        s = s.blow_up(&f_label(j, k), &[Incidence::on(&line(j)), Incidence::on(&line(k))])?;
    }
    for label in node_labels(r) {
        s = s.mark_curve(MarkedCurve::new(&label, DivisorClass::basis(&label), 0))?;
    }
    Ok(s)
}

fn contracted_names(r: u32) -> Vec<String> {
    std::iter::once("C".to_string()).chain((1..=r).map(line)).collect()
}

fn add_coeff(map: &mut BTreeMap<String, Rational>, name: &str, q: Rational) {
    let entry = map.entry(name.to_string()).or_insert_with(Rational::zero);
    *entry += q;
}

/// `t H` written as `t (L'_1 + sum_l E_1l + sum_k F_1k)`.
fn hyperplane_as_curves(map: &mut BTreeMap<String, Rational>, r: u32, t: &Rational) {
    add_coeff(map, &line(1), t.clone());
    for l in 1..=3 {
        add_coeff(map, &e_label(1, l), t.clone());
    }
    for k in 2..=r {
        add_coeff(map, &f_label(1, k), t.clone());
    }
}

fn effective_list(map: BTreeMap<String, Rational>) -> Vec<(String, Rational)> {
    map.into_iter().filter(|(_, q)| !q.is_zero()).collect()
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

pub fn build_general_type(cfg: &ScenarioConfig, opts: &BuildOptions) -> Result<ScenarioReport> {
    cfg.validate()?;
    let r = cfg.parameters.r.expect("validated");
    let d = cfg.parameters.d.unwrap_or_else(|| general_type_min_d(r));
    let group = cfg.group()?;
    let p = cfg.point("p")?;
    let ri = i64::from(r);
    let nodes = node_labels(r);
    let n_nodes = nodes.len() as i64;
    let c_coef = line_coefficient(r);
    let names = contracted_names(r);

    let w = build_w(r, opts, group)?;
    let mut ledger = Ledger::default();
    let h = DivisorClass::basis("H");
    let c_w = w.strict_transform("C")?;
    let sum_l_w = (1..=r)
        .map(|j| w.strict_transform(&line(j)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<DivisorClass>();
    let kw_expected = &(&h.scale(&frac(ri - 3, 2)) - &c_w.scale(&frac(1, 2))) - &sum_l_w.scale(&frac(1, 2));
    ledger.check("gt.KW", "K_W = (r-3)/2 H - C'/2 - sum L'_j / 2", true, *w.canonical() == kw_expected);
    ledger.check("gt.C2", "C'^2 = 9 - 3r", int(9 - 3 * ri), w.self_intersection(&c_w)?);
    let l1 = w.strict_transform(&line(1))?;
    ledger.check("gt.L2", "(L'_j)^2 = 1 - 3 - (r - 1) = -1 - r", int(-1 - ri), w.self_intersection(&l1)?);

    let tau = Contraction::new(&w, &names)?;
    let tk = tau.log_discrepancies(&[], &DivisorClass::zero())?;
    let disc_ok = (1..=r).all(|j| tk.get(&line(j)) == Some(&frac(2, ri + 1)));
    ledger.check("gt.disc", "a(L'_j, Z, 0) = 2/(r+1)", frac(2, ri + 1), tk.get(&line(1)).cloned().unwrap_or(int(-1)));
    ledger.check("gt.disc_all", "all lines share the discrepancy", true, disc_ok);
    ledger.check("gt.discC", "a(C', Z, 0) = 0", int(0), tk.get("C").cloned().unwrap_or(int(-1)));
    let kz = tk.pullback.clone();
    let kz_expected = &(&h.scale(&frac(ri - 3, 2)) + &c_w.scale(&frac(1, 2))) + &sum_l_w.scale(&c_coef);
    ledger.check(
        "gt.KZ",
        "tau^* K_Z = (r-3)/2 H + C'/2 + (r-3)/(2(r+1)) sum L'_j",
        true,
        kz == kz_expected,
    );
    ledger.check("gt.KZ2", "(tau^* K_Z)^2 = r(r-1)(r-3)/(2(r+1))", kz_square(r), w.self_intersection(&kz)?);

    // K_Z is ample: k tau^*K_Z = A' + effective, A' = (N+1)H - sum of nodes.
    let a_w = &h.scale_int(n_nodes + 1) - &w.sum_of(&nodes)?;
    let rep_aw = positivity::very_ample_p2_blowup(&w, &a_w)?;
    let k = ceil_div(2 * (n_nodes + 1), ri - 3);
    let kq = int(k);
    let t = &kq * frac(ri - 3, 2) - int(n_nodes + 1);
    let mut eff = BTreeMap::new();
    add_coeff(&mut eff, "C", &kq * frac(1, 2));
    for j in 1..=r {
        add_coeff(&mut eff, &line(j), &kq * &c_coef);
    }
    for label in &nodes {
        add_coeff(&mut eff, label, int(1));
    }
    hyperplane_as_curves(&mut eff, r, &t);
    let cert_kz = positivity::ample_certificate(&w, &kz, &rep_aw, &effective_list(eff), &names)?;
    ledger.check("gt.KZ_ample", "K_Z is ample for r >= 4", true, cert_kz.verdict.implies_ample());

    // Y: one more point on C'.
    let y = w
        .blow_up("E", &[Incidence::at("C", p.clone())])?
        .mark_curve(MarkedCurve::new("E", DivisorClass::basis("E"), 0))?;
    let c_y = y.strict_transform("C")?;
    ledger.check("gt.CY2", "(C_i')^2 = 8 - 3r", int(8 - 3 * ri), y.self_intersection(&c_y)?);
    let a = &(&h.scale_int(d) - &y.sum_of(&nodes)?) - &DivisorClass::basis("E");
    let rep_a = positivity::very_ample_p2_blowup(&y, &a)?;
    ledger.check("gt.A_very_ample", "A = dH - sum E - sum F - E_i is very ample", true, rep_a.verdict == Verdict::VeryAmple);

    let pi = Contraction::new(&y, &names)?;
    let coeffs = pi.pullback_coefficients(&a)?;
    let (ca, cb) = (coeffs[0].clone(), coeffs[1].clone());
    let a_closed = frac(3 * d - 3 * ri - 1, 3 * ri - 8);
    let b_closed = frac(d - ri - 2, ri + 1);
    ledger.check("gt.a", "a = -A.C'/C'^2 = (3d - 3r - 1)/(3r - 8)", a_closed.clone(), ca.clone());
    ledger.check("gt.b", "b = -A.L'/L'^2 = (d - r - 2)/(r + 1)", b_closed.clone(), cb.clone());
    ledger.check("gt.b_all", "one b for every line", true, coeffs[1..].iter().all(|x| *x == cb));
    ledger.check("gt.ab_pos", "a > 0 and b > 0", true, ca.is_positive() && cb.is_positive());

    let q_big = rational::common_denominator([&ca, &cb]);
    let q = q_big.to_i64().ok_or(Error::BoundExceeded(u64::MAX))?;
    let qq = int(q);
    let m_y = pi.numerical_pullback(&a)?.scale(&qq);
    ledger.check("gt.M_integral", "M_Y = q(A + aC' + b sum L') is integral", true, m_y.is_integral());
    let mut dec_eff = vec![("C".to_string(), &qq * &ca)];
    dec_eff.extend((1..=r).map(|j| (line(j), &qq * &cb)));
    let nef = positivity::nef_against(
        &y,
        &m_y,
        &names.iter().map(String::as_str).collect::<Vec<_>>(),
        Some(&Decomposition::new(rep_a.clone(), qq.clone(), dec_eff)),
    )?;
    ledger.check("gt.M_nef", "M_Y is nef", true, nef.verdict.implies_nef());

    // K_X = f^* K_Z + m E_X
    let tky = pi.log_discrepancies(&[], &DivisorClass::zero())?;
    let kx = tky.pullback.clone();
    let ex = pi.numerical_pullback(&DivisorClass::basis("E"))?;
    let diff = &kx - &kz;
    let e = DivisorClass::basis("E");
    let m_coef = y.intersect(&diff, &e)? / y.intersect(&ex, &e)?;
    ledger.check("gt.m0", "K_X = f^* K_Z + m E_X with m = 0", int(0), m_coef.clone());
    ledger.check("gt.m0_identity", "the difference is a multiple of E_X", true, diff == ex.scale(&m_coef));
    ledger.check("gt.KE", "K_X . E_X = 0", int(0), y.intersect(&kx, &ex)?);

    // K_X + M
    let table = pi.log_discrepancies(&[], &m_y)?;
    ledger.check("gt.lc", "generalised lc, not klt", true, table.classification == GlcClass::Lc);
    let qa_class = a.scale(&qq);
    let rep_qa = positivity::very_ample_p2_blowup(&y, &qa_class)?;
    let mut eff = BTreeMap::new();
    hyperplane_as_curves(&mut eff, r, &frac(ri - 3, 2));
    add_coeff(&mut eff, "C", frac(1, 2) + &qq * &ca);
    add_coeff(&mut eff, "E", frac(1, 2));
    for j in 1..=r {
        add_coeff(&mut eff, &line(j), &c_coef + &qq * &cb);
    }
    let cert = positivity::ample_certificate(&y, &table.pullback, &rep_qa, &effective_list(eff), &names)?;
    let pair = pi.glc_assemble(&[], &m_y, &nef, &cert)?;

    // closed form: (K_Z)^2 + 2 q A.f^*K_Z + q^2 A.(A + aC' + b sum L')
    let dq = int(d);
    let a_kz = &frac(ri - 3, 2) * &dq + frac(3 * d - 3 * ri, 2) + &c_coef * int(ri * (d - ri - 2));
    let a2 = int(d * d - n_nodes - 1);
    let m2 = &qq * &qq * (a2 + &ca * int(3 * d - 3 * ri - 1) + &cb * int(ri * (d - ri - 2)));
    let v_closed = kz_square(r) + int(2) * &qq * a_kz + m2;
    ledger.check("gt.vol", "vol(K_X + M) from the closed form in (r, d, q)", v_closed, pair.volume.clone());

    let semiample = pi.semiample_multiple(&m_y, &nef)?;
    let cartier = pi.cartier_index_estimate(&m_y)?;

    Ok(ScenarioReport {
        config: cfg.clone(),
        surfaces: vec![SurfaceSummary::of("W", &w)?, SurfaceSummary::of("Y", &y)?],
        positivity: vec![rep_aw, cert_kz, rep_a, nef, rep_qa, cert],
        discrepancies: table.entries.clone(),
        volume: pair.volume,
        coefficient_set: vec![int(0), int(1)],
        torsion_order: p.order(),
        semiample_multiple: semiample,
        cartier_index: cartier,
        divergence: None,
        ledger,
    })
}
