//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Every number is compared exactly.

use std::collections::BTreeMap;
use std::process::ExitCode;

use glc_core::contract::Contraction;
use glc_core::curvecfg::{self, AbelianGroup, MarkedCurve, Order};
use glc_core::families::config::{GroupSpec, PointSpec};
use glc_core::families::general_type::build_w;
use glc_core::families::{self, BuildOptions, DivergenceWitness, Family, ScenarioConfig};
use glc_core::lattice::{DivisorClass, Incidence, SurfaceLattice};
use glc_core::positivity::{self, Verdict};
use glc_core::rational::{frac, int, Rational};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

struct Outcome {
    id: &'static str,
    ok: bool,
    detail: String,
}

fn outcome(id: &'static str, r: Result<String, String>) -> Outcome {
    match r {
        Ok(detail) => Outcome { id, ok: true, detail },
        Err(detail) => Outcome { id, ok: false, detail },
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

// ---------------------------------------------------------------- oracles

fn laplace_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * laplace_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn cramer(m: &[Vec<Rational>], rhs: &[Rational]) -> Vec<Rational> {
    let det = laplace_det(m);
    (0..m.len())
        .map(|i| {
            let replaced: Vec<Vec<Rational>> = m
                .iter()
                .zip(rhs)
                .map(|(row, b)| {
                    let mut row = row.clone();
                    row[i] = b.clone();
                    row
                })
                .collect();
            laplace_det(&replaced) / &det
        })
        .collect()
}

/// Diagonal form `H^2 = 1`, every other label squares to `-1`.
fn diag_dot(a: &BTreeMap<String, Rational>, b: &BTreeMap<String, Rational>) -> Rational {
    a.iter()
        .filter_map(|(k, x)| b.get(k).map(|y| if k == "H" { x * y } else { -(x * y) }))
        .fold(Rational::zero(), |acc, v| acc + v)
}

fn cy_divergence_brute(n: u64) -> i64 {
    // ten points at p0 and one of order n: l_11 must be a multiple of n
    for d in 1i64.. {
        let mut l11 = n as i64;
        while l11 <= 3 * d - 10 {
            if 3 * d - l11 >= 10 {
                return 2 * d;
            }
            l11 += n as i64;
        }
    }
    unreachable!()
}

fn least_killing_multiple(step: u64, n: u64) -> u64 {
    (1..=n).find(|m| (m * step) % n == 0).expect("m = n always works")
}

// ------------------------------------------------------------- surfaces

fn eleven_on_cubic() -> Result<SurfaceLattice, String> {
    let mut s = SurfaceLattice::projective_plane()
        .mark_curve(MarkedCurve::plane_curve("F", 3, 1))
        .map_err(err)?;
    for j in 1..=11 {
        s = s.blow_up(&format!("E{j}"), &[Incidence::on("F")]).map_err(err)?;
    }
    Ok(s)
}

fn weak_fano_y(n: u64) -> Result<SurfaceLattice, String> {
    let group = AbelianGroup::cyclic(n);
    let p = if n > 1 { group.torsion_generator(0) } else { group.identity() };
    SurfaceLattice::ruled_surface(1, 3)
        .mark_curve(
            MarkedCurve::new("G-", DivisorClass::basis("C-"), 1)
                .with_plane_degree(3)
                .with_restriction(group)
                .map_err(err)?,
        )
        .and_then(|s| s.blow_up("E", &[Incidence::at("G-", p)]))
        .map_err(err)
}

fn exact(w: &Option<DivergenceWitness>) -> Option<Rational> {
    w.as_ref().and_then(|w| w.exact().cloned())
}

// ------------------------------------------------------------- criteria

fn cy_vol() -> Result<String, String> {
    let oracle = int(11 * 11 - 9 * 11);
    let mut configs: Vec<ScenarioConfig> = [Some(1), Some(2), Some(3), Some(4), Some(5), Some(6), Some(7), Some(9), Some(12), None]
        .into_iter()
        .map(|n| ScenarioConfig::cyclic(Family::CalabiYau, n))
        .collect();
    let mut mixed = ScenarioConfig::cyclic(Family::CalabiYau, Some(1));
    mixed.group = GroupSpec {
        free_rank: 0,
        torsion_orders: vec![2, 3],
    };
    for (name, t) in [("p1", vec![1, 0]), ("p2", vec![0, 1]), ("p5", vec![1, 2])] {
        mixed.points.insert(name.into(), PointSpec { free: vec![], torsion: t });
    }
    configs.push(mixed);
    let mut with_free = ScenarioConfig::cyclic(Family::CalabiYau, Some(1));
    with_free.group = GroupSpec {
        free_rank: 1,
        torsion_orders: vec![4],
    };
    with_free.points.insert("p3".into(), PointSpec { free: vec![2], torsion: vec![1] });
    with_free.points.insert("p11".into(), PointSpec { free: vec![-2], torsion: vec![3] });
    configs.push(with_free);

    for cfg in &configs {
        let rep = families::build(cfg, &BuildOptions::default()).map_err(err)?;
        ensure!(rep.volume == oracle, "volume {} for {}", rep.volume, cfg.to_json());
        ensure!(rep.ledger.all_equal(), "ledger mismatch for {}", cfg.to_json());
    }
    Ok(format!("vol = {oracle} on {} torsion configurations", configs.len()))
}

fn cy_a2() -> Result<String, String> {
    let s = eleven_on_cubic()?;
    let e = s.sum_of((1..=11).map(|j| format!("E{j}"))).map_err(err)?;
    let a = &DivisorClass::from_ints([("H", 5)]) - &e;
    let a2 = s.self_intersection(&a).map_err(err)?;
    ensure!(a2 == int(25 - 11) && a2 == int(14), "A^2 = {a2}");
    let rep = positivity::very_ample_equal_mult(&s, &a, "F", 1).map_err(err)?;
    let lhs = rep.witness("(d+3)e").cloned();
    let rhs = rep.witness("r(m+1)").cloned();
    ensure!(lhs == Some(int((5 + 3) * 3)), "(d+3)e = {lhs:?}");
    ensure!(rhs == Some(int(11 * 2)), "r(m+1) = {rhs:?}");
    ensure!(rep.verdict == Verdict::VeryAmple, "verdict {:?}", rep.verdict);
    Ok("A^2 = 14, (5+3)*3 = 24 > 22, very ample".into())
}

fn cy_mrule() -> Result<String, String> {
    let mut seen = Vec::new();
    for n in [5u64, 7, 9, 12] {
        let rep = families::build(&ScenarioConfig::cyclic(Family::CalabiYau, Some(n)), &BuildOptions::default())
            .map_err(err)?;
        let rule = if n % 3 == 0 { n / 3 } else { n };
        // M restricts to 3 * (p11 - p0) on the cubic
        let brute = least_killing_multiple(3, n);
        ensure!(rule == brute, "rule {rule} vs brute force {brute} at n = {n}");
        ensure!(rep.semiample_multiple == Order::Finite(rule), "n = {n}: {:?}", rep.semiample_multiple);
        seen.push(format!("{n}->{rule}"));
    }
    let free = families::build(&ScenarioConfig::cyclic(Family::CalabiYau, None), &BuildOptions::default())
        .map_err(err)?;
    ensure!(free.semiample_multiple == Order::Infinite, "free: {:?}", free.semiample_multiple);
    Ok(format!("{}, free -> infinite", seen.join(", ")))
}

fn cy_divergence() -> Result<String, String> {
    let ns = [5u64, 7, 11, 13];
    let rows = families::sweep(Family::CalabiYau, &ns, &BuildOptions::default()).map_err(err)?;
    let mut prev = int(0);
    let mut shown = Vec::new();
    for (row, &n) in rows.iter().zip(&ns) {
        let w = exact(&row.divergence).ok_or_else(|| format!("n = {n}: {:?}", row.divergence))?;
        let brute = int(cy_divergence_brute(n));
        let floor = int(2 * Integer::div_ceil(&(10 + n as i64), &3));
        ensure!(w == brute, "n = {n}: witness {w}, brute force {brute}");
        ensure!(w >= floor, "n = {n}: witness {w} below {floor}");
        ensure!(w >= prev, "n = {n}: witness {w} decreases from {prev}");
        prev = w.clone();
        shown.push(format!("{n}->{w}"));
    }
    Ok(shown.join(", "))
}

fn k1_vol() -> Result<String, String> {
    let rep = families::build(&ScenarioConfig::cyclic(Family::KodairaOne, Some(7)), &BuildOptions::default())
        .map_err(err)?;
    // M = 11H - 3 sum E, G = 3H - (E_1 + ... + E_9)
    let mg = 11 * 3 - 3 * 9;
    let m2 = 11 * 11 - 9 * 11;
    let oracle = int(2 * (2 * mg + m2));
    let mg_lib = rep.ledger.get("k1.MG").map(|e| e.computed.to_string());
    ensure!(mg == 6 && mg_lib.as_deref() == Some("6"), "M.G = {mg_lib:?}");
    ensure!(rep.volume == oracle && oracle == int(68), "vol = {}", rep.volume);
    Ok("vol = 2(2*6 + 22) = 68".into())
}

fn gt_w_oracle(r: u32) -> (BTreeMap<String, Rational>, Vec<BTreeMap<String, Rational>>) {
    let mut c = BTreeMap::from([("H".to_string(), int(3))]);
    let mut lines: Vec<BTreeMap<String, Rational>> = (0..r).map(|_| BTreeMap::from([("H".to_string(), int(1))])).collect();
    for j in 0..r {
        for l in 0..3 {
            let label = format!("x{j}.{l}");
            c.insert(label.clone(), int(-1));
            lines[j as usize].insert(label, int(-1));
        }
        for k in (j + 1)..r {
            let label = format!("y{j}.{k}");
            lines[j as usize].insert(label.clone(), int(-1));
            lines[k as usize].insert(label, int(-1));
        }
    }
    (c, lines)
}

fn gt_kz2() -> Result<String, String> {
    for r in 4u32..=10 {
        let ri = i64::from(r);
        let coef = frac(ri - 3, 2 * (ri + 1));
        let closed = frac(ri * (ri - 1) * (ri - 3), 2 * (ri + 1));

        let (c, lines) = gt_w_oracle(r);
        let mut kz: BTreeMap<String, Rational> = BTreeMap::new();
        let mut add = |v: &BTreeMap<String, Rational>, t: &Rational| {
            for (k, x) in v {
                *kz.entry(k.clone()).or_insert_with(Rational::zero) += x * t;
            }
        };
        add(&BTreeMap::from([("H".to_string(), int(1))]), &frac(ri - 3, 2));
        add(&c, &frac(1, 2));
        for l in &lines {
            add(l, &coef);
        }
        let oracle = diag_dot(&kz, &kz);

        let w = build_w(r, &BuildOptions::default(), AbelianGroup::trivial()).map_err(err)?;
        let mut lib = DivisorClass::basis("H").scale(&frac(ri - 3, 2));
        lib = &lib + &w.strict_transform("C").map_err(err)?.scale(&frac(1, 2));
        for j in 1..=r {
            lib = &lib + &w.strict_transform(&format!("L{j}")).map_err(err)?.scale(&coef);
        }
        let lib2 = w.self_intersection(&lib).map_err(err)?;
        ensure!(oracle == closed, "r = {r}: quadratic form {oracle}, closed form {closed}");
        ensure!(lib2 == closed, "r = {r}: lattice {lib2}, closed form {closed}");

        let mut names = vec!["C".to_string()];
        names.extend((1..=r).map(|j| format!("L{j}")));
        let tau = Contraction::new(&w, &names).map_err(err)?;
        let tk = tau.log_discrepancies(&[], &DivisorClass::zero()).map_err(err)?;
        ensure!(tk.pullback == lib, "r = {r}: solved K_Z pullback differs from the formula");
    }
    Ok("r = 4..10 agree with r(r-1)(r-3)/(2(r+1)) and the diagonal form".into())
}

fn gt_disc() -> Result<String, String> {
    for r in 4u32..=10 {
        let ri = i64::from(r);
        let (c, lines) = gt_w_oracle(r);
        // K_W = -3H + sum of exceptional
        let mut k: BTreeMap<String, Rational> = c.keys().chain(lines.iter().flat_map(|l| l.keys())).map(|k| (k.clone(), int(1))).collect();
        k.insert("H".into(), int(-3));
        // by symmetry K_W + x C' + y sum L' is orthogonal to C' and every L'
        let sum_l = |v: &BTreeMap<String, Rational>| lines.iter().fold(Rational::zero(), |acc, l| acc + diag_dot(v, l));
        let m = vec![
            vec![diag_dot(&c, &c), sum_l(&c)],
            vec![diag_dot(&lines[0], &c), sum_l(&lines[0])],
        ];
        let rhs = vec![-diag_dot(&k, &c), -diag_dot(&k, &lines[0])];
        let xy = cramer(&m, &rhs);
        let oracle_disc = Rational::one() - &xy[1];
        let l2 = diag_dot(&lines[0], &lines[0]);

        let w = build_w(r, &BuildOptions::default(), AbelianGroup::trivial()).map_err(err)?;
        let mut names = vec!["C".to_string()];
        names.extend((1..=r).map(|j| format!("L{j}")));
        let tau = Contraction::new(&w, &names).map_err(err)?;
        let tk = tau.log_discrepancies(&[], &DivisorClass::zero()).map_err(err)?;
        for j in 1..=r {
            let name = format!("L{j}");
            let a = tk.get(&name).cloned();
            ensure!(a == Some(frac(2, ri + 1)), "r = {r}: a({name}) = {a:?}");
            let sq = w.self_intersection(&w.strict_transform(&name).map_err(err)?).map_err(err)?;
            ensure!(sq == int(-1 - ri), "r = {r}: ({name})^2 = {sq}");
        }
        ensure!(oracle_disc == frac(2, ri + 1), "r = {r}: oracle discrepancy {oracle_disc}");
        ensure!(l2 == int(-1 - ri), "r = {r}: oracle L'^2 = {l2}");
        ensure!(xy[0].is_one(), "r = {r}: oracle C' coefficient {}", xy[0]);
    }
    Ok("a(L'_j) = 2/(r+1), L'_j^2 = -1-r for r = 4..10".into())
}

fn gt_m0() -> Result<String, String> {
    for r in [4u32, 5, 6] {
        let group = AbelianGroup::cyclic(5);
        let p = group.torsion_generator(0);
        let w = build_w(r, &BuildOptions::default(), group).map_err(err)?;
        let mut names = vec!["C".to_string()];
        names.extend((1..=r).map(|j| format!("L{j}")));
        let kz = Contraction::new(&w, &names)
            .and_then(|t| t.log_discrepancies(&[], &DivisorClass::zero()))
            .map_err(err)?
            .pullback;
        let y = w
            .blow_up("E", &[Incidence::at("C", p)])
            .and_then(|y| y.mark_curve(MarkedCurve::new("E", DivisorClass::basis("E"), 0)))
            .map_err(err)?;
        let pi = Contraction::new(&y, &names).map_err(err)?;
        let kx = pi.log_discrepancies(&[], &DivisorClass::zero()).map_err(err)?.pullback;
        let e = DivisorClass::basis("E");
        let ex = pi.numerical_pullback(&e).map_err(err)?;
        let diff = &kx - &kz;
        let m = y.intersect(&diff, &e).map_err(err)? / y.intersect(&ex, &e).map_err(err)?;
        ensure!(m.is_zero(), "r = {r}: m = {m}");
        ensure!(diff == ex.scale(&m), "r = {r}: K_X - f^*K_Z is not a multiple of E_X");

        let mut cfg = ScenarioConfig::cyclic(Family::GeneralType, Some(5));
        cfg.parameters.r = Some(r);
        cfg.parameters.d = Some(families::config::general_type_min_d(r));
        let rep = families::build(&cfg, &BuildOptions::default()).map_err(err)?;
        let led = rep.ledger.get("gt.m0").map(|e| (e.equal, e.computed.to_string()));
        ensure!(led == Some((true, "0".into())), "r = {r}: ledger {led:?}");
    }
    Ok("m = 0 for r = 4, 5, 6".into())
}

fn wf_lattice() -> Result<String, String> {
    let y = weak_fano_y(9)?;
    let g = y.strict_transform("G-").map_err(err)?;
    let e = DivisorClass::basis("E");
    let c_plus = DivisorClass::from_ints([("C-", 1), ("F", 3)]);
    let g2 = y.self_intersection(&g).map_err(err)?;
    ensure!(g2 == int(-3 - 1), "(G-)^2 = {g2}");

    let c = Contraction::new(&y, &["G-"]).map_err(err)?;
    let b = c.pullback_coefficients(&e).map_err(err)?;
    // E.G- = 1, so b = -1/(-4)
    ensure!(b == vec![frac(1, 4)], "pullback coefficient {b:?}");
    let ex2 = c.pushforward_intersection(&e, &e).map_err(err)?;
    ensure!(ex2 == int(-1) + frac(1, 4), "E_X^2 = {ex2}");
    ensure!(ex2 == frac(-3, 4), "E_X^2 = {ex2}");

    // N = C+ - E/2 has N.G- = -1/2, so N_Y = N - G-/8
    let n = &c_plus - &e.scale(&frac(1, 2));
    let n_oracle = &n - &g.scale(&frac(1, 8));
    let n_y = c.numerical_pullback(&n).map_err(err)?;
    ensure!(n_y == n_oracle, "N_Y = {n_y}");
    let n2 = y.self_intersection(&n_y).map_err(err)?;
    ensure!(n2 == frac(45, 16), "N^2 = {n2}");

    let l = DivisorClass::from_ints([("C-", 5), ("F", 24), ("E", -1)]);
    ensure!(n_y.scale_int(8) == &l + &g.scale_int(2), "8N_Y != L + 2G-");
    let rep = positivity::very_ample_ruled_blowup(&y, &l, &[]).map_err(err)?;
    let b_w = rep.witness("b").cloned();
    let bound = rep.witness("ad + 2g + 1 + sum m_i").cloned();
    ensure!(b_w == Some(int(24)) && bound == Some(int(5 * 3 + 2 + 1 + 1)), "b = {b_w:?}, bound = {bound:?}");
    ensure!(rep.verdict == Verdict::VeryAmple, "verdict {:?}", rep.verdict);
    Ok("(G-)^2 = -4, b = 1/4, E_X^2 = -3/4, N^2 = 45/16, 8N_Y = L + 2G-, 24 >= 19".into())
}

fn wf_h2() -> Result<String, String> {
    let y = weak_fano_y(1)?;
    let c = Contraction::new(&y, &["G-"]).map_err(err)?;
    let mut checked = 0;
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            let h = DivisorClass::from_ints([("C-", a), ("F", 3 * a + b), ("E", -b)]);
            let expected = int((a + b) * (3 * a - b));
            let up = y.self_intersection(&h).map_err(err)?;
            let down = c.pushforward_intersection(&h, &h).map_err(err)?;
            ensure!(up == expected && down == expected, "a = {a}, b = {b}: {up} / {down} vs {expected}");
            checked += 1;
        }
    }
    Ok(format!("H^2 = (a+b)(3a-b) on {checked} pairs"))
}

// ------------------------------------------------------------- properties

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn q() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn base_lattice(kind: usize, points: usize) -> SurfaceLattice {
    let mut s = match kind {
        0 => SurfaceLattice::projective_plane(),
        1 => SurfaceLattice::ruled_surface(0, 2),
        _ => SurfaceLattice::ruled_surface(1, 3),
    };
    for j in 0..points {
        s = s.blow_up(&format!("X{j}"), &[]).unwrap();
    }
    s
}

fn class_from(s: &SurfaceLattice, coeffs: &[Rational]) -> DivisorClass {
    DivisorClass::from_terms(s.basis().iter().zip(coeffs).map(|(b, c)| (b.name.clone(), c.clone())))
}

fn prop_bilinear() -> Result<String, String> {
    let strat = (
        0usize..3,
        0usize..5,
        prop::collection::vec(q(), 7),
        prop::collection::vec(q(), 7),
        prop::collection::vec(q(), 7),
        q(),
        q(),
    );
    runner(1000)
        .run(&strat, |(kind, k, c1, c2, c3, a, b)| {
            let s = base_lattice(kind, k);
            let (d1, d2, d3) = (class_from(&s, &c1), class_from(&s, &c2), class_from(&s, &c3));
            let combo = &d1.scale(&a) + &d2.scale(&b);
            let lhs = s.intersect(&combo, &d3).unwrap();
            let rhs = &a * s.intersect(&d1, &d3).unwrap() + &b * s.intersect(&d2, &d3).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(s.intersect(&d1, &d2).unwrap(), s.intersect(&d2, &d1).unwrap());
            Ok(())
        })
        .map(|_| "1000 cases".into())
        .map_err(|e| e.to_string())
}

fn prop_blow_up() -> Result<String, String> {
    let strat = (0usize..3, 0usize..5, prop::collection::vec(q(), 7));
    runner(256)
        .run(&strat, |(kind, k, coeffs)| {
            let s = base_lattice(kind, k).mark_curve(MarkedCurve::new("T", class_from(&base_lattice(kind, k), &[int(1)]), 0)).unwrap();
            let d = class_from(&s, &coeffs);
            let t = s.blow_up("Z", &[Incidence::on("T")]).unwrap();
            let z = DivisorClass::basis("Z");
            for label in s.basis() {
                prop_assert!(t.intersect(&z, &DivisorClass::basis(&label.name)).unwrap().is_zero());
            }
            prop_assert_eq!(t.self_intersection(&z).unwrap(), int(-1));
            prop_assert_eq!(t.intersect(&d, &z).unwrap(), int(0));
            let k_old = s.self_intersection(s.canonical()).unwrap();
            prop_assert_eq!(t.self_intersection(t.canonical()).unwrap(), k_old - int(1));
            prop_assert_eq!(t.canonical().clone(), s.canonical() + &z);
            let c_old = s.self_intersection(&s.strict_transform("T").unwrap()).unwrap();
            prop_assert_eq!(t.self_intersection(&t.strict_transform("T").unwrap()).unwrap(), c_old - int(1));
            Ok(())
        })
        .map(|_| "256 cases".into())
        .map_err(|e| e.to_string())
}

/// Random strictly diagonally dominant negative definite configuration of
/// rank `k <= 4` on a blow-up of the plane, with random `H.E_i`.
#[derive(Debug, Clone)]
struct Config4 {
    k: usize,
    gram: Vec<Vec<i64>>,
    h_dot: Vec<i64>,
}

fn config4() -> impl Strategy<Value = Config4> {
    (1usize..=4, prop::collection::vec(-2i64..=2, 6), prop::collection::vec(1i64..=4, 4), prop::collection::vec(-2i64..=2, 4))
        .prop_map(|(k, off, extra, h_dot)| {
            let mut gram = vec![vec![0i64; k]; k];
            let mut idx = 0;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if i < k && j < k {
                        gram[i][j] = off[idx];
                        gram[j][i] = off[idx];
                    }
                    idx += 1;
                }
            }
            for i in 0..k {
                let row: i64 = (0..k).filter(|&j| j != i).map(|j| gram[i][j].abs()).sum();
                gram[i][i] = -row - extra[i];
            }
            Config4 { k, gram, h_dot: h_dot[..k].to_vec() }
        })
}

fn config4_lattice(c: &Config4) -> SurfaceLattice {
    let mut s = SurfaceLattice::projective_plane();
    for i in 0..c.k {
        s = s.blow_up(&format!("E{i}"), &[]).unwrap();
    }
    for i in 0..c.k {
        s = s.with_gram_entry("H", &format!("E{i}"), int(c.h_dot[i])).unwrap();
        for j in 0..c.k {
            s = s.with_gram_entry(&format!("E{i}"), &format!("E{j}"), int(c.gram[i][j])).unwrap();
        }
    }
    for i in 0..c.k {
        s = s.mark_curve(MarkedCurve::new(&format!("E{i}"), DivisorClass::basis(&format!("E{i}")), 0)).unwrap();
    }
    s
}

fn config4_names(c: &Config4) -> Vec<String> {
    (0..c.k).map(|i| format!("E{i}")).collect()
}

fn config4_class(c: &Config4, v: &[Rational]) -> DivisorClass {
    let mut d = DivisorClass::term("H", v[0].clone());
    for i in 0..c.k {
        d.add_term(&format!("E{i}"), v[i + 1].clone());
    }
    d
}

fn prop_pullback() -> Result<String, String> {
    let strat = (config4(), prop::collection::vec(q(), 5), prop::collection::vec(q(), 5), q(), q());
    runner(256)
        .run(&strat, |(cfg, v1, v2, a, b)| {
            let s = config4_lattice(&cfg);
            let pi = Contraction::new(&s, &config4_names(&cfg)).unwrap();
            let (d1, d2) = (config4_class(&cfg, &v1), config4_class(&cfg, &v2));
            let p1 = pi.numerical_pullback(&d1).unwrap();
            let p2 = pi.numerical_pullback(&d2).unwrap();
            for e in pi.curve_classes() {
                prop_assert!(s.intersect(&p1, e).unwrap().is_zero());
            }
            let combo = &d1.scale(&a) + &d2.scale(&b);
            prop_assert_eq!(pi.numerical_pullback(&combo).unwrap(), &p1.scale(&a) + &p2.scale(&b));
            // projection formula
            let pp = s.intersect(&p1, &p2).unwrap();
            prop_assert_eq!(pp.clone(), s.intersect(&p1, &d2).unwrap());
            prop_assert_eq!(pp, pi.pushforward_intersection(&d1, &d2).unwrap());
            Ok(())
        })
        .map(|_| "256 cases".into())
        .map_err(|e| e.to_string())
}

fn prop_oracle() -> Result<String, String> {
    let strat = (config4(), prop::collection::vec(q(), 5));
    runner(200)
        .run(&strat, |(cfg, v)| {
            let m: Vec<Vec<Rational>> = cfg.gram.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            // negative definite: leading minors alternate in sign
            for k in 1..=cfg.k {
                let block: Vec<Vec<Rational>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
                let det = laplace_det(&block);
                let sign_ok = if k % 2 == 1 { det < Rational::zero() } else { det > Rational::zero() };
                prop_assert!(sign_ok, "minor {} has determinant {}", k, det);
            }
            let rhs: Vec<Rational> = (0..cfg.k)
                .map(|j| {
                    let dot = &v[0] * int(cfg.h_dot[j]) + (0..cfg.k).fold(Rational::zero(), |acc, i| acc + &v[i + 1] * int(cfg.gram[i][j]));
                    -dot
                })
                .collect();
            let x = cramer(&m, &rhs);
            let s = config4_lattice(&cfg);
            let d = config4_class(&cfg, &v);
            let pi = Contraction::new(&s, &config4_names(&cfg)).unwrap();
            let plain = pi.clone().uncached();
            prop_assert_eq!(pi.pullback_coefficients(&d).unwrap(), x.clone());
            prop_assert_eq!(plain.pullback_coefficients(&d).unwrap(), x.clone());
            let mut oracle = d.clone();
            for (i, xi) in x.iter().enumerate() {
                oracle.add_term(&format!("E{i}"), xi.clone());
            }
            prop_assert_eq!(pi.numerical_pullback(&d).unwrap(), oracle);
            Ok(())
        })
        .map(|_| "200 cases".into())
        .map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
struct CubicPoints {
    free_rank: usize,
    orders: Vec<u64>,
    points: Vec<(Vec<i64>, Vec<i64>)>,
}

fn cubic_points() -> impl Strategy<Value = CubicPoints> {
    (0usize..=1, prop::collection::vec(2u64..=12, 1..=2), 1usize..=6).prop_flat_map(|(free_rank, orders, k)| {
        let point = (
            prop::collection::vec(-3i64..=3, free_rank),
            prop::collection::vec(0i64..=12, orders.len()),
        );
        prop::collection::vec(point, k).prop_map(move |points| CubicPoints {
            free_rank,
            orders: orders.clone(),
            points,
        })
    })
}

fn cubic_lattice(c: &CubicPoints) -> SurfaceLattice {
    let group = AbelianGroup::new(c.free_rank, c.orders.clone()).unwrap();
    let mut s = SurfaceLattice::projective_plane()
        .mark_curve(MarkedCurve::plane_curve("C", 3, 1).with_restriction(group.clone()).unwrap())
        .unwrap();
    for (i, (f, t)) in c.points.iter().enumerate() {
        let p = group.element(f.clone(), t.clone()).unwrap();
        s = s.blow_up(&format!("P{i}"), &[Incidence::at("C", p)]).unwrap();
    }
    s
}

fn prop_restriction() -> Result<String, String> {
    let strat = cubic_points().prop_flat_map(|c| {
        let k = c.points.len();
        (
            Just(c),
            prop::collection::vec(-6i64..=6, k + 1),
            prop::collection::vec(-6i64..=6, k + 1),
        )
    });
    runner(256)
        .run(&strat, |(c, a, b)| {
            let s = cubic_lattice(&c);
            let class = |v: &[i64]| {
                let mut d = DivisorClass::term("H", int(v[0]));
                for i in 0..c.points.len() {
                    d.add_term(&format!("P{i}"), int(v[i + 1]));
                }
                d
            };
            let (l1, l2) = (class(&a), class(&b));
            let r1 = curvecfg::restrict(&s, &l1, "C").unwrap();
            let r2 = curvecfg::restrict(&s, &l2, "C").unwrap();
            prop_assert_eq!(curvecfg::restrict(&s, &(&l1 + &l2), "C").unwrap(), r1.add(&r2).unwrap());
            // coordinates by hand
            prop_assert_eq!(r1.degree, 3 * a[0] + a[1..].iter().sum::<i64>());
            for (t, &n) in c.orders.iter().enumerate() {
                let coord = c.points.iter().zip(&a[1..]).map(|(p, x)| p.1[t] * x).sum::<i64>().rem_euclid(n as i64);
                prop_assert_eq!(r1.element.torsion_coords()[t] as i64, coord);
            }
            Ok(())
        })
        .map(|_| "256 cases".into())
        .map_err(|e| e.to_string())
}

fn prop_order_law() -> Result<String, String> {
    let strat = cubic_points().prop_flat_map(|c| {
        let k = c.points.len();
        (Just(c), prop::collection::vec(0i64..=5, k), 1i64..=30)
    });
    runner(256)
        .run(&strat, |(c, mut l, k)| {
            let s = cubic_lattice(&c);
            let total: i64 = l.iter().sum();
            *l.last_mut().unwrap() += (3 - total.rem_euclid(3)) % 3;
            let d = l.iter().sum::<i64>() / 3;
            let mut class = DivisorClass::term("H", int(d));
            for (i, li) in l.iter().enumerate() {
                class.add_term(&format!("P{i}"), int(-li));
            }
            let rc = curvecfg::restrict(&s, &class, "C").unwrap();
            prop_assert_eq!(rc.degree, 0);
            let t = curvecfg::triviality_order(&rc);
            let tk = curvecfg::triviality_order(&curvecfg::restrict(&s, &class.scale_int(k), "C").unwrap());
            match t {
                Order::Finite(t) => prop_assert_eq!(tk, Order::Finite(t / t.gcd(&(k as u64)))),
                Order::Infinite => prop_assert_eq!(tk, Order::Infinite),
            }
            Ok(())
        })
        .map(|_| "256 cases".into())
        .map_err(|e| e.to_string())
}

fn prop_boundaries() -> Result<String, String> {
    let mut r = runner(128);
    // plane blow-up: d = 1 + sum m_i flips
    r.run(&prop::collection::vec(1i64..=4, 1..=6), |mults| {
        let mut s = SurfaceLattice::projective_plane();
        for i in 0..mults.len() {
            s = s.blow_up(&format!("P{i}"), &[]).unwrap();
        }
        let total: i64 = mults.iter().sum();
        let at = |d: i64| {
            let mut l = DivisorClass::term("H", int(d));
            for (i, m) in mults.iter().enumerate() {
                l.add_term(&format!("P{i}"), int(-m));
            }
            positivity::very_ample_p2_blowup(&s, &l).unwrap().verdict
        };
        prop_assert_eq!(at(1 + total), Verdict::VeryAmple);
        prop_assert_eq!(at(total), Verdict::Inconclusive);
        Ok(())
    })
    .map_err(|e| format!("plane blow-up: {e}"))?;

    // equal multiplicities on a plane curve: (d+3)e > r(m+1) and r >= e^2 + 2
    r.run(&(1u32..=3, 0i64..=6, 1i64..=3), |(e, extra, m)| {
        let ei = i64::from(e);
        let genus = if e == 3 { 1 } else { 0 };
        let build = |r: i64| {
            let mut s = SurfaceLattice::projective_plane()
                .mark_curve(MarkedCurve::plane_curve("C", e, genus))
                .unwrap();
            for i in 0..r {
                s = s.blow_up(&format!("P{i}"), &[Incidence::on("C")]).unwrap();
            }
            s
        };
        let at = |s: &SurfaceLattice, r: i64, d: i64| {
            let mut l = DivisorClass::term("H", int(d));
            for i in 0..r {
                l.add_term(&format!("P{i}"), int(-m));
            }
            positivity::very_ample_equal_mult(s, &l, "C", m).unwrap().verdict
        };
        let r_pts = ei * ei + 2 + extra;
        let s = build(r_pts);
        let d0 = Integer::div_floor(&(r_pts * (m + 1)), &ei) - 2;
        prop_assert!((d0 + 3) * ei > r_pts * (m + 1) && (d0 + 2) * ei <= r_pts * (m + 1));
        prop_assert_eq!(at(&s, r_pts, d0), Verdict::VeryAmple);
        prop_assert_eq!(at(&s, r_pts, d0 - 1), Verdict::Inconclusive);
        let few = ei * ei + 1;
        let s_few = build(few);
        prop_assert_eq!(at(&s_few, few, 10 * few), Verdict::Inconclusive);
        Ok(())
    })
    .map_err(|e| format!("equal multiplicities: {e}"))?;

    // ruled blow-up: b >= ad + 2g + 1 + sum m_i and a - sum_G m_i >= 1
    r.run(&(0u32..=2, 0u32..=3, prop::collection::vec(1i64..=3, 1..=4), 0i64..=3), |(g, inv, mults, slack)| {
        let mut s = SurfaceLattice::ruled_surface(g, inv);
        for i in 0..mults.len() {
            s = s.blow_up(&format!("P{i}"), &[]).unwrap();
        }
        let total: i64 = mults.iter().sum();
        let labels: Vec<String> = (0..mults.len()).map(|i| format!("P{i}")).collect();
        let at = |a: i64, b: i64, groups: &[Vec<String>]| {
            let mut l = DivisorClass::from_ints([("C-", a), ("F", b)]);
            for (i, m) in mults.iter().enumerate() {
                l.add_term(&format!("P{i}"), int(-m));
            }
            positivity::very_ample_ruled_blowup(&s, &l, groups).unwrap().verdict
        };
        let a = total + 1 + slack;
        let bound = a * i64::from(inv) + 2 * i64::from(g) + 1 + total;
        prop_assert_eq!(at(a, bound, &[]), Verdict::VeryAmple);
        prop_assert_eq!(at(a, bound - 1, &[]), Verdict::Inconclusive);
        let one_fiber = vec![labels.clone()];
        let a_tight = total + 1;
        let bound_tight = a_tight * i64::from(inv) + 2 * i64::from(g) + 1 + total;
        prop_assert_eq!(at(a_tight, bound_tight, &one_fiber), Verdict::VeryAmple);
        let b_loose = (a_tight - 1) * i64::from(inv) + 2 * i64::from(g) + 1 + total + 5;
        prop_assert_eq!(at(a_tight - 1, b_loose, &one_fiber), Verdict::Inconclusive);
        Ok(())
    })
    .map_err(|e| format!("ruled blow-up: {e}"))?;
    Ok("plane, equal-multiplicity and ruled criteria flip at their bounds".into())
}

fn property_suite() -> Result<String, String> {
    let parts: [(&str, fn() -> Result<String, String>); 7] = [
        ("bilinearity/symmetry", prop_bilinear),
        ("blow-up orthogonality and K^2", prop_blow_up),
        ("pullback orthogonality, linearity, projection formula", prop_pullback),
        ("pullback vs Cramer oracle", prop_oracle),
        ("restriction additivity", prop_restriction),
        ("t/gcd(k,t) law", prop_order_law),
        ("criterion boundaries", prop_boundaries),
    ];
    let mut failed = Vec::new();
    for (name, f) in parts {
        match f() {
            Ok(detail) => println!("    ok   {name}: {detail}"),
            Err(e) => {
                println!("    FAIL {name}: {e}");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        Ok("all sub-properties hold".into())
    } else {
        Err(format!("failing: {}", failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let criteria: [(&'static str, fn() -> Result<String, String>); 11] = [
        ("cy.vol", cy_vol),
        ("cy.A2", cy_a2),
        ("cy.mrule", cy_mrule),
        ("cy.divergence", cy_divergence),
        ("k1.vol", k1_vol),
        ("gt.KZ2", gt_kz2),
        ("gt.disc", gt_disc),
        ("gt.m0", gt_m0),
        ("wf.lattice", wf_lattice),
        ("wf.H2", wf_h2),
        ("property_suite", property_suite),
    ];
    let mut all_ok = true;
    for (id, f) in criteria {
        let o = outcome(id, f());
        println!("{} {}: {}", if o.ok { "PASS" } else { "FAIL" }, o.id, o.detail);
        all_ok &= o.ok;
    }
    if all_ok {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
