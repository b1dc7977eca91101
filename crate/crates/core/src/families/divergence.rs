//! Divergence witnesses: the least possible value of a polarisation
//! invariant compatible with the torsion data, found by exhaustive search.

use std::collections::{HashMap, HashSet};

use crate::curvecfg::{GroupElement, Order};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivergenceWitness {
    /// Exact minimum.
    Exact(Rational),
    /// No admissible class exists.
    Infinite,
    /// Nothing found within the search bound; the minimum is at least this.
    LowerBound(Rational),
}

impl DivergenceWitness {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            DivergenceWitness::Exact(q) => Some(q),
            _ => None,
        }
    }
}

impl std::fmt::Display for DivergenceWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DivergenceWitness::Exact(q) => write!(f, "{q}"),
            DivergenceWitness::Infinite => write!(f, "infinite"),
            DivergenceWitness::LowerBound(q) => write!(f, ">={q}"),
        }
    }
}

/// Default search bound on `d` for the eleven-point problem.
pub fn default_cy_bound(points: &[GroupElement]) -> u64 {
    let max_order = points
        .iter()
        .filter_map(|x| x.order().finite())
        .max()
        .unwrap_or(1);
    40 * max_order
}

/// True when some free coordinate makes `sum l_j x_j = 0` with all
/// `l_j >= 1` impossible: every point has that coordinate of one sign and
/// at least one is nonzero.
fn free_part_obstructed(xs: &[GroupElement]) -> bool {
    let rank = xs.first().map_or(0, |x| x.free_coords().len());
    (0..rank).any(|i| {
        let col: Vec<i64> = xs.iter().map(|x| x.free_coords()[i]).collect();
        col.iter().any(|&v| v != 0) && (col.iter().all(|&v| v >= 0) || col.iter().all(|&v| v <= 0))
    })
}

fn coords(x: &GroupElement) -> Vec<i64> {
    x.free_coords()
        .iter()
        .copied()
        .chain(x.torsion_coords().iter().map(|&t| t as i64))
        .collect()
}

fn add_scaled(acc: &[i64], x: &[i64], l: i64, free_rank: usize, orders: &[u64]) -> Vec<i64> {
    acc.iter()
        .zip(x)
        .enumerate()
        .map(|(i, (a, b))| {
            let v = a + l * b;
            if i < free_rank {
                v
            } else {
                v.rem_euclid(orders[i - free_rank] as i64)
            }
        })
        .collect()
}

/// Minimises `2d` over `l_1..l_k >= 1` with `sum l_j = 3d` and
/// `sum l_j x_j = 0`, where `x_j = p0 - p_j`. The search covers `d <= bound`.
pub fn calabi_yau(xs: &[GroupElement], bound: u64) -> DivergenceWitness {
    if xs.is_empty() {
        return DivergenceWitness::Exact(int(0));
    }
    if free_part_obstructed(xs) {
        return DivergenceWitness::Infinite;
    }
    let group = xs[0].group().clone();
    let rank = group.free_rank;
    let orders = group.torsion_orders.clone();
    let vecs: Vec<Vec<i64>> = xs.iter().map(coords).collect();
    let zero = vec![0i64; vecs[0].len()];
    let k = xs.len() as u64;
    let max_sum = 3 * bound;

    let found = if xs.iter().any(|x| x.has_free_part()) {
        // bounded reachability over (partial sum, element)
        let mut layer: HashSet<(u64, Vec<i64>)> = HashSet::from([(0, zero.clone())]);
        for (j, v) in vecs.iter().enumerate() {
            let remaining = k - j as u64 - 1;
            let mut next = HashSet::new();
            for (s, e) in &layer {
                let mut l = 1;
                while s + l + remaining <= max_sum {
                    next.insert((s + l, add_scaled(e, v, l as i64, rank, &orders)));
                    l += 1;
                }
            }
            layer = next;
        }
        layer
            .iter()
            .filter(|(s, e)| s % 3 == 0 && *e == zero)
            .map(|(s, _)| *s)
            .min()
    } else {
        // l_j beyond 3 * ord(x_j) never helps: subtracting 3 ord keeps both
        // the element and the residue of the sum.
        let mut best: HashMap<(Vec<i64>, u64), u64> = HashMap::from([((zero.clone(), 0), 0)]);
        for (x, v) in xs.iter().zip(&vecs) {
            let ord = x.order().finite().expect("torsion element");
            let mut next: HashMap<(Vec<i64>, u64), u64> = HashMap::new();
            for ((e, _), s) in &best {
                for l in 1..=3 * ord {
                    let key = (add_scaled(e, v, l as i64, rank, &orders), (s + l) % 3);
                    let total = s + l;
                    next.entry(key)
                        .and_modify(|t| *t = (*t).min(total))
                        .or_insert(total);
                }
            }
            best = next;
        }
        best.get(&(zero, 0)).copied().filter(|&s| s <= max_sum)
    };
    match found {
        Some(s) => DivergenceWitness::Exact(int(2 * (s / 3) as i64)),
        None => DivergenceWitness::LowerBound(int(2 * (bound as i64 + 1))),
    }
}

/// Minimises `(a + b)(3a - b)` over integers with `b >= 1`, `3a + b > 0`,
/// `a + b > 0`, `3a - b > 0` and `3b x = 0`, for `|a|, b <= bound`.
pub fn weak_fano(x: &GroupElement, bound: u64) -> DivergenceWitness {
    if x.has_free_part() {
        return DivergenceWitness::Infinite;
    }
    let bound = bound as i64;
    let mut best: Option<i64> = None;
    for b in 1..=bound {
        if !x.scale(3 * b).is_identity() {
            continue;
        }
        for a in -bound..=bound {
            if 3 * a + b > 0 && a + b > 0 && 3 * a - b > 0 {
                let v = (a + b) * (3 * a - b);
                best = Some(best.map_or(v, |w| w.min(v)));
            }
        }
    }
    match best {
        Some(v) => DivergenceWitness::Exact(int(v)),
        None => DivergenceWitness::LowerBound(int(0)),
    }
}

/// Default search bound for [`weak_fano`].
pub fn default_wf_bound(x: &GroupElement) -> u64 {
    match x.order() {
        Order::Finite(n) => 12 * n,
        Order::Infinite => 12,
    }
}
