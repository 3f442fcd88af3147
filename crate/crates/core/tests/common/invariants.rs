//! Invariant checks shared by the property suite and the acceptance run.
//! Each returns `Err` with a description on the first violation.

#![allow(dead_code)]

use fbcodes::gf2::{is_hg, row_ops_to_all_ones, Gf2Vec, HgMatrix, RequestBatch};
use fbcodes::graph::{
    apply_reordering, build_xtype_graph, cycle_partition, find_short_path, good_path_between_pair,
    short_subpath,
};
use fbcodes::params::{alpha_k, alpha_servers, fb23_k, Alpha};
use fbcodes::solvers::{clear_bad_cycles, fb_solution};
use fbcodes::transforms::{find_equiv_sums, find_good_or_bad_request, reorder_dependent_pairs};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($c:expr) => {
        if !$c {
            return Err(format!("{} at line {}", stringify!($c), line!()));
        }
    };
    ($c:expr, $($m:tt)+) => {
        if !$c {
            return Err(format!($($m)+));
        }
    };
}

macro_rules! ensure_eq {
    ($a:expr, $b:expr $(, $m:expr)*) => {{
        let (a, b) = (&$a, &$b);
        if a != b {
            #[allow(unused_mut)]
            let mut msg = format!("{} != {}: {:?} vs {:?} at line {}", stringify!($a), stringify!($b), a, b, line!());
            $(msg.push_str(&format!(" {:?}", $m));)*
            return Err(msg);
        }
    }};
}

pub fn random_hg(s: u32, seed: u64) -> HgMatrix {
    let mut cols: Vec<u32> = (0..1u32 << s).collect();
    cols.shuffle(&mut fbcodes::gen::rng(seed));
    HgMatrix::from_raw_columns(s, cols).unwrap()
}

fn nonzero(s: u32, r: &mut impl Rng) -> Gf2Vec {
    Gf2Vec::new(r.gen_range(1..1u32 << s), s).unwrap()
}

pub fn xtype_graph_is_two_regular(s: u32, seed: u64) -> Check {
    let g = random_hg(s, seed);
    let x = nonzero(s, &mut fbcodes::gen::rng(!seed));
    let graph = build_xtype_graph(&g, x).unwrap();
    ensure!((0..g.len()).all(|i| graph.degree(i) == 2));
    let part = cycle_partition(&graph);
    let total: usize = part.cycles.iter().map(|c| c.len()).sum();
    ensure_eq!(total, g.len());
    ensure!(part.cycles.iter().all(|c| c.len() % 2 == 0));
    Ok(())
}

pub fn shifting_touches_exactly_two_pair_sums(s: u32, seed: u64) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let g = random_hg(s, seed);
    let x = nonzero(s, &mut r);
    let t = r.gen_range(0..g.pairs());
    let path = good_path_between_pair(&g, x, t).unwrap();
    let others: Vec<usize> = path
        .nodes
        .iter()
        .map(|&i| i / 2)
        .filter(|&p| p != t)
        .collect();
    if others.is_empty() {
        return Ok(());
    }
    let m = others[r.gen_range(0..others.len())];
    let j = find_short_path(&g, x, t, m).unwrap();
    let sub = short_subpath(&g, x, t, m).unwrap();
    ensure_eq!(sub.first(), 2 * t + 1);
    ensure_eq!(sub.last(), j);
    let h = apply_reordering(g.clone(), &sub).unwrap();
    ensure!(h.check());
    for p in 0..g.pairs() {
        let delta = g.pair_sum_raw(p) ^ h.pair_sum_raw(p);
        let want = if p == t || p == m { x.bits() } else { 0 };
        ensure_eq!(delta, want, "pair {}", p);
    }
    Ok(())
}

pub fn full_pair_reordering_keeps_every_sum(s: u32, seed: u64) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let g = random_hg(s, seed);
    let x = nonzero(s, &mut r);
    let t = r.gen_range(0..g.pairs());
    let path = good_path_between_pair(&g, x, t).unwrap();
    let h = apply_reordering(g.clone(), &path).unwrap();
    ensure_eq!(h.pair_sums_raw(), g.pair_sums_raw());
    Ok(())
}

pub fn reordering_is_an_involution(s: u32, seed: u64) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let g = random_hg(s, seed);
    let x = nonzero(s, &mut r);
    let t = r.gen_range(0..g.pairs());
    let path = good_path_between_pair(&g, x, t).unwrap();
    let once = apply_reordering(g.clone(), &path).unwrap();
    let twice = apply_reordering(once, &path).unwrap();
    ensure_eq!(twice, g);
    Ok(())
}

pub fn good_path_structure_and_parity(s: u32, seed: u64) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let g = random_hg(s, seed);
    let x = nonzero(s, &mut r);
    let t = r.gen_range(0..g.pairs());
    let path = good_path_between_pair(&g, x, t).unwrap();
    path.validate(&g).unwrap();
    ensure_eq!(path.edges() % 2, 1);
    ensure_eq!((path.first(), path.last()), (2 * t, 2 * t + 1));
    // Walking the path: endpoints differ by x per x-edge plus the interior pair sums.
    let x_edges = path.edges().div_ceil(2);
    let mut acc = if x_edges % 2 == 1 { x.bits() } else { 0 };
    for w in path.nodes[1..path.nodes.len() - 1].chunks(2) {
        acc ^= g.raw(w[0]) ^ g.raw(w[1]);
    }
    ensure_eq!(acc, g.raw(path.first()) ^ g.raw(path.last()));
    Ok(())
}

pub fn cycle_pair_sums_follow_length_parity(s: u32, seed: u64) -> Check {
    let g = random_hg(s, seed);
    let x = nonzero(s, &mut fbcodes::gen::rng(!seed));
    let part = cycle_partition(&build_xtype_graph(&g, x).unwrap());
    for c in &part.cycles {
        let sum = c.pairs().iter().fold(0, |a, &p| a ^ g.pair_sum_raw(p));
        let half = c.len() / 2;
        ensure_eq!(sum, if half % 2 == 1 { x.bits() } else { 0 });
    }
    Ok(())
}

pub fn good_or_bad_postcondition(s: u32, seed: u64) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let g = random_hg(s, seed);
    let t = r.gen_range(0..g.pairs() - 1);
    let v = nonzero(s, &mut r);
    let y = g.pair_sum_raw(t);
    let out = find_good_or_bad_request(g.clone(), t, v).unwrap();
    ensure!(out.matrix.check());
    let want = if out.flag { v.bits() ^ y } else { v.bits() };
    ensure_eq!(out.matrix.pair_sum_raw(t), want);
    let last = g.pairs() - 1;
    for p in (0..last).filter(|&p| p != t) {
        ensure_eq!(out.matrix.pair_sum_raw(p), g.pair_sum_raw(p));
    }
    Ok(())
}

pub fn bad_set_after_clearing_is_bounded(s: u32, seed: u64) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let tau = fb23_k(s);
    let m = fbcodes::gen::random_batch(s, tau, &mut r);
    let (g, bad) = fb_solution(tau, &m).unwrap();
    let e = g.e();
    for t in 0..tau {
        let want = if bad.contains(&t) {
            m.raw()[t] ^ e
        } else {
            m.raw()[t]
        };
        ensure_eq!(g.pair_sum_raw(t), want);
    }
    let (g, bad) = clear_bad_cycles(g, bad).unwrap();
    ensure!(bad.len() <= (1usize << (s - 1)) / 3);
    let part = cycle_partition(&build_xtype_graph(&g, Gf2Vec::e(s).unwrap()).unwrap());
    let cycles: std::collections::BTreeSet<usize> =
        bad.iter().map(|&t| part.membership[t]).collect();
    ensure_eq!(cycles.len(), bad.len());
    for t in 0..tau {
        let want = if bad.contains(&t) {
            m.raw()[t] ^ e
        } else {
            m.raw()[t]
        };
        ensure_eq!(g.pair_sum_raw(t), want);
    }
    Ok(())
}

pub fn row_ops_preserve_hadamard_matrices(s: u32, seed: u64, k: usize) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let m = fbcodes::gen::random_odd_batch(s, k.min(1 << (s - 1)), &mut r);
    let mixed = {
        // Hide the structure behind a random invertible change of basis.
        let (t, _) = row_ops_to_all_ones(&m).unwrap();
        let raw: Vec<u32> = m.raw().iter().map(|&v| t.apply(v)).collect();
        RequestBatch::from_raw(s, raw).unwrap()
    };
    for batch in [&m, &mixed] {
        let (t, reduced) = row_ops_to_all_ones(batch).unwrap();
        ensure!(reduced.raw().iter().all(|&v| v & 1 == 1));
        for (&a, &b) in batch.raw().iter().zip(reduced.raw()) {
            ensure_eq!(t.apply(a), b);
            ensure_eq!(t.apply_inverse(b), a);
        }
        let g = random_hg(s, seed ^ 7);
        let image: Vec<Gf2Vec> = g.columns().into_iter().map(|c| t.apply_vec(c)).collect();
        ensure!(is_hg(&image));
    }
    Ok(())
}

pub fn equal_window_sums(s: u32, seed: u64) -> Check {
    let mut r = fbcodes::gen::rng(seed);
    let mut g = random_hg(s, seed);
    let n = g.len();
    let max_t = (n / 2 - 1 - (s as usize + 1)) / 2;
    let t = r.gen_range(0..=max_t);
    let before = g.pair_sums_raw();
    let h = reorder_dependent_pairs(&mut g, t, n).unwrap();
    ensure!(h >= 2);
    let p0 = 2 * t;
    let zero = (p0..p0 + h).fold(0, |a, p| a ^ g.pair_sum_raw(p));
    ensure_eq!(zero, 0);
    let window = p0..p0 + s as usize + 1;
    let last = g.pairs() - 1;
    let outside = |sums: &[u32]| -> Vec<u32> {
        (0..last)
            .filter(|p| !window.contains(p))
            .map(|p| sums[p])
            .collect()
    };
    ensure_eq!(outside(&g.pair_sums_raw()), outside(&before));
    let mid = g.pair_sums_raw();
    find_equiv_sums(&mut g, t, h).unwrap();
    ensure!(g.check());
    ensure_eq!(g.pair_sum_raw(p0), g.pair_sum_raw(p0 + 1));
    ensure_eq!(outside(&g.pair_sums_raw()), outside(&mid));
    // The window keeps its sums apart from pair 2t.
    let mut a: Vec<u32> = window.clone().skip(1).map(|p| mid[p]).collect();
    let mut b: Vec<u32> = window.clone().skip(1).map(|p| g.pair_sum_raw(p)).collect();
    a.sort_unstable();
    b.sort_unstable();
    ensure_eq!(a, b);
    Ok(())
}

pub fn alpha_arithmetic(s: u32, q: u64, frac: f64) -> Check {
    let lo = (2 * q).div_ceil(3);
    let p = lo + ((q - lo) as f64 * frac) as u64;
    let a = Alpha::new(p, q).unwrap();
    let (p, q) = (a.numer(), a.denom());
    let pow = 1u64 << s;
    let tail = ((3 * p - 2 * q) * pow).div_ceil(4 * q);
    ensure_eq!(alpha_servers(s, a) as u64, pow + tail - 1);
    ensure_eq!(alpha_k(s, a) as u64, p * (pow / 2) / q);
    ensure!(alpha_k(s, Alpha::two_thirds()) == fb23_k(s));
    ensure_eq!(alpha_servers(s, Alpha::two_thirds()), (1usize << s) - 1);
    ensure_eq!(
        alpha_servers(s, Alpha::one()),
        (1usize << s) + (1usize << s) / 4 - 1
    );
    Ok(())
}
