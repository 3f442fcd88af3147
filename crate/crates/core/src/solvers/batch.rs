//! Batch decoding for requests that can be row-reduced so every request has
//! coordinate 0 set. Pairs are kept with coordinate 0 of their sum clear
//! before each step, so the correction vector always has it set and the
//! parity of its cycle forces an unbound pair onto it.

use crate::error::{Error, Result};
use crate::gf2::{canonical_hg, row_ops_to_all_ones, HgMatrix, RequestBatch};
use crate::graph::{pair_path, shift_pair_sums};
use crate::transforms::set_redundancy_column;

use super::{finish, padded, Draft, SetKind, Solution, Strategy};

/// Up to `2^{s−1}` requests over `2^s − 1` servers.
pub fn b_solution(m: &RequestBatch) -> Result<Solution> {
    let s = m.dim();
    let half = 1usize << (s - 1);
    if m.len() > half {
        return Err(Error::TooManyRequests {
            k: m.len(),
            max: half,
        });
    }
    let servers = (1usize << s) - 1;
    if m.is_empty() {
        let g = canonical_hg(s)?;
        let d = Draft {
            dim: s,
            cols: g.raw_columns().to_vec(),
            sets: vec![],
            kinds: vec![],
        };
        return finish(d, m, Strategy::Batch, None, servers);
    }
    let (transform, reduced) = row_ops_to_all_ones(m)?;
    let reqs = padded(&reduced, half, reduced.raw()[0]);
    let mut g = canonical_hg(s)?;
    let n = g.len();
    for (t, &v) in reqs.iter().enumerate().take(half - 1) {
        debug_assert!((0..t).all(|p| g.pair_sum_raw(p) & 1 == 1));
        steer(&mut g, t, v)?;
    }
    let v = reqs[half - 1];
    let last = if g.pair_sum_raw(half - 1) == v {
        vec![n - 2, n - 1]
    } else if g.raw(n - 1) == v {
        vec![n - 1]
    } else {
        set_redundancy_column(&mut g, v);
        vec![n - 2]
    };
    let k = m.len();
    let mut sets: Vec<Vec<usize>> = (0..k).map(|t| vec![2 * t, 2 * t + 1]).collect();
    let mut kinds = vec![SetKind::Pair; k];
    if k == half {
        sets[half - 1] = last;
        kinds[half - 1] = SetKind::Redundancy;
    }
    let d = Draft {
        dim: s,
        cols: g
            .raw_columns()
            .iter()
            .map(|&c| transform.apply_inverse(c))
            .collect(),
        sets,
        kinds,
    };
    finish(d, m, Strategy::Batch, None, servers)
}

fn steer(g: &mut HgMatrix, t: usize, v: u32) -> Result<()> {
    if g.pair_sum_raw(t) & 1 == 1 {
        // Among four unbound columns two agree in coordinate 0.
        let cand = 2 * t..2 * t + 4;
        let (p, h) = cand
            .clone()
            .flat_map(|p| cand.clone().filter(move |&h| h > p).map(move |h| (p, h)))
            .find(|&(p, h)| (g.raw(p) ^ g.raw(h)) & 1 == 0)
            .expect("pigeonhole");
        g.swap(2 * t, p);
        g.swap(2 * t + 1, h);
    }
    let a = v ^ g.pair_sum_raw(t);
    let far = pair_path(g, a, t)
        .iter()
        .rev()
        .map(|&i| i / 2)
        .find(|&p| p > t)
        .ok_or_else(|| Error::SearchExhausted {
            t,
            state: format!("{g:?} request {v:#b}"),
        })?;
    shift_pair_sums(g, a, t, far)
}
