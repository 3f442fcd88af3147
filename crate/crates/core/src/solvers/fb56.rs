//! The 5/6 construction: a first stage that binds `⌊2^s/3⌋` requests to
//! plain pairs with no bad outcomes, then a second stage that spends four
//! leftover columns per request.

use std::collections::BTreeSet;

use log::debug;

use crate::error::{Error, Result};
use crate::gf2::{canonical_hg, single_value_hg, HgMatrix, RequestBatch};
use crate::graph::{pair_path, shift_pair_sums};
use crate::params::{fb23_k, fb56_k, fb56_stage2};
use crate::transforms::{
    correction_in_place, find_equiv_sums, good_or_bad, reorder_dependent_pairs,
    set_redundancy_column,
};

use super::{fb23_solve, finish, padded, Draft, SetKind, Solution, Strategy};

/// More corrections than this at a single iteration means the progress
/// argument failed.
const MAX_CORRECTIONS: usize = 8;

#[derive(Clone, Debug)]
pub struct StageState {
    pub matrix: HgMatrix,
    /// Requests in their current (permuted) positions.
    pub requests: Vec<u32>,
    /// `order[p]` is the original index of the request now at position `p`.
    pub order: Vec<usize>,
    /// Pairs `0..frozen` hold their requests.
    pub frozen: usize,
    /// Number of times the correction step ran.
    pub corrections: usize,
}

/// Bind requests to pairs `0..tau`, each to exactly the request value,
/// permuting requests among positions `0..tau` as needed.
pub fn fb_solution2(tau: usize, m: &RequestBatch) -> Result<StageState> {
    let s = m.dim();
    if tau > fb23_k(s) || tau > m.len() {
        return Err(Error::Precondition(format!(
            "tau={tau} exceeds {} or k={}",
            fb23_k(s),
            m.len()
        )));
    }
    let mut st = StageState {
        matrix: canonical_hg(s)?,
        requests: m.raw().to_vec(),
        order: (0..m.len()).collect(),
        frozen: 0,
        corrections: 0,
    };
    if !m.is_empty() && m.all_identical() {
        st.matrix = single_value_hg(m.get(0))?;
        st.frozen = tau;
        return Ok(st);
    }
    for t in 0..tau {
        let mut fixes = 0;
        while !try_bind(&mut st, t, tau) {
            if fixes == MAX_CORRECTIONS {
                return Err(Error::SearchExhausted {
                    t,
                    state: format!("{:?} requests {:?}", st.matrix, st.requests),
                });
            }
            let vt = st.requests[t];
            let a = vt ^ st.matrix.pair_sum_raw(t);
            let t2 = correction_in_place(&mut st.matrix, a, vt, t)?;
            st.requests.swap(t, t2);
            st.order.swap(t, t2);
            fixes += 1;
            st.corrections += 1;
            debug!("correction at t={t} against pair {t2}");
        }
        st.frozen = t + 1;
        debug_assert!((0..=t).all(|p| st.matrix.pair_sum_raw(p) == st.requests[p]));
    }
    Ok(st)
}

/// Search partners `h` for column `2t` and requests `m ∈ [t, tau)` until
/// pair `t` can be made to sum to `v_m` without touching bound pairs.
fn try_bind(st: &mut StageState, t: usize, tau: usize) -> bool {
    let n = st.matrix.len();
    let mut seen = vec![false; n];
    let candidates: Vec<(usize, u32)> = (t..tau)
        .filter_map(|m| {
            let v = st.requests[m];
            (!std::mem::replace(&mut seen[v as usize], true)).then_some((m, v))
        })
        .collect();
    let g = &mut st.matrix;
    for h in 2 * t + 1..n {
        g.swap(2 * t + 1, h);
        let sum = g.pair_sum_raw(t);
        for &(m, vm) in &candidates {
            let found = if vm == sum {
                Some(None)
            } else {
                let a = vm ^ sum;
                pair_path(g, a, t)
                    .iter()
                    .rev()
                    .map(|&i| i / 2)
                    .find(|&p| p > t)
                    .map(|p| Some((a, p)))
            };
            if let Some(step) = found {
                if let Some((a, p)) = step {
                    shift_pair_sums(g, a, t, p).expect("same cycle");
                }
                st.requests.swap(t, m);
                st.order.swap(t, m);
                return true;
            }
        }
        g.swap(2 * t + 1, h);
    }
    false
}

/// Second stage on a working matrix whose first `unused_end` columns are
/// free: request `t` goes to columns `4t, 4t+1`, or `4t..4t+3` when its
/// index lands in the returned bad set.
pub fn fb_solution3(
    mut g: HgMatrix,
    tau: usize,
    m: &RequestBatch,
    unused_end: usize,
) -> Result<(HgMatrix, BTreeSet<usize>)> {
    if tau > m.len() {
        return Err(Error::Precondition(format!(
            "tau={tau} exceeds k={}",
            m.len()
        )));
    }
    let bad = stage_two(&mut g, m.raw(), tau, unused_end)?;
    Ok((g, bad))
}

fn stage_two(
    g: &mut HgMatrix,
    reqs: &[u32],
    tau: usize,
    unused_end: usize,
) -> Result<BTreeSet<usize>> {
    let mut bad = BTreeSet::new();
    for (t, &v) in reqs.iter().enumerate().take(tau) {
        let h = reorder_dependent_pairs(g, t, unused_end)?;
        find_equiv_sums(g, t, h)?;
        debug_assert_eq!(g.pair_sum_raw(2 * t), g.pair_sum_raw(2 * t + 1));
        if good_or_bad(g, 2 * t, v) {
            bad.insert(t);
        }
    }
    Ok(bad)
}

/// Up to `⌊(5/6)·2^{s−1}⌋ − s` requests over `2^s − 1` servers, for `s ≥ 7`.
/// Smaller `s` falls back to the 2/3 construction.
pub fn fb56_solve(m: &RequestBatch) -> Result<Solution> {
    let s = m.dim();
    if s < 7 {
        return fb23_solve(m);
    }
    let kmax = fb56_k(s);
    if m.len() > kmax {
        return Err(Error::TooManyRequests {
            k: m.len(),
            max: kmax,
        });
    }
    let servers = (1usize << s) - 1;
    let k = m.len();
    if k > 0 && m.all_identical() {
        let g = single_value_hg(m.get(0))?;
        let d = Draft {
            dim: s,
            cols: g.raw_columns().to_vec(),
            sets: (0..k).map(|t| vec![2 * t, 2 * t + 1]).collect(),
            kinds: vec![SetKind::Pair; k],
        };
        return finish(d, m, Strategy::Fb56, None, servers);
    }

    let tau1 = fb23_k(s);
    let tau2 = fb56_stage2(s);
    let e = 1u32 << (s - 1);
    let reqs = padded(m, tau1 + tau2 + 1, e);
    let first = RequestBatch::from_raw(s, reqs[..tau1].to_vec())?;
    let st = fb_solution2(tau1, &first)?;
    let n = st.matrix.len();

    // Working layout: free columns first, then the bound pairs, then the
    // last pair. perm[w] is the stage-one index of working column w.
    let free = n - 2 * tau1 - 2;
    let perm: Vec<usize> = (2 * tau1..n - 2)
        .chain(0..2 * tau1)
        .chain([n - 2, n - 1])
        .collect();
    let mut w = HgMatrix::from_raw_columns(s, perm.iter().map(|&i| st.matrix.raw(i)).collect())?;
    let bad = stage_two(&mut w, &reqs[tau1..], tau2, free)?;
    set_redundancy_column(&mut w, reqs[tau1 + tau2]);

    let mut cols = vec![0u32; n];
    for (wi, &i) in perm.iter().enumerate() {
        cols[i] = w.raw(wi);
    }
    let mut sets = vec![Vec::new(); reqs.len()];
    let mut kinds = vec![SetKind::Pair; reqs.len()];
    for p in 0..tau1 {
        sets[st.order[p]] = vec![2 * p, 2 * p + 1];
    }
    for t in 0..tau2 {
        let width = if bad.contains(&t) { 4 } else { 2 };
        sets[tau1 + t] = (4 * t..4 * t + width).map(|c| perm[c]).collect();
        kinds[tau1 + t] = SetKind::Window;
    }
    sets[tau1 + tau2] = vec![n - 2];
    kinds[tau1 + tau2] = SetKind::Redundancy;
    sets.truncate(k);
    kinds.truncate(k);
    let d = Draft {
        dim: s,
        cols,
        sets,
        kinds,
    };
    finish(d, m, Strategy::Fb56, None, servers)
}
