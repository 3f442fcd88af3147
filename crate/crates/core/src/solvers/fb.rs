//! The triple-set constructions: the 2/3 code, the α family and the
//! optimal `k = 2^s` code over a double matrix.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf2::{
    canonical_hg, check_dim, e_bits, mask, single_value_hg, Gf2Vec, HgMatrix, RequestBatch,
};
use crate::graph::{build_xtype_graph, cycle_partition, shift_pair_sums};
use crate::params::{alpha_k, alpha_servers, fb23_k, Alpha};
use crate::transforms::{good_or_bad, set_redundancy_column};

use super::{finish, padded, Draft, SetKind, Solution, Strategy};

/// Bind the first `tau` requests to pairs `0..tau` starting from the
/// canonical matrix. Returns the matrix and the indices that came out bad
/// (pair sum `v_t + e`).
pub fn fb_solution(tau: usize, m: &RequestBatch) -> Result<(HgMatrix, BTreeSet<usize>)> {
    let mut g = canonical_hg(m.dim())?;
    if tau >= g.pairs() || tau > m.len() {
        return Err(Error::Precondition(format!(
            "tau={tau} must be below {} and at most k={}",
            g.pairs(),
            m.len()
        )));
    }
    let bad = fb_solution_raw(&mut g, m.raw(), tau);
    Ok((g, bad))
}

pub(crate) fn fb_solution_raw(g: &mut HgMatrix, reqs: &[u32], tau: usize) -> BTreeSet<usize> {
    (0..tau).filter(|&t| good_or_bad(g, t, reqs[t])).collect()
}

pub fn clear_bad_cycles(
    mut g: HgMatrix,
    mut bad: BTreeSet<usize>,
) -> Result<(HgMatrix, BTreeSet<usize>)> {
    if let Some(&t) = bad.iter().find(|&&t| t + 1 >= g.pairs()) {
        return Err(Error::IndexOutOfRange {
            index: t,
            len: g.pairs() - 1,
        });
    }
    clear_bad_cycles_raw(&mut g, &mut bad);
    Ok((g, bad))
}

/// Fix bad pairs two at a time while two of them share an `e`-cycle; then
/// fix any bad pair that shares an `e`-cycle with the last pair against
/// that pair alone.
pub(crate) fn clear_bad_cycles_raw(g: &mut HgMatrix, bad: &mut BTreeSet<usize>) {
    let e = g.e();
    let r = g.pairs() - 1;
    while !bad.is_empty() {
        let graph = build_xtype_graph(g, Gf2Vec::from_raw(e, g.dim())).expect("e is nonzero");
        let part = cycle_partition(&graph);
        let mut owner = std::collections::HashMap::new();
        let mut hit = None;
        for &t in bad.iter() {
            if let Some(&t1) = owner.get(&part.membership[t]) {
                hit = Some((t1, t));
                break;
            }
            owner.insert(part.membership[t], t);
        }
        if let Some((t1, t2)) = hit {
            shift_pair_sums(g, e, t1, t2).expect("same cycle");
            bad.remove(&t1);
            bad.remove(&t2);
            continue;
        }
        let Some(&t) = bad.iter().find(|&&t| part.same_cycle(t, r)) else {
            break;
        };
        shift_pair_sums(g, e, t, r).expect("same cycle");
        bad.remove(&t);
    }
}

fn pair_set(t: usize) -> Vec<usize> {
    vec![2 * t, 2 * t + 1]
}

fn direct_pairs(m: &RequestBatch) -> Result<Draft> {
    let g = single_value_hg(m.get(0))?;
    Ok(Draft {
        dim: m.dim(),
        cols: g.raw_columns().to_vec(),
        sets: (0..m.len()).map(pair_set).collect(),
        kinds: vec![SetKind::Pair; m.len()],
    })
}

/// Up to `⌊2^s/3⌋` requests over `2^s − 1` servers.
pub fn fb23_solve(m: &RequestBatch) -> Result<Solution> {
    let s = m.dim();
    let kmax = fb23_k(s);
    if m.len() > kmax {
        return Err(Error::TooManyRequests {
            k: m.len(),
            max: kmax,
        });
    }
    let servers = (1usize << s) - 1;
    if !m.is_empty() && m.all_identical() {
        return finish(direct_pairs(m)?, m, Strategy::Fb23, None, servers);
    }
    let mut g = canonical_hg(s)?;
    let tau = kmax;
    let reqs = padded(m, tau, g.e());
    let mut bad = fb_solution_raw(&mut g, &reqs, tau);
    clear_bad_cycles_raw(&mut g, &mut bad);

    let mut spare = (tau..g.pairs() - 1).map(pair_set);
    let mut sets: Vec<Vec<usize>> = (0..m.len()).map(pair_set).collect();
    let mut kinds = vec![SetKind::Pair; m.len()];
    let budget = g.pairs() - 1 - tau;
    for &t in &bad {
        let extra = spare.next().ok_or(Error::BudgetExceeded {
            bad: bad.len(),
            budget,
        })?;
        sets[t].extend(extra);
        kinds[t] = SetKind::Repaired;
    }
    let d = Draft {
        dim: s,
        cols: g.raw_columns().to_vec(),
        sets,
        kinds,
    };
    finish(d, m, Strategy::Fb23, None, servers)
}

/// `⌊α·2^{s−1}⌋` requests over `2^s + ⌈(3α−2)·2^{s−2}⌉ − 1` servers.
pub fn alpha_fb_solution(m: &RequestBatch, alpha: Alpha) -> Result<Solution> {
    let s = m.dim();
    let kmax = alpha_k(s, alpha);
    if m.len() > kmax {
        return Err(Error::TooManyRequests {
            k: m.len(),
            max: kmax,
        });
    }
    let mut g = canonical_hg(s)?;
    let (n, half) = (g.len(), g.pairs());
    let e = g.e();
    let tail = alpha.tail_len(s) as usize;
    let reqs = padded(m, kmax, e);
    let tau = if alpha.is_one() { half - 1 } else { kmax };
    let mut bad = fb_solution_raw(&mut g, &reqs, tau);
    clear_bad_cycles_raw(&mut g, &mut bad);

    let k = m.len();
    let mut sets: Vec<Vec<usize>> = (0..k).map(pair_set).collect();
    let mut kinds = vec![SetKind::Pair; k];
    let tail_cols = n..n + tail;
    let budget;
    let mut singles: Box<dyn Iterator<Item = Vec<usize>>>;
    let mut rest: Vec<usize> = bad.iter().copied().collect();
    if alpha.is_one() {
        set_redundancy_column(&mut g, reqs[half - 1]);
        if k == half {
            sets[half - 1] = vec![n - 2];
            kinds[half - 1] = SetKind::Redundancy;
        }
        budget = tail;
        singles = Box::new(tail_cols.map(|c| vec![c]));
    } else {
        set_redundancy_column(&mut g, e);
        if let Some(tmax) = rest.pop() {
            sets[tmax].push(n - 2);
            kinds[tmax] = SetKind::Repaired;
        }
        budget = half - 1 - tau + tail + 1;
        singles = Box::new(
            (tau..half - 1)
                .map(pair_set)
                .chain(tail_cols.map(|c| vec![c])),
        );
    }
    for &t in &rest {
        let extra = singles.next().ok_or(Error::BudgetExceeded {
            bad: bad.len(),
            budget,
        })?;
        sets[t].extend(extra);
        kinds[t] = SetKind::Repaired;
    }
    let mut cols = g.raw_columns().to_vec();
    cols.extend(std::iter::repeat_n(e, tail));
    // Padding requests are e and never bad, so sets beyond k were never built.
    let d = Draft {
        dim: s,
        cols,
        sets,
        kinds,
    };
    finish(d, m, Strategy::Alpha, Some(alpha), alpha_servers(s, alpha))
}

/// Up to `2^s` requests over `2^{s+1} − 2` servers: work in dimension
/// `s+1` where the extra coordinate absorbs every bad flag, then drop it.
pub fn opt_fb_solution(m: &RequestBatch) -> Result<Solution> {
    let s = m.dim();
    let lifted = s + 1;
    check_dim(lifted)?;
    let half = 1usize << s;
    if m.len() > half {
        return Err(Error::WrongBatchSize {
            k: m.len(),
            expected: half,
        });
    }
    let reqs = padded(m, half, e_bits(s));
    let mut g = canonical_hg(lifted)?;
    let n = g.len();
    fb_solution_raw(&mut g, &reqs, half - 1);
    let y = reqs.iter().fold(0, |a, &v| a ^ v);
    let last = if y != 0 {
        set_redundancy_column(&mut g, y);
        vec![n - 1]
    } else {
        vec![n - 2, n - 1]
    };
    let k = m.len();
    let mut sets: Vec<Vec<usize>> = (0..k).map(pair_set).collect();
    let mut kinds = vec![SetKind::Pair; k];
    if k == half {
        sets[half - 1] = last;
        kinds[half - 1] = SetKind::Redundancy;
    }
    let low = mask(s);
    let d = Draft {
        dim: s,
        cols: g.raw_columns().iter().map(|&c| c & low).collect(),
        sets,
        kinds,
    };
    finish(d, m, Strategy::Opt, None, (2 << s) - 2)
}
