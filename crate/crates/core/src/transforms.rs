//! Procedures that steer one pair sum at a time, paying with the final
//! (redundancy) pair of the matrix.

use crate::error::{Error, Result};
use crate::gf2::{Gf2Vec, HgMatrix, RequestBatch};
use crate::graph::{pair_path, reorder, reorder_pair, shift_pair_sums};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodBadOutcome {
    pub matrix: HgMatrix,
    /// True when the bad branch ran: pair `t` then sums to `v + y`.
    pub flag: bool,
}

/// Make pair `t` sum to `v`, or failing that to `v + y` where `y` is its sum
/// on entry. Only pair `t` and the last pair change their sums.
pub fn find_good_or_bad_request(mut g: HgMatrix, t: usize, v: Gf2Vec) -> Result<GoodBadOutcome> {
    if v.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: v.dim(),
        });
    }
    if v.is_zero() {
        return Err(Error::ZeroRequest(t));
    }
    if t + 1 >= g.pairs() {
        return Err(Error::IndexOutOfRange {
            index: t,
            len: g.pairs() - 1,
        });
    }
    let flag = good_or_bad(&mut g, t, v.bits());
    debug_assert!(g.check());
    Ok(GoodBadOutcome { matrix: g, flag })
}

pub(crate) fn good_or_bad(g: &mut HgMatrix, t: usize, v: u32) -> bool {
    let n = g.len();
    let r = n / 2 - 1;
    let y = g.pair_sum_raw(t);
    if v == y {
        return false;
    }
    let u = g.raw(2 * t + 1) ^ g.raw(n - 2);
    let mut a = 0;
    for p in 1..=3 {
        a = match p {
            1 => v ^ y,
            2 => {
                g.swap(2 * t + 1, n - 2);
                v ^ y ^ u
            }
            _ => {
                g.swap(2 * t, n - 2);
                v ^ u
            }
        };
        if a == 0 {
            // The swaps alone already produced the sum v.
            return false;
        }
        if pair_path(g, a, t).contains(&(n - 2)) {
            shift_pair_sums(g, a, t, r).expect("redundancy pair is on the path");
            debug_assert_eq!(g.pair_sum_raw(t), v);
            return false;
        }
    }
    let (last0, last1) = (g.raw(n - 2), g.raw(n - 1));
    reorder_pair(g, a, t);
    assert!(
        g.raw(n - 2) == last0 && g.raw(n - 1) == last1,
        "bad branch moved the redundancy pair"
    );
    g.swap(2 * t, n - 2);
    debug_assert_eq!(g.pair_sum_raw(t), v ^ y);
    true
}

/// Repair pair `t` (to `v_t = g_{2t} + g_{2t+1} + a`) at the expense of an
/// earlier pair `t'` in the same `a`-cycle whose sum differs from `v_t`,
/// then swap the two pairs and their requests so `t'` is valid again and
/// the corrupted pair becomes the working one.
pub fn bad_case_correction(
    mut g: HgMatrix,
    a: Gf2Vec,
    mut m: RequestBatch,
    t: usize,
) -> Result<(HgMatrix, RequestBatch)> {
    if a.is_zero() {
        return Err(Error::ZeroShift);
    }
    if t >= m.len() || t >= g.pairs() {
        return Err(Error::IndexOutOfRange {
            index: t,
            len: m.len().min(g.pairs()),
        });
    }
    if g.pair_sum_raw(t) ^ a.bits() != m.raw()[t] {
        return Err(Error::Precondition(format!(
            "pair {t} plus the shift does not give request {t}"
        )));
    }
    let t2 = correction_in_place(&mut g, a.bits(), m.raw()[t], t)?;
    m.swap(t, t2);
    Ok((g, m))
}

/// Returns the partner pair `t'`; the caller swaps its requests.
pub(crate) fn correction_in_place(g: &mut HgMatrix, a: u32, vt: u32, t: usize) -> Result<usize> {
    let path = pair_path(g, a, t);
    let t2 = path
        .iter()
        .step_by(2)
        .map(|&i| i / 2)
        .filter(|&p| p < t && g.pair_sum_raw(p) != vt)
        .min()
        .ok_or(Error::NoEligiblePair(t))?;
    shift_pair_sums(g, a, t, t2)?;
    g.swap_pairs(t, t2);
    Ok(t2)
}

/// Pick a zero-sum subset among the `s+1` window pairs starting at pair
/// `2t` and move it to the front of the window. Columns at or beyond
/// `unused_end` are never touched. Returns the subset size `h`.
pub fn reorder_dependent_pairs(g: &mut HgMatrix, t: usize, unused_end: usize) -> Result<usize> {
    let s = g.dim() as usize;
    let first = 2 * t;
    if 2 * (first + s + 1) > unused_end.min(g.len() - 2) {
        return Err(Error::Precondition(format!(
            "window at pair {first} needs {} unused columns",
            2 * (s + 1)
        )));
    }
    let mut basis: Vec<(u32, u64)> = Vec::new();
    let mut found = None;
    for i in 0..=s {
        let mut x = g.pair_sum_raw(first + i);
        let mut combo = 1u64 << i;
        for &(b, c) in &basis {
            if x ^ b < x {
                x ^= b;
                combo ^= c;
            }
        }
        if x == 0 {
            found = Some(combo);
            break;
        }
        basis.push((x, combo));
        basis.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
    }
    let combo = found.expect("s+1 vectors in F_2^s are dependent");
    let members: Vec<usize> = (0..=s).filter(|i| (combo >> i) & 1 == 1).collect();
    for (slot, &i) in members.iter().enumerate() {
        g.swap_pairs(first + slot, first + i);
    }
    Ok(members.len())
}

/// With the first `h` window pairs summing to zero, make pairs `2t` and
/// `2t+1` have equal sums. Only pair `2t`, the window order and the last
/// pair change.
pub fn find_equiv_sums(g: &mut HgMatrix, t: usize, h: usize) -> Result<()> {
    let p0 = 2 * t;
    if h < 2 || p0 + h >= g.pairs() {
        return Err(Error::Precondition(format!("bad window size {h}")));
    }
    for i in 1..h {
        let xi = g.pair_sum_raw(p0 + i);
        if g.pair_sum_raw(p0) != xi {
            good_or_bad(g, p0, xi);
        }
        if g.pair_sum_raw(p0) == g.pair_sum_raw(p0 + i) {
            g.swap_pairs(p0 + 1, p0 + i);
            return Ok(());
        }
    }
    Err(Error::Precondition(
        "window pair sums are not dependent".into(),
    ))
}

/// Apply `F_x(g_{n−2}, g_{n−1})` so that column `n−2` holds `target`.
pub(crate) fn set_redundancy_column(g: &mut HgMatrix, target: u32) {
    let n = g.len();
    let x = g.raw(n - 2) ^ target;
    if x != 0 {
        let nodes = pair_path(g, x, n / 2 - 1);
        reorder(g, x, &nodes);
    }
    debug_assert_eq!(g.raw(n - 2), target);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::canonical_hg;

    fn v(s: &str) -> Gf2Vec {
        s.parse().unwrap()
    }

    #[test]
    fn immediate_return_when_sum_matches() {
        let g = canonical_hg(3).unwrap();
        let out = find_good_or_bad_request(g.clone(), 0, v("001")).unwrap();
        assert!(!out.flag);
        assert_eq!(out.matrix, g);
    }

    #[test]
    fn lemma_postcondition_small() {
        let g = canonical_hg(3).unwrap();
        for bits in 1..8 {
            for t in 0..3 {
                let x = Gf2Vec::new(bits, 3).unwrap();
                let before = g.pair_sums_raw();
                let out = find_good_or_bad_request(g.clone(), t, x).unwrap();
                let after = out.matrix.pair_sums_raw();
                let want = bits ^ if out.flag { before[t] } else { 0 };
                assert_eq!(after[t], want);
                for p in 0..3 {
                    if p != t {
                        assert_eq!(after[p], before[p]);
                    }
                }
            }
        }
    }

    #[test]
    fn correction_needs_an_eligible_pair() {
        // Under x = 010 pair 1 shares its cycle only with pair 3, so no
        // earlier pair can absorb the change.
        let g = canonical_hg(3).unwrap();
        let m = RequestBatch::new(3, &[v("001"), v("011")]).unwrap();
        let r = bad_case_correction(g, v("010"), m, 1);
        assert_eq!(r.unwrap_err(), Error::NoEligiblePair(1));
    }

    #[test]
    fn correction_moves_the_repaired_pair_back() {
        // Under x = 1000 pairs 0 and 1 of the canonical s=4 matrix share a
        // 4-cycle; pair 0 is bound to e, pair 1 is asked for 1001.
        let g = canonical_hg(4).unwrap();
        let m = RequestBatch::from_raw(4, vec![8, 9]).unwrap();
        let (g2, m2) = bad_case_correction(g, v("1000"), m, 1).unwrap();
        assert_eq!(g2.pair_sum_raw(0), 9);
        assert_eq!(g2.pair_sum_raw(1), 9);
        assert_eq!(m2.raw(), &[9, 8]);
        assert!(g2.check());
    }

    #[test]
    fn dependent_window_already_equal() {
        let mut g = canonical_hg(4).unwrap();
        let h = reorder_dependent_pairs(&mut g, 0, 12).unwrap();
        assert_eq!(h, 2);
        let before = g.clone();
        find_equiv_sums(&mut g, 0, h).unwrap();
        assert_eq!(g, before);
    }
}
