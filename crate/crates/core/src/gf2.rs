//! GF(2) vectors, Hadamard generator matrices, request batches, triple-sets
//! and the row-reduction helper used by the batch decoder.
//!
//! A vector of dimension `s` is a `u32` with coordinate `i` stored at bit `i`.
//! Coordinate 0 is printed first, so `"100"` is the integer 1.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Alpha;

/// Largest supported dimension. Matrices hold `2^s` columns, so this is a
/// memory cap as much as a word-size one; 24 leaves headroom for the lifted
/// `s+1` matrix of the optimal construction while staying inside `u32`.
pub const MAX_DIM: u32 = 24;

pub(crate) fn check_dim(s: u32) -> Result<()> {
    if (1..=MAX_DIM).contains(&s) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(s))
    }
}

#[inline]
pub(crate) fn mask(s: u32) -> u32 {
    if s >= 32 {
        u32::MAX
    } else {
        (1u32 << s) - 1
    }
}

/// Unit vector with its 1 in the last coordinate.
#[inline]
pub(crate) fn e_bits(s: u32) -> u32 {
    1u32 << (s - 1)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vec {
    bits: u32,
    dim: u8,
}

impl Gf2Vec {
    pub fn new(bits: u32, dim: u32) -> Result<Self> {
        check_dim(dim)?;
        if bits & !mask(dim) != 0 {
            return Err(Error::BitsOutOfRange { bits, dim });
        }
        Ok(Gf2Vec {
            bits,
            dim: dim as u8,
        })
    }

    pub(crate) fn from_raw(bits: u32, dim: u32) -> Self {
        debug_assert!(bits & !mask(dim) == 0);
        Gf2Vec {
            bits,
            dim: dim as u8,
        }
    }

    pub fn zero(dim: u32) -> Result<Self> {
        Self::new(0, dim)
    }

    pub fn unit(i: u32, dim: u32) -> Result<Self> {
        check_dim(dim)?;
        if i >= dim {
            return Err(Error::IndexOutOfRange {
                index: i as usize,
                len: dim as usize,
            });
        }
        Ok(Self::from_raw(1 << i, dim))
    }

    /// The unit vector `e = (0,...,0,1)`.
    pub fn e(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_raw(e_bits(dim), dim))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn dim(self) -> u32 {
        self.dim as u32
    }

    pub fn get(self, i: u32) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Coordinate 0, the projection the batch decoder steers on.
    pub fn f(self) -> bool {
        self.get(0)
    }

    /// Parse a '0'/'1' string, leftmost character = coordinate 0.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let dim = text.len() as u32;
        check_dim(dim).map_err(|_| Error::Parse(format!("bad vector length in {text:?}")))?;
        let mut bits = 0u32;
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::Parse(format!("bad character {c:?} in {text:?}"))),
            }
        }
        Ok(Self::from_raw(bits, dim))
    }
}

pub(crate) fn bitstring(bits: u32, dim: u32) -> String {
    (0..dim)
        .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bitstring(self.bits, self.dim()))
    }
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vec({self})")
    }
}

impl std::str::FromStr for Gf2Vec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

pub fn vec_add(a: Gf2Vec, b: Gf2Vec) -> Result<Gf2Vec> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(Gf2Vec::from_raw(a.bits ^ b.bits, a.dim()))
}

impl std::ops::Add for Gf2Vec {
    type Output = Gf2Vec;
    /// Panics on a dimension mismatch; use [`vec_add`] for the checked form.
    fn add(self, rhs: Gf2Vec) -> Gf2Vec {
        vec_add(self, rhs).expect("dimension mismatch")
    }
}

/// An ordering of all `2^s` vectors of `F_2^s`. Columns `2t` and `2t+1`
/// form pair `t`. The inverse permutation is kept alongside so that the
/// x-partner of a column is a single lookup.
#[derive(Clone, PartialEq, Eq)]
pub struct HgMatrix {
    dim: u32,
    cols: Vec<u32>,
    pos: Vec<u32>,
}

impl fmt::Debug for HgMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self.cols.iter().map(|&c| bitstring(c, self.dim)).collect();
        write!(f, "HgMatrix[{}]", cols.join(" "))
    }
}

impl HgMatrix {
    pub fn from_raw_columns(dim: u32, cols: Vec<u32>) -> Result<Self> {
        check_dim(dim)?;
        let n = 1usize << dim;
        if cols.len() != n {
            return Err(Error::NotHadamard(dim));
        }
        let mut pos = vec![u32::MAX; n];
        for (i, &c) in cols.iter().enumerate() {
            if c as usize >= n || pos[c as usize] != u32::MAX {
                return Err(Error::NotHadamard(dim));
            }
            pos[c as usize] = i as u32;
        }
        Ok(HgMatrix { dim, cols, pos })
    }

    pub fn from_columns(cols: &[Gf2Vec]) -> Result<Self> {
        let dim = cols.first().map(|c| c.dim()).ok_or(Error::NotHadamard(0))?;
        if let Some(c) = cols.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: c.dim(),
            });
        }
        Self::from_raw_columns(dim, cols.iter().map(|c| c.bits()).collect())
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Number of columns, `n = 2^s`.
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pairs(&self) -> usize {
        self.cols.len() / 2
    }

    pub fn col(&self, i: usize) -> Gf2Vec {
        Gf2Vec::from_raw(self.cols[i], self.dim)
    }

    pub fn columns(&self) -> Vec<Gf2Vec> {
        self.cols
            .iter()
            .map(|&c| Gf2Vec::from_raw(c, self.dim))
            .collect()
    }

    pub fn raw(&self, i: usize) -> u32 {
        self.cols[i]
    }

    pub fn raw_columns(&self) -> &[u32] {
        &self.cols
    }

    /// Column index holding vector `v`.
    pub fn index_of(&self, v: u32) -> usize {
        self.pos[v as usize] as usize
    }

    pub fn pair_sum_raw(&self, t: usize) -> u32 {
        self.cols[2 * t] ^ self.cols[2 * t + 1]
    }

    pub fn pair_sum(&self, t: usize) -> Gf2Vec {
        Gf2Vec::from_raw(self.pair_sum_raw(t), self.dim)
    }

    pub fn pair_sums_raw(&self) -> Vec<u32> {
        (0..self.pairs()).map(|t| self.pair_sum_raw(t)).collect()
    }

    pub fn e(&self) -> u32 {
        e_bits(self.dim)
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.cols.swap(i, j);
        self.pos[self.cols[i] as usize] = i as u32;
        self.pos[self.cols[j] as usize] = j as u32;
    }

    pub fn swap_pairs(&mut self, a: usize, b: usize) {
        if a != b {
            self.swap(2 * a, 2 * b);
            self.swap(2 * a + 1, 2 * b + 1);
        }
    }

    /// Re-derive the permutation property from scratch.
    pub fn check(&self) -> bool {
        let n = self.cols.len();
        let mut seen = vec![false; n];
        self.cols.iter().enumerate().all(|(i, &c)| {
            let ok = (c as usize) < n && !seen[c as usize] && self.pos[c as usize] as usize == i;
            if ok {
                seen[c as usize] = true;
            }
            ok
        })
    }
}

/// The starting matrix with every pair summing to `e`: pair `t` holds `t`
/// (in coordinates `0..s-1`) with the last coordinate 0 and then 1.
pub fn canonical_hg(s: u32) -> Result<HgMatrix> {
    check_dim(s)?;
    let half = 1u32 << (s - 1);
    let cols = (0..half).flat_map(|t| [t, t | half]).collect();
    HgMatrix::from_raw_columns(s, cols)
}

/// An HG-matrix whose pairs all sum to the single nonzero vector `v`.
pub fn single_value_hg(v: Gf2Vec) -> Result<HgMatrix> {
    if v.is_zero() {
        return Err(Error::ZeroRequest(0));
    }
    let s = v.dim();
    let low = v.bits() & v.bits().wrapping_neg();
    let cols = (0..1u32 << s)
        .filter(|z| z & low == 0)
        .flat_map(|z| [z, z ^ v.bits()])
        .collect();
    HgMatrix::from_raw_columns(s, cols)
}

pub fn is_hg(cols: &[Gf2Vec]) -> bool {
    HgMatrix::from_columns(cols).is_ok()
}

/// Every vector of `F_2^s` exactly twice: an `(s+1)`-dimensional HG-matrix
/// with its last row deleted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleHgMatrix {
    dim: u32,
    cols: Vec<u32>,
}

impl DoubleHgMatrix {
    pub fn from_lifted(g: &HgMatrix) -> Result<Self> {
        if g.dim() < 2 {
            return Err(Error::DimensionOutOfRange(g.dim() - 1));
        }
        let dim = g.dim() - 1;
        let m = mask(dim);
        Ok(DoubleHgMatrix {
            dim,
            cols: g.raw_columns().iter().map(|&c| c & m).collect(),
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn raw_columns(&self) -> &[u32] {
        &self.cols
    }

    pub fn check(&self) -> bool {
        let mut count = vec![0u8; 1 << self.dim];
        for &c in &self.cols {
            count[c as usize] += 1;
        }
        self.cols.len() == 2 << self.dim && count.iter().all(|&k| k == 2)
    }
}

/// An HG-matrix followed by `tail` copies of `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedHgMatrix {
    pub hpart: HgMatrix,
    pub tail: usize,
}

impl ExtendedHgMatrix {
    pub fn m(&self) -> usize {
        self.hpart.len() + self.tail
    }

    pub fn raw_columns(&self) -> Vec<u32> {
        let e = self.hpart.e();
        let mut cols = self.hpart.raw_columns().to_vec();
        cols.extend(std::iter::repeat_n(e, self.tail));
        cols
    }
}

/// The request matrix: `k` nonzero vectors of one dimension, duplicates allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RequestBatch {
    dim: u32,
    reqs: Vec<u32>,
}

impl fmt::Debug for RequestBatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.reqs.iter().map(|&c| bitstring(c, self.dim)).collect();
        write!(f, "RequestBatch[{}]", v.join(" "))
    }
}

impl RequestBatch {
    pub fn new(dim: u32, reqs: &[Gf2Vec]) -> Result<Self> {
        check_dim(dim)?;
        let mut raw = Vec::with_capacity(reqs.len());
        for (i, r) in reqs.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.dim(),
                });
            }
            if r.is_zero() {
                return Err(Error::ZeroRequest(i));
            }
            raw.push(r.bits());
        }
        Ok(RequestBatch { dim, reqs: raw })
    }

    pub fn from_raw(dim: u32, reqs: Vec<u32>) -> Result<Self> {
        check_dim(dim)?;
        for (i, &r) in reqs.iter().enumerate() {
            if r == 0 {
                return Err(Error::ZeroRequest(i));
            }
            if r & !mask(dim) != 0 {
                return Err(Error::BitsOutOfRange { bits: r, dim });
            }
        }
        Ok(RequestBatch { dim, reqs })
    }

    /// One bitstring per line; `#` starts a comment, blank lines are skipped.
    pub fn parse_text(text: &str, dim: u32) -> Result<Self> {
        check_dim(dim)?;
        let mut reqs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v = Gf2Vec::parse(line)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if v.dim() != dim {
                return Err(Error::Parse(format!(
                    "line {}: expected {dim} coordinates, got {}",
                    lineno + 1,
                    v.dim()
                )));
            }
            if v.is_zero() {
                return Err(Error::Parse(format!(
                    "line {}: all-zero request",
                    lineno + 1
                )));
            }
            reqs.push(v.bits());
        }
        Ok(RequestBatch { dim, reqs })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &r in &self.reqs {
            out.push_str(&bitstring(r, self.dim));
            out.push('\n');
        }
        out
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.reqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reqs.is_empty()
    }

    pub fn get(&self, i: usize) -> Gf2Vec {
        Gf2Vec::from_raw(self.reqs[i], self.dim)
    }

    pub fn raw(&self) -> &[u32] {
        &self.reqs
    }

    pub fn vectors(&self) -> Vec<Gf2Vec> {
        self.reqs
            .iter()
            .map(|&r| Gf2Vec::from_raw(r, self.dim))
            .collect()
    }

    pub fn all_identical(&self) -> bool {
        self.reqs.windows(2).all(|w| w[0] == w[1])
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.reqs.swap(i, j);
    }
}

/// The partition of pair indices into good, bad and redundant roles. Only
/// the bad set is stored; the rest follows from `s` and `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSet {
    pub s: u32,
    pub alpha: Alpha,
    pub bad: BTreeSet<usize>,
}

impl TripleSet {
    pub fn new(s: u32, alpha: Alpha, bad: BTreeSet<usize>) -> Result<Self> {
        check_dim(s)?;
        let ts = TripleSet { s, alpha, bad };
        let k = ts.k();
        if let Some(&b) = ts.bad.iter().find(|&&b| b >= k) {
            return Err(Error::IndexOutOfRange { index: b, len: k });
        }
        Ok(ts)
    }

    fn half(&self) -> usize {
        1usize << (self.s - 1)
    }

    /// `|G ∪ B| = ⌊α·2^{s−1}⌋`.
    pub fn k(&self) -> usize {
        self.alpha.floor_times_pow2(self.s - 1) as usize
    }

    pub fn good(&self) -> Vec<usize> {
        (0..self.k()).filter(|t| !self.bad.contains(t)).collect()
    }

    pub fn redundant(&self) -> Vec<usize> {
        (self.k()..self.half().saturating_sub(1)).collect()
    }
}

/// The vectors `w_t` the pairs must realize for a given triple-set. The
/// final entry is unconstrained unless it falls inside `G ∪ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMatrix {
    pub columns: Vec<Option<Gf2Vec>>,
    pub source: TripleSet,
}

pub fn triple_matrix(m: &RequestBatch, ts: &TripleSet) -> Result<TripleMatrix> {
    if m.dim() != ts.s {
        return Err(Error::DimensionMismatch {
            expected: ts.s,
            got: m.dim(),
        });
    }
    let k = ts.k();
    if m.len() != k {
        return Err(Error::WrongBatchSize {
            k: m.len(),
            expected: k,
        });
    }
    let e = e_bits(ts.s);
    let half = ts.half();
    let columns = (0..half)
        .map(|t| {
            let w = if t < k {
                m.raw()[t] ^ if ts.bad.contains(&t) { e } else { 0 }
            } else if t + 1 < half {
                e
            } else {
                return None;
            };
            Some(Gf2Vec::from_raw(w, ts.s))
        })
        .collect();
    Ok(TripleMatrix {
        columns,
        source: ts.clone(),
    })
}

/// A sequence of elementary row operations `(i, j)`: add row `i` to row `j`.
/// Rows are coordinates, so the transform is an invertible linear map on
/// column vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowTransform {
    pub ops: Vec<(u32, u32)>,
}

impl RowTransform {
    pub fn apply(&self, v: u32) -> u32 {
        self.ops
            .iter()
            .fold(v, |v, &(i, j)| v ^ (((v >> i) & 1) << j))
    }

    /// Each operation is its own inverse, so undo them in reverse order.
    pub fn apply_inverse(&self, v: u32) -> u32 {
        self.ops
            .iter()
            .rev()
            .fold(v, |v, &(i, j)| v ^ (((v >> i) & 1) << j))
    }

    pub fn apply_vec(&self, v: Gf2Vec) -> Gf2Vec {
        Gf2Vec::from_raw(self.apply(v.bits()), v.dim())
    }
}

/// Find row operations turning row 0 of `m` (coordinate 0 across all
/// requests) into the all-ones row.
pub fn row_ops_to_all_ones(m: &RequestBatch) -> Result<(RowTransform, RequestBatch)> {
    let s = m.dim();
    let k = m.len();
    let words = k.div_ceil(64).max(1);
    let row = |i: u32| {
        let mut r = vec![0u64; words];
        for (j, &v) in m.raw().iter().enumerate() {
            if (v >> i) & 1 == 1 {
                r[j / 64] |= 1 << (j % 64);
            }
        }
        r
    };
    let xor_into = |a: &mut [u64], b: &[u64]| a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
    let lead = |r: &[u64]| {
        r.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    };

    // Elimination with combination tracking: each basis entry remembers which
    // original rows it is the sum of.
    let mut basis: Vec<(usize, Vec<u64>, u32)> = Vec::new();
    for i in 0..s {
        let mut r = row(i);
        let mut combo = 1u32 << i;
        for (p, b, c) in &basis {
            if (r[p / 64] >> (p % 64)) & 1 == 1 {
                xor_into(&mut r, b);
                combo ^= c;
            }
        }
        if let Some(p) = lead(&r) {
            basis.push((p, r, combo));
        }
    }
    let mut target = vec![u64::MAX; words];
    if !k.is_multiple_of(64) {
        target[words - 1] = (1u64 << (k % 64)) - 1;
    }
    if k == 0 {
        target[0] = 0;
    }
    let mut combo = 0u32;
    for (p, b, c) in &basis {
        if (target[p / 64] >> (p % 64)) & 1 == 1 {
            xor_into(&mut target, b);
            combo ^= c;
        }
    }
    if target.iter().any(|&w| w != 0) || combo == 0 {
        return Err(Error::NotReducible);
    }

    let mut ops = Vec::new();
    let members: Vec<u32> = (0..s).filter(|i| (combo >> i) & 1 == 1).collect();
    let rest: Vec<u32> = if combo & 1 == 1 {
        members.iter().copied().filter(|&i| i != 0).collect()
    } else {
        // Row 0 is not in the combination: make it a copy of the first
        // member with two operations, then add the others.
        let r = members[0];
        ops.push((0, r));
        ops.push((r, 0));
        members[1..].to_vec()
    };
    ops.extend(rest.into_iter().map(|i| (i, 0)));
    let t = RowTransform { ops };
    let reqs = m.raw().iter().map(|&v| t.apply(v)).collect();
    Ok((t, RequestBatch { dim: s, reqs }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Gf2Vec {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(v("000") + v("000"), v("000"));
        assert_eq!(v("101") + v("101"), v("000"));
        assert_eq!(v("100") + v("001"), v("101"));
        assert!(vec_add(v("10"), v("100")).is_err());
    }

    #[test]
    fn text_encoding_is_coordinate_zero_first() {
        assert_eq!(v("100").bits(), 1);
        assert_eq!(v("001").bits(), 4);
        assert_eq!(Gf2Vec::e(3).unwrap().to_string(), "001");
        assert!(Gf2Vec::parse("10a").is_err());
        assert!(Gf2Vec::parse("").is_err());
    }

    #[test]
    fn canonical_small() {
        let g = canonical_hg(1).unwrap();
        assert_eq!(g.raw_columns(), &[0, 1]);
        let g = canonical_hg(2).unwrap();
        let cols: Vec<String> = g.columns().iter().map(|c| c.to_string()).collect();
        assert_eq!(cols, ["00", "01", "10", "11"]);
        for s in 1..=12 {
            let g = canonical_hg(s).unwrap();
            assert!(g.check());
            assert!(g.pair_sums_raw().iter().all(|&p| p == g.e()));
        }
        assert!(canonical_hg(0).is_err());
        assert!(canonical_hg(MAX_DIM + 1).is_err());
    }

    #[test]
    fn is_hg_examples() {
        let g: Vec<Gf2Vec> = ["000", "100", "010", "110", "001", "101", "011", "111"]
            .iter()
            .map(|s| v(s))
            .collect();
        assert!(is_hg(&g));
        assert!(!is_hg(&[v("0"), v("0")]));
    }

    #[test]
    fn single_value_pairs() {
        for bits in 1..16 {
            let g = single_value_hg(Gf2Vec::new(bits, 4).unwrap()).unwrap();
            assert!(g.pair_sums_raw().iter().all(|&p| p == bits));
        }
    }

    #[test]
    fn triple_matrix_examples() {
        let a = Alpha::two_thirds();
        let m = RequestBatch::new(3, &[v("011"), v("111")]).unwrap();
        let ts = TripleSet::new(3, a, [1].into()).unwrap();
        let w = triple_matrix(&m, &ts).unwrap();
        assert_eq!(
            w.columns[..3],
            [Some(v("011")), Some(v("110")), Some(v("001"))]
        );
        assert_eq!(w.columns[3], None);

        let ts = TripleSet::new(3, a, BTreeSet::new()).unwrap();
        let w = triple_matrix(&m, &ts).unwrap();
        assert_eq!(
            w.columns[..3],
            [Some(v("011")), Some(v("111")), Some(v("001"))]
        );

        let ts = TripleSet::new(3, a, [0, 1].into()).unwrap();
        let w = triple_matrix(&m, &ts).unwrap();
        assert_eq!(w.columns[..2], [Some(v("010")), Some(v("110"))]);
        assert!(TripleSet::new(3, a, [2].into()).is_err());
    }

    #[test]
    fn row_ops_unit_vectors() {
        let m = RequestBatch::new(3, &[v("100"), v("010"), v("001"), v("100")]).unwrap();
        let (t, m2) = row_ops_to_all_ones(&m).unwrap();
        assert_eq!(t.ops, vec![(1, 0), (2, 0)]);
        assert!(m2.vectors().iter().all(|x| x.f()));
        for &x in m.raw() {
            assert_eq!(t.apply_inverse(t.apply(x)), x);
        }
    }

    #[test]
    fn row_ops_two_dim() {
        let m = RequestBatch::new(2, &[v("10"), v("01")]).unwrap();
        let (t, m2) = row_ops_to_all_ones(&m).unwrap();
        assert_eq!(t.ops, vec![(1, 0)]);
        assert!(m2.vectors().iter().all(|x| x.f()));
    }

    #[test]
    fn row_ops_without_row_zero() {
        // Coordinate 1 alone is all ones; row 0 has to be replaced.
        let m = RequestBatch::new(3, &[v("010"), v("110"), v("011")]).unwrap();
        let (_, m2) = row_ops_to_all_ones(&m).unwrap();
        assert!(m2.vectors().iter().all(|x| x.f()));
    }

    #[test]
    fn row_ops_not_reducible() {
        let m = RequestBatch::new(3, &[v("110"), v("011"), v("101")]).unwrap();
        assert_eq!(row_ops_to_all_ones(&m), Err(Error::NotReducible));
    }

    #[test]
    fn parse_requests() {
        let m = RequestBatch::parse_text("# header\n101\n\n 011 # trailing\n", 3).unwrap();
        assert_eq!(m.vectors(), vec![v("101"), v("011")]);
        assert!(RequestBatch::parse_text("000\n", 3).is_err());
        assert!(RequestBatch::parse_text("01\n", 3).is_err());
    }
}
