//! Ground truth that does not share code with the constructions: a solution
//! verifier, an exact backtracking solver for small server lists, and an
//! exhaustive/sampled feasibility sweep.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{bitstring, check_dim, row_ops_to_all_ones, Gf2Vec, RequestBatch};
use crate::params::fb23_k;
use crate::solvers::{b_solution, fb23_solve, Solution};

/// Why a solution was rejected, naming the first offending request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    CountMismatch {
        sets: usize,
        requests: usize,
    },
    DimensionMismatch {
        index: usize,
    },
    OutOfRange {
        request: usize,
        index: usize,
    },
    Overlap {
        request: usize,
        index: usize,
        other: usize,
    },
    SumMismatch {
        request: usize,
        got: Gf2Vec,
        want: Gf2Vec,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CountMismatch { sets, requests } => {
                write!(f, "{sets} recovery sets for {requests} requests")
            }
            Violation::DimensionMismatch { index } => {
                write!(f, "server {index} has the wrong dimension")
            }
            Violation::OutOfRange { request, index } => {
                write!(f, "request {request}: server index {index} out of range")
            }
            Violation::Overlap {
                request,
                index,
                other,
            } => write!(
                f,
                "request {request}: server {index} already used by request {other}"
            ),
            Violation::SumMismatch { request, got, want } => {
                write!(f, "request {request}: set sums to {got}, expected {want}")
            }
        }
    }
}

/// Check disjointness, index range and recovery sums of `sets`.
pub fn verify_sets(
    servers: &[Gf2Vec],
    m: &RequestBatch,
    sets: &[Vec<usize>],
) -> std::result::Result<(), Violation> {
    if sets.len() != m.len() {
        return Err(Violation::CountMismatch {
            sets: sets.len(),
            requests: m.len(),
        });
    }
    if let Some(index) = servers.iter().position(|s| s.dim() != m.dim()) {
        return Err(Violation::DimensionMismatch { index });
    }
    let mut used = vec![usize::MAX; servers.len()];
    for (request, set) in sets.iter().enumerate() {
        let mut acc = 0u32;
        for &index in set {
            if index >= servers.len() {
                return Err(Violation::OutOfRange { request, index });
            }
            if used[index] != usize::MAX {
                return Err(Violation::Overlap {
                    request,
                    index,
                    other: used[index],
                });
            }
            used[index] = request;
            acc ^= servers[index].bits();
        }
        if acc != m.raw()[request] {
            return Err(Violation::SumMismatch {
                request,
                got: Gf2Vec::from_raw(acc, m.dim()),
                want: m.get(request),
            });
        }
    }
    Ok(())
}

pub fn verify_solution(
    servers: &[Gf2Vec],
    m: &RequestBatch,
    sol: &Solution,
) -> std::result::Result<(), Violation> {
    verify_sets(servers, m, &sol.recovery_sets)
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_servers: usize,
    pub max_requests: usize,
    /// Search nodes before giving up.
    pub max_nodes: u64,
    pub force: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_servers: 16,
            max_requests: 8,
            max_nodes: 50_000_000,
            force: false,
        }
    }
}

/// Hard ceiling: the solver enumerates all `2^n` server subsets.
const HARD_MAX_SERVERS: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForce {
    Feasible(Vec<Vec<usize>>),
    Infeasible,
}

/// Precomputed subset tables for one server list; reusable across batches.
pub struct BruteForceSolver {
    dim: u32,
    n: usize,
    /// For each vector value, the independent subsets summing to it, ordered
    /// by size and then lexicographically by index list.
    by_value: Vec<Vec<u32>>,
}

impl BruteForceSolver {
    pub fn new(servers: &[Gf2Vec], limits: &Limits) -> Result<Self> {
        let n = servers.len();
        let dim = servers.first().map(|s| s.dim()).unwrap_or(1);
        check_dim(dim)?;
        if n > HARD_MAX_SERVERS || (n > limits.max_servers && !limits.force) {
            return Err(Error::LimitExceeded(format!(
                "{n} servers exceeds the brute-force limit {}",
                if limits.force {
                    HARD_MAX_SERVERS
                } else {
                    limits.max_servers
                }
            )));
        }
        let vals: Vec<u32> = servers.iter().map(|s| s.bits()).collect();
        let total = 1usize << n;
        let mut xor = vec![0u32; total];
        let mut by_value: Vec<Vec<u32>> = vec![Vec::new(); 1 << dim];
        for mask in 1..total {
            let low = mask.trailing_zeros() as usize;
            xor[mask] = xor[mask & (mask - 1)] ^ vals[low];
            if xor[mask] != 0 && mask.count_ones() <= dim && independent(&vals, mask as u32) {
                by_value[xor[mask] as usize].push(mask as u32);
            }
        }
        for list in &mut by_value {
            list.sort_by_cached_key(|&m| (m.count_ones(), index_list(m)));
        }
        Ok(BruteForceSolver { dim, n, by_value })
    }

    /// Depth-first over requests; `Infeasible` only after the full search.
    pub fn solve(&self, m: &RequestBatch, limits: &Limits) -> Result<BruteForce> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: m.dim(),
            });
        }
        if m.len() > limits.max_requests && !limits.force {
            return Err(Error::LimitExceeded(format!(
                "{} requests exceeds the brute-force limit {}",
                m.len(),
                limits.max_requests
            )));
        }
        let mut search = Search {
            solver: self,
            reqs: m.raw(),
            chosen: Vec::with_capacity(m.len()),
            dead: HashSet::new(),
            nodes: 0,
            max_nodes: if limits.force {
                u64::MAX
            } else {
                limits.max_nodes
            },
        };
        let all = if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        };
        match search.go(0, all, 0)? {
            true => Ok(BruteForce::Feasible(
                search
                    .chosen
                    .iter()
                    .map(|&mk| index_list(mk).into_iter().map(usize::from).collect())
                    .collect(),
            )),
            false => Ok(BruteForce::Infeasible),
        }
    }
}

fn index_list(mask: u32) -> Vec<u8> {
    (0..32u8).filter(|i| (mask >> i) & 1 == 1).collect()
}

fn independent(vals: &[u32], mask: u32) -> bool {
    let mut basis = [0u32; 32];
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        let mut x = vals[i];
        while x != 0 {
            let top = 31 - x.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = x;
                break;
            }
            x ^= basis[top];
        }
        if x == 0 {
            return false;
        }
    }
    true
}

struct Search<'a> {
    solver: &'a BruteForceSolver,
    reqs: &'a [u32],
    chosen: Vec<u32>,
    dead: HashSet<(usize, u32, usize)>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    /// `from` is the first candidate index allowed for request `i`; equal
    /// consecutive requests take candidates in increasing order.
    fn go(&mut self, i: usize, free: u32, from: usize) -> Result<bool> {
        if i == self.reqs.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::LimitExceeded("brute-force node budget".into()));
        }
        if self.dead.contains(&(i, free, from)) {
            return Ok(false);
        }
        let list = &self.solver.by_value[self.reqs[i] as usize];
        for (ci, &mask) in list.iter().enumerate().skip(from) {
            if mask & free != mask {
                continue;
            }
            self.chosen.push(mask);
            let next_from = match self.reqs.get(i + 1) {
                Some(&v) if v == self.reqs[i] => ci + 1,
                _ => 0,
            };
            if self.go(i + 1, free & !mask, next_from)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        self.dead.insert((i, free, from));
        Ok(false)
    }
}

pub fn brute_force_solve(
    servers: &[Gf2Vec],
    m: &RequestBatch,
    limits: &Limits,
) -> Result<BruteForce> {
    BruteForceSolver::new(servers, limits)?.solve(m, limits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Full,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    pub s: u32,
    pub k: usize,
    pub n: usize,
    pub mode: CheckMode,
    pub tried: usize,
    pub failures: Vec<Vec<Gf2Vec>>,
    /// Instances where a constructive solver applied and was run.
    pub constructive_checked: usize,
    /// Oracle-feasible instances the applicable constructive solver failed.
    pub constructive_failures: Vec<(String, Vec<Gf2Vec>)>,
    pub elapsed: Duration,
}

impl FeasibilityReport {
    /// Line-oriented log: one line per failing multiset, then a footer.
    /// Wall time is left out so the text is reproducible.
    pub fn to_log(&self) -> String {
        let mode = match self.mode {
            CheckMode::Full => "full".to_string(),
            CheckMode::Sampled { count, seed } => format!("sampled count={count} seed={seed}"),
        };
        let join = |v: &[Gf2Vec]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = format!("# s={} k={} n={} mode={mode}\n", self.s, self.k, self.n);
        for f in &self.failures {
            out.push_str(&format!("INFEASIBLE {}\n", join(f)));
        }
        for (who, f) in &self.constructive_failures {
            out.push_str(&format!("CONSTRUCTIVE-FAIL {who} {}\n", join(f)));
        }
        out.push_str(&format!(
            "# tried={} failures={} constructive_checked={} constructive_failures={}\n",
            self.tried,
            self.failures.len(),
            self.constructive_checked,
            self.constructive_failures.len()
        ));
        out.push_str(&format!(
            "{} multisets, {} failures\n",
            self.tried,
            self.failures.len()
        ));
        out
    }
}

/// All multisets of size `k` over `1..2^s`, as sorted tuples in
/// lexicographic order.
pub fn multisets(s: u32, k: usize) -> Vec<Vec<u32>> {
    let top = (1u32 << s) - 1;
    let mut out = Vec::new();
    if k == 0 {
        return vec![vec![]];
    }
    let mut cur = vec![1u32; k];
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < top) else {
            return out;
        };
        let v = cur[i] + 1;
        cur[i..].iter_mut().for_each(|c| *c = v);
    }
}

fn sampled(s: u32, k: usize, count: usize, seed: u64) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut v: Vec<u32> = (0..k).map(|_| rng.gen_range(1..1u32 << s)).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

enum Outcome {
    Feasible {
        checked: bool,
        failed: Option<&'static str>,
    },
    Infeasible,
}

/// Run the exact solver against the `2^s − 1` nonzero vectors on every
/// (or a sample of) request multiset, and cross-check the constructive
/// solvers wherever their budgets apply.
pub fn exhaustive_check(
    s: u32,
    k: usize,
    mode: CheckMode,
    jobs: usize,
    limits: &Limits,
) -> Result<FeasibilityReport> {
    check_dim(s)?;
    let started = Instant::now();
    let n = (1usize << s) - 1;
    if mode == CheckMode::Full && s > 4 && !limits.force {
        return Err(Error::LimitExceeded(format!("full enumeration at s={s}")));
    }
    let servers: Vec<Gf2Vec> = (1..=n as u32).map(|b| Gf2Vec::from_raw(b, s)).collect();
    let solver = BruteForceSolver::new(&servers, limits)?;
    let batches = match mode {
        CheckMode::Full => multisets(s, k),
        CheckMode::Sampled { count, seed } => sampled(s, k, count, seed),
    };
    let run = |reqs: &Vec<u32>| -> Result<Outcome> {
        let m = RequestBatch::from_raw(s, reqs.clone())?;
        match solver.solve(&m, limits)? {
            BruteForce::Infeasible => Ok(Outcome::Infeasible),
            BruteForce::Feasible(sets) => {
                verify_sets(&servers, &m, &sets).map_err(|v| {
                    Error::Verification(format!("oracle produced a bad solution: {v}"))
                })?;
                let mut checked = false;
                let mut failed = None;
                if k <= fb23_k(s) {
                    checked = true;
                    if fb23_solve(&m).is_err() {
                        failed = Some("fb23");
                    }
                }
                if row_ops_to_all_ones(&m).is_ok() {
                    checked = true;
                    if b_solution(&m).is_err() {
                        failed = Some("batch");
                    }
                }
                Ok(Outcome::Feasible { checked, failed })
            }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::LimitExceeded(e.to_string()))?;
    let results: Vec<Result<Outcome>> = pool.install(|| batches.par_iter().map(run).collect());

    let mut report = FeasibilityReport {
        s,
        k,
        n,
        mode,
        tried: batches.len(),
        failures: vec![],
        constructive_checked: 0,
        constructive_failures: vec![],
        elapsed: Duration::ZERO,
    };
    let vecs = |r: &[u32]| {
        r.iter()
            .map(|&b| Gf2Vec::from_raw(b, s))
            .collect::<Vec<_>>()
    };
    for (reqs, res) in batches.iter().zip(results) {
        match res? {
            Outcome::Infeasible => report.failures.push(vecs(reqs)),
            Outcome::Feasible { checked, failed } => {
                report.constructive_checked += checked as usize;
                if let Some(who) = failed {
                    report
                        .constructive_failures
                        .push((who.to_string(), vecs(reqs)));
                }
            }
        }
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

/// Printable form of a server list, for diagnostics.
pub fn describe(servers: &[Gf2Vec]) -> String {
    servers
        .iter()
        .map(|s| bitstring(s.bits(), s.dim()))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(list: &[&str]) -> Vec<Gf2Vec> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn batch(list: &[&str]) -> RequestBatch {
        let v = vs(list);
        RequestBatch::new(v[0].dim(), &v).unwrap()
    }

    #[test]
    fn small_feasible() {
        let servers = vs(&["10", "01", "11"]);
        let m = batch(&["11", "11"]);
        let r = brute_force_solve(&servers, &m, &Limits::default()).unwrap();
        assert_eq!(r, BruteForce::Feasible(vec![vec![2], vec![0, 1]]));
    }

    #[test]
    fn small_infeasible() {
        let servers = vs(&["10", "01", "11"]);
        let m = batch(&["01", "01", "01"]);
        assert_eq!(
            brute_force_solve(&servers, &m, &Limits::default()).unwrap(),
            BruteForce::Infeasible
        );
    }

    #[test]
    fn singleton_when_present() {
        let servers = vs(&["100", "010", "001"]);
        let m = batch(&["010"]);
        assert_eq!(
            brute_force_solve(&servers, &m, &Limits::default()).unwrap(),
            BruteForce::Feasible(vec![vec![1]])
        );
    }

    #[test]
    fn verifier_catches_overlap_and_sums() {
        let servers = vs(&["10", "01", "11"]);
        let m = batch(&["11", "01"]);
        assert!(verify_sets(&servers, &m, &[vec![2], vec![1]]).is_ok());
        assert!(matches!(
            verify_sets(&servers, &m, &[vec![0, 1], vec![1]]),
            Err(Violation::Overlap {
                request: 1,
                index: 1,
                other: 0
            })
        ));
        assert!(matches!(
            verify_sets(&servers, &m, &[vec![2], vec![0]]),
            Err(Violation::SumMismatch { request: 1, .. })
        ));
        assert!(matches!(
            verify_sets(&servers, &m, &[vec![2], vec![3]]),
            Err(Violation::OutOfRange {
                request: 1,
                index: 3
            })
        ));
        assert!(matches!(
            verify_sets(&servers, &m, &[vec![2]]),
            Err(Violation::CountMismatch { .. })
        ));
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(2, 2).len(), 6);
        assert_eq!(multisets(3, 4).len(), 210);
        assert_eq!(multisets(2, 2)[0], vec![1, 1]);
        assert_eq!(multisets(2, 2)[5], vec![3, 3]);
    }

    #[test]
    fn limits_enforced() {
        let servers: Vec<Gf2Vec> = (1..32).map(|b| Gf2Vec::new(b, 5).unwrap()).collect();
        let m = RequestBatch::from_raw(5, vec![1]).unwrap();
        assert!(matches!(
            brute_force_solve(&servers, &m, &Limits::default()),
            Err(Error::LimitExceeded(_))
        ));
        assert!(exhaustive_check(5, 2, CheckMode::Full, 1, &Limits::default()).is_err());
    }
}
