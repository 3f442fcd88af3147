//! Top-level constructions and the strategy dispatcher. Every solver ends in
//! [`finish`], which drops zero columns, remaps indices and runs the
//! verifier before handing a [`Solution`] out.

mod batch;
mod fb;
mod fb56;

pub use batch::b_solution;
pub use fb::{alpha_fb_solution, clear_bad_cycles, fb23_solve, fb_solution, opt_fb_solution};
pub use fb56::{fb56_solve, fb_solution2, fb_solution3, StageState};

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{row_ops_to_all_ones, Gf2Vec, RequestBatch};
use crate::oracle::verify_solution;
use crate::params::{fb23_k, fb56_k, Alpha};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Fb23,
    Fb56,
    Alpha,
    Opt,
    Batch,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Fb23,
        Strategy::Fb56,
        Strategy::Alpha,
        Strategy::Opt,
        Strategy::Batch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Fb23 => "fb23",
            Strategy::Fb56 => "fb56",
            Strategy::Alpha => "alpha",
            Strategy::Opt => "opt",
            Strategy::Batch => "batch",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|s| s.name() == text)
            .ok_or_else(|| Error::Parse(format!("unknown strategy {text:?}")))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a recovery set was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    /// A single pair `{2t, 2t+1}`.
    Pair,
    /// A bad pair plus a redundant pair, a tail column, or column `n−2`.
    Repaired,
    /// A second-stage window set of the 5/6 construction (two or four columns).
    Window,
    /// Served from the final pair.
    Redundancy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub s: u32,
    pub strategy: Strategy,
    pub alpha: Option<Alpha>,
    pub servers: Vec<Gf2Vec>,
    /// One set per request, in request order, indices into `servers`.
    pub recovery_sets: Vec<Vec<usize>>,
    pub kinds: Vec<SetKind>,
}

impl Solution {
    pub fn k(&self) -> usize {
        self.recovery_sets.len()
    }

    pub fn n_servers(&self) -> usize {
        self.servers.len()
    }
}

/// Recovery sets over the full column list, zero columns still present.
pub(crate) struct Draft {
    pub dim: u32,
    pub cols: Vec<u32>,
    pub sets: Vec<Vec<usize>>,
    pub kinds: Vec<SetKind>,
}

pub(crate) fn finish(
    d: Draft,
    m: &RequestBatch,
    strategy: Strategy,
    alpha: Option<Alpha>,
    expected_servers: usize,
) -> Result<Solution> {
    let mut remap = vec![usize::MAX; d.cols.len()];
    let mut servers = Vec::with_capacity(d.cols.len());
    for (i, &c) in d.cols.iter().enumerate() {
        if c != 0 {
            remap[i] = servers.len();
            servers.push(Gf2Vec::from_raw(c, d.dim));
        }
    }
    let recovery_sets: Vec<Vec<usize>> = d
        .sets
        .iter()
        .map(|set| {
            let mut r: Vec<usize> = set
                .iter()
                .map(|&i| remap[i])
                .filter(|&i| i != usize::MAX)
                .collect();
            r.sort_unstable();
            r
        })
        .collect();
    let sol = Solution {
        s: d.dim,
        strategy,
        alpha,
        servers,
        recovery_sets,
        kinds: d.kinds,
    };
    if sol.n_servers() != expected_servers {
        return Err(Error::Verification(format!(
            "{strategy}: {} servers, expected {expected_servers}",
            sol.n_servers()
        )));
    }
    verify_solution(&sol.servers, m, &sol).map_err(|v| Error::Verification(v.to_string()))?;
    Ok(sol)
}

/// Extend a batch to `len` entries with copies of `pad`.
pub(crate) fn padded(m: &RequestBatch, len: usize, pad: u32) -> Vec<u32> {
    let mut reqs = m.raw().to_vec();
    reqs.resize(len.max(reqs.len()), pad);
    reqs
}

/// The cheapest construction whose budget admits `(s, k)`.
pub fn auto_strategy(s: u32, k: usize) -> Result<(Strategy, Option<Alpha>)> {
    let half = 1usize << (s - 1);
    if s >= 7 && k <= fb56_k(s) {
        Ok((Strategy::Fb56, None))
    } else if k <= fb23_k(s) {
        Ok((Strategy::Fb23, None))
    } else if k <= half {
        Ok((Strategy::Alpha, Some(Alpha::new(k as u64, half as u64)?)))
    } else if k <= 2 * half {
        Ok((Strategy::Opt, None))
    } else {
        Err(Error::NoStrategy { s, k })
    }
}

/// Dispatch to a construction; `None` picks one automatically, preferring
/// batch decoding over the α family for row-reducible batches.
pub fn solve(
    m: &RequestBatch,
    strategy: Option<Strategy>,
    alpha: Option<Alpha>,
) -> Result<Solution> {
    let (strategy, alpha) = match strategy {
        Some(Strategy::Alpha) => (
            Strategy::Alpha,
            Some(alpha.ok_or_else(|| Error::Parse("the alpha strategy needs --alpha p/q".into()))?),
        ),
        Some(s) => (s, None),
        None => match auto_strategy(m.dim(), m.len())? {
            // Batch decoding fits the same k in fewer servers when it applies.
            (Strategy::Alpha, _) if row_ops_to_all_ones(m).is_ok() => (Strategy::Batch, None),
            picked => picked,
        },
    };
    match strategy {
        Strategy::Fb23 => fb23_solve(m),
        Strategy::Fb56 => fb56_solve(m),
        Strategy::Alpha => alpha_fb_solution(m, alpha.expect("set above")),
        Strategy::Opt => opt_fb_solution(m),
        Strategy::Batch => b_solution(m),
    }
}
