//! Functional batch codes from Hadamard generator matrices.
//!
//! A code over `n` servers stores one GF(2) combination of `s` information
//! bits per server. Given any `k` requested combinations, the solvers here
//! reorder the `2^s` columns of a Hadamard generator matrix so that the
//! requests are served by pairwise-disjoint server sets:
//!
//! | strategy | servers | requests |
//! |---|---|---|
//! | `fb23` | `2^s − 1` | `⌊2^s/3⌋` |
//! | `fb56` | `2^s − 1` | `⌊(5/6)·2^{s−1}⌋ − s`, `s ≥ 7` |
//! | `alpha` | `2^s + ⌈(3α−2)·2^{s−2}⌉ − 1` | `⌊α·2^{s−1}⌋` |
//! | `opt` | `2^{s+1} − 2` | `2^s` |
//! | `batch` | `2^s − 1` | `2^{s−1}` (row-reducible batches) |
//!
//! ```
//! use fbcodes::{gf2::RequestBatch, solvers::solve, oracle::verify_solution};
//!
//! let m = RequestBatch::parse_text("110\n011\n", 3).unwrap();
//! let sol = solve(&m, None, None).unwrap();
//! assert_eq!(sol.n_servers(), 7);
//! assert!(verify_solution(&sol.servers, &m, &sol).is_ok());
//! ```

pub mod cli;
pub mod error;
pub mod gen;
pub mod gf2;
pub mod graph;
pub mod oracle;
pub mod params;
pub mod solvers;
pub mod transforms;

pub use error::{Error, Result};
pub use gf2::{Gf2Vec, HgMatrix, RequestBatch};
pub use solvers::{solve, Solution, Strategy};
