//! Exact budget arithmetic: request counts and server counts per strategy.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A rational `α ∈ [2/3, 1]`, kept exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alpha(Ratio<u64>);

impl Alpha {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse("alpha denominator is zero".into()));
        }
        let r = Ratio::new(p, q);
        if r < Ratio::new(2, 3) || r > Ratio::from_integer(1) {
            return Err(Error::AlphaOutOfRange(format!(
                "{}/{}",
                r.numer(),
                r.denom()
            )));
        }
        Ok(Alpha(r))
    }

    pub fn two_thirds() -> Self {
        Alpha(Ratio::new(2, 3))
    }

    pub fn one() -> Self {
        Alpha(Ratio::from_integer(1))
    }

    /// Accepts `p/q` or a bare integer; never a decimal.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse(format!("alpha must be written p/q, got {text:?}"));
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => (text.parse().map_err(|_| bad())?, 1),
        };
        Self::new(p, q)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        self.numer() == self.denom()
    }

    /// `⌊α·2^e⌋`
    pub fn floor_times_pow2(&self, e: u32) -> u64 {
        ((self.numer() as u128) << e).div_euclid(self.denom() as u128) as u64
    }

    /// `|N| = ⌈(3α−2)·2^{s−2}⌉`, computed as `⌈(3p−2q)·2^s / 4q⌉`.
    pub fn tail_len(&self, s: u32) -> u64 {
        let (p, q) = (self.numer() as u128, self.denom() as u128);
        let num = (3 * p - 2 * q) << s;
        num.div_ceil(4 * q) as u64
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alpha({self})")
    }
}

/// `⌊(2/3)·2^{s−1}⌋ = ⌊2^s/3⌋`
pub fn fb23_k(s: u32) -> usize {
    (1usize << s) / 3
}

/// `⌊(5/6)·2^{s−1}⌋ − s`, zero when negative.
pub fn fb56_k(s: u32) -> usize {
    ((5usize << (s - 1)) / 6).saturating_sub(s as usize)
}

/// Size of the second stage of the 5/6 construction, `⌊2^{s−1}/6⌋ − s`.
pub fn fb56_stage2(s: u32) -> usize {
    ((1usize << (s - 1)) / 6).saturating_sub(s as usize)
}

pub fn alpha_k(s: u32, alpha: Alpha) -> usize {
    alpha.floor_times_pow2(s - 1) as usize
}

/// Server count `m − 1 = 2^s + |N| − 1` of the α construction.
pub fn alpha_servers(s: u32, alpha: Alpha) -> usize {
    (1usize << s) + alpha.tail_len(s) as usize - 1
}
