//! Verbal likelihood scale for reporting probabilities.
//!
//! Bands are half-open and lower-inclusive so that every probability in
//! `[0, 1]` maps to exactly one term.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Ordered from least to most likely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LikelihoodTerm {
    ExceptionallyUnlikely,
    VeryUnlikely,
    Unlikely,
    AboutAsLikelyAsNot,
    Likely,
    VeryLikely,
    VirtuallyCertain,
}

impl LikelihoodTerm {
    pub const ALL: [LikelihoodTerm; 7] = [
        LikelihoodTerm::ExceptionallyUnlikely,
        LikelihoodTerm::VeryUnlikely,
        LikelihoodTerm::Unlikely,
        LikelihoodTerm::AboutAsLikelyAsNot,
        LikelihoodTerm::Likely,
        LikelihoodTerm::VeryLikely,
        LikelihoodTerm::VirtuallyCertain,
    ];

    /// Probability band. The top band also includes 1 itself.
    pub fn range(self) -> Range<f64> {
        use LikelihoodTerm::*;
        match self {
            ExceptionallyUnlikely => 0.0..0.01,
            VeryUnlikely => 0.01..0.10,
            Unlikely => 0.10..1.0 / 3.0,
            AboutAsLikelyAsNot => 1.0 / 3.0..2.0 / 3.0,
            Likely => 2.0 / 3.0..0.90,
            VeryLikely => 0.90..0.99,
            VirtuallyCertain => 0.99..1.0,
        }
    }

    pub fn label(self) -> &'static str {
        use LikelihoodTerm::*;
        match self {
            ExceptionallyUnlikely => "exceptionally unlikely",
            VeryUnlikely => "very unlikely",
            Unlikely => "unlikely",
            AboutAsLikelyAsNot => "about as likely as not",
            Likely => "likely",
            VeryLikely => "very likely",
            VirtuallyCertain => "virtually certain",
        }
    }
}

impl fmt::Display for LikelihoodTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn likelihood_term(p: f64) -> Result<LikelihoodTerm> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(LikelihoodTerm::ALL
        .into_iter()
        .find(|term| term.range().contains(&p))
        .unwrap_or(LikelihoodTerm::VirtuallyCertain))
}
