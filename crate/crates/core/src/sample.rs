//! Deterministic pseudo-random tuples.
//!
//! Every sample stream is a ChaCha8 generator keyed by a 64-bit seed, so a
//! given seed reproduces the same tuples on every platform. Coefficients are
//! uniform integers in `[-bound, bound]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};
use crate::exactla::{rat, Rational};
use crate::forms::{BinaryForm, FormTuple};
use crate::strata::StratumParam;

pub const DEFAULT_BOUND: i64 = 9;

/// Cap on redraws for rejection sampling.
const MAX_REDRAWS: usize = 1000;

pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
}

/// Mixes a seed with a list of tags into a new seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &t in tags {
        h = h.wrapping_add(t).wrapping_add(0x9e37_79b9_7f4a_7c15);
        h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^= h >> 31;
    }
    h
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_bound(seed, DEFAULT_BOUND)
    }

    pub fn with_bound(seed: u64, bound: i64) -> Self {
        assert!(bound >= 1, "coefficient bound must be positive");
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound,
        }
    }

    /// Independent stream for `(seed, tags...)`.
    pub fn derived(seed: u64, tags: &[u64], bound: i64) -> Self {
        Self::with_bound(derive_seed(seed, tags), bound)
    }

    pub fn int(&mut self) -> i64 {
        self.rng.gen_range(-self.bound..=self.bound)
    }

    pub fn nonzero_int(&mut self) -> i64 {
        loop {
            let v = self.int();
            if v != 0 {
                return v;
            }
        }
    }

    /// Rational with numerator in `[-bound, bound]` and denominator in `1..=max_den`.
    pub fn rational(&mut self, max_den: i64) -> Rational {
        let den = self.rng.gen_range(1..=max_den);
        Rational::new(BigInt::from(self.int()), BigInt::from(den))
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn vector(&mut self, len: usize) -> Vec<Rational> {
        (0..len).map(|_| rat(self.int())).collect()
    }

    /// Random vector that is not all zero.
    pub fn nonzero_vector(&mut self, len: usize) -> Vec<Rational> {
        assert!(len > 0);
        loop {
            let v = self.vector(len);
            if v.iter().any(|x| *x != rat(0)) {
                return v;
            }
        }
    }

    pub fn form(&mut self, degree: usize) -> BinaryForm {
        BinaryForm::new(self.vector(degree + 1))
    }

    pub fn nonzero_form(&mut self, degree: usize) -> BinaryForm {
        BinaryForm::new(self.nonzero_vector(degree + 1))
    }

    /// Uniform tuple of `r + 1` forms of degree `d`, redrawn if all zero.
    pub fn tuple(&mut self, d: usize, r: usize) -> FormTuple {
        loop {
            let forms = (0..=r).map(|_| self.form(d)).collect();
            if let Ok(t) = FormTuple::new(forms) {
                return t;
            }
        }
    }

    /// Random point `(g, p)` of the parameter space of `R_k`.
    pub fn stratum_param(&mut self, d: usize, r: usize, k: usize) -> Result<StratumParam> {
        check_k(k, 1, d)?;
        let g = self.tuple(k - 1, r);
        let p = self.nonzero_form(d - k + 1);
        StratumParam::new(k, g, p)
    }

    /// Point of `R_k` built as `g * p`.
    pub fn in_stratum(&mut self, d: usize, r: usize, k: usize) -> Result<FormTuple> {
        Ok(self.stratum_param(d, r, k)?.image())
    }

    /// Point of `R_k \ R_{k-1}`: built as `g * p`, redrawn until the forms
    /// have exactly `d - k + 1` common roots.
    pub fn in_open_stratum(&mut self, d: usize, r: usize, k: usize) -> Result<FormTuple> {
        check_k(k, 1, d)?;
        let mut last = None;
        for _ in 0..MAX_REDRAWS {
            let t = self.in_stratum(d, r, k)?;
            if t.common_root_multiplicity()? == d - k + 1 {
                return Ok(t);
            }
            last = Some(t);
        }
        Err(Error::PreconditionNotMet(format!(
            "no point of R_{k} outside R_{} found in {MAX_REDRAWS} draws (last {last:?})",
            k.saturating_sub(1)
        )))
    }

    /// Tuple with no common root; redrawn up to a cap, after which the last
    /// draw is returned.
    pub fn generic(&mut self, d: usize, r: usize) -> FormTuple {
        let mut t = self.tuple(d, r);
        if r == 0 {
            // A single form always has all its roots in common.
            return t;
        }
        for _ in 0..MAX_REDRAWS {
            if t.common_root_multiplicity().unwrap_or(1) == 0 {
                break;
            }
            t = self.tuple(d, r);
        }
        t
    }

    /// Draws a tuple in the given mode.
    pub fn sample(&mut self, d: usize, r: usize, k: usize, mode: SampleMode) -> Result<FormTuple> {
        match mode {
            SampleMode::Generic => Ok(self.generic(d, r)),
            SampleMode::InStratum => self.in_stratum(d, r, k),
            SampleMode::InLowerStratum => {
                check_k(k, 2, d)?;
                self.in_stratum(d, r, k - 1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    Generic,
    InStratum,
    InLowerStratum,
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleMode::Generic => "generic",
            SampleMode::InStratum => "in_stratum",
            SampleMode::InLowerStratum => "in_lower_stratum",
        })
    }
}

impl FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(SampleMode::Generic),
            "in_stratum" | "in-stratum" => Ok(SampleMode::InStratum),
            "in_lower_stratum" | "in-lower-stratum" => Ok(SampleMode::InLowerStratum),
            other => Err(Error::Parse(format!("unknown sample mode {other:?}"))),
        }
    }
}

/// One deterministic tuple, as produced by the `sample` command.
pub fn sample_tuple(
    d: usize,
    r: usize,
    k: usize,
    seed: u64,
    mode: SampleMode,
    bound: i64,
) -> Result<FormTuple> {
    check_k(k, 1, d)?;
    Sampler::with_bound(seed, bound).sample(d, r, k, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sylvester::in_stratum;

    #[test]
    fn same_seed_same_tuple() {
        let a = sample_tuple(3, 2, 2, 42, SampleMode::InStratum, 9).unwrap();
        let b = sample_tuple(3, 2, 2, 42, SampleMode::InStratum, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn in_stratum_mode_has_enough_common_roots() {
        let t = sample_tuple(3, 1, 2, 42, SampleMode::InStratum, 9).unwrap();
        assert!(t.common_root_multiplicity().unwrap() >= 2);
        assert!(in_stratum(&t, 2).unwrap());
    }

    #[test]
    fn generic_mode_has_no_common_root() {
        for seed in 0..20 {
            let t = sample_tuple(2, 1, 1, seed, SampleMode::Generic, 9).unwrap();
            assert_eq!(t.common_root_multiplicity().unwrap(), 0);
        }
    }

    #[test]
    fn lower_stratum_needs_k_at_least_two() {
        assert!(matches!(
            sample_tuple(3, 1, 1, 0, SampleMode::InLowerStratum, 9),
            Err(Error::BadK { .. })
        ));
        let t = sample_tuple(3, 1, 3, 0, SampleMode::InLowerStratum, 9).unwrap();
        assert!(in_stratum(&t, 2).unwrap());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(7, &[1, 2]), derive_seed(7, &[2, 1]));
        assert_ne!(derive_seed(7, &[1]), derive_seed(8, &[1]));
    }
}
