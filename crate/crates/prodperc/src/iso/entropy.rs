//! Entropy floor checks for distributions over a bounded support.
//!
//! For a random variable on `C` points with maximum atom `p_max`, Shannon
//! entropy (base 2) is at least `(C / (C - 1)) * (1 - p_max)`. The weighted
//! form bounds `sum k_i log2 k_i` from above given the part sizes of a
//! partition into at most `C` classes.

use crate::error::{Error, Result};

const TOL: f64 = 1e-9;

/// A probability vector over `C` outcomes (zero atoms allowed).
#[derive(Clone, Debug)]
pub struct DistributionOverC {
    probs: Vec<f64>,
}

impl DistributionOverC {
    /// Validates non-negativity and normalization (within `1e-12`).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument(
                "distribution needs at least one outcome".into(),
            ));
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidArgument(
                "distribution entries must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "distribution sums to {total}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn max_atom(&self) -> f64 {
        self.probs.iter().cloned().fold(0.0, f64::max)
    }

    /// Shannon entropy in bits, with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }
}

/// Outcome of one inequality check: both sides plus the verdict.
#[derive(Clone, Copy, Debug)]
pub struct FloorCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `(C / (C - 1)) * (1 - p_max) <= H(X)` for a distribution on
/// `C >= 2` outcomes. Returns both sides; `holds` allows `1e-9` slack.
pub fn check_entropy_floor(dist: &DistributionOverC) -> Result<FloorCheck> {
    let c = dist.support_size();
    if c < 2 {
        return Err(Error::InvalidArgument(
            "entropy floor needs support size at least 2".into(),
        ));
    }
    let c = c as f64;
    let lhs = c / (c - 1.0) * (1.0 - dist.max_atom());
    let rhs = dist.entropy();
    Ok(FloorCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + TOL,
    })
}

/// Checks the partition form: for class sizes `k_1, ..., k_t` (at most `C`
/// classes, `sum k_i = k`, largest class `k_C`),
///
/// ```text
/// (C / (C - 1)) * (k - k_C) + sum_i k_i log2 k_i  <=  k log2 k.
/// ```
///
/// Sizes may be passed in any order; zero sizes contribute nothing.
pub fn check_weighted_log_inequality(sizes: &[u64], c: usize) -> Result<FloorCheck> {
    if c < 2 {
        return Err(Error::InvalidArgument(
            "class bound C must be at least 2".into(),
        ));
    }
    let nonzero = sizes.iter().filter(|&&s| s > 0).count();
    if nonzero == 0 {
        return Err(Error::InvalidArgument("all class sizes are zero".into()));
    }
    if nonzero > c {
        return Err(Error::InvalidArgument(format!(
            "{nonzero} non-empty classes exceed the bound C = {c}"
        )));
    }
    let k: u64 = sizes.iter().sum();
    let k_largest = *sizes.iter().max().expect("non-empty");
    let xlogx = |x: u64| -> f64 {
        if x == 0 {
            0.0
        } else {
            let x = x as f64;
            x * x.log2()
        }
    };
    let c = c as f64;
    let lhs =
        c / (c - 1.0) * (k - k_largest) as f64 + sizes.iter().map(|&s| xlogx(s)).sum::<f64>();
    let rhs = xlogx(k);
    let scale = rhs.abs().max(1.0);
    Ok(FloorCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + TOL * scale,
    })
}
