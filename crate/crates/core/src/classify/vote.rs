use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::{derive_seed, rng_for, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteConfig {
    pub k: usize,
    pub seed: u64,
}

impl Default for VoteConfig {
    fn default() -> Self {
        Self { k: 3, seed: 0 }
    }
}

impl VoteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k.is_multiple_of(2) {
            return Err(Error::Config(format!("vote k must be odd and positive, got {}", self.k)));
        }
        Ok(())
    }
}

/// Plurality label; ties are broken uniformly at random with `rng`.
pub fn vote_with_rng<L: Clone + PartialEq, R: Rng + ?Sized>(labels: &[L], rng: &mut R) -> Option<L> {
    let mut tally: Vec<(&L, usize)> = Vec::new();
    for l in labels {
        match tally.iter_mut().find(|(x, _)| *x == l) {
            Some(e) => e.1 += 1,
            None => tally.push((l, 1)),
        }
    }
    let top = tally.iter().map(|e| e.1).max()?;
    let tied: Vec<&L> = tally.iter().filter(|e| e.1 == top).map(|e| e.0).collect();
    if tied.len() == 1 {
        return Some(tied[0].clone());
    }
    tied.choose(rng).map(|l| (*l).clone())
}

/// Vote over exactly `cfg.k` labels with the tie-break stream seeded by `cfg.seed`.
pub fn vote<L: Clone + PartialEq>(labels: &[L], cfg: &VoteConfig) -> Result<L> {
    vote_window(labels, cfg, 0)
}

/// As [`vote`], with an independent tie-break stream per window index.
pub fn vote_window<L: Clone + PartialEq>(labels: &[L], cfg: &VoteConfig, window: usize) -> Result<L> {
    cfg.validate()?;
    if labels.len() != cfg.k {
        return Err(Error::Shape {
            expected: cfg.k,
            got: labels.len(),
        });
    }
    let mut rng = if window == 0 {
        rng_for(cfg.seed, stream::VOTE)
    } else {
        rng_for(derive_seed(cfg.seed, stream::VOTE), &window.to_string())
    };
    Ok(vote_with_rng(labels, &mut rng).expect("k >= 1"))
}

/// Probability that a three-way vote is correct when each vote is right with
/// probability `p` and wrong votes never coincide: `p + p² − p³`.
pub fn vote_correct_prob<F: Scalar>(p: F) -> Result<F> {
    if !(p >= F::zero() && p <= F::one()) {
        return Err(Error::Domain(format!("probability outside [0, 1]: {p}")));
    }
    Ok(p + p * p - p * p * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority() {
        let cfg = VoteConfig::default();
        assert_eq!(vote(&["SQ", "SQ", "PU"], &cfg).unwrap(), "SQ");
        assert_eq!(vote(&["SQ", "SQ", "SQ"], &cfg).unwrap(), "SQ");
        assert_eq!(vote(&["PU", "SQ", "SQ"], &cfg).unwrap(), "SQ");
    }

    #[test]
    fn bad_config() {
        assert!(vote(&["a", "b"], &VoteConfig { k: 2, seed: 0 }).is_err());
        assert!(vote(&["a"], &VoteConfig::default()).is_err());
    }

    #[test]
    fn uniform_among_distinct() {
        let n = 100_000u64;
        let mut counts = [0usize; 3];
        let labels = [0usize, 1, 2];
        for seed in 0..n {
            counts[vote(&labels, &VoteConfig { k: 3, seed }).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn closed_form() {
        assert!((vote_correct_prob(0.9f64).unwrap() - 0.981).abs() < 1e-12);
        assert!((vote_correct_prob(0.95f64).unwrap() - 0.995125).abs() < 1e-12);
        assert_eq!(vote_correct_prob(1.0).unwrap(), 1.0);
        assert_eq!(vote_correct_prob(0.0).unwrap(), 0.0);
        assert!(vote_correct_prob(1.2).is_err());
        assert!(vote_correct_prob(f64::NAN).is_err());
        for k in 0..=100 {
            let p = k as f64 / 100.0;
            assert!(vote_correct_prob(p).unwrap() >= p);
        }
    }
}
