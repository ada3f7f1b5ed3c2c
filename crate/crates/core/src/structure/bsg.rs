//! Extraction of a large subset with small doubling from a set with large energy.
//!
//! Candidates are intersections `A ∩ (x + A)` and `A ∩ (x + A) ∩ (y + A)` for
//! shifts drawn with probability proportional to `1_A ∗ 1_{−A}(x)`; the one
//! maximising `|A′|² / |A′ + A′|` is returned.

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::gset::GSet;
use crate::setops::{difference_counts, energy, sumset, translate_idx};
use crate::Rational;

/// Distinct shifts paired for two-fold intersections.
const PAIR_LIMIT: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BsgCertificate {
    pub a_size: usize,
    pub energy: u128,
    pub delta: f64,
    pub subset_size: usize,
    pub sumset_size: usize,
    #[serde(with = "crate::serde_util::ratio")]
    pub doubling: Rational,
    /// `log(|A|/|A′|) / log(1/δ)`; absent when `δ = 1`.
    pub size_exponent: Option<f64>,
    /// `log(doubling) / log(1/δ)`; absent when `δ = 1`.
    pub doubling_exponent: Option<f64>,
    pub shifts: Vec<GroupElement>,
    pub is_subset: bool,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BsgResult {
    pub subset: GSet,
    pub certificate: BsgCertificate,
}

pub fn bsg_extract(a: &GSet, delta: f64, trials: usize, seed: u64) -> Result<BsgResult> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::BadDelta(delta));
    }
    let e = energy(a);
    let required = delta * (a.len() as f64).powi(3);
    if (e as f64) < required {
        return Err(Error::EnergyTooSmall {
            energy: e,
            required,
        });
    }
    if trials == 0 {
        return Err(Error::NoCandidate);
    }
    let g = a.group();
    let r = difference_counts(a);
    let support: Vec<(usize, i64)> = r
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(x, &c)| (x, c))
        .collect();
    let dist = WeightedIndex::new(support.iter().map(|(_, c)| *c as u64))
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shifts: Vec<usize> = Vec::new();
    for _ in 0..trials {
        let x = support[dist.sample(&mut rng)].0;
        if !shifts.contains(&x) {
            shifts.push(x);
        }
    }

    let mut candidates: Vec<Vec<usize>> = shifts.iter().map(|&x| vec![x]).collect();
    let paired = &shifts[..shifts.len().min(PAIR_LIMIT)];
    for (i, &x) in paired.iter().enumerate() {
        for &y in &paired[i + 1..] {
            candidates.push(vec![x, y]);
        }
    }

    let scored: Vec<(Vec<usize>, GSet, usize)> = candidates
        .into_par_iter()
        .map(|xs| {
            let mut s = a.clone();
            for &x in &xs {
                s = s.intersection(&translate_idx(a, x)).expect("same group");
            }
            let doubled = sumset(&s, &s).expect("same group").len();
            (xs, s, doubled)
        })
        .filter(|(_, s, _)| !s.is_empty())
        .collect();

    // Maximise |A′|²/|A′+A′|; ties keep the earliest candidate.
    let best = scored
        .into_iter()
        .reduce(|best, c| {
            let lhs = (c.1.len() as u128).pow(2) * best.2 as u128;
            let rhs = (best.1.len() as u128).pow(2) * c.2 as u128;
            if lhs > rhs {
                c
            } else {
                best
            }
        })
        .ok_or(Error::NoCandidate)?;
    let (xs, subset, doubled) = best;
    let doubling = Rational::new(doubled as i64, subset.len() as i64);
    let log_inv = (1.0 / delta).ln();
    let (size_exponent, doubling_exponent) = if delta < 1.0 {
        (
            Some((a.len() as f64 / subset.len() as f64).ln() / log_inv),
            Some((doubled as f64 / subset.len() as f64).ln() / log_inv),
        )
    } else {
        (None, None)
    };
    let certificate = BsgCertificate {
        a_size: a.len(),
        energy: e,
        delta,
        subset_size: subset.len(),
        sumset_size: doubled,
        doubling,
        size_exponent,
        doubling_exponent,
        shifts: xs.iter().map(|&x| g.element_at(x)).collect(),
        is_subset: subset.is_subset(a)?,
        seed,
        trials,
    };
    Ok(BsgResult {
        subset,
        certificate,
    })
}
