//! Exact checks of sumset growth bounds and the `⟨1_{A+A}, 1_A ∗ 1_A⟩` identity.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::density::DensityMap;
use crate::error::{Error, Result};
use crate::gset::GSet;
use crate::setops::{growth_profile, iterated_sumset, sum_counts, sumset};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub size: usize,
    /// The bound evaluated in floating point, for display only.
    pub bound: f64,
    /// `size / bound`.
    pub slack: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlunneckeReport {
    #[serde(with = "crate::serde_util::ratio")]
    pub k: Rational,
    pub rows: Vec<GrowthRow>,
    pub violations: usize,
}

/// Checks `|nA| ≤ K^n |A|` with `K = |A+A|/|A|` for `1 ≤ n ≤ n_max`, as
/// `|nA|·|A|^{n−1} ≤ |A+A|^n` in big integers.
pub fn plunnecke_check(a: &GSet, n_max: usize) -> Result<PlunneckeReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let profile = growth_profile(a, n_max)?;
    let base = a.len();
    let doubled = sumset(a, a)?.len();
    let k = Rational::new(doubled as i64, base as i64);
    let kf = doubled as f64 / base as f64;
    let rows: Vec<GrowthRow> = (1..=n_max)
        .map(|n| {
            let size = profile.size(n);
            let lhs = BigUint::from(size) * BigUint::from(base).pow(n as u32 - 1);
            let rhs = BigUint::from(doubled).pow(n as u32);
            let bound = kf.powi(n as i32) * base as f64;
            GrowthRow {
                n,
                size,
                bound,
                slack: size as f64 / bound,
                holds: lhs <= rhs,
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| !r.holds).count();
    Ok(PlunneckeReport {
        k,
        rows,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChangReport {
    pub k: usize,
    /// `|(3k+1)X|`.
    pub hypothesis_lhs: usize,
    /// `2^k |X|`.
    pub hypothesis_rhs: String,
    pub hypothesis_holds: bool,
    /// Filled in only when the hypothesis holds.
    pub rows: Vec<GrowthRow>,
    pub violations: usize,
}

impl ChangReport {
    /// `None` when the hypothesis fails and nothing is asserted.
    pub fn conclusion_holds(&self) -> Option<bool> {
        self.hypothesis_holds.then_some(self.violations == 0)
    }
}

/// For symmetric `X`: if `|(3k+1)X| < 2^k|X|`, checks `|nX| ≤ n^k|X|` for
/// `2 ≤ n ≤ n_max`.
pub fn chang_growth_test(x: &GSet, k: usize, n_max: usize) -> Result<ChangReport> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    if !x.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let base = BigUint::from(x.len());
    let lhs = iterated_sumset(x, 3 * k + 1)?.len();
    let rhs = &base << k;
    let hypothesis_holds = BigUint::from(lhs) < rhs;
    let mut rows = Vec::new();
    if hypothesis_holds && n_max >= 2 {
        let profile = growth_profile(x, n_max)?;
        for n in 2..=n_max {
            let size = profile.size(n);
            let bound = BigUint::from(n).pow(k as u32) * &base;
            let bound_f = bound.to_f64().unwrap_or(f64::INFINITY);
            rows.push(GrowthRow {
                n,
                size,
                bound: bound_f,
                slack: size as f64 / bound_f,
                holds: BigUint::from(size) <= bound,
            });
        }
    }
    let violations = rows.iter().filter(|r| !r.holds).count();
    Ok(ChangReport {
        k,
        hypothesis_lhs: lhs,
        hypothesis_rhs: rhs.to_string(),
        hypothesis_holds,
        rows,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LopezRossReport {
    /// `⟨1_{A+A}, 1_A ∗ 1_A⟩`.
    pub inner: u128,
    /// `|A|²`.
    pub expected: u128,
    pub holds: bool,
}

pub fn lopez_ross_inner(a: &GSet) -> Result<LopezRossReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let counts = sum_counts(a, a)?;
    let sums: DensityMap<i64> = DensityMap::indicator(&sumset(a, a)?);
    let inner = counts
        .values()
        .iter()
        .zip(sums.values())
        .map(|(&c, &s)| (c * s) as u128)
        .sum();
    let expected = (a.len() as u128).pow(2);
    Ok(LopezRossReport {
        inner,
        expected,
        holds: inner == expected,
    })
}
