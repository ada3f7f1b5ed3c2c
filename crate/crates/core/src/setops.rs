//! Sumsets, additive energy, doubling and symmetry sets.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::density::{convolve, DensityMap};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::gset::GSet;
use crate::Rational;

/// `A + B`.
pub fn sumset(a: &GSet, b: &GSet) -> Result<GSet> {
    a.same_group(b)?;
    let g = a.group();
    let mut bits = FixedBitSet::with_capacity(g.size());
    let bs: Vec<usize> = b.indices().collect();
    let mut filled = 0;
    for x in a.indices() {
        for &y in &bs {
            if !bits.put(g.add_idx(x, y)) {
                filled += 1;
            }
        }
        if filled == g.size() {
            break;
        }
    }
    Ok(GSet::from_bits(g, bits))
}

/// `A − B`.
pub fn difference_set(a: &GSet, b: &GSet) -> Result<GSet> {
    sumset(a, &negate(b))
}

/// `x + A`.
pub fn translate(a: &GSet, x: &GroupElement) -> Result<GSet> {
    Ok(translate_idx(a, a.group().index_of(x)?))
}

pub fn translate_idx(a: &GSet, x: usize) -> GSet {
    let g = a.group();
    GSet::from_indices(g, a.indices().map(|y| g.add_idx(y, x)))
}

/// `−A`.
pub fn negate(a: &GSet) -> GSet {
    let g = a.group();
    GSet::from_indices(g, a.indices().map(|y| g.neg_idx(y)))
}

/// `nX`, by binary doubling-and-add.
pub fn iterated_sumset(x: &GSet, n: usize) -> Result<GSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("iterated sumset needs n ≥ 1".into()));
    }
    let mut result: Option<GSet> = None;
    let mut power = x.clone();
    let mut k = n;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => power.clone(),
                Some(r) => sumset(&r, &power)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        power = sumset(&power, &power)?;
    }
    Ok(result.expect("n ≥ 1"))
}

/// `|nX|` for `n = 1..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthProfile {
    pub base_size: usize,
    pub sizes: Vec<usize>,
}

impl GrowthProfile {
    /// `|nX|`, for `1 ≤ n ≤ n_max`.
    pub fn size(&self, n: usize) -> usize {
        self.sizes[n - 1]
    }

    pub fn n_max(&self) -> usize {
        self.sizes.len()
    }
}

pub fn growth_profile(x: &GSet, n_max: usize) -> Result<GrowthProfile> {
    if n_max == 0 {
        return Err(Error::InvalidArgument(
            "growth profile needs n_max ≥ 1".into(),
        ));
    }
    let mut sizes = Vec::with_capacity(n_max);
    let mut current = x.clone();
    sizes.push(current.len());
    for _ in 1..n_max {
        current = sumset(&current, x)?;
        sizes.push(current.len());
    }
    Ok(GrowthProfile {
        base_size: x.len(),
        sizes,
    })
}

/// `1_A ∗ 1_{−A}`: the number of ways to write each element as `a − a'`.
pub fn difference_counts(a: &GSet) -> DensityMap<i64> {
    let f: DensityMap<i64> = DensityMap::indicator(a);
    convolve(&f, &f.reflect()).expect("same group")
}

/// `1_A ∗ 1_B`.
pub fn sum_counts(a: &GSet, b: &GSet) -> Result<DensityMap<i64>> {
    convolve(&DensityMap::indicator(a), &DensityMap::indicator(b))
}

/// Additive energy: the number of `(x, y, z) ∈ A³` with `x + y − z ∈ A`,
/// computed as `Σ_s (1_A ∗ 1_{−A})(s)²`.
pub fn energy(a: &GSet) -> u128 {
    if a.is_empty() {
        return 0;
    }
    difference_counts(a)
        .values()
        .iter()
        .map(|&r| (r as u128) * (r as u128))
        .sum()
}

/// `|A + A| / |A|`.
pub fn doubling(a: &GSet) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Rational::new(sumset(a, a)?.len() as i64, a.len() as i64))
}

/// `Sym_η(A) = {x : 1_A ∗ 1_{−A}(x) ≥ η|A|}`, compared exactly.
pub fn symmetry_set(a: &GSet, eta: Rational) -> Result<GSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if eta <= Rational::from_integer(0) || eta > Rational::from_integer(1) {
        return Err(Error::BadThreshold(eta.to_string()));
    }
    let r = difference_counts(a);
    let (num, den) = (*eta.numer() as i128, *eta.denom() as i128);
    let size = a.len() as i128;
    Ok(GSet::from_indices(
        a.group(),
        r.values()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c as i128 * den >= num * size)
            .map(|(i, _)| i),
    ))
}
