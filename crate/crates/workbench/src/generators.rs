//! Generators for the standard example classes of sets with large energy.

use aal_core::setops::sumset;
use aal_core::{is_coset, subgroup_generated, Error, GSet, GroupElement, GroupSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, WorkbenchError};

/// Shuffles tried before giving up on independent cosets.
const INDEPENDENCE_RETRIES: usize = 16;
/// Largest coefficient box enumerated by the independence check.
const COEFFICIENT_CAP: u128 = 1 << 24;

/// Keeps each element of the coset `h` independently with probability `delta`.
pub fn gen_random_subset(h: &GSet, delta: f64, seed: u64) -> Result<GSet> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::BadDelta(delta).into());
    }
    if is_coset(h).is_none() {
        return Err(Error::InvalidArgument(format!("{h} is not a coset")).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(GSet::from_indices(
        h.group(),
        h.indices()
            .filter(|_| rng.gen_bool(delta))
            .collect::<Vec<_>>(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependentCosets {
    pub set: GSet,
    pub subgroup: GSet,
    pub representatives: Vec<GroupElement>,
}

/// Order of `x` modulo the subgroup `h`.
fn order_mod(g: &GroupSpec, h: &GSet, x: usize) -> u64 {
    let mut y = x;
    let mut m = 1;
    while !h.contains_idx(y) {
        y = g.add_idx(y, x);
        m += 1;
    }
    m
}

/// Whether `Σ n_i x_i ∈ H` forces `n_i x_i ∈ H` for every `i`. Coefficients
/// only matter modulo the order of `x_i` in `G/H`, so the box
/// `∏ [0, ord_i)` is enumerated exhaustively.
pub fn independent_mod(h: &GSet, xs: &[usize]) -> Result<bool> {
    let g = h.group();
    let orders: Vec<u64> = xs.iter().map(|&x| order_mod(g, h, x)).collect();
    let total: u128 = orders.iter().map(|&o| o as u128).product();
    if total > COEFFICIENT_CAP {
        return Err(Error::CapExceeded {
            size: total,
            cap: COEFFICIENT_CAP as usize,
        }
        .into());
    }
    let mut n = vec![0u64; xs.len()];
    loop {
        let sum = xs
            .iter()
            .zip(&n)
            .fold(0, |acc, (&x, &c)| g.add_idx(acc, g.scale_idx(x, c as i64)));
        if h.contains_idx(sum) && n.iter().any(|&c| c != 0) {
            // Any nonzero coefficient below the order leaves n_i x_i outside H.
            return Ok(false);
        }
        let mut axis = 0;
        loop {
            if axis == n.len() {
                return Ok(true);
            }
            n[axis] += 1;
            if n[axis] < orders[axis] {
                break;
            }
            n[axis] = 0;
            axis += 1;
        }
    }
}

/// Union of `k` cosets `x_i + H` with the `x_i` independent modulo `H`.
pub fn gen_independent_cosets(
    g: &GroupSpec,
    h_gens: &GSet,
    k: usize,
    seed: u64,
) -> Result<IndependentCosets> {
    let h = subgroup_generated(h_gens);
    if h.group() != g {
        return Err(Error::InvalidArgument("generators live in another group".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outside: Vec<usize> = (0..g.size()).filter(|&x| !h.contains_idx(x)).collect();
    let mut best = 0;
    for _ in 0..INDEPENDENCE_RETRIES {
        let mut order = outside.clone();
        order.shuffle(&mut rng);
        let mut chosen: Vec<usize> = Vec::new();
        for &x in &order {
            if chosen.len() == k {
                break;
            }
            chosen.push(x);
            if !independent_mod(&h, &chosen)? {
                chosen.pop();
            }
        }
        best = best.max(chosen.len());
        if chosen.len() == k {
            let set = GSet::from_indices(
                g,
                chosen
                    .iter()
                    .flat_map(|&x| h.indices().map(move |y| g.add_idx(x, y)))
                    .collect::<Vec<_>>(),
            );
            return Ok(IndependentCosets {
                set,
                subgroup: h,
                representatives: chosen.iter().map(|&x| g.element_at(x)).collect(),
            });
        }
    }
    Err(WorkbenchError::CannotFindIndependent { k, k_max: best })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InternallyIndependent {
    pub set: GSet,
    pub components: Vec<GSet>,
    /// `|H_1 + ⋯ + H_k|`.
    pub sum_size: usize,
    /// `|H_1| ⋯ |H_k|`.
    pub product_size: usize,
}

/// Union of the first `k` coordinate-axis subgroups, after checking
/// `|H_1 + ⋯ + H_k| = |H_1| ⋯ |H_k|`.
pub fn gen_internally_independent(g: &GroupSpec, k: usize) -> Result<InternallyIndependent> {
    if k == 0 || g.rank() < k || g.is_trivial() {
        return Err(WorkbenchError::TooFewFactors {
            factors: if g.is_trivial() { 0 } else { g.rank() },
            k,
        });
    }
    let components: Vec<GSet> = (0..k)
        .map(|axis| {
            let n = g.orders()[axis] as usize;
            GSet::from_indices(g, (0..n).map(|c| c * g.stride(axis)).collect::<Vec<_>>())
        })
        .collect();
    let mut sum = GSet::singleton_zero(g);
    let mut union = GSet::empty(g);
    for h in &components {
        sum = sumset(&sum, h)?;
        union = union.union(h)?;
    }
    let product_size = components.iter().map(GSet::len).product();
    if sum.len() != product_size {
        return Err(Error::InvalidArgument("axis subgroups are not independent".into()).into());
    }
    Ok(InternallyIndependent {
        set: union,
        components,
        sum_size: sum.len(),
        product_size,
    })
}

/// `{start + i·step : 0 ≤ i < length}`, rejected if any two terms coincide.
pub fn gen_ap(
    g: &GroupSpec,
    start: &GroupElement,
    step: &GroupElement,
    length: usize,
) -> Result<GSet> {
    let s = g.index_of(start)?;
    let d = g.index_of(step)?;
    let mut terms = Vec::with_capacity(length);
    let mut x = s;
    for _ in 0..length {
        terms.push(x);
        x = g.add_idx(x, d);
    }
    let set = GSet::from_indices(g, terms);
    if set.len() != length {
        return Err(WorkbenchError::NonInjectiveAP {
            length,
            distinct: set.len(),
        });
    }
    Ok(set)
}

/// Removes `⌊η|H|⌋` elements of `H` and adds `m` outside elements, where `m` is
/// the largest count keeping `|A ∩ H| ≥ (1 − ε)|A|`.
pub fn gen_near_coset(h: &GSet, eps: f64, eta: f64, seed: u64) -> Result<GSet> {
    for (name, v) in [("eps", eps), ("eta", eta)] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("{name} = {v} outside [0, 1)")).into());
        }
    }
    let g = h.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drop = (eta * h.len() as f64).floor() as usize;
    let mut inside: Vec<usize> = h.indices().collect();
    inside.shuffle(&mut rng);
    let kept = &inside[drop.min(inside.len())..];
    let mut outside: Vec<usize> = (0..g.size()).filter(|&x| !h.contains_idx(x)).collect();
    let add = ((eps * kept.len() as f64 / (1.0 - eps)).floor() as usize).min(outside.len());
    let (added, _) = outside.partial_shuffle(&mut rng, add);
    Ok(GSet::from_indices(
        g,
        kept.iter().chain(added.iter()).copied().collect::<Vec<_>>(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use aal_core::setops::energy;

    #[test]
    fn random_subset_edges() {
        let g: GroupSpec = "Z2^5".parse().unwrap();
        let h = GSet::full(&g);
        assert_eq!(gen_random_subset(&h, 1.0, 3).unwrap(), h);
        assert!(gen_random_subset(&h, 1e-9, 3).unwrap().is_empty());
        assert!(gen_random_subset(&h, 0.0, 3).is_err());
        let a = gen_random_subset(&h, 0.5, 42).unwrap();
        assert_eq!(a, gen_random_subset(&h, 0.5, 42).unwrap());
        assert!(gen_random_subset(
            &GSet::parse(&g, "{(0,0,0,0,1),(0,0,0,1,0),(0,0,1,0,0)}").unwrap(),
            0.5,
            0
        )
        .is_err());
    }

    #[test]
    fn independent_cosets_in_vector_space() {
        let g: GroupSpec = "Z2^8".parse().unwrap();
        let out = gen_independent_cosets(&g, &GSet::empty(&g), 4, 1).unwrap();
        assert_eq!(out.set.len(), 4);
        // Over F2 independence means no nonempty subset sums to zero.
        let xs: Vec<usize> = out.set.indices().collect();
        for mask in 1u32..16 {
            let s = (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .fold(0, |acc, i| g.add_idx(acc, xs[i]));
            assert_ne!(s, 0);
        }
        let one =
            gen_independent_cosets(&g, &GSet::parse(&g, "{(1,0,0,0,0,0,0,0)}").unwrap(), 1, 0)
                .unwrap();
        let n = one.set.len() as u128;
        assert_eq!(energy(&one.set), n * n * n);
    }

    #[test]
    fn independent_cosets_pigeonhole() {
        let g = GroupSpec::cyclic(4).unwrap();
        let h = GSet::parse(&g, "{2}").unwrap();
        match gen_independent_cosets(&g, &h, 2, 0) {
            Err(WorkbenchError::CannotFindIndependent { k: 2, k_max: 1 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn independence_check_agrees_with_direct_sum_size() {
        let g = GroupSpec::new(vec![4, 6]).unwrap();
        let h = GSet::singleton_zero(&g);
        for x in 1..g.size() {
            for y in 1..g.size() {
                let gens = GSet::from_indices(&g, [x, y]);
                let span = subgroup_generated(&gens).len() as u64;
                let product = order_mod(&g, &h, x) * order_mod(&g, &h, y);
                assert_eq!(
                    independent_mod(&h, &[x, y]).unwrap(),
                    span == product,
                    "{x} {y}"
                );
            }
        }
    }

    #[test]
    fn axis_subgroups() {
        let g = GroupSpec::new(vec![5, 5]).unwrap();
        let out = gen_internally_independent(&g, 2).unwrap();
        assert_eq!(out.set.len(), 9);
        assert_eq!(out.sum_size, 25);
        assert_eq!(gen_internally_independent(&g, 1).unwrap().set.len(), 5);
        assert!(matches!(
            gen_internally_independent(&g, 3),
            Err(WorkbenchError::TooFewFactors { factors: 2, k: 3 })
        ));
    }

    #[test]
    fn progressions() {
        let g = GroupSpec::cyclic(100).unwrap();
        let a = gen_ap(&g, &g.zero(), &g.element(&[1]).unwrap(), 3).unwrap();
        assert_eq!(energy(&a), 19);
        assert!(matches!(
            gen_ap(&g, &g.zero(), &g.element(&[50]).unwrap(), 3),
            Err(WorkbenchError::NonInjectiveAP {
                length: 3,
                distinct: 2
            })
        ));
    }

    #[test]
    fn near_coset_counts() {
        let g: GroupSpec = "Z2^7".parse().unwrap();
        let h = GSet::from_indices(&g, 0..64);
        assert_eq!(gen_near_coset(&h, 0.0, 0.0, 0).unwrap(), h);
        let a = gen_near_coset(&h, 0.05, 0.05, 1).unwrap();
        let inside = a.intersection_len(&h).unwrap() as f64;
        assert!(inside >= 0.95 * a.len() as f64);
        assert!(inside >= 0.95 * h.len() as f64);
        let n = a.len() as f64;
        assert!(energy(&a) as f64 >= 0.6 * n * n * n);
    }
}
