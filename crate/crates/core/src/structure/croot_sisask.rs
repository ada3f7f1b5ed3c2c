//! Almost periods of `f ∗ μ_A` by random sampling, each one certified.

use fixedbitset::FixedBitSet;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{convolve_with, lp_norm, ConvolutionMethod, DensityMap};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::gset::GSet;
use crate::scalar::FftScalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CrootSisaskParams {
    pub eps: f64,
    /// Norm exponent, `2 ≤ p < ∞`.
    pub p: f64,
    /// Length of each sampled tuple.
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    /// Good tuples whose diagonal shifts are explored.
    pub max_base_tuples: usize,
    /// Free-form description of `f`, echoed in the report.
    pub label: String,
}

impl Default for CrootSisaskParams {
    fn default() -> Self {
        CrootSisaskParams {
            eps: 0.5,
            p: 2.0,
            samples: 8,
            trials: 256,
            seed: 0,
            max_base_tuples: 64,
            label: String::new(),
        }
    }
}

/// Certified almost periods: `‖τ_x(f ∗ μ_A) − f ∗ μ_A‖_p ≤ eps_certified ‖f‖_p`
/// for every `x` in `x_set`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostPeriodSet {
    pub x_set: GSet,
    pub a_set: GSet,
    pub f_id: String,
    pub p: f64,
    pub eps_requested: f64,
    /// Largest certified ratio over `x_set`.
    pub eps_certified: f64,
    /// Floating-point tolerance for independent recomputation of the ratios.
    pub slack: f64,
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub good_tuples: usize,
    pub best_error: f64,
    /// Proposed shifts that failed certification.
    pub rejected: usize,
    pub f_norm: f64,
}

/// `‖τ_s a − b‖_p` with `τ_s a (y) = a(y + s)`.
fn shifted_distance<T: Float>(g: &GroupSpec, a: &[T], b: &[T], s: usize, p: T) -> T {
    let two = T::one() + T::one();
    let acc = (0..b.len()).fold(T::zero(), |acc, y| {
        let d = (a[g.add_idx(y, s)] - b[y]).abs();
        acc + if p == two { d * d } else { d.powf(p) }
    });
    acc.powf(p.recip())
}

/// Samples `trials` tuples from `A^k`, keeps those whose average of
/// translates approximates `f ∗ μ_A` within `eps/2`, proposes their diagonal
/// shifts, and keeps the proposals that pass exact recertification.
pub fn croot_sisask<T: FftScalar>(
    f: &DensityMap<T>,
    a: &GSet,
    params: &CrootSisaskParams,
) -> Result<AlmostPeriodSet> {
    let g = f.group().clone();
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    a.same_group(&GSet::empty(&g))?;
    if !(params.eps > 0.0 && params.eps.is_finite()) {
        return Err(Error::BadEps(params.eps));
    }
    if !(params.p >= 2.0 && params.p.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "p = {} outside [2, ∞)",
            params.p
        )));
    }
    if params.samples == 0 || params.trials == 0 {
        return Err(Error::InvalidArgument(
            "samples and trials must be positive".into(),
        ));
    }
    let p = T::from_f64(params.p).unwrap();
    let f_norm = f.lp_norm(p);
    if f_norm == T::zero() {
        return Err(Error::InvalidArgument("f vanishes identically".into()));
    }
    let eps = T::from_f64(params.eps).unwrap();
    let half_eps = eps / (T::one() + T::one());
    let a_count = T::from_count(a.len());

    // h = f ∗ 1_A by direct summation: exact whenever f is integer valued.
    let h = convolve_with(f, &DensityMap::indicator(a), ConvolutionMethod::Direct)?;
    let target: Vec<T> = h.values().iter().map(|&v| v / a_count).collect();

    let a_idx: Vec<usize> = a.indices().collect();
    let f_supp: Vec<(usize, T)> = f
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != T::zero())
        .map(|(i, &v)| (i, v))
        .collect();
    let s_count = T::from_count(params.samples);

    let approximant = |z: &[usize]| -> Vec<T> {
        let mut acc = vec![T::zero(); g.size()];
        for &zi in z {
            for &(y, v) in &f_supp {
                let i = g.add_idx(y, zi);
                acc[i] = acc[i] + v;
            }
        }
        acc.iter_mut().for_each(|v| *v = *v / s_count);
        acc
    };

    let trials: Vec<(Vec<usize>, T)> = (0..params.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(t as u64);
            let z: Vec<usize> = (0..params.samples)
                .map(|_| a_idx[rng.gen_range(0..a_idx.len())])
                .collect();
            let approx = approximant(&z);
            let err = lp_norm(
                &approx
                    .iter()
                    .zip(&target)
                    .map(|(&x, &y)| x - y)
                    .collect::<Vec<_>>(),
                p,
            ) / f_norm;
            (z, err)
        })
        .collect();

    let best_error = trials
        .iter()
        .map(|(_, e)| *e)
        .fold(T::infinity(), |m, e| m.min(e));
    let good: Vec<&Vec<usize>> = trials
        .iter()
        .filter(|(_, e)| *e <= half_eps)
        .map(|(z, _)| z)
        .collect();
    if good.is_empty() {
        return Err(Error::NoGoodTuples {
            best_error: best_error.to_f64().unwrap(),
        });
    }

    // A diagonal shift z + x stays in A^k iff x ∈ ∩_i (A − z_i); the shifted
    // tuple's approximant is τ_{−x} of the original.
    let proposals: Vec<FixedBitSet> = good
        .par_iter()
        .take(params.max_base_tuples)
        .map(|z| {
            let mut out = FixedBitSet::with_capacity(g.size());
            let approx = approximant(z);
            let candidates = a_idx
                .iter()
                .map(|&b| g.sub_idx(b, z[0]))
                .filter(|&x| z.iter().all(|&zi| a.contains_idx(g.add_idx(zi, x))));
            for x in candidates {
                if x == 0 {
                    continue;
                }
                let d = shifted_distance(&g, &approx, &target, g.neg_idx(x), p) / f_norm;
                if d <= half_eps {
                    out.insert(x);
                }
            }
            out
        })
        .collect();
    let mut proposed = FixedBitSet::with_capacity(g.size());
    proposed.insert(0);
    for bits in proposals {
        for x in bits.ones() {
            proposed.insert(x);
            proposed.insert(g.neg_idx(x));
        }
    }

    // Certification against h, independent of the sampled approximants.
    let h_norm_scale = a_count * f_norm;
    let candidates: Vec<usize> = proposed.ones().collect();
    let ratios: Vec<(usize, T)> = candidates
        .par_iter()
        .map(|&x| {
            let r = if x == 0 {
                T::zero()
            } else {
                shifted_distance(&g, h.values(), h.values(), x, p) / h_norm_scale
            };
            (x, r)
        })
        .collect();
    let mut certified = FixedBitSet::with_capacity(g.size());
    let mut eps_certified = T::zero();
    let mut rejected = 0;
    for (x, r) in ratios {
        if r <= eps {
            certified.insert(x);
            eps_certified = eps_certified.max(r);
        } else {
            rejected += 1;
        }
    }
    // Keep the set symmetric: ‖τ_{−x}h − h‖ = ‖τ_x h − h‖, so failures come in pairs
    // up to rounding; drop any unpaired survivor.
    let unpaired: Vec<usize> = certified
        .ones()
        .filter(|&x| !certified.contains(g.neg_idx(x)))
        .collect();
    for x in unpaired {
        certified.set(x, false);
        rejected += 1;
    }

    Ok(AlmostPeriodSet {
        x_set: GSet::from_bits(&g, certified),
        a_set: a.clone(),
        f_id: params.label.clone(),
        p: params.p,
        eps_requested: params.eps,
        eps_certified: eps_certified.to_f64().unwrap(),
        slack: T::certificate_slack().to_f64().unwrap(),
        samples: params.samples,
        trials: params.trials,
        seed: params.seed,
        good_tuples: good.len(),
        best_error: best_error.to_f64().unwrap(),
        rejected,
        f_norm: f_norm.to_f64().unwrap(),
    })
}
