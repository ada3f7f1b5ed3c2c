//! End-to-end runs: almost periods, a translate of `X − X` rich in `A`, and
//! growth checks on `X`.

use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::croot_sisask::{croot_sisask, AlmostPeriodSet, CrootSisaskParams};
use super::growth_checks::{chang_growth_test, ChangReport};
use super::katz_koester::{katz_koester_iterate, IterationTrace};
use crate::density::{convolve, DensityMap};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::gset::GSet;
use crate::progressions::{growth_order, GrowthOrder};
use crate::setops::{
    difference_set, doubling, iterated_sumset, negate, sum_counts, sumset, translate_idx,
};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `f = 1_A` in `ℓ²` with `ε = 1/(2k√K)`.
    Basic,
    /// Symmetry set from the downward iteration, then `f = 1_{A+A′}` against it.
    Schoen,
    /// `f = 1_{A+A}` in `ℓ^p` with `p = ⌈log₂ K⌉ + 1`.
    Lp,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(Variant::Basic),
            "schoen" => Ok(Variant::Schoen),
            "lp" => Ok(Variant::Lp),
            other => Err(Error::Parse(format!("unknown pipeline variant `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineParams {
    /// Multiple of `X` whose containment is certified.
    pub k: usize,
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub eta: f64,
    pub kk_max_steps: usize,
    pub n_max: usize,
    /// Largest dimension tried in the covering-growth search.
    pub r_max: usize,
    /// Defaults to `⌈k²K⌉`.
    pub l: Option<usize>,
    /// Fixed covering dimension; searched over `1..=r_max` when absent.
    pub r: Option<usize>,
    pub max_base_tuples: usize,
    /// Overrides the variant's default `ε`.
    pub eps: Option<f64>,
    /// Overrides the variant's default `p`.
    pub p: Option<f64>,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            k: 2,
            samples: 8,
            trials: 256,
            seed: 0,
            eta: 0.5,
            kk_max_steps: 32,
            n_max: 8,
            r_max: 8,
            l: None,
            r: None,
            max_base_tuples: 64,
            eps: None,
            p: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentCheck {
    pub k: usize,
    pub kx_size: usize,
    /// `|2A − 2A|`.
    pub target_size: usize,
    pub holds: bool,
    pub first_violation: Option<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerProductCheck {
    /// `min_{x ∈ kX} ⟨τ_x 1_{A+A}, 1_A ∗ 1_A⟩`.
    pub min_inner: i64,
    /// `|A|²`; the check is `2·min_inner ≥ |A|²`.
    pub full_inner: i64,
    pub holds: bool,
    pub first_violation: Option<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub variant: Variant,
    pub params: PipelineParams,
    pub input: GSet,
    #[serde(with = "crate::serde_util::ratio")]
    pub doubling: Rational,
    pub eps: f64,
    pub p: f64,
    pub l: usize,
    pub almost_periods: AlmostPeriodSet,
    pub x_set: GSet,
    pub difference_set_size: usize,
    pub y_set: GSet,
    pub y_translate: GroupElement,
    pub y_is_translate: bool,
    pub intersection_size: usize,
    /// `|A ∩ Y| / |A|`.
    #[serde(with = "crate::serde_util::ratio")]
    pub density_in_a: Rational,
    /// `|A ∩ Y| / |Y|`.
    #[serde(with = "crate::serde_util::ratio")]
    pub density_in_y: Rational,
    pub growth: GrowthOrder,
    pub chang: ChangReport,
    pub containment: Option<ContainmentCheck>,
    pub inner_product: Option<InnerProductCheck>,
    pub iteration: Option<IterationTrace>,
    /// Every emitted theorem check passed.
    pub passed: bool,
}

pub fn pipeline(a: &GSet, variant: Variant, params: &PipelineParams) -> Result<PipelineReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if params.k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let g = a.group();
    let k = doubling(a)?;
    let kf = k.to_f64().unwrap();
    let kk = params.k as f64;
    let l = params
        .l
        .unwrap_or_else(|| (kk * kk * kf).ceil() as usize)
        .max(1);
    let a_plus_a = sumset(a, a)?;

    let mut iteration = None;
    let (f, avg, eps, p, label) = match variant {
        Variant::Basic => (
            DensityMap::<f64>::indicator(a),
            a.clone(),
            params.eps.unwrap_or(1.0 / (2.0 * kk * kf.sqrt())),
            params.p.unwrap_or(2.0),
            "1_A".to_string(),
        ),
        Variant::Schoen => {
            let trace = katz_koester_iterate(a, params.eta, params.kk_max_steps)
                .map_err(Error::stage("katz-koester"))?;
            let a_prime = trace.final_set.clone().expect("completed trace");
            let s = trace.witness.clone().expect("completed trace");
            iteration = Some(trace);
            (
                DensityMap::indicator(&sumset(a, &a_prime)?),
                s,
                params.eps.unwrap_or(1.0 / (2.0 * kk)),
                params.p.unwrap_or(2.0),
                "1_{A+A'}".to_string(),
            )
        }
        Variant::Lp => (
            DensityMap::indicator(&a_plus_a),
            negate(a),
            params.eps.unwrap_or(1.0 / (4.0 * kk)),
            params.p.unwrap_or((kf.log2().ceil() + 1.0).max(2.0)),
            "1_{A+A}".to_string(),
        ),
    };

    let cs_params = CrootSisaskParams {
        eps,
        p,
        samples: params.samples,
        trials: params.trials,
        seed: params.seed,
        max_base_tuples: params.max_base_tuples,
        label,
    };
    let almost_periods =
        croot_sisask(&f, &avg, &cs_params).map_err(Error::stage("croot-sisask"))?;
    let x = almost_periods.x_set.clone();

    // Y = t + (X − X) maximising |A ∩ Y| = (1_A ∗ 1_{−D})(t); smallest t wins ties.
    let d = difference_set(&x, &x)?;
    let counts = sum_counts(a, &negate(&d))?;
    let (t, best) = counts
        .values()
        .iter()
        .enumerate()
        .fold(
            (0usize, i64::MIN),
            |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc },
        );
    let y = translate_idx(&d, t);
    let y_is_translate = translate_idx(&y, g.neg_idx(t)) == d;
    let intersection_size = y.intersection_len(a)?;
    debug_assert_eq!(intersection_size as i64, best);

    let growth = growth_order(&x, params.n_max.max(2)).map_err(Error::stage("growth"))?;
    let chang = match params.r {
        Some(r) => chang_growth_test(&x, r, params.n_max)?,
        None => {
            let mut last = None;
            for r in 1..=params.r_max.max(1) {
                let rep = chang_growth_test(&x, r, params.n_max).map_err(Error::stage("chang"))?;
                let done = rep.hypothesis_holds;
                last = Some(rep);
                if done {
                    break;
                }
            }
            last.expect("at least one dimension tried")
        }
    };

    let needs_kx = matches!(variant, Variant::Basic | Variant::Lp);
    let kx = if needs_kx {
        Some(iterated_sumset(&x, params.k)?)
    } else {
        None
    };
    let containment = match &kx {
        Some(kx) => {
            let target = difference_set(&a_plus_a, &a_plus_a)?;
            let first = kx.first_outside(&target)?;
            Some(ContainmentCheck {
                k: params.k,
                kx_size: kx.len(),
                target_size: target.len(),
                holds: first.is_none(),
                first_violation: first.map(|i| g.element_at(i)),
            })
        }
        None => None,
    };
    let inner_product = match (&kx, variant) {
        (Some(kx), Variant::Lp) => {
            let conv = convolve(&DensityMap::<i64>::indicator(a), &DensityMap::indicator(a))?;
            let ind: DensityMap<i64> = DensityMap::indicator(&a_plus_a);
            let full = (a.len() * a.len()) as i64;
            let mut min_inner = i64::MAX;
            let mut first_violation = None;
            for xi in kx.indices() {
                let v = ind.translate_idx(xi).inner(&conv)?;
                min_inner = min_inner.min(v);
                if 2 * v < full && first_violation.is_none() {
                    first_violation = Some(g.element_at(xi));
                }
            }
            Some(InnerProductCheck {
                min_inner,
                full_inner: full,
                holds: first_violation.is_none(),
                first_violation,
            })
        }
        _ => None,
    };

    let passed = y_is_translate
        && containment.as_ref().is_none_or(|c| c.holds)
        && inner_product.as_ref().is_none_or(|c| c.holds)
        && chang.conclusion_holds() != Some(false);

    Ok(PipelineReport {
        variant,
        params: params.clone(),
        input: a.clone(),
        doubling: k,
        eps,
        p,
        l,
        difference_set_size: d.len(),
        density_in_a: Rational::new(intersection_size as i64, a.len() as i64),
        density_in_y: Rational::new(intersection_size as i64, y.len() as i64),
        intersection_size,
        y_translate: g.element_at(t),
        y_is_translate,
        y_set: y,
        x_set: x,
        almost_periods,
        growth,
        chang,
        containment,
        inner_product,
        iteration,
        passed,
    })
}
