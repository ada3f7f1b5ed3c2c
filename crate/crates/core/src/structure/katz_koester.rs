//! Downward iteration producing a large symmetry set of `A + A′`.
//!
//! Each step holds `A″ ⊆ A` with `|A + A″| ≤ M|A|` and `|A″ + A″| ≤ L|A″|`,
//! and looks at `S = {x : |A″ ∩ (x + A″)| ≥ |A″|/2L}`. Either every `x ∈ S`
//! has `1_{A+A″} ∗ 1_{−(A+A″)}(x) ≥ R|A + A″|` with `R = K^{−η}`, and the
//! iteration stops, or some `x ∈ S` violates it and `A″` is replaced by
//! `A″ ∩ (x + A″)`, with `M ← R·M` and `L ← 2L²`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::gset::GSet;
use crate::setops::{difference_counts, doubling, sumset, translate_idx};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Every `x ∈ S` clears the threshold; the iteration stops.
    Terminate,
    /// A violating `x` was found and `A″` shrinks.
    Refine,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationStep {
    pub a_current: GSet,
    /// Upper bound on `|A + A″| / |A|` carried by the iteration.
    pub m: f64,
    #[serde(with = "crate::serde_util::display")]
    pub l: BigRational,
    /// Measured `|A + A″| / |A|`.
    #[serde(with = "crate::serde_util::ratio")]
    pub sum_ratio: Rational,
    pub s_size: usize,
    pub branch: Branch,
    pub chosen_x: Option<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationTrace {
    pub input: GSet,
    #[serde(with = "crate::serde_util::ratio")]
    pub k: Rational,
    pub eta: f64,
    /// `R = K^{−η}`.
    pub threshold: f64,
    pub steps: Vec<IterationStep>,
    /// The final `A″`.
    pub final_set: Option<GSet>,
    /// The final `S`, contained in `final_sym_set`.
    pub witness: Option<GSet>,
    /// `Sym_R(A + A″)` computed exactly for the final `A″`.
    pub final_sym_set: Option<GSet>,
    pub completed: bool,
}

impl IterationTrace {
    /// `M` strictly decreases across refining steps.
    pub fn m_strictly_decreasing(&self) -> bool {
        self.steps.windows(2).all(|w| w[1].m < w[0].m)
    }
}

pub fn katz_koester_iterate(a: &GSet, eta: f64, max_steps: usize) -> Result<IterationTrace> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::BadThreshold(eta.to_string()));
    }
    let k = doubling(a)?;
    let kf = k.to_f64().unwrap();
    let r = kf.powf(-eta);
    let mut trace = IterationTrace {
        input: a.clone(),
        k,
        eta,
        threshold: r,
        steps: Vec::new(),
        final_set: None,
        witness: None,
        final_sym_set: None,
        completed: false,
    };
    let g = a.group();
    let mut current = a.clone();
    let mut m = kf;
    let mut l = BigRational::new(BigInt::from(*k.numer()), BigInt::from(*k.denom()));

    loop {
        if trace.steps.len() >= max_steps {
            return Err(Error::StepLimit {
                steps: trace.steps.len(),
                trace: Box::new(trace),
            });
        }
        // x ∈ S iff r(x)·2L ≥ |A″|, compared exactly.
        let r_cur = difference_counts(&current);
        let two_l = &l * BigInt::from(2);
        let size = BigInt::from(current.len());
        let s = GSet::from_indices(
            g,
            r_cur
                .values()
                .iter()
                .enumerate()
                .filter(|(_, &c)| {
                    c > 0 && &two_l * BigInt::from(c) >= BigRational::from_integer(size.clone())
                })
                .map(|(x, _)| x),
        );
        let big = sumset(a, &current)?;
        let big_counts = difference_counts(&big);
        let need = r * big.len() as f64;
        let violator = s
            .indices()
            .find(|&x| (big_counts.values()[x] as f64) < need);
        let sum_ratio = Rational::new(big.len() as i64, a.len() as i64);

        match violator {
            None => {
                let sym = GSet::from_indices(
                    g,
                    big_counts
                        .values()
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c as f64 >= need)
                        .map(|(x, _)| x),
                );
                trace.steps.push(IterationStep {
                    a_current: current.clone(),
                    m,
                    l,
                    sum_ratio,
                    s_size: s.len(),
                    branch: Branch::Terminate,
                    chosen_x: None,
                });
                trace.final_set = Some(current);
                trace.witness = Some(s);
                trace.final_sym_set = Some(sym);
                trace.completed = true;
                return Ok(trace);
            }
            Some(x) => {
                let next = current.intersection(&translate_idx(&current, x))?;
                trace.steps.push(IterationStep {
                    a_current: current.clone(),
                    m,
                    l: l.clone(),
                    sum_ratio,
                    s_size: s.len(),
                    branch: Branch::Refine,
                    chosen_x: Some(g.element_at(x)),
                });
                if next.is_empty() {
                    return Err(Error::EmptyIntersection {
                        step: trace.steps.len(),
                    });
                }
                current = next;
                m *= r;
                l = &l * &l * BigInt::from(2);
            }
        }
    }
}
