//! Operations applied to each instance of a sweep, producing one CSV record.

use std::sync::OnceLock;

use aal_core::progressions::{
    bohr_as_progression, bohr_to_progression, growth_order, smallest_hypothesis_dimension,
};
use aal_core::setops::{energy, sumset, symmetry_set};
use aal_core::spectral::{check_bohr_containment, measure_bohr_size};
use aal_core::structure::{
    bsg_extract, chang_growth_test, croot_sisask, lopez_ross_inner, pipeline, plunnecke_check,
    CrootSisaskParams, PipelineParams, Variant,
};
use aal_core::{all_cosets, is_coset, CharSet, DensityMap, Error, GSet, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OperationSpec {
    Energy,
    CosetLaw,
    Sumset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        other: Option<String>,
    },
    Sym {
        eta: String,
    },
    Plunnecke {
        n_max: usize,
    },
    Chang {
        k: usize,
        n_max: usize,
    },
    LopezRoss,
    BohrContainment {
        l: usize,
        eps: f64,
    },
    /// Sets with `E(A) ≥ threshold·|A|³` against their nearest coset.
    NearestCoset {
        threshold: f64,
    },
    Growth {
        n_max: usize,
    },
    BohrSize {
        eps: f64,
        n_max: usize,
    },
    CrootSisask {
        #[serde(flatten)]
        params: CrootSisaskParams,
    },
    Bsg {
        delta: f64,
        trials: usize,
        seed: u64,
    },
    Pipeline {
        variant: Variant,
        #[serde(default)]
        params: PipelineParams,
    },
    /// Instances are read as sets of characters.
    BohrProgression {
        delta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d_claim: Option<usize>,
        #[serde(default = "default_d_max")]
        d_max: usize,
    },
}

fn default_d_max() -> usize {
    8
}

impl OperationSpec {
    /// Measured columns, in CSV order.
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            OperationSpec::Energy => &["size", "energy", "energy_ratio"],
            OperationSpec::CosetLaw => &["size", "energy", "cubic", "is_coset"],
            OperationSpec::Sumset { .. } => &["size", "sumset_size", "sumset"],
            OperationSpec::Sym { .. } => &["size", "sym_size", "sym"],
            OperationSpec::Plunnecke { .. } => &["size", "doubling", "max_slack", "violations"],
            OperationSpec::Chang { .. } => &[
                "size",
                "hypothesis_lhs",
                "hypothesis_rhs",
                "hypothesis_holds",
                "violations",
            ],
            OperationSpec::LopezRoss => &["size", "inner", "expected"],
            OperationSpec::BohrContainment { .. } => &[
                "size",
                "doubling",
                "radius",
                "lspec_size",
                "bohr_size",
                "difference_set_size",
            ],
            OperationSpec::NearestCoset { .. } => {
                &["size", "energy_ratio", "hit", "coset_distance", "bound"]
            }
            OperationSpec::Growth { .. } => &["size", "order", "worst_n", "profile"],
            OperationSpec::BohrSize { .. } => {
                &["size", "lspec_size", "bohr_size", "ratio", "growth_order"]
            }
            OperationSpec::CrootSisask { .. } => &[
                "size",
                "x_size",
                "eps_certified",
                "good_tuples",
                "best_error",
                "rejected",
            ],
            OperationSpec::Bsg { .. } => &[
                "size",
                "subset_size",
                "doubling",
                "size_exponent",
                "doubling_exponent",
            ],
            OperationSpec::Pipeline { .. } => &[
                "size",
                "doubling",
                "x_size",
                "y_size",
                "intersection",
                "density_in_y",
                "growth_order",
                "containment",
            ],
            OperationSpec::BohrProgression { .. } => &[
                "gamma_size",
                "d_claim",
                "hypothesis",
                "bohr_size",
                "progression_size",
                "dimension",
                "equal",
            ],
        }
    }
}

/// Shared per-sweep data.
#[derive(Default)]
pub struct EvalContext {
    cosets: OnceLock<Vec<GSet>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub values: Vec<String>,
    /// `ok`, `skipped: …` when a precondition is not met, or `error: …`.
    pub status: String,
    pub pass: bool,
    pub detail: Value,
}

impl Evaluation {
    fn ok(values: Vec<String>, pass: bool, detail: Value) -> Self {
        Evaluation {
            values,
            status: "ok".into(),
            pass,
            detail,
        }
    }

    fn skipped(width: usize, reason: impl std::fmt::Display, detail: Value) -> Self {
        Evaluation {
            values: vec![String::new(); width],
            status: format!("skipped: {reason}"),
            pass: true,
            detail,
        }
    }
}

fn s(v: impl ToString) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Runs `op` on `set`. Errors become a failing record rather than aborting.
pub fn evaluate(op: &OperationSpec, set: &GSet, ctx: &EvalContext) -> Evaluation {
    match evaluate_inner(op, set, ctx) {
        Ok(e) => e,
        Err(err) => Evaluation {
            values: vec![String::new(); op.columns().len()],
            status: format!("error: {err}"),
            pass: false,
            detail: json!({ "error": err.to_string() }),
        },
    }
}

fn evaluate_inner(op: &OperationSpec, a: &GSet, ctx: &EvalContext) -> Result<Evaluation> {
    let n = a.len();
    let width = op.columns().len();
    Ok(match op {
        OperationSpec::Energy => {
            let e = energy(a);
            let ratio = if n == 0 {
                0.0
            } else {
                e as f64 / (n as f64).powi(3)
            };
            Evaluation::ok(
                vec![s(n), s(e), s(ratio)],
                true,
                json!({ "size": n, "energy": e.to_string(), "energy_ratio": ratio }),
            )
        }
        OperationSpec::CosetLaw => {
            let e = energy(a);
            let cubic = n > 0 && e == (n as u128).pow(3);
            let coset = is_coset(a);
            let pass = cubic == coset.is_some();
            Evaluation::ok(
                vec![s(n), s(e), s(cubic), s(coset.is_some())],
                pass,
                json!({ "energy": e.to_string(), "cubic": cubic, "coset": coset }),
            )
        }
        OperationSpec::Sumset { other } => {
            let b = match other {
                Some(lit) => GSet::parse(a.group(), lit)?,
                None => a.clone(),
            };
            let sum = sumset(a, &b)?;
            Evaluation::ok(
                vec![s(n), s(sum.len()), s(&sum)],
                true,
                json!({ "sumset": sum, "size": sum.len() }),
            )
        }
        OperationSpec::Sym { eta } => {
            let eta: Rational = eta
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad threshold `{eta}`")))?;
            let sym = symmetry_set(a, eta)?;
            Evaluation::ok(
                vec![s(n), s(sym.len()), s(&sym)],
                true,
                json!({ "eta": eta.to_string(), "sym": sym }),
            )
        }
        OperationSpec::Plunnecke { n_max } => {
            let r = plunnecke_check(a, *n_max)?;
            let max_slack = r.rows.iter().map(|row| row.slack).fold(0.0, f64::max);
            Evaluation::ok(
                vec![s(n), s(r.k), s(max_slack), s(r.violations)],
                r.violations == 0,
                serde_json::to_value(&r)?,
            )
        }
        OperationSpec::Chang { k, n_max } => {
            let r = chang_growth_test(a, *k, *n_max)?;
            Evaluation::ok(
                vec![
                    s(n),
                    s(r.hypothesis_lhs),
                    s(&r.hypothesis_rhs),
                    s(r.hypothesis_holds),
                    s(r.violations),
                ],
                r.violations == 0,
                serde_json::to_value(&r)?,
            )
        }
        OperationSpec::LopezRoss => {
            let r = lopez_ross_inner(a)?;
            Evaluation::ok(
                vec![s(n), s(r.inner), s(r.expected)],
                r.holds,
                serde_json::to_value(&r)?,
            )
        }
        OperationSpec::BohrContainment { l, eps } => {
            let r = check_bohr_containment(a, *l, *eps)?;
            Evaluation::ok(
                vec![
                    s(n),
                    s(r.k),
                    s(r.radius),
                    s(r.lspec_size),
                    s(r.bohr_size),
                    s(r.difference_set_size),
                ],
                r.passed,
                serde_json::to_value(&r)?,
            )
        }
        OperationSpec::NearestCoset { threshold } => {
            if n == 0 {
                return Err(Error::EmptySet.into());
            }
            let e = energy(a);
            let ratio = e as f64 / (n as f64).powi(3);
            let hit = ratio >= *threshold;
            let bound = n.div_ceil(3);
            let cosets = ctx.cosets.get_or_init(|| all_cosets(a.group()));
            let (distance, nearest) = cosets
                .iter()
                .map(|c| (c.symmetric_difference_len(a).expect("same group"), c))
                .min_by_key(|(d, _)| *d)
                .expect("the trivial coset exists");
            Evaluation::ok(
                vec![s(n), s(ratio), s(hit), s(distance), s(bound)],
                !hit || distance <= bound,
                json!({ "energy": e.to_string(), "nearest_coset": nearest, "distance": distance }),
            )
        }
        OperationSpec::Growth { n_max } => {
            let r = growth_order(a, *n_max)?;
            let profile: Vec<String> = r.profile.sizes.iter().map(usize::to_string).collect();
            Evaluation::ok(
                vec![s(n), s(r.order), s(r.worst_n), profile.join(";")],
                true,
                serde_json::to_value(&r)?,
            )
        }
        OperationSpec::BohrSize { eps, n_max } => {
            let r = measure_bohr_size(a, *eps, *n_max)?;
            Evaluation::ok(
                vec![
                    s(n),
                    s(r.lspec_size),
                    s(r.bohr_size),
                    s(r.ratio),
                    s(r.growth.order),
                ],
                true,
                serde_json::to_value(&r)?,
            )
        }
        OperationSpec::CrootSisask { params } => {
            let f: DensityMap<f64> = DensityMap::indicator(a);
            let mut params = params.clone();
            if params.label.is_empty() {
                params.label = "1_A".into();
            }
            match croot_sisask(&f, a, &params) {
                Ok(r) => Evaluation::ok(
                    vec![
                        s(n),
                        s(r.x_set.len()),
                        s(r.eps_certified),
                        s(r.good_tuples),
                        s(r.best_error),
                        s(r.rejected),
                    ],
                    r.eps_certified <= r.eps_requested && r.x_set.contains_idx(0),
                    serde_json::to_value(&r)?,
                ),
                Err(Error::NoGoodTuples { best_error }) => Evaluation::skipped(
                    width,
                    format!("no good tuples (best error {best_error})"),
                    json!({ "best_error": best_error }),
                ),
                Err(e) => return Err(e.into()),
            }
        }
        OperationSpec::Bsg {
            delta,
            trials,
            seed,
        } => match bsg_extract(a, *delta, *trials, *seed) {
            Ok(r) => {
                let c = &r.certificate;
                Evaluation::ok(
                    vec![
                        s(n),
                        s(c.subset_size),
                        s(c.doubling),
                        opt(c.size_exponent),
                        opt(c.doubling_exponent),
                    ],
                    c.is_subset,
                    serde_json::to_value(&r)?,
                )
            }
            Err(e @ Error::EnergyTooSmall { .. }) => Evaluation::skipped(width, e, Value::Null),
            Err(e) => return Err(e.into()),
        },
        OperationSpec::Pipeline { variant, params } => {
            let r = pipeline(a, *variant, params)?;
            Evaluation::ok(
                vec![
                    s(n),
                    s(r.doubling),
                    s(r.x_set.len()),
                    s(r.y_set.len()),
                    s(r.intersection_size),
                    s(r.density_in_y),
                    s(r.growth.order),
                    r.containment
                        .as_ref()
                        .map(|c| s(c.holds))
                        .unwrap_or_default(),
                ],
                r.passed,
                serde_json::to_value(&r)?,
            )
        }
        OperationSpec::BohrProgression {
            delta,
            d_claim,
            d_max,
        } => {
            let gamma = CharSet::from_dual_set(a.clone());
            let hyp = match d_claim {
                Some(d) => {
                    let h = aal_core::progressions::check_bohr_hypothesis(&gamma, *delta, *d)?;
                    h.holds.then_some(h)
                }
                None => smallest_hypothesis_dimension(&gamma, *delta, *d_max)?,
            };
            let Some(hyp) = hyp else {
                // Converted anyway; the certificate is still enforced.
                let out = bohr_as_progression(&gamma, *delta)?;
                let c = &out.certificate;
                return Ok(Evaluation {
                    values: vec![
                        s(n),
                        d_claim.map(s).unwrap_or_default(),
                        s(false),
                        s(c.bohr_size),
                        s(c.progression_size),
                        s(c.dimension),
                        s(c.equal),
                    ],
                    status: "skipped: hypothesis fails".into(),
                    pass: true,
                    detail: serde_json::to_value(&out)?,
                });
            };
            let out = bohr_to_progression(&gamma, *delta, hyp.d_claim)?;
            let c = &out.certificate;
            Evaluation::ok(
                vec![
                    s(n),
                    s(hyp.d_claim),
                    s(true),
                    s(c.bohr_size),
                    s(c.progression_size),
                    s(c.dimension),
                    s(c.equal),
                ],
                c.equal,
                json!({
                    "progression": out.progression.to_literal(),
                    "certificate": c,
                    "hypothesis": out.hypothesis,
                }),
            )
        }
    })
}
