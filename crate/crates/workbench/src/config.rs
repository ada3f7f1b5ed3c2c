//! Experiment configuration: a group, a domain of instances and one operation.

use std::path::Path;

use aal_core::{GSet, GroupSpec};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WorkbenchError};
use crate::generators::{
    gen_ap, gen_independent_cosets, gen_internally_independent, gen_near_coset, gen_random_subset,
};
use crate::ops::OperationSpec;

/// Largest group whose power set may be enumerated.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub group: String,
    pub generator: GeneratorSpec,
    pub operation: OperationSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// Where the instances come from. Sets are read in the configured group; for
/// character operations they are read as sets of dual coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    AllSubsets {
        #[serde(default)]
        include_empty: bool,
    },
    SymmetricSubsets {
        #[serde(default)]
        include_empty: bool,
    },
    RandomSubsets {
        delta: f64,
        count: usize,
        seed: u64,
        /// Coset to sample from; the whole group when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coset: Option<String>,
    },
    Literal {
        sets: Vec<String>,
    },
    Ap {
        start: Vec<i64>,
        step: Vec<i64>,
        lengths: Vec<usize>,
    },
    IndependentCosets {
        subgroup_generators: String,
        k: usize,
        count: usize,
        seed: u64,
    },
    InternallyIndependent {
        k: usize,
    },
    NearCoset {
        coset: String,
        eps: f64,
        eta: f64,
        count: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub descriptor: String,
    pub set: GSet,
}

impl Instance {
    fn literal(set: GSet) -> Self {
        Instance {
            descriptor: set.to_string(),
            set,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str, path: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| WorkbenchError::ConfigParse {
            path: path.to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn group_spec(&self) -> Result<GroupSpec> {
        Ok(self.group.parse()?)
    }
}

impl GeneratorSpec {
    /// The instances in a fixed order.
    pub fn instances(&self, g: &GroupSpec) -> Result<Vec<Instance>> {
        match self {
            GeneratorSpec::AllSubsets { include_empty } => {
                check_exhaustive(g)?;
                let n = g.size();
                let start = if *include_empty { 0 } else { 1 };
                Ok((start..1u64 << n)
                    .map(|mask| Instance::literal(mask_set(g, mask)))
                    .collect())
            }
            GeneratorSpec::SymmetricSubsets { include_empty } => {
                check_exhaustive(g)?;
                // One bit per orbit {x, −x}.
                let orbits: Vec<usize> = (0..g.size()).filter(|&x| x <= g.neg_idx(x)).collect();
                let start = if *include_empty { 0 } else { 1 };
                Ok((start..1u64 << orbits.len())
                    .map(|mask| {
                        let set = GSet::from_indices(
                            g,
                            orbits
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .flat_map(|(_, &x)| [x, g.neg_idx(x)])
                                .collect::<Vec<_>>(),
                        );
                        Instance::literal(set)
                    })
                    .collect())
            }
            GeneratorSpec::RandomSubsets {
                delta,
                count,
                seed,
                coset,
            } => {
                let h = match coset {
                    Some(lit) => GSet::parse(g, lit)?,
                    None => GSet::full(g),
                };
                (0..*count)
                    .map(|i| {
                        let s = seed.wrapping_add(i as u64);
                        Ok(Instance {
                            descriptor: format!("random(delta={delta},seed={s})"),
                            set: gen_random_subset(&h, *delta, s)?,
                        })
                    })
                    .collect()
            }
            GeneratorSpec::Literal { sets } => sets
                .iter()
                .map(|lit| Ok(Instance::literal(GSet::parse(g, lit)?)))
                .collect(),
            GeneratorSpec::Ap {
                start,
                step,
                lengths,
            } => {
                let (s, d) = (g.element(start)?, g.element(step)?);
                lengths
                    .iter()
                    .map(|&n| {
                        Ok(Instance {
                            descriptor: format!("ap(start={s},step={d},length={n})"),
                            set: gen_ap(g, &s, &d, n)?,
                        })
                    })
                    .collect()
            }
            GeneratorSpec::IndependentCosets {
                subgroup_generators,
                k,
                count,
                seed,
            } => {
                let gens = GSet::parse(g, subgroup_generators)?;
                (0..*count)
                    .map(|i| {
                        let s = seed.wrapping_add(i as u64);
                        Ok(Instance {
                            descriptor: format!("independent_cosets(k={k},seed={s})"),
                            set: gen_independent_cosets(g, &gens, *k, s)?.set,
                        })
                    })
                    .collect()
            }
            GeneratorSpec::InternallyIndependent { k } => Ok(vec![Instance {
                descriptor: format!("internally_independent(k={k})"),
                set: gen_internally_independent(g, *k)?.set,
            }]),
            GeneratorSpec::NearCoset {
                coset,
                eps,
                eta,
                count,
                seed,
            } => {
                let h = GSet::parse(g, coset)?;
                (0..*count)
                    .map(|i| {
                        let s = seed.wrapping_add(i as u64);
                        Ok(Instance {
                            descriptor: format!("near_coset(eps={eps},eta={eta},seed={s})"),
                            set: gen_near_coset(&h, *eps, *eta, s)?,
                        })
                    })
                    .collect()
            }
        }
    }
}

fn check_exhaustive(g: &GroupSpec) -> Result<()> {
    if g.size() > EXHAUSTIVE_LIMIT {
        return Err(WorkbenchError::Config(format!(
            "exhaustive domain over {g} needs |G| ≤ {EXHAUSTIVE_LIMIT}"
        )));
    }
    Ok(())
}

fn mask_set(g: &GroupSpec, mask: u64) -> GSet {
    GSet::from_indices(
        g,
        (0..g.size())
            .filter(|i| mask >> i & 1 == 1)
            .collect::<Vec<_>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_domains() {
        let g = GroupSpec::cyclic(10).unwrap();
        let all = GeneratorSpec::AllSubsets {
            include_empty: false,
        }
        .instances(&g)
        .unwrap();
        assert_eq!(all.len(), 1023);
        let sym = GeneratorSpec::SymmetricSubsets {
            include_empty: false,
        }
        .instances(&g)
        .unwrap();
        // Orbits in Z10: {0}, {5}, and four pairs.
        assert_eq!(sym.len(), 63);
        assert!(sym.iter().all(|i| i.set.is_symmetric()));
        let big = GroupSpec::cyclic(30).unwrap();
        assert!(GeneratorSpec::AllSubsets {
            include_empty: false
        }
        .instances(&big)
        .is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = r#"{
            "group": "Z10",
            "generator": {"kind": "random_subsets", "delta": 0.5, "count": 3, "seed": 7},
            "operation": {"op": "plunnecke", "n_max": 4},
            "output": {"format": "csv"}
        }"#;
        let cfg = ExperimentConfig::from_json(text, "inline").unwrap();
        let again: ExperimentConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
        let err = ExperimentConfig::from_json(
            r#"{"group": "Z10", "generator": {"kind": "nope"}}"#,
            "x.json",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("x.json") && err.contains("line"), "{err}");
    }
}
