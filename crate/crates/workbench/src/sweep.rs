//! Parallel, order-preserving evaluation of an operation over a domain.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use aal_core::GroupSpec;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::config::{ExperimentConfig, Format, Instance};
use crate::error::Result;
use crate::ops::{evaluate, EvalContext, OperationSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub instance_id: usize,
    pub descriptor: String,
    pub values: Vec<String>,
    pub status: String,
    pub pass: bool,
    pub detail: Value,
}

/// Range of a numeric column over the records where it parsed as a number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub group: String,
    pub operation: OperationSpec,
    pub columns: Vec<String>,
    pub records: Vec<SweepRecord>,
    pub aggregates: BTreeMap<String, ColumnRange>,
    /// Ids of the records with `pass = false`.
    pub failures: Vec<usize>,
}

impl SweepResult {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["instance_id", "descriptor"];
        header.extend(self.columns.iter().map(String::as_str));
        header.extend(["status", "pass"]);
        out.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![r.instance_id.to_string(), r.descriptor.clone()];
            row.extend(r.values.iter().cloned());
            row.push(r.status.clone());
            row.push(r.pass.to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

pub fn sweep(g: &GroupSpec, instances: &[Instance], op: &OperationSpec) -> SweepResult {
    if instances.is_empty() {
        log::warn!("empty domain: no instances to evaluate");
    }
    let ctx = EvalContext::default();
    let records: Vec<SweepRecord> = instances
        .par_iter()
        .enumerate()
        .map(|(id, inst)| {
            let e = evaluate(op, &inst.set, &ctx);
            SweepRecord {
                instance_id: id,
                descriptor: inst.descriptor.clone(),
                values: e.values,
                status: e.status,
                pass: e.pass,
                detail: e.detail,
            }
        })
        .collect();
    let columns: Vec<String> = op.columns().iter().map(|c| c.to_string()).collect();
    let mut aggregates = BTreeMap::new();
    for (i, name) in columns.iter().enumerate() {
        let nums: Vec<f64> = records
            .iter()
            .filter_map(|r| r.values[i].parse::<f64>().ok())
            .filter(|x| x.is_finite())
            .collect();
        if nums.is_empty() {
            continue;
        }
        aggregates.insert(
            name.clone(),
            ColumnRange {
                min: nums.iter().copied().fold(f64::INFINITY, f64::min),
                max: nums.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                count: nums.len(),
            },
        );
    }
    let failures = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.instance_id)
        .collect();
    SweepResult {
        group: g.to_string(),
        operation: op.clone(),
        columns,
        records,
        aggregates,
        failures,
    }
}

/// Runs a configured experiment. With an output directory, writes
/// `records.csv`, `result.json` and `experiment.json`; the last one replays
/// the run.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SweepResult> {
    let g = config.group_spec()?;
    let instances = config.generator.instances(&g)?;
    let result = sweep(&g, &instances, &config.operation);
    if let Some(dir) = &config.output.dir {
        write_outputs(config, &result, Path::new(dir))?;
    }
    Ok(result)
}

pub fn write_outputs(config: &ExperimentConfig, result: &SweepResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    result.write_csv(fs::File::create(dir.join("records.csv"))?)?;
    if config.output.format == Format::Json {
        fs::write(
            dir.join("result.json"),
            serde_json::to_string_pretty(result)?,
        )?;
    }
    fs::write(
        dir.join("experiment.json"),
        serde_json::to_string_pretty(config)?,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GeneratorSpec;

    fn config(dir: Option<String>) -> ExperimentConfig {
        ExperimentConfig {
            group: "Z6".into(),
            generator: GeneratorSpec::AllSubsets {
                include_empty: false,
            },
            operation: OperationSpec::CosetLaw,
            output: crate::config::OutputSpec {
                dir,
                format: Format::Json,
            },
        }
    }

    #[test]
    fn sweep_keeps_order_and_aggregates() {
        let r = run_experiment(&config(None)).unwrap();
        assert_eq!(r.records.len(), 63);
        assert!(r
            .records
            .iter()
            .enumerate()
            .all(|(i, rec)| rec.instance_id == i));
        assert!(r.all_passed());
        assert_eq!(r.aggregates["size"].min, 1.0);
        assert_eq!(r.aggregates["size"].max, 6.0);
        let csv = r.to_csv_string().unwrap();
        assert!(csv.starts_with("instance_id,descriptor,size,energy,cubic,is_coset,status,pass\n"));
        assert_eq!(csv.lines().count(), 64);
    }

    #[test]
    fn outputs_replay() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(Some(dir.path().display().to_string()));
        run_experiment(&cfg).unwrap();
        let replay = ExperimentConfig::load(&dir.path().join("experiment.json")).unwrap();
        assert_eq!(replay, cfg);
        let first = fs::read(dir.path().join("records.csv")).unwrap();
        run_experiment(&replay).unwrap();
        assert_eq!(fs::read(dir.path().join("records.csv")).unwrap(), first);
    }

    #[test]
    fn empty_domain() {
        let g: GroupSpec = "Z5".parse().unwrap();
        let r = sweep(&g, &[], &OperationSpec::Energy);
        assert!(r.records.is_empty() && r.all_passed());
    }
}
