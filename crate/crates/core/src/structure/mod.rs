//! Structure finders: almost periods, growth checks, the downward symmetry-set
//! iteration, energy-to-doubling extraction and end-to-end pipelines.

mod bsg;
mod croot_sisask;
mod growth_checks;
mod katz_koester;
mod pipeline;

pub use bsg::{bsg_extract, BsgCertificate, BsgResult};
pub use croot_sisask::{croot_sisask, AlmostPeriodSet, CrootSisaskParams};
pub use growth_checks::{
    chang_growth_test, lopez_ross_inner, plunnecke_check, ChangReport, GrowthRow, LopezRossReport,
    PlunneckeReport,
};
pub use katz_koester::{katz_koester_iterate, Branch, IterationStep, IterationTrace};
pub use pipeline::{
    pipeline, ContainmentCheck, InnerProductCheck, PipelineParams, PipelineReport, Variant,
};
