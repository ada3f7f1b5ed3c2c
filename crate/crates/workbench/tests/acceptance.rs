//! The acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::time::Instant;

use aal_core::progressions::{bohr_to_progression, smallest_hypothesis_dimension};
use aal_core::setops::{energy, sumset};
use aal_core::spectral::{check_bohr_containment, fourier};
use aal_core::structure::{
    croot_sisask, lopez_ross_inner, pipeline, AlmostPeriodSet, CrootSisaskParams, PipelineParams,
    Variant,
};
use aal_core::{CharSet, DensityMap, GSet, GroupSpec, RealMap};
use aal_workbench::generators::{gen_ap, gen_random_subset};
use aal_workbench::{
    run_experiment, ExperimentConfig, Format, GeneratorSpec, OperationSpec, OutputSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

/// Nondecreasing factor lists, each factor ≥ 2, with the given product.
fn factorizations(n: u64, min: u64) -> Vec<Vec<u64>> {
    if n == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for f in min..=n {
        if n.is_multiple_of(f) {
            for mut rest in factorizations(n / f, f) {
                rest.insert(0, f);
                out.push(rest);
            }
        }
    }
    out
}

fn random_set(g: &GroupSpec, rng: &mut ChaCha8Rng, min_size: usize) -> GSet {
    loop {
        let delta = rng.gen_range(0.02..0.6);
        let a = gen_random_subset(&GSet::full(g), delta, rng.gen()).unwrap();
        if a.len() >= min_size {
            return a;
        }
    }
}

fn coset_law() -> Outcome {
    let mut groups = vec![vec![1]];
    for n in 2..=12 {
        groups.extend(factorizations(n, 2));
    }
    let mut instances = 0;
    for orders in &groups {
        let cfg = ExperimentConfig {
            group: GroupSpec::new(orders.clone()).unwrap().to_string(),
            generator: GeneratorSpec::AllSubsets {
                include_empty: false,
            },
            operation: OperationSpec::CosetLaw,
            output: OutputSpec::default(),
        };
        let r = run_experiment(&cfg).map_err(|e| e.to_string())?;
        instances += r.records.len();
        ensure(r.all_passed(), || {
            let rec = &r.records[r.failures[0]];
            format!("{}: {} disagrees", cfg.group, rec.descriptor)
        })?;
    }
    Ok(format!("{} groups, {instances} sets", groups.len()))
}

fn triple_loop_energy(a: &GSet) -> u128 {
    let g = a.group();
    let xs: Vec<usize> = a.indices().collect();
    let mut count = 0;
    for &x in &xs {
        for &y in &xs {
            for &z in &xs {
                if a.contains_idx(g.sub_idx(g.add_idx(x, y), z)) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn ap_energy() -> Outcome {
    for (name, step) in [("Z1000", 1u64), ("Z997", 13), ("Z2xZ500", 7)] {
        let g = group(name);
        let step = if g.rank() == 1 {
            g.element(&[step as i64]).unwrap()
        } else {
            g.element(&[1, step as i64]).unwrap()
        };
        for n in 1..=30 {
            let ap = gen_ap(&g, &g.zero(), &step, n).map_err(|e| e.to_string())?;
            let (lib, oracle) = (energy(&ap), triple_loop_energy(&ap));
            ensure(lib == oracle, || {
                format!("{name}, n={n}: {lib} vs {oracle}")
            })?;
        }
    }
    let g = group("Z1000");
    let ap = gen_ap(&g, &g.zero(), &g.element(&[1]).unwrap(), 100).unwrap();
    let ratio = energy(&ap) as f64 / 1e6;
    ensure((0.66..=0.675).contains(&ratio), || {
        format!("E/n³ = {ratio} at n=100")
    })?;
    Ok(format!(
        "n ≤ 30 exact on 3 embeddings; E/n³ = {ratio:.5} at n=100"
    ))
}

fn random_energy() -> Outcome {
    let g = group("Z2^9");
    let delta = 0.125;
    let mut ratios: Vec<f64> = (0..20u64)
        .map(|seed| {
            let a = gen_random_subset(&GSet::full(&g), delta, seed).unwrap();
            energy(&a) as f64 / (a.len() as f64).powi(3)
        })
        .collect();
    ratios.sort_by(f64::total_cmp);
    let median = (ratios[9] + ratios[10]) / 2.0;
    ensure((delta / 2.0..=2.0 * delta).contains(&median), || {
        format!("median {median}")
    })?;
    Ok(format!("median E/|A|³ = {median:.4}"))
}

fn sweep_all(group: &str, generator: GeneratorSpec, operation: OperationSpec) -> Outcome {
    let cfg = ExperimentConfig {
        group: group.into(),
        generator,
        operation,
        output: OutputSpec::default(),
    };
    let r = run_experiment(&cfg).map_err(|e| e.to_string())?;
    ensure(r.all_passed(), || {
        let rec = &r.records[r.failures[0]];
        format!("{group}: {} ({})", rec.descriptor, rec.status)
    })?;
    Ok(format!("{group}: {}", r.records.len()))
}

fn plunnecke() -> Outcome {
    let mut parts = Vec::new();
    for g in ["Z9", "Z10"] {
        parts.push(sweep_all(
            g,
            GeneratorSpec::AllSubsets {
                include_empty: false,
            },
            OperationSpec::Plunnecke { n_max: 4 },
        )?);
    }
    Ok(format!("zero violations; {}", parts.join(", ")))
}

fn chang() -> Outcome {
    let msg = sweep_all(
        "Z13",
        GeneratorSpec::SymmetricSubsets {
            include_empty: false,
        },
        OperationSpec::Chang { k: 2, n_max: 10 },
    )?;
    Ok(format!("zero violations; {msg} symmetric sets"))
}

const SPECTRAL_GROUPS: [&str; 8] = [
    "Z4096",
    "Z2^12",
    "Z64xZ64",
    "Z3xZ5xZ7xZ8",
    "Z1000",
    "Z2^3xZ9xZ10",
    "Z211",
    "Z12xZ12",
];

fn spectral_energy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let g = group(SPECTRAL_GROUPS[i % SPECTRAL_GROUPS.len()]);
        let a = random_set(&g, &mut rng, 1);
        let s = fourier(&RealMap::indicator(&a));
        let fourth: f64 = s.coeffs().iter().map(|c| c.norm_sqr().powi(2)).sum();
        let lhs = energy(&a) as f64 * g.size() as f64;
        let rel = (lhs - fourth).abs() / lhs;
        worst = worst.max(rel);
        ensure(rel <= 1e-6, || {
            format!("{g}, |A|={}: relative error {rel:e}", a.len())
        })?;
    }
    Ok(format!("200 instances, worst relative error {worst:.1e}"))
}

fn lopez_ross() -> Outcome {
    let exhaustive = sweep_all(
        "Z8",
        GeneratorSpec::AllSubsets {
            include_empty: false,
        },
        OperationSpec::LopezRoss,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let g = group(SPECTRAL_GROUPS[i % SPECTRAL_GROUPS.len()]);
        let a = random_set(&g, &mut rng, 1);
        let r = lopez_ross_inner(&a).map_err(|e| e.to_string())?;
        ensure(r.holds && r.inner == (a.len() * a.len()) as u128, || {
            format!("{g}, |A|={}: {} vs {}", a.len(), r.inner, r.expected)
        })?;
    }
    Ok(format!("exhaustive {exhaustive}, plus 500 random"))
}

/// Recomputes `‖τ_x(f ∗ 1_A) − f ∗ 1_A‖_p / (|A| ‖f‖_p)` from the definition.
fn recertify(f: &RealMap, out: &AlmostPeriodSet) -> Result<f64, String> {
    let g = f.group();
    let a: Vec<usize> = out.a_set.indices().collect();
    let h: Vec<f64> = (0..g.size())
        .map(|y| a.iter().map(|&t| f.values()[g.sub_idx(y, t)]).sum())
        .collect();
    let p = out.p;
    let f_norm = f
        .values()
        .iter()
        .map(|v| v.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p);
    let mut worst: f64 = 0.0;
    for x in out.x_set.indices() {
        let d = (0..g.size())
            .map(|y| (h[g.add_idx(y, x)] - h[y]).abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p);
        let ratio = d / (a.len() as f64 * f_norm);
        ensure(ratio <= out.eps_requested + 1e-9, || {
            format!(
                "x={} has ratio {ratio} > {}",
                g.element_at(x),
                out.eps_requested
            )
        })?;
        worst = worst.max(ratio);
    }
    Ok(worst)
}

fn croot_sisask_certification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut runs, mut periods, mut skipped) = (0, 0, 0);
    for (i, name) in ["Z97", "Z128", "Z2^7", "Z6xZ20", "Z211"].iter().enumerate() {
        let g = group(name);
        for j in 0..6 {
            let a = random_set(&g, &mut rng, 2);
            let f: RealMap = if j % 2 == 0 {
                DensityMap::indicator(&a)
            } else {
                DensityMap::indicator(&random_set(&g, &mut rng, 1))
            };
            let params = CrootSisaskParams {
                eps: [0.5, 0.8, 1.0][j % 3],
                p: [2.0, 3.0][j % 2],
                samples: 10,
                trials: 128,
                seed: (i * 10 + j) as u64,
                ..Default::default()
            };
            match croot_sisask(&f, &a, &params) {
                Ok(out) => {
                    recertify(&f, &out).map_err(|e| format!("{name}: {e}"))?;
                    runs += 1;
                    periods += out.x_set.len();
                }
                Err(aal_core::Error::NoGoodTuples { .. }) => skipped += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    for (name, h) in [
        ("Z12", "{0,4,8}"),
        ("Z64", "{0,4,8,12,16,20,24,28,32,36,40,44,48,52,56,60}"),
        ("Z2^5", "{(0,0,0,0,0),(1,0,0,0,0),(0,1,0,0,0),(1,1,0,0,0)}"),
    ] {
        let g = group(name);
        let h = GSet::parse(&g, h).unwrap();
        let f: RealMap = DensityMap::indicator(&h);
        let out = croot_sisask(&f, &h, &CrootSisaskParams::default()).map_err(|e| e.to_string())?;
        recertify(&f, &out)?;
        ensure(
            h.is_subset(&out.x_set).unwrap() && out.eps_certified == 0.0,
            || format!("{name}: X={} certified {}", out.x_set, out.eps_certified),
        )?;
    }
    Ok(format!(
        "{runs} runs, {periods} periods recertified ({skipped} without good tuples); subgroups exact"
    ))
}

/// Small-doubling sets on `Z/n`: a progression, a two-step progression, a
/// progression with a few stray points, or a plain random set.
fn structured_set(n: u64, kind: usize, rng: &mut ChaCha8Rng) -> GSet {
    let g = GroupSpec::cyclic(n).unwrap();
    let step = rng.gen_range(1..n) as usize;
    let len = rng.gen_range(2..=(n as usize / 3).max(2));
    let ap: Vec<usize> = (0..len).map(|i| i * step % n as usize).collect();
    match kind {
        0 => GSet::from_indices(&g, ap),
        1 => {
            let other = rng.gen_range(1..n) as usize;
            let width = rng.gen_range(1..=3);
            GSet::from_indices(
                &g,
                (0..len.min(12))
                    .flat_map(|i| (0..width).map(move |j| (i * step + j * other) % n as usize))
                    .collect::<Vec<_>>(),
            )
        }
        2 => {
            let extra: Vec<usize> = (0..2).map(|_| rng.gen_range(0..n) as usize).collect();
            GSet::from_indices(&g, ap.into_iter().chain(extra).collect::<Vec<_>>())
        }
        _ => random_set(&g, rng, 1),
    }
}

fn bohr_containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut proper = 0;
    for i in 0..100 {
        let n = rng.gen_range(5..=211u64);
        let eps = [0.3, 0.5][i % 2];
        let a = structured_set(n, i % 4, &mut rng);
        let r = check_bohr_containment(&a, 2, eps).map_err(|e| e.to_string())?;
        ensure(r.passed, || {
            format!("Z{n}, eps={eps}: {a} violates at {:?}", r.violation)
        })?;
        if r.bohr_size < n as usize {
            proper += 1;
        }
    }
    ensure(proper >= 10, || {
        format!("only {proper} instances with a proper Bohr set")
    })?;
    Ok(format!(
        "100 instances, zero failures; {proper} with a proper Bohr set"
    ))
}

/// `{x : |γ(x) − 1| ≤ δ for γ ∈ Γ}` from complex character values.
fn bohr_oracle(gamma: &CharSet, delta: f64) -> GSet {
    let g = gamma.group();
    let e = g.exponent() as f64;
    let chars: Vec<usize> = gamma.indices().collect();
    GSet::from_indices(
        g,
        (0..g.size()).filter(|&x| {
            chars.iter().all(|&t| {
                let ang = 2.0 * std::f64::consts::PI * g.pairing_idx(t, x) as f64 / e;
                let d = ((ang.cos() - 1.0).powi(2) + ang.sin().powi(2)).sqrt();
                d <= delta + 1e-12
            })
        }),
    )
}

fn bohr_progressions() -> Outcome {
    let cases: [(&str, &[&str]); 6] = [
        ("Z2000", &["{1}", "{3}", "{1,7}"]),
        ("Z4096", &["{1}", "{5}", "{1,3}"]),
        ("Z3000", &["{1}", "{2}"]),
        ("Z2xZ2000", &["{(0,1)}", "{(1,1)}", "{(1,2)}"]),
        ("Z4xZ1024", &["{(0,1)}", "{(1,1)}", "{(2,3)}"]),
        ("Z50xZ50", &["{(1,0)}", "{(1,1)}", "{(1,0),(0,1)}"]),
    ];
    let (mut tested, mut cyclic, mut two_factor, mut above_claim) = (0, 0, 0, 0);
    for (name, gammas) in cases {
        let g = group(name);
        for gm in gammas {
            let gamma = CharSet::parse(&g, gm).unwrap();
            for delta in [0.002, 0.005, 0.01, 0.019, 0.03] {
                let Some(hyp) = smallest_hypothesis_dimension(&gamma, delta, 8).unwrap() else {
                    continue;
                };
                let out = bohr_to_progression(&gamma, delta, hyp.d_claim)
                    .map_err(|e| format!("{name} {gm} δ={delta}: {e}"))?;
                let produced = out.progression.materialize().map_err(|e| e.to_string())?;
                let expected = bohr_oracle(&gamma, delta);
                ensure(produced == expected, || {
                    format!("{name} {gm} δ={delta}: progression differs from the Bohr set")
                })?;
                tested += 1;
                if out.certificate.dimension > hyp.d_claim {
                    above_claim += 1;
                }
                if g.rank() == 1 {
                    cyclic += 1;
                } else {
                    two_factor += 1;
                }
            }
        }
    }
    ensure(tested >= 20 && cyclic > 0 && two_factor > 0, || {
        format!("only {tested} hypothesis-passing instances")
    })?;
    Ok(format!(
        "{tested} instances equal elementwise ({cyclic} cyclic, {two_factor} two-factor, \
         {above_claim} with dimension above the claim)"
    ))
}

fn pipelines() -> Outcome {
    let params = PipelineParams::default();
    for (name, h) in [
        ("Z24", "{0,4,8,12,16,20}"),
        ("Z2^4", "{(0,0,0,0),(1,0,0,0),(0,1,0,0),(1,1,0,0)}"),
    ] {
        let g = group(name);
        let a = GSet::parse(&g, h).unwrap();
        for variant in [Variant::Basic, Variant::Schoen, Variant::Lp] {
            let r =
                pipeline(&a, variant, &params).map_err(|e| format!("{name} {variant:?}: {e}"))?;
            ensure(
                r.intersection_size == a.len()
                    && r.y_set.len() == a.len()
                    && r.growth.order == 0.0
                    && r.passed,
                || {
                    format!(
                        "{name} {variant:?}: |A∩Y|={} |Y|={} order {}",
                        r.intersection_size,
                        r.y_set.len(),
                        r.growth.order
                    )
                },
            )?;
            check_containment(&a, &r)?;
        }
    }
    let g = group("Z500");
    let ap = gen_ap(&g, &g.zero(), &g.element(&[1]).unwrap(), 50).unwrap();
    let r = pipeline(&ap, Variant::Lp, &params).map_err(|e| e.to_string())?;
    let density = *r.density_in_y.numer() as f64 / *r.density_in_y.denom() as f64;
    ensure(density >= 0.1 && r.growth.order <= 2.0 && r.passed, || {
        format!(
            "AP(50): |A∩Y|/|Y| = {density}, growth order {}",
            r.growth.order
        )
    })?;
    check_containment(&ap, &r)?;
    Ok(format!(
        "subgroups exact for all variants; AP(50) lp: |A∩Y|/|Y| = {}, order {:.3}",
        r.density_in_y, r.growth.order
    ))
}

/// Recomputes `kX ⊆ 2A − 2A` whenever the report claims it.
fn check_containment(a: &GSet, r: &aal_core::structure::PipelineReport) -> Result<(), String> {
    let Some(c) = &r.containment else {
        return Ok(());
    };
    let mut kx = r.x_set.clone();
    for _ in 1..c.k {
        kx = sumset(&kx, &r.x_set).unwrap();
    }
    let two_a = sumset(a, a).unwrap();
    let target = sumset(&two_a, &aal_core::setops::negate(&two_a)).unwrap();
    let holds = kx.is_subset(&target).unwrap();
    ensure(holds == c.holds && holds, || {
        format!(
            "containment mismatch: claimed {}, recomputed {holds}",
            c.holds
        )
    })
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("aal-acceptance-{}", std::process::id()));
    let configs = [
        ExperimentConfig {
            group: "Z101".into(),
            generator: GeneratorSpec::RandomSubsets {
                delta: 0.2,
                count: 12,
                seed: 5,
                coset: None,
            },
            operation: OperationSpec::CrootSisask {
                params: CrootSisaskParams {
                    trials: 64,
                    seed: 11,
                    ..Default::default()
                },
            },
            output: OutputSpec {
                dir: None,
                format: Format::Csv,
            },
        },
        ExperimentConfig {
            group: "Z2^6".into(),
            generator: GeneratorSpec::RandomSubsets {
                delta: 0.3,
                count: 12,
                seed: 6,
                coset: None,
            },
            operation: OperationSpec::Bsg {
                delta: 0.05,
                trials: 16,
                seed: 3,
            },
            output: OutputSpec {
                dir: None,
                format: Format::Csv,
            },
        },
    ];
    for (i, base) in configs.iter().enumerate() {
        let mut outputs = Vec::new();
        for threads in [1, 4] {
            let run_dir = dir.join(format!("{i}-{threads}"));
            let mut cfg = base.clone();
            cfg.output.dir = Some(run_dir.display().to_string());
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| run_experiment(&cfg))
                .map_err(|e| e.to_string())?;
            outputs.push(std::fs::read(run_dir.join("records.csv")).unwrap());
            let replay = ExperimentConfig::load(&run_dir.join("experiment.json"))
                .map_err(|e| e.to_string())?;
            run_experiment(&replay).map_err(|e| e.to_string())?;
            outputs.push(std::fs::read(run_dir.join("records.csv")).unwrap());
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
            format!("config {i}: CSV differs between runs")
        })?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok("2 seeded experiments, byte-identical across replays and thread counts".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("coset law", coset_law),
        ("arithmetic progression energy", ap_energy),
        ("random-subset energy", random_energy),
        ("plunnecke", plunnecke),
        ("chang growth", chang),
        ("spectral energy", spectral_energy),
        ("lopez-ross identity", lopez_ross),
        ("almost-period certification", croot_sisask_certification),
        ("bohr containment", bohr_containment),
        ("bohr set as progression", bohr_progressions),
        ("pipeline sanity", pipelines),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} {name}: PASS ({msg}; {secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({msg}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
