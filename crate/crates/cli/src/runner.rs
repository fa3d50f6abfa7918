//! Experiment execution: load or generate one graph, compute the greedy
//! baseline once, then run `trials` seeded runs per epsilon grid point.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use densedp_core::{
    charikar_peel, dp_densest_linear, dp_densest_quasilinear, exact_densest_bruteforce,
    randomized_response_densest, DensityReport, Error, Graph, PrivacyBudget, Result,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Algorithms the harness can run. Private variants consume `epsilon`;
/// the references ignore it but still produce one record per grid point so
/// output rows stay aligned across algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Charikar,
    DpQuasilinear,
    DpLinear,
    RrBaseline,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Exact,
        Algorithm::Charikar,
        Algorithm::DpQuasilinear,
        Algorithm::DpLinear,
        Algorithm::RrBaseline,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Charikar => "charikar",
            Algorithm::DpQuasilinear => "dp-quasilinear",
            Algorithm::DpLinear => "dp-linear",
            Algorithm::RrBaseline => "rr-baseline",
        }
    }

    pub fn parse(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| {
                let ids: Vec<&str> = Algorithm::ALL.iter().map(|a| a.id()).collect();
                Error::Domain(format!(
                    "unknown algorithm {s:?}; expected one of {}",
                    ids.join(", ")
                ))
            })
    }
}

/// Where the experiment's graph comes from.
#[derive(Debug, Clone)]
pub enum InputSpec {
    /// Edge-list file: whitespace-separated id pairs, `#` comments.
    File(PathBuf),
    /// `planted:n,k` — k-clique plus isolated vertices.
    Planted { n: u32, k: u32 },
    /// `twoclique:k1,k2` — two disjoint cliques.
    TwoCliques { k1: u32, k2: u32 },
}

impl InputSpec {
    /// Parses a `--gen` spec: `planted:n,k` or `twoclique:k1,k2`.
    pub fn parse_gen(spec: &str) -> Result<InputSpec> {
        let bad = || {
            Error::Domain(format!(
                "bad generator spec {spec:?}; expected planted:n,k or twoclique:k1,k2"
            ))
        };
        let (kind, params) = spec.split_once(':').ok_or_else(bad)?;
        let (a, b) = params.split_once(',').ok_or_else(bad)?;
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        match kind {
            "planted" => Ok(InputSpec::Planted { n: a, k: b }),
            "twoclique" => Ok(InputSpec::TwoCliques { k1: a, k2: b }),
            _ => Err(bad()),
        }
    }

    /// Name recorded in the CSV `dataset` column.
    pub fn dataset_name(&self) -> String {
        match self {
            InputSpec::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            InputSpec::Planted { n, k } => format!("planted:{n},{k}"),
            InputSpec::TwoCliques { k1, k2 } => format!("twoclique:{k1},{k2}"),
        }
    }

    /// Loads or generates the graph. Generated instances derive from
    /// `seed`, so one config describes one concrete graph.
    pub fn load(&self, seed: u64) -> Result<Graph> {
        match *self {
            InputSpec::File(ref path) => {
                let file = File::open(path)?;
                Graph::parse_edge_list(BufReader::new(file))
            }
            InputSpec::Planted { n, k } => crate::gen::gen_planted_clique(n, k, seed),
            InputSpec::TwoCliques { k1, k2 } => crate::gen::gen_two_cliques(k1, k2),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub input: InputSpec,
    pub algorithm: Algorithm,
    pub epsilons: Vec<f64>,
    pub sigma: f64,
    /// Flush-threshold constant (the `C` knob).
    pub threshold_constant: f64,
    /// Bucket width for the bucketed variant; 0 derives it from the
    /// error analysis instead.
    pub bucket_width: u64,
    pub trials: u32,
    pub base_seed: u64,
    /// Parallel trial cap; `None` defers to DENSEDP_THREADS, then rayon.
    pub threads: Option<usize>,
}

/// One trial's outcome; field order mirrors the CSV columns.
#[derive(Debug, Clone)]
pub struct ExperimentRecord {
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub algorithm: &'static str,
    pub epsilon: f64,
    pub seed: u64,
    pub d_star: f64,
    pub true_density: f64,
    pub set_size: usize,
    pub baseline_density: f64,
    pub ratio: f64,
    pub wall_time_s: f64,
}

/// Runs the full grid: for each epsilon, `trials` runs seeded
/// `base_seed + trial`, in parallel, with records ordered by
/// (epsilon index, trial) regardless of completion order. The greedy
/// baseline density is computed once and shared by every record.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    validate(config)?;
    let graph = config.input.load(config.base_seed)?;
    if graph.n() == 0 {
        return Err(Error::Domain("input graph has no vertices".into()));
    }
    let dataset = config.input.dataset_name();
    let (_, baseline_density) = charikar_peel(&graph)?;

    let jobs: Vec<(f64, u64)> = config
        .epsilons
        .iter()
        .flat_map(|&eps| {
            (0..config.trials).map(move |t| (eps, config.base_seed.wrapping_add(t as u64)))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap(config)?)
        .build()
        .map_err(|e| Error::State(format!("thread pool construction failed: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(eps, seed)| {
                run_one(config, &graph, &dataset, baseline_density, eps, seed)
            })
            .collect()
    })
}

/// Thread cap: explicit config wins, then DENSEDP_THREADS, then rayon's
/// default (0 lets the pool size itself).
fn thread_cap(config: &ExperimentConfig) -> Result<usize> {
    if let Some(t) = config.threads {
        return Ok(t);
    }
    match std::env::var("DENSEDP_THREADS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(t),
            _ => Err(Error::Domain(format!(
                "DENSEDP_THREADS must be a positive integer, got {raw:?}"
            ))),
        },
        Err(_) => Ok(0),
    }
}

fn validate(config: &ExperimentConfig) -> Result<()> {
    if config.trials < 1 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    if config.epsilons.is_empty() {
        return Err(Error::Domain("epsilon grid must not be empty".into()));
    }
    for &eps in &config.epsilons {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::Domain(format!(
                "epsilon grid values must be finite and positive, got {eps}"
            )));
        }
    }
    Ok(())
}

fn budget(config: &ExperimentConfig, eps: f64) -> Result<PrivacyBudget> {
    let b = PrivacyBudget::new(eps, config.sigma)?
        .with_threshold_constant(config.threshold_constant)?;
    if config.bucket_width > 0 {
        b.with_bucket_width(config.bucket_width)
    } else {
        Ok(b)
    }
}

fn run_one(
    config: &ExperimentConfig,
    graph: &Graph,
    dataset: &str,
    baseline_density: f64,
    eps: f64,
    seed: u64,
) -> Result<ExperimentRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let report: DensityReport = match config.algorithm {
        Algorithm::Exact => {
            let (subset, d) = exact_densest_bruteforce(graph)?;
            DensityReport {
                subset,
                true_density: d,
                noisy_density: d,
            }
        }
        Algorithm::Charikar => {
            let (subset, d) = charikar_peel(graph)?;
            DensityReport {
                subset,
                true_density: d,
                noisy_density: d,
            }
        }
        Algorithm::DpQuasilinear => dp_densest_quasilinear(graph, &budget(config, eps)?, &mut rng)?,
        Algorithm::DpLinear => dp_densest_linear(graph, &budget(config, eps)?, &mut rng)?,
        Algorithm::RrBaseline => randomized_response_densest(graph, eps, &mut rng)?,
    };
    let wall_time_s = start.elapsed().as_secs_f64().max(1e-9);
    Ok(ExperimentRecord {
        dataset: dataset.to_string(),
        n: graph.n(),
        m: graph.m(),
        algorithm: config.algorithm.id(),
        epsilon: eps,
        seed,
        d_star: report.noisy_density,
        true_density: report.true_density,
        set_size: report.subset.len(),
        baseline_density,
        ratio: report.true_density / baseline_density,
        wall_time_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted_config(algorithm: Algorithm) -> ExperimentConfig {
        ExperimentConfig {
            input: InputSpec::Planted { n: 60, k: 10 },
            algorithm,
            epsilons: vec![1.0],
            sigma: 2f64.powi(-10),
            threshold_constant: 0.5,
            bucket_width: 1,
            trials: 2,
            base_seed: 7,
            threads: Some(1),
        }
    }

    #[test]
    fn gen_spec_parsing() {
        assert!(matches!(
            InputSpec::parse_gen("planted:100,10"),
            Ok(InputSpec::Planted { n: 100, k: 10 })
        ));
        assert!(matches!(
            InputSpec::parse_gen("twoclique:4,3"),
            Ok(InputSpec::TwoCliques { k1: 4, k2: 3 })
        ));
        for bad in ["planted", "planted:5", "planted:a,b", "ring:4,2", "planted:4,"] {
            assert!(InputSpec::parse_gen(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn algorithm_ids_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(Algorithm::parse(a.id()).unwrap(), a);
        }
        let msg = Algorithm::parse("peel").unwrap_err().to_string();
        assert!(msg.contains("dp-quasilinear"), "{msg}");
    }

    #[test]
    fn charikar_records_have_unit_ratio() {
        let records = run_experiment(&planted_config(Algorithm::Charikar)).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            assert_eq!(r.ratio, 1.0);
            assert_eq!(r.n, 60);
            assert_eq!(r.m, 45);
            assert_eq!(r.true_density, 4.5);
            assert_eq!(r.d_star, 4.5);
            assert!(r.wall_time_s > 0.0);
        }
        assert_eq!(records[0].seed, 7);
        assert_eq!(records[1].seed, 8);
    }

    #[test]
    fn grid_ordering_is_epsilon_major() {
        let mut config = planted_config(Algorithm::DpQuasilinear);
        config.epsilons = vec![0.5, 4.0];
        config.trials = 3;
        let records = run_experiment(&config).unwrap();
        let eps: Vec<f64> = records.iter().map(|r| r.epsilon).collect();
        assert_eq!(eps, vec![0.5, 0.5, 0.5, 4.0, 4.0, 4.0]);
        let seeds: Vec<u64> = records.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![7, 8, 9, 7, 8, 9]);
    }

    #[test]
    fn identical_configs_reproduce_results() {
        let config = planted_config(Algorithm::DpLinear);
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.d_star, y.d_star);
            assert_eq!(x.true_density, y.true_density);
            assert_eq!(x.set_size, y.set_size);
        }
    }

    #[test]
    fn validation_errors() {
        let mut config = planted_config(Algorithm::Charikar);
        config.trials = 0;
        assert!(run_experiment(&config).is_err());
        let mut config = planted_config(Algorithm::Charikar);
        config.epsilons = vec![];
        assert!(run_experiment(&config).is_err());
        let mut config = planted_config(Algorithm::Charikar);
        config.epsilons = vec![-1.0];
        assert!(run_experiment(&config).is_err());
        let mut config = planted_config(Algorithm::Exact);
        config.input = InputSpec::File("/no/such/file".into());
        assert!(matches!(run_experiment(&config), Err(Error::Io(_))));
    }

    #[test]
    fn exact_refuses_large_inputs_through_the_runner() {
        let mut config = planted_config(Algorithm::Exact);
        config.input = InputSpec::Planted { n: 60, k: 23 };
        let err = run_experiment(&config).unwrap_err().to_string();
        assert!(err.contains("22"), "{err}");
    }
}
