use std::fmt::Write as _;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{key_values, PipelineConfig};
use crate::graph::weak_components;
use crate::stitch::long_path_from;

use super::generators::split_call;
use super::{generate, oracle_longest_path_from, GeneratorSpec, LabError, DEFAULT_ORACLE_CAP};

pub const CSV_HEADER: &str = "generator,params,seed,n,m,d_measured,phi_d,achieved,certified,oracle,runtime_ms";

/// Experiment description, read from `key = value` lines.
///
/// `generator` may repeat and accepts `{a|b|c}` alternatives per argument,
/// expanded as a grid; `random_cycle_union` with three arguments takes its
/// graph seed from the cell. Every other key is passed to the pipeline
/// configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub generators: Vec<GeneratorSpec>,
    pub seeds: Vec<u64>,
    pub master_seed: u64,
    pub oracle: bool,
    pub oracle_cap: usize,
    /// Record wall-clock time; off by default so that output is reproducible.
    pub timing: bool,
    pub pipeline: PipelineConfig,
    /// Indices into `generators` whose graph seed comes from the cell.
    seeded_by_cell: Vec<bool>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            generators: Vec::new(),
            seeds: vec![0],
            master_seed: 0,
            oracle: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
            timing: false,
            pipeline: PipelineConfig::default(),
            seeded_by_cell: Vec::new(),
        }
    }
}

fn expand(spec: &str) -> Result<Vec<String>, LabError> {
    let (name, args) = split_call(spec)?;
    let mut rows: Vec<Vec<String>> = vec![Vec::new()];
    for a in args {
        let alts: Vec<String> = match a.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
            Some(inner) => inner.split('|').map(|s| s.trim().to_string()).collect(),
            None => vec![a.to_string()],
        };
        rows = rows
            .into_iter()
            .flat_map(|r| {
                alts.iter().map(move |x| {
                    let mut r = r.clone();
                    r.push(x.clone());
                    r
                })
            })
            .collect();
    }
    Ok(rows.into_iter().map(|r| format!("{name}({})", r.join(","))).collect())
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut cfg = ExperimentConfig::default();
        for item in key_values(text) {
            let (line, key, value) = item.map_err(|e| LabError::Config(e.to_string()))?;
            let bad = |m: String| LabError::Config(format!("line {line}: {m}"));
            match key {
                "generator" => {
                    for s in expand(value)? {
                        let spec: GeneratorSpec = s.parse()?;
                        let by_cell = matches!(spec, GeneratorSpec::RandomCycleUnion { .. })
                            && split_call(&s)?.1.len() == 3;
                        cfg.generators.push(spec);
                        cfg.seeded_by_cell.push(by_cell);
                    }
                }
                "seeds" => {
                    cfg.seeds = if let Some((a, b)) = value.split_once("..") {
                        let a: u64 = a.trim().parse().map_err(|_| bad(format!("bad range {value:?}")))?;
                        let b: u64 = b.trim().parse().map_err(|_| bad(format!("bad range {value:?}")))?;
                        (a..b).collect()
                    } else if value.contains(',') {
                        value
                            .split(',')
                            .map(|s| s.trim().parse().map_err(|_| bad(format!("bad seed {s:?}"))))
                            .collect::<Result<_, _>>()?
                    } else {
                        let k: u64 = value.parse().map_err(|_| bad(format!("bad seed count {value:?}")))?;
                        (0..k).collect()
                    }
                }
                "master_seed" => cfg.master_seed = value.parse().map_err(|_| bad(format!("bad seed {value:?}")))?,
                "oracle" => cfg.oracle = value.parse().map_err(|_| bad(format!("expected bool, got {value:?}")))?,
                "oracle_cap" => cfg.oracle_cap = value.parse().map_err(|_| bad(format!("bad cap {value:?}")))?,
                "timing" => cfg.timing = value.parse().map_err(|_| bad(format!("expected bool, got {value:?}")))?,
                _ => {
                    if !cfg.pipeline.set(key, value).map_err(bad)? {
                        return Err(bad(format!("unknown key {key:?}")));
                    }
                }
            }
        }
        if cfg.generators.is_empty() {
            return Err(LabError::Config("no generator given".into()));
        }
        cfg.pipeline.validate().map_err(|e| LabError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub generator: GeneratorSpec,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub d_measured: f64,
    pub phi_d: f64,
    pub achieved_length: usize,
    pub certified: bool,
    pub oracle_length: Option<usize>,
    pub runtime_ms: u128,
}

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{},{},{},{}",
            self.generator.kind(),
            self.generator.params(),
            self.seed,
            self.n,
            self.m,
            self.d_measured,
            self.phi_d,
            self.achieved_length,
            self.certified,
            self.oracle_length.map(|x| x.to_string()).unwrap_or_default(),
            self.runtime_ms
        )
    }
}

/// Runs every (generator, seed) cell in order.
///
/// Cell `i` draws from a ChaCha stream keyed by the master seed with
/// stream id `i`. Disconnected outputs are restricted to their largest weak
/// component (ties to the lowest vertex), and the path starts at that
/// component's lowest vertex.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, LabError> {
    let mut out = Vec::new();
    let mut cell = 0u64;
    for (gi, spec) in cfg.generators.iter().enumerate() {
        for &seed in &cfg.seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.master_seed);
            rng.set_stream(cell);
            cell += 1;
            let mut spec = spec.clone();
            if let GeneratorSpec::RandomCycleUnion { seed: s, .. } = &mut spec {
                if cfg.seeded_by_cell.get(gi).copied().unwrap_or(false) {
                    *s = rng.next_u64();
                }
            }
            out.push(run_cell(&spec, seed, cfg, &mut rng)?);
        }
    }
    Ok(out)
}

fn run_cell(spec: &GeneratorSpec, seed: u64, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<ExperimentRecord, LabError> {
    let g = generate(spec)?;
    let comps = weak_components(&g);
    let comp = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .ok_or_else(|| LabError::BadParams(format!("{spec} has no edges")))?;
    let host = if comp.len() == g.order() { g } else { g.induced(comp) };
    let v = comp[0];
    let start = Instant::now();
    let outcome = long_path_from(&host, v, &cfg.pipeline, rng).map_err(|e| LabError::BadParams(e.to_string()))?;
    let elapsed = start.elapsed().as_millis();
    let oracle_length = if cfg.oracle && host.order() <= cfg.oracle_cap {
        Some(oracle_longest_path_from(&host, v, cfg.oracle_cap)?)
    } else {
        None
    };
    Ok(ExperimentRecord {
        generator: spec.clone(),
        seed,
        n: host.order(),
        m: host.edge_count(),
        d_measured: outcome.d,
        phi_d: outcome.phi,
        achieved_length: outcome.path.len(),
        certified: outcome.certified,
        oracle_length,
        runtime_ms: if cfg.timing { elapsed } else { 0 },
    })
}

pub fn to_csv(records: &[ExperimentRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(s, "{}", r.csv_row());
    }
    s
}
