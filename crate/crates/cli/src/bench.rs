use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};

use pathdecomp::general::solve;
use pathdecomp::generic::{is_pathwidth_at_most, min_length};
use pathdecomp::graph::parse_graph;
use pathdecomp::Graph;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{Backend, Outcome, RunReport};

pub struct BenchConfig {
    pub k: usize,
    pub max_n: usize,
    pub jobs: usize,
    pub timing: bool,
}

pub struct Generator {
    pub count: usize,
    pub min_n: usize,
    pub nodes: usize,
    pub p: f64,
    pub seed: u64,
    /// Redraw until the pathwidth is at most `k`.
    pub feasible: bool,
}

/// Erdős–Rényi instances; instance `i` uses its own stream derived from the
/// seed, so the corpus does not depend on `jobs`.
pub fn generate(gen: &Generator, k: usize) -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for i in 0..gen.count {
        let mut rng = ChaCha8Rng::seed_from_u64(gen.seed);
        rng.set_stream(i as u64);
        let mut draw = 0;
        loop {
            let n = rng.gen_range(gen.min_n..=gen.nodes);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(gen.p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges)?;
            draw += 1;
            if !gen.feasible || is_pathwidth_at_most(&g, k)? {
                out.push((format!("seed{}-{i}", gen.seed), Ok(g)));
                break;
            }
            anyhow::ensure!(
                draw < 10_000,
                "no graph of pathwidth <= {k} after 10000 draws"
            );
        }
    }
    Ok(out)
}

/// A graph, or why its file could not be read.
pub type Instance = std::result::Result<Graph, String>;

/// Every file in `dir`, sorted by name. Unreadable files become failed
/// instances.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, Instance)>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let g = std::fs::read_to_string(&p)
                .map_err(|e| e.to_string())
                .and_then(|text| parse_graph(&text).map_err(|e| e.to_string()));
            Ok((name, g))
        })
        .collect()
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<u128>) {
    let start = Instant::now();
    let out = f();
    (out, timing.then(|| start.elapsed().as_millis()))
}

fn outcome(r: Result<Option<usize>, pathdecomp::SolveError>) -> Outcome {
    match r {
        Ok(Some(l)) => Outcome::Length(l),
        Ok(None) => Outcome::Infeasible,
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

fn run_one(name: &str, g: &Instance, cfg: &BenchConfig) -> [RunReport; 2] {
    let k = cfg.k;
    let g = match g {
        Ok(g) => g,
        Err(e) => {
            let failed = |backend| RunReport {
                instance: name.to_string(),
                k,
                lambda1: k + 1,
                lambda2: k + 1,
                backend,
                outcome: Outcome::Failed(e.clone()),
                millis: None,
                output: None,
            };
            return [failed(Backend::Poly), failed(Backend::Oracle)];
        }
    };
    let (poly, poly_ms) = timed(cfg.timing, || {
        outcome(solve(g, k).map(|p| p.map(|p| p.len())))
    });
    let (oracle, oracle_ms) = if g.n() > cfg.max_n {
        (Outcome::Skipped(format!("n>{}", cfg.max_n)), None)
    } else {
        timed(cfg.timing, || outcome(min_length(g, k, None, None)))
    };
    let report = |backend, outcome, millis| RunReport {
        instance: name.to_string(),
        k,
        lambda1: k + 1,
        lambda2: k + 1,
        backend,
        outcome,
        millis,
        output: None,
    };
    [
        report(Backend::Poly, poly, poly_ms),
        report(Backend::Oracle, oracle, oracle_ms),
    ]
}

pub struct BenchResult {
    pub reports: Vec<[RunReport; 2]>,
}

pub fn run(instances: &[(String, Instance)], cfg: &BenchConfig) -> BenchResult {
    let slots: Vec<Mutex<Option<[RunReport; 2]>>> =
        instances.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((name, g)) = instances.get(i) else {
                    break;
                };
                *slots[i].lock().unwrap() = Some(run_one(name, g, cfg));
            });
        }
    });
    BenchResult {
        reports: slots
            .into_iter()
            .map(|m| m.into_inner().unwrap().unwrap())
            .collect(),
    }
}

fn percentile(sorted: &[u128], q: f64) -> u128 {
    if sorted.is_empty() {
        return 0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

impl BenchResult {
    /// Instances where both backends ran and agree, and where both ran.
    pub fn agreement(&self) -> (usize, usize) {
        let compared: Vec<_> = self
            .reports
            .iter()
            .filter(|[p, o]| {
                !matches!(p.outcome, Outcome::Skipped(_))
                    && !matches!(o.outcome, Outcome::Skipped(_))
            })
            .collect();
        let agree = compared
            .iter()
            .filter(|[p, o]| p.outcome == o.outcome && !matches!(p.outcome, Outcome::Failed(_)))
            .count();
        (agree, compared.len())
    }

    pub fn text(&self) -> String {
        let mut out = String::from(RunReport::HEADER);
        out.push('\n');
        for pair in &self.reports {
            for r in pair {
                out.push_str(&r.line());
                out.push('\n');
            }
        }
        let (agree, compared) = self.agreement();
        out.push_str(&format!("# agreement\t{agree}\t{compared}\n"));
        for (idx, backend) in ["poly", "oracle"].iter().enumerate() {
            let mut ms: Vec<u128> = self
                .reports
                .iter()
                .filter_map(|pair| pair[idx].millis)
                .collect();
            ms.sort_unstable();
            if ms.is_empty() {
                out.push_str(&format!("# millis\t{backend}\t-\n"));
            } else {
                out.push_str(&format!(
                    "# millis\t{backend}\tp50={}\tp90={}\tmax={}\n",
                    percentile(&ms, 0.5),
                    percentile(&ms, 0.9),
                    ms[ms.len() - 1]
                ));
            }
        }
        out
    }
}
