//! One PASS/FAIL line per acceptance criterion, at desk scale.
//!
//! Runs without the libtest harness so the report stays in order; exits
//! nonzero when any criterion fails.

mod support;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use diffpart::config::Config;
use diffpart::experiments::{self, ExperimentSpec};
use diffpart::io::{read_chaco, read_gml, read_operation_log, write_chaco, write_gml, write_operation_log};
use diffpart::report::MetricsReport;
use diffpart_core::datasets::{generate_planted, DatasetKind, PlantedSpec};
use diffpart_core::didic::{run_didic, Didic, DidicConfig};
use diffpart_core::emulator::EmulatorHandle;
use diffpart_core::metrics::{coefficient_of_variation, conductance, edge_cut, modularity, predicted_percentage_global};
use diffpart_core::partitioners::partition_random;
use diffpart_core::workloads::{gen_ops, Executor, OpPattern, WorkloadSpec};
use diffpart_core::{rng, EdgeLabel, Graph, PartitionMap, UndirectedView, VertexId, VertexKind};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config as RunnerConfig, TestRunner};
use rand::Rng;
use tempfile::TempDir;

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const DATASETS: [DatasetKind; 3] = [DatasetKind::FileSystem, DatasetKind::Gis, DatasetKind::Social];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    check(elapsed < limit, format!("{detail}; {:.1}s of {}s", elapsed.as_secs_f64(), limit.as_secs()))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn spec(kind: &str, seed: u64, extra: &str) -> ExperimentSpec {
    let mut text = format!("experiment.kind = {kind}\nexperiment.seed = {seed}\n");
    text.push_str(extra);
    ExperimentSpec::from_config(Config::parse(&text).unwrap()).unwrap()
}

fn run(spec: &ExperimentSpec, out: &Path) -> Vec<MetricsReport> {
    experiments::run(spec, out).unwrap_or_else(|e| panic!("{} experiment failed: {e}", spec.kind.as_str()))
}

fn pct(r: &MetricsReport) -> f64 {
    r.pct_global.expect("workload produced traffic")
}

/// Static runs over every seed, shared by the traffic criteria.
struct StaticRuns {
    /// (dataset, method, k, pattern) -> pct_global per seed
    pct: BTreeMap<(DatasetKind, String, u32, OpPattern), Vec<f64>>,
    elapsed: BTreeMap<DatasetKind, Duration>,
}

impl StaticRuns {
    fn collect(tmp: &Path) -> Self {
        let mut by_cell: BTreeMap<_, Vec<f64>> = BTreeMap::new();
        let mut elapsed = BTreeMap::new();
        for dataset in DATASETS {
            let methods = if dataset == DatasetKind::Gis { "random" } else { "random, didic" };
            let started = Instant::now();
            for seed in SEEDS {
                let extra = format!("dataset.kind = {}\npartition.methods = {methods}\n", dataset.as_str());
                let s = spec("static", seed, &extra);
                for r in run(&s, &tmp.join(format!("{}_{seed}", dataset.as_str()))) {
                    let pattern = OpPattern::parse(&r.cell.pattern).unwrap();
                    by_cell.entry((dataset, r.cell.method.clone(), r.cell.k, pattern)).or_default().push(pct(&r));
                }
            }
            elapsed.insert(dataset, started.elapsed());
        }
        StaticRuns { pct: by_cell, elapsed }
    }

    fn mean_pct(&self, dataset: DatasetKind, method: &str, k: u32) -> f64 {
        let all: Vec<f64> = self
            .pct
            .iter()
            .filter(|((d, m, kk, _), _)| *d == dataset && m == method && *kk == k)
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        mean(&all)
    }
}

fn random_edge_cut() -> Outcome {
    let graphs: Vec<(DatasetKind, Vec<Graph>)> = DATASETS
        .iter()
        .map(|&d| (d, SEEDS.iter().map(|&s| experiments::generate_dataset(d, 10_000, s).unwrap()).collect()))
        .collect();
    let started = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, gs) in &graphs {
        let views: Vec<UndirectedView> = gs.iter().map(Graph::undirected_view).collect();
        for (k, want) in [(2u32, 0.50), (4, 0.75)] {
            let cuts: Vec<f64> = views
                .iter()
                .zip(SEEDS)
                .map(|(v, s)| edge_cut(v, &partition_random(v.num_vertices(), k, s).unwrap()).fraction)
                .collect();
            let m = mean(&cuts);
            ok &= (m - want).abs() <= 0.02;
            parts.push(format!("{} k={k} {m:.4}", d.as_str()));
        }
    }
    let detail = parts.join(", ");
    if ok {
        within(started.elapsed(), Duration::from_secs(10), detail)
    } else {
        Err(detail)
    }
}

fn planted_two_communities() -> Outcome {
    let started = Instant::now();
    let mut cuts = Vec::new();
    for seed in SEEDS {
        let (g, _) = generate_planted(&PlantedSpec::two_communities(seed, 200)).unwrap();
        let view = g.undirected_view();
        let cfg = DidicConfig { iterations: 100, seed, ..DidicConfig::with_k(2) };
        let (p, _) = run_didic(&view, &partition_random(view.num_vertices(), 2, seed).unwrap(), &cfg).unwrap();
        cuts.push(edge_cut(&view, &p).fraction);
    }
    let good = cuts.iter().filter(|&&c| c < 0.10).count();
    let detail = format!("{good}/5 below 0.10, cuts {}", cuts.iter().map(|c| format!("{c:.3}")).collect::<Vec<_>>().join(" "));
    if good >= 4 {
        within(started.elapsed(), Duration::from_secs(30), detail)
    } else {
        Err(detail)
    }
}

fn didic_vs_random(runs: &StaticRuns) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (dataset, bound) in [(DatasetKind::FileSystem, 0.35), (DatasetKind::Social, 0.70)] {
        for k in [2, 4] {
            let ratio = runs.mean_pct(dataset, "didic", k) / runs.mean_pct(dataset, "random", k);
            ok &= ratio <= bound;
            parts.push(format!("{} k={k} {ratio:.3} (max {bound})", dataset.as_str()));
        }
    }
    let elapsed = runs.elapsed[&DatasetKind::FileSystem] + runs.elapsed[&DatasetKind::Social];
    let detail = parts.join(", ");
    if ok {
        within(elapsed, Duration::from_secs(600), detail)
    } else {
        Err(detail)
    }
}

fn traffic_formula(runs: &StaticRuns) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for ((d, method, k, pattern), values) in &runs.pct {
        if method != "random" {
            continue;
        }
        let (t_l, t_pg) = pattern.actions_per_step();
        let predicted = predicted_percentage_global(t_pg, t_l, 1.0 - 1.0 / f64::from(*k)).unwrap();
        let measured = mean(values);
        let rel = (measured - predicted).abs() / predicted;
        ok &= rel <= 0.15;
        parts.push(format!("{} {} k={k} {measured:.4} vs {predicted:.4}", d.as_str(), pattern.as_str()));
    }
    check(ok, parts.join(", "))
}

fn random_view(r: &mut impl Rng, n: usize) -> UndirectedView {
    let mut g = Graph::with_vertices(n, VertexKind::Generic);
    for _ in 0..r.gen_range(0..3 * n) {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        g.add_edge(VertexId(u), VertexId(v), r.gen_range(0.05..=1.0), EdgeLabel::Plain).unwrap();
    }
    g.undirected_view()
}

fn conservation() -> Outcome {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
    let mut r = rng::seeded(5);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for case in 0..100u64 {
        let n = r.gen_range(2..40);
        let k = r.gen_range(1..5);
        let view = random_view(&mut r, n);
        let cfg = DidicConfig { seed: case, ..DidicConfig::with_k(k) };
        let mut d = Didic::new(&view, partition_random(n, k, case).unwrap(), cfg.clone()).unwrap();
        let w0: Vec<f64> = (0..k as usize).map(|c| d.state().primary_sum(c)).collect();
        let l0: Vec<f64> = (0..k as usize).map(|c| d.state().secondary_sum(c)).collect();
        d.run(10).unwrap();
        for c in 0..k as usize {
            let want_w = w0[c] + 10.0 * f64::from(cfg.primary_steps) * l0[c];
            let (w, l) = (d.state().primary_sum(c), d.state().secondary_sum(c));
            worst = worst.max((w - want_w).abs() / want_w).max((l - l0[c]).abs() / l0[c]);
            if !close(w, want_w) || !close(l, l0[c]) {
                failures += 1;
            }
        }
    }
    check(failures == 0, format!("100 graphs x 10 iterations, worst relative error {worst:.2e}, {failures} violations"))
}

/// Brute-force metric values computed from the dense adjacency matrix.
struct Oracle {
    cut_fraction: f64,
    conductance: Option<f64>,
    modularity: Option<f64>,
    cov_sizes: f64,
}

fn oracle(a: &[Vec<f64>], labels: &[u32], k: usize) -> Oracle {
    let n = a.len();
    let degree: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = degree.iter().sum();
    let mut cut = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if labels[i] != labels[j] {
                cut += a[i][j];
            }
        }
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - degree[i] * degree[j] / two_m;
            }
        }
    }
    let mut cond: Option<f64> = Some(f64::INFINITY);
    for c in 0..k as u32 {
        let vol: f64 = (0..n).filter(|&i| labels[i] == c).map(|i| degree[i]).sum();
        let out: f64 = (0..n).filter(|&i| labels[i] == c).flat_map(|i| (0..n).filter(|&j| labels[j] != c).map(move |j| (i, j))).map(|(i, j)| a[i][j]).sum();
        cond = match cond {
            Some(best) if vol > 0.0 => Some(best.min(out / vol)),
            _ => None,
        };
    }
    let sizes: Vec<f64> = (0..k as u32).map(|c| labels.iter().filter(|&&l| l == c).count() as f64).collect();
    let mu = sizes.iter().sum::<f64>() / k as f64;
    let sd = (sizes.iter().map(|s| (s - mu).powi(2)).sum::<f64>() / k as f64).sqrt();
    Oracle {
        cut_fraction: if two_m > 0.0 { 2.0 * cut / two_m } else { 0.0 },
        conductance: cond,
        modularity: (two_m > 0.0).then(|| q / two_m),
        cov_sizes: 100.0 * sd / mu,
    }
}

/// Every set partition of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(i: usize, max: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for l in 0..=max + 1 {
            current[i] = l;
            rec(i + 1, max.max(l), current, out);
        }
    }
    if n > 0 {
        rec(1, 0, &mut current, &mut out);
    }
    out
}

fn metric_oracle() -> Outcome {
    let started = Instant::now();
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    let (mut graphs, mut checks, mut mismatches) = (0usize, 0usize, Vec::new());
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let partitions = set_partitions(n);
        for mask in 0u32..(1 << pairs.len()) {
            for weighted in [false, true] {
                let mut g = Graph::with_vertices(n, VertexKind::Generic);
                let mut a = vec![vec![0.0; n]; n];
                for (e, &(i, j)) in pairs.iter().enumerate() {
                    if mask & (1 << e) != 0 {
                        let w = if weighted { f64::from((e as u32 * 7 + 3) % 10 + 1) / 10.0 } else { 1.0 };
                        g.add_edge(VertexId(i), VertexId(j), w, EdgeLabel::Plain).unwrap();
                        a[i][j] = w;
                        a[j][i] = w;
                    }
                }
                let view = g.undirected_view();
                graphs += 1;
                for labels in &partitions {
                    let k = *labels.iter().max().unwrap() as usize + 1;
                    let p = PartitionMap::new(k as u32, labels.clone()).unwrap();
                    let o = oracle(&a, labels, k);
                    let sizes: Vec<f64> = p.sizes().into_iter().map(|s| s as f64).collect();
                    let agree = eq(edge_cut(&view, &p).fraction, o.cut_fraction)
                        && match (conductance(&view, &p).ok(), o.conductance) {
                            (Some(x), Some(y)) => eq(x, y),
                            (x, y) => x.is_none() && y.is_none(),
                        }
                        && match (modularity(&view, &p).ok(), o.modularity) {
                            (Some(x), Some(y)) => eq(x, y),
                            (x, y) => x.is_none() && y.is_none(),
                        }
                        && eq(coefficient_of_variation(&sizes).unwrap(), o.cov_sizes);
                    checks += 1;
                    if !agree && mismatches.len() < 3 {
                        mismatches.push(format!("n={n} mask={mask:b} labels={labels:?}"));
                    }
                }
            }
        }
    }
    let detail = format!(
        "{graphs} graphs, {checks} partitionings, {:.1}s{}",
        started.elapsed().as_secs_f64(),
        if mismatches.is_empty() { String::new() } else { format!(", mismatches: {}", mismatches.join("; ")) }
    );
    check(mismatches.is_empty(), detail)
}

fn stress_repair(tmp: &Path) -> Outcome {
    let mut ratios = Vec::new();
    for seed in SEEDS {
        let s = spec("stress", seed, "dataset.kind = fs\npartition.k = 4\ndynamism.policies = random\ndynamism.levels = 0.25\n");
        let reports = run(&s, &tmp.join(format!("stress_{seed}")));
        let stage = |name: &str| pct(reports.iter().find(|r| r.cell.stage == name).unwrap());
        ratios.push(stage("repaired") / stage("baseline"));
    }
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    let detail = format!("repaired/baseline per seed {}", ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(" "));
    check(worst <= 1.3, detail)
}

fn dynamic_maintenance(tmp: &Path) -> Outcome {
    let mut ratios = Vec::new();
    for seed in SEEDS {
        let s = spec("dynamic", seed, "dataset.kind = fs\ndynamism.policies = random\ndynamism.dynamic_level = 0.25\ndynamism.cycles = 5\n");
        let reports = run(&s, &tmp.join(format!("dynamic_{seed}")));
        for k in &s.ks {
            let stage = |name: &str| pct(reports.iter().find(|r| r.cell.k == *k && r.cell.stage == name).unwrap());
            ratios.push(stage("cycle5") / stage("cycle1"));
        }
    }
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    check(worst <= 1.2, format!("final/first over 5 seeds x k=2,4, worst {worst:.3}"))
}

fn round_trip_cases<S: Strategy>(strategy: S, cases: u32, mut prop: impl FnMut(S::Value) -> bool) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(RunnerConfig { cases, ..RunnerConfig::default() });
    for _ in 0..cases {
        let value = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let shown = format!("{value:?}");
        if !prop(value) {
            return Err(format!("failed on {}", &shown[..shown.len().min(200)]));
        }
    }
    Ok(())
}

fn determinism_and_round_trips(tmp: &Path) -> Outcome {
    let conf = Config::parse(&std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/fs_1k.conf")).unwrap()).unwrap();
    let s = ExperimentSpec::from_config(conf).unwrap();
    let read_all = |dir: &Path| -> Vec<Vec<u8>> {
        ["summary.csv", "partitions.csv", "operations.csv"]
            .iter()
            .map(|f| std::fs::read(experiments::results_dir(&s, dir).join(f)).unwrap())
            .collect()
    };
    run(&s, &tmp.join("det_a"));
    run(&s, &tmp.join("det_b"));
    if read_all(&tmp.join("det_a")) != read_all(&tmp.join("det_b")) {
        return Err("repeated seeded runs wrote different CSVs".into());
    }
    let cases = 1000;
    round_trip_cases(support::simple_graph(), cases, |g| {
        let first = support::bytes(|w| write_chaco(&g, w).unwrap());
        let back = read_chaco(first.as_slice()).unwrap();
        support::bytes(|w| write_chaco(&back, w).unwrap()) == first
    })
    .map_err(|e| format!("chaco: {e}"))?;
    round_trip_cases(support::rich_graph(), cases, |(g, p)| {
        let first = support::bytes(|w| write_gml(&g, p.as_ref(), w).unwrap());
        let doc = read_gml(first.as_slice()).unwrap();
        doc.graph == g && doc.partition == p
    })
    .map_err(|e| format!("gml: {e}"))?;
    round_trip_cases(support::operation_log(), cases, |log| {
        let first = support::bytes(|w| write_operation_log(&log, w).unwrap());
        read_operation_log(first.as_slice()).unwrap() == log
    })
    .map_err(|e| format!("operation log: {e}"))?;
    Ok(format!("static CSVs byte-identical across runs; {cases} Chaco, GML and operation-log round trips"))
}

fn single_partition() -> Outcome {
    let mut parts = Vec::new();
    for d in DATASETS {
        let g = experiments::generate_dataset(d, 2_000, 11).unwrap();
        let one = PartitionMap::new(1, vec![0; g.num_vertices()]).unwrap();
        let cut = edge_cut(&g.undirected_view(), &one).weight;
        let exec = Executor::new(&g);
        for pattern in experiments::default_patterns(d) {
            let log = gen_ops(&g, &WorkloadSpec::new(pattern, 200, 11)).unwrap();
            let mut h = EmulatorHandle::open(&g, one.clone()).unwrap();
            exec.replay(&mut h, &log.ops).unwrap();
            if h.total_global() != 0 || cut != 0.0 || h.total_local() == 0 {
                return Err(format!("{} {}: global {} cut {cut}", d.as_str(), pattern.as_str(), h.total_global()));
            }
            parts.push(pattern.as_str());
        }
    }
    Ok(format!("zero global traffic and zero cut for {}", parts.join(", ")))
}

fn main() {
    let tmp = TempDir::new().unwrap();
    let report = |n: usize, name: &str, outcome: Outcome| {
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} criterion {n:>2} {name}: {detail}");
        outcome.is_ok()
    };
    let mut ok = true;
    ok &= report(1, "random edge cut", random_edge_cut());
    ok &= report(2, "planted communities", planted_two_communities());
    let runs = StaticRuns::collect(tmp.path());
    ok &= report(3, "didic vs random traffic", didic_vs_random(&runs));
    ok &= report(4, "traffic formula", traffic_formula(&runs));
    ok &= report(5, "load conservation", conservation());
    ok &= report(6, "metric oracle", metric_oracle());
    ok &= report(7, "stress repair", stress_repair(tmp.path()));
    ok &= report(8, "dynamic maintenance", dynamic_maintenance(tmp.path()));
    ok &= report(9, "determinism and round trips", determinism_and_round_trips(tmp.path()));
    ok &= report(10, "single partition", single_partition());
    if !ok {
        std::process::exit(1);
    }
}
