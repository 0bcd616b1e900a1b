use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use equiwide::baselines::{exact_coloring, hac_complete_link};
use equiwide::cover::exact_min_cover;
use equiwide::dissim::{dtw_matrix, SeriesDataset};
use equiwide::graph::{build_threshold_graph, complement};
use equiwide::homoset::{maximal_cliques, prune_dominated, radius_balls, DEFAULT_CLIQUE_CAP};
use equiwide_bench::{random_plane, random_walks};

const LIMIT: Duration = Duration::from_secs(60);

fn cliques(c: &mut Criterion) {
    let mut g = c.benchmark_group("maximal_cliques");
    for n in [50, 100, 200] {
        let tg = build_threshold_graph(&random_plane(n, 1), 0.3);
        g.bench_with_input(BenchmarkId::from_parameter(n), &tg, |b, tg| {
            b.iter(|| maximal_cliques(black_box(tg), DEFAULT_CLIQUE_CAP))
        });
    }
    g.finish();
}

fn covers(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_min_cover");
    for n in [50, 100, 150] {
        let d = random_plane(n, 2);
        let diam = maximal_cliques(&build_threshold_graph(&d, 0.3), DEFAULT_CLIQUE_CAP);
        let balls = prune_dominated(&radius_balls(&d, 0.15));
        g.bench_with_input(BenchmarkId::new("diameter", n), &diam, |b, s| {
            b.iter(|| exact_min_cover(black_box(s), LIMIT))
        });
        g.bench_with_input(BenchmarkId::new("radius", n), &balls, |b, s| {
            b.iter(|| exact_min_cover(black_box(s), LIMIT))
        });
    }
    g.finish();
}

fn coloring(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_coloring");
    for n in [50, 100, 150] {
        let h = complement(&build_threshold_graph(&random_plane(n, 3), 0.3));
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| exact_coloring(black_box(h), LIMIT))
        });
    }
    g.finish();
}

fn dtw(c: &mut Criterion) {
    let mut g = c.benchmark_group("dtw_matrix");
    for len in [24, 96] {
        let walks = SeriesDataset::new(random_walks(40, len, 4), 4).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(len), &walks, |b, w| {
            b.iter(|| dtw_matrix(black_box(w)))
        });
    }
    g.finish();
}

fn hac(c: &mut Criterion) {
    let mut g = c.benchmark_group("hac_complete_link");
    for n in [100, 300] {
        let d = random_plane(n, 5);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| hac_complete_link(black_box(d), 0.3))
        });
    }
    g.finish();
}

criterion_group!(benches, cliques, covers, coloring, dtw, hac);
criterion_main!(benches);
