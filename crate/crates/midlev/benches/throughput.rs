//! Benchmarks: streaming per-step cost across n, and the data-parallel
//! verification loops against their sequential counterparts. Run with the
//! default features for the rayon-backed numbers and with
//! `--no-default-features` for the purely sequential core.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use midlev::bitstring::{dyck_align, Bitstring};
use midlev::dynamics::kappa;
use midlev::exec;
use midlev::spanning::select_gluing_pair;
use midlev::tree::{canonical_word, lambda_of};
use midlev::verifier::{dyck_words, middle_vertices};

fn generator_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_steps");
    for n in [16usize, 64, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let mut state = midlev::generator::init(n, 1, None).unwrap();
                let mut acc = 0u64;
                for _ in 0..256 {
                    acc += state.next_flip().unwrap() as u64;
                }
                acc
            })
        });
    }
    group.finish();
}

fn period_law_scan(c: &mut Criterion) {
    let verts = middle_vertices(6);
    let check = |x: &Bitstring| {
        let t = dyck_align(x).unwrap().dyck;
        kappa(x) == 2 * lambda_of(&t)
    };
    let mut group = c.benchmark_group("period_law_n6");
    group.bench_function("parallel", |b| {
        b.iter(|| exec::map_collect(&verts, check).iter().filter(|&&ok| ok).count())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| exec::map_collect_seq(&verts, check).iter().filter(|&&ok| ok).count())
    });
    group.finish();
}

fn spanning_selection(c: &mut Criterion) {
    let classes: Vec<Bitstring> = dyck_words(7)
        .iter()
        .map(canonical_word)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let select = |w: &Bitstring| select_gluing_pair(w).ok().map(|s| (s.x, s.y));
    let mut group = c.benchmark_group("spanning_selection_n7");
    group.bench_function("parallel", |b| {
        b.iter(|| exec::map_collect(&classes, select).iter().flatten().count())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| exec::map_collect_seq(&classes, select).iter().flatten().count())
    });
    group.finish();
}

criterion_group!(benches, generator_steps, period_law_scan, spanning_selection);
criterion_main!(benches);
