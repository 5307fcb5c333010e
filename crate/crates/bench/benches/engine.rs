use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use posetlab::{
    ab_index, butterfly, flag_f_vector, glued_butterflies, search_triple_assignment, to_cd_index,
    SearchLimits, SearchMode,
};

fn flags(c: &mut Criterion) {
    let p8 = glued_butterflies(8).unwrap();
    c.bench_function("flag_f P_8", |b| b.iter(|| flag_f_vector(black_box(&p8))));
    c.bench_function("ab_index P_8", |b| b.iter(|| ab_index(black_box(&p8))));
}

fn cd_index(c: &mut Criterion) {
    let ab7 = ab_index(&glued_butterflies(7).unwrap());
    c.bench_function("cd_index P_7", |b| {
        b.iter(|| to_cd_index(black_box(&ab7)).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let limits = SearchLimits::unlimited();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let t6 = butterfly(6).unwrap();
    group.bench_function("count T_6", |b| {
        b.iter(|| search_triple_assignment(black_box(&t6), SearchMode::CountAll, limits).unwrap())
    });
    let p4 = glued_butterflies(4).unwrap();
    group.bench_function("refute P_4", |b| {
        b.iter(|| search_triple_assignment(black_box(&p4), SearchMode::First, limits).unwrap())
    });
    let p5 = glued_butterflies(5).unwrap();
    group.bench_function("refute P_5", |b| {
        b.iter(|| search_triple_assignment(black_box(&p5), SearchMode::First, limits).unwrap())
    });
    group.bench_function("refute P_5, 4 jobs", |b| {
        b.iter(|| {
            search_triple_assignment(black_box(&p5), SearchMode::First, limits.with_jobs(4))
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, flags, cd_index, search);
criterion_main!(benches);
