use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use picky_core::matrix::{classical_group, Classical};
use picky_core::{CharacterTable, Config, Mode, SylowContext};

fn build(c: &mut Criterion) {
    c.bench_function("schreier-sims SU3(3)", |b| {
        b.iter(|| classical_group(Classical::SU, 3, 3, Config::default()).unwrap())
    });
    c.bench_function("schreier-sims Sp4(3)", |b| {
        b.iter(|| classical_group(Classical::Sp, 4, 3, Config::default()).unwrap())
    });
}

fn classes(c: &mut Criterion) {
    let g = classical_group(Classical::SL, 3, 3, Config::default()).unwrap();
    c.bench_function("classes SL3(3)", |b| {
        b.iter(|| g.reconfigured(Config::default()).unwrap().conjugacy_classes().unwrap().len())
    });
}

fn dixon(c: &mut Criterion) {
    let mut group = c.benchmark_group("dixon");
    group.sample_size(10);
    for (name, family, n, q) in [("SL2(17)", Classical::SL, 2, 17), ("SU3(3)", Classical::SU, 3, 3)] {
        let g = classical_group(family, n, q, Config::default()).unwrap();
        group.bench_function(name, |b| {
            // A fresh handle so cached classes do not leak between iterations.
            b.iter(|| CharacterTable::compute(&g.reconfigured(Config::default()).unwrap()).unwrap().len())
        });
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let g = classical_group(Classical::SL, 2, 17, Config::default()).unwrap();
    let ctx = SylowContext::new(&g, 2).unwrap();
    let pcs = ctx.picky_classes().unwrap();
    ctx.group_table().unwrap();
    ctx.local_table().unwrap();
    c.bench_function("strong certificates SL2(17)", |b| {
        b.iter(|| {
            for pc in &pcs {
                black_box(ctx.verify(pc, Mode::Strong).unwrap());
            }
        })
    });
}

criterion_group!(benches, build, classes, dixon, certificates);
criterion_main!(benches);
