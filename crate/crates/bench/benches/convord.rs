use std::hint::black_box;

use convord_core::chains::enumerate_chains;
use convord_core::orders::{sample_order_spec, verify_spec};
use convord_core::words::chi;
use convord_core::{fixtures, AffineSystem, BiconvexParam, CartanType, NodeSet, Window};
use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn inversion_sets(c: &mut Criterion) {
    let s = AffineSystem::build(CartanType::G, 2).unwrap();
    let x = s.from_word(&[0, 1, 2, 1, 0, 2, 1, 2, 0, 1]);
    c.bench_function("inversion_set G2 length 10", |b| b.iter(|| s.inversion_set(black_box(&x))));
}

fn words(c: &mut Criterion) {
    let s = AffineSystem::build(CartanType::A, 3).unwrap();
    let k = NodeSet::from_nodes([1, 3]);
    let y = s.subsystem(k).unwrap().element(&s, &[0, 2, 1]);
    let p = BiconvexParam::new(&s, s.nodes(), k, s.fin.identity(), y).unwrap();
    c.bench_function("chi A3", |b| b.iter(|| chi(&s, black_box(&p)).unwrap()));
    let word = chi(&s, &p).unwrap();
    c.bench_function("canonical_param A3", |b| b.iter(|| word.canonical_param(&s).unwrap()));
}

fn chains(c: &mut Criterion) {
    let s = fixtures::a2();
    let w = s.fin.from_word(&[2, 1]);
    c.bench_function("enumerate_chains A2 bound 3", |b| {
        b.iter(|| enumerate_chains(&s, s.nodes(), black_box(&w), 3).unwrap())
    });
}

fn verify(c: &mut Criterion) {
    let s = fixtures::a2();
    let spec = fixtures::spec(&s, "a2-two-row-s2s1").unwrap();
    let window = Window::new(6).unwrap();
    c.bench_function("verify_spec A2 depth 6", |b| b.iter(|| verify_spec(&s, black_box(&spec), window)));
    let c2 = AffineSystem::build(CartanType::C, 2).unwrap();
    let spec = sample_order_spec(&c2, 2, 2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let window = Window::new(4).unwrap();
    c.bench_function("verify_spec C2 depth 4", |b| b.iter(|| verify_spec(&c2, black_box(&spec), window)));
}

criterion_group!(benches, inversion_sets, words, chains, verify);
criterion_main!(benches);
