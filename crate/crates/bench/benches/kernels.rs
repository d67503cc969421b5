//! Benchmarks for the hot paths: field construction, the two LC engines,
//! and the k-error search kernels.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use charseq::{
    build_field, build_with_gamma_sign, gen_character_sequence, k_error_profile_enum,
    k_error_profile_full, linear_complexity_bm, linear_complexity_gcd, BinarySequence, ChiSign,
    FieldConfig, SearchOptions,
};

fn char_seq(p: u64, r: u32) -> BinarySequence {
    gen_character_sequence(&build_field(p, r).unwrap())
}

fn bench_field_build(c: &mut Criterion) {
    c.bench_function("build_field q=6561 (p=3, r=8)", |b| {
        b.iter(|| build_field(3, 8).unwrap())
    });
    c.bench_function("build_with_gamma_sign q=361", |b| {
        b.iter(|| build_with_gamma_sign(&FieldConfig::new(19, 2), ChiSign::Minus).unwrap())
    });
}

fn bench_lc_engines(c: &mut Criterion) {
    let s = char_seq(19, 2); // period 361
    c.bench_function("lc_gcd T=361", |b| b.iter(|| linear_complexity_gcd(&s).lc));
    c.bench_function("lc_bm T=361", |b| b.iter(|| linear_complexity_bm(&s)));
}

fn bench_kerror(c: &mut Criterion) {
    let s16 = {
        // fixed 16-bit pattern with mixed structure
        BinarySequence::from_bit_str("0110100110010110").unwrap()
    };
    c.bench_function("k_error_profile_full T=16", |b| {
        b.iter_batched(
            || s16.clone(),
            |s| k_error_profile_full(&s).unwrap(),
            BatchSize::SmallInput,
        )
    });
    let s49 = char_seq(7, 2);
    let opts = SearchOptions::default();
    c.bench_function("k_error_profile_enum T=49 k<=2", |b| {
        b.iter(|| k_error_profile_enum(&s49, 2, &opts).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_field_build, bench_lc_engines, bench_kerror
}
criterion_main!(benches);
