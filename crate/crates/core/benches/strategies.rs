use cfgkit::decide::CykTable;
use cfgkit::exec::Strategy;
use cfgkit::pumping::{builtin_witness, refute_cfl_with, LanguagePredicate};
use cfgkit::{parse_grammar, to_cnf, Word};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn label(s: Strategy) -> &'static str {
    match s {
        Strategy::Sequential => "sequential",
        #[cfg(feature = "parallel")]
        Strategy::Parallel => "parallel",
    }
}

fn refute(c: &mut Criterion) {
    let mut group = c.benchmark_group("refute");
    group.sample_size(10);
    for (language, n) in [("a2n", 5), ("a2n", 6), ("anbncn", 8)] {
        let p = LanguagePredicate::builtin(language).unwrap();
        for s in Strategy::available() {
            group.bench_with_input(
                BenchmarkId::new(label(s), format!("{language}/{n}")),
                &n,
                |b, &n| {
                    b.iter(|| {
                        refute_cfl_with(&p, n, |n| builtin_witness(language, n).unwrap(), 2, s)
                            .unwrap()
                    })
                },
            );
        }
    }
    group.finish();
}

fn cyk(c: &mut Criterion) {
    let g = parse_grammar(
        "start: S\nS -> b A | a B\nA -> b A A | a S | a\nB -> a B B | b S | b\n",
    )
    .unwrap();
    let cnf = to_cnf(&g).unwrap();
    let mut group = c.benchmark_group("cyk");
    group.sample_size(10);
    for len in [64, 128, 256] {
        let w = Word::from_chars(&"ab".repeat(len / 4)).concat(&Word::from_chars(&"ba".repeat(len / 4)));
        for s in Strategy::available() {
            group.bench_with_input(BenchmarkId::new(label(s), len), &w, |b, w| {
                b.iter(|| CykTable::build_with(&cnf, black_box(w), s).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, refute, cyk);
criterion_main!(benches);
