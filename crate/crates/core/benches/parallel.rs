use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hammersley_besov::discrepancy::l2_squared_exact_with;
use hammersley_besov::haar::{coeff_table, float_basis};
use hammersley_besov::hammersley::{generate, generate_with, SignPattern};
use hammersley_besov::norms::{besov_quasi_norm_with, level_sums, NormParams};
use hammersley_besov::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn bench(c: &mut Criterion) {
    let pattern = SignPattern::balanced(12).unwrap();
    let big = generate(2, 12, &pattern).unwrap();
    let small = generate(3, 4, &SignPattern::balanced(4).unwrap()).unwrap();
    let params = NormParams::new(2.0, 2.0, 0.0, 16).unwrap();
    let basis = float_basis(2).unwrap();

    let mut g = c.benchmark_group("exec");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(
            BenchmarkId::new("generate b=2 n=16", name),
            &exec,
            |bch, &e| {
                let p = SignPattern::balanced(16).unwrap();
                bch.iter(|| generate_with(2, 16, &p, e).unwrap())
            },
        );
        g.bench_with_input(
            BenchmarkId::new("exact L2 b=2 n=12", name),
            &exec,
            |bch, &e| bch.iter(|| l2_squared_exact_with(&big, e).unwrap()),
        );
        g.bench_with_input(
            BenchmarkId::new("coefficient table b=3 n=4", name),
            &exec,
            |bch, &e| bch.iter(|| coeff_table(&small, 4, false, e).unwrap()),
        );
        g.bench_with_input(
            BenchmarkId::new("level sums b=2 n=12", name),
            &exec,
            |bch, &e| bch.iter(|| level_sums(&basis, &big, 16, 2.0, e)),
        );
        g.bench_with_input(
            BenchmarkId::new("besov norm b=2 n=12", name),
            &exec,
            |bch, &e| bch.iter(|| besov_quasi_norm_with(&big, &params, e).unwrap()),
        );
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
