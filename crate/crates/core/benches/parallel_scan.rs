//! Compares the fan-out helper against its sequential twin on the
//! enumeration-heavy oracle scans. With the default `parallel` feature the
//! first bench runs on rayon; without it the two coincide.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num::BigInt;

use taquin_core::exec;
use taquin_core::partition::{Partition, SkewShape};
use taquin_core::tableau::{count_skew, count_standard};

/// The pair-identity scan: both skew counts and the content sum for every
/// shape of size `n`.
fn pair_identity_row(lam: &Partition) -> bool {
    let n = lam.size();
    let row = count_skew(&SkewShape::new(lam.clone(), Partition::single_row(2)));
    let col = count_skew(&SkewShape::new(lam.clone(), Partition::single_column(2)));
    let contents: BigInt = lam.content_multiset().iter().map(|&c| BigInt::from(c)).sum();
    BigInt::from((n * (n - 1)) as i64) * (row - col)
        == BigInt::from(2) * count_standard(lam) * contents
}

fn bench_oracle_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("pair-identity-scan");
    for n in [8usize, 9] {
        let shapes = Partition::all_of(n);
        group.bench_with_input(BenchmarkId::new("fanout", n), &shapes, |b, shapes| {
            b.iter(|| {
                let ok = exec::map_collect(shapes.clone(), |lam| pair_identity_row(&lam));
                assert!(ok.into_iter().all(|x| x));
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &shapes, |b, shapes| {
            b.iter(|| {
                let ok = exec::map_collect_seq(shapes.clone(), |lam| pair_identity_row(&lam));
                assert!(ok.into_iter().all(|x| x));
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_oracle_scan);
criterion_main!(benches);
