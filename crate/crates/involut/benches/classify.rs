use criterion::{criterion_group, criterion_main, Criterion};

use involut::classifier::{classify_involution_sequential, FamilySpec};
use involut::matrix::Family;

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for &(n, m) in &[(2usize, 2usize), (3, 2), (4, 2)] {
        let spec = FamilySpec::new(n, m, Family::Full, None).unwrap();
        group.bench_function(format!("sequential/n{n}m{m}"), |b| {
            b.iter(|| classify_involution_sequential(&spec, 5, 42).unwrap())
        });
        #[cfg(feature = "parallel")]
        {
            use involut::classifier::classify_involution_parallel;
            group.bench_function(format!("parallel/n{n}m{m}"), |b| {
                b.iter(|| classify_involution_parallel(&spec, 5, 42).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_classify);
criterion_main!(benches);
