use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use hopf_galois::etale_fields::build_kummer_cubic;
use hopf_galois::hopf_structures::HopfGaloisStructure;
use hopf_galois::integral_orders::{generator_search, lambda_fixed_order, SearchOptions};
use hopf_galois::perm_groups::{enumerate_regular_subgroups, EnumerationOptions};
use hopf_galois::Exec;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

// λ(G) on the Kummer cubic at 5: O_L is not free, so every class is tried.
fn exhaustive_search(c: &mut Criterion) {
    let ext = Arc::new(build_kummer_cubic(5).unwrap());
    let h = HopfGaloisStructure::new(ext.clone(), ext.group().left_regular()).unwrap();
    let lambda = lambda_fixed_order(&h, 5).unwrap();
    let o = ext.integral_lattice(5);
    let mut group = c.benchmark_group("generator_search/kummer5");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        let opts = SearchOptions { exec, ..Default::default() };
        group.bench_function(name, |b| b.iter(|| generator_search(&h, &lambda, black_box(&o), &opts).unwrap()));
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("regular_subgroups/s6");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        let opts = EnumerationOptions { exec, ..Default::default() };
        group.bench_function(name, |b| b.iter(|| enumerate_regular_subgroups(black_box(6), &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, exhaustive_search, enumeration);
criterion_main!(benches);
