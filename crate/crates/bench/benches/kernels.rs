use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use lcong::arith::spf_sieve;
use lcong::lfunc::bessel::BesselGrid;
use lcong::qseries::cm::{cm_coefficients, CmCurve};
use lcong::qseries::ntt::{convolve, schoolbook};
use lcong::qseries::twist::twisted_dirichlet_coeffs;
use lcong::{build_form, ArtinRep, FormId};
use rug::{Float, Integer};
use std::hint::black_box;

fn series(len: usize, seed: u64) -> Vec<Integer> {
    let mut x = seed;
    (0..len)
        .map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            Integer::from(x >> 20) - Integer::from(1u64 << 43)
        })
        .collect()
}

fn bench_convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolution");
    for len in [256usize, 4096, 65536] {
        let (a, b) = (series(len, 1), series(len, 2));
        group.throughput(Throughput::Elements(len as u64));
        group.bench_with_input(BenchmarkId::new("ntt", len), &len, |bch, &n| bch.iter(|| convolve(&a, &b, n)));
        if len <= 4096 {
            group.bench_with_input(BenchmarkId::new("schoolbook", len), &len, |bch, &n| {
                bch.iter(|| schoolbook(&a, &b, n))
            });
        }
    }
    group.finish();
}

fn bench_bessel(c: &mut Criterion) {
    let mut group = c.benchmark_group("bessel_grid");
    group.sample_size(10);
    for prec in [128u32, 384] {
        group.bench_with_input(BenchmarkId::new("build", prec), &prec, |b, &p| {
            b.iter(|| BesselGrid::new(black_box(60.0), p))
        });
        let grid = BesselGrid::new(60.0, prec);
        let zs: Vec<Float> = (1..=200).map(|i| Float::with_val(prec, i) * 0.29f64).collect();
        group.throughput(Throughput::Elements(zs.len() as u64));
        group.bench_with_input(BenchmarkId::new("eval", prec), &prec, |b, _| {
            b.iter(|| zs.iter().map(|z| grid.eval(z).0).fold(Float::with_val(prec, 0), |acc, k| acc + k))
        });
    }
    group.finish();
}

fn bench_sieves(c: &mut Criterion) {
    let mut group = c.benchmark_group("sieve");
    group.sample_size(10);
    let n = 1usize << 20;
    group.throughput(Throughput::Elements(n as u64));
    group.bench_function("spf", |b| b.iter(|| spf_sieve(black_box(n))));
    let form = build_form(&FormId::F5w4, n).expect("form");
    let rho = ArtinRep::rho(3, 7).expect("rho");
    group.bench_function("twisted_coeffs_rho7", |b| b.iter(|| twisted_dirichlet_coeffs(&form, &rho, n)));
    let curve = CmCurve::conductor_121();
    group.bench_function("cm_coefficients", |b| b.iter(|| cm_coefficients(&curve, 4, n)));
    group.finish();
}

criterion_group!(benches, bench_convolution, bench_bessel, bench_sieves);
criterion_main!(benches);
