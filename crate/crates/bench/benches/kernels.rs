use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wittkit::drwitt::{DrwContext, WittWeight};
use wittkit::hoch::{hh, theorem1_check};
use wittkit::ring::ZMod;
use wittkit::witt::WittRing;
use wittkit::zmod::{howell_form, Modulus, ZModMatrix};

fn howell(c: &mut Criterion) {
    let m = Modulus::new(3, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rows: Vec<Vec<u64>> = (0..40).map(|_| (0..40).map(|_| 3 * rng.gen_range(0..27)).collect()).collect();
    let a = ZModMatrix::from_rows(m, 40, &rows).unwrap();
    c.bench_function("howell 40x40 mod 81", |b| b.iter(|| howell_form(black_box(&a))));
}

fn witt(c: &mut Criterion) {
    let ring = WittRing::new(ZMod::new(Modulus::new(5, 3).unwrap()), 5, 3).unwrap();
    let a = ring.from_components(vec![3, 17, 101]).unwrap();
    let b = ring.from_components(vec![44, 2, 9]).unwrap();
    ring.mul(&a, &b).unwrap();
    c.bench_function("witt W_3 mul, p = 5", |bn| bn.iter(|| ring.mul(black_box(&a), black_box(&b)).unwrap()));
    c.bench_function("witt W_3 add, p = 5", |bn| bn.iter(|| ring.add(black_box(&a), black_box(&b)).unwrap()));
}

fn drw(c: &mut Criterion) {
    let k = WittWeight::new(3, vec![2, 1], 0);
    c.bench_function("W_2Ω^1 weight (2,1), p = 3", |b| {
        b.iter(|| DrwContext::new(3, 2, 2).unwrap().weight_module(2, 1, black_box(&k)).unwrap())
    });
}

fn hochschild(c: &mut Criterion) {
    c.bench_function("HH^1(A_2) degrees <= 18, p = 3", |b| b.iter(|| hh(3, 2, 1, black_box(18)).unwrap()));
    let mut g = c.benchmark_group("theorem1");
    g.sample_size(10);
    g.bench_function("p = 3, n = 2, weight 1", |b| b.iter(|| theorem1_check(3, 2, black_box(1), 1).unwrap()));
    g.finish();
}

criterion_group!(benches, howell, witt, drw, hochschild);
criterion_main!(benches);
