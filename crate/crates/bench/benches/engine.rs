use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use kstab_core::intersect::{bl_p3_quintic, dp4_surface};
use kstab_core::kstab::{divisor_s_invariant, model_flag};
use kstab_core::lattice::{snf::smith_normal_form, DEFAULT_ENUM_BOUND};
use kstab_core::toric;
use kstab_core::zariski::zariski_decompose;
use kstab_core::GramLattice;

fn divisorial(c: &mut Criterion) {
    let m = bl_p3_quintic();
    c.bench_function("s_invariant/Qtilde", |b| b.iter(|| divisor_s_invariant(black_box(&m), "Qtilde").unwrap()));
}

fn flags(c: &mut Criterion) {
    let m = bl_p3_quintic();
    let s = dp4_surface();
    let l = s.parse_class("L").unwrap();
    let l1 = s.parse_class("L - e1 - e2").unwrap();
    c.bench_function("flag/dp4 L", |b| b.iter(|| model_flag(&m, &s, black_box(&l)).unwrap()));
    c.bench_function("flag/dp4 L-e1-e2", |b| b.iter(|| model_flag(&m, &s, black_box(&l1)).unwrap()));
}

fn zariski(c: &mut Criterion) {
    let s = dp4_surface();
    let d = s.parse_class("9/4 L - e1 - e2 - e3 - e4 - e5").unwrap();
    c.bench_function("zariski/dp4", |b| b.iter(|| zariski_decompose(&s, black_box(&d)).unwrap()));
}

fn lattices(c: &mut Criterion) {
    let l = GramLattice::new(vec![vec![22, 11, 6], vec![11, 4, 1], vec![6, 1, -2]]).unwrap();
    let h = GramLattice::diagonal(&[4, 4, -2]);
    c.bench_function("lattice/discriminant rank 3", |b| b.iter(|| black_box(&l).discriminant_group().unwrap()));
    c.bench_function("lattice/overlattices <4,4,-2>", |b| {
        b.iter(|| black_box(&h).even_overlattices(DEFAULT_ENUM_BOUND).unwrap())
    });
    let m: Vec<Vec<BigInt>> = (0..6)
        .map(|i| (0..6).map(|j| BigInt::from((i * 7 + j * 3) % 11 - 5)).collect())
        .collect();
    c.bench_function("lattice/smith 6x6", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn toric_checks(c: &mut Criterion) {
    let p = toric::prism();
    c.bench_function("toric/kps prism", |b| b.iter(|| toric::toric_kps_check(black_box(&p)).unwrap()));
    c.bench_function("toric/polar dual cube", |b| b.iter(|| toric::polar_dual(black_box(&toric::cube())).unwrap()));
}

criterion_group!(benches, divisorial, flags, zariski, lattices, toric_checks);
criterion_main!(benches);
