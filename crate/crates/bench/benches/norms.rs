use criterion::{criterion_group, criterion_main, Criterion};
use dirac_bench::ktype_grid;
use dirac_core::norms::{is_u_small, lambda_norm_sq, spin_norm_sq};
use dirac_core::realforms::{get_form, make_ktype, Group};
use std::hint::black_box;

fn spin_and_lambda(c: &mut Criterion) {
    for g in [Group::FI, Group::EI] {
        let f = get_form(g);
        let ks: Vec<_> = ktype_grid(g, 4).into_iter().map(|k| make_ktype(&k, f).unwrap()).collect();
        c.bench_function(&format!("spin_norm_sq {g} grid4"), |b| {
            b.iter(|| {
                for k in &ks {
                    black_box(spin_norm_sq(k, f));
                }
            })
        });
        c.bench_function(&format!("lambda_norm_sq {g} grid4"), |b| {
            b.iter(|| {
                for k in &ks {
                    black_box(lambda_norm_sq(k, f));
                }
            })
        });
    }
}

fn usmall(c: &mut Criterion) {
    let f = get_form(Group::FI);
    let ks: Vec<_> = ktype_grid(Group::FI, 3).into_iter().map(|k| make_ktype(&k, f).unwrap()).collect();
    c.bench_function("is_u_small FI grid3", |b| {
        b.iter(|| {
            for k in &ks {
                black_box(is_u_small(k, f));
            }
        })
    });
}

fn candidates(c: &mut Criterion) {
    let mut g = c.benchmark_group("candidates");
    g.sample_size(10);
    g.bench_function("G2", |b| b.iter(|| black_box(dirac_core::enumerate::candidate_infchars(get_form(Group::G2), 1))));
    g.finish();
}

criterion_group!(benches, spin_and_lambda, usmall, candidates);
criterion_main!(benches);
