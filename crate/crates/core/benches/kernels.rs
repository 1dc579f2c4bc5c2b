use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ga_harmonic::composite::{
    convolution_identity_residual, level_axes, level_transform, sample_on_level, AxisGrid, ConvolutionGrids,
    ConvolutionIdentity, GridSpec, Level, LevelFunction,
};
use ga_harmonic::par::with_threads;
use ga_harmonic::Complex64;

fn thread_counts() -> Vec<usize> {
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    vec![1, max.max(2)]
}

fn dense_sl2() -> LevelFunction {
    let mut spec = GridSpec::uniform(97, -24.0, 24.0, 32, 15);
    spec.a_grid = AxisGrid::new(49, -3.0, 3.0);
    let axes = level_axes(Level::SL, 2, &spec).unwrap();
    let f = sample_on_level(Level::SL, 2, axes, |g| {
        let m = g.matrix();
        Complex64::new((-m.norm_squared() + m.trace()).exp(), 0.0)
    })
    .unwrap();
    LevelFunction::Dense(f)
}

fn transforms(c: &mut Criterion) {
    let f = dense_sl2();
    let mut group = c.benchmark_group("level_transform_sl2_dense");
    group.sample_size(10);
    for t in thread_counts() {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| with_threads(t, || level_transform(Level::SL, 2, std::slice::from_ref(&f), 15).unwrap()))
        });
    }
    group.finish();
}

fn convolutions(c: &mut Criterion) {
    let grids = ConvolutionGrids::coarse(ConvolutionIdentity::Lemma31a, 1);
    let mut group = c.benchmark_group("convolution_lemma31a");
    group.sample_size(10);
    for t in thread_counts() {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| with_threads(t, || convolution_identity_residual(ConvolutionIdentity::Lemma31a, &grids, 1.0).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, convolutions);
criterion_main!(benches);
