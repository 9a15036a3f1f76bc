#include "qpdyn/basin.hpp"

#include <benchmark/benchmark.h>

using namespace qpdyn;

namespace {

PAdicNumber rat(std::int64_t num, std::int64_t den, std::int64_t p, int n = 64) {
    return PAdicNumber::from_rational(num, den, Prime(p), n);
}

void BM_FromRational(benchmark::State& state) {
    Prime p(7);
    std::int64_t n = 12345;
    for (auto _ : state) {
        benchmark::DoNotOptimize(PAdicNumber::from_rational(n, 101, p, 64));
        ++n;
    }
}
BENCHMARK(BM_FromRational);

void BM_Mul(benchmark::State& state) {
    PAdicNumber x = rat(12345, 101, 7);
    PAdicNumber y = rat(98765, 13, 7);
    for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_Mul);

void BM_Div(benchmark::State& state) {
    PAdicNumber x = rat(12345, 101, 7);
    PAdicNumber y = rat(98765, 13, 7);
    for (auto _ : state) benchmark::DoNotOptimize(x / y);
}
BENCHMARK(BM_Div);

void BM_ApplyF(benchmark::State& state) {
    MapParams m(Prime(7), rat(7, 1, 7));
    PAdicNumber x = rat(3, 1, 7).truncated(64);
    for (auto _ : state) {
        x = apply_f(m, x);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_ApplyF);

void BM_Sqrt64Digits(benchmark::State& state) {
    PAdicNumber x = rat(-3, 1, 7, 66);
    for (auto _ : state) benchmark::DoNotOptimize(padic_sqrt(x, 64));
}
BENCHMARK(BM_Sqrt64Digits);

void BM_FixedPoints(benchmark::State& state) {
    MapParams m(Prime(11), rat(4, 1, 11));
    for (auto _ : state) benchmark::DoNotOptimize(fixed_points(m));
}
BENCHMARK(BM_FixedPoints);

void BM_OrbitClassify(benchmark::State& state) {
    MapParams m(Prime(7), rat(7, 1, 7));
    OrbitClassifier cls(m, OrbitConfig{200, 16});
    std::int64_t u = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cls.classify(rat(u, 1, 7)));
        u = u % 48 + 1;
    }
}
BENCHMARK(BM_OrbitClassify);

void BM_SphereEnumerationDepth3(benchmark::State& state) {
    PAdicNumber zero = PAdicNumber::zero(Prime(7));
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_sphere(zero, 0, 3, TailPolicy::SeededRandomTail));
    }
}
BENCHMARK(BM_SphereEnumerationDepth3);

}  // namespace

BENCHMARK_MAIN();
