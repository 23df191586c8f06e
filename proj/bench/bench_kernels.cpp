#include <benchmark/benchmark.h>

#include "wfg/quantize.hpp"
#include "wfg/synthesis.hpp"
#include "wfg/transforms.hpp"

using namespace wfg;

namespace {

SampledSignal chirp(int n) { return standard_signal(SignalKind::CHIRP, {{"c", 0.5}}, AxisSpec::balanced(n)); }

void BM_stft(benchmark::State& st) {
    const auto u = chirp(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(stft(u, GaussWindow{}, {}));
}

void BM_stft_serial(benchmark::State& st) {
    const auto u = chirp(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(stft_serial(u, GaussWindow{}, {}));
}

const SymbolExpr& bench_symbol() {
    static const SymbolExpr a = SymbolExpr::bump({1.0, 0.5}, 1.0, 8) * SymbolExpr::monomial({1, 1});
    return a;
}

void BM_kernel_apply(benchmark::State& st) {
    const AxisSpec ax(16.0, static_cast<int>(st.range(0)));
    const auto K = build_kernel(bench_symbol(), 0.5, ax);
    const auto u = coherent_state({{0.5}, {0.5}, 1.0}, ax);
    for (auto _ : st) benchmark::DoNotOptimize(K.apply(u));
}

void BM_kernel_apply_serial(benchmark::State& st) {
    const AxisSpec ax(16.0, static_cast<int>(st.range(0)));
    const auto K = build_kernel(bench_symbol(), 0.5, ax);
    const auto u = coherent_state({{0.5}, {0.5}, 1.0}, ax);
    for (auto _ : st) benchmark::DoNotOptimize(K.apply_serial(u));
}

std::vector<SampledSignal> probes(const AxisSpec& ax) {
    std::vector<SampledSignal> us;
    for (double x0 : {-1.0, 0.0, 1.0, 2.0}) us.push_back(coherent_state({{x0}, {0.3}, 1.0}, ax));
    return us;
}

void BM_table_apply(benchmark::State& st) {
    const AxisSpec ax(16.0, static_cast<int>(st.range(0)));
    const auto T = build_midpoint_table(dilate(SymbolExpr::bump({1.0, 0.0}, 0.15, 8), 0.1), 0.5, ax);
    const auto us = probes(ax);
    for (auto _ : st) benchmark::DoNotOptimize(T.apply(us));
}

void BM_table_apply_serial(benchmark::State& st) {
    const AxisSpec ax(16.0, static_cast<int>(st.range(0)));
    const auto T = build_midpoint_table(dilate(SymbolExpr::bump({1.0, 0.0}, 0.15, 8), 0.1), 0.5, ax);
    const auto us = probes(ax);
    for (auto _ : st) benchmark::DoNotOptimize(T.apply_serial(us));
}

}  // namespace

BENCHMARK(BM_stft)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stft_serial)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_apply)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_kernel_apply_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_table_apply)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_table_apply_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
