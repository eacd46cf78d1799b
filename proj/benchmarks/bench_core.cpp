#include <benchmark/benchmark.h>

#include <sstream>
#include <vector>

#include "oscail/arff.hpp"
#include "oscail/kmeans.hpp"
#include "oscail/metrics.hpp"
#include "oscail/neighbors.hpp"
#include "oscail/ocsvm.hpp"
#include "oscail/rng.hpp"

namespace {

using oscail::AttributeKind;
using oscail::ExampleSet;
using oscail::IndexView;
using oscail::kOtherToken;
using oscail::kTargetToken;
using oscail::Metric;
using oscail::SplitMix64;

ExampleSet spectra_set(int targets, int others, int d) {
    SplitMix64 rng(3);
    ExampleSet set;
    set.relation = "bench";
    for (int i = 1; i <= d; ++i)
        set.schema.push_back({"a" + std::to_string(i), AttributeKind::Numeric, {}});
    set.schema.push_back({"class", AttributeKind::Nominal, {kOtherToken, kTargetToken}});
    for (int i = 0; i < targets + others; ++i) {
        std::vector<double> x(static_cast<std::size_t>(d));
        for (auto& v : x) v = rng.gaussian();
        set.examples.push_back({std::move(x), i < targets ? kTargetToken : kOtherToken});
    }
    return set;
}

void BM_Distance216(benchmark::State& state) {
    SplitMix64 rng(1);
    std::vector<double> a(216), b(216);
    for (auto& v : a) v = rng.gaussian();
    for (auto& v : b) v = rng.gaussian();
    const Metric metric = static_cast<Metric>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(oscail::distance(metric, a, b));
}
BENCHMARK(BM_Distance216)->Arg(0)->Arg(1)->Arg(2);

void BM_OsKnnPredict(benchmark::State& state) {
    const ExampleSet set = spectra_set(static_cast<int>(state.range(0)), 0, 216);
    const auto model = oscail::train_osknn(IndexView::full(set), 3, 3, 1.5, Metric::Euclidean);
    SplitMix64 rng(2);
    std::vector<double> q(216);
    for (auto& v : q) v = rng.gaussian();
    for (auto _ : state) benchmark::DoNotOptimize(model.predict(q));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OsKnnPredict)->Arg(134)->Arg(400);

void BM_OcSvmTrain(benchmark::State& state) {
    const ExampleSet set = spectra_set(static_cast<int>(state.range(0)), 0, 20);
    const IndexView view = IndexView::full(set);
    oscail::KernelSpec kernel;
    kernel.sigma = 1.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(oscail::train_ocsvm(view, 0.1, kernel));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OcSvmTrain)->Arg(50)->Arg(200);

void BM_KMeansTrain(benchmark::State& state) {
    const ExampleSet set = spectra_set(static_cast<int>(state.range(0)), 0, 216);
    const IndexView view = IndexView::full(set);
    for (auto _ : state)
        benchmark::DoNotOptimize(oscail::train_kmeans(view, 10, 2000.0, 2));
}
BENCHMARK(BM_KMeansTrain)->Arg(134);

void BM_ArffParse(benchmark::State& state) {
    const ExampleSet set = spectra_set(static_cast<int>(state.range(0)), 0, 50);
    const std::string text = oscail::write_arff(set);
    for (auto _ : state) benchmark::DoNotOptimize(oscail::parse_arff(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ArffParse)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
