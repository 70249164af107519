#include <benchmark/benchmark.h>

#include <random>

#include "uipref/reward/scorer.hpp"
#include "uipref/reward/trainer.hpp"

namespace {

using namespace uipref::reward;

Eigen::VectorXd unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> n;
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = n(rng);
    return v.normalized();
}

void BM_Score(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    std::mt19937_64 rng(1);
    const auto head = RewardHead::identity(dim);
    const auto x = unit(rng, dim);
    const auto t = unit(rng, dim);
    for (auto _ : state) benchmark::DoNotOptimize(score(x, t, head));
}
BENCHMARK(BM_Score)->Arg(64)->Arg(512);

void BM_TrainStep(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    std::vector<EmbeddedPair> designer;
    std::vector<CandidatePair> pool;
    for (int i = 0; i < 64; ++i) {
        designer.push_back({unit(rng, dim), unit(rng, dim), unit(rng, dim)});
        pool.push_back({unit(rng, dim), unit(rng, dim), unit(rng, dim)});
    }
    TrainerConfig cfg;
    cfg.max_steps = 1;
    const auto head = RewardHead::identity(dim);
    for (auto _ : state) benchmark::DoNotOptimize(train(head, designer, pool, cfg));
}
BENCHMARK(BM_TrainStep)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
