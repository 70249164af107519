#include <benchmark/benchmark.h>

#include <random>

#include "uipref/arena/bootstrap.hpp"
#include "uipref/arena/elo.hpp"

namespace {

using namespace uipref::arena;

std::vector<Battle> make_battles(int n, int models) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> pick(0, models - 1);
    std::bernoulli_distribution coin(0.5);
    std::vector<Battle> out;
    while (static_cast<int>(out.size()) < n) {
        const int a = pick(rng);
        const int b = pick(rng);
        if (a == b) continue;
        out.push_back({"m" + std::to_string(a), "m" + std::to_string(b), "d", coin(rng) ? Outcome::kA : Outcome::kB,
                       "j", ""});
    }
    return out;
}

void BM_EloSequence(benchmark::State& state) {
    const auto battles = make_battles(static_cast<int>(state.range(0)), 8);
    const RatingConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(elo_sequence(battles, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EloSequence)->Arg(1000)->Arg(10000);

void BM_Bootstrap(benchmark::State& state) {
    const auto battles = make_battles(2000, 8);
    RatingConfig cfg;
    cfg.rounds = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bootstrap_ratings(battles, cfg));
}
BENCHMARK(BM_Bootstrap)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
