#include "uipref/arena/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "uipref/common/error.hpp"
#include "uipref/common/hash.hpp"

namespace uipref::arena {

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(ErrorKind::kInvalidInput, "percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<ModelRating> bootstrap_ratings(std::span<const Battle> battles, const RatingConfig& cfg) {
    cfg.validate();
    if (battles.empty()) throw Error(ErrorKind::kInvalidInput, "bootstrap needs at least one battle");
    const auto models = models_in(battles);
    std::map<std::string, std::vector<double>> samples;
    for (const auto& m : models) samples[m].reserve(static_cast<std::size_t>(cfg.rounds));

    std::vector<Battle> resample(battles.size());
    for (int round = 0; round < cfg.rounds; ++round) {
        std::mt19937_64 rng(derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(round)));
        std::uniform_int_distribution<std::size_t> pick(0, battles.size() - 1);
        for (auto& b : resample) b = battles[pick(rng)];
        std::shuffle(resample.begin(), resample.end(), rng);
        const auto ratings = elo_sequence(resample, cfg, models);
        for (const auto& [m, r] : ratings) samples[m].push_back(r);
    }

    std::vector<ModelRating> out;
    for (const auto& [m, values] : samples) {
        out.push_back({m, percentile(values, 0.5), percentile(values, 0.025), percentile(values, 0.975)});
    }
    std::sort(out.begin(), out.end(), [](const ModelRating& a, const ModelRating& b) {
        return a.median != b.median ? a.median > b.median : a.model < b.model;
    });
    return out;
}

std::string ratings_csv(std::span<const ModelRating> ratings) {
    std::string out = "model,median,ci_low,ci_high\n";
    char buf[128];
    for (const auto& r : ratings) {
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f\n", r.median, r.ci_low, r.ci_high);
        out += r.model + buf;
    }
    return out;
}

}  // namespace uipref::arena
