#pragma once

#include <span>
#include <string>
#include <vector>

#include "uipref/arena/elo.hpp"

namespace uipref::arena {

struct ModelRating {
    std::string model;
    double median = 0;
    double ci_low = 0;   // 2.5th percentile
    double ci_high = 0;  // 97.5th percentile

    friend bool operator==(const ModelRating&, const ModelRating&) = default;
};

/// Linear-interpolation percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);

/// For each round: resample |battles| battles with replacement (round seed
/// derived from cfg.rng_seed), shuffle, run elo_sequence. Reports each
/// model's median and 95% interval, sorted by median descending then name.
std::vector<ModelRating> bootstrap_ratings(std::span<const Battle> battles, const RatingConfig& cfg);

/// CSV "model,median,ci_low,ci_high".
std::string ratings_csv(std::span<const ModelRating> ratings);

}  // namespace uipref::arena
