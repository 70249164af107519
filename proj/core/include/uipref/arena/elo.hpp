#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "uipref/arena/battle.hpp"

namespace uipref::arena {

struct RatingConfig {
    double initial_rating = 1000.0;
    double scale = 400.0;
    double base = 10.0;
    double k_factor = 4.0;
    int rounds = 1000;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

using Ratings = std::map<std::string, double>;

/// Online Elo in log order. Every model in `models` (plus any model in the
/// log) starts at the initial rating.
Ratings elo_sequence(std::span<const Battle> battles, const RatingConfig& cfg,
                     std::span<const std::string> models = {});

/// Expected score of a against b.
double expected_score(double r_a, double r_b, const RatingConfig& cfg);

}  // namespace uipref::arena
