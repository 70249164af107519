#include "uipref/arena/elo.hpp"

#include <cmath>

#include "uipref/common/error.hpp"

namespace uipref::arena {

void RatingConfig::validate() const {
    if (!(initial_rating > 0)) throw ValidationError("initial_rating", "must be positive");
    if (!(scale > 0)) throw ValidationError("scale", "must be positive");
    if (!(base > 0) || base == 1.0) throw ValidationError("base", "must be positive and not 1");
    if (!(k_factor > 0)) throw ValidationError("k_factor", "must be positive");
    if (rounds < 1) throw ValidationError("rounds", "at least one bootstrap round is required");
}

double expected_score(double r_a, double r_b, const RatingConfig& cfg) {
    return 1.0 / (1.0 + std::pow(cfg.base, (r_b - r_a) / cfg.scale));
}

Ratings elo_sequence(std::span<const Battle> battles, const RatingConfig& cfg, std::span<const std::string> models) {
    Ratings ratings;
    for (const auto& m : models) ratings.emplace(m, cfg.initial_rating);
    for (const auto& b : battles) {
        ratings.emplace(b.model_a, cfg.initial_rating);
        ratings.emplace(b.model_b, cfg.initial_rating);
    }
    for (const auto& b : battles) {
        double& ra = ratings[b.model_a];
        double& rb = ratings[b.model_b];
        const double ea = expected_score(ra, rb, cfg);
        const double eb = expected_score(rb, ra, cfg);
        const double sa = b.winner == Outcome::kA ? 1.0 : 0.0;
        ra += cfg.k_factor * (sa - ea);
        rb += cfg.k_factor * (1.0 - sa - eb);
    }
    return ratings;
}

}  // namespace uipref::arena
