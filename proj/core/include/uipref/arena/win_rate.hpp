#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uipref/arena/battle.hpp"

namespace uipref::arena {

struct WinRateMatrix {
    std::vector<std::string> models;  // sorted
    /// rate[i][j] = wins of i over j / battles between them; absent without battles.
    std::vector<std::vector<std::optional<double>>> rate;
    std::vector<std::vector<std::size_t>> games;

    std::optional<double> at(const std::string& a, const std::string& b) const;
    /// Mean over present cells of the model's row; absent when none.
    std::optional<double> average(const std::string& model) const;
};

WinRateMatrix win_rate_matrix(std::span<const Battle> battles);

/// CSV with a header row of model ids; absent cells are empty.
std::string win_rate_csv(const WinRateMatrix& m);

}  // namespace uipref::arena
