#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "uipref/common/jsonl.hpp"

namespace uipref::arena {

enum class Outcome { kA, kB };

struct Battle {
    std::string model_a;
    std::string model_b;
    std::string description_id;
    Outcome winner = Outcome::kA;
    std::string judge_id;
    std::string timestamp;  // ISO-8601, informational

    const std::string& winner_model() const { return winner == Outcome::kA ? model_a : model_b; }
    const std::string& loser_model() const { return winner == Outcome::kA ? model_b : model_a; }

    void validate() const;
    friend bool operator==(const Battle&, const Battle&) = default;
};

/// {model_a, model_b, description_id, winner: "a"|"b", judge_id, timestamp}
Json to_json(const Battle& b);
Battle battle_from_json(const Json& j);

std::vector<Battle> read_battles(const std::filesystem::path& path);
void write_battles(std::span<const Battle> battles, const std::filesystem::path& path);

/// Sorted distinct model ids appearing in the log.
std::vector<std::string> models_in(std::span<const Battle> battles);

std::string utc_timestamp();

}  // namespace uipref::arena
