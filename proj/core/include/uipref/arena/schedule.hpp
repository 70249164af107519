#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "uipref/arena/battle.hpp"
#include "uipref/common/jsonl.hpp"

namespace uipref::arena {

/// kUniform draws an unordered model pair uniformly; kBalanced draws among
/// the pairs with the fewest battles so far.
enum class ScheduleMode { kUniform, kBalanced };

struct Match {
    std::string match_id;
    std::string model_left;
    std::string model_right;
    std::string description_id;
};

/// What a judge sees: never the model identities.
struct JudgePayload {
    std::string match_id;
    std::string description_id;
    std::string description;
    std::string left_ref;
    std::string right_ref;
};

Json to_json(const JudgePayload& p);

/// Number of unordered model pairs.
std::size_t pairing_count(std::size_t models);

Match schedule_match(std::span<const std::string> models, std::span<const std::string> descriptions,
                     std::span<const Battle> history, std::mt19937_64& rng,
                     ScheduleMode mode = ScheduleMode::kUniform);

/// Battle for a judged match; `left_won` picks the left-hand model.
Battle resolve_match(const Match& match, bool left_won, const std::string& judge_id);

}  // namespace uipref::arena
