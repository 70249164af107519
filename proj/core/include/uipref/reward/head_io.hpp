#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "uipref/common/jsonl.hpp"
#include "uipref/reward/scorer.hpp"
#include "uipref/reward/trainer.hpp"

namespace uipref::reward {

/// {"format":"uipref-reward-head/1","dimension","tau","trained_steps",
///  "weights":[row-major],"config":{...}}. Doubles round-trip exactly.
Json head_to_json(const RewardHead& head, const std::optional<TrainerConfig>& config = {});
RewardHead head_from_json(const Json& json);

void save_head(const RewardHead& head, const std::filesystem::path& path,
               const std::optional<TrainerConfig>& config = {});
RewardHead load_head(const std::filesystem::path& path);

}  // namespace uipref::reward
