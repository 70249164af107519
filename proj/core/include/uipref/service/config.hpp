#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uipref/arena/elo.hpp"
#include "uipref/arena/schedule.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/gateway/backends.hpp"

namespace uipref::service {

struct ServiceConfig {
    std::filesystem::path store_root = "uipref-data";
    std::string host = "127.0.0.1";
    int port = 8080;
    std::uint64_t seed = 0;
    gateway::BackendProfile backends;
    std::vector<std::string> arena_models;
    arena::RatingConfig rating;
    arena::ScheduleMode schedule_mode = arena::ScheduleMode::kUniform;

    void validate() const;
};

/// Keys mirror the struct: {"store_root","host","port","seed",
/// "backends":{...profile fields...},"arena":{"models","k_factor","rounds",
/// "schedule"}}. Unknown keys are rejected.
ServiceConfig config_from_json(const Json& json);
Json to_json(const ServiceConfig& config);

using EnvLookup = std::function<std::optional<std::string>(const std::string& name)>;

/// UIPREF_STORE_ROOT, UIPREF_HOST, UIPREF_PORT, UIPREF_SEED,
/// UIPREF_LLM_ENDPOINT, UIPREF_LLM_MODEL, UIPREF_RENDERER_ENDPOINT,
/// UIPREF_IMAGE_ENDPOINT, UIPREF_EMBEDDING_ENDPOINT, UIPREF_SKETCH_COMMAND,
/// UIPREF_TIMEOUT_SECONDS, UIPREF_RETRY_BUDGET, UIPREF_MAX_IN_FLIGHT,
/// UIPREF_EMBEDDING_DIM, UIPREF_ARENA_MODELS (comma separated).
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env);

EnvLookup process_env();

/// File (when given) then environment, then validation.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env());

}  // namespace uipref::service
