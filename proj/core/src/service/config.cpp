#include "uipref/service/config.hpp"

#include <cstdlib>
#include <set>

#include "uipref/common/error.hpp"

namespace uipref::service {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& scope) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ValidationError(scope + key, "unknown configuration key");
    }
}

template <class T>
void read(const Json& j, const char* key, T& out, const std::string& scope) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ValidationError(scope + key, "configuration value has the wrong type");
    }
}

template <class T>
T parse_number(const std::string& name, const std::string& text) {
    try {
        std::size_t used = 0;
        T value{};
        if constexpr (std::is_floating_point_v<T>) {
            value = static_cast<T>(std::stod(text, &used));
        } else if constexpr (std::is_unsigned_v<T>) {
            value = static_cast<T>(std::stoull(text, &used));
        } else {
            value = static_cast<T>(std::stoll(text, &used));
        }
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ValidationError(name, "cannot parse '" + text + "'");
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        auto item = text.substr(start, comma - start);
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
        start = comma + 1;
    }
    return out;
}

}  // namespace

void ServiceConfig::validate() const {
    if (port < 0 || port > 65535) throw ValidationError("port", "port must be in [0, 65535]");
    if (store_root.empty()) throw ValidationError("store_root", "store_root is required");
    backends.validate();
    rating.validate();
}

ServiceConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("config", "configuration must be a JSON object");
    reject_unknown(j, {"store_root", "host", "port", "seed", "backends", "arena"}, "");
    ServiceConfig c;
    std::string root = c.store_root.string();
    read(j, "store_root", root, "");
    c.store_root = root;
    read(j, "host", c.host, "");
    read(j, "port", c.port, "");
    read(j, "seed", c.seed, "");
    if (j.contains("backends")) {
        const auto& b = j["backends"];
        reject_unknown(b,
                       {"renderer_endpoint", "llm_endpoint", "llm_model", "image_endpoint", "sketch_command",
                        "embedding_endpoint", "timeout_seconds", "retry_budget", "max_in_flight", "embedding_dim",
                        "max_output_tokens", "viewport", "library_dir", "stub_seed"},
                       "backends.");
        auto& p = c.backends;
        read(b, "renderer_endpoint", p.renderer_endpoint, "backends.");
        read(b, "llm_endpoint", p.llm_endpoint, "backends.");
        read(b, "llm_model", p.llm_model, "backends.");
        read(b, "image_endpoint", p.image_endpoint, "backends.");
        read(b, "sketch_command", p.sketch_command, "backends.");
        read(b, "embedding_endpoint", p.embedding_endpoint, "backends.");
        read(b, "timeout_seconds", p.timeout_seconds, "backends.");
        read(b, "retry_budget", p.retry_budget, "backends.");
        read(b, "max_in_flight", p.max_in_flight, "backends.");
        read(b, "embedding_dim", p.embedding_dim, "backends.");
        read(b, "max_output_tokens", p.max_output_tokens, "backends.");
        read(b, "stub_seed", p.stub_seed, "backends.");
        std::string lib;
        read(b, "library_dir", lib, "backends.");
        p.library_dir = lib;
        if (b.contains("viewport")) {
            read(b["viewport"], "width", p.viewport.width, "backends.viewport.");
            read(b["viewport"], "height", p.viewport.height, "backends.viewport.");
        }
    }
    if (j.contains("arena")) {
        const auto& a = j["arena"];
        reject_unknown(a, {"models", "k_factor", "rounds", "initial_rating", "scale", "base", "schedule"}, "arena.");
        read(a, "models", c.arena_models, "arena.");
        read(a, "k_factor", c.rating.k_factor, "arena.");
        read(a, "rounds", c.rating.rounds, "arena.");
        read(a, "initial_rating", c.rating.initial_rating, "arena.");
        read(a, "scale", c.rating.scale, "arena.");
        read(a, "base", c.rating.base, "arena.");
        std::string mode = "uniform";
        read(a, "schedule", mode, "arena.");
        if (mode == "balanced") {
            c.schedule_mode = arena::ScheduleMode::kBalanced;
        } else if (mode != "uniform") {
            throw ValidationError("arena.schedule", "schedule must be uniform or balanced");
        }
    }
    c.rating.rng_seed = c.seed;
    return c;
}

Json to_json(const ServiceConfig& c) {
    const auto& p = c.backends;
    return {{"store_root", c.store_root.string()},
            {"host", c.host},
            {"port", c.port},
            {"seed", c.seed},
            {"backends",
             {{"renderer_endpoint", p.renderer_endpoint},
              {"llm_endpoint", p.llm_endpoint},
              {"llm_model", p.llm_model},
              {"image_endpoint", p.image_endpoint},
              {"sketch_command", p.sketch_command},
              {"embedding_endpoint", p.embedding_endpoint},
              {"timeout_seconds", p.timeout_seconds},
              {"retry_budget", p.retry_budget},
              {"max_in_flight", p.max_in_flight},
              {"embedding_dim", p.embedding_dim},
              {"max_output_tokens", p.max_output_tokens},
              {"viewport", {{"width", p.viewport.width}, {"height", p.viewport.height}}},
              {"library_dir", p.library_dir.string()},
              {"stub_seed", p.stub_seed}}},
            {"arena",
             {{"models", c.arena_models},
              {"k_factor", c.rating.k_factor},
              {"rounds", c.rating.rounds},
              {"initial_rating", c.rating.initial_rating},
              {"scale", c.rating.scale},
              {"base", c.rating.base},
              {"schedule", c.schedule_mode == arena::ScheduleMode::kUniform ? "uniform" : "balanced"}}}};
}

void apply_env_overrides(ServiceConfig& c, const EnvLookup& env) {
    auto& p = c.backends;
    if (auto v = env("UIPREF_STORE_ROOT")) c.store_root = *v;
    if (auto v = env("UIPREF_HOST")) c.host = *v;
    if (auto v = env("UIPREF_PORT")) c.port = parse_number<int>("UIPREF_PORT", *v);
    if (auto v = env("UIPREF_SEED")) c.seed = parse_number<std::uint64_t>("UIPREF_SEED", *v);
    if (auto v = env("UIPREF_LLM_ENDPOINT")) p.llm_endpoint = *v;
    if (auto v = env("UIPREF_LLM_MODEL")) p.llm_model = *v;
    if (auto v = env("UIPREF_RENDERER_ENDPOINT")) p.renderer_endpoint = *v;
    if (auto v = env("UIPREF_IMAGE_ENDPOINT")) p.image_endpoint = *v;
    if (auto v = env("UIPREF_EMBEDDING_ENDPOINT")) p.embedding_endpoint = *v;
    if (auto v = env("UIPREF_SKETCH_COMMAND")) p.sketch_command = *v;
    if (auto v = env("UIPREF_TIMEOUT_SECONDS")) p.timeout_seconds = parse_number<double>("UIPREF_TIMEOUT_SECONDS", *v);
    if (auto v = env("UIPREF_RETRY_BUDGET")) p.retry_budget = parse_number<int>("UIPREF_RETRY_BUDGET", *v);
    if (auto v = env("UIPREF_MAX_IN_FLIGHT")) p.max_in_flight = parse_number<int>("UIPREF_MAX_IN_FLIGHT", *v);
    if (auto v = env("UIPREF_EMBEDDING_DIM")) p.embedding_dim = parse_number<int>("UIPREF_EMBEDDING_DIM", *v);
    if (auto v = env("UIPREF_ARENA_MODELS")) c.arena_models = split_list(*v);
    c.rating.rng_seed = c.seed;
}

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
    ServiceConfig c;
    if (file) {
        try {
            c = config_from_json(Json::parse(read_text_file(*file)));
        } catch (const Json::parse_error& e) {
            throw ValidationError("config", "unreadable configuration file: " + std::string(e.what()));
        }
    }
    if (env) apply_env_overrides(c, env);
    c.validate();
    return c;
}

}  // namespace uipref::service
