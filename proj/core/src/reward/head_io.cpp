#include "uipref/reward/head_io.hpp"

#include "uipref/common/error.hpp"

namespace uipref::reward {

namespace {
constexpr const char* kFormat = "uipref-reward-head/1";
}

Json head_to_json(const RewardHead& head, const std::optional<TrainerConfig>& config) {
    const auto d = head.dimension();
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) weights.push_back(head.weight(r, c));
    }
    Json j{{"format", kFormat},
           {"dimension", d},
           {"tau", head.tau},
           {"trained_steps", head.trained_steps},
           {"weights", std::move(weights)}};
    if (config) j["config"] = to_json(*config);
    return j;
}

RewardHead head_from_json(const Json& j) {
    if (j.value("format", std::string{}) != kFormat) {
        throw ValidationError("format", "not a reward head document");
    }
    RewardHead head;
    try {
        const int d = j.at("dimension").get<int>();
        const auto weights = j.at("weights").get<std::vector<double>>();
        if (d < 1 || weights.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
            throw ValidationError("weights", "weight count does not match dimension");
        }
        head.weight.resize(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) head.weight(r, c) = weights[static_cast<std::size_t>(r * d + c)];
        }
        head.tau = j.at("tau").get<double>();
        head.trained_steps = j.at("trained_steps").get<std::int64_t>();
    } catch (const Json::exception& e) {
        throw ValidationError("head", std::string("malformed reward head: ") + e.what());
    }
    head.validate();
    return head;
}

void save_head(const RewardHead& head, const std::filesystem::path& path, const std::optional<TrainerConfig>& config) {
    write_text_file(path, head_to_json(head, config).dump() + "\n");
}

RewardHead load_head(const std::filesystem::path& path) {
    try {
        return head_from_json(Json::parse(read_text_file(path)));
    } catch (const Json::parse_error& e) {
        throw ValidationError("head", std::string("unreadable reward head file: ") + e.what());
    }
}

}  // namespace uipref::reward
