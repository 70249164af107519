#include "uipref/arena/battle.hpp"

#include <chrono>
#include <ctime>
#include <set>
#include <sstream>

#include "uipref/common/error.hpp"

namespace uipref::arena {

void Battle::validate() const {
    if (model_a.empty()) throw ValidationError("model_a", "model_a is required");
    if (model_b.empty()) throw ValidationError("model_b", "model_b is required");
    if (model_a == model_b) throw ValidationError("model_b", "a model cannot battle itself");
    if (description_id.empty()) throw ValidationError("description_id", "description_id is required");
    if (judge_id.empty()) throw ValidationError("judge_id", "judge_id is required");
}

Json to_json(const Battle& b) {
    return {{"model_a", b.model_a},   {"model_b", b.model_b},   {"description_id", b.description_id},
            {"winner", b.winner == Outcome::kA ? "a" : "b"}, {"judge_id", b.judge_id}, {"timestamp", b.timestamp}};
}

Battle battle_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("battle", "battle must be an object");
    auto str = [&](const char* name, bool required) -> std::string {
        if (!j.contains(name)) {
            if (required) throw ValidationError(name, std::string("missing field '") + name + "'");
            return {};
        }
        if (!j[name].is_string()) throw ValidationError(name, std::string("field '") + name + "' must be a string");
        return j[name].get<std::string>();
    };
    Battle b{str("model_a", true), str("model_b", true), str("description_id", true), Outcome::kA,
             str("judge_id", true), str("timestamp", false)};
    const auto winner = str("winner", true);
    if (winner == "b") {
        b.winner = Outcome::kB;
    } else if (winner != "a") {
        throw ValidationError("winner", "winner must be a or b");
    }
    b.validate();
    return b;
}

std::vector<Battle> read_battles(const std::filesystem::path& path) {
    std::vector<Battle> out;
    for (const auto& j : read_jsonl(path)) out.push_back(battle_from_json(j));
    return out;
}

void write_battles(std::span<const Battle> battles, const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& b : battles) out << to_line(to_json(b)) << '\n';
    write_text_file(path, out.str());
}

std::vector<std::string> models_in(std::span<const Battle> battles) {
    std::set<std::string> models;
    for (const auto& b : battles) {
        models.insert(b.model_a);
        models.insert(b.model_b);
    }
    return {models.begin(), models.end()};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace uipref::arena
