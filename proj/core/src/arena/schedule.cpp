#include "uipref/arena/schedule.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "uipref/common/error.hpp"

namespace uipref::arena {

Json to_json(const JudgePayload& p) {
    return {{"match_id", p.match_id},
            {"description_id", p.description_id},
            {"description", p.description},
            {"left", p.left_ref},
            {"right", p.right_ref}};
}

std::size_t pairing_count(std::size_t models) { return models < 2 ? 0 : models * (models - 1) / 2; }

Match schedule_match(std::span<const std::string> models, std::span<const std::string> descriptions,
                     std::span<const Battle> history, std::mt19937_64& rng, ScheduleMode mode) {
    const std::set<std::string> distinct(models.begin(), models.end());
    if (distinct.size() < 2) throw Error(ErrorKind::kConfiguration, "an arena needs at least two models");
    if (descriptions.empty()) throw Error(ErrorKind::kConfiguration, "an arena needs at least one description");
    const std::vector<std::string> pool(distinct.begin(), distinct.end());

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) pairs.emplace_back(i, j);
    }
    if (mode == ScheduleMode::kBalanced) {
        std::map<std::pair<std::string, std::string>, std::size_t> counts;
        for (const auto& b : history) {
            counts[std::minmax(b.model_a, b.model_b)]++;
        }
        auto count_of = [&](const std::pair<std::size_t, std::size_t>& p) {
            const auto it = counts.find({pool[p.first], pool[p.second]});
            return it == counts.end() ? std::size_t{0} : it->second;
        };
        std::size_t least = count_of(pairs.front());
        for (const auto& p : pairs) least = std::min(least, count_of(p));
        std::erase_if(pairs, [&](const auto& p) { return count_of(p) != least; });
    }

    const auto [i, j] = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
    const auto& description = descriptions[std::uniform_int_distribution<std::size_t>(0, descriptions.size() - 1)(rng)];
    const bool swap_sides = std::bernoulli_distribution(0.5)(rng);
    char id[24];
    std::snprintf(id, sizeof id, "match-%016llx", static_cast<unsigned long long>(rng()));
    return {id, swap_sides ? pool[j] : pool[i], swap_sides ? pool[i] : pool[j], description};
}

Battle resolve_match(const Match& match, bool left_won, const std::string& judge_id) {
    Battle b{match.model_left, match.model_right, match.description_id, left_won ? Outcome::kA : Outcome::kB,
             judge_id, utc_timestamp()};
    b.validate();
    return b;
}

}  // namespace uipref::arena
