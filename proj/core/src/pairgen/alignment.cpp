#include "uipref/pairgen/alignment.hpp"

#include <cmath>

#include "uipref/common/error.hpp"
#include "uipref/gateway/prompts.hpp"

namespace uipref::pairgen {

SelectionResult select_pairs(std::span<const ScoredBatch> scored, std::mt19937_64& rng, int pairs_per_description) {
    if (pairs_per_description < 1) throw ValidationError("pairs_per_description", "must be at least 1");
    SelectionResult result;
    for (std::size_t b = 0; b < scored.size(); ++b) {
        const auto& scores = scored[b].scores;
        std::vector<std::size_t> usable;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (!scores[i].failed && std::isfinite(scores[i].score)) usable.push_back(i);
        }
        if (usable.size() < 2) {
            ++result.skipped;
            continue;
        }
        std::size_t chosen = usable.front();
        for (auto i : usable) {
            const auto& c = scores[i];
            const auto& best = scores[chosen];
            if (c.score > best.score || (c.score == best.score && c.batch_index < best.batch_index)) chosen = i;
        }
        std::vector<std::size_t> rest;
        for (auto i : usable) {
            if (i != chosen) rest.push_back(i);
        }
        const auto draws = std::min(rest.size(), static_cast<std::size_t>(pairs_per_description));
        for (std::size_t d = 0; d < draws; ++d) {
            const auto pick = std::uniform_int_distribution<std::size_t>(d, rest.size() - 1)(rng);
            std::swap(rest[d], rest[pick]);
            result.selections.push_back({b, chosen, rest[d]});
        }
    }
    return result;
}

AlignmentResult build_alignment_pairs(std::span<const ScoredBatch> scored, const corpus::CorpusStore& store,
                                      std::mt19937_64& rng, int pairs_per_description) {
    const auto selection = select_pairs(scored, rng, pairs_per_description);
    AlignmentResult result;
    result.skipped = selection.skipped;
    for (const auto& s : selection.selections) {
        const auto& batch = scored[s.batch];
        const auto& chosen = batch.scores[s.chosen];
        const auto& rejected = batch.scores[s.rejected];
        AlignmentPair pair{batch.description_id,
                           gateway::generation_prompt(store.description(batch.description_id).text),
                           store.candidate_html(chosen.candidate_id),
                           store.candidate_html(rejected.candidate_id),
                           chosen.candidate_id,
                           rejected.candidate_id,
                           chosen.score,
                           rejected.score};
        if (pair.chosen == pair.rejected) {
            ++result.skipped;
            continue;
        }
        result.pairs.push_back(std::move(pair));
    }
    return result;
}

}  // namespace uipref::pairgen
