#include "uipref/pairgen/scoring.hpp"

#include "uipref/common/error.hpp"
#include "uipref/feedback/transforms.hpp"
#include "uipref/reward/embedding.hpp"

namespace uipref::pairgen {

std::size_t ScoredBatch::failures() const {
    std::size_t n = 0;
    for (const auto& s : scores) n += s.failed;
    return n;
}

std::vector<double> ScoredBatch::values() const {
    std::vector<double> out;
    out.reserve(scores.size());
    for (const auto& s : scores) out.push_back(s.score);
    return out;
}

ScoredBatch score_batch(const corpus::GenerationBatch& batch, const reward::RewardHead& head,
                        const reward::EmbeddingVector& v_star, const ImageEmbeddingFn& image_embedding) {
    ScoredBatch out{batch.description_id, batch.id, {}};
    out.scores.reserve(batch.candidate_ids.size());
    for (std::size_t i = 0; i < batch.candidate_ids.size(); ++i) {
        CandidateScore cs{batch.candidate_ids[i], static_cast<int>(i), kFailedScore, false, {}};
        try {
            cs.score = reward::score(image_embedding(cs.candidate_id), v_star, head);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::kConfiguration) throw;
            cs.failed = true;
            cs.score = kFailedScore;
            cs.error = e.what();
        }
        out.scores.push_back(std::move(cs));
    }
    if (out.scores.empty() || out.failures() == out.scores.size()) {
        throw Error(ErrorKind::kEmptyBatch, "no candidate of batch '" + batch.id + "' could be scored");
    }
    return out;
}

CandidateScorer::CandidateScorer(corpus::CorpusStore& store, gateway::Gateway& gateway)
    : store_(store), gateway_(gateway) {}

reward::EmbeddingVector CandidateScorer::image_embedding(const std::string& candidate_id) {
    auto c = store_.candidate(candidate_id);
    if (!c.screenshot_ref) {
        feedback::stage_and_render(store_, gateway_, candidate_id);
        c = store_.candidate(candidate_id);
    }
    {
        std::lock_guard lock(mutex_);
        if (auto it = images_.find(*c.screenshot_ref); it != images_.end()) return it->second;
    }
    auto v = gateway_.embed(gateway::EmbedKind::kImage, store_.blob(*c.screenshot_ref));
    std::lock_guard lock(mutex_);
    return images_.emplace(*c.screenshot_ref, std::move(v)).first->second;
}

reward::EmbeddingVector CandidateScorer::ref_embedding(const std::string& ref) {
    if (store_.has_candidate(ref)) return image_embedding(ref);
    {
        std::lock_guard lock(mutex_);
        if (auto it = images_.find(ref); it != images_.end()) return it->second;
    }
    auto v = gateway_.embed(gateway::EmbedKind::kImage, store_.blob(ref));
    std::lock_guard lock(mutex_);
    return images_.emplace(ref, std::move(v)).first->second;
}

reward::EmbeddingVector CandidateScorer::text_direction(const std::string& description_id) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = texts_.find(description_id); it != texts_.end()) return it->second;
    }
    auto v = reward::text_direction(gateway_, store_.description(description_id).text);
    std::lock_guard lock(mutex_);
    return texts_.emplace(description_id, std::move(v)).first->second;
}

ScoredBatch CandidateScorer::score_batch(const corpus::GenerationBatch& batch, const reward::RewardHead& head) {
    gateway_.check_head_dimension(head.dimension());
    const auto v_star = text_direction(batch.description_id);
    return pairgen::score_batch(batch, head, v_star, [this](const std::string& id) { return image_embedding(id); });
}

}  // namespace uipref::pairgen
