#pragma once

#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "uipref/corpus/store.hpp"
#include "uipref/gateway/generation.hpp"
#include "uipref/reward/scorer.hpp"

namespace uipref::pairgen {

inline constexpr double kFailedScore = -std::numeric_limits<double>::infinity();

struct CandidateScore {
    std::string candidate_id;
    int batch_index = 0;
    double score = kFailedScore;
    bool failed = false;
    std::string error;
};

struct ScoredBatch {
    std::string description_id;
    std::string batch_id;
    std::vector<CandidateScore> scores;  // batch order

    std::size_t failures() const;
    std::vector<double> values() const;
};

using ImageEmbeddingFn = std::function<reward::EmbeddingVector(const std::string& candidate_id)>;

/// Scores every candidate through `image_embedding`; a candidate whose
/// embedding or score throws gets the -inf sentinel and is flagged. Throws
/// an empty-batch error when every candidate fails.
ScoredBatch score_batch(const corpus::GenerationBatch& batch, const reward::RewardHead& head,
                        const reward::EmbeddingVector& v_star, const ImageEmbeddingFn& image_embedding);

/// Store-backed scorer: renders candidates that have no screenshot yet,
/// embeds screenshots and descriptions once, and caches both.
class CandidateScorer {
public:
    CandidateScorer(corpus::CorpusStore& store, gateway::Gateway& gateway);

    reward::EmbeddingVector image_embedding(const std::string& candidate_id);
    /// Embedding of a stored image blob, or of a candidate's screenshot when
    /// `ref` is a candidate id.
    reward::EmbeddingVector ref_embedding(const std::string& ref);
    reward::EmbeddingVector text_direction(const std::string& description_id);

    ScoredBatch score_batch(const corpus::GenerationBatch& batch, const reward::RewardHead& head);

private:
    corpus::CorpusStore& store_;
    gateway::Gateway& gateway_;
    std::mutex mutex_;
    std::map<std::string, reward::EmbeddingVector> images_;  // by screenshot hash
    std::map<std::string, reward::EmbeddingVector> texts_;   // by description id
};

}  // namespace uipref::pairgen
