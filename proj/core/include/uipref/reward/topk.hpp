#pragma once

#include <span>
#include <string>
#include <vector>

#include "uipref/corpus/types.hpp"

namespace uipref::reward {

inline constexpr int kDefaultTopK = 8;

/// Ids of the k best-scored candidates in descending score order; equal
/// scores keep the lower batch index first. `scores[i]` belongs to
/// `batch.candidate_ids[i]`, whose batch index is i.
std::vector<std::string> topk_filter(const corpus::GenerationBatch& batch, std::span<const double> scores,
                                     int k = kDefaultTopK);

}  // namespace uipref::reward
