#include "uipref/reward/topk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uipref/common/error.hpp"

namespace uipref::reward {

std::vector<std::string> topk_filter(const corpus::GenerationBatch& batch, std::span<const double> scores, int k) {
    if (k <= 0) throw Error(ErrorKind::kInvalidInput, "k must be positive");
    if (scores.size() != batch.candidate_ids.size()) {
        throw Error(ErrorKind::kInvalidInput, "expected one score per candidate");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto keep = std::min(order.size(), static_cast<std::size_t>(k));
    // NaN scores sort last.
    auto better = [&](std::size_t a, std::size_t b) {
        const double sa = scores[a];
        const double sb = scores[b];
        if (std::isnan(sa) != std::isnan(sb)) return std::isnan(sb);
        if (sa != sb && !std::isnan(sa)) return sa > sb;
        return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), better);
    std::vector<std::string> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(batch.candidate_ids[order[i]]);
    return out;
}

}  // namespace uipref::reward
