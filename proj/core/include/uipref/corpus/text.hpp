#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace uipref::corpus {

/// Lowercase (ASCII), collapse internal whitespace runs to one space, trim.
std::string normalize_text(std::string_view text);

/// Insertion-ordered set of description texts, unique under normalize_text.
class DescriptionSet {
public:
    DescriptionSet() = default;
    explicit DescriptionSet(std::span<const std::string> texts);

    /// Adds texts whose normalized form is new; returns how many were added.
    std::size_t merge(std::span<const std::string> incoming);
    bool insert(std::string_view text);
    bool contains(std::string_view text) const;

    std::size_t size() const noexcept { return texts_.size(); }
    const std::vector<std::string>& texts() const noexcept { return texts_; }

private:
    std::vector<std::string> texts_;
    std::unordered_set<std::string> keys_;
};

struct MergeResult {
    std::vector<std::string> merged;
    std::size_t accepted = 0;
};

MergeResult dedup_merge(std::span<const std::string> existing, std::span<const std::string> incoming);

struct OverlapReport {
    std::vector<std::string> exact_overlaps;

    bool empty() const noexcept { return exact_overlaps.empty(); }
};

/// Exact (normalized) overlap of eval texts with train texts. Semantic
/// near-duplicates are intentionally not flagged.
OverlapReport split_guard(std::span<const std::string> train, std::span<const std::string> eval);

}  // namespace uipref::corpus
