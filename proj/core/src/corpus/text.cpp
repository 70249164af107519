#include "uipref/corpus/text.hpp"

#include <cctype>

namespace uipref::corpus {

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

DescriptionSet::DescriptionSet(std::span<const std::string> texts) { merge(texts); }

bool DescriptionSet::insert(std::string_view text) {
    auto key = normalize_text(text);
    if (key.empty()) return false;
    if (!keys_.insert(std::move(key)).second) return false;
    texts_.emplace_back(text);
    return true;
}

std::size_t DescriptionSet::merge(std::span<const std::string> incoming) {
    std::size_t added = 0;
    for (const auto& t : incoming) {
        if (insert(t)) ++added;
    }
    return added;
}

bool DescriptionSet::contains(std::string_view text) const {
    return keys_.count(normalize_text(text)) > 0;
}

MergeResult dedup_merge(std::span<const std::string> existing, std::span<const std::string> incoming) {
    DescriptionSet set(existing);
    MergeResult result;
    result.accepted = set.merge(incoming);
    result.merged = set.texts();
    return result;
}

OverlapReport split_guard(std::span<const std::string> train, std::span<const std::string> eval) {
    std::unordered_set<std::string> train_keys;
    for (const auto& t : train) train_keys.insert(normalize_text(t));
    OverlapReport report;
    for (const auto& e : eval) {
        if (train_keys.count(normalize_text(e))) report.exact_overlaps.push_back(e);
    }
    return report;
}

}  // namespace uipref::corpus
