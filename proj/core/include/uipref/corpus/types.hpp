#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uipref::corpus {

enum class Split { kTrain, kEval };

/// Which feedback interaction (or the reward module's augmentation) produced
/// a preference pair.
enum class Provenance { kRanking, kCommenting, kSketching, kRevising, kSynthetic };

inline constexpr std::array<Provenance, 5> kAllProvenances = {
    Provenance::kRanking, Provenance::kCommenting, Provenance::kSketching, Provenance::kRevising,
    Provenance::kSynthetic};

std::string_view to_string(Split split);
Split parse_split(std::string_view text);
std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

struct UiDescription {
    std::string id;
    std::string text;
    Split split = Split::kTrain;

    friend bool operator==(const UiDescription&, const UiDescription&) = default;
};

enum class BatchKind { kGeneration, kRevision };

struct UiCandidate {
    std::string id;
    std::string description_id;
    std::string batch_id;
    int batch_index = 0;
    std::string html_ref;
    std::optional<std::string> screenshot_ref;
    std::optional<std::string> geometry_ref;
    std::optional<std::string> sketch_ref;
    std::optional<double> score;

    friend bool operator==(const UiCandidate&, const UiCandidate&) = default;
};

struct GenerationBatch {
    std::string id;
    std::string description_id;
    BatchKind kind = BatchKind::kGeneration;
    std::uint64_t sampler_seed = 0;
    std::vector<std::string> candidate_ids;
    std::vector<std::string> retained_ids;
};

/// (description, chosen, rejected) triplet plus the interface that produced it.
/// Refs are blob content hashes of images (screenshots or sketch previews) or
/// candidate ids.
struct PreferencePair {
    std::string description_id;
    std::string chosen_ref;
    std::string rejected_ref;
    Provenance provenance = Provenance::kRanking;
    std::string annotator_id;

    friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

class PreferenceDataset {
public:
    PreferenceDataset() = default;
    explicit PreferenceDataset(std::vector<PreferencePair> pairs);

    /// Rejects pairs with chosen_ref == rejected_ref.
    void add(PreferencePair pair);

    const std::vector<PreferencePair>& pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    std::size_t count(Provenance p) const noexcept { return counts_[static_cast<std::size_t>(p)]; }

    friend bool operator==(const PreferenceDataset& a, const PreferenceDataset& b) {
        return a.pairs_ == b.pairs_;
    }

private:
    std::vector<PreferencePair> pairs_;
    std::array<std::size_t, kAllProvenances.size()> counts_{};
};

}  // namespace uipref::corpus
