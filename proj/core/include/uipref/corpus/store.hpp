#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uipref/common/jsonl.hpp"
#include "uipref/corpus/types.hpp"

namespace uipref::corpus {

/// Content-addressed blob store plus an append-only manifest of typed records.
///
/// Mutations are serialized through a single writer lock; readers take a
/// shared lock and always see a consistent snapshot. A store constructed
/// without a root lives in memory only (tests, dry runs).
class CorpusStore {
public:
    CorpusStore();
    explicit CorpusStore(std::filesystem::path root);

    CorpusStore(const CorpusStore&) = delete;
    CorpusStore& operator=(const CorpusStore&) = delete;

    const std::optional<std::filesystem::path>& root() const noexcept { return root_; }

    // Descriptions -----------------------------------------------------------
    std::string add_description(std::string_view text, Split split = Split::kTrain);
    UiDescription description(const std::string& id) const;
    bool has_description(const std::string& id) const;
    std::optional<std::string> find_description(std::string_view text) const;
    std::vector<UiDescription> descriptions() const;

    // Blobs ------------------------------------------------------------------
    std::string put_blob(std::string_view bytes);
    std::string blob(const std::string& hash) const;
    bool has_blob(const std::string& hash) const;
    std::size_t blob_count() const;

    /// Records that an image blob depicts a UI for the description.
    std::string put_image(const std::string& description_id, std::string_view png_bytes);
    bool image_belongs_to(const std::string& hash, const std::string& description_id) const;

    // Batches and candidates -------------------------------------------------
    std::string begin_batch(const std::string& description_id, std::uint64_t sampler_seed,
                            BatchKind kind = BatchKind::kGeneration);
    std::string put_candidate(const std::string& batch_id, std::string_view html);
    void set_render(const std::string& candidate_id, const std::string& screenshot_ref,
                    const std::string& geometry_ref);
    void set_sketch(const std::string& candidate_id, const std::string& sketch_ref);
    void set_score(const std::string& candidate_id, double score);
    void set_retained(const std::string& batch_id, std::vector<std::string> retained_ids);

    UiCandidate candidate(const std::string& id) const;
    bool has_candidate(const std::string& id) const;
    std::string candidate_html(const std::string& id) const;
    GenerationBatch batch(const std::string& id) const;
    std::vector<GenerationBatch> batches() const;
    std::vector<GenerationBatch> batches_for(const std::string& description_id) const;
    /// Retained candidates of generation batches (the annotation pool).
    std::vector<UiCandidate> retained_pool() const;

    // Preferences ------------------------------------------------------------
    /// Validates the pair (refs resolve, distinct, same description) and appends it.
    void add_preference(const PreferencePair& pair);
    PreferenceDataset preferences() const;
    /// Throws an integrity error naming the pair when it does not resolve.
    void check_pair(const PreferencePair& pair) const;

    // Journals ---------------------------------------------------------------
    /// Append-only named channels for records owned by other modules
    /// (annotations, battles, completed transforms, jobs).
    void append_journal(const std::string& channel, const Json& record);
    std::vector<Json> journal(const std::string& channel) const;
    std::size_t journal_size(const std::string& channel) const;

private:
    void replay();
    void apply(const Json& record);
    void persist(const Json& record);
    std::string next_id(std::string_view prefix, std::string_view content);
    std::filesystem::path blob_path(const std::string& hash) const;
    bool ref_resolves(const std::string& ref) const;
    bool ref_belongs_to(const std::string& ref, const std::string& description_id) const;
    UiCandidate& candidate_mut(const std::string& id);

    std::optional<std::filesystem::path> root_;
    std::optional<JsonlAppender> manifest_;
    mutable std::shared_mutex mutex_;
    std::uint64_t counter_ = 0;

    std::vector<UiDescription> descriptions_;
    std::unordered_map<std::string, std::size_t> description_index_;
    std::unordered_map<std::string, std::string> description_by_key_;

    std::unordered_map<std::string, std::string> memory_blobs_;
    std::set<std::string> blob_hashes_;
    std::unordered_map<std::string, std::set<std::string>> image_owners_;

    std::map<std::string, GenerationBatch> batches_;
    std::vector<std::string> batch_order_;
    std::unordered_map<std::string, UiCandidate> candidates_;

    PreferenceDataset preferences_;
    std::map<std::string, std::vector<Json>, std::less<>> journals_;
};

}  // namespace uipref::corpus
