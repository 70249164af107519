#pragma once

#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "uipref/common/jsonl.hpp"
#include "uipref/corpus/store.hpp"
#include "uipref/feedback/records.hpp"

namespace uipref::feedback {

struct Task {
    Interface interface = Interface::kRanking;
    std::string annotator_id;
    std::string description_id;
    std::string description;
    /// Two candidates for ranking, one otherwise.
    std::vector<std::string> candidate_ids;
    std::vector<std::string> screenshot_refs;
    std::optional<std::string> sketch_ref;  // revising tasks
};

Json to_json(const Task& task);

/// Serves annotation tasks drawn uniformly from the retained pool. A
/// (candidate key, annotator, interface) triple is never served twice; for
/// ranking the candidate key is the unordered candidate pair.
class TaskScheduler {
public:
    explicit TaskScheduler(const corpus::CorpusStore& store);

    /// nullopt when nothing unserved remains for this annotator and interface.
    std::optional<Task> next_task(Interface interface, const std::string& annotator_id, std::mt19937_64& rng);

    /// Marks the record's triple as used (records ingested from elsewhere).
    void mark_answered(const AnnotationRecord& record);

    std::size_t served_count() const;

private:
    using Key = std::tuple<std::string, std::string, Interface>;
    static std::string ranking_key(const std::string& a, const std::string& b);

    const corpus::CorpusStore& store_;
    mutable std::mutex mutex_;
    std::set<Key> served_;
};

}  // namespace uipref::feedback
