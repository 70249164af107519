#pragma once

#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "uipref/corpus/store.hpp"
#include "uipref/feedback/records.hpp"
#include "uipref/gateway/generation.hpp"

namespace uipref::feedback {

struct RenderedCandidate {
    std::string screenshot_ref;
    std::string geometry_ref;
    std::optional<std::string> sketch_ref;
    bool truncated = false;
    std::size_t placeholder_fallbacks = 0;
};

/// Synthesizes the page's placeholder images, stages assets, renders, and
/// records the screenshot and geometry on the candidate. With `with_sketch`
/// the page is also converted to a sketch document.
RenderedCandidate stage_and_render(corpus::CorpusStore& store, gateway::Gateway& gateway,
                                   const std::string& candidate_id, bool with_sketch = false);

struct TransformOutcome {
    std::string record_id;
    Interface interface = Interface::kRanking;
    std::optional<corpus::PreferencePair> pair;
    bool already_done = false;
    std::string error;  // set when the record was dropped
};

struct TransformReport {
    std::vector<TransformOutcome> outcomes;
    std::size_t emitted = 0;
    std::size_t skipped = 0;
    std::size_t dropped = 0;
};

/// Turns annotation records into preference pairs. Comment and sketch
/// transforms persist the revised page as a new candidate of a revision
/// batch before re-rendering it.
class FeedbackProcessor {
public:
    static constexpr const char* kJournal = "transforms";

    FeedbackProcessor(corpus::CorpusStore& store, gateway::Gateway& gateway);

    corpus::PreferencePair pairs_from_ranking(const RankingJudgment& j) const;
    corpus::PreferencePair pairs_from_comments(const CommentSet& c);
    corpus::PreferencePair pairs_from_sketch(const SketchSet& s, const htmlkit::GeometryMap& geometry);
    /// Uses the geometry recorded for the candidate's render.
    corpus::PreferencePair pairs_from_sketch(const SketchSet& s);
    corpus::PreferencePair pairs_from_revision(const RevisionRecord& r);

    /// Grounded (comment, snippet) items for a sketch set, in annotation order.
    std::vector<gateway::GroundedComment> ground(const SketchSet& s, const htmlkit::GeometryMap& geometry) const;

    /// Idempotent: a record whose pair was already emitted is skipped.
    /// Successful pairs are added to the store; failures drop the record
    /// (a later run retries it).
    TransformOutcome process(const AnnotationRecord& record);
    TransformReport process_all(std::span<const AnnotationRecord> records);

    bool done(const std::string& record_id) const;

private:
    corpus::PreferencePair pair_from_edit(const std::string& candidate_id, const std::string& revised_html,
                                          Interface interface, const std::string& annotator_id);
    corpus::UiCandidate rendered_candidate(const std::string& candidate_id) const;

    corpus::CorpusStore& store_;
    gateway::Gateway& gateway_;
    mutable std::mutex done_mutex_;
    std::unordered_set<std::string> done_;
    std::unordered_set<std::string> running_;
};

}  // namespace uipref::feedback
