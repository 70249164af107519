#include "uipref/feedback/transforms.hpp"

#include <map>

#include "uipref/common/error.hpp"
#include "uipref/common/hash.hpp"
#include "uipref/htmlkit/grounding.hpp"
#include "uipref/htmlkit/images.hpp"
#include "uipref/htmlkit/staging.hpp"

namespace uipref::feedback {

RenderedCandidate stage_and_render(corpus::CorpusStore& store, gateway::Gateway& gateway,
                                   const std::string& candidate_id, bool with_sketch) {
    const auto candidate = store.candidate(candidate_id);
    const auto html = store.candidate_html(candidate_id);

    RenderedCandidate out;
    std::map<std::string, std::string> placeholders;
    for (const auto& image : htmlkit::extract_images(html)) {
        if (placeholders.count(image.placeholder_prompt) || image.placeholder_prompt.empty()) continue;
        auto synthesized = gateway.synthesize_placeholder(image.placeholder_prompt);
        out.placeholder_fallbacks += synthesized.fallback;
        placeholders[image.placeholder_prompt] = store.put_blob(synthesized.png);
    }
    const auto manifest = htmlkit::stage_assets(html, placeholders);
    const auto result = gateway.render(manifest);
    out.screenshot_ref = store.put_image(candidate.description_id, result.screenshot);
    out.geometry_ref = store.put_blob(htmlkit::write_geometry(result.geometry));
    out.truncated = result.truncated;
    store.set_render(candidate_id, out.screenshot_ref, out.geometry_ref);
    if (with_sketch) {
        out.sketch_ref = store.put_blob(gateway.to_sketch(manifest.html, result.geometry));
        store.set_sketch(candidate_id, *out.sketch_ref);
    }
    return out;
}

FeedbackProcessor::FeedbackProcessor(corpus::CorpusStore& store, gateway::Gateway& gateway)
    : store_(store), gateway_(gateway) {
    for (const auto& entry : store_.journal(kJournal)) {
        if (entry.value("status", std::string{}) == "emitted") done_.insert(entry.value("record_id", std::string{}));
    }
}

corpus::UiCandidate FeedbackProcessor::rendered_candidate(const std::string& candidate_id) const {
    auto c = store_.candidate(candidate_id);
    if (!c.screenshot_ref || !c.geometry_ref) {
        throw Error(ErrorKind::kTransform, "candidate '" + candidate_id + "' has no render artifacts");
    }
    return c;
}

corpus::PreferencePair FeedbackProcessor::pairs_from_ranking(const RankingJudgment& j) const {
    j.validate();
    const auto left = store_.candidate(j.left_candidate);
    const auto right = store_.candidate(j.right_candidate);
    if (left.description_id != j.description_id || right.description_id != j.description_id) {
        throw ValidationError("description_id", "ranked candidates must both belong to the judged description");
    }
    if (!left.screenshot_ref || !right.screenshot_ref) {
        throw ValidationError("left_candidate", "ranked candidates must have screenshots");
    }
    const bool left_wins = j.winner == Winner::kLeft;
    return {j.description_id, left_wins ? *left.screenshot_ref : *right.screenshot_ref,
            left_wins ? *right.screenshot_ref : *left.screenshot_ref, corpus::Provenance::kRanking, j.annotator_id};
}

corpus::PreferencePair FeedbackProcessor::pair_from_edit(const std::string& candidate_id,
                                                         const std::string& revised_html, Interface interface,
                                                         const std::string& annotator_id) {
    const auto original = store_.candidate(candidate_id);
    try {
        const auto batch = store_.begin_batch(original.description_id, fnv1a64(revised_html), corpus::BatchKind::kRevision);
        const auto revised_id = store_.put_candidate(batch, revised_html);
        const auto rendered = stage_and_render(store_, gateway_, revised_id);
        corpus::PreferencePair pair{original.description_id, rendered.screenshot_ref, *original.screenshot_ref,
                                    provenance_of(interface), annotator_id};
        store_.check_pair(pair);
        return pair;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::kTransform) throw;
        throw Error(ErrorKind::kTransform, std::string(to_string(interface)) + " transform failed: " + e.what());
    }
}

corpus::PreferencePair FeedbackProcessor::pairs_from_comments(const CommentSet& c) {
    c.validate();
    const auto original = rendered_candidate(c.candidate_id);
    std::string revised;
    try {
        revised = gateway_.improve_with_comments(store_.candidate_html(c.candidate_id), c.comments);
    } catch (const Error& e) {
        throw Error(ErrorKind::kTransform, std::string("comment edit failed: ") + e.what());
    }
    return pair_from_edit(original.id, revised, Interface::kCommenting, c.annotator_id);
}

std::vector<gateway::GroundedComment> FeedbackProcessor::ground(const SketchSet& s,
                                                                const htmlkit::GeometryMap& geometry) const {
    const auto doc = htmlkit::Document::parse(store_.candidate_html(s.candidate_id));
    std::vector<gateway::GroundedComment> grounded;
    grounded.reserve(s.items.size());
    for (const auto& item : s.items) {
        const auto box = htmlkit::match_annotation(item.region.to_css(s.scale_factor), geometry);
        grounded.push_back({item.comment, htmlkit::snippet(box, doc)});
    }
    return grounded;
}

corpus::PreferencePair FeedbackProcessor::pairs_from_sketch(const SketchSet& s, const htmlkit::GeometryMap& geometry) {
    s.validate();
    const auto original = rendered_candidate(s.candidate_id);
    std::string revised;
    try {
        const auto grounded = ground(s, geometry);
        revised = gateway_.improve_with_regions(store_.candidate_html(s.candidate_id), grounded);
    } catch (const Error& e) {
        throw Error(ErrorKind::kTransform, std::string("region edit failed: ") + e.what());
    }
    return pair_from_edit(original.id, revised, Interface::kSketching, s.annotator_id);
}

corpus::PreferencePair FeedbackProcessor::pairs_from_sketch(const SketchSet& s) {
    const auto original = rendered_candidate(s.candidate_id);
    return pairs_from_sketch(s, htmlkit::parse_geometry(store_.blob(*original.geometry_ref)));
}

corpus::PreferencePair FeedbackProcessor::pairs_from_revision(const RevisionRecord& r) {
    r.validate();
    const auto candidate = store_.candidate(r.candidate_id);
    try {
        const auto rejected = gateway_.preview(store_.blob(r.original_sketch_ref));
        const auto chosen = gateway_.preview(store_.blob(r.revised_sketch_ref));
        corpus::PreferencePair pair{candidate.description_id, store_.put_image(candidate.description_id, chosen),
                                    store_.put_image(candidate.description_id, rejected),
                                    corpus::Provenance::kRevising, r.annotator_id};
        store_.check_pair(pair);
        return pair;
    } catch (const Error& e) {
        throw Error(ErrorKind::kTransform, std::string("revision preview failed: ") + e.what());
    }
}

bool FeedbackProcessor::done(const std::string& record_id) const {
    std::lock_guard lock(done_mutex_);
    return done_.count(record_id) > 0;
}

TransformOutcome FeedbackProcessor::process(const AnnotationRecord& record) {
    TransformOutcome outcome{record.record_id, record.interface(), std::nullopt, false, {}};
    {
        std::lock_guard lock(done_mutex_);
        if (done_.count(record.record_id) || !running_.insert(record.record_id).second) {
            outcome.already_done = true;
            return outcome;
        }
    }
    try {
        corpus::PreferencePair pair;
        if (const auto* j = std::get_if<RankingJudgment>(&record.body)) {
            pair = pairs_from_ranking(*j);
        } else if (const auto* c = std::get_if<CommentSet>(&record.body)) {
            pair = pairs_from_comments(*c);
        } else if (const auto* s = std::get_if<SketchSet>(&record.body)) {
            pair = pairs_from_sketch(*s);
        } else {
            pair = pairs_from_revision(std::get<RevisionRecord>(record.body));
        }
        store_.add_preference(pair);
        outcome.pair = pair;
        store_.append_journal(kJournal, {{"record_id", record.record_id}, {"status", "emitted"}});
        std::lock_guard lock(done_mutex_);
        done_.insert(record.record_id);
    } catch (const Error& e) {
        outcome.error = e.what();
        store_.append_journal(kJournal, {{"record_id", record.record_id}, {"status", "dropped"}, {"error", e.what()}});
    }
    std::lock_guard lock(done_mutex_);
    running_.erase(record.record_id);
    return outcome;
}

TransformReport FeedbackProcessor::process_all(std::span<const AnnotationRecord> records) {
    TransformReport report;
    for (const auto& r : records) {
        auto outcome = process(r);
        if (outcome.already_done) {
            ++report.skipped;
        } else if (outcome.pair) {
            ++report.emitted;
        } else {
            ++report.dropped;
        }
        report.outcomes.push_back(std::move(outcome));
    }
    return report;
}

}  // namespace uipref::feedback
