#include "uipref/feedback/tasks.hpp"

#include <map>

#include "uipref/common/error.hpp"

namespace uipref::feedback {

Json to_json(const Task& task) {
    Json j{{"interface", to_string(task.interface)},
           {"annotator_id", task.annotator_id},
           {"description_id", task.description_id},
           {"description", task.description},
           {"candidate_ids", task.candidate_ids},
           {"screenshot_refs", task.screenshot_refs}};
    if (task.sketch_ref) j["sketch_ref"] = *task.sketch_ref;
    return j;
}

TaskScheduler::TaskScheduler(const corpus::CorpusStore& store) : store_(store) {}

std::string TaskScheduler::ranking_key(const std::string& a, const std::string& b) {
    return a < b ? a + "|" + b : b + "|" + a;
}

std::optional<Task> TaskScheduler::next_task(Interface interface, const std::string& annotator_id,
                                             std::mt19937_64& rng) {
    if (annotator_id.empty()) throw ValidationError("annotator_id", "annotator_id is required");
    const auto pool = store_.retained_pool();

    std::lock_guard lock(mutex_);
    Task task;
    task.interface = interface;
    task.annotator_id = annotator_id;

    if (interface == Interface::kRanking) {
        std::map<std::string, std::vector<const corpus::UiCandidate*>> by_description;
        for (const auto& c : pool) {
            if (c.screenshot_ref) by_description[c.description_id].push_back(&c);
        }
        std::vector<std::pair<const corpus::UiCandidate*, const corpus::UiCandidate*>> options;
        for (const auto& [desc, cands] : by_description) {
            for (std::size_t i = 0; i < cands.size(); ++i) {
                for (std::size_t j = i + 1; j < cands.size(); ++j) {
                    if (!served_.count({ranking_key(cands[i]->id, cands[j]->id), annotator_id, interface})) {
                        options.emplace_back(cands[i], cands[j]);
                    }
                }
            }
        }
        if (options.empty()) return std::nullopt;
        auto [a, b] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        if (std::bernoulli_distribution(0.5)(rng)) std::swap(a, b);  // side placement
        served_.insert({ranking_key(a->id, b->id), annotator_id, interface});
        task.description_id = a->description_id;
        task.candidate_ids = {a->id, b->id};
        task.screenshot_refs = {*a->screenshot_ref, *b->screenshot_ref};
    } else {
        std::vector<const corpus::UiCandidate*> options;
        for (const auto& c : pool) {
            const bool ready = interface == Interface::kRevising ? c.sketch_ref.has_value()
                                                                 : c.screenshot_ref.has_value();
            if (ready && !served_.count({c.id, annotator_id, interface})) options.push_back(&c);
        }
        if (options.empty()) return std::nullopt;
        const auto* c = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        served_.insert({c->id, annotator_id, interface});
        task.description_id = c->description_id;
        task.candidate_ids = {c->id};
        if (c->screenshot_ref) task.screenshot_refs = {*c->screenshot_ref};
        task.sketch_ref = c->sketch_ref;
    }
    task.description = store_.description(task.description_id).text;
    return task;
}

void TaskScheduler::mark_answered(const AnnotationRecord& record) {
    std::lock_guard lock(mutex_);
    if (const auto* r = std::get_if<RankingJudgment>(&record.body)) {
        served_.insert({ranking_key(r->left_candidate, r->right_candidate), r->annotator_id, Interface::kRanking});
        return;
    }
    std::visit(
        [&](const auto& r) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(r)>, RankingJudgment>) {
                served_.insert({r.candidate_id, r.annotator_id, record.interface()});
            }
        },
        record.body);
}

std::size_t TaskScheduler::served_count() const {
    std::lock_guard lock(mutex_);
    return served_.size();
}

}  // namespace uipref::feedback
