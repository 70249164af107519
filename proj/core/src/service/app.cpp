#include "uipref/service/app.hpp"

#include <cstdio>
#include <set>

#include "uipref/arena/agreement.hpp"
#include "uipref/arena/bootstrap.hpp"
#include "uipref/arena/win_rate.hpp"
#include "uipref/common/error.hpp"
#include "uipref/common/hash.hpp"
#include "uipref/feedback/stats.hpp"

namespace uipref::service {

namespace fs = std::filesystem;

namespace {

Response json_response(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

Response error_response(int status, const std::string& message, const std::string& field = {}) {
    Json body{{"error", message}};
    if (!field.empty()) body["field"] = field;
    return json_response(status, body);
}

int status_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kNotFound: return 404;
        case ErrorKind::kValidation:
        case ErrorKind::kInvalidInput:
        case ErrorKind::kMalformedEdit: return 400;
        case ErrorKind::kIntegrity: return 409;
        default: return 500;
    }
}

/// Runs a handler, mapping module errors onto HTTP statuses.
template <class Fn>
Response guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        return error_response(400, e.what(), e.field());
    } catch (const Error& e) {
        return error_response(status_for(e.kind()), e.what());
    } catch (const Json::exception& e) {
        return error_response(400, std::string("malformed body: ") + e.what(), "body");
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

Json parse_body(const std::string& body) {
    Json j = Json::parse(body);
    if (!j.is_object()) throw ValidationError("body", "expected a JSON object");
    return j;
}

std::shared_ptr<corpus::CorpusStore> open_store(const ServiceConfig& config) {
    try {
        return std::make_shared<corpus::CorpusStore>(config.store_root);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::kConfiguration,
                    "store unavailable at " + config.store_root.string() + ": " + e.what());
    }
}

gateway::Backends backends_for(const ServiceConfig& config, const std::shared_ptr<corpus::CorpusStore>& store) {
    std::weak_ptr<corpus::CorpusStore> weak = store;
    return gateway::make_backends(config.backends, [weak](const std::string& hash) {
        auto s = weak.lock();
        if (!s) throw Error(ErrorKind::kNotFound, "store closed");
        return s->blob(hash);
    });
}

fs::path artifact_dir_for(const corpus::CorpusStore& store) {
    if (store.root()) return *store.root() / "artifacts";
    return fs::temp_directory_path() / "uipref-artifacts";
}

}  // namespace

App::App(ServiceConfig config) : App(config, open_store(config), {}) {}

App::App(ServiceConfig config, std::shared_ptr<corpus::CorpusStore> store, gateway::Backends backends)
    : config_(std::move(config)),
      store_(std::move(store)),
      gateway_(backends.llm ? std::move(backends) : backends_for(config_, store_)),
      scheduler_(*store_),
      rng_(config_.seed) {
    config_.validate();
    for (const auto& j : store_->journal(channels::kAnnotations)) {
        scheduler_.mark_answered(feedback::record_from_json(j));
    }
    for (const auto& j : store_->journal(channels::kJobs)) {
        if (!j.contains("report")) continue;
        JobReport r;
        const auto& rep = j["report"];
        r.job_id = rep.value("job_id", std::string{});
        r.kind = parse_job_kind(rep.value("kind", std::string("ratings")));
        r.status = rep.value("status", std::string{});
        r.seed = rep.value("seed", std::uint64_t{0});
        r.params = rep.value("params", Json::object());
        r.counts = rep.value("counts", Json::object());
        r.artifacts = rep.value("artifacts", std::vector<std::string>{});
        r.duration_seconds = rep.value("duration_seconds", 0.0);
        r.error = rep.value("error", std::string{});
        jobs_[r.job_id] = r;
        ++job_counter_;
    }
    start_worker();
}

App::~App() {
    {
        std::lock_guard lock(jobs_mutex_);
        stopping_ = true;
    }
    jobs_cv_.notify_all();
    if (worker_.joinable()) worker_.join();
}

void App::start_worker() {
    worker_ = std::thread([this] { worker_loop(); });
}

void App::worker_loop() {
    Pipeline pipeline(*store_, gateway_, artifact_dir_for(*store_), config_.rating);
    for (;;) {
        std::pair<std::string, JobSpec> item;
        {
            std::unique_lock lock(jobs_mutex_);
            jobs_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
            if (queue_.empty()) return;
            item = std::move(queue_.front());
            queue_.pop_front();
            busy_ = true;
            jobs_[item.first].status = "running";
        }
        auto report = pipeline.run_job(item.second, item.first);
        try {
            store_->append_journal(channels::kJobs, {{"job_id", report.job_id}, {"report", to_json(report)}});
        } catch (const std::exception& e) {
            report.error += std::string(report.error.empty() ? "" : "; ") + "journal write failed: " + e.what();
        }
        {
            std::lock_guard lock(jobs_mutex_);
            jobs_[item.first] = std::move(report);
            busy_ = false;
        }
        jobs_cv_.notify_all();
    }
}

void App::drain_jobs() {
    std::unique_lock lock(jobs_mutex_);
    jobs_cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

void App::check_against_store(const feedback::AnnotationRecord& record) const {
    const auto& s = *store_;
    auto require_candidate = [&](const std::string& id, const std::string& field) {
        if (!s.has_candidate(id)) throw ValidationError(field, "unknown candidate '" + id + "'");
        return s.candidate(id);
    };
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, feedback::RankingJudgment>) {
                if (!s.has_description(body.description_id)) {
                    throw ValidationError("description_id", "unknown description '" + body.description_id + "'");
                }
                for (const auto& [id, field] : {std::pair{body.left_candidate, "left_candidate"},
                                                std::pair{body.right_candidate, "right_candidate"}}) {
                    const auto c = require_candidate(id, field);
                    if (c.description_id != body.description_id) {
                        throw ValidationError(field, "candidate belongs to another description");
                    }
                    if (!c.screenshot_ref) throw ValidationError(field, "candidate has not been rendered");
                }
            } else if constexpr (std::is_same_v<T, feedback::CommentSet>) {
                require_candidate(body.candidate_id, "candidate_id");
            } else if constexpr (std::is_same_v<T, feedback::SketchSet>) {
                const auto c = require_candidate(body.candidate_id, "candidate_id");
                if (!c.geometry_ref) throw ValidationError("candidate_id", "candidate has no render geometry");
            } else {
                require_candidate(body.candidate_id, "candidate_id");
                if (!s.has_blob(body.original_sketch_ref)) {
                    throw ValidationError("original_sketch_ref", "unknown blob '" + body.original_sketch_ref + "'");
                }
                if (!s.has_blob(body.revised_sketch_ref)) {
                    throw ValidationError("revised_sketch_ref", "unknown blob '" + body.revised_sketch_ref + "'");
                }
            }
        },
        record.body);
}

Response App::next_task(const QueryParams& query, const std::string& annotator_id) {
    return guarded([&] {
        const auto it = query.find("interface");
        if (it == query.end()) throw ValidationError("interface", "query parameter is required");
        const auto interface = feedback::parse_interface(it->second);
        if (annotator_id.empty()) throw ValidationError("X-Annotator-Id", "annotator id header is required");
        std::optional<feedback::Task> task;
        {
            std::lock_guard lock(mutex_);
            task = scheduler_.next_task(interface, annotator_id, rng_);
        }
        if (!task) return Response{204, "", "application/json"};
        return json_response(200, feedback::to_json(*task));
    });
}

Response App::post_annotation(const std::string& body) {
    return guarded([&] {
        const auto record = feedback::record_from_json(parse_body(body));
        record.validate();
        check_against_store(record);
        std::lock_guard lock(mutex_);
        for (const auto& j : store_->journal(channels::kAnnotations)) {
            if (j.value("record_id", std::string{}) == record.record_id) {
                return json_response(200, {{"record_id", record.record_id}, {"duplicate", true}});
            }
        }
        store_->append_journal(channels::kAnnotations, feedback::to_json(record));
        scheduler_.mark_answered(record);
        return json_response(201, {{"record_id", record.record_id}, {"duplicate", false}});
    });
}

Response App::post_arena_output(const std::string& body) {
    return guarded([&] {
        const auto j = parse_body(body);
        const auto model = j.at("model").get<std::string>();
        const auto description_id = j.at("description_id").get<std::string>();
        if (model.empty()) throw ValidationError("model", "model must not be empty");
        if (!store_->has_description(description_id)) {
            throw ValidationError("description_id", "unknown description '" + description_id + "'");
        }
        std::string ref;
        if (j.contains("screenshot_png_base64")) {
            ref = store_->put_image(description_id, base64_decode(j["screenshot_png_base64"].get<std::string>()));
        } else if (j.contains("html")) {
            ref = store_->put_blob(j["html"].get<std::string>());
        } else {
            throw ValidationError("screenshot_png_base64", "an output needs a screenshot or html");
        }
        store_->append_journal(channels::kArenaOutputs,
                               {{"model", model}, {"description_id", description_id}, {"ref", ref}});
        return json_response(201, {{"ref", ref}});
    });
}

Response App::arena_match() {
    return guarded([&] {
        std::map<std::string, std::map<std::string, std::string>> outputs;  // description -> model -> ref
        std::set<std::string> seen;
        for (const auto& j : store_->journal(channels::kArenaOutputs)) {
            outputs[j["description_id"].get<std::string>()][j["model"].get<std::string>()] =
                j["ref"].get<std::string>();
            seen.insert(j["model"].get<std::string>());
        }
        std::vector<std::string> models = config_.arena_models;
        if (models.empty()) models.assign(seen.begin(), seen.end());
        std::vector<std::string> descriptions;
        for (const auto& [desc, by_model] : outputs) {
            bool complete = true;
            for (const auto& m : models) complete &= by_model.count(m) > 0;
            if (complete) descriptions.push_back(desc);
        }
        if (models.size() < 2 || descriptions.empty()) {
            return error_response(409, "no description has outputs from every arena model");
        }
        const auto history = battle_snapshot();
        std::lock_guard lock(mutex_);
        const auto match = arena::schedule_match(models, descriptions, history, rng_, config_.schedule_mode);
        pending_matches_[match.match_id] = match;
        const auto& by_model = outputs[match.description_id];
        arena::JudgePayload payload{match.match_id, match.description_id,
                                    store_->description(match.description_id).text,
                                    by_model.at(match.model_left), by_model.at(match.model_right)};
        return json_response(200, arena::to_json(payload));
    });
}

Response App::arena_judgment(const std::string& body) {
    return guarded([&] {
        const auto j = parse_body(body);
        arena::Battle battle;
        std::string match_id;
        if (j.contains("match_id")) {
            match_id = j["match_id"].get<std::string>();
            const auto winner = j.at("winner").get<std::string>();
            if (winner != "left" && winner != "right") throw ValidationError("winner", "winner must be left or right");
            const auto judge = j.value("judge_id", std::string{});
            std::lock_guard lock(mutex_);
            const auto it = pending_matches_.find(match_id);
            if (it == pending_matches_.end()) throw Error(ErrorKind::kNotFound, "unknown match '" + match_id + "'");
            battle = arena::resolve_match(it->second, winner == "left", judge);
        } else {
            battle = arena::battle_from_json(j);
        }
        battle.validate();
        store_->append_journal(channels::kBattles, arena::to_json(battle));
        if (!match_id.empty()) {
            std::lock_guard lock(mutex_);
            pending_matches_.erase(match_id);
        }
        return json_response(201, {{"recorded", true}, {"battles", store_->journal_size(channels::kBattles)}});
    });
}

std::vector<arena::Battle> App::battle_snapshot() const {
    std::vector<arena::Battle> battles;
    for (const auto& j : store_->journal(channels::kBattles)) battles.push_back(arena::battle_from_json(j));
    return battles;
}

Response App::ratings(const QueryParams& query) {
    return guarded([&] {
        const auto battles = battle_snapshot();
        std::vector<arena::ModelRating> table;
        if (!battles.empty()) table = arena::bootstrap_ratings(battles, config_.rating);
        const auto matrix = arena::win_rate_matrix(battles);
        const auto format = query.count("format") ? query.at("format") : std::string("json");
        if (format == "csv") return Response{200, arena::ratings_csv(table), "text/csv"};
        if (format == "matrix-csv") return Response{200, arena::win_rate_csv(matrix), "text/csv"};
        if (format != "json") throw ValidationError("format", "format must be json, csv or matrix-csv");
        Json rows = Json::array();
        for (const auto& r : table) {
            rows.push_back({{"model", r.model}, {"median", r.median}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}});
        }
        Json rate = Json::array();
        for (std::size_t i = 0; i < matrix.models.size(); ++i) {
            Json row = Json::array();
            for (std::size_t k = 0; k < matrix.models.size(); ++k) {
                const auto& v = matrix.rate[i][k];
                row.push_back(v ? Json(*v) : Json(nullptr));
            }
            rate.push_back(std::move(row));
        }
        return json_response(200, {{"battles", battles.size()},
                                   {"rounds", config_.rating.rounds},
                                   {"ratings", rows},
                                   {"win_rates", {{"models", matrix.models}, {"rate", rate}}}});
    });
}

Response App::post_agreement(const std::string& body) {
    return guarded([&] {
        const auto record = arena::agreement_record_from_json(parse_body(body));
        store_->append_journal(channels::kAgreement, arena::to_json(record));
        return json_response(201, {{"recorded", true}});
    });
}

Response App::agreement_report() {
    return guarded([&] {
        std::vector<arena::AgreementRecord> records;
        for (const auto& j : store_->journal(channels::kAgreement)) {
            records.push_back(arena::agreement_record_from_json(j));
        }
        return json_response(200, arena::to_json(arena::agreement(records)));
    });
}

Response App::study_stats() {
    return guarded([&] {
        std::vector<feedback::AnnotationRecord> records;
        for (const auto& j : store_->journal(channels::kAnnotations)) records.push_back(feedback::record_from_json(j));
        return json_response(200, feedback::to_json(feedback::study_stats(records)));
    });
}

Response App::post_job(const std::string& body) {
    return guarded([&] {
        const auto spec = job_spec_from_json(parse_body(body));
        std::string id;
        {
            std::lock_guard lock(jobs_mutex_);
            char buf[32];
            std::snprintf(buf, sizeof buf, "job-%06zu", ++job_counter_);
            id = buf;
        }
        store_->append_journal(channels::kJobs, {{"job_id", id}, {"spec", to_json(spec)}});
        {
            std::lock_guard lock(jobs_mutex_);
            JobReport queued;
            queued.job_id = id;
            queued.kind = spec.kind;
            queued.seed = spec.seed;
            queued.params = spec.params;
            jobs_[id] = queued;
            queue_.emplace_back(id, spec);
        }
        jobs_cv_.notify_all();
        return json_response(202, {{"job_id", id}, {"status", "queued"}});
    });
}

Response App::get_job(const std::string& job_id) {
    std::lock_guard lock(jobs_mutex_);
    const auto it = jobs_.find(job_id);
    if (it == jobs_.end()) return error_response(404, "unknown job '" + job_id + "'");
    return json_response(200, to_json(it->second));
}

Response App::post_blob(const std::string& body) {
    return guarded([&] {
        if (body.empty()) throw ValidationError("body", "blob must not be empty");
        return json_response(201, {{"hash", store_->put_blob(body)}});
    });
}

Response App::get_blob(const std::string& hash) {
    return guarded([&] {
        if (!store_->has_blob(hash)) throw Error(ErrorKind::kNotFound, "unknown blob '" + hash + "'");
        auto bytes = store_->blob(hash);
        const bool png = bytes.rfind("\x89PNG", 0) == 0;
        return Response{200, std::move(bytes), png ? "image/png" : "application/octet-stream"};
    });
}

}  // namespace uipref::service
