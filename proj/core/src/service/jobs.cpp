#include "uipref/service/jobs.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "uipref/arena/bootstrap.hpp"
#include "uipref/arena/win_rate.hpp"
#include "uipref/common/error.hpp"
#include "uipref/common/hash.hpp"
#include "uipref/feedback/records.hpp"
#include "uipref/feedback/transforms.hpp"
#include "uipref/pairgen/orpo.hpp"
#include "uipref/pairgen/scoring.hpp"
#include "uipref/reward/head_io.hpp"
#include "uipref/reward/topk.hpp"
#include "uipref/reward/trainer.hpp"

namespace uipref::service {

namespace fs = std::filesystem;

namespace {

enum class ParamType { kUint, kNumber, kString, kStringList, kBool };

struct ParamRule {
    const char* name;
    ParamType type;
    bool required = false;
};

const std::vector<ParamRule>& rules_for(JobKind kind) {
    using T = ParamType;
    static const std::map<JobKind, std::vector<ParamRule>> rules = {
        {JobKind::kGenDescriptions,
         {{"target_n", T::kUint, true},
          {"seed_examples", T::kStringList, true},
          {"temperature", T::kNumber},
          {"eval_fraction", T::kNumber},
          {"max_rounds", T::kUint}}},
        {JobKind::kGenCandidates, {{"n", T::kUint}, {"temperature", T::kNumber}, {"description_ids", T::kStringList}}},
        {JobKind::kRender, {{"batch_ids", T::kStringList}, {"with_sketch", T::kBool}}},
        {JobKind::kFilter, {{"k", T::kUint}, {"head", T::kString}, {"batch_ids", T::kStringList}}},
        {JobKind::kTransformFeedback, {{"records", T::kString}}},
        {JobKind::kTrainReward,
         {{"steps", T::kUint},
          {"batch", T::kUint},
          {"lr", T::kNumber},
          {"decay", T::kNumber},
          {"margin", T::kNumber},
          {"aug", T::kNumber},
          {"loss_sign", T::kString},
          {"synthetic_pairs_per_batch", T::kUint},
          {"init_head", T::kString},
          {"output", T::kString},
          {"trace_output", T::kString}}},
        {JobKind::kScore, {{"head", T::kString}, {"batch_ids", T::kStringList}, {"output", T::kString}}},
        {JobKind::kBuildPairs,
         {{"input", T::kString}, {"output", T::kString}, {"pairs_per_description", T::kUint}}},
        {JobKind::kExportOrpo, {{"input", T::kString}, {"output", T::kString}, {"max_tokens", T::kUint}}},
        {JobKind::kRatings,
         {{"rounds", T::kUint}, {"k_factor", T::kNumber}, {"output", T::kString}, {"matrix_output", T::kString}}},
    };
    return rules.at(kind);
}

bool type_matches(const Json& v, ParamType t) {
    switch (t) {
        case ParamType::kUint: return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
        case ParamType::kNumber: return v.is_number();
        case ParamType::kString: return v.is_string();
        case ParamType::kBool: return v.is_boolean();
        case ParamType::kStringList:
            if (!v.is_array()) return false;
            for (const auto& e : v) {
                if (!e.is_string()) return false;
            }
            return true;
    }
    return false;
}

template <class T>
T param(const Json& params, const char* name, T fallback) {
    return params.contains(name) ? params[name].get<T>() : fallback;
}

Json json_score(double s) { return std::isfinite(s) ? Json(s) : Json(nullptr); }

std::mt19937_64 job_rng(std::uint64_t seed, std::uint64_t stream) { return std::mt19937_64(derive_seed(seed, stream)); }

}  // namespace

std::string_view to_string(JobKind kind) {
    switch (kind) {
        case JobKind::kGenDescriptions: return "gen-descriptions";
        case JobKind::kGenCandidates: return "gen-candidates";
        case JobKind::kRender: return "render";
        case JobKind::kFilter: return "filter";
        case JobKind::kTransformFeedback: return "transform-feedback";
        case JobKind::kTrainReward: return "train-reward";
        case JobKind::kScore: return "score";
        case JobKind::kBuildPairs: return "build-pairs";
        case JobKind::kExportOrpo: return "export-orpo";
        case JobKind::kRatings: return "ratings";
    }
    return "unknown";
}

JobKind parse_job_kind(std::string_view text) {
    for (auto k : kAllJobKinds) {
        if (to_string(k) == text) return k;
    }
    throw ValidationError("kind", "unknown job kind '" + std::string(text) + "'");
}

void JobSpec::validate() const {
    if (!params.is_object()) throw ValidationError("params", "params must be an object");
    const auto& rules = rules_for(kind);
    for (const auto& [key, value] : params.items()) {
        const auto it = std::find_if(rules.begin(), rules.end(), [&](const ParamRule& r) { return key == r.name; });
        if (it == rules.end()) {
            throw ValidationError("params." + key, "unknown parameter for " + std::string(to_string(kind)));
        }
        if (!type_matches(value, it->type)) throw ValidationError("params." + key, "parameter has the wrong type");
    }
    for (const auto& r : rules) {
        if (r.required && !params.contains(r.name)) {
            throw ValidationError(std::string("params.") + r.name, "required parameter is missing");
        }
    }
    if (kind == JobKind::kGenDescriptions) {
        if (params["target_n"].get<long long>() < 1) throw ValidationError("params.target_n", "must be positive");
        if (params["seed_examples"].empty()) throw ValidationError("params.seed_examples", "must not be empty");
        const double f = param(params, "eval_fraction", 0.0);
        if (!(f >= 0 && f < 1)) throw ValidationError("params.eval_fraction", "must lie in [0, 1)");
    }
    if (kind == JobKind::kGenCandidates && param<long long>(params, "n", 32) < 1) {
        throw ValidationError("params.n", "must be at least 1");
    }
    if (kind == JobKind::kFilter && param<long long>(params, "k", reward::kDefaultTopK) < 1) {
        throw ValidationError("params.k", "k must be positive");
    }
    if (kind == JobKind::kTrainReward) {
        Json cfg = params;
        for (const char* extra : {"synthetic_pairs_per_batch", "init_head", "output", "trace_output"}) cfg.erase(extra);
        (void)reward::trainer_config_from_json(cfg);
    }
    if (kind == JobKind::kExportOrpo && param<long long>(params, "max_tokens", pairgen::kDefaultMaxTokens) < 1) {
        throw ValidationError("params.max_tokens", "must be positive");
    }
    if (kind == JobKind::kRatings && param<long long>(params, "rounds", 1000) < 1) {
        throw ValidationError("params.rounds", "must be at least 1");
    }
}

JobSpec job_spec_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("job", "job spec must be an object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError("kind", "kind is required");
    JobSpec spec;
    spec.kind = parse_job_kind(j["kind"].get<std::string>());
    if (j.contains("params")) spec.params = j["params"];
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
            throw ValidationError("seed", "seed must be a non-negative integer");
        }
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    spec.validate();
    return spec;
}

Json to_json(const JobSpec& spec) {
    return {{"kind", to_string(spec.kind)}, {"params", spec.params}, {"seed", spec.seed}};
}

Json to_json(const JobReport& r) {
    Json j{{"job_id", r.job_id},
           {"kind", to_string(r.kind)},
           {"status", r.status},
           {"seed", r.seed},
           {"params", r.params},
           {"counts", r.counts},
           {"artifacts", r.artifacts},
           {"duration_seconds", r.duration_seconds}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

Json to_json(const pairgen::ScoredBatch& batch) {
    Json scores = Json::array();
    for (const auto& s : batch.scores) {
        Json e{{"candidate_id", s.candidate_id}, {"batch_index", s.batch_index}, {"score", json_score(s.score)},
               {"failed", s.failed}};
        if (!s.error.empty()) e["error"] = s.error;
        scores.push_back(std::move(e));
    }
    return {{"description_id", batch.description_id}, {"batch_id", batch.batch_id}, {"scores", scores}};
}

pairgen::ScoredBatch scored_batch_from_json(const Json& j) {
    pairgen::ScoredBatch b{j.at("description_id").get<std::string>(), j.at("batch_id").get<std::string>(), {}};
    for (const auto& e : j.at("scores")) {
        pairgen::CandidateScore s;
        s.candidate_id = e.at("candidate_id").get<std::string>();
        s.batch_index = e.at("batch_index").get<int>();
        s.score = e.at("score").is_null() ? pairgen::kFailedScore : e.at("score").get<double>();
        s.failed = e.value("failed", false);
        s.error = e.value("error", std::string{});
        b.scores.push_back(std::move(s));
    }
    return b;
}

Json to_json(const pairgen::AlignmentPair& p) {
    return {{"description_id", p.description_id}, {"prompt", p.prompt},
            {"chosen", p.chosen},                 {"rejected", p.rejected},
            {"chosen_id", p.chosen_id},           {"rejected_id", p.rejected_id},
            {"chosen_score", p.chosen_score},     {"rejected_score", p.rejected_score}};
}

pairgen::AlignmentPair alignment_pair_from_json(const Json& j) {
    return {j.at("description_id").get<std::string>(), j.at("prompt").get<std::string>(),
            j.at("chosen").get<std::string>(),         j.at("rejected").get<std::string>(),
            j.at("chosen_id").get<std::string>(),      j.at("rejected_id").get<std::string>(),
            j.at("chosen_score").get<double>(),        j.at("rejected_score").get<double>()};
}

Pipeline::Pipeline(corpus::CorpusStore& store, gateway::Gateway& gateway, fs::path artifact_dir,
                   arena::RatingConfig rating)
    : store_(store), gateway_(gateway), artifact_dir_(std::move(artifact_dir)), rating_(rating) {}

fs::path Pipeline::artifact(const Json& params, const char* key, const char* fallback) const {
    const fs::path p = param<std::string>(params, key, fallback);
    return p.is_absolute() ? p : artifact_dir_ / p;
}

std::vector<corpus::GenerationBatch> Pipeline::selected_batches(const Json& params) const {
    std::vector<corpus::GenerationBatch> out;
    if (params.contains("batch_ids")) {
        for (const auto& id : params["batch_ids"]) out.push_back(store_.batch(id.get<std::string>()));
        return out;
    }
    for (auto& b : store_.batches()) {
        if (b.kind == corpus::BatchKind::kGeneration) out.push_back(std::move(b));
    }
    return out;
}

JobReport Pipeline::run_job(const JobSpec& spec, std::string job_id) {
    JobReport report;
    report.job_id = job_id.empty() ? "job-" + sha256_hex(to_json(spec).dump()).substr(0, 12) : std::move(job_id);
    report.kind = spec.kind;
    report.seed = spec.seed;
    report.params = spec.params;
    report.status = "running";
    const auto start = std::chrono::steady_clock::now();
    try {
        spec.validate();
        fs::create_directories(artifact_dir_);
        switch (spec.kind) {
            case JobKind::kGenDescriptions: gen_descriptions(spec, report); break;
            case JobKind::kGenCandidates: gen_candidates(spec, report); break;
            case JobKind::kRender: render(spec, report); break;
            case JobKind::kFilter: filter(spec, report); break;
            case JobKind::kTransformFeedback: transform_feedback(spec, report); break;
            case JobKind::kTrainReward: train_reward(spec, report); break;
            case JobKind::kScore: score(spec, report); break;
            case JobKind::kBuildPairs: build_pairs(spec, report); break;
            case JobKind::kExportOrpo: export_orpo(spec, report); break;
            case JobKind::kRatings: ratings(spec, report); break;
        }
        report.status = "succeeded";
    } catch (const std::exception& e) {
        report.status = "failed";
        report.error = std::string(to_string(spec.kind)) + " job failed: " + e.what();
    }
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void Pipeline::gen_descriptions(const JobSpec& spec, JobReport& report) {
    const auto target = spec.params["target_n"].get<std::size_t>();
    const auto seeds = spec.params["seed_examples"].get<std::vector<std::string>>();
    const double temperature = param(spec.params, "temperature", 1.0);
    const double eval_fraction = param(spec.params, "eval_fraction", 0.0);
    const auto max_rounds = param<std::size_t>(spec.params, "max_rounds", 0);
    report.params["temperature"] = temperature;
    report.params["eval_fraction"] = eval_fraction;

    const auto texts = gateway_.generate_descriptions(target, seeds, temperature, spec.seed, max_rounds);
    const auto eval_count = static_cast<std::size_t>(std::floor(eval_fraction * static_cast<double>(texts.size())));
    std::size_t stored = 0;
    std::size_t existing = 0;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (store_.find_description(texts[i])) {
            ++existing;
            continue;
        }
        store_.add_description(texts[i], i + eval_count >= texts.size() ? corpus::Split::kEval : corpus::Split::kTrain);
        ++stored;
    }
    report.counts = {{"generated", texts.size()}, {"stored", stored}, {"already_present", existing},
                     {"eval", eval_count}, {"llm_calls", gateway_.llm_calls()}};
}

void Pipeline::gen_candidates(const JobSpec& spec, JobReport& report) {
    const int n = param(spec.params, "n", 32);
    const double temperature = param(spec.params, "temperature", 1.0);
    report.params["n"] = n;
    report.params["temperature"] = temperature;

    std::vector<std::string> ids;
    if (spec.params.contains("description_ids")) {
        ids = spec.params["description_ids"].get<std::vector<std::string>>();
    } else {
        for (const auto& d : store_.descriptions()) {
            if (d.split != corpus::Split::kTrain) continue;
            bool has_batch = false;
            for (const auto& b : store_.batches_for(d.id)) has_batch |= b.kind == corpus::BatchKind::kGeneration;
            if (!has_batch) ids.push_back(d.id);
        }
    }
    std::size_t candidates = 0;
    std::size_t failures = 0;
    Json batches = Json::array();
    for (const auto& id : ids) {
        const auto description = store_.description(id);
        const auto seed = derive_seed(spec.seed, fnv1a64(id));
        const auto result = gateway_.generate_candidates(description.text, n, temperature, seed);
        const auto batch = store_.begin_batch(id, seed);
        for (const auto& markup : result.markups) store_.put_candidate(batch, markup);
        candidates += result.markups.size();
        failures += result.failures.size();
        batches.push_back(batch);
    }
    report.counts = {{"batches", ids.size()}, {"candidates", candidates}, {"failures", failures}};
    report.params["batch_ids_created"] = batches;
}

void Pipeline::render(const JobSpec& spec, JobReport& report) {
    const bool with_sketch = param(spec.params, "with_sketch", true);
    report.params["with_sketch"] = with_sketch;
    std::size_t rendered = 0;
    std::size_t already = 0;
    std::size_t failed = 0;
    std::size_t truncated = 0;
    std::size_t fallbacks = 0;
    Json errors = Json::array();
    for (const auto& batch : selected_batches(spec.params)) {
        for (const auto& id : batch.candidate_ids) {
            const auto c = store_.candidate(id);
            if (c.screenshot_ref && (!with_sketch || c.sketch_ref)) {
                ++already;
                continue;
            }
            try {
                const auto r = feedback::stage_and_render(store_, gateway_, id, with_sketch);
                ++rendered;
                truncated += r.truncated;
                fallbacks += r.placeholder_fallbacks;
            } catch (const Error& e) {
                ++failed;
                if (errors.size() < 20) errors.push_back({{"candidate_id", id}, {"error", e.what()}});
            }
        }
    }
    report.counts = {{"rendered", rendered},   {"already_rendered", already}, {"failed", failed},
                     {"truncated", truncated}, {"placeholder_fallbacks", fallbacks}};
    if (!errors.empty()) report.counts["errors"] = errors;
}

void Pipeline::filter(const JobSpec& spec, JobReport& report) {
    const int k = param(spec.params, "k", reward::kDefaultTopK);
    report.params["k"] = k;
    const auto head = spec.params.contains("head")
                          ? reward::load_head(artifact(spec.params, "head", "reward_head.json"))
                          : reward::RewardHead::identity(gateway_.profile().embedding_dim);
    pairgen::CandidateScorer scorer(store_, gateway_);
    std::size_t batches = 0;
    std::size_t retained_total = 0;
    std::size_t retained_min = SIZE_MAX;
    std::size_t retained_max = 0;
    std::size_t failures = 0;
    for (const auto& batch : selected_batches(spec.params)) {
        const auto scored = scorer.score_batch(batch, head);
        for (const auto& s : scored.scores) {
            if (!s.failed) store_.set_score(s.candidate_id, s.score);
        }
        failures += scored.failures();
        const auto values = scored.values();
        const auto retained = reward::topk_filter(batch, values, k);
        store_.set_retained(batch.id, retained);
        ++batches;
        retained_total += retained.size();
        retained_min = std::min(retained_min, retained.size());
        retained_max = std::max(retained_max, retained.size());
    }
    report.counts = {{"batches", batches},
                     {"retained_total", retained_total},
                     {"retained_min", batches ? retained_min : 0},
                     {"retained_max", retained_max},
                     {"score_failures", failures}};
}

void Pipeline::transform_feedback(const JobSpec& spec, JobReport& report) {
    std::size_t ingested = 0;
    if (spec.params.contains("records")) {
        std::map<std::string, bool> known;
        for (const auto& r : store_.journal(channels::kAnnotations)) known[r.value("record_id", std::string{})] = true;
        for (const auto& record : feedback::read_records(artifact(spec.params, "records", "annotations.jsonl"))) {
            if (known.count(record.record_id)) continue;
            store_.append_journal(channels::kAnnotations, feedback::to_json(record));
            known[record.record_id] = true;
            ++ingested;
        }
    }
    std::vector<feedback::AnnotationRecord> records;
    for (const auto& j : store_.journal(channels::kAnnotations)) records.push_back(feedback::record_from_json(j));
    feedback::FeedbackProcessor processor(store_, gateway_);
    const auto result = processor.process_all(records);
    Json per = Json::object();
    for (auto i : feedback::kAllInterfaces) per[std::string(feedback::to_string(i))] = 0;
    Json dropped = Json::array();
    for (const auto& o : result.outcomes) {
        if (o.pair) per[std::string(feedback::to_string(o.interface))] = per[std::string(feedback::to_string(o.interface))].get<int>() + 1;
        if (!o.error.empty() && dropped.size() < 20) dropped.push_back({{"record_id", o.record_id}, {"error", o.error}});
    }
    report.counts = {{"ingested", ingested},       {"records", records.size()}, {"emitted", result.emitted},
                     {"skipped", result.skipped},  {"dropped", result.dropped}, {"emitted_by_interface", per}};
    if (!dropped.empty()) report.counts["dropped_records"] = dropped;
}

void Pipeline::train_reward(const JobSpec& spec, JobReport& report) {
    Json cfg_json = spec.params;
    for (const char* extra : {"synthetic_pairs_per_batch", "init_head", "output", "trace_output"}) cfg_json.erase(extra);
    cfg_json["seed"] = spec.seed;
    const auto cfg = reward::trainer_config_from_json(cfg_json);
    const auto per_batch = param<std::size_t>(spec.params, "synthetic_pairs_per_batch", 4);
    const auto echo = reward::to_json(cfg);
    for (const auto& [k, v] : echo.items()) report.params[k] = v;
    report.params["synthetic_pairs_per_batch"] = per_batch;

    const auto head = spec.params.contains("init_head")
                          ? reward::load_head(artifact(spec.params, "init_head", "reward_head.json"))
                          : reward::RewardHead::identity(gateway_.profile().embedding_dim);
    gateway_.check_head_dimension(head.dimension());
    pairgen::CandidateScorer scorer(store_, gateway_);

    std::vector<reward::EmbeddedPair> designer;
    const auto preferences = store_.preferences();
    for (const auto& p : preferences.pairs()) {
        if (p.provenance == corpus::Provenance::kSynthetic) continue;
        designer.push_back(
            {scorer.text_direction(p.description_id), scorer.ref_embedding(p.chosen_ref), scorer.ref_embedding(p.rejected_ref)});
    }

    std::vector<reward::CandidatePair> pool;
    auto rng = job_rng(spec.seed, 1);
    for (const auto& batch : store_.batches()) {
        if (batch.kind != corpus::BatchKind::kGeneration) continue;
        std::vector<std::string> rendered;
        for (const auto& id : batch.candidate_ids) {
            if (store_.candidate(id).screenshot_ref) rendered.push_back(id);
        }
        if (rendered.size() < 2) continue;
        const auto text = scorer.text_direction(batch.description_id);
        for (std::size_t i = 0; i < per_batch; ++i) {
            std::uniform_int_distribution<std::size_t> pick(0, rendered.size() - 1);
            const auto a = pick(rng);
            auto b = std::uniform_int_distribution<std::size_t>(0, rendered.size() - 2)(rng);
            if (b >= a) ++b;
            pool.push_back({text, scorer.image_embedding(rendered[a]), scorer.image_embedding(rendered[b])});
        }
    }
    const auto result = reward::train(head, designer, pool, cfg);

    const auto head_path = artifact(spec.params, "output", "reward_head.json");
    const auto trace_path = artifact(spec.params, "trace_output", "loss_trace.csv");
    reward::save_head(result.head, head_path, cfg);
    write_text_file(trace_path, reward::loss_trace_csv(result.trace));
    report.artifacts = {head_path.string(), trace_path.string()};
    report.counts = {{"designer_pairs", designer.size()},
                     {"synthetic_pairs", pool.size()},
                     {"steps", result.trace.size()},
                     {"final_loss", result.trace.empty() ? 0.0 : result.trace.back().mean_loss},
                     {"designer_accuracy", reward::pairwise_accuracy(result.head, designer)}};
}

void Pipeline::score(const JobSpec& spec, JobReport& report) {
    const auto head_path = artifact(spec.params, "head", "reward_head.json");
    const auto head = fs::exists(head_path) ? reward::load_head(head_path)
                                            : reward::RewardHead::identity(gateway_.profile().embedding_dim);
    report.params["head"] = fs::exists(head_path) ? head_path.string() : std::string("identity");
    pairgen::CandidateScorer scorer(store_, gateway_);
    std::ostringstream out;
    std::size_t batches = 0;
    std::size_t candidates = 0;
    std::size_t failures = 0;
    std::size_t empty = 0;
    for (const auto& batch : selected_batches(spec.params)) {
        try {
            const auto scored = scorer.score_batch(batch, head);
            out << to_line(to_json(scored)) << '\n';
            ++batches;
            candidates += scored.scores.size();
            failures += scored.failures();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::kEmptyBatch) throw;
            ++empty;
        }
    }
    const auto path = artifact(spec.params, "output", "scored_batches.jsonl");
    write_text_file(path, out.str());
    report.artifacts = {path.string()};
    report.counts = {{"batches", batches}, {"candidates", candidates}, {"failures", failures}, {"empty_batches", empty}};
}

void Pipeline::build_pairs(const JobSpec& spec, JobReport& report) {
    const int per = param(spec.params, "pairs_per_description", 1);
    report.params["pairs_per_description"] = per;
    std::vector<pairgen::ScoredBatch> scored;
    for (const auto& j : read_jsonl(artifact(spec.params, "input", "scored_batches.jsonl"))) {
        scored.push_back(scored_batch_from_json(j));
    }
    auto rng = job_rng(spec.seed, 2);
    const auto result = pairgen::build_alignment_pairs(scored, store_, rng, per);
    std::ostringstream out;
    for (const auto& p : result.pairs) out << to_line(to_json(p)) << '\n';
    const auto path = artifact(spec.params, "output", "alignment_pairs.jsonl");
    write_text_file(path, out.str());
    report.artifacts = {path.string()};
    report.counts = {{"batches", scored.size()}, {"pairs", result.pairs.size()}, {"skipped", result.skipped}};
}

void Pipeline::export_orpo(const JobSpec& spec, JobReport& report) {
    const int max_tokens = param(spec.params, "max_tokens", pairgen::kDefaultMaxTokens);
    report.params["max_tokens"] = max_tokens;
    std::vector<pairgen::AlignmentPair> pairs;
    for (const auto& j : read_jsonl(artifact(spec.params, "input", "alignment_pairs.jsonl"))) {
        pairs.push_back(alignment_pair_from_json(j));
    }
    const auto path = artifact(spec.params, "output", "orpo.jsonl");
    const auto result = pairgen::export_orpo(pairs, path, max_tokens);
    report.artifacts = {path.string()};
    report.counts = {{"records", result.records}, {"truncated", result.truncated}};
}

void Pipeline::ratings(const JobSpec& spec, JobReport& report) {
    auto cfg = rating_;
    cfg.rounds = param(spec.params, "rounds", cfg.rounds);
    cfg.k_factor = param(spec.params, "k_factor", cfg.k_factor);
    cfg.rng_seed = spec.seed;
    report.params["rounds"] = cfg.rounds;
    report.params["k_factor"] = cfg.k_factor;
    std::vector<arena::Battle> battles;
    for (const auto& j : store_.journal(channels::kBattles)) battles.push_back(arena::battle_from_json(j));
    const auto ratings_path = artifact(spec.params, "output", "ratings.csv");
    const auto matrix_path = artifact(spec.params, "matrix_output", "win_rates.csv");
    std::vector<arena::ModelRating> ratings;
    if (!battles.empty()) ratings = arena::bootstrap_ratings(battles, cfg);
    write_text_file(ratings_path, arena::ratings_csv(ratings));
    write_text_file(matrix_path, arena::win_rate_csv(arena::win_rate_matrix(battles)));
    report.artifacts = {ratings_path.string(), matrix_path.string()};
    Json table = Json::array();
    for (const auto& r : ratings) {
        table.push_back({{"model", r.model}, {"median", r.median}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}});
    }
    report.counts = {{"battles", battles.size()}, {"models", ratings.size()}, {"ratings", table}};
}

}  // namespace uipref::service
