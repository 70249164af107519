#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uipref/arena/elo.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/corpus/store.hpp"
#include "uipref/gateway/generation.hpp"
#include "uipref/pairgen/alignment.hpp"

namespace uipref::service {

enum class JobKind {
    kGenDescriptions,
    kGenCandidates,
    kRender,
    kFilter,
    kTransformFeedback,
    kTrainReward,
    kScore,
    kBuildPairs,
    kExportOrpo,
    kRatings,
};

inline constexpr std::array<JobKind, 10> kAllJobKinds = {
    JobKind::kGenDescriptions, JobKind::kGenCandidates, JobKind::kRender,    JobKind::kFilter,
    JobKind::kTransformFeedback, JobKind::kTrainReward, JobKind::kScore,     JobKind::kBuildPairs,
    JobKind::kExportOrpo,      JobKind::kRatings};

std::string_view to_string(JobKind kind);
JobKind parse_job_kind(std::string_view text);

struct JobSpec {
    JobKind kind = JobKind::kRatings;
    Json params = Json::object();
    std::uint64_t seed = 0;

    /// Checks parameter names and types for the kind.
    void validate() const;
};

JobSpec job_spec_from_json(const Json& j);
Json to_json(const JobSpec& spec);

struct JobReport {
    std::string job_id;
    JobKind kind = JobKind::kRatings;
    std::string status = "queued";  // queued | running | succeeded | failed
    std::uint64_t seed = 0;
    Json params = Json::object();  // echo with defaults filled in
    Json counts = Json::object();
    std::vector<std::string> artifacts;
    double duration_seconds = 0;
    std::string error;
};

Json to_json(const JobReport& report);

// Line formats for intermediate artifacts.
Json to_json(const pairgen::ScoredBatch& batch);
pairgen::ScoredBatch scored_batch_from_json(const Json& j);
Json to_json(const pairgen::AlignmentPair& pair);
pairgen::AlignmentPair alignment_pair_from_json(const Json& j);

/// Journal channels shared by the pipeline and the HTTP layer.
namespace channels {
inline constexpr const char* kAnnotations = "annotations";
inline constexpr const char* kBattles = "battles";
inline constexpr const char* kAgreement = "agreement";
inline constexpr const char* kArenaOutputs = "arena-outputs";
inline constexpr const char* kJobs = "jobs";
}  // namespace channels

/// Runs job specs synchronously against a store and gateway. Artifacts
/// (reward head, loss trace, scored batches, pairs, exports, rating CSVs)
/// are written under `artifact_dir`.
class Pipeline {
public:
    Pipeline(corpus::CorpusStore& store, gateway::Gateway& gateway, std::filesystem::path artifact_dir,
             arena::RatingConfig rating = {});

    /// Never throws for module errors: failures come back as status "failed"
    /// with the job context in `error`.
    JobReport run_job(const JobSpec& spec, std::string job_id = {});

    const std::filesystem::path& artifact_dir() const noexcept { return artifact_dir_; }

private:
    void gen_descriptions(const JobSpec& spec, JobReport& report);
    void gen_candidates(const JobSpec& spec, JobReport& report);
    void render(const JobSpec& spec, JobReport& report);
    void filter(const JobSpec& spec, JobReport& report);
    void transform_feedback(const JobSpec& spec, JobReport& report);
    void train_reward(const JobSpec& spec, JobReport& report);
    void score(const JobSpec& spec, JobReport& report);
    void build_pairs(const JobSpec& spec, JobReport& report);
    void export_orpo(const JobSpec& spec, JobReport& report);
    void ratings(const JobSpec& spec, JobReport& report);

    std::vector<corpus::GenerationBatch> selected_batches(const Json& params) const;
    std::filesystem::path artifact(const Json& params, const char* key, const char* fallback) const;

    corpus::CorpusStore& store_;
    gateway::Gateway& gateway_;
    std::filesystem::path artifact_dir_;
    arena::RatingConfig rating_;
};

}  // namespace uipref::service
