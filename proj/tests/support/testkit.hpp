#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uipref/arena/battle.hpp"
#include "uipref/common/error.hpp"
#include "uipref/htmlkit/geometry.hpp"
#include "uipref/htmlkit/grounding.hpp"
#include "uipref/reward/trainer.hpp"

namespace uipref::testkit {

std::filesystem::path fixture_dir();

/// Kind of the library error thrown by `fn`; nullopt when nothing is thrown.
std::optional<ErrorKind> error_kind(const std::function<void()>& fn);
/// Field named by the ValidationError thrown by `fn`; empty otherwise.
std::string error_field(const std::function<void()>& fn);

/// Fresh directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// Oracles. Each is written from the definition, without calling the code
// under test.

Eigen::VectorXd combine_oracle(const Eigen::VectorXd& pos, const Eigen::VectorXd& neg, const Eigen::VectorXd& empty);

/// Indices of the k best scores from a complete sort: higher score first,
/// lower index on ties, NaN after every number.
std::vector<std::size_t> topk_oracle(const std::vector<double>& scores, int k);

struct SyntheticGeometry {
    htmlkit::GeometryMap map;
    std::map<std::string, int> preorder;  // element path -> document position
    std::map<std::string, int> depth;
};

/// Random element tree (1..max_elements nodes) laid out on a coarse grid so
/// that equal areas and equal IoUs occur. Boxes are listed in shuffled order.
SyntheticGeometry random_geometry(std::mt19937_64& rng, int max_elements);

/// Exhaustive grounding: scores every element and keeps the best under the
/// stated ordering.
std::string match_oracle(const htmlkit::Region& region, const SyntheticGeometry& g);

struct EloTrace {
    std::map<std::string, double> ratings;
    std::vector<double> sum_drift;  // |delta_a + delta_b| per battle
};

EloTrace elo_oracle(const std::vector<arena::Battle>& battles, double initial, double k, double base, double scale);

std::vector<arena::Battle> random_battles(std::mt19937_64& rng, int count, int models);

/// Pairs whose chosen embedding clusters at +u and rejected at -u (plus
/// isotropic noise of norm about `noise`); text directions are `t` plus
/// a little noise.
std::vector<reward::EmbeddedPair> separable_pairs(std::mt19937_64& rng, int count, const Eigen::VectorXd& u,
                                                  const Eigen::VectorXd& t, double noise);
Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim);

// End-to-end run over stub backends ------------------------------------------

struct PipelineRun {
    std::size_t descriptions = 0;
    std::size_t candidates = 0;
    std::vector<std::size_t> retained_per_batch;
    std::map<std::string, std::size_t> pairs_by_provenance;
    std::size_t preference_pairs = 0;
    std::size_t trace_steps = 0;
    std::size_t alignment_pairs = 0;
    std::size_t orpo_records = 0;
    bool orpo_valid = false;
    std::vector<std::string> failures;  // job errors, empty on success
    std::map<std::string, std::string> artifacts;  // name -> bytes
    double seconds = 0;
};

/// gen-descriptions (2) -> gen-candidates (32 each) -> render -> filter
/// (top 8) -> one annotation per interface -> transform-feedback ->
/// train-reward -> score -> build-pairs -> export-orpo.
PipelineRun run_stub_pipeline(std::uint64_t seed, const std::filesystem::path& workdir, int candidates = 32,
                              int embedding_dim = 64);

}  // namespace uipref::testkit
