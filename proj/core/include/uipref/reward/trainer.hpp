#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "uipref/common/jsonl.hpp"
#include "uipref/reward/loss.hpp"
#include "uipref/reward/scorer.hpp"

namespace uipref::reward {

struct TrainerConfig {
    int max_steps = 100;
    int batch_size = 32;
    double weight_decay = 0.2;
    double learning_rate = 1e-3;
    double margin = kDefaultMargin;
    double aug_prob = 0.5;
    std::uint64_t rng_seed = 0;
    LossSign loss_sign = LossSign::kCorrected;

    void validate() const;
};

Json to_json(const TrainerConfig& cfg);
TrainerConfig trainer_config_from_json(const Json& json);

/// A preference pair resolved to embeddings: the description's text
/// direction and the two image embeddings.
struct EmbeddedPair {
    EmbeddingVector text;
    EmbeddingVector chosen;
    EmbeddingVector rejected;
};

/// Two candidates of one generation batch, not yet ordered.
struct CandidatePair {
    EmbeddingVector text;
    EmbeddingVector a;
    EmbeddingVector b;
};

/// Orders each pool pair by the given head's scores (higher = chosen; a
/// wins ties).
std::vector<EmbeddedPair> label_synthetic(std::span<const CandidatePair> pool, const RewardHead& head);

struct BatchSlot {
    bool synthetic = false;
    std::size_t index = 0;
};

/// Each slot independently comes from the synthetic pool with probability
/// aug_prob, otherwise from the designer pairs; indices are uniform.
std::vector<BatchSlot> sample_training_batch(std::size_t designer_count, std::size_t synthetic_count,
                                             const TrainerConfig& cfg, std::mt19937_64& rng);

/// Mean margin loss of the batch; fills `gradient` (d mean loss / d W) when non-null.
double batch_loss(const RewardHead& head, std::span<const EmbeddedPair> designer,
                  std::span<const EmbeddedPair> synthetic, std::span<const BatchSlot> slots, const TrainerConfig& cfg,
                  Eigen::MatrixXd* gradient = nullptr);

struct LossTracePoint {
    int step = 0;
    double mean_loss = 0;
    double synthetic_fraction = 0;
};

struct TrainResult {
    RewardHead head;
    std::vector<LossTracePoint> trace;
};

/// Exactly cfg.max_steps steps of SGD with decoupled weight decay on the
/// head weights: W <- W - lr * grad - lr * decay * W. Pool pairs drawn into
/// a batch are labeled by the current head before the loss is taken.
TrainResult train(const RewardHead& head, std::span<const EmbeddedPair> designer,
                  std::span<const CandidatePair> pool, const TrainerConfig& cfg);

/// Fraction of pairs whose chosen side scores strictly higher.
double pairwise_accuracy(const RewardHead& head, std::span<const EmbeddedPair> pairs);

/// CSV with header "step,mean_loss,synthetic_fraction".
std::string loss_trace_csv(std::span<const LossTracePoint> trace);

}  // namespace uipref::reward
