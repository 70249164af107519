#include "uipref/reward/trainer.hpp"

#include <cmath>
#include <cstdio>

#include "uipref/common/error.hpp"

namespace uipref::reward {

void TrainerConfig::validate() const {
    if (max_steps < 0) throw ValidationError("max_steps", "max_steps must be non-negative");
    if (batch_size < 1) throw ValidationError("batch_size", "batch_size must be positive");
    if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
        throw ValidationError("learning_rate", "learning rate must be positive");
    }
    if (!(weight_decay >= 0) || !std::isfinite(weight_decay)) {
        throw ValidationError("weight_decay", "weight decay must be non-negative");
    }
    if (!(margin >= 0) || !std::isfinite(margin)) throw ValidationError("margin", "margin must be non-negative");
    if (!(aug_prob >= 0 && aug_prob <= 1)) throw ValidationError("aug_prob", "aug_prob must lie in [0, 1]");
}

Json to_json(const TrainerConfig& cfg) {
    return {{"steps", cfg.max_steps},
            {"batch", cfg.batch_size},
            {"lr", cfg.learning_rate},
            {"decay", cfg.weight_decay},
            {"margin", cfg.margin},
            {"aug", cfg.aug_prob},
            {"seed", cfg.rng_seed},
            {"loss_sign", cfg.loss_sign == LossSign::kCorrected ? "corrected" : "as-printed"}};
}

TrainerConfig trainer_config_from_json(const Json& j) {
    TrainerConfig cfg;
    try {
        cfg.max_steps = j.value("steps", cfg.max_steps);
        cfg.batch_size = j.value("batch", cfg.batch_size);
        cfg.learning_rate = j.value("lr", cfg.learning_rate);
        cfg.weight_decay = j.value("decay", cfg.weight_decay);
        cfg.margin = j.value("margin", cfg.margin);
        cfg.aug_prob = j.value("aug", cfg.aug_prob);
        cfg.rng_seed = j.value("seed", cfg.rng_seed);
        const auto sign = j.value("loss_sign", std::string("corrected"));
        if (sign == "as-printed") {
            cfg.loss_sign = LossSign::kAsPrinted;
        } else if (sign != "corrected") {
            throw ValidationError("loss_sign", "loss_sign must be corrected or as-printed");
        }
    } catch (const Json::exception& e) {
        throw ValidationError("trainer", std::string("bad trainer parameter: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::vector<EmbeddedPair> label_synthetic(std::span<const CandidatePair> pool, const RewardHead& head) {
    std::vector<EmbeddedPair> out;
    out.reserve(pool.size());
    for (const auto& p : pool) {
        const bool a_wins = score(p.a, p.text, head) >= score(p.b, p.text, head);
        out.push_back({p.text, a_wins ? p.a : p.b, a_wins ? p.b : p.a});
    }
    return out;
}

std::vector<BatchSlot> sample_training_batch(std::size_t designer_count, std::size_t synthetic_count,
                                             const TrainerConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    if (designer_count == 0) throw Error(ErrorKind::kConfiguration, "no designer pairs to train on");
    if (cfg.aug_prob > 0 && synthetic_count == 0) {
        throw Error(ErrorKind::kConfiguration, "aug_prob > 0 but the synthetic pool is empty");
    }
    std::bernoulli_distribution augment(cfg.aug_prob);
    std::vector<BatchSlot> slots;
    slots.reserve(static_cast<std::size_t>(cfg.batch_size));
    for (int i = 0; i < cfg.batch_size; ++i) {
        const bool synthetic = augment(rng);
        const auto n = synthetic ? synthetic_count : designer_count;
        slots.push_back({synthetic, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)});
    }
    return slots;
}

double batch_loss(const RewardHead& head, std::span<const EmbeddedPair> designer,
                  std::span<const EmbeddedPair> synthetic, std::span<const BatchSlot> slots, const TrainerConfig& cfg,
                  Eigen::MatrixXd* gradient) {
    if (slots.empty()) return 0.0;
    if (gradient) *gradient = Eigen::MatrixXd::Zero(head.dimension(), head.dimension());
    double total = 0.0;
    for (const auto& slot : slots) {
        const auto& pair = slot.synthetic ? synthetic[slot.index] : designer[slot.index];
        const double s_plus = score(pair.chosen, pair.text, head);
        const double s_minus = score(pair.rejected, pair.text, head);
        total += margin_loss(s_plus, s_minus, cfg.margin, cfg.loss_sign);
        if (gradient) {
            const auto g = margin_subgradient(s_plus, s_minus, cfg.margin, cfg.loss_sign);
            if (g.d_plus != 0.0) *gradient += g.d_plus * score_gradient(pair.chosen, pair.text, head);
            if (g.d_minus != 0.0) *gradient += g.d_minus * score_gradient(pair.rejected, pair.text, head);
        }
    }
    const double n = static_cast<double>(slots.size());
    if (gradient) *gradient /= n;
    return total / n;
}

TrainResult train(const RewardHead& head, std::span<const EmbeddedPair> designer,
                  std::span<const CandidatePair> pool, const TrainerConfig& cfg) {
    cfg.validate();
    head.validate();
    TrainResult result{head, {}};
    if (cfg.max_steps == 0) return result;

    std::mt19937_64 rng(cfg.rng_seed);
    Eigen::MatrixXd grad;
    auto& w = result.head.weight;
    for (int step = 0; step < cfg.max_steps; ++step) {
        auto slots = sample_training_batch(designer.size(), pool.size(), cfg, rng);
        // Pool pairs drawn this step are ordered by the head as it stands now.
        std::vector<CandidatePair> drawn;
        for (auto& s : slots) {
            if (!s.synthetic) continue;
            drawn.push_back(pool[s.index]);
            s.index = drawn.size() - 1;
        }
        const auto synthetic = label_synthetic(drawn, result.head);
        double loss = 0.0;
        try {
            loss = batch_loss(result.head, designer, synthetic, slots, cfg, &grad);
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " at step " + std::to_string(step), step);
        }
        if (!std::isfinite(loss) || !grad.allFinite()) {
            throw NumericError("non-finite loss at step " + std::to_string(step), step);
        }
        w -= cfg.learning_rate * grad + (cfg.learning_rate * cfg.weight_decay) * w;
        std::size_t synthetic_slots = 0;
        for (const auto& s : slots) synthetic_slots += s.synthetic;
        result.trace.push_back(
            {step, loss, static_cast<double>(synthetic_slots) / static_cast<double>(slots.size())});
        ++result.head.trained_steps;
    }
    return result;
}

double pairwise_accuracy(const RewardHead& head, std::span<const EmbeddedPair> pairs) {
    if (pairs.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& p : pairs) correct += score(p.chosen, p.text, head) > score(p.rejected, p.text, head);
    return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

std::string loss_trace_csv(std::span<const LossTracePoint> trace) {
    std::string out = "step,mean_loss,synthetic_fraction\n";
    char line[96];
    for (const auto& p : trace) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", p.step, p.mean_loss, p.synthetic_fraction);
        out += line;
    }
    return out;
}

}  // namespace uipref::reward
