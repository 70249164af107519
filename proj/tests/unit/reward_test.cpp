#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/testkit.hpp"
#include "uipref/reward/embedding.hpp"
#include "uipref/reward/head_io.hpp"
#include "uipref/reward/loss.hpp"
#include "uipref/reward/scorer.hpp"
#include "uipref/reward/topk.hpp"
#include "uipref/reward/trainer.hpp"

namespace uipref::reward {
namespace {

using testkit::error_field;
using testkit::error_kind;

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

TEST(Combine, WorkedExample) {
    const auto v = combine({vec({1, 0}), vec({0, 1}), vec({1, 1})});
    EXPECT_DOUBLE_EQ(v[0], 0.95);
    EXPECT_DOUBLE_EQ(v[1], -0.5);
    EXPECT_EQ(error_kind([] { combine({vec({1, 0}), vec({0, 1, 0}), vec({1, 1})}); }), ErrorKind::kConfiguration);
}

TEST(Combine, MatchesOracleOnRandomInputs) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto p = testkit::random_unit(rng, 16);
        const auto n = testkit::random_unit(rng, 16);
        const auto e = testkit::random_unit(rng, 16);
        EXPECT_TRUE(combine({p, n, e}).isApprox(testkit::combine_oracle(p, n, e), 1e-15));
    }
}

TEST(Score, IdentityHeadIsScaledCosine) {
    const auto head = RewardHead::identity(2);
    EXPECT_NEAR(score(vec({1, 0}), vec({1, 1}), head), 100.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(score(vec({3, 0}), vec({5, 5}), head), 100.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(score(vec({0, 1}), vec({0, -2}), head), -100.0, 1e-12);
    EXPECT_EQ(error_kind([&] { score(vec({1, 0, 0}), vec({1, 1}), head); }), ErrorKind::kConfiguration);
}

TEST(Score, GradientMatchesFiniteDifference) {
    std::mt19937_64 rng(9);
    auto head = RewardHead::identity(6);
    head.weight += 0.3 * Eigen::MatrixXd::Random(6, 6);
    const auto x = testkit::random_unit(rng, 6);
    const auto v = testkit::random_unit(rng, 6);
    const auto g = score_gradient(x, v, head);
    const double h = 1e-6;
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
            auto up = head;
            auto down = head;
            up.weight(r, c) += h;
            down.weight(r, c) -= h;
            EXPECT_NEAR(g(r, c), (score(x, v, up) - score(x, v, down)) / (2 * h), 1e-5);
        }
    }
}

TEST(Loss, WorkedExamples) {
    EXPECT_DOUBLE_EQ(margin_loss(1.0, 0.5, 0.01), 0.0);
    EXPECT_DOUBLE_EQ(margin_loss(0.5, 1.0, 0.01), 0.51);
    EXPECT_DOUBLE_EQ(margin_loss(1.0, 1.0, 0.01), 0.01);
    EXPECT_DOUBLE_EQ(margin_loss(1.0, 0.5, 0.01, LossSign::kAsPrinted), 0.51);
    EXPECT_EQ(error_field([] { margin_loss(1, 0, -1); }), "margin");
}

TEST(Loss, SubgradientSigns) {
    const auto active = margin_subgradient(0.0, 1.0, 0.01);
    EXPECT_EQ(active.d_plus, -1.0);
    EXPECT_EQ(active.d_minus, 1.0);
    const auto idle = margin_subgradient(2.0, 0.0, 0.01);
    EXPECT_EQ(idle.d_plus, 0.0);
    EXPECT_EQ(idle.d_minus, 0.0);
}

TEST(Loss, InvariantUnderCommonShift) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        const double c = u(rng);
        EXPECT_NEAR(margin_loss(a, b, 0.01), margin_loss(a + c, b + c, 0.01), 1e-9);
        EXPECT_GE(margin_loss(a, b, 0.01), 0.0);
    }
}

TEST(Trainer, ConfigDefaultsAndValidation) {
    const TrainerConfig cfg;
    EXPECT_EQ(cfg.max_steps, 100);
    EXPECT_EQ(cfg.batch_size, 32);
    EXPECT_DOUBLE_EQ(cfg.weight_decay, 0.2);
    EXPECT_DOUBLE_EQ(cfg.learning_rate, 1e-3);
    EXPECT_DOUBLE_EQ(cfg.margin, 1e-2);
    EXPECT_DOUBLE_EQ(cfg.aug_prob, 0.5);
    auto bad = cfg;
    bad.aug_prob = 1.5;
    EXPECT_EQ(error_field([&] { bad.validate(); }), "aug_prob");
    bad = cfg;
    bad.batch_size = 0;
    EXPECT_EQ(error_field([&] { bad.validate(); }), "batch_size");
    EXPECT_EQ(trainer_config_from_json(to_json(cfg)).batch_size, 32);
}

TEST(Trainer, AugmentedFractionIsAboutAugProb) {
    TrainerConfig cfg;
    cfg.batch_size = 10000;
    std::mt19937_64 rng(12);
    const auto slots = sample_training_batch(7, 5, cfg, rng);
    std::size_t synthetic = 0;
    for (const auto& s : slots) {
        synthetic += s.synthetic;
        EXPECT_LT(s.index, s.synthetic ? 5u : 7u);
    }
    EXPECT_NEAR(static_cast<double>(synthetic) / slots.size(), 0.5, 0.02);
}

TEST(Trainer, EmptyInputsAreConfigurationErrors) {
    TrainerConfig cfg;
    std::mt19937_64 rng(1);
    EXPECT_EQ(error_kind([&] { sample_training_batch(0, 3, cfg, rng); }), ErrorKind::kConfiguration);
    EXPECT_EQ(error_kind([&] { sample_training_batch(3, 0, cfg, rng); }), ErrorKind::kConfiguration);
    cfg.aug_prob = 0;
    EXPECT_NO_THROW(sample_training_batch(3, 0, cfg, rng));
}

TEST(Trainer, SyntheticLabelsFollowTheHead) {
    const auto head = RewardHead::identity(2);
    const std::vector<CandidatePair> pool{{vec({1, 0}), vec({-1, 0}), vec({1, 0})},
                                          {vec({1, 0}), vec({1, 0}), vec({0, 1})}};
    const auto labeled = label_synthetic(pool, head);
    ASSERT_EQ(labeled.size(), 2u);
    EXPECT_EQ(labeled[0].chosen, vec({1, 0}));
    EXPECT_EQ(labeled[1].chosen, vec({1, 0}));
    EXPECT_EQ(labeled[1].rejected, vec({0, 1}));
}

TEST(Trainer, ZeroStepsLeavesHeadUnchanged) {
    std::mt19937_64 rng(5);
    const auto u = testkit::random_unit(rng, 8);
    const auto pairs = testkit::separable_pairs(rng, 10, u, testkit::random_unit(rng, 8), 0.5);
    TrainerConfig cfg;
    cfg.max_steps = 0;
    cfg.aug_prob = 0;
    const auto head = RewardHead::identity(8);
    const auto r = train(head, pairs, {}, cfg);
    EXPECT_EQ(r.head, head);
    EXPECT_TRUE(r.trace.empty());
}

TEST(Trainer, InactiveLossOnlyDecays) {
    const std::vector<EmbeddedPair> pairs{{vec({1, 0}), vec({1, 0}), vec({-1, 0})}};
    TrainerConfig cfg;
    cfg.max_steps = 1;
    cfg.aug_prob = 0;
    const auto r = train(RewardHead::identity(2), pairs, {}, cfg);
    EXPECT_TRUE(r.head.weight.isApprox(Eigen::MatrixXd::Identity(2, 2) * (1 - 1e-3 * 0.2), 1e-15));
    EXPECT_EQ(r.head.trained_steps, 1);
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].mean_loss, 0.0);
}

TEST(Trainer, DeterministicForSeed) {
    std::mt19937_64 rng(6);
    const auto u = testkit::random_unit(rng, 8);
    const auto t = testkit::random_unit(rng, 8);
    const auto pairs = testkit::separable_pairs(rng, 20, u, t, 0.8);
    std::vector<CandidatePair> pool;
    for (const auto& p : pairs) pool.push_back({p.text, p.rejected, p.chosen});
    TrainerConfig cfg;
    cfg.max_steps = 20;
    cfg.rng_seed = 77;
    const auto a = train(RewardHead::identity(8), pairs, pool, cfg);
    const auto b = train(RewardHead::identity(8), pairs, pool, cfg);
    EXPECT_EQ(a.head, b.head);
    EXPECT_EQ(a.trace.size(), 20u);
    cfg.rng_seed = 78;
    EXPECT_FALSE(train(RewardHead::identity(8), pairs, pool, cfg).head == a.head);
}

TEST(Trainer, TraceCsv) {
    const std::vector<LossTracePoint> trace{{1, 0.5, 0.25}, {2, 0.0, 0.5}};
    const auto csv = loss_trace_csv(trace);
    EXPECT_TRUE(csv.starts_with("step,mean_loss,synthetic_fraction\n1,"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(TopK, OrdersByScoreThenIndex) {
    corpus::GenerationBatch batch;
    batch.candidate_ids = {"a", "b", "c", "d", "e"};
    const std::vector<double> scores{1.0, 3.0, 3.0, std::nan(""), 2.0};
    EXPECT_EQ(topk_filter(batch, scores, 3), (std::vector<std::string>{"b", "c", "e"}));
    EXPECT_EQ(topk_filter(batch, scores, 10), (std::vector<std::string>{"b", "c", "e", "a", "d"}));
    EXPECT_EQ(error_kind([&] { topk_filter(batch, scores, 0); }), ErrorKind::kInvalidInput);
    EXPECT_EQ(error_kind([&] { topk_filter(batch, std::vector<double>{1.0}, 2); }), ErrorKind::kInvalidInput);
}

TEST(TopK, MatchesOracle) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> coarse(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        corpus::GenerationBatch batch;
        std::vector<double> scores;
        for (int i = 0; i < 20; ++i) {
            batch.candidate_ids.push_back("c" + std::to_string(i));
            scores.push_back(coarse(rng));
        }
        const int k = 1 + trial % 20;
        const auto got = topk_filter(batch, scores, k);
        const auto want = testkit::topk_oracle(scores, k);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], batch.candidate_ids[want[i]]);
    }
}

TEST(HeadIo, RoundTripsExactly) {
    auto head = RewardHead::identity(4, 50.0);
    head.weight(1, 2) = 0.1 + 0.2;
    head.weight(3, 0) = -1e-300;
    head.trained_steps = 17;
    testkit::TempDir dir;
    save_head(head, dir / "head.json", TrainerConfig{});
    EXPECT_EQ(load_head(dir / "head.json"), head);
    auto j = head_to_json(head);
    j["format"] = "other";
    EXPECT_EQ(error_field([&] { head_from_json(j); }), "format");
    j = head_to_json(head);
    j["weights"].erase(0);
    EXPECT_EQ(error_field([&] { head_from_json(j); }), "weights");
}

}  // namespace
}  // namespace uipref::reward
