#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/testkit.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/corpus/store.hpp"
#include "uipref/gateway/prompts.hpp"
#include "uipref/pairgen/alignment.hpp"
#include "uipref/pairgen/orpo.hpp"
#include "uipref/pairgen/scoring.hpp"

namespace uipref::pairgen {
namespace {

using testkit::error_field;
using testkit::error_kind;

ScoredBatch scored(std::vector<double> values) {
    ScoredBatch b;
    b.description_id = "desc";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool failed = std::isinf(values[i]) && values[i] < 0;
        b.scores.push_back({"c" + std::to_string(i), static_cast<int>(i), values[i], failed, ""});
    }
    return b;
}

TEST(ScoreBatch, FailuresGetSentinel) {
    corpus::GenerationBatch batch;
    batch.candidate_ids = {"ok", "broken", "ok2"};
    const auto head = reward::RewardHead::identity(2);
    Eigen::VectorXd v(2);
    v << 1, 0;
    const auto out = score_batch(batch, head, v, [](const std::string& id) -> reward::EmbeddingVector {
        if (id == "broken") throw Error(ErrorKind::kBackend, "render crashed");
        Eigen::VectorXd x(2);
        x << (id == "ok" ? 1.0 : 0.0), 1;
        return x;
    });
    ASSERT_EQ(out.scores.size(), 3u);
    EXPECT_TRUE(out.scores[1].failed);
    EXPECT_EQ(out.scores[1].score, kFailedScore);
    EXPECT_FALSE(out.scores[1].error.empty());
    EXPECT_EQ(out.failures(), 1u);
    EXPECT_NEAR(out.scores[0].score, 100.0 / std::sqrt(2.0), 1e-12);
}

TEST(ScoreBatch, AllFailedIsEmptyBatch) {
    corpus::GenerationBatch batch;
    batch.candidate_ids = {"a", "b"};
    Eigen::VectorXd v = Eigen::VectorXd::Ones(2);
    EXPECT_EQ(error_kind([&] {
                  score_batch(batch, reward::RewardHead::identity(2), v,
                              [](const std::string&) -> reward::EmbeddingVector { throw Error(ErrorKind::kBackend, "x"); });
              }),
              ErrorKind::kEmptyBatch);
}

TEST(Selection, ChosenIsBestWithIndexTieBreak) {
    const std::vector<ScoredBatch> batches{scored({1.0, 5.0, 5.0, 2.0})};
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto r = select_pairs(batches, rng);
        ASSERT_EQ(r.selections.size(), 1u);
        EXPECT_EQ(r.selections[0].chosen, 1u);
        EXPECT_NE(r.selections[0].rejected, 1u);
    }
}

TEST(Selection, RejectedNeverFailedAndCoversOthers) {
    const std::vector<ScoredBatch> batches{scored({3.0, kFailedScore, 1.0, 2.0})};
    std::mt19937_64 rng(2);
    std::set<std::size_t> rejected;
    for (int i = 0; i < 200; ++i) rejected.insert(select_pairs(batches, rng).selections[0].rejected);
    EXPECT_EQ(rejected, (std::set<std::size_t>{2, 3}));
}

TEST(Selection, MultiplePairsDrawWithoutReplacement) {
    const std::vector<ScoredBatch> batches{scored({9, 1, 2, 3, 4})};
    std::mt19937_64 rng(3);
    const auto r = select_pairs(batches, rng, 4);
    std::set<std::size_t> rejected;
    for (const auto& s : r.selections) rejected.insert(s.rejected);
    EXPECT_EQ(rejected.size(), 4u);
    EXPECT_EQ(select_pairs(batches, rng, 10).selections.size(), 4u);
    EXPECT_EQ(error_field([&] { select_pairs(batches, rng, 0); }), "pairs_per_description");
}

TEST(Selection, UnusableBatchesAreSkipped) {
    const std::vector<ScoredBatch> batches{scored({1.0}), scored({kFailedScore, 2.0}), scored({}),
                                           scored({1.0, 2.0})};
    std::mt19937_64 rng(4);
    const auto r = select_pairs(batches, rng);
    EXPECT_EQ(r.skipped, 3u);
    ASSERT_EQ(r.selections.size(), 1u);
    EXPECT_EQ(r.selections[0].batch, 3u);
}

TEST(Alignment, UsesGenerationPromptAndSkipsIdenticalMarkup) {
    corpus::CorpusStore store;
    const auto d1 = store.add_description("a flashcard app");
    const auto b1 = store.begin_batch(d1, 0);
    const auto x = store.put_candidate(b1, "<p>same</p>");
    const auto y = store.put_candidate(b1, "<p>same</p>");
    const auto d2 = store.add_description("a podcast player");
    const auto b2 = store.begin_batch(d2, 0);
    const auto p = store.put_candidate(b2, "<p>good</p>");
    const auto q = store.put_candidate(b2, "<p>bad</p>");
    ScoredBatch s1{d1, b1, {{x, 0, 2.0, false, ""}, {y, 1, 1.0, false, ""}}};
    ScoredBatch s2{d2, b2, {{p, 0, 2.0, false, ""}, {q, 1, 3.0, false, ""}}};
    const std::vector<ScoredBatch> batches{s1, s2};
    std::mt19937_64 rng(5);
    const auto r = build_alignment_pairs(batches, store, rng);
    EXPECT_EQ(r.skipped, 1u);
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.pairs[0].prompt, gateway::generation_prompt("a podcast player"));
    EXPECT_EQ(r.pairs[0].chosen, "<p>bad</p>");
    EXPECT_EQ(r.pairs[0].rejected_id, p);
    EXPECT_EQ(r.pairs[0].chosen_score, 3.0);
}

TEST(Orpo, WhitespaceTruncation) {
    bool cut = false;
    EXPECT_EQ(truncate_whitespace_tokens("a b  c d", 3, cut), "a b  c");
    EXPECT_TRUE(cut);
    EXPECT_EQ(truncate_whitespace_tokens("  a b ", 2, cut), "  a b ");
    EXPECT_FALSE(cut);
    EXPECT_EQ(truncate_whitespace_tokens("", 1, cut), "");
    EXPECT_FALSE(cut);
}

TEST(Orpo, ExportRoundTripAndCap) {
    std::vector<AlignmentPair> pairs{{"d1", "prompt", "one two three", "four", "c1", "c2", 2.0, 1.0},
                                     {"d2", "prompt", "x", "y", "c3", "c4", 5.0, -1.0}};
    testkit::TempDir dir;
    const auto out = export_orpo(pairs, dir / "orpo.jsonl", 2);
    EXPECT_EQ(out.records, 2u);
    EXPECT_EQ(out.truncated, 1u);
    for (const auto& line : read_jsonl(dir / "orpo.jsonl")) EXPECT_NO_THROW(validate_orpo_record(line));
    const auto back = read_orpo(dir / "orpo.jsonl");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].chosen, "one two");
    EXPECT_TRUE(back[0].truncated);
    EXPECT_FALSE(back[1].truncated);
    EXPECT_EQ(back[1].rejected_score, -1.0);
    EXPECT_EQ(error_field([&] { export_orpo(pairs, dir / "x.jsonl", 0); }), "max_tokens");
}

TEST(Orpo, CustomTruncatorIsUsed) {
    std::vector<AlignmentPair> pairs{{"d1", "p", "abcdef", "abc", "c1", "c2", 1, 0}};
    testkit::TempDir dir;
    const Truncator by_chars = [](std::string_view t, int n, bool& cut) {
        cut = t.size() > static_cast<std::size_t>(n);
        return std::string(t.substr(0, static_cast<std::size_t>(n)));
    };
    EXPECT_EQ(export_orpo(pairs, dir / "o.jsonl", 4, by_chars).truncated, 1u);
    EXPECT_EQ(read_orpo(dir / "o.jsonl")[0].chosen, "abcd");
}

TEST(Orpo, ValidationNamesField) {
    Json r{{"prompt", "p"},         {"chosen", "c"},        {"rejected", "r"},    {"description_id", "d"},
           {"chosen_score", 1.0},   {"rejected_score", 0.0}, {"truncated", false}};
    EXPECT_NO_THROW(validate_orpo_record(r));
    r.erase("rejected");
    EXPECT_EQ(error_field([&] { validate_orpo_record(r); }), "rejected");
    r["rejected"] = "r";
    r["chosen_score"] = "high";
    EXPECT_EQ(error_field([&] { validate_orpo_record(r); }), "chosen_score");
}

}  // namespace
}  // namespace uipref::pairgen
