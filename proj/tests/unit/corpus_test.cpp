#include <gtest/gtest.h>

#include "support/testkit.hpp"
#include "uipref/common/hash.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/corpus/dataset.hpp"
#include "uipref/corpus/store.hpp"
#include "uipref/corpus/text.hpp"

namespace uipref::corpus {
namespace {

using testkit::error_kind;

TEST(NormalizeText, LowercasesAndCollapsesWhitespace) {
    EXPECT_EQ(normalize_text("  A   Login\tScreen \n"), "a login screen");
    EXPECT_EQ(normalize_text(""), "");
}

TEST(DescriptionSet, DeduplicatesUnderNormalization) {
    DescriptionSet set;
    EXPECT_TRUE(set.insert("A login screen"));
    EXPECT_FALSE(set.insert("a  LOGIN screen"));
    EXPECT_TRUE(set.contains("A LOGIN SCREEN"));
    const std::vector<std::string> more{"settings", "Settings ", "profile"};
    EXPECT_EQ(set.merge(more), 2u);
    EXPECT_EQ(set.texts(), (std::vector<std::string>{"A login screen", "settings", "profile"}));
}

TEST(DedupMerge, KeepsExistingOrderAndCountsAccepted) {
    const std::vector<std::string> existing{"a", "b"};
    const std::vector<std::string> incoming{"B", "c", "c", "d"};
    const auto r = dedup_merge(existing, incoming);
    EXPECT_EQ(r.merged, (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_EQ(r.accepted, 2u);
}

TEST(SplitGuard, FlagsOnlyExactOverlap) {
    const std::vector<std::string> train{"a login screen", "music player"};
    const std::vector<std::string> eval{"A Login Screen", "a sign-in screen"};
    const auto r = split_guard(train, eval);
    ASSERT_EQ(r.exact_overlaps.size(), 1u);
    EXPECT_FALSE(r.empty());
}

struct SeededStore {
    CorpusStore store;
    std::string desc;
    std::string batch;
    std::string c0;
    std::string c1;
    std::string shot0;
    std::string shot1;

    SeededStore() {
        desc = store.add_description("a login screen");
        batch = store.begin_batch(desc, 42);
        c0 = store.put_candidate(batch, "<html><body>one</body></html>");
        c1 = store.put_candidate(batch, "<html><body>two</body></html>");
        shot0 = store.put_image(desc, "png-0");
        shot1 = store.put_image(desc, "png-1");
    }
};

TEST(CorpusStore, BlobsAreContentAddressed) {
    CorpusStore store;
    const auto h = store.put_blob("hello");
    EXPECT_EQ(h, sha256_hex("hello"));
    EXPECT_EQ(store.put_blob("hello"), h);
    EXPECT_EQ(store.blob_count(), 1u);
    EXPECT_EQ(store.blob(h), "hello");
    EXPECT_EQ(error_kind([&] { store.blob("missing"); }), ErrorKind::kNotFound);
}

TEST(CorpusStore, DescriptionsRejectDuplicatesAndBlanks) {
    CorpusStore store;
    const auto id = store.add_description("A login screen", Split::kEval);
    EXPECT_EQ(store.description(id).split, Split::kEval);
    EXPECT_EQ(store.find_description("a login   screen"), id);
    EXPECT_EQ(error_kind([&] { store.add_description("a LOGIN screen"); }), ErrorKind::kValidation);
    EXPECT_EQ(error_kind([&] { store.add_description("   "); }), ErrorKind::kValidation);
    EXPECT_EQ(error_kind([&] { store.description("nope"); }), ErrorKind::kNotFound);
}

TEST(CorpusStore, CandidatesKeepBatchOrder) {
    SeededStore s;
    const auto b = s.store.batch(s.batch);
    ASSERT_EQ(b.candidate_ids.size(), 2u);
    EXPECT_EQ(b.candidate_ids[0], s.c0);
    EXPECT_EQ(s.store.candidate(s.c1).batch_index, 1);
    EXPECT_EQ(s.store.candidate_html(s.c0), "<html><body>one</body></html>");
    EXPECT_EQ(b.sampler_seed, 42u);
}

TEST(CorpusStore, RetainedIdsMustBelongToBatch) {
    SeededStore s;
    s.store.set_retained(s.batch, {s.c1});
    EXPECT_EQ(s.store.batch(s.batch).retained_ids, std::vector<std::string>{s.c1});
    EXPECT_EQ(error_kind([&] { s.store.set_retained(s.batch, {"cand-x"}); }), ErrorKind::kIntegrity);
}

TEST(CorpusStore, RenderRefsMustBeStored) {
    SeededStore s;
    EXPECT_EQ(error_kind([&] { s.store.set_render(s.c0, "deadbeef", "deadbeef"); }), ErrorKind::kIntegrity);
    const auto geo = s.store.put_blob("geometry");
    s.store.set_render(s.c0, s.shot0, geo);
    EXPECT_EQ(s.store.candidate(s.c0).screenshot_ref, s.shot0);
}

TEST(CorpusStore, ScoresMustBeFinite) {
    SeededStore s;
    s.store.set_score(s.c0, 3.5);
    EXPECT_EQ(s.store.candidate(s.c0).score, 3.5);
    EXPECT_EQ(error_kind([&] { s.store.set_score(s.c0, std::nan("")); }), ErrorKind::kNumeric);
}

TEST(CorpusStore, PreferencePairsAreChecked) {
    SeededStore s;
    s.store.add_preference({s.desc, s.shot0, s.shot1, Provenance::kRanking, "designer-1"});
    EXPECT_EQ(s.store.preferences().size(), 1u);
    EXPECT_EQ(s.store.preferences().count(Provenance::kRanking), 1u);
    // identical refs
    EXPECT_EQ(error_kind([&] { s.store.add_preference({s.desc, s.shot0, s.shot0, Provenance::kRanking, ""}); }),
              ErrorKind::kIntegrity);
    // dangling ref
    EXPECT_EQ(error_kind([&] { s.store.add_preference({s.desc, s.shot0, "abc", Provenance::kRanking, ""}); }),
              ErrorKind::kIntegrity);
    // image of another description
    const auto other = s.store.add_description("a music player");
    const auto foreign = s.store.put_image(other, "png-x");
    EXPECT_EQ(error_kind([&] { s.store.add_preference({s.desc, s.shot0, foreign, Provenance::kRanking, ""}); }),
              ErrorKind::kIntegrity);
    // candidate ids resolve as refs too
    s.store.add_preference({s.desc, s.c0, s.c1, Provenance::kCommenting, ""});
    EXPECT_EQ(s.store.preferences().size(), 2u);
}

TEST(CorpusStore, JournalsAreAppendOnly) {
    CorpusStore store;
    store.append_journal("battles", {{"n", 1}});
    store.append_journal("battles", {{"n", 2}});
    store.append_journal("other", {{"n", 3}});
    ASSERT_EQ(store.journal("battles").size(), 2u);
    EXPECT_EQ(store.journal("battles")[1]["n"], 2);
    EXPECT_EQ(store.journal_size("missing"), 0u);
}

TEST(CorpusStore, PersistentStoreReplaysManifest) {
    testkit::TempDir dir;
    std::string desc;
    std::string c0;
    std::string shot0;
    {
        CorpusStore store(dir.path());
        desc = store.add_description("a login screen");
        const auto batch = store.begin_batch(desc, 1);
        c0 = store.put_candidate(batch, "<p>x</p>");
        const auto c1 = store.put_candidate(batch, "<p>y</p>");
        shot0 = store.put_image(desc, "png-0");
        const auto shot1 = store.put_image(desc, "png-1");
        store.set_render(c0, shot0, store.put_blob("g"));
        store.set_retained(batch, {c1, c0});
        store.add_preference({desc, shot0, shot1, Provenance::kSketching, "d"});
        store.append_journal("annotations", {{"record_id", "r1"}});
    }
    CorpusStore reopened(dir.path());
    EXPECT_EQ(reopened.description(desc).text, "a login screen");
    EXPECT_EQ(reopened.candidate(c0).screenshot_ref, shot0);
    EXPECT_EQ(reopened.candidate_html(c0), "<p>x</p>");
    EXPECT_EQ(reopened.retained_pool().size(), 2u);
    EXPECT_EQ(reopened.preferences().count(Provenance::kSketching), 1u);
    EXPECT_EQ(reopened.journal("annotations").size(), 1u);
    EXPECT_TRUE(reopened.image_belongs_to(shot0, desc));
    // ids keep advancing after replay
    const auto next = reopened.add_description("another screen");
    EXPECT_NE(next, desc);
}

TEST(Dataset, ExportImportRoundTrip) {
    SeededStore s;
    PreferenceDataset data;
    data.add({s.desc, s.shot0, s.shot1, Provenance::kRevising, "d1"});
    data.add({s.desc, s.shot1, s.shot0, Provenance::kSynthetic, ""});
    testkit::TempDir dir;
    EXPECT_EQ(export_preferences(data, s.store, dir / "prefs.jsonl"), 2u);
    const auto lines = read_jsonl(dir / "prefs.jsonl");
    EXPECT_EQ(lines[0]["description"], "a login screen");
    EXPECT_EQ(lines[0]["provenance"], "revising");
    EXPECT_EQ(import_preferences(dir / "prefs.jsonl"), data);
}

TEST(Dataset, DanglingReferenceAbortsExport) {
    SeededStore s;
    PreferenceDataset data;
    data.add({s.desc, s.shot0, "feedface", Provenance::kRanking, ""});
    testkit::TempDir dir;
    EXPECT_EQ(error_kind([&] { export_preferences(data, s.store, dir / "prefs.jsonl"); }), ErrorKind::kIntegrity);
    EXPECT_FALSE(std::filesystem::exists(dir / "prefs.jsonl"));
}

TEST(Dataset, RejectsIdenticalSides) {
    PreferenceDataset data;
    EXPECT_EQ(error_kind([&] { data.add({"d", "x", "x", Provenance::kRanking, ""}); }), ErrorKind::kIntegrity);
}

}  // namespace
}  // namespace uipref::corpus
