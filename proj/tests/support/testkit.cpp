#include "testkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

#include "uipref/common/error.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/corpus/store.hpp"
#include "uipref/feedback/records.hpp"
#include "uipref/gateway/generation.hpp"
#include "uipref/gateway/stubs.hpp"
#include "uipref/pairgen/orpo.hpp"
#include "uipref/service/jobs.hpp"

#ifndef UIPREF_FIXTURE_DIR
#define UIPREF_FIXTURE_DIR "tests/fixtures"
#endif

namespace uipref::testkit {

namespace fs = std::filesystem;

fs::path fixture_dir() { return UIPREF_FIXTURE_DIR; }

std::optional<ErrorKind> error_kind(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

std::string error_field(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.field();
    } catch (const Error&) {
    }
    return {};
}

TempDir::TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    for (;;) {
        path_ = fs::temp_directory_path() / ("uipref-test-" + std::to_string(rng()));
        if (fs::create_directory(path_)) return;
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

Eigen::VectorXd combine_oracle(const Eigen::VectorXd& pos, const Eigen::VectorXd& neg, const Eigen::VectorXd& empty) {
    Eigen::VectorXd out(pos.size());
    for (Eigen::Index i = 0; i < pos.size(); ++i) {
        out[i] = pos[i] - 0.5 * (0.9 * neg[i] + 0.1 * empty[i]);
    }
    return out;
}

std::vector<std::size_t> topk_oracle(const std::vector<double>& scores, int k) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const bool na = std::isnan(scores[a]);
        const bool nb = std::isnan(scores[b]);
        if (na != nb) return nb;
        if (!na && scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(k, 0))));
    return idx;
}

namespace {

struct TreeNode {
    std::string tag;
    int parent = -1;
    std::vector<int> children;
    htmlkit::Rect box;
};

double grid(std::mt19937_64& rng, double lo, double hi) {
    const int steps = static_cast<int>((hi - lo) / 10.0);
    if (steps <= 0) return lo;
    return lo + 10.0 * std::uniform_int_distribution<int>(0, steps)(rng);
}

double overlap(const htmlkit::Rect& a, const htmlkit::Rect& b) {
    const double w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
    const double h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
    return (w > 0 && h > 0) ? w * h : 0.0;
}

double iou_oracle(const htmlkit::Rect& a, const htmlkit::Rect& b) {
    const double inter = overlap(a, b);
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0 ? inter / uni : 0.0;
}

bool inside(const htmlkit::Rect& r, double x, double y) { return x >= r.x && x < r.x + r.w && y >= r.y && y < r.y + r.h; }

}  // namespace

SyntheticGeometry random_geometry(std::mt19937_64& rng, int max_elements) {
    static const char* kTags[] = {"div", "section", "p", "img", "button", "span", "h1", "ul", "li", "a"};
    const int n = std::uniform_int_distribution<int>(1, max_elements)(rng);
    std::vector<TreeNode> nodes;
    nodes.push_back({"html", -1, {}, {0, 0, 390, grid(rng, 400, 1200)}});
    for (int i = 1; i < n; ++i) {
        const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
        const auto& pb = nodes[static_cast<std::size_t>(parent)].box;
        htmlkit::Rect box = pb;
        const int mode = std::uniform_int_distribution<int>(0, 9)(rng);
        if (mode >= 2) {
            box.x = grid(rng, pb.x, pb.x + pb.w);
            box.y = grid(rng, pb.y, pb.y + pb.h);
            box.w = grid(rng, mode == 9 ? 0 : 10, std::max(10.0, pb.x + pb.w - box.x));
            box.h = grid(rng, mode == 9 ? 0 : 10, std::max(10.0, pb.y + pb.h - box.y));
        }  // otherwise the child fills its parent exactly
        nodes.push_back({kTags[std::uniform_int_distribution<int>(0, 9)(rng)], parent, {}, box});
        nodes[static_cast<std::size_t>(parent)].children.push_back(i);
    }
    SyntheticGeometry g;
    g.map.viewport = {390, 844};
    int order = 0;
    std::function<void(int, const std::string&, int)> walk = [&](int i, const std::string& path, int depth) {
        g.preorder[path] = order++;
        g.depth[path] = depth;
        g.map.boxes.push_back({path, nodes[static_cast<std::size_t>(i)].box});
        const auto& kids = nodes[static_cast<std::size_t>(i)].children;
        for (std::size_t c = 0; c < kids.size(); ++c) {
            const auto& child = nodes[static_cast<std::size_t>(kids[c])];
            walk(kids[c], path + "/" + child.tag + "[" + std::to_string(c) + "]", depth + 1);
        }
    };
    walk(0, "html[0]", 0);
    std::shuffle(g.map.boxes.begin(), g.map.boxes.end(), rng);
    return g;
}

std::string match_oracle(const htmlkit::Region& region, const SyntheticGeometry& g) {
    using Key = std::tuple<double, double, int, int>;  // smaller is better
    std::optional<std::pair<Key, std::string>> best;
    auto offer = [&](const Key& key, const std::string& path) {
        if (!best || key < best->first) best = {key, path};
    };
    double px = region.x;
    double py = region.y;
    if (region.kind == htmlkit::Region::Kind::kBox) {
        for (const auto& b : g.map.boxes) {
            const double v = iou_oracle(region.box, b.bbox);
            if (v > 0) offer({-v, b.bbox.w * b.bbox.h, g.preorder.at(b.element_path), 0}, b.element_path);
        }
        if (best) return best->second;
        px = region.box.x + region.box.w / 2;
        py = region.box.y + region.box.h / 2;
    }
    for (const auto& b : g.map.boxes) {
        if (inside(b.bbox, px, py)) {
            offer({b.bbox.w * b.bbox.h, -g.depth.at(b.element_path), g.preorder.at(b.element_path), 0}, b.element_path);
        }
    }
    if (best) return best->second;
    for (const auto& b : g.map.boxes) {
        offer({static_cast<double>(g.depth.at(b.element_path)), g.preorder.at(b.element_path), 0, 0}, b.element_path);
    }
    return best->second;
}

EloTrace elo_oracle(const std::vector<arena::Battle>& battles, double initial, double k, double base, double scale) {
    EloTrace t;
    for (const auto& b : battles) {
        t.ratings.emplace(b.model_a, initial);
        t.ratings.emplace(b.model_b, initial);
    }
    for (const auto& b : battles) {
        const double ra = t.ratings[b.model_a];
        const double rb = t.ratings[b.model_b];
        const double ea = 1.0 / (1.0 + std::pow(base, (rb - ra) / scale));
        const double eb = 1.0 / (1.0 + std::pow(base, (ra - rb) / scale));
        const double sa = b.winner == arena::Outcome::kA ? 1.0 : 0.0;
        const double sb = 1.0 - sa;
        const double da = k * (sa - ea);
        const double db = k * (sb - eb);
        t.ratings[b.model_a] = ra + da;
        t.ratings[b.model_b] = rb + db;
        t.sum_drift.push_back(std::abs(da + db));
    }
    return t;
}

std::vector<arena::Battle> random_battles(std::mt19937_64& rng, int count, int models) {
    std::vector<arena::Battle> out;
    std::uniform_int_distribution<int> pick(0, models - 1);
    for (int i = 0; i < count; ++i) {
        const int a = pick(rng);
        int b = pick(rng);
        while (b == a) b = pick(rng);
        out.push_back({"model-" + std::to_string(a), "model-" + std::to_string(b), "desc-" + std::to_string(i % 7),
                       (rng() & 1) ? arena::Outcome::kA : arena::Outcome::kB, "judge-1", "2024-01-01T00:00:00Z"});
    }
    return out;
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = n(rng);
    return v.normalized();
}

std::vector<reward::EmbeddedPair> separable_pairs(std::mt19937_64& rng, int count, const Eigen::VectorXd& u,
                                                  const Eigen::VectorXd& t, double noise) {
    const auto dim = static_cast<int>(u.size());
    std::normal_distribution<double> n(0.0, noise / std::sqrt(static_cast<double>(dim)));
    auto jitter = [&] {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = n(rng);
        return v;
    };
    std::vector<reward::EmbeddedPair> out;
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd text = t + 0.1 * jitter();
        Eigen::VectorXd chosen = u + jitter();
        Eigen::VectorXd rejected = -u + jitter();
        out.push_back({text, chosen, rejected});
    }
    return out;
}

PipelineRun run_stub_pipeline(std::uint64_t seed, const fs::path& workdir, int candidates, int embedding_dim) {
    using service::JobKind;
    const auto start = std::chrono::steady_clock::now();
    PipelineRun run;
    fs::create_directories(workdir);
    corpus::CorpusStore store;
    gateway::Gateway gw(gateway::make_stub_backends(seed, embedding_dim));
    const auto artifacts = workdir / "artifacts";
    service::Pipeline pipeline(store, gw, artifacts);
    auto job = [&](JobKind kind, Json params) {
        const auto report = pipeline.run_job({kind, std::move(params), seed});
        if (report.status != "succeeded") run.failures.push_back(report.error);
        return report;
    };

    job(JobKind::kGenDescriptions,
        {{"target_n", 2}, {"seed_examples", {"a login screen for a banking app", "a settings page with toggles"}}});
    job(JobKind::kGenCandidates, {{"n", candidates}});
    job(JobKind::kRender, Json::object());
    job(JobKind::kFilter, {{"k", 8}});

    run.descriptions = store.descriptions().size();
    std::vector<corpus::GenerationBatch> batches;
    for (const auto& b : store.batches()) {
        if (b.kind != corpus::BatchKind::kGeneration) continue;
        run.candidates += b.candidate_ids.size();
        run.retained_per_batch.push_back(b.retained_ids.size());
        batches.push_back(b);
    }
    if (batches.size() < 2 || batches[0].retained_ids.size() < 3 || batches[1].retained_ids.size() < 2) {
        run.failures.push_back("pipeline did not produce two filtered batches");
        return run;
    }

    const auto& r0 = batches[0].retained_ids;
    const auto& r1 = batches[1].retained_ids;
    std::vector<Json> records;
    records.push_back({{"kind", "ranking"},
                       {"record_id", "e2e-ranking"},
                       {"annotator_id", "designer-01"},
                       {"elapsed_seconds", 11.0},
                       {"description_id", batches[0].description_id},
                       {"left_candidate", r0[0]},
                       {"right_candidate", r0[1]},
                       {"winner", "right"}});
    records.push_back({{"kind", "commenting"},
                       {"record_id", "e2e-commenting"},
                       {"annotator_id", "designer-01"},
                       {"elapsed_seconds", 48.0},
                       {"candidate_id", r0[2]},
                       {"comments", {"make the header bigger", "add more spacing between sections"}}});
    records.push_back({{"kind", "sketching"},
                       {"record_id", "e2e-sketching"},
                       {"annotator_id", "designer-02"},
                       {"elapsed_seconds", 52.0},
                       {"candidate_id", r1[0]},
                       {"scale_factor", 2.0},
                       {"items",
                        {{{"region", {{"kind", "box"}, {"x", 10}, {"y", 10}, {"w", 300}, {"h", 60}}},
                          {"comment", "title should stand out more"}},
                         {{"region", {{"kind", "point"}, {"x", 40}, {"y", 200}}}, {"comment", "too cramped"}}}}});
    const auto original = store.candidate(r1[1]).sketch_ref.value_or("");
    std::string revised_ref;
    if (!original.empty()) {
        auto doc = Json::parse(store.blob(original));
        auto& frame = doc["layers"][0]["frame"];
        frame["w"] = frame["w"].get<double>() - 10;
        revised_ref = store.put_blob(doc.dump());
    }
    records.push_back({{"kind", "revising"},
                       {"record_id", "e2e-revising"},
                       {"annotator_id", "designer-02"},
                       {"elapsed_seconds", 200.0},
                       {"candidate_id", r1[1]},
                       {"original_sketch_ref", original},
                       {"revised_sketch_ref", revised_ref}});
    {
        std::string text;
        for (const auto& r : records) text += to_line(r) + "\n";
        write_text_file(workdir / "annotations.jsonl", text);
    }
    job(JobKind::kTransformFeedback, {{"records", (workdir / "annotations.jsonl").string()}});

    const auto prefs = store.preferences();
    run.preference_pairs = prefs.size();
    std::string pref_lines;
    for (const auto& p : prefs.pairs()) {
        ++run.pairs_by_provenance[std::string(corpus::to_string(p.provenance))];
        pref_lines += p.description_id + "," + p.chosen_ref + "," + p.rejected_ref + "," +
                      std::string(corpus::to_string(p.provenance)) + "\n";
    }
    run.artifacts["preferences"] = pref_lines;

    const auto trained = job(JobKind::kTrainReward, Json::object());
    run.trace_steps = trained.counts.value("steps", std::size_t{0});
    job(JobKind::kScore, Json::object());
    const auto built = job(JobKind::kBuildPairs, Json::object());
    run.alignment_pairs = built.counts.value("pairs", std::size_t{0});
    const auto exported = job(JobKind::kExportOrpo, Json::object());
    run.orpo_records = exported.counts.value("records", std::size_t{0});

    for (const char* name :
         {"reward_head.json", "loss_trace.csv", "scored_batches.jsonl", "alignment_pairs.jsonl", "orpo.jsonl"}) {
        if (fs::exists(artifacts / name)) run.artifacts[name] = read_text_file(artifacts / name);
    }
    run.orpo_valid = fs::exists(artifacts / "orpo.jsonl");
    if (run.orpo_valid) {
        try {
            const auto lines = read_jsonl(artifacts / "orpo.jsonl");
            run.orpo_valid = lines.size() == run.orpo_records;
            for (const auto& line : lines) pairgen::validate_orpo_record(line);
        } catch (const std::exception& e) {
            run.orpo_valid = false;
            run.failures.push_back(std::string("orpo record invalid: ") + e.what());
        }
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace uipref::testkit
