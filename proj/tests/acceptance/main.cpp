// Acceptance suite: one line per criterion, non-zero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support/testkit.hpp"
#include "uipref/arena/agreement.hpp"
#include "uipref/arena/bootstrap.hpp"
#include "uipref/arena/elo.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/feedback/records.hpp"
#include "uipref/feedback/stats.hpp"
#include "uipref/gateway/prompts.hpp"
#include "uipref/htmlkit/grounding.hpp"
#include "uipref/reward/embedding.hpp"
#include "uipref/reward/scorer.hpp"
#include "uipref/reward/topk.hpp"
#include "uipref/reward/trainer.hpp"

using namespace uipref;
namespace tk = uipref::testkit;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Criterion = std::function<void(Outcome&)>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void margin_trainer(Outcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(11);
    const int dim = gateway::kDefaultEmbeddingDim;
    const Eigen::VectorXd u = tk::random_unit(rng, dim);
    Eigen::VectorXd t = tk::random_unit(rng, dim);
    t = (t - u * u.dot(t)).normalized();  // text direction carries no hint of u

    const auto train_pairs = tk::separable_pairs(rng, 500, u, t, 0.5);
    const auto held_out = tk::separable_pairs(rng, 200, u, t, 0.5);
    std::vector<reward::CandidatePair> pool;
    for (const auto& p : tk::separable_pairs(rng, 500, u, t, 0.5)) {
        if (rng() & 1) {
            pool.push_back({p.text, p.chosen, p.rejected});
        } else {
            pool.push_back({p.text, p.rejected, p.chosen});
        }
    }
    const auto initial = reward::RewardHead::identity(dim);
    reward::TrainerConfig cfg;
    cfg.rng_seed = 3;
    const double before = reward::pairwise_accuracy(initial, held_out);
    const auto result = reward::train(initial, train_pairs, pool, cfg);
    const double after = reward::pairwise_accuracy(result.head, held_out);
    const double runtime = seconds_since(t0);

    // Central differences on a small head with a mix of active and inactive pairs.
    const int d = 16;
    std::mt19937_64 grng(5);
    std::vector<reward::EmbeddedPair> designer;
    std::vector<reward::EmbeddedPair> synth;
    for (int i = 0; i < 40; ++i) {
        designer.push_back({tk::random_unit(grng, d), tk::random_unit(grng, d), tk::random_unit(grng, d)});
        synth.push_back({tk::random_unit(grng, d), tk::random_unit(grng, d), tk::random_unit(grng, d)});
    }
    auto head = reward::RewardHead::identity(d);
    std::normal_distribution<double> n(0.0, 0.2);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) head.weight(r, c) += n(grng);
    }
    const auto slots = reward::sample_training_batch(designer.size(), synth.size(), cfg, grng);
    Eigen::MatrixXd analytic;
    reward::batch_loss(head, designer, synth, slots, cfg, &analytic);
    Eigen::MatrixXd numeric(d, d);
    const double eps = 1e-6;
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            auto plus = head;
            auto minus = head;
            plus.weight(r, c) += eps;
            minus.weight(r, c) -= eps;
            numeric(r, c) = (reward::batch_loss(plus, designer, synth, slots, cfg) -
                             reward::batch_loss(minus, designer, synth, slots, cfg)) /
                            (2 * eps);
        }
    }
    const double rel = (analytic - numeric).norm() / std::max(numeric.norm(), 1e-300);

    out.detail << "held-out accuracy " << fixed(before, 3) << " -> " << fixed(after, 3) << " after "
               << result.trace.size() << " steps; gradient rel err " << rel << "; " << fixed(runtime, 2) << " s";
    out.require(result.trace.size() == 100, "100 steps");
    out.require(after >= 0.95, "held-out accuracy >= 0.95");
    out.require(analytic.norm() > 0, "non-trivial gradient");
    out.require(rel < 1e-5, "gradient rel err < 1e-5");
    out.require(runtime < 10.0, "runtime < 10 s");
}

void embedding_combination(Outcome& out) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const int dim = 1 + static_cast<int>(rng() % 768);
        reward::PromptEmbeddingSet p{Eigen::VectorXd(dim), Eigen::VectorXd(dim), Eigen::VectorXd(dim)};
        for (int k = 0; k < dim; ++k) {
            p.v_pos[k] = n(rng);
            p.v_neg[k] = n(rng);
            p.v_empty[k] = n(rng);
        }
        const auto got = reward::combine(p);
        const auto want = tk::combine_oracle(p.v_pos, p.v_neg, p.v_empty);
        worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
    }
    out.detail << "1000 triples, max abs diff " << worst;
    out.require(worst <= 1e-12, "max abs diff <= 1e-12");
}

void topk_filtering(Outcome& out) {
    std::mt19937_64 rng(31);
    corpus::GenerationBatch batch;
    for (int i = 0; i < 32; ++i) batch.candidate_ids.push_back("cand-" + std::to_string(i));
    std::size_t mismatches = 0;
    std::size_t tie_batches = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> scores(32);
        const int mode = trial % 4;
        for (auto& s : scores) {
            if (mode == 0) {
                s = std::uniform_real_distribution<double>(-100, 100)(rng);
            } else if (mode == 1) {
                s = static_cast<double>(rng() % 5);  // heavy ties
            } else if (mode == 2) {
                s = static_cast<double>(rng() % 12) * 0.25;
                if (rng() % 9 == 0) s = std::nan("");
            } else {
                s = (rng() % 3 == 0) ? 7.0 : std::uniform_real_distribution<double>(0, 10)(rng);
            }
        }
        std::vector<double> sorted = scores;
        std::sort(sorted.begin(), sorted.end());
        tie_batches += std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
        const auto got = reward::topk_filter(batch, scores);
        const auto want = tk::topk_oracle(scores, 8);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i] == batch.candidate_ids[want[i]];
        mismatches += !same;
    }
    out.detail << "10000 batches of 32 (" << tie_batches << " with ties), default k=" << reward::kDefaultTopK
               << ", mismatches " << mismatches;
    out.require(reward::kDefaultTopK == 8, "default k is 8");
    out.require(tie_batches > 0, "tie cases exercised");
    out.require(mismatches == 0, "no mismatches");
}

void iou_grounding(Outcome& out) {
    std::mt19937_64 rng(41);
    std::size_t checks = 0;
    std::size_t mismatches = 0;
    std::size_t box_hits = 0;
    std::size_t points = 0;
    std::size_t fallbacks = 0;
    for (int g = 0; g < 1000; ++g) {
        const auto geo = tk::random_geometry(rng, 50);
        std::vector<htmlkit::Region> probes;
        auto coord = [&](double hi) { return 10.0 * static_cast<double>(rng() % static_cast<std::uint64_t>(hi / 10)); };
        for (int i = 0; i < 3; ++i) {
            probes.push_back(htmlkit::Region::make_box(coord(390), coord(1200), 10 + coord(200), 10 + coord(200)));
            probes.push_back(htmlkit::Region::make_point(coord(390) + (i ? 5 : 0), coord(1200)));
        }
        probes.push_back(htmlkit::Region::make_box(500 + coord(300), coord(800), 20, 20));  // off the page
        probes.push_back(htmlkit::Region::make_point(-5, 50));
        for (const auto& r : probes) {
            const auto got = htmlkit::match_annotation(r, geo.map);
            const auto want = tk::match_oracle(r, geo);
            ++checks;
            mismatches += got.element_path != want;
            if (r.kind == htmlkit::Region::Kind::kPoint) {
                ++points;
            } else {
                bool overlaps = false;
                for (const auto& b : geo.map.boxes) overlaps |= htmlkit::iou(r.box, b.bbox) > 0;
                (overlaps ? box_hits : fallbacks) += 1;
            }
        }
    }
    out.detail << checks << " probes on 1000 geometries (" << box_hits << " box, " << points << " point, "
               << fallbacks << " zero-IoU), mismatches " << mismatches;
    out.require(mismatches == 0, "no mismatches");
    out.require(box_hits > 0 && points > 0 && fallbacks > 0, "all paths exercised");
}

void elo_ratings(Outcome& out) {
    std::mt19937_64 rng(51);
    arena::RatingConfig cfg;
    std::size_t mismatches = 0;
    double worst_drift = 0;
    for (int log = 0; log < 100; ++log) {
        const auto battles = tk::random_battles(rng, 50, 2 + static_cast<int>(rng() % 5));
        const auto got = arena::elo_sequence(battles, cfg);
        const auto want = tk::elo_oracle(battles, 1000, 4, 10, 400);
        if (got.size() != want.ratings.size()) ++mismatches;
        for (const auto& [model, rating] : want.ratings) {
            const auto it = got.find(model);
            if (it == got.end() || it->second != rating) ++mismatches;
        }
        for (double d : want.sum_drift) worst_drift = std::max(worst_drift, d);
        for (std::size_t n = 1; n <= battles.size(); ++n) {
            const auto prefix = arena::elo_sequence(std::span(battles).first(n), cfg);
            double sum = 0;
            for (const auto& [m, r] : prefix) sum += r;
            worst_drift = std::max(worst_drift, std::abs(sum - 1000.0 * static_cast<double>(prefix.size())));
        }
    }
    const std::vector<arena::Battle> one{{"a", "b", "d", arena::Outcome::kA, "j", ""}};
    const auto single = arena::elo_sequence(one, cfg);
    out.detail << "100 logs x 50 battles, mismatches " << mismatches << ", worst per-battle sum drift " << worst_drift
               << "; single battle " << single.at("a") << "/" << single.at("b");
    out.require(mismatches == 0, "exact oracle match");
    out.require(worst_drift < 1e-9, "rating sum conserved per battle");
    out.require(single.at("a") == 1002.0 && single.at("b") == 998.0, "1002/998");
}

void bootstrap_intervals(Outcome& out) {
    std::vector<arena::Battle> battles;
    std::mt19937_64 rng(61);
    for (const char* opponent : {"model-b", "model-c"}) {
        for (int i = 0; i < 100; ++i) {
            const bool a_first = rng() & 1;
            battles.push_back({a_first ? "model-a" : opponent, a_first ? opponent : "model-a",
                               "desc-" + std::to_string(i % 10), a_first ? arena::Outcome::kA : arena::Outcome::kB,
                               "judge", ""});
        }
    }
    std::shuffle(battles.begin(), battles.end(), rng);
    arena::RatingConfig cfg;
    cfg.rounds = 1000;
    cfg.rng_seed = 2024;
    const auto first = arena::bootstrap_ratings(battles, cfg);
    const auto second = arena::bootstrap_ratings(battles, cfg);
    const auto csv1 = arena::ratings_csv(first);
    const auto csv2 = arena::ratings_csv(second);
    const arena::ModelRating* a = nullptr;
    double others_high = -1e300;
    for (const auto& r : first) {
        if (r.model == "model-a") {
            a = &r;
        } else {
            others_high = std::max(others_high, r.ci_high);
        }
    }
    out.require(a != nullptr && first.size() == 3, "three models rated");
    if (a) {
        out.detail << "A [" << fixed(a->ci_low, 1) << ", " << fixed(a->ci_high, 1) << "] vs others' best upper "
                   << fixed(others_high, 1) << "; seeded reruns " << (csv1 == csv2 ? "identical" : "differ");
        out.require(a->ci_low > others_high, "A's interval above and disjoint");
        out.require(first.front().model == "model-a", "A ranked first");
    }
    out.require(csv1 == csv2, "byte-identical reruns");
}

void agreement_analysis(Outcome& out) {
    struct Stratum {
        feedback::Interface interface;
        std::size_t agreeing;
        std::size_t total;
        double printed;
    };
    const Stratum strata[] = {{feedback::Interface::kRevising, 143, 188, 76.1},
                              {feedback::Interface::kSketching, 103, 162, 63.6},
                              {feedback::Interface::kCommenting, 94, 164, 57.3},
                              {feedback::Interface::kRanking, 89, 181, 49.2}};
    std::vector<arena::AgreementRecord> records;
    std::mt19937_64 rng(71);
    for (const auto& s : strata) {
        for (std::size_t i = 0; i < s.total; ++i) {
            records.push_back({"pair-" + std::string(feedback::to_string(s.interface)) + "-" + std::to_string(i),
                               s.interface, i < s.agreeing ? arena::RaterChoice::kChosen : arena::RaterChoice::kRejected});
        }
    }
    std::shuffle(records.begin(), records.end(), rng);
    const auto report = arena::agreement(records);
    const double overall = report.overall.percent.value_or(-1);
    out.detail << report.overall.agreeing << "/" << report.overall.total << " = " << fixed(overall, 1) << "%;";
    out.require(report.overall.agreeing == 429 && report.overall.total == 695, "429/695");
    out.require(std::abs(overall - 61.7) <= 0.05, "overall 61.7");
    for (const auto& s : strata) {
        const double p = report[s.interface].percent.value_or(-1);
        out.detail << " " << feedback::to_string(s.interface) << " " << fixed(p, 1);
        out.require(fixed(p, 1) == fixed(s.printed, 1), std::string(feedback::to_string(s.interface)));
    }
}

void prompt_fidelity(Outcome& out) {
    const auto cases = Json::parse(read_text_file(tk::fixture_dir() / "prompts.json"));
    std::map<std::string, int> per_template;
    std::size_t mismatches = 0;
    for (const auto& c : cases) {
        const auto name = c["template"].get<std::string>();
        std::string got;
        if (name == "generation") {
            got = gateway::generation_prompt(c["description"].get<std::string>());
        } else if (name == "positive") {
            got = gateway::positive_prompt(c["description"].get<std::string>());
        } else if (name == "negative") {
            got = gateway::negative_prompt(c["description"].get<std::string>());
        } else if (name == "empty") {
            got = gateway::empty_prompt();
        } else if (name == "comment_edit") {
            got = gateway::comment_edit_prompt(c["html"].get<std::string>(),
                                               c["comments"].get<std::vector<std::string>>());
        } else if (name == "region_edit") {
            std::vector<gateway::GroundedComment> items;
            for (const auto& i : c["items"]) items.push_back({i["comment"], i["snippet"]});
            got = gateway::region_edit_prompt(c["html"].get<std::string>(), items);
        }
        ++per_template[name];
        if (got != c["expected"].get<std::string>()) {
            ++mismatches;
            out.detail << " mismatch in " << name << ";";
        }
    }
    bool three_each = per_template.size() == 6;
    for (const auto& [name, count] : per_template) three_each &= count == 3;
    out.detail << cases.size() << " cases over " << per_template.size() << " templates, mismatches "
               << mismatches;
    out.require(three_each, "6 templates x 3 inputs");
    out.require(mismatches == 0, "byte-equal");
}

void pipeline_end_to_end(Outcome& out) {
    tk::TempDir dir1;
    tk::TempDir dir2;
    const auto a = tk::run_stub_pipeline(7, dir1.path(), 32, gateway::kDefaultEmbeddingDim);
    const auto b = tk::run_stub_pipeline(7, dir2.path(), 32, gateway::kDefaultEmbeddingDim);
    bool all_eight = a.retained_per_batch.size() == 2;
    for (auto r : a.retained_per_batch) all_eight &= r == 8;
    bool provenance = a.pairs_by_provenance.size() == 4;
    for (const auto& [name, count] : a.pairs_by_provenance) provenance &= count == 1;
    out.detail << a.descriptions << " descriptions, " << a.candidates << " candidates, retained " << (all_eight ? "8/8" : "?")
               << ", " << a.preference_pairs << " preference pairs, " << a.trace_steps << " steps, "
               << a.alignment_pairs << " alignment pairs, " << a.orpo_records << " ORPO records; "
               << fixed(a.seconds, 1) << " s and " << fixed(b.seconds, 1) << " s; reruns "
               << (a.artifacts == b.artifacts ? "identical" : "differ");
    for (const auto& f : a.failures) out.detail << " [job error: " << f << "]";
    out.require(a.failures.empty(), "jobs succeed");
    out.require(a.descriptions == 2 && a.candidates == 64, "2 x 32 candidates");
    out.require(all_eight, "top-8 per batch");
    out.require(a.preference_pairs == 4 && provenance, "4 pairs, one per interface");
    out.require(a.trace_steps == 100, "100 training steps");
    out.require(a.orpo_records == 2 && a.orpo_valid, "2 schema-valid ORPO records");
    out.require(a.seconds < 60 && b.seconds < 60, "under 60 s");
    out.require(a.artifacts.size() == 6 && a.artifacts == b.artifacts, "bit-identical reruns");
}

void study_statistics(Outcome& out) {
    const auto records = feedback::read_records(tk::fixture_dir() / "study_annotations.jsonl");
    const auto s = feedback::study_stats(records);
    using feedback::Interface;
    const auto& rank = s[Interface::kRanking];
    const auto& sketch = s[Interface::kSketching];
    const auto& comment = s[Interface::kCommenting];
    const auto& revise = s[Interface::kRevising];
    out.detail << "ranking " << rank.count << " at " << fixed(rank.per_minute, 1) << "/min; sketching " << sketch.count
               << " (" << fixed(sketch.mean_text_length, 1) << " chars, " << fixed(sketch.mean_items_per_ui, 1)
               << " items); commenting " << comment.count << " (" << fixed(comment.mean_text_length, 1) << " chars, "
               << fixed(comment.mean_items_per_ui, 1) << " items); revising " << revise.count << " at "
               << fixed(revise.mean_minutes, 2) << " min; total " << s.total;
    out.require(rank.count == 1063 && sketch.count == 181 && comment.count == 152 && revise.count == 64, "counts");
    out.require(s.total == 1460, "total 1460");
    out.require(fixed(rank.per_minute, 1) == "4.8", "4.8 rankings/min");
    out.require(fixed(revise.mean_minutes, 2) == "3.45", "3.45 min/revision");
    out.require(fixed(comment.mean_text_length, 1) == "87.1", "87.1 chars/comment");
    out.require(fixed(sketch.mean_text_length, 1) == "42.2", "42.2 chars/sketch item");
    out.require(fixed(comment.mean_items_per_ui, 1) == "1.9", "1.9 comments/UI");
    out.require(fixed(sketch.mean_items_per_ui, 1) == "2.7", "2.7 items/UI");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Criterion>> criteria = {
        {"margin-loss trainer", margin_trainer},
        {"embedding combination", embedding_combination},
        {"top-k filtering", topk_filtering},
        {"IoU grounding", iou_grounding},
        {"Elo ratings", elo_ratings},
        {"bootstrap intervals", bootstrap_intervals},
        {"agreement analysis", agreement_analysis},
        {"prompt fidelity", prompt_fidelity},
        {"pipeline end-to-end on stubs", pipeline_end_to_end},
        {"study statistics", study_statistics},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome out;
        try {
            run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << " [exception: " << e.what() << "]";
        }
        failed += !out.pass;
        std::cout << (out.pass ? "PASS " : "FAIL ") << name << ": " << out.detail.str() << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " acceptance criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
