// uipref command-line front end: one verb per pipeline job, plus `serve`.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uipref/common/error.hpp"
#include "uipref/corpus/store.hpp"
#include "uipref/gateway/generation.hpp"
#include "uipref/service/config.hpp"
#include "uipref/service/jobs.hpp"
#include "uipref/service/server.hpp"

namespace {

using uipref::Json;
namespace service = uipref::service;

struct Options {
    std::string config_file;
    std::string store_root;
    std::string host;
    int port = -1;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> params;
    std::string params_json;
    std::string params_file;
    std::string artifact_dir;
};

// key=value; the value is read as JSON when it parses, as a string otherwise.
Json parse_params(const Options& opt) {
    Json params = Json::object();
    if (!opt.params_file.empty()) {
        std::ifstream in(opt.params_file);
        if (!in) throw uipref::Error(uipref::ErrorKind::kIo, "cannot read " + opt.params_file);
        params = Json::parse(in);
    }
    if (!opt.params_json.empty()) params.update(Json::parse(opt.params_json));
    for (const auto& kv : opt.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw uipref::ValidationError("param", "expected key=value, got '" + kv + "'");
        }
        const auto key = kv.substr(0, eq);
        const auto raw = kv.substr(eq + 1);
        params[key] = Json::accept(raw) ? Json::parse(raw) : Json(raw);
    }
    return params;
}

service::ServiceConfig effective_config(const Options& opt) {
    std::optional<std::filesystem::path> file;
    if (!opt.config_file.empty()) file = opt.config_file;
    auto config = service::load_config(file);
    if (!opt.store_root.empty()) config.store_root = opt.store_root;
    if (!opt.host.empty()) config.host = opt.host;
    if (opt.port >= 0) config.port = opt.port;
    if (opt.seed) config.seed = *opt.seed;
    config.validate();
    return config;
}

int run_job(const Options& opt, service::JobKind kind) {
    const auto config = effective_config(opt);
    service::JobSpec spec{kind, parse_params(opt), config.seed};
    spec.validate();

    uipref::corpus::CorpusStore store(config.store_root);
    uipref::gateway::Gateway gateway(uipref::gateway::make_backends(
        config.backends, [&store](const std::string& hash) { return store.blob(hash); }));
    const std::filesystem::path artifacts =
        opt.artifact_dir.empty() ? config.store_root / "artifacts" : std::filesystem::path(opt.artifact_dir);
    service::Pipeline pipeline(store, gateway, artifacts, config.rating);

    const auto job_id = "cli-" + std::to_string(store.journal_size(service::channels::kJobs) + 1);
    const auto report = pipeline.run_job(spec, job_id);
    store.append_journal(service::channels::kJobs, {{"job_id", report.job_id}, {"report", to_json(report)}});
    std::cout << to_json(report).dump(2) << '\n';
    return report.status == "succeeded" ? 0 : 1;
}

std::string job_help(service::JobKind kind) {
    using service::JobKind;
    switch (kind) {
        case JobKind::kGenDescriptions: return "Grow the UI description list from seed examples";
        case JobKind::kGenCandidates: return "Sample candidate pages for each description";
        case JobKind::kRender: return "Stage and render candidates without a screenshot";
        case JobKind::kFilter: return "Score batches and keep the top k candidates";
        case JobKind::kTransformFeedback: return "Turn annotation records into preference pairs";
        case JobKind::kTrainReward: return "Fine-tune the reward head on preference pairs";
        case JobKind::kScore: return "Score generation batches with a reward head";
        case JobKind::kBuildPairs: return "Pick chosen/rejected pages from scored batches";
        case JobKind::kExportOrpo: return "Write alignment pairs as ORPO training records";
        case JobKind::kRatings: return "Bootstrap arena ratings and win rates";
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UI preference data pipeline, reward training and arena service"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--config", opt.config_file, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--store-root", opt.store_root, "Corpus store directory");
    app.add_option("--seed", opt.seed, "Master seed");

    for (const auto kind : service::kAllJobKinds) {
        auto* sub = app.add_subcommand(std::string(service::to_string(kind)), job_help(kind));
        sub->add_option("-p,--param", opt.params, "Job parameter key=value (repeatable)");
        sub->add_option("--params", opt.params_json, "Job parameters as a JSON object");
        sub->add_option("--params-file", opt.params_file, "Job parameters from a JSON file")->check(CLI::ExistingFile);
        sub->add_option("--artifacts", opt.artifact_dir, "Artifact directory (default <store>/artifacts)");
        sub->callback([&opt, kind] { throw CLI::RuntimeError(run_job(opt, kind)); });
    }

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--host", opt.host, "Bind address");
    serve->add_option("--port", opt.port, "Listen port");
    serve->callback([&opt] {
        const auto config = effective_config(opt);
        std::cerr << "listening on " << config.host << ':' << config.port << '\n';
        service::serve(config);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const uipref::ValidationError& e) {
        std::cerr << "invalid " << e.field() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
