#pragma once

#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include "uipref/arena/schedule.hpp"
#include "uipref/corpus/store.hpp"
#include "uipref/feedback/tasks.hpp"
#include "uipref/gateway/generation.hpp"
#include "uipref/service/config.hpp"
#include "uipref/service/jobs.hpp"

namespace uipref::service {

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

using QueryParams = std::map<std::string, std::string>;

/// Transport-independent request handlers. Every mutation is appended to the
/// store journal before the handler returns.
class App {
public:
    explicit App(ServiceConfig config);
    /// Tests inject an in-memory store and stub backends.
    App(ServiceConfig config, std::shared_ptr<corpus::CorpusStore> store, gateway::Backends backends);
    ~App();

    App(const App&) = delete;
    App& operator=(const App&) = delete;

    Response next_task(const QueryParams& query, const std::string& annotator_id);
    Response post_annotation(const std::string& body);
    Response arena_match();
    Response arena_judgment(const std::string& body);
    Response post_arena_output(const std::string& body);
    Response ratings(const QueryParams& query);
    Response post_agreement(const std::string& body);
    Response agreement_report();
    Response study_stats();
    Response post_job(const std::string& body);
    Response get_job(const std::string& job_id);
    Response post_blob(const std::string& body);
    Response get_blob(const std::string& hash);

    /// Blocks until every queued job has finished.
    void drain_jobs();

    corpus::CorpusStore& store() noexcept { return *store_; }
    const ServiceConfig& config() const noexcept { return config_; }

private:
    void start_worker();
    void worker_loop();
    void check_against_store(const feedback::AnnotationRecord& record) const;
    std::vector<arena::Battle> battle_snapshot() const;

    ServiceConfig config_;
    std::shared_ptr<corpus::CorpusStore> store_;
    gateway::Gateway gateway_;
    feedback::TaskScheduler scheduler_;

    std::mutex mutex_;
    std::mt19937_64 rng_;
    std::map<std::string, arena::Match> pending_matches_;

    std::mutex jobs_mutex_;
    std::condition_variable jobs_cv_;
    std::deque<std::pair<std::string, JobSpec>> queue_;
    std::map<std::string, JobReport> jobs_;
    std::size_t job_counter_ = 0;
    bool busy_ = false;
    bool stopping_ = false;
    std::thread worker_;
};

}  // namespace uipref::service
