#include "uipref/service/server.hpp"

#include <httplib.h>

#include "uipref/common/error.hpp"

namespace uipref::service {

namespace {

QueryParams query_of(const httplib::Request& req) {
    QueryParams q;
    for (const auto& [k, v] : req.params) q.emplace(k, v);
    return q;
}

void reply(httplib::Response& res, const Response& r) {
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, r.content_type);
}

}  // namespace

Server::Server(App& app) : app_(app), http_(std::make_unique<httplib::Server>()) {
    auto& s = *http_;
    s.Get("/tasks/next", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.next_task(query_of(req), req.get_header_value("X-Annotator-Id")));
    });
    s.Post("/annotations", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.post_annotation(req.body));
    });
    s.Get("/arena/match", [this](const httplib::Request&, httplib::Response& res) { reply(res, app_.arena_match()); });
    s.Post("/arena/judgments", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.arena_judgment(req.body));
    });
    s.Post("/arena/outputs", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.post_arena_output(req.body));
    });
    s.Get("/reports/ratings", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.ratings(query_of(req)));
    });
    s.Get("/reports/agreement",
          [this](const httplib::Request&, httplib::Response& res) { reply(res, app_.agreement_report()); });
    s.Post("/agreements", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.post_agreement(req.body));
    });
    s.Get("/reports/study-stats",
          [this](const httplib::Request&, httplib::Response& res) { reply(res, app_.study_stats()); });
    s.Post("/jobs", [this](const httplib::Request& req, httplib::Response& res) { reply(res, app_.post_job(req.body)); });
    s.Get(R"(/jobs/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.get_job(req.matches[1]));
    });
    s.Post("/blobs", [this](const httplib::Request& req, httplib::Response& res) { reply(res, app_.post_blob(req.body)); });
    s.Get(R"(/blobs/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
        reply(res, app_.get_blob(req.matches[1]));
    });
}

Server::~Server() { stop(); }

void Server::start(const std::string& host, int port) {
    if (port == 0) {
        port_ = http_->bind_to_any_port(host);
        if (port_ < 0) throw Error(ErrorKind::kConfiguration, "cannot bind " + host);
    } else {
        if (!http_->bind_to_port(host, port)) {
            throw Error(ErrorKind::kConfiguration, "cannot bind " + host + ":" + std::to_string(port));
        }
        port_ = port;
    }
    thread_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
}

void Server::stop() {
    if (http_) http_->stop();
    if (thread_.joinable()) thread_.join();
}

void Server::wait() {
    if (thread_.joinable()) thread_.join();
}

void serve(const ServiceConfig& config) {
    App app(config);
    Server server(app);
    server.start(config.host, config.port);
    server.wait();
}

}  // namespace uipref::service
