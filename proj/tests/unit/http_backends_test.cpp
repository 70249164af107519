#include <gtest/gtest.h>

#include <functional>
#include <thread>

#include "uipref/common/hash.hpp"
#include "uipref/common/image.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/gateway/http_backends.hpp"
#include "uipref/htmlkit/staging.hpp"
#include "support/testkit.hpp"

#include <httplib.h>

namespace uipref::gateway {
namespace {

using testkit::error_kind;

// One-route JSON server on an ephemeral port.
class MockServer {
public:
    using Handler = std::function<void(const Json& body, httplib::Response& res)>;

    explicit MockServer(Handler handler) : handler_(std::move(handler)) {
        server_.Post("/api", [this](const httplib::Request& req, httplib::Response& res) {
            last_ = Json::parse(req.body);
            handler_(last_, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/api"; }
    const Json& last() const { return last_; }

private:
    Handler handler_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    Json last_;
};

void reply(httplib::Response& res, const Json& body) { res.set_content(body.dump(), "application/json"); }

TEST(Endpoint, SplitsBaseAndPath) {
    const auto e = Endpoint::parse("http://localhost:8080/v1/generate");
    EXPECT_EQ(e.base, "http://localhost:8080");
    EXPECT_EQ(e.path, "/v1/generate");
    EXPECT_EQ(Endpoint::parse("http://host").path, "/");
    EXPECT_EQ(error_kind([] { Endpoint::parse("localhost:1/x"); }), ErrorKind::kConfiguration);
}

TEST(HttpLlm, SendsRequestFieldsAndReadsText) {
    MockServer server([](const Json&, httplib::Response& res) { reply(res, {{"text", "<html></html>"}}); });
    HttpLlm llm(server.url(), 5, 2);
    const auto out = llm.complete({"m", "hello", 0.5, 100, 9});
    EXPECT_EQ(out.text, "<html></html>");
    EXPECT_EQ(server.last()["model"], "m");
    EXPECT_EQ(server.last()["prompt"], "hello");
    EXPECT_EQ(server.last()["max_tokens"], 100);
    EXPECT_EQ(server.last()["seed"], 9);
}

TEST(HttpLlm, ErrorStatusesAreBackendErrors) {
    MockServer server([](const Json&, httplib::Response& res) {
        res.status = 503;
        res.set_content("overloaded", "text/plain");
    });
    HttpLlm llm(server.url(), 5, 1);
    EXPECT_EQ(error_kind([&] { llm.complete({"m", "x"}); }), ErrorKind::kBackend);
}

TEST(HttpLlm, MalformedRepliesAreBackendErrors) {
    MockServer server([](const Json&, httplib::Response& res) { reply(res, {{"txt", 1}}); });
    HttpLlm llm(server.url(), 5, 1);
    EXPECT_EQ(error_kind([&] { llm.complete({"m", "x"}); }), ErrorKind::kBackend);
}

TEST(HttpLlm, UnreachableHostIsBackendError) {
    HttpLlm llm("http://127.0.0.1:1/api", 1, 1);
    EXPECT_EQ(error_kind([&] { llm.complete({"m", "x"}); }), ErrorKind::kBackend);
}

TEST(HttpEmbedder, RenormalizesAndChecksWidth) {
    MockServer server([](const Json& body, httplib::Response& res) {
        if (body["kind"] == "text") {
            reply(res, {{"embedding", {3.0, 4.0}}});
        } else {
            reply(res, {{"embedding", {1.0, 0.0, 0.0}}});
        }
    });
    HttpEmbedder emb(server.url(), 5, 1, 2);
    const auto v = emb.embed(EmbedKind::kText, "hi");
    EXPECT_NEAR(v[0], 0.6, 1e-12);
    EXPECT_NEAR(v[1], 0.8, 1e-12);
    EXPECT_EQ(error_kind([&] { emb.embed(EmbedKind::kImage, "png"); }), ErrorKind::kConfiguration);
    EXPECT_EQ(server.last()["payload_base64"], base64_encode("png"));
}

TEST(HttpImageSynth, DecodesPng) {
    const auto png = encode_png(Image(3, 2));
    MockServer server([&](const Json&, httplib::Response& res) { reply(res, {{"png_base64", base64_encode(png)}}); });
    HttpImageSynth synth(server.url(), 5, 1);
    EXPECT_EQ(synth.synthesize("a cat"), png);
    EXPECT_EQ(server.last()["prompt"], "a cat");
}

TEST(HttpRenderer, MaterializesAndParsesGeometry) {
    htmlkit::GeometryMap g;
    g.boxes = {{"html[0]", {0, 0, 390, 844}}};
    const auto png = encode_png(Image(390, 844));
    bool staged = false;
    MockServer server([&](const Json& body, httplib::Response& res) {
        const std::filesystem::path root = body["staging_root"].get<std::string>();
        staged = std::filesystem::exists(root / body["entry"].get<std::string>());
        reply(res, {{"screenshot_png_base64", base64_encode(png)},
                    {"geometry", htmlkit::write_geometry(g)},
                    {"truncated", true}});
    });
    HttpRenderer renderer(server.url(), 5, 1, [](const std::string&) { return std::string(); }, {});
    const auto manifest = htmlkit::stage_assets("<html><body>x</body></html>", {});
    const auto r = renderer.render(manifest, {390, 844});
    EXPECT_TRUE(staged);
    EXPECT_EQ(r.geometry, g);
    EXPECT_TRUE(r.truncated);
    EXPECT_EQ(server.last()["viewport"]["width"], 390);
}

TEST(HttpRenderer, MissingFieldsSurfaceTheLog) {
    MockServer server([](const Json&, httplib::Response& res) { reply(res, {{"log", "page crashed"}}); });
    HttpRenderer renderer(server.url(), 5, 1, {}, {});
    try {
        renderer.render(htmlkit::stage_assets("<p>x</p>", {}), {390, 844});
        FAIL() << "expected backend error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::kBackend);
        EXPECT_NE(std::string(e.what()).find("page crashed"), std::string::npos);
    }
}

}  // namespace
}  // namespace uipref::gateway
