#include "uipref/gateway/http_backends.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <random>

#include "uipref/common/hash.hpp"
#include "uipref/common/image.hpp"
#include "uipref/common/jsonl.hpp"

namespace uipref::gateway {

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(std::string_view tag) {
    static std::atomic<std::uint64_t> counter{0};
    std::random_device rd;
    const auto name = std::string("uipref-") + std::string(tag) + "-" + std::to_string(rd()) + "-" +
                      std::to_string(counter.fetch_add(1));
    auto dir = fs::temp_directory_path() / name;
    fs::create_directories(dir);
    return dir;
}

struct ScratchGuard {
    fs::path dir;
    ~ScratchGuard() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

Json parse_reply(const std::string& body, std::string_view what) {
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::kBackend, std::string(what) + " returned non-JSON reply: " + e.what());
    }
}

std::string excerpt(std::string_view text, std::size_t n = 240) {
    return std::string(text.substr(0, std::min(n, text.size())));
}

}  // namespace

InFlightLimit::InFlightLimit(int limit) : slots_(std::max(1, std::min(limit, 1024))) {}
InFlightLimit::Slot::Slot(InFlightLimit& owner) : owner_(owner) { owner_.slots_.acquire(); }
InFlightLimit::Slot::~Slot() { owner_.slots_.release(); }

Endpoint Endpoint::parse(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw Error(ErrorKind::kConfiguration, "endpoint '" + url + "' lacks a scheme");
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

std::string post_json(const Endpoint& endpoint, const std::string& body, double timeout_seconds) {
    httplib::Client client(endpoint.base);
    const auto secs = static_cast<time_t>(timeout_seconds);
    const auto usecs = static_cast<time_t>((timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    auto res = client.Post(endpoint.path, body, "application/json");
    if (!res) {
        throw Error(ErrorKind::kBackend,
                    endpoint.base + endpoint.path + ": " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorKind::kBackend, endpoint.base + endpoint.path + ": HTTP " + std::to_string(res->status) +
                                             ": " + excerpt(res->body));
    }
    return res->body;
}

HttpLlm::HttpLlm(std::string url, double timeout_seconds, int max_in_flight)
    : endpoint_(Endpoint::parse(url)), timeout_(timeout_seconds), limit_(max_in_flight) {}

LlmResponse HttpLlm::complete(const LlmRequest& request) {
    const Json body{{"model", request.model},
                    {"prompt", request.prompt},
                    {"temperature", request.temperature},
                    {"max_tokens", request.max_output_tokens},
                    {"seed", request.seed}};
    InFlightLimit::Slot slot(limit_);
    const auto reply = parse_reply(post_json(endpoint_, body.dump(), timeout_), "llm");
    if (!reply.contains("text") || !reply["text"].is_string()) {
        throw Error(ErrorKind::kBackend, "llm reply lacks a text field");
    }
    return {reply["text"].get<std::string>()};
}

HttpRenderer::HttpRenderer(std::string url, double timeout_seconds, int max_in_flight, BlobLoader blobs,
                           fs::path library_dir)
    : endpoint_(Endpoint::parse(url)),
      timeout_(timeout_seconds),
      limit_(max_in_flight),
      blobs_(std::move(blobs)),
      library_dir_(std::move(library_dir)) {}

RenderResult HttpRenderer::render(const htmlkit::StagingManifest& manifest, htmlkit::Viewport viewport) {
    ScratchGuard guard{scratch_dir("stage")};
    materialize(manifest, guard.dir, blobs_, library_dir_);
    const Json body{{"staging_root", guard.dir.string()},
                    {"entry", manifest.entry_point},
                    {"viewport", {{"width", viewport.width}, {"height", viewport.height}}}};
    InFlightLimit::Slot slot(limit_);
    const auto reply = parse_reply(post_json(endpoint_, body.dump(), timeout_), "renderer");
    const auto log = reply.value("log", std::string{});
    if (!reply.contains("screenshot_png_base64") || !reply.contains("geometry")) {
        throw Error(ErrorKind::kBackend, "render failed: " + excerpt(log.empty() ? reply.dump() : log));
    }
    RenderResult result;
    result.screenshot = base64_decode(reply["screenshot_png_base64"].get<std::string>());
    result.geometry = htmlkit::parse_geometry(reply["geometry"].get<std::string>());
    result.truncated = reply.value("truncated", false);
    result.log = log;
    return result;
}

HttpImageSynth::HttpImageSynth(std::string url, double timeout_seconds, int max_in_flight)
    : endpoint_(Endpoint::parse(url)), timeout_(timeout_seconds), limit_(max_in_flight) {}

std::string HttpImageSynth::synthesize(const std::string& prompt) {
    InFlightLimit::Slot slot(limit_);
    const auto reply = parse_reply(post_json(endpoint_, Json{{"prompt", prompt}}.dump(), timeout_), "image synth");
    if (!reply.contains("png_base64")) throw Error(ErrorKind::kBackend, "image synth reply lacks png_base64");
    return base64_decode(reply["png_base64"].get<std::string>());
}

HttpEmbedder::HttpEmbedder(std::string url, double timeout_seconds, int max_in_flight, int dimension)
    : endpoint_(Endpoint::parse(url)), timeout_(timeout_seconds), limit_(max_in_flight), dimension_(dimension) {}

EmbeddingVector HttpEmbedder::embed(EmbedKind kind, std::string_view payload) {
    if (payload.empty()) throw ValidationError("payload", "embedding payload is empty");
    Json body{{"kind", kind == EmbedKind::kImage ? "image" : "text"}};
    if (kind == EmbedKind::kImage) {
        body["payload_base64"] = base64_encode(payload);
    } else {
        body["text"] = std::string(payload);
    }
    InFlightLimit::Slot slot(limit_);
    const auto reply = parse_reply(post_json(endpoint_, body.dump(), timeout_), "embedder");
    const auto values = reply.value("embedding", std::vector<double>{});
    if (static_cast<int>(values.size()) != dimension_) {
        throw Error(ErrorKind::kConfiguration, "embedding width " + std::to_string(values.size()) +
                                                   " does not match configured dimension " +
                                                   std::to_string(dimension_));
    }
    EmbeddingVector v = Eigen::Map<const Eigen::VectorXd>(values.data(), dimension_);
    const double norm = v.norm();
    if (!(norm > 0.0)) throw Error(ErrorKind::kBackend, "embedder returned a zero vector");
    return v / norm;
}

CommandSketchConverter::CommandSketchConverter(std::string command) : command_(std::move(command)) {}

std::string CommandSketchConverter::convert(std::string_view html, const htmlkit::GeometryMap& geometry) {
    ScratchGuard guard{scratch_dir("sketch")};
    write_text_file(guard.dir / "index.html", std::string(html));
    write_text_file(guard.dir / "geometry.jsonl", htmlkit::write_geometry(geometry));
    const auto out = guard.dir / "out.sketch";
    const auto cmd = command_ + " to-sketch '" + (guard.dir / "index.html").string() + "' '" +
                     (guard.dir / "geometry.jsonl").string() + "' '" + out.string() + "'";
    if (std::system(cmd.c_str()) != 0 || !fs::exists(out)) {
        throw Error(ErrorKind::kBackend, "sketch conversion command failed: " + command_);
    }
    return read_text_file(out);
}

std::string CommandSketchConverter::preview(std::string_view document) {
    ScratchGuard guard{scratch_dir("preview")};
    write_text_file(guard.dir / "in.sketch", std::string(document));
    const auto out = guard.dir / "preview.png";
    const auto cmd = command_ + " preview '" + (guard.dir / "in.sketch").string() + "' '" + out.string() + "'";
    if (std::system(cmd.c_str()) != 0 || !fs::exists(out)) {
        throw Error(ErrorKind::kBackend, "sketch preview command failed: " + command_);
    }
    return read_text_file(out);
}

}  // namespace uipref::gateway
