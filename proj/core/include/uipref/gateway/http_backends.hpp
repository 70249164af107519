#pragma once

#include <filesystem>
#include <memory>
#include <semaphore>
#include <string>

#include "uipref/gateway/backends.hpp"

namespace uipref::gateway {

/// Bounds the number of concurrent requests made through one client.
class InFlightLimit {
public:
    explicit InFlightLimit(int limit);

    class Slot {
    public:
        explicit Slot(InFlightLimit& owner);
        ~Slot();
        Slot(const Slot&) = delete;
        Slot& operator=(const Slot&) = delete;

    private:
        InFlightLimit& owner_;
    };

private:
    std::counting_semaphore<1024> slots_;
};

/// "http://host:port/path" split into the base ("http://host:port") and path.
struct Endpoint {
    std::string base;
    std::string path;

    static Endpoint parse(const std::string& url);
};

/// POSTs a JSON body and returns the parsed JSON reply. Transport failures,
/// timeouts, and non-2xx statuses raise backend errors.
std::string post_json(const Endpoint& endpoint, const std::string& body, double timeout_seconds);

/// LLM protocol: {model, prompt, temperature, max_tokens, seed} -> {text}.
class HttpLlm : public LlmClient {
public:
    HttpLlm(std::string url, double timeout_seconds, int max_in_flight);
    LlmResponse complete(const LlmRequest& request) override;

private:
    Endpoint endpoint_;
    double timeout_;
    InFlightLimit limit_;
};

/// Renderer protocol: {staging_root, entry, viewport:{width,height}} ->
/// {screenshot_png_base64, geometry (htmlkit line format), truncated, log}.
/// The manifest is materialized under a scratch directory first.
class HttpRenderer : public Renderer {
public:
    HttpRenderer(std::string url, double timeout_seconds, int max_in_flight, BlobLoader blobs,
                 std::filesystem::path library_dir);
    RenderResult render(const htmlkit::StagingManifest& manifest, htmlkit::Viewport viewport) override;

private:
    Endpoint endpoint_;
    double timeout_;
    InFlightLimit limit_;
    BlobLoader blobs_;
    std::filesystem::path library_dir_;
};

/// {prompt} -> {png_base64}.
class HttpImageSynth : public ImageSynth {
public:
    HttpImageSynth(std::string url, double timeout_seconds, int max_in_flight);
    std::string synthesize(const std::string& prompt) override;

private:
    Endpoint endpoint_;
    double timeout_;
    InFlightLimit limit_;
};

/// {kind:"image"|"text", text | payload_base64} -> {embedding:[...]}. The
/// returned vector is re-normalized and checked against the configured width.
class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(std::string url, double timeout_seconds, int max_in_flight, int dimension);
    EmbeddingVector embed(EmbedKind kind, std::string_view payload) override;
    int dimension() const override { return dimension_; }

private:
    Endpoint endpoint_;
    double timeout_;
    InFlightLimit limit_;
    int dimension_;
};

/// Runs `<command> to-sketch <html> <geometry> <out>` and
/// `<command> preview <sketch> <out.png>` in a scratch directory.
class CommandSketchConverter : public SketchConverter {
public:
    explicit CommandSketchConverter(std::string command);
    std::string convert(std::string_view html, const htmlkit::GeometryMap& geometry) override;
    std::string preview(std::string_view document) override;

private:
    std::string command_;
};

}  // namespace uipref::gateway
