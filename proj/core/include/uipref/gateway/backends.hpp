#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "uipref/common/error.hpp"
#include "uipref/htmlkit/geometry.hpp"
#include "uipref/htmlkit/staging.hpp"

namespace uipref::gateway {

using EmbeddingVector = Eigen::VectorXd;

inline constexpr int kDefaultEmbeddingDim = 512;
inline constexpr int kDefaultMaxOutputTokens = 4096;

/// Where each external capability lives. Empty endpoints select the
/// deterministic stub for that capability.
struct BackendProfile {
    std::string renderer_endpoint;
    std::string llm_endpoint;
    std::string llm_model = "qwen2.5-coder:32b-instruct-fp16";
    std::string image_endpoint;
    std::string sketch_command;
    std::string embedding_endpoint;
    double timeout_seconds = 120.0;
    int retry_budget = 2;
    int max_in_flight = 4;
    int embedding_dim = kDefaultEmbeddingDim;
    int max_output_tokens = kDefaultMaxOutputTokens;
    htmlkit::Viewport viewport = htmlkit::kDefaultViewport;
    std::filesystem::path library_dir;  // pinned library files for staging
    std::uint64_t stub_seed = 0;

    void validate() const;
};

struct LlmRequest {
    std::string model;
    std::string prompt;
    double temperature = 1.0;
    int max_output_tokens = kDefaultMaxOutputTokens;
    std::uint64_t seed = 0;
};

struct LlmResponse {
    std::string text;
};

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual LlmResponse complete(const LlmRequest& request) = 0;
};

struct RenderResult {
    std::string screenshot;  // PNG, viewport-sized
    htmlkit::GeometryMap geometry;
    bool truncated = false;  // content taller than the viewport
    std::string log;
};

class Renderer {
public:
    virtual ~Renderer() = default;
    virtual RenderResult render(const htmlkit::StagingManifest& manifest, htmlkit::Viewport viewport) = 0;
};

class ImageSynth {
public:
    virtual ~ImageSynth() = default;
    /// PNG bytes for the prompt.
    virtual std::string synthesize(const std::string& prompt) = 0;
};

class SketchConverter {
public:
    virtual ~SketchConverter() = default;
    virtual std::string convert(std::string_view html, const htmlkit::GeometryMap& geometry) = 0;
    /// PNG preview of a sketch document.
    virtual std::string preview(std::string_view document) = 0;
};

enum class EmbedKind { kImage, kText };

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual EmbeddingVector embed(EmbedKind kind, std::string_view payload) = 0;
    virtual int dimension() const = 0;
};

using BlobLoader = std::function<std::string(const std::string& hash)>;

struct Backends {
    BackendProfile profile;
    std::shared_ptr<LlmClient> llm;
    std::shared_ptr<Renderer> renderer;
    std::shared_ptr<ImageSynth> image_synth;
    std::shared_ptr<SketchConverter> sketch;
    std::shared_ptr<Embedder> embedder;
};

/// Stubs for every capability without an endpoint, HTTP clients otherwise.
/// The blob loader lets HTTP renderers materialize staged image assets.
Backends make_backends(const BackendProfile& profile, BlobLoader blobs = {});

/// Runs `fn`, retrying backend failures up to `budget` extra times.
template <class Fn>
auto with_retries(int budget, Fn&& fn) -> decltype(fn()) {
    for (int attempt = 0;; ++attempt) {
        try {
            return fn();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::kBackend || attempt >= budget) throw;
        }
    }
}

/// Writes the entry point, image assets, and library files of a staging
/// manifest under `root`. Library files come from `library_dir` when
/// present there, otherwise an empty placeholder file is written.
void materialize(const htmlkit::StagingManifest& manifest, const std::filesystem::path& root,
                 const BlobLoader& blobs, const std::filesystem::path& library_dir = {});

}  // namespace uipref::gateway
