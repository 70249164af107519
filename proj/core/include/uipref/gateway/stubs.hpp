#pragma once

#include <atomic>
#include <mutex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "uipref/gateway/backends.hpp"
#include "uipref/common/image.hpp"
#include "uipref/htmlkit/dom.hpp"

namespace uipref::gateway {

/// Deterministic code/text model. Output is a pure function of
/// (prompt, request seed, stub seed); it recognizes the description,
/// generation, and edit prompts and answers each in kind.
class StubLlm : public LlmClient {
public:
    struct Options {
        std::uint64_t seed = 0;
        /// 0 = every description is unique; otherwise descriptions are drawn
        /// from a fixed pool of this many distinct texts.
        std::size_t description_pool = 0;
    };

    StubLlm();
    explicit StubLlm(Options options);

    LlmResponse complete(const LlmRequest& request) override;

    std::size_t calls() const noexcept { return calls_.load(); }
    std::vector<LlmRequest> requests() const;

    /// The echo page returned for a generation prompt.
    static std::string echo_page(std::string_view description, std::uint64_t variant);

private:
    std::string describe(const LlmRequest& request) const;
    std::string generate(const LlmRequest& request) const;
    std::string edit_comments(const LlmRequest& request) const;
    std::string edit_regions(const LlmRequest& request) const;

    Options options_;
    std::atomic<std::size_t> calls_{0};
    mutable std::mutex log_mutex_;
    std::vector<LlmRequest> log_;
};

/// Block-flow layout of the rendered elements plus a flat-colored raster of
/// their boxes; deterministic for a given manifest and viewport.
class StubRenderer : public Renderer {
public:
    RenderResult render(const htmlkit::StagingManifest& manifest, htmlkit::Viewport viewport) override;

    /// Elements that never produce a box (document head, scripts, styles).
    static bool is_rendered_tag(std::string_view tag);
};

/// 64x64 solid-color PNG keyed by a hash of the prompt.
class StubImageSynth : public ImageSynth {
public:
    std::string synthesize(const std::string& prompt) override;
    static Rgb color_for(std::string_view prompt);
};

/// Sketch documents are JSON layer lists ({"layers":[{"name","frame"}]});
/// previews draw each layer frame.
class StubSketchConverter : public SketchConverter {
public:
    std::string convert(std::string_view html, const htmlkit::GeometryMap& geometry) override;
    std::string preview(std::string_view document) override;
};

/// Unit vectors from a seeded generator keyed by (kind, payload).
class StubEmbedder : public Embedder {
public:
    explicit StubEmbedder(int dimension = kDefaultEmbeddingDim, std::uint64_t seed = 0);

    EmbeddingVector embed(EmbedKind kind, std::string_view payload) override;
    int dimension() const override { return dimension_; }

private:
    int dimension_;
    std::uint64_t seed_;
};

Backends make_stub_backends(std::uint64_t seed = 0, int embedding_dim = kDefaultEmbeddingDim);

}  // namespace uipref::gateway
