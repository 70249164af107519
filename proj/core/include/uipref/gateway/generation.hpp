#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uipref/gateway/backends.hpp"
#include "uipref/gateway/prompts.hpp"

namespace uipref::gateway {

struct CandidateFailure {
    int index = 0;
    std::string message;
};

struct CandidateBatch {
    std::vector<std::string> markups;  // in request order, failures skipped
    std::vector<CandidateFailure> failures;
};

struct Placeholder {
    std::string png;
    bool fallback = false;  // backend failed; stub image substituted
    std::string warning;
};

/// Splits a description-generation reply into texts, dropping list markers
/// ("1.", "2)", "-", "*") and blank lines.
std::vector<std::string> parse_description_lines(std::string_view reply);

/// High-level operations over a set of backends. Thread-safe when the
/// underlying clients are.
class Gateway {
public:
    explicit Gateway(Backends backends);

    const Backends& backends() const noexcept { return backends_; }
    const BackendProfile& profile() const noexcept { return backends_.profile; }

    /// Prompts for ten descriptions at a time and merges the unique ones
    /// until `target_n` are collected. Seed examples never appear in the
    /// result. `max_rounds` = 0 picks a bound proportional to the target.
    std::vector<std::string> generate_descriptions(std::size_t target_n, std::span<const std::string> seed_examples,
                                                   double temperature, std::uint64_t rng_seed,
                                                   std::size_t max_rounds = 0);

    /// Samples `n` pages for one description. Request i uses seed
    /// derive_seed(rng_seed, i). Throws only when every request failed.
    CandidateBatch generate_candidates(std::string_view description, int n, double temperature,
                                       std::uint64_t rng_seed);

    std::string improve_with_comments(std::string_view html, std::span<const std::string> comments,
                                      double temperature = 0.0);
    std::string improve_with_regions(std::string_view html, std::span<const GroundedComment> grounded,
                                     double temperature = 0.0);

    RenderResult render(const htmlkit::StagingManifest& manifest, std::optional<htmlkit::Viewport> viewport = {});
    Placeholder synthesize_placeholder(const std::string& prompt);

    std::string to_sketch(std::string_view html, const htmlkit::GeometryMap& geometry);
    std::string preview(std::string_view sketch_document);

    EmbeddingVector embed(EmbedKind kind, std::string_view payload);
    /// Configuration error unless the embedding width equals `head_dimension`.
    void check_head_dimension(int head_dimension) const;

    /// Number of LLM requests issued (including retries).
    std::size_t llm_calls() const noexcept { return llm_calls_; }

private:
    std::string edit(std::string_view html, const std::string& prompt, double temperature);
    LlmResponse ask(const std::string& prompt, double temperature, std::uint64_t seed);

    Backends backends_;
    std::atomic<std::size_t> llm_calls_{0};
};

}  // namespace uipref::gateway
