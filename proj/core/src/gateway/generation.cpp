#include "uipref/gateway/generation.hpp"

#include <algorithm>
#include <cctype>
#include <future>

#include "uipref/common/hash.hpp"
#include "uipref/common/image.hpp"
#include "uipref/corpus/text.hpp"
#include "uipref/gateway/markup.hpp"
#include "uipref/gateway/stubs.hpp"

namespace uipref::gateway {

std::vector<std::string> parse_description_lines(std::string_view reply) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= reply.size()) {
        auto nl = reply.find('\n', pos);
        if (nl == std::string_view::npos) nl = reply.size();
        auto line = reply.substr(pos, nl - pos);
        pos = nl + 1;
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i && j < line.size() && (line[j] == '.' || line[j] == ')')) {
            i = j + 1;
        } else if (i < line.size() && (line[i] == '-' || line[i] == '*')) {
            ++i;
        }
        auto text = line.substr(i);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
        if (!text.empty()) out.emplace_back(text);
    }
    return out;
}

Gateway::Gateway(Backends backends) : backends_(std::move(backends)) {
    backends_.profile.validate();
    if (!backends_.llm || !backends_.renderer || !backends_.image_synth || !backends_.sketch || !backends_.embedder) {
        throw Error(ErrorKind::kConfiguration, "every backend capability must be configured");
    }
}

LlmResponse Gateway::ask(const std::string& prompt, double temperature, std::uint64_t seed) {
    LlmRequest request{profile().llm_model, prompt, temperature, profile().max_output_tokens, seed};
    return with_retries(profile().retry_budget, [&] {
        ++llm_calls_;
        return backends_.llm->complete(request);
    });
}

std::vector<std::string> Gateway::generate_descriptions(std::size_t target_n,
                                                        std::span<const std::string> seed_examples,
                                                        double temperature, std::uint64_t rng_seed,
                                                        std::size_t max_rounds) {
    if (target_n == 0) throw ValidationError("target_n", "target count must be positive");
    if (seed_examples.empty()) throw ValidationError("seed_examples", "at least one seed example is required");
    if (max_rounds == 0) max_rounds = 50 + 4 * ((target_n + 9) / 10);

    const auto prompt = description_prompt(seed_examples);
    corpus::DescriptionSet seeds(seed_examples);
    std::vector<std::string> collected;
    for (std::size_t round = 0; collected.size() < target_n; ++round) {
        if (round >= max_rounds) {
            throw PartialResultError("description generation stopped after " + std::to_string(max_rounds) +
                                         " rounds with " + std::to_string(collected.size()) + " of " +
                                         std::to_string(target_n) + " texts",
                                     collected);
        }
        std::vector<std::string> fresh;
        try {
            fresh = parse_description_lines(ask(prompt, temperature, derive_seed(rng_seed, round)).text);
        } catch (const Error& e) {
            throw PartialResultError(std::string("description generation failed: ") + e.what(), collected);
        }
        fresh.erase(std::remove_if(fresh.begin(), fresh.end(), [&](const std::string& t) { return seeds.contains(t); }),
                    fresh.end());
        collected = corpus::dedup_merge(collected, fresh).merged;
    }
    collected.resize(target_n);
    return collected;
}

CandidateBatch Gateway::generate_candidates(std::string_view description, int n, double temperature,
                                            std::uint64_t rng_seed) {
    if (n < 1) throw ValidationError("n", "candidate count must be at least 1");
    const auto prompt = generation_prompt(description);
    std::vector<std::optional<std::string>> results(static_cast<std::size_t>(n));
    std::vector<std::string> errors(static_cast<std::size_t>(n));

    const int wave = std::max(1, profile().max_in_flight);
    for (int start = 0; start < n; start += wave) {
        std::vector<std::future<void>> pending;
        for (int i = start; i < std::min(n, start + wave); ++i) {
            pending.push_back(std::async(std::launch::async, [&, i] {
                try {
                    const auto reply = ask(prompt, temperature, derive_seed(rng_seed, static_cast<std::uint64_t>(i)));
                    auto markup = extract_markup_payload(reply.text);
                    if (markup.empty()) throw Error(ErrorKind::kBackend, "empty completion");
                    results[static_cast<std::size_t>(i)] = std::move(markup);
                } catch (const std::exception& e) {
                    errors[static_cast<std::size_t>(i)] = e.what();
                }
            }));
        }
        for (auto& f : pending) f.get();
    }

    CandidateBatch batch;
    for (int i = 0; i < n; ++i) {
        if (results[static_cast<std::size_t>(i)]) {
            batch.markups.push_back(std::move(*results[static_cast<std::size_t>(i)]));
        } else {
            batch.failures.push_back({i, errors[static_cast<std::size_t>(i)]});
        }
    }
    if (batch.markups.empty()) {
        throw Error(ErrorKind::kBackend, "no candidate obtained; first failure: " + batch.failures.front().message);
    }
    return batch;
}

std::string Gateway::edit(std::string_view html, const std::string& prompt, double temperature) {
    const auto reply = ask(prompt, temperature, fnv1a64(prompt));
    auto markup = extract_markup_payload(reply.text);
    if (!is_complete_document(markup, html)) {
        throw Error(ErrorKind::kMalformedEdit, "edit response is not a complete document");
    }
    return markup;
}

std::string Gateway::improve_with_comments(std::string_view html, std::span<const std::string> comments,
                                           double temperature) {
    if (comments.empty()) throw ValidationError("comments", "at least one comment is required");
    return edit(html, comment_edit_prompt(html, comments), temperature);
}

std::string Gateway::improve_with_regions(std::string_view html, std::span<const GroundedComment> grounded,
                                          double temperature) {
    if (grounded.empty()) throw ValidationError("grounded", "at least one grounded comment is required");
    for (const auto& g : grounded) {
        if (g.snippet.empty()) throw ValidationError("snippet", "grounded comment has no snippet");
    }
    return edit(html, region_edit_prompt(html, grounded), temperature);
}

RenderResult Gateway::render(const htmlkit::StagingManifest& manifest, std::optional<htmlkit::Viewport> viewport) {
    const auto vp = viewport.value_or(profile().viewport);
    auto result = with_retries(profile().retry_budget, [&] { return backends_.renderer->render(manifest, vp); });
    int w = 0;
    int h = 0;
    if (!png_dimensions(result.screenshot, w, h) || w != vp.width || h != vp.height) {
        throw Error(ErrorKind::kBackend, "screenshot is " + std::to_string(w) + "x" + std::to_string(h) +
                                             ", expected the viewport size; log: " + result.log.substr(0, 240));
    }
    result.geometry.viewport = vp;
    return result;
}

Placeholder Gateway::synthesize_placeholder(const std::string& prompt) {
    if (prompt.empty()) throw ValidationError("prompt", "placeholder prompt is empty");
    try {
        auto png = with_retries(profile().retry_budget, [&] { return backends_.image_synth->synthesize(prompt); });
        int w = 0;
        int h = 0;
        if (!png_dimensions(png, w, h)) throw Error(ErrorKind::kBackend, "image synth returned a non-PNG payload");
        return {std::move(png), false, {}};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::kBackend) throw;
        StubImageSynth fallback;
        return {fallback.synthesize(prompt), true, e.what()};
    }
}

std::string Gateway::to_sketch(std::string_view html, const htmlkit::GeometryMap& geometry) {
    return with_retries(profile().retry_budget, [&] { return backends_.sketch->convert(html, geometry); });
}

std::string Gateway::preview(std::string_view sketch_document) {
    return with_retries(profile().retry_budget, [&] { return backends_.sketch->preview(sketch_document); });
}

EmbeddingVector Gateway::embed(EmbedKind kind, std::string_view payload) {
    if (payload.empty()) throw ValidationError("payload", "embedding payload is empty");
    auto v = with_retries(profile().retry_budget, [&] { return backends_.embedder->embed(kind, payload); });
    if (v.size() != profile().embedding_dim) {
        throw Error(ErrorKind::kConfiguration, "embedding width " + std::to_string(v.size()) +
                                                   " differs from configured " +
                                                   std::to_string(profile().embedding_dim));
    }
    return v;
}

void Gateway::check_head_dimension(int head_dimension) const {
    if (head_dimension != profile().embedding_dim || head_dimension != backends_.embedder->dimension()) {
        throw Error(ErrorKind::kConfiguration, "reward head dimension " + std::to_string(head_dimension) +
                                                   " does not match embedding dimension " +
                                                   std::to_string(backends_.embedder->dimension()));
    }
}

}  // namespace uipref::gateway
