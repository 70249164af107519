#include "uipref/gateway/backends.hpp"

#include "uipref/common/jsonl.hpp"
#include "uipref/gateway/http_backends.hpp"
#include "uipref/gateway/stubs.hpp"

namespace uipref::gateway {

namespace fs = std::filesystem;

void BackendProfile::validate() const {
    if (!(timeout_seconds > 0.0)) throw ValidationError("timeout_seconds", "request timeout must be positive");
    if (retry_budget < 0) throw ValidationError("retry_budget", "retry budget must be non-negative");
    if (max_in_flight < 1) throw ValidationError("max_in_flight", "in-flight limit must be at least 1");
    if (embedding_dim < 1) throw ValidationError("embedding_dim", "embedding dimension must be positive");
    if (max_output_tokens < 1) throw ValidationError("max_output_tokens", "max output tokens must be positive");
    if (viewport.width < 1 || viewport.height < 1) throw ValidationError("viewport", "viewport must be positive");
    if (!llm_endpoint.empty() && llm_model.empty()) throw ValidationError("llm_model", "model name is required");
}

Backends make_backends(const BackendProfile& profile, BlobLoader blobs) {
    profile.validate();
    Backends b;
    b.profile = profile;
    const auto t = profile.timeout_seconds;
    const auto n = profile.max_in_flight;
    if (profile.llm_endpoint.empty()) {
        b.llm = std::make_shared<StubLlm>(StubLlm::Options{profile.stub_seed, 0});
    } else {
        b.llm = std::make_shared<HttpLlm>(profile.llm_endpoint, t, n);
    }
    if (profile.renderer_endpoint.empty()) {
        b.renderer = std::make_shared<StubRenderer>();
    } else {
        b.renderer = std::make_shared<HttpRenderer>(profile.renderer_endpoint, t, n, blobs, profile.library_dir);
    }
    if (profile.image_endpoint.empty()) {
        b.image_synth = std::make_shared<StubImageSynth>();
    } else {
        b.image_synth = std::make_shared<HttpImageSynth>(profile.image_endpoint, t, n);
    }
    if (profile.sketch_command.empty()) {
        b.sketch = std::make_shared<StubSketchConverter>();
    } else {
        b.sketch = std::make_shared<CommandSketchConverter>(profile.sketch_command);
    }
    if (profile.embedding_endpoint.empty()) {
        b.embedder = std::make_shared<StubEmbedder>(profile.embedding_dim, profile.stub_seed);
    } else {
        b.embedder = std::make_shared<HttpEmbedder>(profile.embedding_endpoint, t, n, profile.embedding_dim);
    }
    return b;
}

void materialize(const htmlkit::StagingManifest& manifest, const fs::path& root, const BlobLoader& blobs,
                 const fs::path& library_dir) {
    fs::create_directories(root);
    write_text_file(root / manifest.entry_point, manifest.html);
    for (const auto& asset : manifest.images) {
        if (!blobs) throw Error(ErrorKind::kConfiguration, "no blob loader for staged image " + asset.path);
        const auto target = root / asset.path;
        fs::create_directories(target.parent_path());
        write_text_file(target, blobs(asset.blob_ref));
    }
    for (const auto& lib : manifest.libraries) {
        const auto target = root / lib.local_path;
        fs::create_directories(target.parent_path());
        const auto source = library_dir.empty() ? fs::path{} : library_dir / lib.local_path;
        if (!source.empty() && fs::exists(source)) {
            fs::copy_file(source, target, fs::copy_options::overwrite_existing);
        } else {
            write_text_file(target, "");
        }
    }
}

}  // namespace uipref::gateway
