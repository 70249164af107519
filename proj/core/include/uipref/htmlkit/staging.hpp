#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace uipref::htmlkit {

/// A pinned copy of a styling or icon library, served from the staging root
/// instead of a CDN so renders are reproducible.
struct LibraryPin {
    std::string name;
    std::string version;
    /// Substrings identifying references to this library in generated markup.
    std::vector<std::string> url_markers;
    std::string local_path;  // relative to the staging root
};

/// Tailwind CSS (play CDN build) and Font Awesome, the two libraries the
/// generation prompt allows. Versions are configuration.
std::vector<LibraryPin> default_library_pins();

struct StagedAsset {
    std::string path;      // relative to the staging root
    std::string blob_ref;  // content hash of the image bytes
    std::string prompt;
};

struct StagingManifest {
    std::string entry_point = "index.html";
    std::string html;  // rewritten markup written to entry_point
    std::vector<StagedAsset> images;
    std::vector<LibraryPin> libraries;

    /// entry point, then image assets, then library files.
    std::vector<std::string> files() const;
};

/// URL-bearing attributes that are rewritten and checked.
const std::vector<std::string>& url_attributes();

/// True for fragment, data:, and root-relative-free relative references.
bool is_local_reference(std::string_view url);

/// Rewrites every image to a staged asset path, every library reference to
/// its pinned local copy, and any other external reference to "#".
/// `placeholders` maps placeholder prompts to image blob hashes; missing
/// prompts raise a MissingPlaceholderError listing all of them.
StagingManifest stage_assets(std::string_view html, const std::map<std::string, std::string>& placeholders,
                             const std::vector<LibraryPin>& pins = default_library_pins());

}  // namespace uipref::htmlkit
