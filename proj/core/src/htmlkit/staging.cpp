#include "uipref/htmlkit/staging.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "uipref/common/error.hpp"
#include "uipref/htmlkit/dom.hpp"
#include "uipref/htmlkit/images.hpp"

namespace uipref::htmlkit {

std::vector<LibraryPin> default_library_pins() {
    return {
        {"tailwindcss", "3.4.1", {"cdn.tailwindcss.com", "tailwindcss"}, "lib/tailwindcss-3.4.1.js"},
        {"font-awesome", "6.5.1", {"font-awesome", "fontawesome"}, "lib/font-awesome-6.5.1/css/all.min.css"},
    };
}

std::vector<std::string> StagingManifest::files() const {
    std::vector<std::string> out{entry_point};
    for (const auto& a : images) out.push_back(a.path);
    for (const auto& l : libraries) out.push_back(l.local_path);
    return out;
}

const std::vector<std::string>& url_attributes() {
    static const std::vector<std::string> attrs = {"src",    "href",   "srcset",     "poster",
                                                   "data",   "action", "formaction", "background",
                                                   "xlink:href"};
    return attrs;
}

bool is_local_reference(std::string_view url) {
    auto start = url.find_first_not_of(" \t\r\n");
    if (start == std::string_view::npos) return true;
    url = url.substr(start);
    if (url.front() == '#') return true;
    std::string lowered(url.substr(0, std::min<std::size_t>(url.size(), 16)));
    for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lowered.rfind("data:", 0) == 0) return true;
    if (url.front() == '/' || url.front() == '\\') return false;
    const auto colon = url.find(':');
    const auto slash = url.find('/');
    if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash)) return false;
    // reject any parent-directory segment
    std::size_t pos = 0;
    while (pos <= url.size()) {
        auto next = url.find('/', pos);
        if (next == std::string_view::npos) next = url.size();
        if (url.substr(pos, next - pos) == "..") return false;
        pos = next + 1;
    }
    return true;
}

namespace {

struct Edit {
    std::size_t begin;
    std::size_t end;
    std::string replacement;
};

const LibraryPin* match_pin(const std::vector<LibraryPin>& pins, std::string_view url) {
    for (const auto& pin : pins) {
        for (const auto& marker : pin.url_markers) {
            if (url.find(marker) != std::string_view::npos) return &pin;
        }
    }
    return nullptr;
}

}  // namespace

StagingManifest stage_assets(std::string_view html, const std::map<std::string, std::string>& placeholders,
                             const std::vector<LibraryPin>& pins) {
    const auto doc = Document::parse(std::string(html));
    const auto images = extract_images(doc);

    std::vector<std::string> missing;
    std::set<std::string> missing_seen;
    for (const auto& img : images) {
        if (!placeholders.count(img.placeholder_prompt) && missing_seen.insert(img.placeholder_prompt).second) {
            missing.push_back(img.placeholder_prompt);
        }
    }
    if (!missing.empty()) throw MissingPlaceholderError(std::move(missing));

    StagingManifest manifest;
    manifest.libraries = pins;
    std::vector<Edit> edits;
    std::size_t image_ordinal = 0;
    const auto& elements = doc.elements();

    for (std::size_t i = 0; i < elements.size(); ++i) {
        const int el = elements[i];
        const auto& node = doc.node(el);
        std::string image_path;
        if (node.tag == "img") {
            const auto& ref = images[image_ordinal];
            image_path = "assets/img-" + std::to_string(image_ordinal) + ".png";
            manifest.images.push_back({image_path, placeholders.at(ref.placeholder_prompt), ref.placeholder_prompt});
            ++image_ordinal;
        }
        for (const auto& attr : node.attributes) {
            const auto& names = url_attributes();
            if (std::find(names.begin(), names.end(), attr.name) == names.end()) continue;
            std::string replacement;
            if (!image_path.empty() && (attr.name == "src" || attr.name == "srcset")) {
                replacement = image_path;
            } else if (const auto* pin = match_pin(pins, attr.value)) {
                replacement = pin->local_path;
            } else if (!is_local_reference(attr.value)) {
                replacement = "#";
            } else {
                continue;
            }
            if (!attr.has_value) continue;
            const auto raw = html.substr(attr.value_begin, attr.value_end - attr.value_begin);
            if (raw == replacement) continue;
            const bool quoted = attr.value_begin > 0 && (html[attr.value_begin - 1] == '"' || html[attr.value_begin - 1] == '\'');
            edits.push_back({attr.value_begin, attr.value_end, quoted ? replacement : "\"" + replacement + "\""});
        }
        if (!image_path.empty() && !doc.attribute(el, "src")) {
            // img without src: insert one right after the tag name
            const auto at = node.begin + 1 + node.tag.size();
            edits.push_back({at, at, " src=\"" + image_path + "\""});
        }
    }

    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
    std::string out;
    out.reserve(html.size() + 64 * edits.size());
    std::size_t cursor = 0;
    for (const auto& e : edits) {
        out.append(html.substr(cursor, e.begin - cursor));
        out += e.replacement;
        cursor = e.end;
    }
    out.append(html.substr(cursor));
    manifest.html = std::move(out);
    return manifest;
}

}  // namespace uipref::htmlkit
