#include "uipref/gateway/stubs.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>

#include "uipref/common/hash.hpp"
#include "uipref/common/image.hpp"
#include "uipref/common/jsonl.hpp"
#include "uipref/gateway/markup.hpp"
#include "uipref/gateway/prompts.hpp"

namespace uipref::gateway {

namespace {

constexpr std::string_view kDescriptionMarker = "here are some example descriptions of app screens";
constexpr std::string_view kEditMarker = "i have implemented a website using only html";
constexpr std::string_view kRegionHeader = "several regions of the HTML:\n\"";
constexpr std::string_view kCommentHeader = "notes and feedback:\n\"";
constexpr std::string_view kNotesTrailer = "\"\n\nincorporate this feedback";

constexpr std::array<std::string_view, 8> kAdjectives = {"minimal", "colorful", "dark-mode", "playful",
                                                         "dense",   "calm",     "bold",      "elegant"};
constexpr std::array<std::string_view, 10> kScreens = {"login",   "settings", "checkout", "profile", "feed",
                                                       "search",  "onboarding", "dashboard", "chat", "detail"};
constexpr std::array<std::string_view, 10> kDomains = {"banking", "recipe",  "fitness", "travel", "music",
                                                       "weather", "reading", "podcast", "pet care", "grocery"};

std::string fenced(std::string_view html) { return "```html\n" + std::string(html) + "\n```"; }

std::size_t ifind_last(std::string_view hay, std::string_view needle) {
    if (needle.size() > hay.size()) return std::string_view::npos;
    for (std::size_t i = hay.size() - needle.size() + 1; i-- > 0;) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size() && match; ++j) {
            match = std::tolower(static_cast<unsigned char>(hay[i + j])) == needle[j];
        }
        if (match) return i;
    }
    return std::string_view::npos;
}

std::string_view notes_block(std::string_view prompt, std::string_view header) {
    const auto h = prompt.find(header);
    const auto t = prompt.rfind(kNotesTrailer);
    if (h == std::string_view::npos || t == std::string_view::npos || t < h + header.size()) return {};
    return prompt.substr(h + header.size(), t - h - header.size());
}

Rgb lighten(Rgb c) {
    return {static_cast<std::uint8_t>((c.r + 255) / 2), static_cast<std::uint8_t>((c.g + 255) / 2),
            static_cast<std::uint8_t>((c.b + 255) / 2)};
}

Rgb darken(Rgb c) {
    return {static_cast<std::uint8_t>(c.r / 2), static_cast<std::uint8_t>(c.g / 2), static_cast<std::uint8_t>(c.b / 2)};
}

}  // namespace

// StubLlm --------------------------------------------------------------------

StubLlm::StubLlm() : StubLlm(Options{}) {}
StubLlm::StubLlm(Options options) : options_(options) {}

std::vector<LlmRequest> StubLlm::requests() const {
    std::lock_guard lock(log_mutex_);
    return log_;
}

LlmResponse StubLlm::complete(const LlmRequest& request) {
    ++calls_;
    {
        std::lock_guard lock(log_mutex_);
        log_.push_back(request);
    }
    const std::string_view prompt = request.prompt;
    if (prompt.rfind(kGenerationInstructions, 0) == 0) return {generate(request)};
    if (prompt.rfind(kDescriptionMarker, 0) == 0) return {describe(request)};
    if (prompt.rfind(kEditMarker, 0) == 0) {
        if (prompt.find(kRegionHeader) != std::string_view::npos) return {edit_regions(request)};
        return {edit_comments(request)};
    }
    return {"ok"};
}

std::string StubLlm::describe(const LlmRequest& request) const {
    std::mt19937_64 rng(splitmix64(options_.seed ^ request.seed) ^ fnv1a64(request.prompt));
    std::string out;
    for (int i = 0; i < 10; ++i) {
        if (options_.description_pool > 0) {
            const auto k = rng() % options_.description_pool;
            out += std::to_string(i + 1) + ". a " + std::string(kAdjectives[k % kAdjectives.size()]) + " " +
                   std::string(kScreens[(k / kAdjectives.size()) % kScreens.size()]) + " screen for a " +
                   std::string(kDomains[(k / 80) % kDomains.size()]) + " app, layout " + std::to_string(k) + "\n";
        } else {
            const auto a = rng();
            out += std::to_string(i + 1) + ". a " + std::string(kAdjectives[a % kAdjectives.size()]) + " " +
                   std::string(kScreens[(a >> 8) % kScreens.size()]) + " screen for a " +
                   std::string(kDomains[(a >> 16) % kDomains.size()]) + " app, variant " +
                   std::to_string((a >> 24) % 1000000000ULL) + "\n";
        }
    }
    return out;
}

std::string StubLlm::echo_page(std::string_view description, std::uint64_t variant) {
    const auto desc = escape_html(description);
    const int sections = 1 + static_cast<int>(variant % 4);
    const bool with_image = variant % 3 != 0;
    std::string page =
        "<!DOCTYPE html>\n"
        "<html lang=\"en\">\n"
        "<head>\n"
        "<meta charset=\"utf-8\">\n"
        "<title>" + desc + "</title>\n"
        "<script src=\"https://cdn.tailwindcss.com\"></script>\n"
        "<link rel=\"stylesheet\" href=\"https://cdnjs.cloudflare.com/ajax/libs/font-awesome/6.5.1/css/all.min.css\">\n"
        "</head>\n"
        "<body class=\"bg-gray-50 font-sans\">\n"
        "<header class=\"p-4 bg-white shadow\"><h1 class=\"text-xl font-bold\">" + desc + "</h1></header>\n"
        "<main class=\"p-4 space-y-4\">\n";
    if (with_image) {
        page += "<img class=\"w-full rounded-xl\" src=\"hero-" + std::to_string(variant % 97) +
                ".png\" alt=\"illustration for " + desc + "\">\n";
    }
    for (int i = 0; i < sections; ++i) {
        const auto tone = (variant >> (4 * i)) % 5;
        page += "<section class=\"rounded-lg bg-white p-4 tone-" + std::to_string(tone) + "\">"
                "<h2 class=\"font-semibold\">Section " + std::to_string(i + 1) + "</h2>"
                "<p class=\"text-gray-600\">Placeholder content block " + std::to_string(i + 1) + " for " + desc +
                ".</p>"
                "<button class=\"mt-2 px-4 py-2 rounded bg-blue-500 text-white\"><i class=\"fa fa-check\"></i> "
                "Action " + std::to_string(i + 1) + "</button></section>\n";
    }
    page += "</main>\n</body>\n</html>";
    return page;
}

std::string StubLlm::generate(const LlmRequest& request) const {
    const std::string_view prompt = request.prompt;
    const auto description = prompt.substr(std::min(prompt.size(), kGenerationInstructions.size()));
    const auto variant = splitmix64(options_.seed ^ splitmix64(request.seed) ^ fnv1a64(description));
    return "Here is the page.\n\n" + fenced(echo_page(description, variant));
}

std::string StubLlm::edit_comments(const LlmRequest& request) const {
    auto page = extract_markup_payload(request.prompt);
    const auto notes = notes_block(request.prompt, kCommentHeader);
    std::size_t count = notes.empty() ? 0 : 1;
    for (char c : notes) count += c == '\n';
    const std::string marker = "<div class=\"p-4\" data-feedback-applied=\"" + std::to_string(count) +
                               "\">revised for " + std::to_string(count) + " note(s)</div>\n";
    const auto body_close = ifind_last(page, "</body>");
    if (body_close == std::string::npos) {
        page += marker;
    } else {
        page.insert(body_close, marker);
    }
    return fenced(page);
}

std::string StubLlm::edit_regions(const LlmRequest& request) const {
    auto page = extract_markup_payload(request.prompt);
    const auto notes = notes_block(request.prompt, kRegionHeader);
    std::vector<std::size_t> insert_at;
    std::size_t pos = 0;
    while (true) {
        const auto h = notes.find("\nhtml: ", pos);
        if (h == std::string_view::npos) break;
        const auto start = h + 7;
        auto next = notes.find("\ncomment: ", start);
        if (next == std::string_view::npos) next = notes.size();
        const auto snippet = notes.substr(start, next - start);
        pos = next;
        const auto at = page.find(snippet);
        if (snippet.empty() || snippet.front() != '<' || at == std::string::npos) continue;
        std::size_t name_end = at + 1;
        while (name_end < page.size() && std::isalnum(static_cast<unsigned char>(page[name_end]))) ++name_end;
        if (std::find(insert_at.begin(), insert_at.end(), name_end) == insert_at.end()) insert_at.push_back(name_end);
    }
    std::sort(insert_at.rbegin(), insert_at.rend());
    for (auto at : insert_at) page.insert(at, " data-revised=\"true\"");
    return fenced(page);
}

// StubRenderer ---------------------------------------------------------------

bool StubRenderer::is_rendered_tag(std::string_view tag) {
    static constexpr std::array<std::string_view, 10> kHidden = {
        "head", "script", "style", "meta", "link", "title", "template", "noscript", "base", "svg"};
    return std::find(kHidden.begin(), kHidden.end(), tag) == kHidden.end();
}

namespace {

class FlowLayout {
public:
    FlowLayout(const htmlkit::Document& doc, std::vector<htmlkit::ElementBox>& boxes) : doc_(doc), boxes_(boxes) {}

    double layout(int el, double x, double y, double w) {
        const auto& node = doc_.node(el);
        if (!StubRenderer::is_rendered_tag(node.tag)) return 0.0;
        constexpr double kPad = 4.0;
        constexpr double kLine = 18.0;
        constexpr double kCharWidth = 7.0;

        const std::size_t slot = boxes_.size();
        boxes_.push_back({doc_.path_of(el), {}});
        std::string style;
        for (const auto& a : node.attributes) style += a.name + "=" + a.value + ";";
        colors_.push_back(color_from_hash(fnv1a64(node.tag + "|" + style)));

        double h = 0.0;
        if (node.tag == "img") {
            h = 120.0;
        } else if (node.tag == "input" || node.tag == "select" || node.tag == "textarea") {
            h = 32.0;
        } else if (node.tag == "br" || node.tag == "hr") {
            h = kPad;
        } else {
            std::size_t chars = 0;
            for (int c : node.children) {
                const auto& child = doc_.node(c);
                if (child.kind != htmlkit::NodeKind::kText) continue;
                for (char ch : child.text) chars += ch == ' ' || !std::isspace(static_cast<unsigned char>(ch));
            }
            const double inner_w = std::max(0.0, w - 2 * kPad);
            const auto per_line = std::max<std::size_t>(1, static_cast<std::size_t>(inner_w / kCharWidth));
            const std::size_t lines = chars == 0 ? 0 : (chars + per_line - 1) / per_line;
            const double text_top = y + kPad;
            for (std::size_t i = 0; i < lines; ++i) {
                const auto run = std::min(chars - i * per_line, per_line);
                bars_.push_back({x + kPad, text_top + static_cast<double>(i) * kLine + 5,
                                 std::min(inner_w, static_cast<double>(run) * kCharWidth), 8});
            }
            double cursor = text_top + static_cast<double>(lines) * kLine;
            for (int c : node.children) {
                if (doc_.node(c).kind == htmlkit::NodeKind::kElement) cursor += layout(c, x + kPad, cursor, inner_w);
            }
            h = cursor - y + kPad;
        }
        boxes_[slot].bbox = {x, y, w, h};
        bottom_ = std::max(bottom_, y + h);
        return h;
    }

    /// Boxes in document order so descendants paint over ancestors, then text bars.
    void paint(Image& canvas) const {
        for (std::size_t i = 0; i < boxes_.size(); ++i) {
            const auto& r = boxes_[i].bbox;
            const int x = static_cast<int>(r.x), y = static_cast<int>(r.y);
            const int w = static_cast<int>(r.w), h = static_cast<int>(r.h);
            canvas.fill_rect(x, y, w, h, lighten(colors_[i]));
            canvas.stroke_rect(x, y, w, h, darken(colors_[i]));
        }
        for (const auto& b : bars_) {
            canvas.fill_rect(static_cast<int>(b.x), static_cast<int>(b.y), static_cast<int>(b.w),
                             static_cast<int>(b.h), {90, 90, 90});
        }
    }

    double content_height() const { return bottom_; }

private:
    const htmlkit::Document& doc_;
    std::vector<htmlkit::ElementBox>& boxes_;
    std::vector<Rgb> colors_;
    std::vector<htmlkit::Rect> bars_;
    double bottom_ = 0.0;
};

}  // namespace

RenderResult StubRenderer::render(const htmlkit::StagingManifest& manifest, htmlkit::Viewport viewport) {
    if (viewport.width <= 0 || viewport.height <= 0) {
        throw Error(ErrorKind::kInvalidInput, "viewport dimensions must be positive");
    }
    const auto doc = htmlkit::Document::parse(manifest.html);
    Image canvas(viewport.width, viewport.height, {255, 255, 255});
    // Tint the page background by document hash so distinct pages never
    // rasterize identically even when their layouts coincide.
    const auto tint = color_from_hash(fnv1a64(manifest.html));
    canvas.fill_rect(0, 0, viewport.width, viewport.height, lighten(lighten(tint)));

    RenderResult result;
    result.geometry.viewport = viewport;
    FlowLayout flow(doc, result.geometry.boxes);
    double cursor = 0.0;
    for (int el : doc.element_children(htmlkit::Document::kDocumentNode)) {
        cursor += flow.layout(el, 0.0, cursor, static_cast<double>(viewport.width));
    }
    flow.paint(canvas);
    result.truncated = flow.content_height() > viewport.height;
    result.screenshot = encode_png(canvas);
    result.log = "stub render: " + std::to_string(result.geometry.boxes.size()) + " elements";
    return result;
}

// StubImageSynth -------------------------------------------------------------

Rgb StubImageSynth::color_for(std::string_view prompt) { return color_from_hash(fnv1a64(prompt)); }

std::string StubImageSynth::synthesize(const std::string& prompt) {
    if (prompt.empty()) throw ValidationError("prompt", "placeholder prompt is empty");
    return encode_png(Image(64, 64, color_for(prompt)));
}

// StubSketchConverter --------------------------------------------------------

std::string StubSketchConverter::convert(std::string_view html, const htmlkit::GeometryMap& geometry) {
    const auto doc = htmlkit::Document::parse(std::string(html));
    Json layers = Json::array();
    for (const auto& b : geometry.boxes) {
        if (!doc.resolve(b.element_path)) {
            throw Error(ErrorKind::kStaleGeometry, "geometry element '" + b.element_path + "' is not in the markup");
        }
        layers.push_back({{"name", b.element_path},
                          {"frame", {{"x", b.bbox.x}, {"y", b.bbox.y}, {"w", b.bbox.w}, {"h", b.bbox.h}}}});
    }
    Json document{{"format", "uipref-sketch/1"},
                  {"viewport", {{"width", geometry.viewport.width}, {"height", geometry.viewport.height}}},
                  {"layers", layers}};
    return to_line(document);
}

std::string StubSketchConverter::preview(std::string_view document) {
    Json doc;
    try {
        doc = Json::parse(document);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::kInvalidInput, std::string("unreadable sketch document: ") + e.what());
    }
    if (!doc.contains("viewport") || !doc.contains("layers")) {
        throw Error(ErrorKind::kInvalidInput, "sketch document lacks viewport or layers");
    }
    Image canvas(doc["viewport"].at("width").get<int>(), doc["viewport"].at("height").get<int>());
    for (const auto& layer : doc["layers"]) {
        const auto& f = layer.at("frame");
        const auto color = color_from_hash(fnv1a64(layer.at("name").get<std::string>() + "|" + to_line(f)));
        const int x = static_cast<int>(f.at("x").get<double>());
        const int y = static_cast<int>(f.at("y").get<double>());
        const int w = static_cast<int>(f.at("w").get<double>());
        const int h = static_cast<int>(f.at("h").get<double>());
        canvas.fill_rect(x, y, w, h, lighten(color));
        canvas.stroke_rect(x, y, w, h, darken(color));
    }
    return encode_png(canvas);
}

// StubEmbedder ---------------------------------------------------------------

StubEmbedder::StubEmbedder(int dimension, std::uint64_t seed) : dimension_(dimension), seed_(seed) {
    if (dimension <= 0) throw Error(ErrorKind::kConfiguration, "embedding dimension must be positive");
}

EmbeddingVector StubEmbedder::embed(EmbedKind kind, std::string_view payload) {
    if (payload.empty()) throw ValidationError("payload", "embedding payload is empty");
    std::mt19937_64 rng(fnv1a64(payload) ^ splitmix64(seed_ + (kind == EmbedKind::kImage ? 1 : 2)));
    std::normal_distribution<double> normal(0.0, 1.0);
    EmbeddingVector v(dimension_);
    for (int i = 0; i < dimension_; ++i) v[i] = normal(rng);
    v.normalize();
    return v;
}

Backends make_stub_backends(std::uint64_t seed, int embedding_dim) {
    Backends b;
    b.profile.stub_seed = seed;
    b.profile.embedding_dim = embedding_dim;
    b.llm = std::make_shared<StubLlm>(StubLlm::Options{seed, 0});
    b.renderer = std::make_shared<StubRenderer>();
    b.image_synth = std::make_shared<StubImageSynth>();
    b.sketch = std::make_shared<StubSketchConverter>();
    b.embedder = std::make_shared<StubEmbedder>(embedding_dim, seed);
    return b;
}

}  // namespace uipref::gateway
