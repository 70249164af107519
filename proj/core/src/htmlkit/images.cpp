#include "uipref/htmlkit/images.hpp"

namespace uipref::htmlkit {

namespace {
bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }
}  // namespace

std::vector<ImageRef> extract_images(const Document& doc) {
    std::vector<ImageRef> out;
    const auto& elements = doc.elements();
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const int el = elements[i];
        if (doc.node(el).tag != "img") continue;
        ImageRef ref;
        ref.element_index = static_cast<int>(i);
        if (const auto* alt = doc.attribute(el, "alt"); alt && alt->has_value) ref.alt_text = alt->value;
        if (const auto* src = doc.attribute(el, "src")) ref.src = src->value;
        ref.placeholder_prompt = ref.alt_text && !blank(*ref.alt_text) ? *ref.alt_text : ref.src;
        out.push_back(std::move(ref));
    }
    return out;
}

std::vector<ImageRef> extract_images(std::string_view html) {
    return extract_images(Document::parse(std::string(html)));
}

}  // namespace uipref::htmlkit
