#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uipref/htmlkit/dom.hpp"

namespace uipref::htmlkit {

struct ImageRef {
    int element_index = 0;  // position among all elements, document order
    std::optional<std::string> alt_text;
    std::string src;
    /// Text fed to the placeholder image synthesizer: the alt text when
    /// present and non-blank, otherwise the src attribute value.
    std::string placeholder_prompt;
};

std::vector<ImageRef> extract_images(const Document& doc);
std::vector<ImageRef> extract_images(std::string_view html);

}  // namespace uipref::htmlkit
