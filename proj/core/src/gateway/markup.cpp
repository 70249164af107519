#include "uipref/gateway/markup.hpp"

#include <algorithm>
#include <cctype>

#include "uipref/htmlkit/dom.hpp"

namespace uipref::gateway {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool icontains(std::string_view hay, std::string_view needle) {
    auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
    });
    return it != hay.end();
}

}  // namespace

std::string extract_markup_payload(std::string_view response) {
    const auto open = response.find("```");
    if (open != std::string_view::npos) {
        const auto line_end = response.find('\n', open);
        if (line_end != std::string_view::npos) {
            const auto close = response.find("```", line_end + 1);
            const auto body_end = close == std::string_view::npos ? response.size() : close;
            auto body = response.substr(line_end + 1, body_end - line_end - 1);
            if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
            if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
            return std::string(body);
        }
    }
    return std::string(trim(response));
}

bool is_complete_document(std::string_view markup, std::string_view original) {
    if (icontains(original, "<html")) return icontains(markup, "<html") && icontains(markup, "</html>");
    return !htmlkit::Document::parse(std::string(markup)).elements().empty();
}

std::string escape_html(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace uipref::gateway
