#pragma once

#include <string>
#include <string_view>

namespace uipref::gateway {

/// Body of the first fenced code block when the response has one, otherwise
/// the whole response with surrounding whitespace trimmed.
std::string extract_markup_payload(std::string_view response);

/// A full document carries both an opening `<html` and a closing `</html>`
/// tag. When the original markup had no html element, any payload with at
/// least one element qualifies.
bool is_complete_document(std::string_view markup, std::string_view original);

std::string escape_html(std::string_view text);

}  // namespace uipref::gateway
