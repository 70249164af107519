#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uipref/pairgen/alignment.hpp"

namespace uipref::pairgen {

inline constexpr int kDefaultMaxTokens = 4096;

/// Returns the text cut to at most `max_tokens` tokens and whether it was cut.
using Truncator = std::function<std::string(std::string_view text, int max_tokens, bool& truncated)>;

/// Whitespace tokenization: keeps the text through the end of its
/// max_tokens-th token; shorter texts are returned unchanged.
std::string truncate_whitespace_tokens(std::string_view text, int max_tokens, bool& truncated);

struct OrpoRecord {
    std::string prompt;
    std::string chosen;
    std::string rejected;
    std::string description_id;
    double chosen_score = 0;
    double rejected_score = 0;
    bool truncated = false;
};

struct OrpoExport {
    std::size_t records = 0;
    std::size_t truncated = 0;  // records with at least one side cut
};

/// One line per pair: {prompt, chosen, rejected, description_id,
/// chosen_score, rejected_score, truncated}.
OrpoExport export_orpo(std::span<const AlignmentPair> pairs, const std::filesystem::path& destination,
                       int max_tokens = kDefaultMaxTokens, const Truncator& truncator = {});

std::vector<OrpoRecord> read_orpo(const std::filesystem::path& source);

/// Throws ValidationError naming the first missing or mistyped field.
void validate_orpo_record(const Json& record);

}  // namespace uipref::pairgen
