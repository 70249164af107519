#pragma once

#include <span>
#include <string>
#include <string_view>

namespace uipref::gateway {

/// Fixed instruction text for HTML generation, ending in "webpage: ". The
/// description is appended directly.
extern const std::string_view kGenerationInstructions;

std::string generation_prompt(std::string_view description);

/// Prompt asking the code model to apply a designer's free-form notes.
/// Comments are listed one per line as "- <comment>" inside the quotes.
std::string comment_edit_prompt(std::string_view html, std::span<const std::string> comments);

struct GroundedComment {
    std::string comment;
    std::string snippet;  // outer markup of the grounded element
};

/// Same as comment_edit_prompt but each note is paired with the markup of
/// the element it was drawn on, as "comment: <text>\nhtml: <snippet>".
std::string region_edit_prompt(std::string_view html, std::span<const GroundedComment> items);

/// Text prompts whose embeddings are combined into the scoring direction.
std::string positive_prompt(std::string_view description);
std::string negative_prompt(std::string_view description);
std::string empty_prompt();

/// Seed-example prompt used to grow the description list ten at a time.
std::string description_prompt(std::span<const std::string> seed_examples);

}  // namespace uipref::gateway
