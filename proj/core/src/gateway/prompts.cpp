#include "uipref/gateway/prompts.hpp"

namespace uipref::gateway {

const std::string_view kGenerationInstructions =
    "provide the complete HTML code for a web page implemented with only tailwind CSS and font awesome icons. "
    "do not use any templating languages like jinja. the result should resemble an award-winning iOS app. "
    "include realistic and complete placeholder data. do not treat this as the starting point for an app - "
    "it should be the mockup of a final complete UI. remember to include alt text for all images. "
    "do not use javascript. do not use SVGs. here is a description of the webpage: ";

namespace {

constexpr std::string_view kEditPreamble =
    "i have implemented a website using only html, tailwind css, and font awesome icons.\n"
    "\n"
    "```html\n";

constexpr std::string_view kEditTrailer =
    "\"\n"
    "\n"
    "incorporate this feedback into the website code. you must respond with the entire code implementation. "
    "do not use comments that are placeholders for the original code.";

std::string edit_prompt(std::string_view html, std::string_view notes_header, std::string_view notes) {
    std::string out(kEditPreamble);
    out += html;
    out += "\n```\n\n";
    out += notes_header;
    out += "\n\"";
    out += notes;
    out += kEditTrailer;
    return out;
}

}  // namespace

std::string generation_prompt(std::string_view description) {
    std::string out(kGenerationInstructions);
    out += description;
    return out;
}

std::string comment_edit_prompt(std::string_view html, std::span<const std::string> comments) {
    std::string notes;
    for (std::size_t i = 0; i < comments.size(); ++i) {
        if (i) notes += '\n';
        notes += "- ";
        notes += comments[i];
    }
    return edit_prompt(html, "a designer has wrote some notes and feedback:", notes);
}

std::string region_edit_prompt(std::string_view html, std::span<const GroundedComment> items) {
    std::string notes;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) notes += '\n';
        notes += "comment: ";
        notes += items[i].comment;
        notes += "\nhtml: ";
        notes += items[i].snippet;
    }
    return edit_prompt(html, "a designer has wrote some notes and feedback for several regions of the HTML:", notes);
}

std::string positive_prompt(std::string_view description) {
    return "ui screenshot. well-designed. " + std::string(description);
}

std::string negative_prompt(std::string_view description) {
    return "ui screenshot. poor design. " + std::string(description);
}

std::string empty_prompt() { return "ui screenshot. poor design. empty screen"; }

std::string description_prompt(std::span<const std::string> seed_examples) {
    std::string out = "here are some example descriptions of app screens, covering functionality, layout, and content:\n";
    for (const auto& s : seed_examples) {
        out += "- ";
        out += s;
        out += '\n';
    }
    out += "\nwrite 10 more unique descriptions of app screens in the same style. "
           "respond with one description per line and nothing else.";
    return out;
}

}  // namespace uipref::gateway
