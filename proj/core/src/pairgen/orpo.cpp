#include "uipref/pairgen/orpo.hpp"

#include <cctype>
#include <sstream>

#include "uipref/common/error.hpp"
#include "uipref/common/jsonl.hpp"

namespace uipref::pairgen {

std::string truncate_whitespace_tokens(std::string_view text, int max_tokens, bool& truncated) {
    truncated = false;
    if (max_tokens < 1) throw ValidationError("max_tokens", "token cap must be positive");
    int tokens = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (++tokens == max_tokens) {
            auto rest = i;
            while (rest < text.size() && std::isspace(static_cast<unsigned char>(text[rest]))) ++rest;
            if (rest < text.size()) {
                truncated = true;
                return std::string(text.substr(0, i));
            }
            break;
        }
    }
    return std::string(text);
}

OrpoExport export_orpo(std::span<const AlignmentPair> pairs, const std::filesystem::path& destination,
                       int max_tokens, const Truncator& truncator) {
    const Truncator cut = truncator ? truncator : Truncator(truncate_whitespace_tokens);
    std::ostringstream out;
    OrpoExport result;
    for (const auto& p : pairs) {
        bool cut_chosen = false;
        bool cut_rejected = false;
        Json record{{"prompt", p.prompt},
                    {"chosen", cut(p.chosen, max_tokens, cut_chosen)},
                    {"rejected", cut(p.rejected, max_tokens, cut_rejected)},
                    {"description_id", p.description_id},
                    {"chosen_score", p.chosen_score},
                    {"rejected_score", p.rejected_score},
                    {"truncated", cut_chosen || cut_rejected}};
        result.truncated += cut_chosen || cut_rejected;
        out << to_line(record) << '\n';
        ++result.records;
    }
    try {
        write_text_file(destination, out.str());
    } catch (const std::exception& e) {
        throw Error(ErrorKind::kIo, std::string("ORPO export failed: ") + e.what());
    }
    return result;
}

void validate_orpo_record(const Json& r) {
    if (!r.is_object()) throw ValidationError("record", "ORPO record must be an object");
    for (const char* name : {"prompt", "chosen", "rejected", "description_id"}) {
        if (!r.contains(name) || !r[name].is_string()) throw ValidationError(name, "missing or not a string");
    }
    for (const char* name : {"chosen_score", "rejected_score"}) {
        if (!r.contains(name) || !r[name].is_number()) throw ValidationError(name, "missing or not a number");
    }
    if (r.contains("truncated") && !r["truncated"].is_boolean()) {
        throw ValidationError("truncated", "must be a boolean");
    }
}

std::vector<OrpoRecord> read_orpo(const std::filesystem::path& source) {
    std::vector<OrpoRecord> out;
    for (const auto& r : read_jsonl(source)) {
        validate_orpo_record(r);
        out.push_back({r["prompt"].get<std::string>(), r["chosen"].get<std::string>(),
                       r["rejected"].get<std::string>(), r["description_id"].get<std::string>(),
                       r["chosen_score"].get<double>(), r["rejected_score"].get<double>(),
                       r.value("truncated", false)});
    }
    return out;
}

}  // namespace uipref::pairgen
