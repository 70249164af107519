#include "uipref/common/error.hpp"

#include <utility>

namespace uipref {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kNotFound: return "not-found";
        case ErrorKind::kValidation: return "validation";
        case ErrorKind::kIntegrity: return "integrity";
        case ErrorKind::kConfiguration: return "configuration";
        case ErrorKind::kInvalidInput: return "invalid-input";
        case ErrorKind::kStaleGeometry: return "stale-geometry";
        case ErrorKind::kMissingPlaceholder: return "missing-placeholder";
        case ErrorKind::kBackend: return "backend";
        case ErrorKind::kMalformedEdit: return "malformed-edit";
        case ErrorKind::kPartialResult: return "partial-result";
        case ErrorKind::kTransform: return "transform";
        case ErrorKind::kNumeric: return "numeric";
        case ErrorKind::kExhausted: return "exhausted";
        case ErrorKind::kEmptyBatch: return "empty-batch";
        case ErrorKind::kIo: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(ErrorKind::kValidation, field + ": " + message), field_(std::move(field)) {}

namespace {
std::string join_prompts(const std::vector<std::string>& prompts) {
    std::string out = "missing placeholder image for prompt(s):";
    for (const auto& p : prompts) {
        out += " \"" + p + "\"";
    }
    return out;
}
}  // namespace

MissingPlaceholderError::MissingPlaceholderError(std::vector<std::string> prompts)
    : Error(ErrorKind::kMissingPlaceholder, join_prompts(prompts)), prompts_(std::move(prompts)) {}

PartialResultError::PartialResultError(const std::string& message,
                                       std::vector<std::string> collected)
    : Error(ErrorKind::kPartialResult, message), collected_(std::move(collected)) {}

NumericError::NumericError(const std::string& message, long step)
    : Error(ErrorKind::kNumeric, message), step_(step) {}

}  // namespace uipref
