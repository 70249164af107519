#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uipref {

enum class ErrorKind {
    kNotFound,
    kValidation,
    kIntegrity,
    kConfiguration,
    kInvalidInput,
    kStaleGeometry,
    kMissingPlaceholder,
    kBackend,
    kMalformedEdit,
    kPartialResult,
    kTransform,
    kNumeric,
    kExhausted,
    kEmptyBatch,
    kIo,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure surfaced by the library. The kind lets
/// callers (the HTTP layer in particular) map failures without RTTI chains.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Validation failure tied to one field of an incoming record.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message);

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class MissingPlaceholderError : public Error {
public:
    explicit MissingPlaceholderError(std::vector<std::string> prompts);

    const std::vector<std::string>& prompts() const noexcept { return prompts_; }

private:
    std::vector<std::string> prompts_;
};

/// Raised when a generation loop exhausts its retry budget; keeps whatever
/// was collected before the failure.
class PartialResultError : public Error {
public:
    PartialResultError(const std::string& message, std::vector<std::string> collected);

    const std::vector<std::string>& collected() const noexcept { return collected_; }

private:
    std::vector<std::string> collected_;
};

class NumericError : public Error {
public:
    NumericError(const std::string& message, long step = -1);

    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace uipref
