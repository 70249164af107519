#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace uipref {

using Json = nlohmann::json;

/// Parses one self-contained JSON record per non-blank line.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
std::vector<Json> parse_jsonl(const std::string& text);

/// Compact single-line serialization (no trailing newline).
std::string to_line(const Json& record);

/// Appends records to a line-delimited file, flushing after every record so
/// that an acknowledged write is on disk.
class JsonlAppender {
public:
    explicit JsonlAppender(const std::filesystem::path& path, bool truncate = false);

    void append(const Json& record);
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace uipref
