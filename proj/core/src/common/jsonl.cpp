#include "uipref/common/jsonl.hpp"

#include <sstream>

#include "uipref/common/error.hpp"

namespace uipref {

std::vector<Json> parse_jsonl(const std::string& text) {
    std::vector<Json> records;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw Error(ErrorKind::kValidation,
                        "line " + std::to_string(line_no) + ": malformed record: " + e.what());
        }
    }
    return records;
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
    return parse_jsonl(read_text_file(path));
}

std::string to_line(const Json& record) {
    return record.dump(-1, ' ', false, Json::error_handler_t::strict);
}

JsonlAppender::JsonlAppender(const std::filesystem::path& path, bool truncate) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app));
    if (!out_) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
}

void JsonlAppender::append(const Json& record) {
    out_ << to_line(record) << '\n';
    out_.flush();
    if (!out_) throw Error(ErrorKind::kIo, "write failed on " + path_.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::kIo, "write failed on " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace uipref
