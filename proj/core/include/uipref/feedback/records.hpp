#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uipref/common/jsonl.hpp"
#include "uipref/corpus/types.hpp"
#include "uipref/htmlkit/grounding.hpp"

namespace uipref::feedback {

enum class Interface { kRanking, kCommenting, kSketching, kRevising };

inline constexpr std::array<Interface, 4> kAllInterfaces = {Interface::kRanking, Interface::kCommenting,
                                                            Interface::kSketching, Interface::kRevising};

std::string_view to_string(Interface i);
Interface parse_interface(std::string_view text);
corpus::Provenance provenance_of(Interface i);

enum class Winner { kLeft, kRight };

struct RankingJudgment {
    std::string description_id;
    std::string left_candidate;
    std::string right_candidate;
    Winner winner = Winner::kLeft;
    std::string annotator_id;
    double elapsed_seconds = 0;

    void validate() const;
};

struct CommentSet {
    std::string candidate_id;
    std::vector<std::string> comments;
    std::string annotator_id;
    double elapsed_seconds = 0;

    void validate() const;
};

struct SketchItem {
    htmlkit::Region region;  // screenshot pixels, top-left origin
    std::string comment;
};

struct SketchSet {
    std::string candidate_id;
    std::vector<SketchItem> items;
    double scale_factor = 1.0;  // screenshot pixels per CSS pixel
    std::string annotator_id;
    double elapsed_seconds = 0;

    void validate() const;
};

struct RevisionRecord {
    std::string candidate_id;
    std::string original_sketch_ref;
    std::string revised_sketch_ref;
    std::string annotator_id;
    double elapsed_seconds = 0;

    void validate() const;
};

using RecordBody = std::variant<RankingJudgment, CommentSet, SketchSet, RevisionRecord>;

struct AnnotationRecord {
    std::string record_id;
    RecordBody body;

    Interface interface() const noexcept { return static_cast<Interface>(body.index()); }
    const std::string& annotator_id() const;
    double elapsed_seconds() const;
    void validate() const;
};

/// Line format: {"kind": "ranking"|"commenting"|"sketching"|"revising",
/// "record_id"?, "annotator_id", "elapsed_seconds", ...kind fields}. A
/// missing record_id is derived from the content. Field problems raise
/// ValidationError naming the field.
AnnotationRecord record_from_json(const Json& json);
Json to_json(const AnnotationRecord& record);

std::vector<AnnotationRecord> parse_records(const std::string& text);
std::vector<AnnotationRecord> read_records(const std::filesystem::path& path);

/// Number of UTF-8 code points.
std::size_t text_length(std::string_view utf8);

}  // namespace uipref::feedback
