#include "uipref/feedback/records.hpp"

#include <cmath>

#include "uipref/common/error.hpp"
#include "uipref/common/hash.hpp"

namespace uipref::feedback {

namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

void require_id(std::string_view value, const char* field) {
    if (blank(value)) throw ValidationError(field, std::string(field) + " is required");
}

void require_elapsed(double elapsed) {
    if (!std::isfinite(elapsed) || elapsed < 0) {
        throw ValidationError("elapsed_seconds", "elapsed time must be a finite non-negative number");
    }
}

template <class T>
T field(const Json& j, const char* name) {
    if (!j.contains(name)) throw ValidationError(name, std::string("missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const Json::exception&) {
        throw ValidationError(name, std::string("field '") + name + "' has the wrong type");
    }
}

template <class T>
T field_or(const Json& j, const char* name, T fallback) {
    return j.contains(name) ? field<T>(j, name) : fallback;
}

Json region_to_json(const htmlkit::Region& r) {
    if (r.kind == htmlkit::Region::Kind::kBox) {
        return {{"kind", "box"}, {"x", r.box.x}, {"y", r.box.y}, {"w", r.box.w}, {"h", r.box.h}};
    }
    return {{"kind", "point"}, {"x", r.x}, {"y", r.y}};
}

htmlkit::Region region_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("region", "region must be an object");
    const auto kind = field<std::string>(j, "kind");
    if (kind == "box") {
        return htmlkit::Region::make_box(field<double>(j, "x"), field<double>(j, "y"), field<double>(j, "w"),
                                         field<double>(j, "h"));
    }
    if (kind == "point") return htmlkit::Region::make_point(field<double>(j, "x"), field<double>(j, "y"));
    throw ValidationError("region.kind", "region kind must be box or point");
}

}  // namespace

std::string_view to_string(Interface i) {
    switch (i) {
        case Interface::kRanking: return "ranking";
        case Interface::kCommenting: return "commenting";
        case Interface::kSketching: return "sketching";
        case Interface::kRevising: return "revising";
    }
    return "unknown";
}

Interface parse_interface(std::string_view text) {
    for (auto i : kAllInterfaces) {
        if (to_string(i) == text) return i;
    }
    throw ValidationError("kind", "unknown interface '" + std::string(text) + "'");
}

corpus::Provenance provenance_of(Interface i) {
    switch (i) {
        case Interface::kRanking: return corpus::Provenance::kRanking;
        case Interface::kCommenting: return corpus::Provenance::kCommenting;
        case Interface::kSketching: return corpus::Provenance::kSketching;
        case Interface::kRevising: return corpus::Provenance::kRevising;
    }
    return corpus::Provenance::kRanking;
}

void RankingJudgment::validate() const {
    require_id(description_id, "description_id");
    require_id(left_candidate, "left_candidate");
    require_id(right_candidate, "right_candidate");
    require_id(annotator_id, "annotator_id");
    if (left_candidate == right_candidate) {
        throw ValidationError("right_candidate", "left and right candidates must differ");
    }
    require_elapsed(elapsed_seconds);
}

void CommentSet::validate() const {
    require_id(candidate_id, "candidate_id");
    require_id(annotator_id, "annotator_id");
    if (comments.empty()) throw ValidationError("comments", "at least one comment is required");
    for (std::size_t i = 0; i < comments.size(); ++i) {
        if (blank(comments[i])) {
            throw ValidationError("comments[" + std::to_string(i) + "]", "comment is empty");
        }
    }
    require_elapsed(elapsed_seconds);
}

void SketchSet::validate() const {
    require_id(candidate_id, "candidate_id");
    require_id(annotator_id, "annotator_id");
    if (items.empty()) throw ValidationError("items", "at least one annotation is required");
    if (!std::isfinite(scale_factor) || !(scale_factor > 0)) {
        throw ValidationError("scale_factor", "scale factor must be positive");
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto name = "items[" + std::to_string(i) + "]";
        if (blank(items[i].comment)) throw ValidationError(name + ".comment", "comment is empty");
        try {
            items[i].region.validate();
        } catch (const ValidationError& e) {
            throw ValidationError(name + ".region", e.what());
        }
    }
    require_elapsed(elapsed_seconds);
}

void RevisionRecord::validate() const {
    require_id(candidate_id, "candidate_id");
    require_id(original_sketch_ref, "original_sketch_ref");
    require_id(revised_sketch_ref, "revised_sketch_ref");
    require_id(annotator_id, "annotator_id");
    if (original_sketch_ref == revised_sketch_ref) {
        throw ValidationError("revised_sketch_ref", "revised document is identical to the original");
    }
    require_elapsed(elapsed_seconds);
}

const std::string& AnnotationRecord::annotator_id() const {
    return std::visit([](const auto& r) -> const std::string& { return r.annotator_id; }, body);
}

double AnnotationRecord::elapsed_seconds() const {
    return std::visit([](const auto& r) { return r.elapsed_seconds; }, body);
}

void AnnotationRecord::validate() const {
    std::visit([](const auto& r) { r.validate(); }, body);
}

Json to_json(const AnnotationRecord& record) {
    Json j{{"kind", to_string(record.interface())},
           {"record_id", record.record_id},
           {"annotator_id", record.annotator_id()},
           {"elapsed_seconds", record.elapsed_seconds()}};
    if (const auto* r = std::get_if<RankingJudgment>(&record.body)) {
        j["description_id"] = r->description_id;
        j["left_candidate"] = r->left_candidate;
        j["right_candidate"] = r->right_candidate;
        j["winner"] = r->winner == Winner::kLeft ? "left" : "right";
    } else if (const auto* c = std::get_if<CommentSet>(&record.body)) {
        j["candidate_id"] = c->candidate_id;
        j["comments"] = c->comments;
    } else if (const auto* s = std::get_if<SketchSet>(&record.body)) {
        j["candidate_id"] = s->candidate_id;
        j["scale_factor"] = s->scale_factor;
        Json items = Json::array();
        for (const auto& item : s->items) items.push_back({{"region", region_to_json(item.region)}, {"comment", item.comment}});
        j["items"] = items;
    } else if (const auto* v = std::get_if<RevisionRecord>(&record.body)) {
        j["candidate_id"] = v->candidate_id;
        j["original_sketch_ref"] = v->original_sketch_ref;
        j["revised_sketch_ref"] = v->revised_sketch_ref;
    }
    return j;
}

AnnotationRecord record_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("record", "annotation record must be a JSON object");
    AnnotationRecord record;
    const auto kind = parse_interface(field<std::string>(j, "kind"));
    const auto annotator = field<std::string>(j, "annotator_id");
    const auto elapsed = field_or<double>(j, "elapsed_seconds", 0.0);
    switch (kind) {
        case Interface::kRanking: {
            RankingJudgment r{field<std::string>(j, "description_id"), field<std::string>(j, "left_candidate"),
                              field<std::string>(j, "right_candidate"), Winner::kLeft, annotator, elapsed};
            const auto winner = field<std::string>(j, "winner");
            if (winner == "right") {
                r.winner = Winner::kRight;
            } else if (winner != "left") {
                throw ValidationError("winner", "winner must be left or right");
            }
            record.body = r;
            break;
        }
        case Interface::kCommenting:
            record.body = CommentSet{field<std::string>(j, "candidate_id"),
                                     field<std::vector<std::string>>(j, "comments"), annotator, elapsed};
            break;
        case Interface::kSketching: {
            SketchSet s{field<std::string>(j, "candidate_id"), {}, field_or<double>(j, "scale_factor", 1.0),
                        annotator, elapsed};
            const auto items = field<Json>(j, "items");
            if (!items.is_array()) throw ValidationError("items", "items must be an array");
            for (std::size_t i = 0; i < items.size(); ++i) {
                const auto name = "items[" + std::to_string(i) + "]";
                if (!items[i].is_object() || !items[i].contains("region")) {
                    throw ValidationError(name + ".region", "item lacks a region");
                }
                SketchItem item;
                try {
                    item.region = region_from_json(items[i]["region"]);
                    item.comment = field<std::string>(items[i], "comment");
                } catch (const ValidationError& e) {
                    throw ValidationError(name + "." + e.field(), e.what());
                }
                s.items.push_back(std::move(item));
            }
            record.body = std::move(s);
            break;
        }
        case Interface::kRevising:
            record.body = RevisionRecord{field<std::string>(j, "candidate_id"),
                                         field<std::string>(j, "original_sketch_ref"),
                                         field<std::string>(j, "revised_sketch_ref"), annotator, elapsed};
            break;
    }
    record.validate();
    if (j.contains("record_id")) {
        record.record_id = field<std::string>(j, "record_id");
        require_id(record.record_id, "record_id");
    } else {
        auto canonical = to_json(record);
        canonical.erase("record_id");
        record.record_id = "rec-" + sha256_hex(canonical.dump()).substr(0, 16);
    }
    return record;
}

std::vector<AnnotationRecord> parse_records(const std::string& text) {
    std::vector<AnnotationRecord> out;
    const auto lines = parse_jsonl(text);
    out.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(record_from_json(lines[i]));
        } catch (const ValidationError& e) {
            throw ValidationError(e.field(), "record " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

std::vector<AnnotationRecord> read_records(const std::filesystem::path& path) {
    return parse_records(read_text_file(path));
}

std::size_t text_length(std::string_view utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8) n += (c & 0xC0) != 0x80;
    return n;
}

}  // namespace uipref::feedback
