#include "uipref/feedback/stats.hpp"

namespace uipref::feedback {

StudyStats study_stats(std::span<const AnnotationRecord> records) {
    StudyStats stats;
    for (std::size_t i = 0; i < stats.per_interface.size(); ++i) stats.per_interface[i].interface = kAllInterfaces[i];
    for (const auto& r : records) {
        auto& s = stats.per_interface[static_cast<std::size_t>(r.interface())];
        ++s.count;
        s.total_minutes += r.elapsed_seconds() / 60.0;
        if (const auto* c = std::get_if<CommentSet>(&r.body)) {
            s.items += c->comments.size();
            for (const auto& text : c->comments) s.text_chars += text_length(text);
        } else if (const auto* k = std::get_if<SketchSet>(&r.body)) {
            s.items += k->items.size();
            for (const auto& item : k->items) s.text_chars += text_length(item.comment);
        }
    }
    for (auto& s : stats.per_interface) {
        stats.total += s.count;
        if (s.count == 0) continue;
        if (s.total_minutes > 0) s.per_minute = static_cast<double>(s.count) / s.total_minutes;
        s.mean_minutes = s.total_minutes / static_cast<double>(s.count);
        if (s.items > 0) {
            s.mean_text_length = static_cast<double>(s.text_chars) / static_cast<double>(s.items);
            s.mean_items_per_ui = static_cast<double>(s.items) / static_cast<double>(s.count);
        }
    }
    return stats;
}

Json to_json(const StudyStats& stats) {
    Json per = Json::object();
    for (const auto& s : stats.per_interface) {
        per[std::string(to_string(s.interface))] = {{"count", s.count},
                                                    {"per_minute", s.per_minute},
                                                    {"mean_minutes", s.mean_minutes},
                                                    {"items", s.items},
                                                    {"mean_text_length", s.mean_text_length},
                                                    {"mean_items_per_ui", s.mean_items_per_ui}};
    }
    return {{"total", stats.total}, {"interfaces", per}};
}

}  // namespace uipref::feedback
