#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "uipref/common/jsonl.hpp"
#include "uipref/feedback/records.hpp"

namespace uipref::feedback {

struct InterfaceStats {
    Interface interface = Interface::kRanking;
    std::size_t count = 0;
    double total_minutes = 0;
    double per_minute = 0;    // annotations per minute of recorded time
    double mean_minutes = 0;  // minutes per annotation
    std::size_t items = 0;    // comments or sketch annotations
    std::size_t text_chars = 0;
    double mean_text_length = 0;   // code points per comment; 0 without text
    double mean_items_per_ui = 0;  // 0 for ranking and revising
};

struct StudyStats {
    std::array<InterfaceStats, 4> per_interface{};
    std::size_t total = 0;

    const InterfaceStats& operator[](Interface i) const { return per_interface[static_cast<std::size_t>(i)]; }
};

StudyStats study_stats(std::span<const AnnotationRecord> records);
Json to_json(const StudyStats& stats);

}  // namespace uipref::feedback
