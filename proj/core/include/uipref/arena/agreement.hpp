#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "uipref/common/jsonl.hpp"
#include "uipref/feedback/records.hpp"

namespace uipref::arena {

enum class RaterChoice { kChosen, kRejected };

/// A second rater's pick on one preference pair.
struct AgreementRecord {
    std::string pair_ref;
    feedback::Interface stratum = feedback::Interface::kRanking;
    RaterChoice choice = RaterChoice::kChosen;
};

struct AgreementCell {
    std::size_t agreeing = 0;
    std::size_t total = 0;
    /// Rounded to one decimal; absent for an empty stratum.
    std::optional<double> percent;
};

struct AgreementReport {
    AgreementCell overall;
    std::array<AgreementCell, 4> strata{};

    const AgreementCell& operator[](feedback::Interface i) const { return strata[static_cast<std::size_t>(i)]; }
};

/// Percent rounded half away from zero to 0.1.
double round_percent(std::size_t agreeing, std::size_t total);

AgreementReport agreement(std::span<const AgreementRecord> records);

Json to_json(const AgreementReport& report);
AgreementRecord agreement_record_from_json(const Json& j);
Json to_json(const AgreementRecord& r);

}  // namespace uipref::arena
