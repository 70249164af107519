#include "uipref/arena/agreement.hpp"

#include <cmath>

#include "uipref/common/error.hpp"

namespace uipref::arena {

double round_percent(std::size_t agreeing, std::size_t total) {
    // Integer arithmetic: round(1000 * a / n) / 10 with halves rounded up.
    const auto tenths = (2000 * agreeing + total) / (2 * total);
    return static_cast<double>(tenths) / 10.0;
}

AgreementReport agreement(std::span<const AgreementRecord> records) {
    AgreementReport report;
    for (const auto& r : records) {
        auto& cell = report.strata[static_cast<std::size_t>(r.stratum)];
        const bool agrees = r.choice == RaterChoice::kChosen;
        cell.total += 1;
        cell.agreeing += agrees;
        report.overall.total += 1;
        report.overall.agreeing += agrees;
    }
    auto finish = [](AgreementCell& c) {
        if (c.total > 0) c.percent = round_percent(c.agreeing, c.total);
    };
    finish(report.overall);
    for (auto& c : report.strata) finish(c);
    return report;
}

Json to_json(const AgreementReport& report) {
    auto cell = [](const AgreementCell& c) {
        Json j{{"agreeing", c.agreeing}, {"total", c.total}};
        j["percent"] = c.percent ? Json(*c.percent) : Json(nullptr);
        return j;
    };
    Json strata = Json::object();
    for (auto i : feedback::kAllInterfaces) {
        const auto& c = report[i];
        if (c.total > 0) strata[std::string(feedback::to_string(i))] = cell(c);
    }
    return {{"overall", cell(report.overall)}, {"strata", strata}};
}

AgreementRecord agreement_record_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("record", "agreement record must be an object");
    if (!j.contains("pair_ref") || !j["pair_ref"].is_string()) throw ValidationError("pair_ref", "pair_ref is required");
    if (!j.contains("stratum") || !j["stratum"].is_string()) throw ValidationError("stratum", "stratum is required");
    if (!j.contains("choice") || !j["choice"].is_string()) throw ValidationError("choice", "choice is required");
    AgreementRecord r{j["pair_ref"].get<std::string>(), feedback::parse_interface(j["stratum"].get<std::string>()),
                      RaterChoice::kChosen};
    const auto choice = j["choice"].get<std::string>();
    if (choice == "rejected") {
        r.choice = RaterChoice::kRejected;
    } else if (choice != "chosen") {
        throw ValidationError("choice", "choice must be chosen or rejected");
    }
    return r;
}

Json to_json(const AgreementRecord& r) {
    return {{"pair_ref", r.pair_ref},
            {"stratum", feedback::to_string(r.stratum)},
            {"choice", r.choice == RaterChoice::kChosen ? "chosen" : "rejected"}};
}

}  // namespace uipref::arena
