#pragma once

namespace uipref::reward {

/// kCorrected penalizes rejected >= chosen - m, i.e. max(0, s- - s+ + m).
/// kAsPrinted keeps the published sign, max(0, s+ - s- + m), for replication runs.
enum class LossSign { kCorrected, kAsPrinted };

inline constexpr double kDefaultMargin = 1e-2;

double margin_loss(double s_plus, double s_minus, double m, LossSign sign = LossSign::kCorrected);

struct LossSubgradient {
    double d_plus = 0;
    double d_minus = 0;
};

/// (-1, +1) when the corrected loss is active, (0, 0) otherwise; negated
/// for the printed sign.
LossSubgradient margin_subgradient(double s_plus, double s_minus, double m, LossSign sign = LossSign::kCorrected);

}  // namespace uipref::reward
