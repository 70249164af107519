#include "uipref/reward/loss.hpp"

#include <algorithm>

#include "uipref/common/error.hpp"

namespace uipref::reward {

double margin_loss(double s_plus, double s_minus, double m, LossSign sign) {
    if (m < 0) throw ValidationError("margin", "margin must be non-negative");
    const double gap = sign == LossSign::kCorrected ? s_minus - s_plus : s_plus - s_minus;
    return std::max(0.0, gap + m);
}

LossSubgradient margin_subgradient(double s_plus, double s_minus, double m, LossSign sign) {
    if (margin_loss(s_plus, s_minus, m, sign) <= 0.0) return {};
    return sign == LossSign::kCorrected ? LossSubgradient{-1.0, 1.0} : LossSubgradient{1.0, -1.0};
}

}  // namespace uipref::reward
