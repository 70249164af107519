#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "uipref/reward/embedding.hpp"

namespace uipref::reward {

inline constexpr double kDefaultTau = 100.0;

/// Trainable square map applied to the frozen image embedding.
struct RewardHead {
    Eigen::MatrixXd weight;
    double tau = kDefaultTau;
    std::int64_t trained_steps = 0;

    /// Identity weights: step 0 reproduces the raw backend scorer.
    static RewardHead identity(int dimension, double tau = kDefaultTau);

    int dimension() const noexcept { return static_cast<int>(weight.rows()); }
    void validate() const;

    friend bool operator==(const RewardHead& a, const RewardHead& b) {
        return a.tau == b.tau && a.trained_steps == b.trained_steps && a.weight.rows() == b.weight.rows() &&
               a.weight.cols() == b.weight.cols() && a.weight == b.weight;
    }
};

using RewardScore = double;

/// tau * <normalize(W x), normalize(v*)>.
RewardScore score(const EmbeddingVector& image_embedding, const EmbeddingVector& v_star, const RewardHead& head);

/// d score / d W = tau / |Wx| * (I - u u^T) t x^T with u = Wx/|Wx|, t = v*/|v*|.
Eigen::MatrixXd score_gradient(const EmbeddingVector& image_embedding, const EmbeddingVector& v_star,
                               const RewardHead& head);

}  // namespace uipref::reward
