#include "uipref/reward/scorer.hpp"

#include <cmath>

#include "uipref/common/error.hpp"

namespace uipref::reward {

namespace {

void check_inputs(const EmbeddingVector& x, const EmbeddingVector& v, const RewardHead& head) {
    if (x.size() != head.dimension() || v.size() != head.dimension()) {
        throw Error(ErrorKind::kConfiguration, "embedding dimension " + std::to_string(x.size()) + "/" +
                                                   std::to_string(v.size()) + " does not match head dimension " +
                                                   std::to_string(head.dimension()));
    }
    if (!x.allFinite() || !v.allFinite()) throw NumericError("non-finite embedding passed to the scorer");
}

}  // namespace

RewardHead RewardHead::identity(int dimension, double tau) {
    if (dimension < 1) throw ValidationError("dimension", "head dimension must be positive");
    RewardHead h;
    h.weight = Eigen::MatrixXd::Identity(dimension, dimension);
    h.tau = tau;
    h.validate();
    return h;
}

void RewardHead::validate() const {
    if (!(tau > 0) || !std::isfinite(tau)) throw ValidationError("tau", "logit scale must be positive and finite");
    if (weight.rows() != weight.cols() || weight.rows() == 0) {
        throw ValidationError("weight", "weight matrix must be square and non-empty");
    }
    if (!weight.allFinite()) throw NumericError("reward head weights are not finite");
    if (trained_steps < 0) throw ValidationError("trained_steps", "trained steps must be non-negative");
}

RewardScore score(const EmbeddingVector& image_embedding, const EmbeddingVector& v_star, const RewardHead& head) {
    check_inputs(image_embedding, v_star, head);
    const EmbeddingVector mapped = head.weight * image_embedding;
    const double a = mapped.norm();
    const double b = v_star.norm();
    if (a == 0.0 || b == 0.0) return 0.0;
    const double s = head.tau * mapped.dot(v_star) / (a * b);
    if (!std::isfinite(s)) throw NumericError("score is not finite");
    return s;
}

Eigen::MatrixXd score_gradient(const EmbeddingVector& image_embedding, const EmbeddingVector& v_star,
                               const RewardHead& head) {
    check_inputs(image_embedding, v_star, head);
    const EmbeddingVector mapped = head.weight * image_embedding;
    const double a = mapped.norm();
    const double b = v_star.norm();
    if (a == 0.0 || b == 0.0) return Eigen::MatrixXd::Zero(head.dimension(), head.dimension());
    const EmbeddingVector u = mapped / a;
    const EmbeddingVector t = v_star / b;
    const EmbeddingVector left = (head.tau / a) * (t - u * u.dot(t));
    return left * image_embedding.transpose();
}

}  // namespace uipref::reward
