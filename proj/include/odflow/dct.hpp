#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace odflow {

// Orthonormal type-II discrete cosine transform. Dense is plenty for the
// horizon lengths used here (a few hundred samples).
struct TransformMatrix {
    Eigen::MatrixXd D;  // D * D^T = I

    int size() const { return static_cast<int>(D.rows()); }
};

inline TransformMatrix dct_matrix(int n) {
    if (n < 1) throw std::invalid_argument("dct_matrix: size must be >= 1");
    Eigen::MatrixXd D(n, n);
    const double base = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k) {
        const double scale = (k == 0) ? std::sqrt(1.0 / n) : base;
        for (int t = 0; t < n; ++t)
            D(k, t) = scale * std::cos(std::numbers::pi * (2 * t + 1) * k / (2.0 * n));
    }
    return {std::move(D)};
}

inline Eigen::VectorXd analyze(const TransformMatrix& tm, const Eigen::VectorXd& x) {
    if (x.size() != tm.D.rows()) throw std::invalid_argument("analyze: length mismatch");
    return tm.D * x;
}

inline Eigen::VectorXd synthesize(const TransformMatrix& tm, const Eigen::VectorXd& c) {
    if (c.size() != tm.D.rows()) throw std::invalid_argument("synthesize: length mismatch");
    return tm.D.transpose() * c;
}

}  // namespace odflow
