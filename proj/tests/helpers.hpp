#pragma once

#include <random>

#include "sprec/types.hpp"

namespace sprec::test {

inline CVector random_vector(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cd(g(rng), g(rng));
    return v;
}

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = random_vector(rows, rng);
    return m;
}

// Continuous-time symbol s(t) = sum_k d_k exp(j 2 pi k df t) and its n-th
// derivative, evaluated directly.
inline cd symbol_derivative(const std::vector<int>& idx, const CVector& d, double df, double t, int n) {
    cd s = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double w = 2.0 * kPi * idx[i] * df;
        s += d[static_cast<Eigen::Index>(i)] * std::pow(cd(0.0, w), n) * std::exp(cd(0.0, w * t));
    }
    return s;
}

}  // namespace sprec::test
