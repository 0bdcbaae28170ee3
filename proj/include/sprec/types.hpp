#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace sprec {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cd = std::complex<double>;
using CVector = CVectorT<double>;
using CMatrix = CMatrixT<double>;
using RVector = RVectorT<double>;

using Rng = std::mt19937_64;

// Independent generator for (seed, stream); streams never overlap in practice
// because both words are passed through splitmix64 before seeding.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

inline constexpr double kPi = 3.14159265358979323846;

inline double db10(double linear) { return 10.0 * std::log10(linear); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sprec
