#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sprec/numerology.hpp"
#include "sprec/types.hpp"

namespace sprec {

// Spectrum at frequency f (Hz) of a single subcarrier k over one CP-extended
// symbol occupying t in [-T_cp, T]:
//   a_k(f) = T_o sinc(T_o (k df - f)) exp(j pi (k df - f)(T - T_cp)).
cd subcarrier_spectrum(const Numerology& num, int k, double f);

// Row vector [a_k(f)] over the active subcarriers.
CVector spectrum_kernel(const Numerology& num, const SubcarrierAllocation& alloc, double f);

// M x K constraint set whose nullspace is the precoding subspace. Rows are
// stored unit-normalized; row_scales holds the factor applied to each raw row.
struct ConstraintMatrix {
    CMatrix entries;
    std::string kind;
    std::vector<double> row_scales;
    std::vector<std::string> warnings;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
};

// Two rows per derivative order n = 0..order: the n-th derivative of the
// symbol vanishes at the start of the cyclic prefix and at the end of the
// useful part. Indices are normalized by K/2 for conditioning.
ConstraintMatrix continuity_constraints(const Numerology& num, const SubcarrierAllocation& alloc, int order);

// One row a(f_m) per notch frequency. Exactly repeated frequencies are dropped
// with a warning.
ConstraintMatrix notch_constraints(const Numerology& num, const SubcarrierAllocation& alloc,
                                   std::span<const double> notch_freqs);

ConstraintMatrix stack(std::span<const ConstraintMatrix> parts);

// Running count of complex multiplications spent in projector products.
struct OpCount {
    std::uint64_t complex_mults = 0;
};

// Orthogonal projection G = I - T A onto the nullspace of A, kept in factored
// form. T = A^H (A A^H)^-1 is obtained from a Householder QR of A^H.
class Projector {
public:
    // Identity precoder on K subcarriers (M = 0).
    static Projector identity(int dimension);

    int dimension() const { return dimension_; }
    int constraints() const { return static_cast<int>(constraint_.rows()); }
    int requested_constraints() const { return requested_; }

    const CMatrix& constraint() const { return constraint_; }
    const CMatrix& transfer() const { return transfer_; }
    const std::string& kind() const { return kind_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const RVector& singular_values() const { return singular_values_; }
    double condition_number() const;

    // (I - G) x = T (A x).
    template <typename Derived>
    CVector complement(const Eigen::MatrixBase<Derived>& x, OpCount* count = nullptr) const {
        if (x.size() != dimension_) throw std::invalid_argument("projector: length mismatch");
        if (constraints() == 0) return CVector::Zero(dimension_);
        if (count) count->complex_mults += 2ULL * constraints() * dimension_;
        return transfer_ * (constraint_ * x);
    }

    template <typename Derived>
    CVector apply(const Eigen::MatrixBase<Derived>& x, OpCount* count = nullptr) const {
        return x - complement(x, count);
    }

    // Applies G to each column.
    CMatrix apply_columns(const CMatrix& x) const;

    // Dense K x K projector; refused above K = 4096.
    CMatrix dense() const;

private:
    friend Projector build_projector(const ConstraintMatrix& a);

    int dimension_ = 0;
    int requested_ = 0;
    CMatrix constraint_;  // effective A (independent rows)
    CMatrix transfer_;    // T, K x M
    RVector singular_values_;
    std::string kind_;
    std::vector<std::string> warnings_;
};

// Rows whose singular values fall below 1e-10 of the largest are treated as
// dependent and dropped.
Projector build_projector(const ConstraintMatrix& a);

inline constexpr double kRankTolerance = 1e-10;
inline constexpr int kDenseLimit = 4096;

CVector precode(const Projector& p, const CVector& d, OpCount* count = nullptr);

struct DistortionReport {
    std::vector<double> epsilon_norms;
    double evm_rms = 0.0;
};

// Columns of `batch` are data vectors.
DistortionReport distortion(const Projector& p, const CMatrix& batch);

// Fraction of signal dimensions lost, M / K.
double rate_loss(const Projector& p);

// Declarative precoder choice used by scenarios.
struct PrecoderConfig {
    enum class Kind { none, continuity, notch, stacked };
    Kind kind = Kind::none;
    int order = 4;
    std::vector<double> notches;  // Hz
};

std::string to_string(PrecoderConfig::Kind k);
PrecoderConfig::Kind parse_precoder_kind(std::string_view s);

// Identity projector for Kind::none.
Projector make_precoder(const PrecoderConfig& cfg, const Numerology& num, const SubcarrierAllocation& alloc);

}  // namespace sprec
