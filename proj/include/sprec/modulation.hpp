#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sprec/coding.hpp"
#include "sprec/types.hpp"

namespace sprec {

enum class Modulation { qpsk, qam16, qam64 };

// Square Gray-mapped QAM with unit mean energy. The first half of each
// label selects the in-phase level, the second half the quadrature level.
class Constellation {
public:
    explicit Constellation(Modulation m);

    Modulation modulation() const { return mod_; }
    int bits_per_symbol() const { return bits_; }
    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<cd>& points() const { return points_; }
    // Label of point i (bits MSB first).
    unsigned label(int i) const { return labels_[i]; }

    cd map(unsigned label) const { return by_label_[label]; }
    cd nearest(cd y) const;

    // Per-axis PAM levels (already scaled) and their Gray labels.
    const std::vector<double>& levels() const { return levels_; }
    const std::vector<unsigned>& level_labels() const { return level_labels_; }

private:
    Modulation mod_;
    int bits_;
    double scale_;
    std::vector<cd> points_;
    std::vector<unsigned> labels_;
    std::vector<cd> by_label_;
    std::vector<double> levels_;
    std::vector<unsigned> level_labels_;
};

CVector qam_map(const Bits& bits, const Constellation& c);

// Max-log LLRs (positive favours 0); noise_vars are complex noise variances
// per symbol. An infinite variance marks an erasure (LLR 0); LLRs are clamped
// to +-1e6 so a noiseless input stays finite.
std::vector<float> llr_demap(const CVector& symbols, const RVector& noise_vars, const Constellation& c);

Modulation parse_modulation(std::string_view s);
std::string to_string(Modulation m);

}  // namespace sprec
