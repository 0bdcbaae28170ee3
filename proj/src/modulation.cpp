#include "sprec/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sprec {

namespace {

constexpr double kMinVar = 1e-30;
constexpr double kMaxLlr = 1e6;

unsigned gray(unsigned x) { return x ^ (x >> 1); }

int bits_for(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return 2;
        case Modulation::qam16: return 4;
        case Modulation::qam64: return 6;
    }
    return 0;
}

}  // namespace

Constellation::Constellation(Modulation m) : mod_(m), bits_(bits_for(m)) {
    const int half = bits_ / 2;
    const int n_levels = 1 << half;
    // mean energy of the unscaled grid {±1, ±3, ...}: 2 (M - 1) / 3
    scale_ = 1.0 / std::sqrt(2.0 * (n_levels * n_levels - 1) / 3.0);
    levels_.resize(n_levels);
    level_labels_.resize(n_levels);
    for (int i = 0; i < n_levels; ++i) {
        levels_[i] = (2.0 * i - (n_levels - 1)) * scale_;
        level_labels_[i] = gray(static_cast<unsigned>(i));
    }
    by_label_.resize(static_cast<std::size_t>(1) << bits_);
    for (int i = 0; i < n_levels; ++i)
        for (int q = 0; q < n_levels; ++q) {
            const unsigned lab = (level_labels_[i] << half) | level_labels_[q];
            const cd p(levels_[i], levels_[q]);
            points_.push_back(p);
            labels_.push_back(lab);
            by_label_[lab] = p;
        }
}

cd Constellation::nearest(cd y) const {
    auto axis = [&](double v) {
        const int n = static_cast<int>(levels_.size());
        int i = static_cast<int>(std::lround((v / scale_ + (n - 1)) / 2.0));
        i = std::clamp(i, 0, n - 1);
        return levels_[i];
    };
    return {axis(y.real()), axis(y.imag())};
}

CVector qam_map(const Bits& bits, const Constellation& c) {
    const int b = c.bits_per_symbol();
    if (bits.size() % b != 0) throw std::invalid_argument("qam_map: bit count not a multiple of bits per symbol");
    CVector out(static_cast<Eigen::Index>(bits.size() / b));
    for (Eigen::Index s = 0; s < out.size(); ++s) {
        unsigned lab = 0;
        for (int j = 0; j < b; ++j) lab = (lab << 1) | (bits[s * b + j] & 1u);
        out[s] = c.map(lab);
    }
    return out;
}

std::vector<float> llr_demap(const CVector& symbols, const RVector& noise_vars, const Constellation& c) {
    if (noise_vars.size() != symbols.size()) throw std::invalid_argument("llr_demap: size mismatch");
    const int b = c.bits_per_symbol();
    const int half = b / 2;
    const auto& levels = c.levels();
    const auto& labs = c.level_labels();
    std::vector<float> out(static_cast<std::size_t>(symbols.size()) * b, 0.0f);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    for (Eigen::Index s = 0; s < symbols.size(); ++s) {
        if (!std::isfinite(noise_vars[s])) continue;  // erasure
        const double var = std::max(noise_vars[s], kMinVar);
        for (int axis = 0; axis < 2; ++axis) {
            const double y = axis == 0 ? symbols[s].real() : symbols[s].imag();
            for (int j = 0; j < half; ++j) {
                const unsigned mask = 1u << (half - 1 - j);
                double d0 = kInf, d1 = kInf;
                for (std::size_t i = 0; i < levels.size(); ++i) {
                    const double d = (y - levels[i]) * (y - levels[i]);
                    if (labs[i] & mask) d1 = std::min(d1, d);
                    else d0 = std::min(d0, d);
                }
                out[static_cast<std::size_t>(s) * b + axis * half + j] =
                    static_cast<float>(std::clamp((d1 - d0) / var, -kMaxLlr, kMaxLlr));
            }
        }
    }
    return out;
}

Modulation parse_modulation(std::string_view s) {
    if (s == "qpsk") return Modulation::qpsk;
    if (s == "16qam") return Modulation::qam16;
    if (s == "64qam") return Modulation::qam64;
    throw std::invalid_argument("unknown constellation '" + std::string(s) + "'");
}

std::string to_string(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return "qpsk";
        case Modulation::qam16: return "16qam";
        case Modulation::qam64: return "64qam";
    }
    return "?";
}

}  // namespace sprec
