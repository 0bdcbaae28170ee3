#include <cmath>
#include <stdexcept>

#include "sprec/filters.hpp"

namespace sprec {

RrcPreset rrc_preset() { return {0.22, 9.0e6, 61}; }

RrcPreset hybrid_rrc_preset() {
    RrcPreset p = rrc_preset();
    // six-fold shorter impulse response, rounded to odd
    int len = static_cast<int>(std::lround(p.length / 6.0));
    if (len % 2 == 0) ++len;
    p.length = len;
    return p;
}

Cheby2Preset cheby2_preset() { return {8, 40.0, 5.30e6}; }

std::vector<std::string> filter_preset_ids() { return {"none", "rrc", "cheby2", "hybrid"}; }

std::optional<Filter> filter_preset(std::string_view id, const Numerology& num) {
    if (id == "none") return std::nullopt;
    if (id != "rrc" && id != "cheby2" && id != "hybrid")
        throw std::invalid_argument("unknown filter preset '" + std::string(id) + "'");
    if (num.fft_size != 1024 || num.subcarrier_spacing != 15e3)
        throw std::invalid_argument("filter preset '" + std::string(id) +
                                    "' is calibrated for the 15 kHz / 1024-point grid only");
    const double fs = num.sample_rate();
    if (id == "cheby2") {
        const auto c = cheby2_preset();
        return design_cheby2(c.order, c.stopband_atten_db, c.stopband_edge_hz, fs);
    }
    const auto r = id == "rrc" ? rrc_preset() : hybrid_rrc_preset();
    return design_rrc(r.rolloff, r.rate_hz, r.length, fs);
}

}  // namespace sprec
