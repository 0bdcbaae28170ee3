#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sprec/numerology.hpp"
#include "sprec/types.hpp"
#include "sprec/waveform.hpp"

namespace sprec {

struct FirFilter {
    std::vector<double> taps;

    double group_delay() const { return (static_cast<double>(taps.size()) - 1.0) / 2.0; }
};

// Direct-form section b0 + b1 z^-1 + b2 z^-2 over 1 + a1 z^-1 + a2 z^-2.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

struct IirFilter {
    std::vector<Biquad> sections;
    int nominal_delay = 0;
};

using Filter = std::variant<FirFilter, IirFilter>;

// Root-raised-cosine taps sampled at fs for a pulse of rate `rate_hz`,
// truncated to `length` (odd) taps and scaled to unit DC gain.
FirFilter design_rrc(double rolloff, double rate_hz, int length, double fs);

// Digital Chebyshev type-II low-pass (bilinear transform of the analog
// prototype) with equiripple stopband from `stopband_edge_hz` on.
IirFilter design_cheby2(int order, double stopband_atten_db, double stopband_edge_hz, double fs);

std::complex<double> frequency_response(const Filter& f, double freq_hz, double fs);

// First n samples of the impulse response.
RVector impulse_response(const Filter& f, int n);

int nominal_delay(const Filter& f);

// Pole magnitudes of every IIR section (empty for FIR).
std::vector<double> pole_magnitudes(const IirFilter& f);

// Number of impulse-response samples needed to hold `fraction` of the energy.
int energy_length(const Filter& f, double fraction);

// Index at which the cumulative impulse energy first reaches `fraction`.
int energy_delay(const Filter& f, double fraction);

// Linear filtering of the whole signal; symbol_starts advance by the
// nominal delay so demodulation aligns with the filtered symbols.
TimeSignal apply_filter(const Filter& f, const TimeSignal& sig);

// Filter impulse response (IIR truncated at energy_keep) convolved with the
// physical channel.
CVector effective_channel(const Filter& f, const CVector& physical_cir, double energy_keep = 0.9999);

// Calibrated baselines for the 15 kHz / 1024-point LTE grid:
//   "rrc"    RRC, rolloff 0.22
//   "cheby2" 8th-order Chebyshev-II with matched suppression at 5 MHz
//   "hybrid" the RRC shortened six-fold
// Returns nullopt for "none".
std::optional<Filter> filter_preset(std::string_view id, const Numerology& num);
std::vector<std::string> filter_preset_ids();

struct RrcPreset {
    double rolloff;
    double rate_hz;
    int length;
};
struct Cheby2Preset {
    int order;
    double stopband_atten_db;
    double stopband_edge_hz;
};
RrcPreset rrc_preset();
RrcPreset hybrid_rrc_preset();
Cheby2Preset cheby2_preset();

}  // namespace sprec
