#pragma once

#include <limits>
#include <vector>

#include "sprec/numerology.hpp"
#include "sprec/types.hpp"
#include "sprec/waveform.hpp"

namespace sprec {

struct TdlProfile {
    std::vector<double> tap_delays;     // seconds, strictly increasing
    std::vector<double> tap_powers_db;

    // Linear powers normalized to unit sum.
    std::vector<double> linear_powers() const;
    double max_delay() const { return tap_delays.empty() ? 0.0 : tap_delays.back(); }
};

TdlProfile make_tdl(std::vector<double> delays, std::vector<double> powers_db);

// LTE Extended Vehicular A: 9 taps, 2.51 us excess delay.
TdlProfile eva_profile();

struct ChannelRealization {
    CVector cir;  // at the simulation sample rate
    int max_delay_samples = 0;
};

// Quasi-static draw: taps CN(0, p_i) at the nearest sample to their delay.
ChannelRealization realize(const TdlProfile& profile, double fs, Rng& rng);

// Full linear convolution; symbol_starts are kept.
TimeSignal apply_channel(const CVector& cir, const TimeSignal& sig);

// Adds CN(0, ref_power / 10^(snr_db/10)) per sample. An infinite SNR leaves
// the signal untouched.
TimeSignal add_awgn(const TimeSignal& sig, double snr_db, double ref_power, Rng& rng);

// Channel frequency response at the active bins of an L-point grid. Taps at
// negative delay are given by `lead` samples at the start of `cir`.
CVector frequency_response(const CVector& cir, const Numerology& num, const SubcarrierAllocation& alloc, int lead = 0);

// K x n_tx matrix; row k is the MISO row h_k.
CMatrix miso_channel(const TdlProfile& profile, int n_tx, const Numerology& num, const SubcarrierAllocation& alloc,
                     Rng& rng);

inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

}  // namespace sprec
