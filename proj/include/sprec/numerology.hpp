#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sprec {

// Time-frequency grid. `subcarrier_count` is the nominal system width in
// subcarriers; the active set lives in SubcarrierAllocation.
struct Numerology {
    int subcarrier_count = 0;
    double subcarrier_spacing = 0.0;  // Hz
    int fft_size = 0;                 // samples per useful period
    int cp_samples = 0;

    double sample_rate() const { return fft_size * subcarrier_spacing; }
    double useful_duration() const { return 1.0 / subcarrier_spacing; }
    double cp_duration() const { return cp_samples / sample_rate(); }
    double symbol_duration() const { return useful_duration() + cp_duration(); }
    int symbol_samples() const { return fft_size + cp_samples; }
};

// Throws std::invalid_argument unless K < L, L even and cp_seconds * fs is an
// integer within 1e-9 relative.
Numerology make_numerology(int subcarrier_count, double spacing_hz, int fft_size, double cp_seconds);

struct SubcarrierAllocation {
    std::vector<int> indices;  // centered, sorted, distinct
    bool dc_null = true;

    int size() const { return static_cast<int>(indices.size()); }
};

SubcarrierAllocation make_allocation(std::vector<int> indices, bool dc_null, int fft_size);

// Contiguous centered block of `count` subcarriers. With dc_null the block is
// split symmetrically around the unused DC bin; otherwise it spans
// [-count/2, count/2).
SubcarrierAllocation contiguous_allocation(int count, bool dc_null, int fft_size);

// FFT bin (0..L-1) for a centered index.
inline int fft_bin(int k, int fft_size) { return k >= 0 ? k : fft_size + k; }

std::vector<double> subcarrier_frequencies(const Numerology& num, const SubcarrierAllocation& alloc);

enum class Waveform { ofdm, scfdma };

struct Profile {
    std::string id;
    Numerology num;
    SubcarrierAllocation alloc;
    Waveform waveform = Waveform::ofdm;
    double bandwidth_hz = 0.0;                // documented occupied bandwidth
    std::vector<std::pair<int, int>> holes;   // unused index ranges [first, last] inside the band
};

Profile build_profile(std::string_view id);
std::vector<std::string> profile_ids();

// Frequency span [lo, hi] in Hz of a hole, measured between the centres of
// its first and last unused subcarriers.
std::pair<double, double> hole_span(const Profile& p, std::size_t hole_index);

}  // namespace sprec
