#pragma once

#include <cstddef>
#include <vector>

#include "sprec/numerology.hpp"
#include "sprec/types.hpp"

namespace sprec {

// S x K: one row per OFDM symbol, columns in allocation order.
struct ResourceGrid {
    CMatrix symbols;

    int symbol_count() const { return static_cast<int>(symbols.rows()); }
};

struct TimeSignal {
    CVector samples;
    double sample_rate = 0.0;
    std::vector<std::size_t> symbol_starts;  // CP start of each symbol
};

// Unitary IFFT per symbol with cyclic prefix.
TimeSignal ofdm_modulate(const Numerology& num, const SubcarrierAllocation& alloc, const ResourceGrid& grid);

// Drops the CP at each symbol start and returns the active bins.
ResourceGrid ofdm_demodulate(const Numerology& num, const SubcarrierAllocation& alloc, const TimeSignal& sig);

// Mean power of the useful (non-CP) samples.
double useful_power(const Numerology& num, const TimeSignal& sig);

// SC-FDMA spreading: zero `guard_pulses` pulses at both ends of the block,
// then a unitary forward DFT.
CVector dft_spread(const CVector& block, int guard_pulses);
CVector dft_despread(const CVector& spread);

}  // namespace sprec
