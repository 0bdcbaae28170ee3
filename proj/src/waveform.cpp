#include "sprec/waveform.hpp"

#include <stdexcept>

#include "sprec/fft.hpp"

namespace sprec {

TimeSignal ofdm_modulate(const Numerology& num, const SubcarrierAllocation& alloc, const ResourceGrid& grid) {
    if (grid.symbols.cols() != alloc.size() && grid.symbol_count() > 0)
        throw std::invalid_argument("ofdm_modulate: grid width does not match allocation");
    const int l = num.fft_size;
    const int cp = num.cp_samples;
    const int ns = num.symbol_samples();

    TimeSignal sig;
    sig.sample_rate = num.sample_rate();
    sig.samples.resize(static_cast<Eigen::Index>(grid.symbol_count()) * ns);
    CVector bins(l);
    for (int s = 0; s < grid.symbol_count(); ++s) {
        bins.setZero();
        for (int i = 0; i < alloc.size(); ++i) bins[fft_bin(alloc.indices[i], l)] = grid.symbols(s, i);
        const CVector useful = ifft_unitary(bins);
        const Eigen::Index start = static_cast<Eigen::Index>(s) * ns;
        sig.samples.segment(start, cp) = useful.tail(cp);
        sig.samples.segment(start + cp, l) = useful;
        sig.symbol_starts.push_back(static_cast<std::size_t>(start));
    }
    return sig;
}

ResourceGrid ofdm_demodulate(const Numerology& num, const SubcarrierAllocation& alloc, const TimeSignal& sig) {
    const int l = num.fft_size;
    ResourceGrid grid;
    grid.symbols.resize(static_cast<Eigen::Index>(sig.symbol_starts.size()), alloc.size());
    for (std::size_t s = 0; s < sig.symbol_starts.size(); ++s) {
        const std::size_t begin = sig.symbol_starts[s] + num.cp_samples;
        if (begin + l > static_cast<std::size_t>(sig.samples.size()))
            throw std::invalid_argument("ofdm_demodulate: truncated signal");
        const CVector bins = fft_unitary(sig.samples.segment(static_cast<Eigen::Index>(begin), l));
        for (int i = 0; i < alloc.size(); ++i)
            grid.symbols(static_cast<Eigen::Index>(s), i) = bins[fft_bin(alloc.indices[i], l)];
    }
    return grid;
}

double useful_power(const Numerology& num, const TimeSignal& sig) {
    double energy = 0.0;
    std::size_t count = 0;
    for (std::size_t start : sig.symbol_starts) {
        const std::size_t begin = start + num.cp_samples;
        if (begin + num.fft_size > static_cast<std::size_t>(sig.samples.size())) continue;
        energy += sig.samples.segment(static_cast<Eigen::Index>(begin), num.fft_size).squaredNorm();
        count += num.fft_size;
    }
    return count ? energy / count : 0.0;
}

CVector dft_spread(const CVector& block, int guard_pulses) {
    const Eigen::Index q = block.size();
    if (guard_pulses < 0 || 2 * guard_pulses >= q)
        throw std::invalid_argument("dft_spread: 2g must be smaller than the block length");
    CVector pulses = block;
    pulses.head(guard_pulses).setZero();
    pulses.tail(guard_pulses).setZero();
    return fft_unitary(pulses);
}

CVector dft_despread(const CVector& spread) { return ifft_unitary(spread); }

}  // namespace sprec
