#include "sprec/numerology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sprec {

namespace {

constexpr double kLteSpacing = 15e3;
constexpr int kLteFft = 1024;
constexpr double kLteCp = 4.6875e-6;
constexpr double kEvaMaxDelay = 2.51e-6;

std::vector<int> range_indices(int first, int last) {
    std::vector<int> out;
    for (int k = first; k <= last; ++k) out.push_back(k);
    return out;
}

Profile lte10(bool dc_null) {
    Profile p;
    p.num = make_numerology(600, kLteSpacing, kLteFft, kLteCp);
    p.alloc = contiguous_allocation(600, dc_null, kLteFft);
    p.bandwidth_hz = 9e6;
    return p;
}

Profile lte10_short(bool dc_null) {
    Profile p = lte10(dc_null);
    // Shortest integer CP covering the EVA excess delay on this sample grid.
    const double fs = p.num.sample_rate();
    const int cp = static_cast<int>(std::ceil(kEvaMaxDelay * fs));
    p.num = make_numerology(600, kLteSpacing, kLteFft, cp / fs);
    return p;
}

Profile fragmented450(bool dc_null) {
    Profile p;
    p.num = make_numerology(600, kLteSpacing, kLteFft, kLteCp);
    // 300 + 150 active with a 150-subcarrier hole in the upper half.
    std::vector<int> idx = range_indices(-300, dc_null ? -1 : 0);
    if (!dc_null) idx.pop_back();
    for (int k = 151; k <= 300; ++k) idx.push_back(k);
    p.alloc = make_allocation(idx, dc_null, kLteFft);
    p.bandwidth_hz = 9e6;
    p.holes = {{1, 150}};
    return p;
}

Profile proto300(bool dc_null) {
    Profile p;
    // LTE 5 MHz scaled down by three: 5 kHz spacing, 1.5 MHz occupied.
    p.num = make_numerology(300, 5e3, 512, 3.0 * kLteCp);
    std::vector<int> idx;
    for (int k = -150; k <= 150; ++k) {
        if (k == 0 && dc_null) continue;
        if (k == 150 && !dc_null) continue;
        if (k >= 26 && k <= 100) continue;
        idx.push_back(k);
    }
    p.alloc = make_allocation(idx, dc_null, 512);
    p.bandwidth_hz = 1.5e6;
    p.holes = {{26, 100}};
    return p;
}

}  // namespace

Numerology make_numerology(int subcarrier_count, double spacing_hz, int fft_size, double cp_seconds) {
    if (subcarrier_count <= 0) throw std::invalid_argument("numerology: subcarrier count must be positive");
    if (spacing_hz <= 0.0) throw std::invalid_argument("numerology: subcarrier spacing must be positive");
    if (fft_size % 2 != 0) throw std::invalid_argument("numerology: FFT size must be even");
    if (subcarrier_count >= fft_size) throw std::invalid_argument("numerology: K must be smaller than the FFT size");
    if (cp_seconds < 0.0) throw std::invalid_argument("numerology: negative cyclic prefix");
    const double cp = cp_seconds * fft_size * spacing_hz;
    const double rounded = std::round(cp);
    if (std::abs(cp - rounded) > 1e-9 * std::max(1.0, cp))
        throw std::invalid_argument("numerology: cyclic prefix is not an integer number of samples");
    Numerology n;
    n.subcarrier_count = subcarrier_count;
    n.subcarrier_spacing = spacing_hz;
    n.fft_size = fft_size;
    n.cp_samples = static_cast<int>(rounded);
    return n;
}

SubcarrierAllocation make_allocation(std::vector<int> indices, bool dc_null, int fft_size) {
    if (indices.empty()) throw std::invalid_argument("allocation: empty index set");
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw std::invalid_argument("allocation: duplicate subcarrier index");
    if (indices.front() < -fft_size / 2 + 1 || indices.back() > fft_size / 2 - 1)
        throw std::invalid_argument("allocation: index outside FFT range");
    if (dc_null && std::binary_search(indices.begin(), indices.end(), 0))
        throw std::invalid_argument("allocation: DC subcarrier used with dc_null set");
    return SubcarrierAllocation{std::move(indices), dc_null};
}

SubcarrierAllocation contiguous_allocation(int count, bool dc_null, int fft_size) {
    std::vector<int> idx;
    if (dc_null) {
        for (int k = -(count / 2); k <= count - count / 2; ++k)
            if (k != 0) idx.push_back(k);
    } else {
        for (int k = -(count / 2); k < count - count / 2; ++k) idx.push_back(k);
    }
    return make_allocation(std::move(idx), dc_null, fft_size);
}

std::vector<double> subcarrier_frequencies(const Numerology& num, const SubcarrierAllocation& alloc) {
    std::vector<double> out;
    out.reserve(alloc.indices.size());
    for (int k : alloc.indices) {
        if (k < -num.fft_size / 2 + 1 || k > num.fft_size / 2 - 1)
            throw std::out_of_range("subcarrier index outside FFT range");
        out.push_back(k * num.subcarrier_spacing);
    }
    return out;
}

Profile build_profile(std::string_view id) {
    std::string_view base = id;
    bool scfdma = false;
    constexpr std::string_view suffix = "-scfdma";
    if (base.size() > suffix.size() && base.substr(base.size() - suffix.size()) == suffix) {
        base = base.substr(0, base.size() - suffix.size());
        scfdma = true;
    }
    // SC-FDMA maps onto consecutive subcarriers, so DC is not skipped.
    const bool dc_null = !scfdma;
    Profile p;
    if (base == "lte10") p = lte10(dc_null);
    else if (base == "lte10-shortcp") p = lte10_short(dc_null);
    else if (base == "fragmented450") p = fragmented450(dc_null);
    else if (base == "proto300") p = proto300(dc_null);
    else throw std::invalid_argument("unknown profile id '" + std::string(id) + "'");
    p.id = std::string(id);
    p.waveform = scfdma ? Waveform::scfdma : Waveform::ofdm;
    return p;
}

std::vector<std::string> profile_ids() {
    std::vector<std::string> out;
    for (const char* base : {"lte10", "lte10-shortcp", "fragmented450", "proto300"}) {
        out.emplace_back(base);
        out.push_back(std::string(base) + "-scfdma");
    }
    return out;
}

std::pair<double, double> hole_span(const Profile& p, std::size_t hole_index) {
    if (hole_index >= p.holes.size()) throw std::out_of_range("hole index");
    const auto [first, last] = p.holes[hole_index];
    return {first * p.num.subcarrier_spacing, last * p.num.subcarrier_spacing};
}

}  // namespace sprec
