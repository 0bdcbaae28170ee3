#include "sprec/coding.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace sprec {

namespace {

constexpr int kMemory = 6;
constexpr int kStates = 1 << kMemory;
constexpr unsigned kG0 = 0133;
constexpr unsigned kG1 = 0171;

int parity(unsigned x) { return __builtin_parity(x); }

// Output pair for shift register contents `reg` (7 bits, newest in bit 6).
struct Trellis {
    std::array<std::array<std::uint8_t, 2>, kStates> out0{}, out1{};
    Trellis() {
        for (unsigned s = 0; s < kStates; ++s) {
            for (unsigned b = 0; b < 2; ++b) {
                const unsigned reg = (b << kMemory) | s;
                auto& o = b ? out1[s] : out0[s];
                o[0] = static_cast<std::uint8_t>(parity(reg & kG0));
                o[1] = static_cast<std::uint8_t>(parity(reg & kG1));
            }
        }
    }
};

const Trellis& trellis() {
    static const Trellis t;
    return t;
}

// Puncturing over pairs of input bits: keep (A0, B0, A1), drop B1.
bool kept(std::size_t mother_index, CodeRate rate) {
    if (rate == CodeRate::half) return true;
    return mother_index % 4 != 3;
}

}  // namespace

std::size_t coded_length(std::size_t info_bits, CodeRate rate) {
    const std::size_t mother = 2 * (info_bits + kMemory);
    if (rate == CodeRate::half) return mother;
    std::size_t n = 0;
    for (std::size_t i = 0; i < mother; ++i) n += kept(i, rate);
    return n;
}

std::size_t info_length_for(std::size_t capacity, CodeRate rate) {
    std::size_t lo = 0, hi = capacity;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (coded_length(mid, rate) <= capacity) lo = mid;
        else hi = mid - 1;
    }
    if (lo == 0) throw std::invalid_argument("codeword capacity too small");
    return lo;
}

Bits conv_encode(const Bits& bits, CodeRate rate) {
    if (bits.empty()) throw std::invalid_argument("conv_encode: empty input");
    const auto& t = trellis();
    Bits out;
    out.reserve(coded_length(bits.size(), rate));
    unsigned state = 0;
    std::size_t mother = 0;
    auto push = [&](unsigned b) {
        const auto& o = b ? t.out1[state] : t.out0[state];
        for (int j = 0; j < 2; ++j, ++mother)
            if (kept(mother, rate)) out.push_back(o[j]);
        state = ((b << kMemory) | state) >> 1;
    };
    for (auto b : bits) push(b & 1u);
    for (int i = 0; i < kMemory; ++i) push(0);
    return out;
}

Bits viterbi_decode(const std::vector<float>& llrs, CodeRate rate, std::size_t info_bits) {
    const std::size_t steps = info_bits + kMemory;
    if (llrs.size() != coded_length(info_bits, rate)) throw std::invalid_argument("viterbi_decode: LLR count mismatch");

    // Depuncture.
    std::vector<float> mother(2 * steps, 0.0f);
    for (std::size_t i = 0, j = 0; i < mother.size(); ++i)
        if (kept(i, rate)) mother[i] = llrs[j++];

    const auto& t = trellis();
    constexpr float kInf = std::numeric_limits<float>::infinity();
    std::array<float, kStates> metric, next;
    metric.fill(-kInf);
    metric[0] = 0.0f;
    // decision bit per (step, next state): which predecessor won
    std::vector<std::uint64_t> decisions(steps, 0);

    for (std::size_t k = 0; k < steps; ++k) {
        const float l0 = mother[2 * k], l1 = mother[2 * k + 1];
        // correlation metric: +l/2 for bit 0, -l/2 for bit 1
        auto branch = [&](const std::array<std::uint8_t, 2>& o) {
            return (o[0] ? -l0 : l0) + (o[1] ? -l1 : l1);
        };
        std::uint64_t dec = 0;
        for (unsigned ns = 0; ns < kStates; ++ns) {
            // ns = (b << 5) | (s >> 1); predecessors s = ((ns << 1) & 63) | x
            const unsigned b = ns >> (kMemory - 1);
            const unsigned s0 = (ns << 1) & (kStates - 1);
            const unsigned s1 = s0 | 1u;
            const auto& o0 = b ? t.out1[s0] : t.out0[s0];
            const auto& o1 = b ? t.out1[s1] : t.out0[s1];
            const float m0 = metric[s0] + branch(o0);
            const float m1 = metric[s1] + branch(o1);
            if (m1 > m0) {
                next[ns] = m1;
                dec |= (1ULL << ns);
            } else {
                next[ns] = m0;
            }
        }
        metric = next;
        decisions[k] = dec;
    }

    // Terminated code ends in state 0.
    Bits out(steps);
    unsigned state = 0;
    for (std::size_t k = steps; k-- > 0;) {
        out[k] = static_cast<std::uint8_t>(state >> (kMemory - 1));
        const unsigned low = (decisions[k] >> state) & 1u;
        state = ((state << 1) & (kStates - 1)) | low;
    }
    out.resize(info_bits);
    return out;
}

BlockInterleaver::BlockInterleaver(std::size_t length, std::size_t columns) {
    if (length == 0 || columns == 0) throw std::invalid_argument("interleaver: zero size");
    const std::size_t rows = (length + columns - 1) / columns;
    order_.reserve(length);
    for (std::size_t c = 0; c < columns; ++c)
        for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t idx = r * columns + c;
            if (idx < length) order_.push_back(idx);
        }
}

}  // namespace sprec
