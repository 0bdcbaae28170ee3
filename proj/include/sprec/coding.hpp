#pragma once

#include <cstdint>
#include <vector>

namespace sprec {

enum class CodeRate { half, two_thirds };

using Bits = std::vector<std::uint8_t>;

// Rate-1/2, constraint length 7 convolutional code (generators 133, 171
// octal), terminated with six zero tail bits. Rate 2/3 punctures every second
// output of the 171 generator.
Bits conv_encode(const Bits& bits, CodeRate rate);

// Coded length for `info_bits` input bits including the tail.
std::size_t coded_length(std::size_t info_bits, CodeRate rate);

// Largest info length whose codeword fits in `capacity` coded bits.
std::size_t info_length_for(std::size_t capacity, CodeRate rate);

// Max-log Viterbi decoding; LLR > 0 favours bit 0. Punctured positions are
// re-inserted with zero LLR.
Bits viterbi_decode(const std::vector<float>& llrs, CodeRate rate, std::size_t info_bits);

// Row-in, column-out block interleaver with `columns` columns; the last row
// may be partial.
class BlockInterleaver {
public:
    BlockInterleaver(std::size_t length, std::size_t columns);

    template <typename T>
    std::vector<T> interleave(const std::vector<T>& in) const {
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[order_[i]];
        return out;
    }

    template <typename T>
    std::vector<T> deinterleave(const std::vector<T>& in) const {
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[order_[i]] = in[i];
        return out;
    }

    std::size_t length() const { return order_.size(); }

private:
    std::vector<std::size_t> order_;  // output position i reads input order_[i]
};

}  // namespace sprec
