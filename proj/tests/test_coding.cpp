#include <doctest.h>

#include <bit>
#include <bitset>
#include <limits>
#include <numeric>

#include "helpers.hpp"
#include "sprec/coding.hpp"
#include "sprec/modulation.hpp"

using namespace sprec;

namespace {

Bits random_bits(std::size_t n, Rng& rng) {
    Bits b(n);
    std::bernoulli_distribution coin(0.5);
    for (auto& x : b) x = coin(rng);
    return b;
}

std::vector<float> hard_llrs(const Bits& coded) {
    std::vector<float> l(coded.size());
    for (std::size_t i = 0; i < coded.size(); ++i) l[i] = coded[i] ? -1.0f : 1.0f;
    return l;
}

}  // namespace

TEST_SUITE("coding") {

TEST_CASE("encoder lengths and impulse response") {
    CHECK(coded_length(100, CodeRate::half) == 212);
    CHECK(coded_length(100, CodeRate::two_thirds) == 159);
    for (CodeRate r : {CodeRate::half, CodeRate::two_thirds}) {
        for (std::size_t cap : {200u, 1200u, 3600u}) {
            const std::size_t n = info_length_for(cap, r);
            CHECK(coded_length(n, r) <= cap);
            CHECK(coded_length(n + 1, r) > cap);
        }
    }
    // A single one produces the generator taps 133 and 171 octal.
    const Bits out = conv_encode(Bits{1}, CodeRate::half);
    REQUIRE(out.size() == 14);
    const std::bitset<7> g0(0133), g1(0171);
    for (int i = 0; i < 7; ++i) {
        CHECK(out[2 * i] == g0[6 - i]);
        CHECK(out[2 * i + 1] == g1[6 - i]);
    }
}

TEST_CASE("noiseless decoding") {
    Rng rng = make_rng(31);
    for (CodeRate r : {CodeRate::half, CodeRate::two_thirds}) {
        const Bits info = random_bits(500, rng);
        const Bits coded = conv_encode(info, r);
        CHECK(coded.size() == coded_length(500, r));
        CHECK(viterbi_decode(hard_llrs(coded), r, 500) == info);
    }
}

TEST_CASE("isolated errors are corrected") {
    Rng rng = make_rng(32);
    const Bits info = random_bits(300, rng);
    for (CodeRate r : {CodeRate::half, CodeRate::two_thirds}) {
        const Bits coded = conv_encode(info, r);
        for (std::size_t pos : {0u, 17u, 101u, 250u}) {
            auto l = hard_llrs(coded);
            l[pos] = -l[pos];
            CHECK(viterbi_decode(l, r, 300) == info);
        }
    }
    const Bits coded = conv_encode(info, CodeRate::half);
    auto l = hard_llrs(coded);
    for (std::size_t pos = 10; pos < coded.size(); pos += 40) l[pos] = -l[pos];
    CHECK(viterbi_decode(l, CodeRate::half, 300) == info);
}

TEST_CASE("interleaver") {
    BlockInterleaver il(10, 4);
    std::vector<int> in(10);
    std::iota(in.begin(), in.end(), 0);
    const auto out = il.interleave(in);
    CHECK(out == std::vector<int>{0, 4, 8, 1, 5, 9, 2, 6, 3, 7});
    CHECK(il.deinterleave(out) == in);
    BlockInterleaver big(1234, 16);
    std::vector<int> v(1234);
    std::iota(v.begin(), v.end(), 0);
    CHECK(big.deinterleave(big.interleave(v)) == v);
}

}

TEST_SUITE("modulation") {

TEST_CASE("constellations") {
    for (Modulation m : {Modulation::qpsk, Modulation::qam16, Modulation::qam64}) {
        const Constellation c(m);
        double e = 0.0;
        for (cd p : c.points()) e += std::norm(p);
        CHECK(e / c.size() == doctest::Approx(1.0));
        CHECK(c.size() == 1 << c.bits_per_symbol());
        // Gray: nearest horizontal and vertical neighbours differ in one bit.
        const double dmin = std::abs(c.levels()[1] - c.levels()[0]);
        for (int i = 0; i < c.size(); ++i) {
            for (int j = 0; j < c.size(); ++j) {
                if (std::abs(std::abs(c.points()[i] - c.points()[j]) - dmin) < 1e-9)
                    CHECK(std::popcount(c.label(i) ^ c.label(j)) == 1);
            }
            CHECK(c.map(c.label(i)) == c.points()[i]);
            CHECK(c.nearest(c.points()[i] * 1.01) == c.points()[i]);
        }
    }
    CHECK(parse_modulation("64qam") == Modulation::qam64);
    CHECK(to_string(Modulation::qam16) == "16qam");
    CHECK_THROWS(parse_modulation("8psk"));
}

TEST_CASE("map and demap round trip") {
    Rng rng = make_rng(33);
    for (Modulation m : {Modulation::qpsk, Modulation::qam16, Modulation::qam64}) {
        const Constellation c(m);
        const Bits b = random_bits(60 * c.bits_per_symbol(), rng);
        const CVector s = qam_map(b, c);
        CHECK(s.size() == 60);
        const auto l = llr_demap(s, RVector::Constant(60, 0.0), c);
        REQUIRE(l.size() == b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            CHECK(std::isfinite(l[i]));
            CHECK((l[i] < 0) == (b[i] == 1));
        }
        const auto erased = llr_demap(s, RVector::Constant(60, std::numeric_limits<double>::infinity()), c);
        for (float x : erased) CHECK(x == 0.0f);
    }
}

TEST_CASE("QPSK LLR is the exact value") {
    const Constellation c(Modulation::qpsk);
    CVector y(1);
    y[0] = cd(0.3, -0.1);
    const auto l = llr_demap(y, RVector::Constant(1, 0.5), c);
    // Max-log equals the exact LLR on a binary axis: (|y - p1|^2 - |y - p0|^2) / N0.
    const double p0 = c.level_labels()[0] == 0 ? c.levels()[0] : c.levels()[1];
    const double p1 = -p0;
    auto exact = [&](double v) { return ((v - p1) * (v - p1) - (v - p0) * (v - p0)) / 0.5; };
    CHECK(l[0] == doctest::Approx(exact(0.3)).epsilon(1e-5));
    CHECK(l[1] == doctest::Approx(exact(-0.1)).epsilon(1e-5));
}

}
