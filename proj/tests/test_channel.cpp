#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "sprec/channel.hpp"

using namespace sprec;

TEST_SUITE("channel") {

TEST_CASE("EVA profile") {
    const TdlProfile eva = eva_profile();
    CHECK(eva.tap_delays.size() == 9);
    CHECK(eva.max_delay() == doctest::Approx(2.51e-6));
    const auto p = eva.linear_powers();
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
    CHECK_THROWS(make_tdl({0.0, 1e-6}, {0.0}));
    CHECK_THROWS(make_tdl({1e-6, 0.0}, {0.0, 0.0}));
}

TEST_CASE("realizations have unit mean energy") {
    const TdlProfile eva = eva_profile();
    Rng rng = make_rng(21);
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const ChannelRealization r = realize(eva, 15.36e6, rng);
        acc += r.cir.squaredNorm();
        CHECK(r.max_delay_samples == 39);
    }
    CHECK(acc / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("AWGN power") {
    Rng rng = make_rng(22);
    TimeSignal s;
    s.samples = CVector::Zero(200000);
    s.sample_rate = 1.0;
    const TimeSignal y = add_awgn(s, 10.0, 2.0, rng);
    CHECK(y.samples.squaredNorm() / 200000.0 == doctest::Approx(0.2).epsilon(0.02));
    s.samples.setOnes();
    const TimeSignal z = add_awgn(s, kInfiniteSnr, 1.0, rng);
    CHECK((z.samples - s.samples).norm() == 0.0);
}

TEST_CASE("channel convolution and frequency response") {
    const Profile p = build_profile("lte10");
    CVector cir = CVector::Zero(3);
    cir[0] = 1.0;
    cir[2] = cd(0.0, 0.5);
    const CVector h = frequency_response(cir, p.num, p.alloc);
    for (int i = 0; i < p.alloc.size(); i += 37) {
        const int k = p.alloc.indices[i];
        const cd ref = 1.0 + cd(0.0, 0.5) * std::exp(cd(0.0, -2.0 * kPi * 2 * k / 1024.0));
        CHECK(std::abs(h[i] - ref) < 1e-12);
    }
    TimeSignal s;
    s.samples = CVector::Ones(4);
    s.sample_rate = 1.0;
    s.symbol_starts = {0};
    const TimeSignal y = apply_channel(cir, s);
    CHECK(y.samples.size() == 6);
    CHECK(std::abs(y.samples[5] - cd(0.0, 0.5)) < 1e-15);
}

TEST_CASE("MISO channel rows") {
    const Profile p = build_profile("lte10");
    Rng rng = make_rng(23);
    double acc = 0.0;
    for (int i = 0; i < 200; ++i) {
        const CMatrix h = miso_channel(eva_profile(), 8, p.num, p.alloc, rng);
        CHECK(h.rows() == 600);
        CHECK(h.cols() == 8);
        acc += h.squaredNorm() / (600.0 * 8.0);
    }
    CHECK(acc / 200 == doctest::Approx(1.0).epsilon(0.05));
}

}
