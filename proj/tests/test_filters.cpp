#include <doctest.h>

#include <numeric>

#include "sprec/analysis.hpp"
#include "sprec/filters.hpp"

using namespace sprec;

namespace {

double gain_db(const Filter& f, double hz, double fs) { return db10(std::norm(frequency_response(f, hz, fs))); }

double reduction_at(const Profile& p, const Filter& f, double hz) {
    return db10(analytic_psd_value(p.num, p.alloc, nullptr, hz) / analytic_psd_value(p.num, p.alloc, nullptr, hz, &f));
}

}  // namespace

TEST_SUITE("filters") {

TEST_CASE("RRC taps") {
    const FirFilter f = design_rrc(0.22, 9e6, 61, 15.36e6);
    REQUIRE(f.taps.size() == 61);
    CHECK(std::accumulate(f.taps.begin(), f.taps.end(), 0.0) == doctest::Approx(1.0));
    for (std::size_t i = 0; i < 30; ++i) CHECK(f.taps[i] == doctest::Approx(f.taps[60 - i]));
    CHECK(f.group_delay() == 30.0);
    CHECK(std::max_element(f.taps.begin(), f.taps.end()) - f.taps.begin() == 30);
    CHECK_THROWS(design_rrc(0.22, 9e6, 60, 15.36e6));
}

TEST_CASE("RRC cascade is a Nyquist pulse") {
    const int sps = 16;
    const FirFilter f = design_rrc(0.5, 1.0, 16 * sps + 1, sps);
    const auto n = static_cast<int>(f.taps.size());
    std::vector<double> c(2 * n - 1, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c[i + j] += f.taps[i] * f.taps[j];
    const int mid = n - 1;
    for (int m = 1; m <= 6; ++m) {
        CHECK(std::abs(c[mid + m * sps]) < 2e-3 * c[mid]);
        CHECK(std::abs(c[mid - m * sps]) < 2e-3 * c[mid]);
    }
    // The singular sample at t = T/(4 beta) is finite.
    const FirFilter g = design_rrc(0.25, 1.0, 33, sps);
    for (double t : g.taps) CHECK(std::isfinite(t));
}

TEST_CASE("Chebyshev-II design") {
    const double fs = 15.36e6;
    const IirFilter f = design_cheby2(8, 40.0, 5.3e6, fs);
    CHECK(f.sections.size() == 4);
    for (double r : pole_magnitudes(f)) CHECK(r < 1.0);
    CHECK(gain_db(f, 0.0, fs) == doctest::Approx(0.0).epsilon(1e-9));
    for (double hz = 5.3e6; hz < fs / 2; hz += 50e3) CHECK(gain_db(f, hz, fs) <= -40.0 + 1e-6);
    CHECK(gain_db(f, 4.5e6, fs) > -0.5);
    const RVector h = impulse_response(f, 400);
    CHECK(std::abs(h[399]) < 1e-6);
    CHECK(h.sum() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("presets suppress 8 +- 2 dB at 5 MHz") {
    const Profile p = build_profile("lte10");
    for (const char* id : {"rrc", "cheby2"}) {
        const auto f = filter_preset(id, p.num);
        REQUIRE(f.has_value());
        for (double hz : {-5e6, 5e6}) {
            const double r = reduction_at(p, *f, hz);
            CHECK(r >= 6.0);
            CHECK(r <= 10.0);
        }
    }
    CHECK_FALSE(filter_preset("none", p.num).has_value());
    CHECK_THROWS(filter_preset("elliptic", p.num));
    const auto ids = filter_preset_ids();
    CHECK(std::find(ids.begin(), ids.end(), "hybrid") != ids.end());
}

TEST_CASE("Chebyshev preset is flat in band") {
    const Profile p = build_profile("lte10");
    const Filter f = *filter_preset("cheby2", p.num);
    const double fs = p.num.sample_rate();
    for (double hz = 0.0; hz <= 4.5e6; hz += 100e3) CHECK(gain_db(f, hz, fs) > -0.5);
}

TEST_CASE("delays") {
    const Profile p = build_profile("lte10");
    const Filter rrc = *filter_preset("rrc", p.num);
    const Filter ch = *filter_preset("cheby2", p.num);
    CHECK(nominal_delay(rrc) == 30);
    CHECK(energy_delay(rrc, 0.5) == 30);
    CHECK(energy_delay(rrc, 0.9) <= 32);
    CHECK(energy_delay(ch, 0.9) <= 8);
    CHECK(energy_length(ch, 0.9999) > energy_delay(ch, 0.9));
    const Filter hy = *filter_preset("hybrid", p.num);
    CHECK(std::get<FirFilter>(hy).taps.size() == 11);
}

TEST_CASE("filtering is linear convolution") {
    const FirFilter f{{0.5, 0.25, 0.25}};
    TimeSignal s;
    s.samples = CVector::Zero(6);
    s.samples[0] = 1.0;
    s.samples[3] = cd(0.0, 2.0);
    s.sample_rate = 1.0;
    s.symbol_starts = {0, 3};
    const TimeSignal y = apply_filter(f, s);
    CHECK(std::abs(y.samples[0] - 0.5) < 1e-15);
    CHECK(std::abs(y.samples[2] - 0.25) < 1e-15);
    CHECK(std::abs(y.samples[4] - cd(0.0, 0.5)) < 1e-15);
    CHECK(y.symbol_starts[1] == 4);
}

TEST_CASE("effective channel") {
    const FirFilter f{{0.5, 0.5}};
    CVector cir(2);
    cir << 1.0, cd(0.0, 1.0);
    const CVector h = effective_channel(f, cir);
    REQUIRE(h.size() == 3);
    CHECK(std::abs(h[0] - 0.5) < 1e-15);
    CHECK(std::abs(h[1] - cd(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(h[2] - cd(0.0, 0.5)) < 1e-15);
}

}
