#include <doctest.h>

#include <cmath>

#include "sprec/channel.hpp"
#include "sprec/experiment.hpp"

using namespace sprec;

namespace {

LinkScenario small_scenario() {
    LinkScenario sc;
    sc.id = "small";
    sc.profile = "lte10-shortcp";
    sc.precoder.kind = PrecoderConfig::Kind::continuity;
    sc.precoder.order = 2;
    sc.mcs = parse_mcs("16qam-1/2");
    sc.snr_db = {8.0, 14.0};
    sc.min_bit_errors = 1;
    sc.max_bits = 1;
    sc.min_trials = 3;
    sc.codewords_per_trial = 2;
    sc.seed = 77;
    return sc;
}

}  // namespace

TEST_SUITE("link") {

TEST_CASE("parsing") {
    const Mcs m = parse_mcs("64qam-2/3");
    CHECK(m.modulation == Modulation::qam64);
    CHECK(m.rate == CodeRate::two_thirds);
    CHECK(to_string(m) == "64qam-2/3");
    CHECK_THROWS(parse_mcs("64qam"));
    CHECK_THROWS(parse_mcs("64qam-3/4"));
    CHECK(parse_channel("awgn") == ChannelKind::awgn);
    CHECK(to_string(ChannelKind::eva) == "eva");
    CHECK_THROWS(parse_channel("rayleigh"));
}

TEST_CASE("validation") {
    CHECK_NOTHROW(validate(small_scenario()));
    LinkScenario sc = small_scenario();
    sc.snr_db.clear();
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = small_scenario();
    sc.n_tx = 0;
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = small_scenario();
    sc.n_tx = 4;
    sc.filter = "rrc";
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = small_scenario();
    sc.detector.max_iters = 0;
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
}

TEST_CASE("trials are deterministic") {
    const LinkSimulator sim(small_scenario());
    const TrialResult a = sim.run_trial(10.0, 5);
    const TrialResult b = sim.run_trial(10.0, 5);
    CHECK(a.bits == b.bits);
    CHECK(a.errors == b.errors);
    CHECK(a.bits > 0);
    CHECK(sim.precoder().constraints() == 6);
    CHECK(sim.run_trial(kInfiniteSnr, 1).errors == 0);
}

TEST_CASE("curves have one point per SNR and repeat exactly") {
    const BerCurve a = run_link(small_scenario());
    const BerCurve b = run_link(small_scenario(), 2);
    CHECK(a.snr_db.size() == 2);
    CHECK(a.ber.size() == 2);
    CHECK(a.trials[0] >= 3);
    CHECK(a.trials == b.trials);
    CHECK(a.errors == b.errors);
    CHECK(a.bits == b.bits);
    CHECK(a.ber[1] <= a.ber[0]);
    CHECK(a.seed == 77);
    CHECK(a.scenario_id == "small");
}

TEST_CASE("noiseless AWGN link is error free") {
    LinkScenario sc = small_scenario();
    sc.channel = ChannelKind::awgn;
    sc.snr_db = {kInfiniteSnr};
    sc.filter = "cheby2";
    sc.profile = "lte10";
    const BerCurve c = run_link(sc);
    CHECK(c.errors[0] == 0);
}

TEST_CASE("BER interpolation") {
    BerCurve c;
    c.snr_db = {0.0, 1.0, 2.0};
    c.ber = {1e-1, 1e-2, 1e-4};
    c.bits = {1000, 1000, 100000};
    CHECK(snr_at_ber(c, 1e-3) == doctest::Approx(1.5));
    CHECK(snr_at_ber(c, 1e-2) == doctest::Approx(1.0));
    CHECK(std::isnan(snr_at_ber(c, 1e-6)));
    c.ber[2] = 0.0;
    // One error's worth of the last point: 1e-5.
    CHECK(snr_at_ber(c, 1e-3) == doctest::Approx(1.0 + 1.0 / 3.0));
}

}
