#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sprec/coding.hpp"
#include "sprec/detection.hpp"
#include "sprec/modulation.hpp"
#include "sprec/precoder.hpp"

namespace sprec {

enum class ChannelKind { awgn, eva };

struct Mcs {
    Modulation modulation = Modulation::qam16;
    CodeRate rate = CodeRate::half;
};

Mcs parse_mcs(std::string_view s);  // e.g. "16qam-1/2", "64qam-2/3"
std::string to_string(const Mcs& m);
ChannelKind parse_channel(std::string_view s);
std::string to_string(ChannelKind c);

struct LinkScenario {
    std::string id = "link";
    std::string profile = "lte10";
    PrecoderConfig precoder;
    std::string filter = "none";
    ChannelKind channel = ChannelKind::eva;
    Mcs mcs;
    int n_tx = 1;
    std::vector<double> snr_db;
    std::uint64_t min_bit_errors = 200;
    std::uint64_t max_bits = 10'000'000;
    // At least this many channel realizations per SNR point.
    std::uint64_t min_trials = 100;
    // Codewords (one per OFDM symbol) per realization; one extra random
    // symbol is sent on each side so every counted symbol has neighbours.
    int codewords_per_trial = 4;
    int guard_pulses = 2;
    DetectOptions detector{.noise_aware = true};
    std::uint64_t seed = 1;
};

struct BerCurve {
    std::string scenario_id;
    std::uint64_t seed = 0;
    std::vector<double> snr_db;
    std::vector<double> ber;
    std::vector<std::uint64_t> bits;
    std::vector<std::uint64_t> errors;
    std::vector<std::uint64_t> trials;
    std::vector<double> mean_iterations;
};

// Throws std::invalid_argument for inconsistent scenarios.
void validate(const LinkScenario& sc);

BerCurve run_link(const LinkScenario& sc, int threads = 1);

struct TrialResult {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    std::uint64_t detector_iterations = 0;
    std::uint64_t detector_calls = 0;
};

// Prepared transceiver for one scenario. Immutable after construction, so
// trials may run concurrently.
class LinkSimulator {
public:
    explicit LinkSimulator(LinkScenario sc);
    ~LinkSimulator();
    LinkSimulator(const LinkSimulator&) = delete;
    LinkSimulator& operator=(const LinkSimulator&) = delete;

    // One channel realization at one SNR; deterministic in (scenario, trial).
    // Bits, channel and noise shape depend only on the trial index, so SNR
    // points and scenario variants share common random numbers.
    TrialResult run_trial(double snr_db, std::uint64_t trial) const;

    BerCurve run(int threads = 1) const;

    const LinkScenario& scenario() const { return sc_; }
    const Projector& precoder() const;

private:
    struct Impl;
    LinkScenario sc_;
    std::unique_ptr<Impl> impl_;
};

// SNR (dB) where the curve crosses `target`, by linear interpolation of
// log10(BER) between bracketing points; NaN when not bracketed.
double snr_at_ber(const BerCurve& c, double target);

}  // namespace sprec
