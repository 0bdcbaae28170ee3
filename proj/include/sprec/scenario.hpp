#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sprec/experiment.hpp"
#include "sprec/modulation.hpp"
#include "sprec/precoder.hpp"

namespace sprec {

// Malformed or inconsistent scenario file; the message carries the source
// name and line number when one is known.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One transmitter/receiver configuration inside a scenario.
struct Variant {
    std::string id = "main";
    std::string profile = "lte10";
    PrecoderConfig precoder;
    std::string filter = "none";
    ChannelKind channel = ChannelKind::eva;
    Mcs mcs;
    int n_tx = 1;
    DetectOptions detector{.noise_aware = true};
    std::vector<double> snr_db;  // empty: the scenario grid
};

enum class PsdMethod { analytic, welch, both };

struct Scenario {
    std::string id;
    std::string description;
    std::uint64_t seed = 1;
    std::string out;  // empty: default output root / id

    // ber
    std::vector<double> snr_db;
    std::uint64_t min_bit_errors = 200;
    std::uint64_t max_bits = 10'000'000;
    std::uint64_t min_trials = 100;
    int codewords_per_trial = 4;
    int guard_pulses = 2;

    // psd
    PsdMethod psd_method = PsdMethod::analytic;
    int welch_symbols = 1000;
    std::vector<double> probes;  // Hz, reported per variant

    // psd (welch) and papr
    Modulation signal_modulation = Modulation::qpsk;
    int papr_symbols = 10000;
    int oversample = 4;
    double papr_step_db = 0.05;

    std::vector<Variant> variants;
};

// File format: '#' starts a comment; `[scenario]` holds run-wide keys and
// variant defaults; each `[variant <id>]` section overrides variant keys.
// Without variant sections a single variant "main" is formed.
Scenario parse_scenario(std::istream& in, std::string_view source = "<input>");
Scenario load_scenario(const std::filesystem::path& path);

// Canonical text: every key spelled out, variants fully expanded.
std::string normalize(const Scenario& s);

// Resolve a bundled scenario name ("fig4") or a path.
std::filesystem::path resolve_scenario(std::string_view name_or_path);
std::filesystem::path bundled_scenario_dir();
std::vector<std::filesystem::path> bundled_scenarios();

PsdMethod parse_psd_method(std::string_view s);
std::string to_string(PsdMethod m);

LinkScenario link_scenario(const Scenario& s, const Variant& v);

}  // namespace sprec
