#include "sprec/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "sprec/filters.hpp"
#include "sprec/numerology.hpp"

#ifndef SPREC_SCENARIO_DIR
#define SPREC_SCENARIO_DIR "scenarios"
#endif

namespace sprec {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(std::string_view v, bool allow_inf = false) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || ptr != end || v.empty())
        throw ScenarioError("expected a number, got '" + std::string(v) + "'");
    if (std::isnan(x) || (!allow_inf && std::isinf(x)))
        throw ScenarioError("expected a finite number, got '" + std::string(v) + "'");
    return x;
}

template <class Int>
Int parse_int(std::string_view v) {
    Int x{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || ptr != end || v.empty())
        throw ScenarioError("expected an integer, got '" + std::string(v) + "'");
    return x;
}

bool parse_bool(std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ScenarioError("expected true or false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    if (trim(v).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = v.find(',', pos);
        const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (item.empty()) throw ScenarioError("empty list element");
        out.push_back(item);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_reals(std::string_view v) {
    std::vector<double> out;
    for (auto item : split_list(v)) out.push_back(parse_real(item));
    return out;
}

// "a, b, c" or "start:step:stop" (stop included when hit within 1e-9).
std::vector<double> parse_grid(std::string_view v) {
    if (v.find(':') == std::string_view::npos) {
        std::vector<double> out;
        for (auto item : split_list(v)) out.push_back(parse_real(item, true));
        return out;
    }
    const auto c1 = v.find(':');
    const auto c2 = v.find(':', c1 + 1);
    if (c2 == std::string_view::npos || v.find(':', c2 + 1) != std::string_view::npos)
        throw ScenarioError("range must look like start:step:stop");
    const double a = parse_real(trim(v.substr(0, c1)));
    const double step = parse_real(trim(v.substr(c1 + 1, c2 - c1 - 1)));
    const double b = parse_real(trim(v.substr(c2 + 1)));
    if (!(step > 0.0) || b < a) throw ScenarioError("range needs step > 0 and stop >= start");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double x = a + i * step;
        if (x > b + 1e-9) break;
        out.push_back(std::round(x * 1e9) / 1e9);
        if (out.size() > 10000) throw ScenarioError("range has too many points");
    }
    return out;
}

std::string fmt(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt(xs[i]);
    }
    return out;
}

using VariantSetter = std::function<void(Variant&, std::string_view)>;
using ScenarioSetter = std::function<void(Scenario&, std::string_view)>;

const std::map<std::string, VariantSetter, std::less<>>& variant_keys() {
    static const std::map<std::string, VariantSetter, std::less<>> keys = {
        {"profile", [](Variant& v, std::string_view x) { v.profile = std::string(x); }},
        {"precoder", [](Variant& v, std::string_view x) { v.precoder.kind = parse_precoder_kind(x); }},
        {"order", [](Variant& v, std::string_view x) { v.precoder.order = parse_int<int>(x); }},
        {"notches", [](Variant& v, std::string_view x) { v.precoder.notches = parse_reals(x); }},
        {"filter", [](Variant& v, std::string_view x) { v.filter = std::string(x); }},
        {"channel", [](Variant& v, std::string_view x) { v.channel = parse_channel(x); }},
        {"mcs", [](Variant& v, std::string_view x) { v.mcs = parse_mcs(x); }},
        {"n_tx", [](Variant& v, std::string_view x) { v.n_tx = parse_int<int>(x); }},
        {"detector",
         [](Variant& v, std::string_view x) {
             if (x == "noise-aware") v.detector.noise_aware = true;
             else if (x == "projection") v.detector.noise_aware = false;
             else throw ScenarioError("detector must be noise-aware or projection");
         }},
        {"detector_mode", [](Variant& v, std::string_view x) { v.detector.mode = parse_soft_mode(x); }},
        {"detector_iterations", [](Variant& v, std::string_view x) { v.detector.max_iters = parse_int<int>(x); }},
        {"leverage_weighting", [](Variant& v, std::string_view x) { v.detector.leverage_weighting = parse_bool(x); }},
        {"snr", [](Variant& v, std::string_view x) { v.snr_db = parse_grid(x); }},
    };
    return keys;
}

const std::map<std::string, ScenarioSetter, std::less<>>& scenario_keys() {
    static const std::map<std::string, ScenarioSetter, std::less<>> keys = {
        {"id", [](Scenario& s, std::string_view x) { s.id = std::string(x); }},
        {"description", [](Scenario& s, std::string_view x) { s.description = std::string(x); }},
        {"seed", [](Scenario& s, std::string_view x) { s.seed = parse_int<std::uint64_t>(x); }},
        {"out", [](Scenario& s, std::string_view x) { s.out = std::string(x); }},
        {"snr", [](Scenario& s, std::string_view x) { s.snr_db = parse_grid(x); }},
        {"min_bit_errors", [](Scenario& s, std::string_view x) { s.min_bit_errors = parse_int<std::uint64_t>(x); }},
        {"max_bits", [](Scenario& s, std::string_view x) { s.max_bits = parse_int<std::uint64_t>(x); }},
        {"min_trials", [](Scenario& s, std::string_view x) { s.min_trials = parse_int<std::uint64_t>(x); }},
        {"codewords_per_trial", [](Scenario& s, std::string_view x) { s.codewords_per_trial = parse_int<int>(x); }},
        {"guard_pulses", [](Scenario& s, std::string_view x) { s.guard_pulses = parse_int<int>(x); }},
        {"psd_method", [](Scenario& s, std::string_view x) { s.psd_method = parse_psd_method(x); }},
        {"welch_symbols", [](Scenario& s, std::string_view x) { s.welch_symbols = parse_int<int>(x); }},
        {"probes", [](Scenario& s, std::string_view x) { s.probes = parse_reals(x); }},
        {"signal_modulation", [](Scenario& s, std::string_view x) { s.signal_modulation = parse_modulation(x); }},
        {"papr_symbols", [](Scenario& s, std::string_view x) { s.papr_symbols = parse_int<int>(x); }},
        {"oversample", [](Scenario& s, std::string_view x) { s.oversample = parse_int<int>(x); }},
        {"papr_step", [](Scenario& s, std::string_view x) { s.papr_step_db = parse_real(x); }},
    };
    return keys;
}

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

struct Section {
    std::string variant;  // empty for [scenario]
    int line = 0;
    std::vector<Entry> entries;
};

bool valid_id(std::string_view id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.';
    });
}

[[noreturn]] void fail(std::string_view source, int line, const std::string& msg) {
    throw ScenarioError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

void check_variant(const Variant& v, std::string_view source, int line) {
    const std::string where = "variant '" + v.id + "': ";
    Profile p;
    try {
        p = build_profile(v.profile);
    } catch (const std::exception& e) {
        fail(source, line, where + e.what());
    }
    try {
        (void)filter_preset(v.filter, p.num);
    } catch (const std::exception& e) {
        fail(source, line, where + e.what());
    }
    using K = PrecoderConfig::Kind;
    const auto kind = v.precoder.kind;
    if ((kind == K::continuity || kind == K::stacked) && (v.precoder.order < 0 || v.precoder.order > 8))
        fail(source, line, where + "continuity order must be in 0..8");
    if ((kind == K::notch || kind == K::stacked) && v.precoder.notches.empty())
        fail(source, line, where + "notch precoder needs at least one notch frequency");
    if (v.n_tx < 1 || v.n_tx > 64) fail(source, line, where + "n_tx must be in 1..64");
    if (v.detector.max_iters < 1 || v.detector.max_iters > 10)
        fail(source, line, where + "detector_iterations must be in 1..10");
}

}  // namespace

PsdMethod parse_psd_method(std::string_view s) {
    if (s == "analytic") return PsdMethod::analytic;
    if (s == "welch") return PsdMethod::welch;
    if (s == "both") return PsdMethod::both;
    throw ScenarioError("psd_method must be analytic, welch or both");
}

std::string to_string(PsdMethod m) {
    switch (m) {
        case PsdMethod::analytic: return "analytic";
        case PsdMethod::welch: return "welch";
        case PsdMethod::both: return "both";
    }
    return "analytic";
}

Scenario parse_scenario(std::istream& in, std::string_view source) {
    std::vector<Section> sections;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(source, line_no, "unterminated section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            Section sec;
            sec.line = line_no;
            if (name == "scenario") {
                if (std::any_of(sections.begin(), sections.end(), [](const Section& s) { return s.variant.empty(); }))
                    fail(source, line_no, "duplicate [scenario] section");
            } else if (name.substr(0, 8) == "variant " || name.substr(0, 8) == "variant\t") {
                sec.variant = std::string(trim(name.substr(8)));
                if (!valid_id(sec.variant)) fail(source, line_no, "variant id must match [A-Za-z0-9._-]+");
                for (const auto& s : sections)
                    if (s.variant == sec.variant) fail(source, line_no, "duplicate variant '" + sec.variant + "'");
            } else {
                fail(source, line_no, "unknown section '" + std::string(name) + "'");
            }
            sections.push_back(std::move(sec));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(source, line_no, "expected 'key = value'");
        if (sections.empty()) fail(source, line_no, "key outside of a section");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        auto& sec = sections.back();
        const bool in_scenario = sec.variant.empty();
        const bool known = variant_keys().contains(key) || (in_scenario && scenario_keys().contains(key));
        if (!known) {
            if (!in_scenario && scenario_keys().contains(key))
                fail(source, line_no, "key '" + std::string(key) + "' belongs in [scenario]");
            fail(source, line_no, "unknown key '" + std::string(key) + "'");
        }
        for (const auto& e : sec.entries)
            if (e.key == key) fail(source, line_no, "duplicate key '" + std::string(key) + "'");
        sec.entries.push_back({std::string(key), std::string(value), line_no});
    }

    const auto top = std::find_if(sections.begin(), sections.end(), [](const Section& s) { return s.variant.empty(); });
    if (top == sections.end()) fail(source, std::max(line_no, 1), "missing [scenario] section");

    Scenario sc;
    Variant defaults;
    for (const auto& e : top->entries) {
        try {
            if (const auto it = scenario_keys().find(e.key); it != scenario_keys().end()) it->second(sc, e.value);
            else variant_keys().find(e.key)->second(defaults, e.value);
        } catch (const std::exception& ex) {
            fail(source, e.line, "key '" + e.key + "': " + ex.what());
        }
    }
    if (!valid_id(sc.id)) fail(source, top->line, "[scenario] needs an id matching [A-Za-z0-9._-]+");

    std::vector<std::pair<Variant, int>> variants;
    for (const auto& sec : sections) {
        if (sec.variant.empty()) continue;
        Variant v = defaults;
        v.id = sec.variant;
        for (const auto& e : sec.entries) {
            try {
                variant_keys().find(e.key)->second(v, e.value);
            } catch (const std::exception& ex) {
                fail(source, e.line, "key '" + e.key + "': " + ex.what());
            }
        }
        variants.emplace_back(std::move(v), sec.line);
    }
    if (variants.empty()) variants.emplace_back(defaults, top->line);

    for (const auto& [v, line] : variants) {
        check_variant(v, source, line);
        sc.variants.push_back(v);
    }

    const int l = top->line;
    if (sc.min_bit_errors == 0 || sc.max_bits == 0 || sc.min_trials == 0)
        fail(source, l, "termination bounds must be positive");
    if (sc.codewords_per_trial < 1) fail(source, l, "codewords_per_trial must be >= 1");
    if (sc.guard_pulses < 0) fail(source, l, "guard_pulses must be >= 0");
    if (sc.welch_symbols < 8) fail(source, l, "welch_symbols must be >= 8");
    if (sc.papr_symbols < 10) fail(source, l, "papr_symbols must be >= 10");
    if (sc.oversample < 4) fail(source, l, "oversample must be >= 4");
    if (!(sc.papr_step_db > 0.0)) fail(source, l, "papr_step must be > 0");
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read scenario file '" + path.string() + "'");
    return parse_scenario(in, path.string());
}

std::string normalize(const Scenario& s) {
    std::ostringstream o;
    o << "[scenario]\n";
    o << "id = " << s.id << "\n";
    o << "description = " << s.description << "\n";
    o << "seed = " << s.seed << "\n";
    o << "out = " << s.out << "\n";
    o << "snr = " << fmt_list(s.snr_db) << "\n";
    o << "min_bit_errors = " << s.min_bit_errors << "\n";
    o << "max_bits = " << s.max_bits << "\n";
    o << "min_trials = " << s.min_trials << "\n";
    o << "codewords_per_trial = " << s.codewords_per_trial << "\n";
    o << "guard_pulses = " << s.guard_pulses << "\n";
    o << "psd_method = " << to_string(s.psd_method) << "\n";
    o << "welch_symbols = " << s.welch_symbols << "\n";
    o << "probes = " << fmt_list(s.probes) << "\n";
    o << "signal_modulation = " << to_string(s.signal_modulation) << "\n";
    o << "papr_symbols = " << s.papr_symbols << "\n";
    o << "oversample = " << s.oversample << "\n";
    o << "papr_step = " << fmt(s.papr_step_db) << "\n";
    for (const auto& v : s.variants) {
        o << "\n[variant " << v.id << "]\n";
        o << "profile = " << v.profile << "\n";
        o << "precoder = " << to_string(v.precoder.kind) << "\n";
        o << "order = " << v.precoder.order << "\n";
        o << "notches = " << fmt_list(v.precoder.notches) << "\n";
        o << "filter = " << v.filter << "\n";
        o << "channel = " << to_string(v.channel) << "\n";
        o << "mcs = " << to_string(v.mcs) << "\n";
        o << "n_tx = " << v.n_tx << "\n";
        o << "detector = " << (v.detector.noise_aware ? "noise-aware" : "projection") << "\n";
        o << "detector_mode = " << (v.detector.mode == SoftMode::soft ? "soft" : "hard") << "\n";
        o << "detector_iterations = " << v.detector.max_iters << "\n";
        o << "leverage_weighting = " << (v.detector.leverage_weighting ? "true" : "false") << "\n";
        o << "snr = " << fmt_list(v.snr_db) << "\n";
    }
    return o.str();
}

std::filesystem::path bundled_scenario_dir() {
    if (const char* env = std::getenv("SPREC_SCENARIO_DIR"); env && *env) return env;
    return SPREC_SCENARIO_DIR;
}

std::vector<std::filesystem::path> bundled_scenarios() {
    std::vector<std::filesystem::path> out;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(bundled_scenario_dir(), ec))
        if (e.path().extension() == ".scenario") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::filesystem::path resolve_scenario(std::string_view name_or_path) {
    const std::filesystem::path direct(name_or_path);
    if (std::filesystem::is_regular_file(direct)) return direct;
    const auto bundled = bundled_scenario_dir() / (std::string(name_or_path) + ".scenario");
    if (std::filesystem::is_regular_file(bundled)) return bundled;
    throw ScenarioError("no scenario file or bundled scenario named '" + std::string(name_or_path) + "'");
}

LinkScenario link_scenario(const Scenario& s, const Variant& v) {
    LinkScenario l;
    l.id = s.id + "/" + v.id;
    l.profile = v.profile;
    l.precoder = v.precoder;
    l.filter = v.filter;
    l.channel = v.channel;
    l.mcs = v.mcs;
    l.n_tx = v.n_tx;
    l.snr_db = v.snr_db.empty() ? s.snr_db : v.snr_db;
    l.min_bit_errors = s.min_bit_errors;
    l.max_bits = s.max_bits;
    l.min_trials = s.min_trials;
    l.codewords_per_trial = s.codewords_per_trial;
    l.guard_pulses = s.guard_pulses;
    l.detector = v.detector;
    l.seed = s.seed;
    return l;
}

}  // namespace sprec
