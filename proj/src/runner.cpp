#include "sprec/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sprec/analysis.hpp"
#include "sprec/experiment.hpp"
#include "sprec/filters.hpp"
#include "sprec/scenario.hpp"

#ifndef SPREC_VERSION
#define SPREC_VERSION "0.0.0"
#endif

namespace sprec {

namespace {

constexpr double kBerTarget = 1e-3;
constexpr double kPaprTarget = 1e-3;

std::string num(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

// Collects output files so the manifest can list them.
class Outputs {
public:
    explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void write(const std::string& name, const std::string& text) {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
        files_.push_back(name);
    }

    const std::filesystem::path& dir() const { return dir_; }
    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

struct Prepared {
    Profile profile;
    Projector precoder;
    std::optional<Filter> filter;
};

Prepared prepare(const Variant& v) {
    Profile p = build_profile(v.profile);
    Projector g = make_precoder(v.precoder, p.num, p.alloc);
    auto f = filter_preset(v.filter, p.num);
    return {std::move(p), std::move(g), std::move(f)};
}

const Filter* filter_ptr(const Prepared& p) { return p.filter ? &*p.filter : nullptr; }

std::string psd_csv(const PsdCurve& c) {
    std::string s = "freq_hz,psd_dbr\n";
    for (std::size_t i = 0; i < c.freqs.size(); ++i) s += num(c.freqs[i]) + "," + num(c.values_dbr[i]) + "\n";
    return s;
}

std::string plot_header() {
    return "import csv\n"
           "import os\n"
           "import matplotlib.pyplot as plt\n\n"
           "here = os.path.dirname(os.path.abspath(__file__))\n\n\n"
           "def load(name):\n"
           "    with open(os.path.join(here, name)) as f:\n"
           "        rows = list(csv.DictReader(f))\n"
           "    return rows\n\n\n";
}

std::string py_list(const std::vector<std::string>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", '" : "'") + xs[i] + "'";
    return s + "]";
}

void run_psd(const Scenario& sc, Outputs& out, bool plot) {
    std::string probes = "variant,method,freq_hz,psd_dbr,reduction_db\n";
    std::string bands = "variant,method,band_lo_hz,band_hi_hz,reduction_db,notch_depth_db\n";
    bool any_band = false;
    std::vector<std::string> curves;
    for (std::size_t vi = 0; vi < sc.variants.size(); ++vi) {
        const Variant& v = sc.variants[vi];
        const Prepared pr = prepare(v);
        const auto& num_ = pr.profile.num;
        const auto& alloc = pr.profile.alloc;
        const Projector* g = pr.precoder.constraints() ? &pr.precoder : nullptr;
        std::vector<std::pair<double, double>> holes;
        // Each hole is reported over its full span and over its central half.
        for (std::size_t h = 0; h < pr.profile.holes.size(); ++h) {
            const auto [lo, hi] = hole_span(pr.profile, h);
            holes.emplace_back(lo, hi);
            holes.emplace_back(lo + (hi - lo) / 4, hi - (hi - lo) / 4);
        }

        std::vector<std::pair<std::string, PsdCurve>> found;
        if (sc.psd_method != PsdMethod::welch) {
            found.emplace_back("analytic",
                               analytic_psd(num_, alloc, g, psd_grid(num_, pr.profile.bandwidth_hz), filter_ptr(pr)));
        }
        if (sc.psd_method != PsdMethod::analytic) {
            Rng rng = make_rng(sc.seed, 0x9d5ULL + vi);
            const TimeSignal sig = synthesize(pr.profile, g, filter_ptr(pr), sc.signal_modulation, sc.welch_symbols,
                                              sc.guard_pulses, rng);
            found.emplace_back("welch", welch_psd(sig, 8 * num_.fft_size, 0.5, inband_reference(num_, alloc)));
        }
        for (const auto& [method, curve] : found) {
            const std::string name = "psd_" + v.id + (method == "welch" ? "_welch" : "") + ".csv";
            out.write(name, psd_csv(curve));
            curves.push_back(name);
            // Reductions are against plain OFDM of the same profile on the same grid.
            const PsdCurve plain = analytic_psd(num_, alloc, nullptr, curve.freqs);
            const OobMetrics m = oob_report(curve, plain, sc.probes, holes);
            for (std::size_t i = 0; i < sc.probes.size(); ++i)
                probes += v.id + "," + method + "," + num(sc.probes[i]) + "," + num(value_at(curve, sc.probes[i])) +
                          "," + num(m.probe_reduction_db[i]) + "\n";
            for (std::size_t i = 0; i < holes.size(); ++i) {
                bands += v.id + "," + method + "," + num(holes[i].first) + "," + num(holes[i].second) + "," +
                         num(m.band_reduction_db[i]) + "," + num(m.notch_depth_db[i]) + "\n";
                any_band = true;
            }
        }
    }
    if (any_band) out.write("bands.csv", bands);
    if (!sc.probes.empty()) out.write("probes.csv", probes);
    if (plot) {
        out.write("plot.py", plot_header() + "fig, ax = plt.subplots(figsize=(8, 5))\n"
                                             "for name in " + py_list(curves) + ":\n"
                                             "    rows = load(name)\n"
                                             "    ax.plot([float(r['freq_hz']) / 1e6 for r in rows],\n"
                                             "            [float(r['psd_dbr']) for r in rows], label=name[4:-4])\n"
                                             "ax.set_xlabel('Frequency [MHz]')\n"
                                             "ax.set_ylabel('PSD [dBr]')\n"
                                             "ax.set_ylim(-120, 10)\n"
                                             "ax.grid(True)\n"
                                             "ax.legend()\n"
                                             "fig.savefig(os.path.join(here, 'psd.png'), dpi=150)\n");
    }
}

void run_ber(const Scenario& sc, Outputs& out, int threads, bool plot) {
    std::string summary = "variant,snr_db_at_ber_1e-3\n";
    std::vector<std::string> curves;
    for (const Variant& v : sc.variants) {
        const BerCurve c = run_link(link_scenario(sc, v), threads);
        std::string s = "snr_db,ber,bits,errors,scenario_id,seed\n";
        for (std::size_t i = 0; i < c.snr_db.size(); ++i)
            s += num(c.snr_db[i]) + "," + num(c.ber[i]) + "," + std::to_string(c.bits[i]) + "," +
                 std::to_string(c.errors[i]) + "," + c.scenario_id + "," + std::to_string(c.seed) + "\n";
        const std::string name = "ber_" + v.id + ".csv";
        out.write(name, s);
        curves.push_back(name);
        summary += v.id + "," + num(snr_at_ber(c, kBerTarget)) + "\n";
    }
    out.write("ber_summary.csv", summary);
    if (plot) {
        out.write("plot.py", plot_header() + "fig, ax = plt.subplots(figsize=(7, 5))\n"
                                             "for name in " + py_list(curves) + ":\n"
                                             "    rows = [r for r in load(name) if float(r['ber']) > 0]\n"
                                             "    ax.semilogy([float(r['snr_db']) for r in rows],\n"
                                             "                [float(r['ber']) for r in rows], 'o-', label=name[4:-4])\n"
                                             "ax.set_xlabel('SNR [dB]')\n"
                                             "ax.set_ylabel('BER')\n"
                                             "ax.grid(True, which='both')\n"
                                             "ax.legend()\n"
                                             "fig.savefig(os.path.join(here, 'ber.png'), dpi=150)\n");
    }
}

void run_papr(const Scenario& sc, Outputs& out, bool plot) {
    std::string summary = "variant,papr_db_at_ccdf_1e-3\n";
    std::vector<std::string> curves;
    for (std::size_t vi = 0; vi < sc.variants.size(); ++vi) {
        const Variant& v = sc.variants[vi];
        const Prepared pr = prepare(v);
        const Projector* g = pr.precoder.constraints() ? &pr.precoder : nullptr;
        Rng rng = make_rng(sc.seed, 0x9a9ULL + vi);
        const TimeSignal sig =
            synthesize(pr.profile, g, filter_ptr(pr), sc.signal_modulation, sc.papr_symbols, sc.guard_pulses, rng);
        const PaprCcdf c = papr_ccdf(pr.profile.num, sig, sc.oversample, sc.papr_step_db);
        std::string s = "threshold_db,ccdf\n";
        for (std::size_t i = 0; i < c.thresholds_db.size(); ++i)
            s += num(c.thresholds_db[i]) + "," + num(c.exceed_prob[i]) + "\n";
        const std::string name = "papr_" + v.id + ".csv";
        out.write(name, s);
        curves.push_back(name);
        summary += v.id + "," + num(papr_at(c, kPaprTarget)) + "\n";
    }
    out.write("papr_summary.csv", summary);
    if (plot) {
        out.write("plot.py", plot_header() + "fig, ax = plt.subplots(figsize=(7, 5))\n"
                                             "for name in " + py_list(curves) + ":\n"
                                             "    rows = [r for r in load(name) if float(r['ccdf']) > 0]\n"
                                             "    ax.semilogy([float(r['threshold_db']) for r in rows],\n"
                                             "                [float(r['ccdf']) for r in rows], label=name[5:-4])\n"
                                             "ax.set_xlabel('PAPR threshold [dB]')\n"
                                             "ax.set_ylabel('CCDF')\n"
                                             "ax.set_ylim(1e-4, 1)\n"
                                             "ax.grid(True, which='both')\n"
                                             "ax.legend()\n"
                                             "fig.savefig(os.path.join(here, 'papr.png'), dpi=150)\n");
    }
}

void print_precoder_info(const Scenario& sc, std::ostream& os) {
    for (const Variant& v : sc.variants) {
        const Prepared pr = prepare(v);
        const Projector& g = pr.precoder;
        os << "variant: " << v.id << "\n";
        os << "  profile: " << v.profile << "\n";
        os << "  kind: " << (g.constraints() ? g.kind() : "none") << "\n";
        os << "  K: " << g.dimension() << "\n";
        os << "  M: " << g.constraints() << "\n";
        os << "  M_requested: " << g.requested_constraints() << "\n";
        os << "  subspace_dimension: " << g.dimension() - g.constraints() << "\n";
        os << "  rate_loss: " << num(rate_loss(g)) << "\n";
        if (g.constraints()) {
            os << "  singular_value_max: " << num(g.singular_values().maxCoeff()) << "\n";
            os << "  singular_value_min: " << num(g.singular_values().minCoeff()) << "\n";
            os << "  condition_number: " << num(g.condition_number()) << "\n";
        }
        os << "  warnings:";
        if (g.warnings().empty()) os << " none";
        os << "\n";
        for (const auto& w : g.warnings()) os << "    - " << w << "\n";
    }
}

void print_filters(const Scenario& sc, std::ostream& os) {
    for (const Variant& v : sc.variants) {
        const Prepared pr = prepare(v);
        os << "variant: " << v.id << "\n";
        os << "  filter: " << v.filter << "\n";
        if (!pr.filter) continue;
        const Filter& f = *pr.filter;
        const double fs = pr.profile.num.sample_rate();
        os << "  nominal_delay: " << nominal_delay(f) << "\n";
        os << "  energy_delay_90: " << energy_delay(f, 0.9) << "\n";
        for (double probe : {4.5e6, 5.0e6, 6.5e6})
            os << "  gain_db_at_" << num(probe) << ": " << num(20.0 * std::log10(std::abs(frequency_response(f, probe, fs))))
               << "\n";
        if (const auto* fir = std::get_if<FirFilter>(&f)) {
            os << "  taps:";
            for (double t : fir->taps) os << " " << num(t);
            os << "\n";
        } else {
            const auto& iir = std::get<IirFilter>(f);
            os << "  sections (b0 b1 b2 a1 a2):\n";
            for (const auto& s : iir.sections)
                os << "    " << num(s.b0) << " " << num(s.b1) << " " << num(s.b2) << " " << num(s.a1) << " " << num(s.a2)
                   << "\n";
        }
    }
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream o;
    o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return o.str();
}

std::string hex64(std::uint64_t x) {
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << x;
    return o.str();
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::filesystem::path output_dir(const RunOptions& opt, const std::string& scenario_id,
                                 const std::string& scenario_out) {
    if (opt.out) return *opt.out;
    if (!scenario_out.empty()) return scenario_out;
    if (const char* env = std::getenv("SPREC_OUT_DIR"); env && *env) return std::filesystem::path(env) / scenario_id;
    return std::filesystem::path("results") / scenario_id;
}

void list_scenarios(std::ostream& out) {
    const auto paths = bundled_scenarios();
    std::size_t width = 0;
    for (const auto& path : paths) width = std::max(width, path.stem().string().size());
    for (const auto& path : paths) {
        const std::string name = path.stem().string();
        out << name << std::string(width - name.size(), ' ');
        try {
            const Scenario s = load_scenario(path);
            if (!s.description.empty()) out << "  " << s.description;
        } catch (const std::exception& e) {
            out << "  (invalid: " << e.what() << ")";
        }
        out << "\n";
    }
}

int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const auto& cmd = opt.command;
    if (cmd != "psd" && cmd != "ber" && cmd != "papr" && cmd != "precoder-info" && cmd != "filter") {
        err << "error: unknown subcommand '" << cmd << "'\n";
        return kExitScenario;
    }
    if (opt.threads < 1) {
        err << "error: --threads must be >= 1\n";
        return kExitScenario;
    }
    Scenario sc;
    try {
        sc = load_scenario(resolve_scenario(opt.scenario));
        if (opt.seed) sc.seed = *opt.seed;
        if (cmd == "ber")
            for (const auto& v : sc.variants) validate(link_scenario(sc, v));
    } catch (const std::exception& e) {
        err << "scenario error: " << e.what() << "\n";
        return kExitScenario;
    }

    try {
        if (cmd == "precoder-info") {
            print_precoder_info(sc, out);
            return kExitOk;
        }
        if (cmd == "filter") {
            print_filters(sc, out);
            return kExitOk;
        }
        const auto started = std::chrono::steady_clock::now();
        const std::string stamp = utc_now();
        Outputs files(output_dir(opt, sc.id, sc.out));
        const std::string normalized = normalize(sc);
        files.write("scenario.normalized", normalized);
        if (cmd == "psd") run_psd(sc, files, opt.plot);
        else if (cmd == "ber") run_ber(sc, files, opt.threads, opt.plot);
        else run_papr(sc, files, opt.plot);

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        nlohmann::ordered_json m;
        m["command"] = cmd;
        m["scenario_id"] = sc.id;
        m["scenario_hash"] = "fnv1a64:" + hex64(fnv1a64(normalized));
        m["seed"] = sc.seed;
        m["version"] = SPREC_VERSION;
        m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                     std::to_string(EIGEN_MINOR_VERSION);
        m["threads"] = opt.threads;
        m["started_utc"] = stamp;
        m["wall_time_s"] = wall;
        m["files"] = files.files();
        std::ofstream(files.dir() / "manifest.json") << m.dump(2) << "\n";
        err << "wrote " << files.files().size() + 1 << " files to " << files.dir().string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace sprec
