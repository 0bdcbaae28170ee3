#include "sprec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "sprec/channel.hpp"
#include "sprec/filters.hpp"
#include "sprec/numerology.hpp"
#include "sprec/waveform.hpp"

namespace sprec {

namespace {

constexpr std::size_t kInterleaverColumns = 24;
constexpr std::uint64_t kBatch = 16;

Bits random_bits(std::size_t n, Rng& rng) {
    Bits b(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) word = rng();
        b[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return b;
}

}  // namespace

Mcs parse_mcs(std::string_view s) {
    const auto dash = s.find('-');
    if (dash == std::string_view::npos) throw std::invalid_argument("mcs must look like '16qam-1/2'");
    Mcs m;
    m.modulation = parse_modulation(s.substr(0, dash));
    const auto r = s.substr(dash + 1);
    if (r == "1/2") m.rate = CodeRate::half;
    else if (r == "2/3") m.rate = CodeRate::two_thirds;
    else throw std::invalid_argument("unknown code rate '" + std::string(r) + "'");
    return m;
}

std::string to_string(const Mcs& m) {
    return to_string(m.modulation) + (m.rate == CodeRate::half ? "-1/2" : "-2/3");
}

ChannelKind parse_channel(std::string_view s) {
    if (s == "awgn") return ChannelKind::awgn;
    if (s == "eva") return ChannelKind::eva;
    throw std::invalid_argument("unknown channel '" + std::string(s) + "'");
}

std::string to_string(ChannelKind c) { return c == ChannelKind::awgn ? "awgn" : "eva"; }

struct LinkSimulator::Impl {
    Profile profile;
    Projector precoder;
    std::optional<Filter> filter;
    Constellation constellation;
    TdlProfile tdl;
    int data_per_symbol = 0;
    std::size_t capacity = 0;
    std::size_t info_bits = 0;
    BlockInterleaver interleaver;

    Impl(const LinkScenario& sc, Profile p, Projector g, std::optional<Filter> f, int data)
        : profile(std::move(p)),
          precoder(std::move(g)),
          filter(std::move(f)),
          constellation(sc.mcs.modulation),
          tdl(eva_profile()),
          data_per_symbol(data),
          capacity(static_cast<std::size_t>(data) * constellation.bits_per_symbol()),
          info_bits(info_length_for(capacity, sc.mcs.rate)),
          interleaver(capacity, kInterleaverColumns) {}
};

void validate(const LinkScenario& sc) {
    if (sc.snr_db.empty()) throw std::invalid_argument("scenario '" + sc.id + "': empty SNR grid");
    if (sc.min_bit_errors == 0 || sc.max_bits == 0)
        throw std::invalid_argument("scenario '" + sc.id + "': termination bounds must be positive");
    if (sc.n_tx < 1) throw std::invalid_argument("scenario '" + sc.id + "': n_tx must be >= 1");
    if (sc.codewords_per_trial < 1) throw std::invalid_argument("scenario '" + sc.id + "': codewords_per_trial < 1");
    const Profile p = build_profile(sc.profile);
    (void)filter_preset(sc.filter, p.num);
    if (sc.n_tx > 1 && p.waveform == Waveform::scfdma)
        throw std::invalid_argument("scenario '" + sc.id + "': MISO is only defined for OFDM profiles");
    if (sc.n_tx > 1 && sc.filter != "none")
        throw std::invalid_argument("scenario '" + sc.id + "': MISO runs without a low-pass filter");
    if (sc.detector.max_iters < 1 || sc.detector.max_iters > 10)
        throw std::invalid_argument("scenario '" + sc.id + "': detector iterations must be in 1..10");
}

LinkSimulator::LinkSimulator(LinkScenario sc) : sc_(std::move(sc)) {
    validate(sc_);
    Profile p = build_profile(sc_.profile);
    Projector g = make_precoder(sc_.precoder, p.num, p.alloc);
    auto f = filter_preset(sc_.filter, p.num);
    const int data = p.waveform == Waveform::scfdma ? p.alloc.size() - 2 * sc_.guard_pulses : p.alloc.size();
    if (data <= 0) throw std::invalid_argument("scenario '" + sc_.id + "': guard pulses leave no data");
    impl_ = std::make_unique<Impl>(sc_, std::move(p), std::move(g), std::move(f), data);
}

LinkSimulator::~LinkSimulator() = default;

const Projector& LinkSimulator::precoder() const { return impl_->precoder; }

TrialResult LinkSimulator::run_trial(double snr_db, std::uint64_t trial) const {
    const auto& im = *impl_;
    const Numerology& num = im.profile.num;
    const SubcarrierAllocation& alloc = im.profile.alloc;
    const int k = alloc.size();
    const bool scfdma = im.profile.waveform == Waveform::scfdma;
    const bool precoded = im.precoder.constraints() > 0;
    const int g = sc_.guard_pulses;
    const Constellation& con = im.constellation;

    Rng bit_rng = make_rng(sc_.seed, 3 * trial);
    Rng chan_rng = make_rng(sc_.seed, 3 * trial + 1);
    Rng noise_rng = make_rng(sc_.seed, 3 * trial + 2);

    const int n_cw = sc_.codewords_per_trial;
    const int n_sym = n_cw + 2;
    std::vector<Bits> info(n_cw);
    CMatrix data(n_sym, im.data_per_symbol);
    for (int s = 0; s < n_sym; ++s) {
        Bits coded;
        if (s == 0 || s == n_sym - 1) {
            coded = random_bits(im.capacity, bit_rng);
        } else {
            info[s - 1] = random_bits(im.info_bits, bit_rng);
            coded = conv_encode(info[s - 1], sc_.mcs.rate);
            const Bits fill = random_bits(im.capacity - coded.size(), bit_rng);
            coded.insert(coded.end(), fill.begin(), fill.end());
            coded = im.interleaver.interleave(coded);
        }
        data.row(s) = qam_map(coded, con).transpose();
    }

    // Frequency-domain symbols before spectral precoding.
    CMatrix freq(n_sym, k);
    for (int s = 0; s < n_sym; ++s) {
        if (scfdma) {
            CVector block = CVector::Zero(k);
            block.segment(g, im.data_per_symbol) = data.row(s).transpose();
            freq.row(s) = dft_spread(block, g).transpose();
        } else {
            freq.row(s) = data.row(s);
        }
    }

    const double snr_lin = from_db10(snr_db);
    TrialResult res;
    std::vector<CVector> estimates(n_cw);
    std::vector<RVector> variances(n_cw);

    if (sc_.n_tx == 1) {
        ResourceGrid grid;
        grid.symbols = precoded ? CMatrix(im.precoder.apply_columns(freq.transpose()).transpose()) : freq;
        TimeSignal tx = ofdm_modulate(num, alloc, grid);
        if (im.filter) tx = apply_filter(*im.filter, tx);
        const double p_ref = useful_power(num, tx);
        const double noise_var = std::isinf(snr_db) ? 0.0 : p_ref / snr_lin;

        CVector cir = CVector::Ones(1);
        if (sc_.channel == ChannelKind::eva) cir = realize(im.tdl, num.sample_rate(), chan_rng).cir;
        const TimeSignal rx = add_awgn(apply_channel(cir, tx), snr_db, p_ref, noise_rng);
        const ResourceGrid y = ofdm_demodulate(num, alloc, rx);
        const CVector h = im.filter ? frequency_response(effective_channel(*im.filter, cir), num, alloc,
                                                         nominal_delay(*im.filter))
                                    : frequency_response(cir, num, alloc);

        for (int c = 0; c < n_cw; ++c) {
            const auto eq = zf_equalize(CVector(y.symbols.row(c + 1).transpose()), h);
            const RVector vars = noise_var * eq.noise_scale;
            if (scfdma) {
                const CVector r = precoded ? project_receive(im.precoder, eq.symbols) : eq.symbols;
                const CVector pulses = dft_despread(r);
                double mean_var = 0.0;
                for (Eigen::Index i = 0; i < vars.size(); ++i) mean_var += vars[i];
                mean_var /= static_cast<double>(vars.size());
                estimates[c] = pulses.segment(g, im.data_per_symbol);
                variances[c] = RVector::Constant(im.data_per_symbol, mean_var);
            } else if (precoded) {
                const auto det = iterative_detect(im.precoder, eq.symbols, vars, con, sc_.detector);
                res.detector_iterations += det.iterations;
                ++res.detector_calls;
                estimates[c] = det.estimate;
                variances[c] = det.noise_vars;
            } else {
                estimates[c] = eq.symbols;
                variances[c] = vars;
            }
        }
    } else {
        const int n_tx = sc_.n_tx;
        std::vector<CVector> cirs;
        CMatrix h(k, n_tx);
        for (int a = 0; a < n_tx; ++a) {
            CVector cir = CVector::Ones(1);
            if (sc_.channel == ChannelKind::eva) cir = realize(im.tdl, num.sample_rate(), chan_rng).cir;
            h.col(a) = frequency_response(cir, num, alloc);
            cirs.push_back(std::move(cir));
        }
        CMatrix w(k, n_tx);
        for (int i = 0; i < k; ++i) w.row(i) = mrt_precode(h.row(i).transpose()).transpose();

        std::vector<TimeSignal> tx;
        double p_ref = 0.0;
        for (int a = 0; a < n_tx; ++a) {
            ResourceGrid grid;
            const CMatrix spatial = freq.array().rowwise() * w.col(a).transpose().array();
            grid.symbols = precoded ? CMatrix(im.precoder.apply_columns(spatial.transpose()).transpose()) : spatial;
            tx.push_back(ofdm_modulate(num, alloc, grid));
            p_ref += useful_power(num, tx.back());
        }
        const double noise_var = std::isinf(snr_db) ? 0.0 : p_ref / snr_lin;
        TimeSignal rx = apply_channel(cirs[0], tx[0]);
        for (int a = 1; a < n_tx; ++a) rx.samples += apply_channel(cirs[a], tx[a]).samples;
        rx = add_awgn(rx, snr_db, p_ref, noise_rng);
        const ResourceGrid y = ofdm_demodulate(num, alloc, rx);
        for (int c = 0; c < n_cw; ++c) {
            RVector post;
            const auto det = miso_detect(im.precoder, h, w, CVector(y.symbols.row(c + 1).transpose()), noise_var, con,
                                         sc_.detector, &post);
            if (precoded) {
                res.detector_iterations += det.iterations;
                ++res.detector_calls;
            }
            estimates[c] = det.estimate;
            variances[c] = post;
        }
    }

    for (int c = 0; c < n_cw; ++c) {
        std::vector<float> llr = im.interleaver.deinterleave(llr_demap(estimates[c], variances[c], con));
        llr.resize(coded_length(im.info_bits, sc_.mcs.rate));
        const Bits decoded = viterbi_decode(llr, sc_.mcs.rate, im.info_bits);
        for (std::size_t i = 0; i < decoded.size(); ++i) res.errors += decoded[i] != info[c][i];
        res.bits += decoded.size();
    }
    return res;
}

BerCurve LinkSimulator::run(int threads) const {
    threads = std::max(1, threads);
    BerCurve curve;
    curve.scenario_id = sc_.id;
    curve.seed = sc_.seed;
    for (double snr : sc_.snr_db) {
        TrialResult total;
        std::uint64_t trials = 0;
        for (;;) {
            std::vector<TrialResult> batch(kBatch);
            if (threads == 1) {
                for (std::uint64_t i = 0; i < kBatch; ++i) batch[i] = run_trial(snr, trials + i);
            } else {
                std::vector<std::thread> pool;
                for (int t = 0; t < threads; ++t)
                    pool.emplace_back([&, t] {
                        for (std::uint64_t i = t; i < kBatch; i += threads) batch[i] = run_trial(snr, trials + i);
                    });
                for (auto& th : pool) th.join();
            }
            for (const auto& r : batch) {
                total.bits += r.bits;
                total.errors += r.errors;
                total.detector_iterations += r.detector_iterations;
                total.detector_calls += r.detector_calls;
            }
            trials += kBatch;
            if (total.bits >= sc_.max_bits) break;
            if (total.errors >= sc_.min_bit_errors && trials >= sc_.min_trials) break;
        }
        curve.snr_db.push_back(snr);
        curve.bits.push_back(total.bits);
        curve.errors.push_back(total.errors);
        curve.trials.push_back(trials);
        curve.ber.push_back(static_cast<double>(total.errors) / static_cast<double>(total.bits));
        curve.mean_iterations.push_back(total.detector_calls ? static_cast<double>(total.detector_iterations) /
                                                                   static_cast<double>(total.detector_calls)
                                                             : 0.0);
    }
    return curve;
}

BerCurve run_link(const LinkScenario& sc, int threads) { return LinkSimulator(sc).run(threads); }

double snr_at_ber(const BerCurve& c, double target) {
    for (std::size_t i = 0; i + 1 < c.ber.size(); ++i) {
        const double b0 = c.ber[i];
        double b1 = c.ber[i + 1];
        if (b0 >= target && b1 < target) {
            // zero-error points enter at one error's worth
            const double b1_floor = c.bits.size() > i + 1 && c.bits[i + 1] > 0 ? 1.0 / c.bits[i + 1] : 1e-12;
            b1 = std::max(b1, std::min(b1_floor, target * 0.999));
            const double t = (std::log10(b0) - std::log10(target)) / (std::log10(b0) - std::log10(b1));
            return c.snr_db[i] + t * (c.snr_db[i + 1] - c.snr_db[i]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace sprec
