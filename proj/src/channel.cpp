#include "sprec/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "sprec/fft.hpp"

namespace sprec {

std::vector<double> TdlProfile::linear_powers() const {
    std::vector<double> p;
    double sum = 0.0;
    for (double db : tap_powers_db) {
        p.push_back(from_db10(db));
        sum += p.back();
    }
    for (double& v : p) v /= sum;
    return p;
}

TdlProfile make_tdl(std::vector<double> delays, std::vector<double> powers_db) {
    if (delays.empty() || delays.size() != powers_db.size())
        throw std::invalid_argument("tdl: delays and powers must be nonempty and equally long");
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (delays[i] < 0.0 || (i > 0 && delays[i] <= delays[i - 1]))
            throw std::invalid_argument("tdl: delays must be nonnegative and strictly increasing");
        if (!std::isfinite(powers_db[i])) throw std::invalid_argument("tdl: non-finite tap power");
    }
    return TdlProfile{std::move(delays), std::move(powers_db)};
}

TdlProfile eva_profile() {
    // 3GPP TS 36.104 Annex B.2
    return make_tdl({0e-9, 30e-9, 150e-9, 310e-9, 370e-9, 710e-9, 1090e-9, 1730e-9, 2510e-9},
                    {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9});
}

ChannelRealization realize(const TdlProfile& profile, double fs, Rng& rng) {
    if (!(fs > 0.0)) throw std::invalid_argument("realize: sample rate must be positive");
    const auto powers = profile.linear_powers();
    ChannelRealization ch;
    ch.max_delay_samples = static_cast<int>(std::lround(profile.max_delay() * fs));
    ch.cir = CVector::Zero(ch.max_delay_samples + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const double sigma = std::sqrt(powers[i] / 2.0);
        const double re = gauss(rng);
        const double im = gauss(rng);
        ch.cir[std::lround(profile.tap_delays[i] * fs)] += sigma * cd(re, im);
    }
    return ch;
}

TimeSignal apply_channel(const CVector& cir, const TimeSignal& sig) {
    if (cir.size() == 0) throw std::invalid_argument("apply_channel: empty impulse response");
    const Eigen::Index n = sig.samples.size();
    const Eigen::Index m = cir.size();
    TimeSignal out;
    out.sample_rate = sig.sample_rate;
    out.symbol_starts = sig.symbol_starts;
    out.samples = CVector::Zero(n + m - 1);
    for (Eigen::Index j = 0; j < m; ++j) {
        if (cir[j] == cd(0.0)) continue;
        out.samples.segment(j, n) += cir[j] * sig.samples;
    }
    return out;
}

TimeSignal add_awgn(const TimeSignal& sig, double snr_db, double ref_power, Rng& rng) {
    TimeSignal out = sig;
    if (std::isinf(snr_db) && snr_db > 0.0) return out;
    const double sigma = std::sqrt(ref_power / from_db10(snr_db) / 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out.samples[i] += sigma * cd(re, im);
    }
    return out;
}

CVector frequency_response(const CVector& cir, const Numerology& num, const SubcarrierAllocation& alloc, int lead) {
    const int l = num.fft_size;
    // Circular placement on the L-point grid, sample n at delay n - lead.
    CVector buf = CVector::Zero(l);
    for (Eigen::Index n = 0; n < cir.size(); ++n) {
        const int pos = ((static_cast<int>(n) - lead) % l + l) % l;
        buf[pos] += cir[n];
    }
    const CVector spectrum = fft_raw(buf);
    CVector h(alloc.size());
    for (int i = 0; i < alloc.size(); ++i) h[i] = spectrum[fft_bin(alloc.indices[i], l)];
    return h;
}

CMatrix miso_channel(const TdlProfile& profile, int n_tx, const Numerology& num, const SubcarrierAllocation& alloc,
                     Rng& rng) {
    if (n_tx <= 0) throw std::invalid_argument("miso_channel: need at least one transmit antenna");
    CMatrix h(alloc.size(), n_tx);
    for (int a = 0; a < n_tx; ++a) h.col(a) = frequency_response(realize(profile, num.sample_rate(), rng).cir, num, alloc);
    return h;
}

}  // namespace sprec
