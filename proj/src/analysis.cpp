#include "sprec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sprec/fft.hpp"

namespace sprec {

namespace {

constexpr int kMinPaprSymbols = 10;
constexpr double kFloorDbr = -400.0;

double to_dbr(double value, double reference) {
    if (!(value > 0.0)) return kFloorDbr;
    return std::max(kFloorDbr, db10(value / reference));
}

}  // namespace

double analytic_psd_value(const Numerology& num, const SubcarrierAllocation& alloc, const Projector* p, double f,
                          const Filter* filter) {
    const CVector a = spectrum_kernel(num, alloc, f).conjugate();
    double v = (p && p->constraints() > 0) ? p->apply(a).squaredNorm() : a.squaredNorm();
    v /= num.symbol_duration() * num.fft_size;
    if (filter) v *= std::norm(frequency_response(*filter, f, num.sample_rate()));
    return v;
}

double inband_reference(const Numerology& num, const SubcarrierAllocation& alloc) {
    double sum = 0.0;
    int count = 0;
    for (int k : alloc.indices)
        for (int j = 0; j < 10; ++j) {
            const double f = (k + (j - 4.5) / 10.0) * num.subcarrier_spacing;
            sum += analytic_psd_value(num, alloc, nullptr, f);
            ++count;
        }
    return sum / count;
}

PsdCurve analytic_psd(const Numerology& num, const SubcarrierAllocation& alloc, const Projector* p,
                      const std::vector<double>& freqs, const Filter* filter) {
    for (double f : freqs)
        if (!std::isfinite(f)) throw std::invalid_argument("analytic_psd: non-finite frequency");
    const double ref = inband_reference(num, alloc);
    PsdCurve c;
    c.freqs = freqs;
    c.values_dbr.reserve(freqs.size());
    for (double f : freqs) c.values_dbr.push_back(to_dbr(analytic_psd_value(num, alloc, p, f, filter), ref));
    return c;
}

std::vector<double> psd_grid(const Numerology& num, double bandwidth_hz, int points_per_spacing) {
    const double step = num.subcarrier_spacing / points_per_spacing;
    const int half = static_cast<int>(std::ceil(1.5 * bandwidth_hz / step));
    std::vector<double> f;
    f.reserve(2 * half + 1);
    for (int i = -half; i <= half; ++i) f.push_back(i * step);
    return f;
}

PsdCurve welch_psd(const TimeSignal& sig, int nfft, double overlap_fraction, double reference) {
    if (nfft <= 1) throw std::invalid_argument("welch_psd: nfft must exceed 1");
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
        throw std::invalid_argument("welch_psd: overlap must be in [0, 1)");
    const int hop = std::max(1, static_cast<int>(std::lround(nfft * (1.0 - overlap_fraction))));
    const Eigen::Index n = sig.samples.size();
    if (n < nfft || (n - nfft) / hop + 1 < 4) throw std::invalid_argument("welch_psd: signal shorter than 4 segments");

    RVector window(nfft);
    for (int i = 0; i < nfft; ++i) window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / nfft);
    const double u = window.squaredNorm();

    RVector acc = RVector::Zero(nfft);
    int segments = 0;
    for (Eigen::Index start = 0; start + nfft <= n; start += hop) {
        const CVector seg = sig.samples.segment(start, nfft).cwiseProduct(window.cast<cd>());
        acc += fft_raw(seg).cwiseAbs2();
        ++segments;
    }
    acc /= segments * u * sig.sample_rate;

    PsdCurve c;
    c.freqs.resize(nfft);
    c.values_dbr.resize(nfft);
    for (int i = 0; i < nfft; ++i) {
        const int bin = i - nfft / 2;  // centered
        const int idx = bin >= 0 ? bin : bin + nfft;
        c.freqs[i] = bin * sig.sample_rate / nfft;
        c.values_dbr[i] = to_dbr(acc[idx], reference);
    }
    return c;
}

double value_at(const PsdCurve& c, double f) {
    if (c.freqs.empty() || f < c.freqs.front() || f > c.freqs.back())
        throw std::out_of_range("frequency outside PSD range");
    auto it = std::lower_bound(c.freqs.begin(), c.freqs.end(), f);
    const std::size_t i = static_cast<std::size_t>(it - c.freqs.begin());
    if (*it == f || i == 0) return c.values_dbr[i];
    const double t = (f - c.freqs[i - 1]) / (c.freqs[i] - c.freqs[i - 1]);
    return c.values_dbr[i - 1] + t * (c.values_dbr[i] - c.values_dbr[i - 1]);
}

OobMetrics oob_report(const PsdCurve& psd, const PsdCurve& ref, const std::vector<double>& probes,
                      const std::vector<std::pair<double, double>>& bands) {
    OobMetrics m;
    for (double f : probes) m.probe_reduction_db.push_back(value_at(ref, f) - value_at(psd, f));
    for (const auto& [lo, hi] : bands) {
        if (lo > hi) throw std::invalid_argument("oob_report: band limits reversed");
        double p_sum = 0.0, r_sum = 0.0, depth = -INFINITY;
        int count = 0;
        for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
            const double f = psd.freqs[i];
            if (f < lo || f > hi) continue;
            const double r = value_at(ref, f);
            p_sum += from_db10(psd.values_dbr[i]);
            r_sum += from_db10(r);
            depth = std::max(depth, r - psd.values_dbr[i]);
            ++count;
        }
        if (count == 0) throw std::out_of_range("oob_report: band contains no PSD samples");
        m.band_reduction_db.push_back(db10(r_sum / p_sum));
        m.notch_depth_db.push_back(depth);
    }
    return m;
}

PaprCcdf papr_ccdf(const Numerology& num, const TimeSignal& sig, int oversample, double step_db) {
    if (oversample < 4) throw std::invalid_argument("papr_ccdf: oversampling factor must be at least 4");
    if (static_cast<int>(sig.symbol_starts.size()) < kMinPaprSymbols)
        throw std::invalid_argument("papr_ccdf: too few symbols");
    const int l = num.fft_size;
    const int lo = l * oversample;
    PaprCcdf c;
    c.papr_db.reserve(sig.symbol_starts.size());
    CVector padded(lo);
    for (std::size_t start : sig.symbol_starts) {
        const std::size_t begin = start + num.cp_samples;
        if (begin + l > static_cast<std::size_t>(sig.samples.size()))
            throw std::invalid_argument("papr_ccdf: truncated signal");
        const CVector bins = fft_unitary(sig.samples.segment(static_cast<Eigen::Index>(begin), l));
        padded.setZero();
        for (int b = 0; b < l; ++b) {
            const int k = b < l / 2 ? b : b - l;
            padded[k >= 0 ? k : lo + k] = bins[b];
        }
        const RVector env = ifft_unitary(padded).cwiseAbs2();
        const double mean = env.mean();
        if (!(mean > 0.0)) throw std::invalid_argument("papr_ccdf: silent symbol");
        c.papr_db.push_back(db10(env.maxCoeff() / mean));
    }
    std::sort(c.papr_db.begin(), c.papr_db.end());
    const double top = c.papr_db.back();
    const double n = static_cast<double>(c.papr_db.size());
    for (double t = 0.0; t <= top + step_db; t += step_db) {
        const auto above = c.papr_db.end() - std::upper_bound(c.papr_db.begin(), c.papr_db.end(), t);
        c.thresholds_db.push_back(t);
        c.exceed_prob.push_back(static_cast<double>(above) / n);
    }
    return c;
}

double papr_at(const PaprCcdf& c, double prob) {
    if (c.papr_db.empty()) throw std::invalid_argument("papr_at: empty CCDF");
    if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("papr_at: probability must be in (0, 1)");
    const double n = static_cast<double>(c.papr_db.size());
    // smallest value exceeded by at most prob * n symbols
    const auto idx = static_cast<std::size_t>(std::clamp(std::ceil(n * (1.0 - prob)) - 1.0, 0.0, n - 1.0));
    return c.papr_db[idx];
}

TimeSignal synthesize(const Profile& profile, const Projector* p, const Filter* filter, Modulation m, int symbols,
                      int guard_pulses, Rng& rng) {
    if (symbols < 1) throw std::invalid_argument("synthesize: need at least one symbol");
    const int k = profile.alloc.size();
    const bool scfdma = profile.waveform == Waveform::scfdma;
    const int data = scfdma ? k - 2 * guard_pulses : k;
    if (data <= 0) throw std::invalid_argument("synthesize: guard pulses leave no data");
    const Constellation c(m);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(c.points().size()) - 1);

    ResourceGrid grid;
    grid.symbols.resize(symbols, k);
    for (int s = 0; s < symbols; ++s) {
        CVector block = CVector::Zero(k);
        for (int i = 0; i < data; ++i) block[scfdma ? guard_pulses + i : i] = c.points()[pick(rng)];
        if (scfdma) block = dft_spread(block, guard_pulses);
        if (p) block = p->apply(block);
        grid.symbols.row(s) = block.transpose();
    }
    TimeSignal sig = ofdm_modulate(profile.num, profile.alloc, grid);
    if (filter) sig = apply_filter(*filter, sig);
    return sig;
}

}  // namespace sprec
