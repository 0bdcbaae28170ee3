#include "sprec/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sprec {

namespace {

double rrc_sample(double t, double beta) {
    // t in symbol periods
    if (std::abs(t) < 1e-12) return 1.0 - beta + 4.0 * beta / kPi;
    if (std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-9) {
        const double a = kPi / (4.0 * beta);
        return beta / std::sqrt(2.0) * ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
    }
    const double num = std::sin(kPi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
    const double den = kPi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
    return num / den;
}

cd biquad_response(const Biquad& s, cd z1) {
    const cd z2 = z1 * z1;
    return (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
}

// Group delay at DC of a real polynomial in z^-1.
double dc_group_delay(double c0, double c1, double c2) { return (c1 + 2.0 * c2) / (c0 + c1 + c2); }

std::vector<double> iir_impulse(const IirFilter& f, int n) {
    std::vector<double> x(n, 0.0);
    if (n > 0) x[0] = 1.0;
    for (const auto& s : f.sections) {
        double w1 = 0.0, w2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w0 = x[i] - s.a1 * w1 - s.a2 * w2;
            x[i] = s.b0 * w0 + s.b1 * w1 + s.b2 * w2;
            w2 = w1;
            w1 = w0;
        }
    }
    return x;
}

// Impulse response long enough that the neglected tail is below 1e-14 of
// the energy.
std::vector<double> full_impulse(const Filter& f) {
    if (const auto* fir = std::get_if<FirFilter>(&f)) return fir->taps;
    const auto& iir = std::get<IirFilter>(f);
    int n = 256;
    for (;;) {
        std::vector<double> h = iir_impulse(iir, n);
        double total = 0.0, tail = 0.0;
        for (int i = 0; i < n; ++i) {
            total += h[i] * h[i];
            if (i >= n / 2) tail += h[i] * h[i];
        }
        if (tail <= 1e-14 * total || n >= (1 << 20)) {
            int len = n;
            double acc = 0.0;
            for (int i = n - 1; i >= 0; --i) {
                acc += h[i] * h[i];
                if (acc > 1e-16 * total) break;
                len = i;
            }
            h.resize(std::max(len, 1));
            return h;
        }
        n *= 2;
    }
}

}  // namespace

FirFilter design_rrc(double rolloff, double rate_hz, int length, double fs) {
    if (!(rolloff > 0.0 && rolloff <= 1.0)) throw std::invalid_argument("design_rrc: rolloff must be in (0, 1]");
    if (!(rate_hz > 0.0) || !(fs > 0.0)) throw std::invalid_argument("design_rrc: rate and fs must be positive");
    if (length <= 0 || length % 2 == 0) throw std::invalid_argument("design_rrc: length must be odd");
    FirFilter f;
    f.taps.resize(length);
    const int center = length / 2;
    double sum = 0.0;
    for (int n = 0; n < length; ++n) {
        f.taps[n] = rrc_sample((n - center) * rate_hz / fs, rolloff);
        sum += f.taps[n];
    }
    for (double& t : f.taps) t /= sum;
    // exact symmetry
    for (int n = 0; n < center; ++n) f.taps[length - 1 - n] = f.taps[n];
    return f;
}

IirFilter design_cheby2(int order, double stopband_atten_db, double stopband_edge_hz, double fs) {
    if (order <= 0 || order % 2 != 0) throw std::invalid_argument("design_cheby2: order must be even and positive");
    if (!(stopband_atten_db > 0.0)) throw std::invalid_argument("design_cheby2: attenuation must be positive");
    if (!(stopband_edge_hz > 0.0 && stopband_edge_hz < fs / 2.0))
        throw std::invalid_argument("design_cheby2: stopband edge must lie in (0, fs/2)");

    // Analog prototype with stopband edge at 1 rad/s.
    const double eps = 1.0 / std::sqrt(std::pow(10.0, stopband_atten_db / 10.0) - 1.0);
    const double mu = std::asinh(1.0 / eps) / order;
    const double warped = 2.0 * fs * std::tan(kPi * stopband_edge_hz / fs);

    std::vector<cd> poles, zeros;  // upper half-plane members of each conjugate pair
    for (int k = 1; k <= order / 2; ++k) {
        const double theta = (2.0 * k - 1.0) * kPi / (2.0 * order);
        const cd cheb1(-std::sinh(mu) * std::sin(theta), std::cosh(mu) * std::cos(theta));
        const cd p = warped / cheb1;
        const cd z(0.0, warped / std::cos(theta));
        auto bilinear = [fs](cd s) { return (2.0 * fs + s) / (2.0 * fs - s); };
        poles.push_back(bilinear(p));
        zeros.push_back(bilinear(z));
    }

    // Pair each pole with the nearest remaining zero, starting from the pole
    // closest to the unit circle.
    std::sort(poles.begin(), poles.end(), [](cd a, cd b) { return std::abs(a) > std::abs(b); });
    IirFilter f;
    for (const cd& p : poles) {
        auto it = std::min_element(zeros.begin(), zeros.end(),
                                   [&](cd a, cd b) { return std::abs(a - p) < std::abs(b - p); });
        const cd z = *it;
        zeros.erase(it);
        Biquad s;
        s.b0 = 1.0;
        s.b1 = -2.0 * z.real();
        s.b2 = std::norm(z);
        s.a1 = -2.0 * p.real();
        s.a2 = std::norm(p);
        const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
        s.b0 /= dc;
        s.b1 /= dc;
        s.b2 /= dc;
        f.sections.push_back(s);
    }
    for (double m : pole_magnitudes(f))
        if (!(m <= 1.0 - 1e-6)) throw std::logic_error("design_cheby2: unstable design");

    double delay = 0.0;
    for (const auto& s : f.sections)
        delay += dc_group_delay(s.b0, s.b1, s.b2) - dc_group_delay(1.0, s.a1, s.a2);
    f.nominal_delay = static_cast<int>(std::lround(delay));
    return f;
}

std::vector<double> pole_magnitudes(const IirFilter& f) {
    std::vector<double> out;
    for (const auto& s : f.sections) {
        const cd disc = std::sqrt(cd(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
        out.push_back(std::abs((-s.a1 + disc) / 2.0));
        out.push_back(std::abs((-s.a1 - disc) / 2.0));
    }
    return out;
}

cd frequency_response(const Filter& f, double freq_hz, double fs) {
    const cd z1 = std::polar(1.0, -2.0 * kPi * freq_hz / fs);
    if (const auto* fir = std::get_if<FirFilter>(&f)) {
        cd acc = 0.0, zn = 1.0;
        for (double t : fir->taps) {
            acc += t * zn;
            zn *= z1;
        }
        return acc;
    }
    cd acc = 1.0;
    for (const auto& s : std::get<IirFilter>(f).sections) acc *= biquad_response(s, z1);
    return acc;
}

RVector impulse_response(const Filter& f, int n) {
    RVector h = RVector::Zero(n);
    if (const auto* fir = std::get_if<FirFilter>(&f)) {
        for (int i = 0; i < n && i < static_cast<int>(fir->taps.size()); ++i) h[i] = fir->taps[i];
        return h;
    }
    const auto v = iir_impulse(std::get<IirFilter>(f), n);
    for (int i = 0; i < n; ++i) h[i] = v[i];
    return h;
}

int nominal_delay(const Filter& f) {
    if (const auto* fir = std::get_if<FirFilter>(&f)) return static_cast<int>(fir->taps.size() / 2);
    return std::get<IirFilter>(f).nominal_delay;
}

int energy_delay(const Filter& f, double fraction) {
    const auto h = full_impulse(f);
    double total = 0.0;
    for (double v : h) total += v * v;
    double acc = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        acc += h[i] * h[i];
        if (acc >= fraction * total) return static_cast<int>(i);
    }
    return static_cast<int>(h.size()) - 1;
}

int energy_length(const Filter& f, double fraction) { return energy_delay(f, fraction) + 1; }

TimeSignal apply_filter(const Filter& f, const TimeSignal& sig) {
    const auto h = full_impulse(f);
    const Eigen::Index n = sig.samples.size();
    const Eigen::Index tail = static_cast<Eigen::Index>(h.size()) - 1;
    TimeSignal out;
    out.sample_rate = sig.sample_rate;
    out.samples = CVector::Zero(n + tail);

    if (const auto* fir = std::get_if<FirFilter>(&f)) {
        const auto& taps = fir->taps;
        for (Eigen::Index i = 0; i < n; ++i) {
            const cd x = sig.samples[i];
            for (std::size_t j = 0; j < taps.size(); ++j) out.samples[i + static_cast<Eigen::Index>(j)] += taps[j] * x;
        }
    } else {
        out.samples.head(n) = sig.samples;
        for (const auto& s : std::get<IirFilter>(f).sections) {
            cd w1 = 0.0, w2 = 0.0;
            for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
                const cd w0 = out.samples[i] - s.a1 * w1 - s.a2 * w2;
                out.samples[i] = s.b0 * w0 + s.b1 * w1 + s.b2 * w2;
                w2 = w1;
                w1 = w0;
            }
        }
    }
    const std::size_t delay = static_cast<std::size_t>(nominal_delay(f));
    for (std::size_t start : sig.symbol_starts) out.symbol_starts.push_back(start + delay);
    return out;
}

CVector effective_channel(const Filter& f, const CVector& physical_cir, double energy_keep) {
    if (!(energy_keep > 0.9 && energy_keep <= 1.0))
        throw std::invalid_argument("effective_channel: energy_keep must lie in (0.9, 1]");
    auto h = full_impulse(f);
    if (std::holds_alternative<IirFilter>(f)) h.resize(energy_length(f, energy_keep));
    const Eigen::Index m = physical_cir.size();
    const Eigen::Index nh = static_cast<Eigen::Index>(h.size());
    CVector out = CVector::Zero(nh + m - 1);
    for (Eigen::Index i = 0; i < nh; ++i)
        for (Eigen::Index j = 0; j < m; ++j) out[i + j] += h[i] * physical_cir[j];
    return out;
}

}  // namespace sprec
