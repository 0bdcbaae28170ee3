#include "sprec/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sprec {

namespace {

constexpr double kMinVar = 1e-12;
constexpr double kAnneal = 0.9;

double axis_mean(double y, double var, const std::vector<double>& levels) {
    double best = std::numeric_limits<double>::infinity();
    for (double l : levels) best = std::min(best, (y - l) * (y - l));
    double num = 0.0, den = 0.0;
    for (double l : levels) {
        const double w = std::exp(-((y - l) * (y - l) - best) / var);
        num += w * l;
        den += w;
    }
    return num / den;
}

// Posterior mean and variance along one axis.
std::pair<double, double> axis_moments(double y, double var, const std::vector<double>& levels) {
    double best = std::numeric_limits<double>::infinity();
    for (double l : levels) best = std::min(best, (y - l) * (y - l));
    double num = 0.0, sq = 0.0, den = 0.0;
    for (double l : levels) {
        const double w = std::exp(-((y - l) * (y - l) - best) / var);
        num += w * l;
        sq += w * l * l;
        den += w;
    }
    const double m = num / den;
    return {m, std::max(sq / den - m * m, 0.0)};
}

// Soft symbols with their posterior variance; erased bins fall back to the prior.
CVector soft_estimate(const CVector& y, const RVector& vars, const Constellation& c, RVector& post) {
    CVector out(y.size());
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        const double var = vars[k];
        if (!std::isfinite(var)) {
            out[k] = 0.0;
            post[k] = 1.0;
        } else if (!(var > kMinVar)) {
            out[k] = c.nearest(y[k]);
            post[k] = 0.0;
        } else {
            const auto [re, vr] = axis_moments(y[k].real(), var, c.levels());
            const auto [im, vi] = axis_moments(y[k].imag(), var, c.levels());
            out[k] = cd(re, im);
            post[k] = vr + vi;
        }
    }
    return out;
}

RVector leverage(const Projector& p) {
    RVector lev(p.dimension());
    if (p.constraints() == 0) return RVector::Zero(p.dimension());
    for (int k = 0; k < p.dimension(); ++k) lev[k] = (p.transfer().row(k) * p.constraint().col(k)).real()(0);
    return lev;
}

}  // namespace

Equalized zf_equalize(const CVector& received, const CVector& channel) {
    if (received.size() != channel.size()) throw std::invalid_argument("zf_equalize: size mismatch");
    Equalized out{CVector(received.size()), RVector(received.size())};
    for (Eigen::Index k = 0; k < received.size(); ++k) {
        const double g = std::norm(channel[k]);
        if (g > 0.0) {
            out.symbols[k] = received[k] / channel[k];
            out.noise_scale[k] = 1.0 / g;
        } else {
            out.symbols[k] = 0.0;
            out.noise_scale[k] = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

EqualizedGrid zf_equalize(const ResourceGrid& grid, const CVector& channel) {
    if (grid.symbols.cols() != channel.size()) throw std::invalid_argument("zf_equalize: size mismatch");
    EqualizedGrid out;
    out.grid.symbols.resize(grid.symbols.rows(), grid.symbols.cols());
    for (Eigen::Index s = 0; s < grid.symbols.rows(); ++s) {
        const auto eq = zf_equalize(CVector(grid.symbols.row(s).transpose()), channel);
        out.grid.symbols.row(s) = eq.symbols.transpose();
        out.noise_scale = eq.noise_scale;
    }
    if (grid.symbols.rows() == 0) out.noise_scale = zf_equalize(CVector::Zero(channel.size()), channel).noise_scale;
    return out;
}

CVector project_receive(const Projector& p, const CVector& r) { return p.apply(r); }

CVector symbol_estimate(const CVector& y, const RVector& noise_vars, const Constellation& c, SoftMode mode) {
    CVector out(y.size());
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        const double var = noise_vars[k];
        if (mode == SoftMode::hard || !(var > kMinVar)) {
            out[k] = c.nearest(y[k]);
        } else if (!std::isfinite(var)) {
            out[k] = 0.0;
        } else {
            out[k] = cd(axis_mean(y[k].real(), var, c.levels()), axis_mean(y[k].imag(), var, c.levels()));
        }
    }
    return out;
}

DetectResult iterative_detect(const Projector& p, const CVector& r_eq, const RVector& noise_vars,
                              const Constellation& c, const DetectOptions& opt) {
    if (r_eq.size() != p.dimension() || noise_vars.size() != p.dimension())
        throw std::invalid_argument("iterative_detect: length mismatch");
    DetectResult res;
    if (p.constraints() == 0) {
        res.estimate = r_eq;
        res.iterations = 1;
        res.noise_vars = noise_vars;
        return res;
    }
    const Eigen::Index n = r_eq.size();
    const CMatrix& a = p.constraint();
    const CMatrix& t = p.transfer();

    // Erased bins get a large finite variance so the weighting stays well posed.
    RVector s = noise_vars.cwiseMax(kMinVar);
    const double cap = 1e12 * s.minCoeff();
    for (Eigen::Index k = 0; k < n; ++k)
        if (!(s[k] < cap)) s[k] = cap;
    const CMatrix asa = a * s.asDiagonal() * a.adjoint();

    CVector matched;
    RVector base(n);
    if (opt.noise_aware) {
        const Eigen::LDLT<CMatrix> solver(asa);
        matched = r_eq - s.cwiseProduct(a.adjoint() * solver.solve(a * r_eq));
        const CMatrix sa = solver.solve(a);
        for (Eigen::Index k = 0; k < n; ++k)
            base[k] = std::max(s[k] - s[k] * s[k] * (a.col(k).adjoint() * sa.col(k)).real()(0), 0.0);
    } else {
        matched = p.apply(r_eq);
        const CMatrix tsa = t * asa;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double ta = (t.row(k) * a.col(k)).real()(0);
            const double leak = (tsa.row(k) * t.row(k).adjoint()).real()(0);
            base[k] = std::max(s[k] * (1.0 - 2.0 * ta) + leak, 0.0);
        }
    }
    for (Eigen::Index k = 0; k < n; ++k)
        if (!std::isfinite(noise_vars[k]) || !(noise_vars[k] > kMinVar)) base[k] = noise_vars[k];

    // diag(T A V A^H T^H): residual interference left by imperfect symbol estimates.
    auto interference = [&](const RVector& v) {
        const CMatrix ava = a * v.asDiagonal() * a.adjoint();
        const CMatrix tav = t * ava;
        RVector out(n);
        for (Eigen::Index k = 0; k < n; ++k) out[k] = (tav.row(k) * t.row(k).adjoint()).real()(0);
        return out;
    };

    RVector vars = noise_vars;
    if (opt.leverage_weighting) vars += leverage(p);

    if (opt.noise_aware && opt.mode == SoftMode::soft) {
        // Every bin measures (T e)_k = psi_k - z_k for the lost component
        // e = A d; solve for e by weighted least squares so unreliable bins
        // count for little. Unit weights reduce to e = A psi.
        const RVector lev = leverage(p);
        RVector post = RVector::Ones(n);
        CVector d = matched;
        RVector v = base + interference(post);
        double floor = 1.0;
        for (int it = 0; it < opt.max_iters; ++it) {
            const CVector psi = soft_estimate(d, v, c, post);
            RVector w(n);
            for (Eigen::Index k = 0; k < n; ++k) w[k] = 1.0 / (post[k] + s[k] + kMinVar);
            const CMatrix twt = t.adjoint() * w.asDiagonal() * t;
            const Eigen::LDLT<CMatrix> solver(twt);
            const CVector e = solver.solve(t.adjoint() * w.cwiseProduct(psi - matched));
            const CMatrix cov_t = solver.solve(t.adjoint());
            const CVector next = matched + t * e;
            // The fit covariance ignores correlated decision errors and
            // collapses too fast, locking in wrong fixed points on dense
            // constellations; keep a slowly decaying share of the prior.
            floor *= kAnneal;
            for (Eigen::Index k = 0; k < n; ++k) {
                if (!std::isfinite(base[k])) continue;
                const double inter = (t.row(k) * cov_t.col(k)).real()(0);
                v[k] = base[k] + std::max(inter, floor * lev[k]);
            }
            const double step = (next - d).norm();
            const double ref = d.norm();
            res.residuals.push_back(step);
            d = next;
            res.iterations = it + 1;
            if (step <= opt.tolerance * ref) break;
        }
        res.estimate = std::move(d);
        res.noise_vars = v;
        return res;
    }

    CVector d = matched;
    for (int it = 0; it < opt.max_iters; ++it) {
        const CVector next = matched + p.complement(symbol_estimate(d, vars, c, opt.mode));
        const double step = (next - d).norm();
        const double ref = d.norm();
        res.residuals.push_back(step);
        d = next;
        res.iterations = it + 1;
        if (step <= opt.tolerance * ref) break;
    }
    res.estimate = std::move(d);
    res.noise_vars = base;
    return res;
}

CVector mrt_precode(const CVector& h_row) {
    const double n = h_row.norm();
    if (!(n > 0.0)) throw std::invalid_argument("mrt_precode: zero channel");
    return h_row.conjugate() / n;
}

DetectResult miso_detect(const Projector& p, const CMatrix& channel, const CMatrix& weights, const CVector& y,
                         double noise_var, const Constellation& c, const DetectOptions& opt, RVector* post_noise) {
    const Eigen::Index k = y.size();
    if (channel.rows() != k || weights.rows() != k || channel.cols() != weights.cols())
        throw std::invalid_argument("miso_detect: dimension mismatch");
    if (k != p.dimension()) throw std::invalid_argument("miso_detect: precoder dimension mismatch");

    // Effective scalar gain without the spectral distortion.
    const CVector gain = (channel.cwiseProduct(weights)).rowwise().sum();
    RVector vars(k);
    for (Eigen::Index i = 0; i < k; ++i) vars[i] = std::norm(gain[i]) > 0.0 ? noise_var / std::norm(gain[i]) : INFINITY;
    if (post_noise) *post_noise = vars;

    DetectResult res;
    CVector d = y.cwiseQuotient(gain);
    if (p.constraints() == 0) {
        res.estimate = d;
        res.iterations = 1;
        return res;
    }
    // y = gain .* d - sum_i h_i .* (T A (w_i .* d)) + n
    for (int it = 0; it < opt.max_iters; ++it) {
        const CVector psi = symbol_estimate(d, vars, c, opt.mode);
        CVector distortion = CVector::Zero(k);
        for (Eigen::Index a = 0; a < channel.cols(); ++a)
            distortion += channel.col(a).cwiseProduct(p.complement(weights.col(a).cwiseProduct(psi)));
        const CVector next = (y + distortion).cwiseQuotient(gain);
        const double step = (next - d).norm();
        const double ref = d.norm();
        res.residuals.push_back(step);
        d = next;
        res.iterations = it + 1;
        if (step <= opt.tolerance * ref) break;
    }
    res.estimate = std::move(d);
    return res;
}

SoftMode parse_soft_mode(std::string_view s) {
    if (s == "soft") return SoftMode::soft;
    if (s == "hard") return SoftMode::hard;
    throw std::invalid_argument("unknown detector mode '" + std::string(s) + "'");
}

}  // namespace sprec
