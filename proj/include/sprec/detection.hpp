#pragma once

#include <string_view>
#include <vector>

#include "sprec/modulation.hpp"
#include "sprec/precoder.hpp"
#include "sprec/types.hpp"
#include "sprec/waveform.hpp"

namespace sprec {

struct Equalized {
    CVector symbols;
    RVector noise_scale;  // 1/|H|^2; infinity marks an erased bin
};

// Single-tap zero forcing: y_k / H_k.
Equalized zf_equalize(const CVector& received, const CVector& channel);

struct EqualizedGrid {
    ResourceGrid grid;
    RVector noise_scale;
};
EqualizedGrid zf_equalize(const ResourceGrid& grid, const CVector& channel);

// Matched filter by the precoder itself: G r.
CVector project_receive(const Projector& p, const CVector& r);

enum class SoftMode { soft, hard };

struct DetectOptions {
    int max_iters = 10;
    SoftMode mode = SoftMode::soft;
    // Inflate the per-bin variance used by the soft estimator with the
    // projector leverage diag(I - G).
    bool leverage_weighting = false;
    // Replace G r by the noise-weighted projection
    // z = r - S A^H (A S A^H)^-1 A r, S = diag(noise_var), and estimate the
    // lost component e = A d by weighted least squares on (T e)_k = psi_k - z_k
    // with weights 1 / (posterior var + noise var). Under a ZF equalizer the
    // plain projection leaks deep-fade noise into every bin. Soft mode only.
    bool noise_aware = false;
    double tolerance = 1e-6;
};

struct DetectResult {
    CVector estimate;
    int iterations = 0;
    std::vector<double> residuals;  // ||d^{i+1} - d^i|| per iteration
    RVector noise_vars;             // per-bin noise variance carried by the estimate
};

// Posterior-mean (soft) or nearest-point (hard) symbol estimate per bin.
CVector symbol_estimate(const CVector& y, const RVector& noise_vars, const Constellation& c, SoftMode mode);

// Fixed point d^{i+1} = G r + (I - G) psi(d^i), starting from d^0 = G r.
DetectResult iterative_detect(const Projector& p, const CVector& r_eq, const RVector& noise_vars,
                              const Constellation& c, const DetectOptions& opt = {});

// Maximum-ratio transmission for one receive antenna: w = h^H / ||h||.
CVector mrt_precode(const CVector& h_row);

// Interference cancellation for MRT + per-antenna spectral precoding.
// y_k = sum_i h_ki (G x_i)_k + n_k with x_i = w_i .* d; channel and weights
// are K x n_tx, noise_var is the per-bin complex noise variance at the
// antenna input.
DetectResult miso_detect(const Projector& p, const CMatrix& channel, const CMatrix& weights, const CVector& y,
                         double noise_var, const Constellation& c, const DetectOptions& opt, RVector* post_noise);

SoftMode parse_soft_mode(std::string_view s);

}  // namespace sprec
