#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sprec/filters.hpp"
#include "sprec/modulation.hpp"
#include "sprec/numerology.hpp"
#include "sprec/precoder.hpp"
#include "sprec/waveform.hpp"

namespace sprec {

// Frequencies in Hz; values in dB relative to the in-band mean PSD of plain
// OFDM on the same profile.
struct PsdCurve {
    std::vector<double> freqs;
    std::vector<double> values_dbr;
};

// Mean plain-OFDM PSD (W/Hz, unit-energy symbols, unitary modulator) over a
// 10-point grid inside each active subcarrier.
double inband_reference(const Numerology& num, const SubcarrierAllocation& alloc);

// Ensemble PSD (W/Hz) of the (precoded, optionally filtered) OFDM signal:
// |H(f)|^2 a(f)^T G a(f)^* / (T_o L) for i.i.d. unit-energy data. Spectral
// images of the sampled signal at multiples of fs are not included.
double analytic_psd_value(const Numerology& num, const SubcarrierAllocation& alloc, const Projector* p, double f,
                          const Filter* filter = nullptr);

PsdCurve analytic_psd(const Numerology& num, const SubcarrierAllocation& alloc, const Projector* p,
                      const std::vector<double>& freqs, const Filter* filter = nullptr);

// Default plotting grid: 10 points per subcarrier spacing over +-1.5 times
// the channel bandwidth.
std::vector<double> psd_grid(const Numerology& num, double bandwidth_hz, int points_per_spacing = 10);

// Welch estimate with a Hann window. Segments of `nfft` samples overlap by
// `overlap_fraction`. Output spans [-fs/2, fs/2) in increasing order and is
// expressed relative to `reference` (W/Hz).
PsdCurve welch_psd(const TimeSignal& sig, int nfft, double overlap_fraction, double reference);

// Linear interpolation of a curve at f; throws std::out_of_range outside it.
double value_at(const PsdCurve& c, double f);

struct OobMetrics {
    std::vector<double> probe_reduction_db;  // ref - psd at each probe
    std::vector<double> band_reduction_db;   // integrated power ratio per band
    std::vector<double> notch_depth_db;      // max pointwise reduction per band
};

OobMetrics oob_report(const PsdCurve& psd, const PsdCurve& ref, const std::vector<double>& probes,
                      const std::vector<std::pair<double, double>>& bands);

struct PaprCcdf {
    std::vector<double> thresholds_db;
    std::vector<double> exceed_prob;
    std::vector<double> papr_db;  // per symbol, sorted ascending
};

// Per-symbol PAPR of the useful part, measured on an envelope oversampled by
// zero-padding the symbol spectrum.
PaprCcdf papr_ccdf(const Numerology& num, const TimeSignal& sig, int oversample = 4, double step_db = 0.05);

// PAPR exceeded with probability `prob` (empirical quantile).
double papr_at(const PaprCcdf& c, double prob);

// Random equiprobable symbols through the transmitter: DFT spreading for
// SC-FDMA profiles (guard pulses zeroed at both ends), precoder, modulator,
// optional filter.
TimeSignal synthesize(const Profile& profile, const Projector* p, const Filter* filter, Modulation m, int symbols,
                      int guard_pulses, Rng& rng);

}  // namespace sprec
