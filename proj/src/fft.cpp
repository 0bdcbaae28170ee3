#include "sprec/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace sprec {

namespace {

Eigen::FFT<double>& engine() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

}  // namespace

CVector fft_raw(const CVector& x) {
    CVector out(x.size());
    if (x.size() == 0) return out;
    engine().fwd(out, x);
    return out;
}

CVector fft_unitary(const CVector& x) {
    if (x.size() == 0) return x;
    return fft_raw(x) / std::sqrt(static_cast<double>(x.size()));
}

CVector ifft_unitary(const CVector& x) {
    CVector out(x.size());
    if (x.size() == 0) return out;
    engine().inv(out, x);
    return out / std::sqrt(static_cast<double>(x.size()));
}

}  // namespace sprec
