#pragma once

#include "sprec/types.hpp"

namespace sprec {

// Unitary transforms (scaled by 1/sqrt(n) in both directions).
CVector fft_unitary(const CVector& x);
CVector ifft_unitary(const CVector& x);

// Raw forward transform without scaling; used by the spectral estimators.
CVector fft_raw(const CVector& x);

}  // namespace sprec
