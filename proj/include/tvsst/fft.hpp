#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace tvsst {

// Forward/inverse complex DFT (FFTW backend, FFTW_ESTIMATE plans, so results
// are deterministic across runs). ifft applies the 1/n normalization.
Eigen::VectorXcd fft(const Eigen::VectorXcd& x);
Eigen::VectorXcd ifft(const Eigen::VectorXcd& x);

std::size_t next_pow2(std::size_t n);

}  // namespace tvsst
