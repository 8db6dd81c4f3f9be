#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cmcdress::fft {

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

// In-place DFT with kernel e^{-2 pi i jk/G}, unscaled. Size must be a power of two.
void forward(std::vector<std::complex<double>>& a);

// In-place inverse DFT with kernel e^{+2 pi i jk/G}, scaled by 1/G.
void inverse(std::vector<std::complex<double>>& a);

} // namespace cmcdress::fft
