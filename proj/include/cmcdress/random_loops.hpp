#pragma once

#include <cstdint>
#include <random>

#include "cmcdress/loop.hpp"

namespace cmcdress {

// Deterministic Gaussian stream: mt19937_64 + an explicit Box-Muller transform,
// so the draw sequence is identical across standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}
    double next();
    Complex next_complex();  // independent real and imaginary parts

private:
    std::mt19937_64 eng_;
    bool have_spare_{false};
    double spare_{0.0};
};

// exp of a random twisted plus-loop generator: coefficients complex Gaussian
// scaled by amplitude * decay^degree, diagonal even / off-diagonal odd,
// trace-free, degree-0 block real diagonal so the value at 0 lands in the
// upper-triangular positive-diagonal group B. det = 1 by construction.
TwistedLoop random_plus_loop(std::uint64_t seed, int degree, double decay = 0.5,
                             double amplitude = 0.4);

// exp of a random twisted loop that is anti-Hermitian on the circle
// (x_{-n} = -x_n^H), trace-free: unitary on the circle, det = 1.
TwistedLoop random_unitary_loop(std::uint64_t seed, int degree, double decay = 0.5,
                                double amplitude = 0.4);

} // namespace cmcdress
