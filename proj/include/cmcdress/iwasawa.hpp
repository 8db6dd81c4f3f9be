#pragma once

#include "cmcdress/loop.hpp"

namespace cmcdress {

struct IwasawaOptions {
    double newton_tol = 1e-11;  // relative coefficient-norm residual target
    int max_newton = 50;
    double min_singular = 1e-6;  // smallest singular value tolerated on the circle
    int toeplitz_rows = 0;       // block rows of the Toeplitz section; 0 = adaptive
};

struct IwasawaFactors {
    TwistedLoop unitary;  // unitary on the circle
    TwistedLoop plus;     // analytic in the disk, value at 0 upper triangular
                          // with positive diagonal
    double residual;      // relative norm of star(plus) plus - star(g) g
    int newton_iterations;
};

// Splits g = unitary * plus. Rejects loops whose smallest singular value on
// the circle falls below options.min_singular.
IwasawaFactors iwasawa(const TwistedLoop& g, const IwasawaOptions& options = {});

struct BNormalization {
    TwistedLoop loop;  // rotation * input, value at 0 in the positive triangular group
    Mat2 rotation;     // constant unitary factor that was applied on the left
};

// Left-rotates a loop with invertible value at 0 so that value lands in the
// group of upper-triangular matrices with positive diagonal.
BNormalization normalize_to_B(const TwistedLoop& g);

// Inverse of a plus loop through the triangular coefficient recursion,
// truncated at the input degree.
TwistedLoop plus_inverse(const TwistedLoop& w);

// Smallest singular value of g(lambda) over a circle grid.
double min_singular_on_circle(const TwistedLoop& g);

} // namespace cmcdress
