#pragma once

#include "cmcdress/loop.hpp"

namespace cmcdress {

// Parameters of the discrete cylinder with mesh ratios r1 (u direction) and
// r2 (v direction), plus derived singularity locations:
//   lambda_plus  = 1/(2 r1) + sqrt(1 + 1/(4 r1^2))   (real-axis pair)
//   lambda_minus = 1/(2 r2) + sqrt(1 + 1/(4 r2^2))   (imaginary-axis pair)
//   r_min        = max(1/lambda_plus, 1/lambda_minus)
struct LatticeConstants {
    double r1{0.0};
    double r2{0.0};
    int degree{0};
    double lambda_plus{0.0};
    double lambda_minus{0.0};
    double r_min{0.0};
};

LatticeConstants make_constants(double r1, double r2, int degree);

struct CylinderData {
    LatticeConstants constants;
    TwistedLoop U0;             // (I + r1 (1/l - l) A) / delta_plus
    TwistedLoop V0;             // (I + i r2 (1/l + l) A) / delta_minus
    LaurentSeries delta_plus;   // positive square root on the circle
    LaurentSeries delta_minus;
    LaurentSeries delta_plus_sq;   // 1 - r1^2 (1/l - l)^2, exact Laurent polynomial
    LaurentSeries delta_minus_sq;  // 1 + r2^2 (1/l + l)^2

    CylinderData(LatticeConstants cs, TwistedLoop u, TwistedLoop v, LaurentSeries dp,
                 LaurentSeries dm, LaurentSeries dp2, LaurentSeries dm2)
        : constants(cs), U0(std::move(u)), V0(std::move(v)), delta_plus(std::move(dp)),
          delta_minus(std::move(dm)), delta_plus_sq(std::move(dp2)),
          delta_minus_sq(std::move(dm2)) {}
};

CylinderData make_cylinder(double r1, double r2, int degree);

struct VacuumFrameOptions {
    int max_index = 512;
    double tail_tol = 1e-8;  // guard on truncation-tail mass of the result
};

// U0^m V0^n. Indices may be negative.
TwistedLoop vacuum_frame(const CylinderData& cyl, int m, int n,
                         const VacuumFrameOptions& opts = {});

// Integer power with truncation at the base degree.
TwistedLoop loop_power(const TwistedLoop& base, int exponent);

// delta_plus^a * delta_minus^b sampled on the circle (a, b may be negative).
LaurentSeries delta_mixed_power(const CylinderData& cyl, int a, int b, int degree);

} // namespace cmcdress
