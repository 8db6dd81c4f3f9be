#include "cmcdress/cylinder.hpp"

#include <cmath>
#include <numbers>

#include "cmcdress/fft.hpp"

namespace cmcdress {

namespace {

std::vector<Complex> circle_points(std::size_t grid) {
    std::vector<Complex> l(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) /
                          static_cast<double>(grid);
        l[j] = Complex(std::cos(th), std::sin(th));
    }
    return l;
}

} // namespace

LatticeConstants make_constants(double r1, double r2, int degree) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw ValidationError("mesh ratios must be positive");
    if (degree < 8) throw ValidationError("truncation degree must be at least 8");
    LatticeConstants c;
    c.r1 = r1;
    c.r2 = r2;
    c.degree = degree;
    c.lambda_plus = 1.0 / (2.0 * r1) + std::sqrt(1.0 + 1.0 / (4.0 * r1 * r1));
    c.lambda_minus = 1.0 / (2.0 * r2) + std::sqrt(1.0 + 1.0 / (4.0 * r2 * r2));
    c.r_min = std::max(1.0 / c.lambda_plus, 1.0 / c.lambda_minus);
    return c;
}

CylinderData make_cylinder(double r1, double r2, int degree) {
    const LatticeConstants cs = make_constants(r1, r2, degree);
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(4 * degree + 4));
    const std::vector<Complex> l = circle_points(grid);

    std::vector<Mat2> u(grid), v(grid);
    std::vector<Complex> dp(grid), dm(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const Complex li = 1.0 / l[j];
        const Complex us = r1 * (li - l[j]);          // purely imaginary on the circle
        const Complex vs = Complex(0.0, r2) * (li + l[j]);
        const double dplus = std::sqrt(std::abs((1.0 - us * us).real()));
        const double dminus = std::sqrt(std::abs((1.0 - vs * vs).real()));
        dp[j] = dplus;
        dm[j] = dminus;
        u[j] = (Mat2::identity() + kOffDiag * us) * (1.0 / dplus);
        v[j] = (Mat2::identity() + kOffDiag * vs) * (1.0 / dminus);
    }

    TwistedLoop U0 = TwistedLoop::from_samples(u, degree, true);
    TwistedLoop V0 = TwistedLoop::from_samples(v, degree, true);
    U0.project_parity();
    V0.project_parity();

    LaurentSeries delta_plus = LaurentSeries::from_samples(dp, degree);
    LaurentSeries delta_minus = LaurentSeries::from_samples(dm, degree);
    delta_plus.project_parity(Parity::even);
    delta_minus.project_parity(Parity::even);

    LaurentSeries dp2(degree), dm2(degree);
    dp2.set_coeff(0, 1.0 + 2.0 * r1 * r1);
    dp2.set_coeff(2, -r1 * r1);
    dp2.set_coeff(-2, -r1 * r1);
    dm2.set_coeff(0, 1.0 + 2.0 * r2 * r2);
    dm2.set_coeff(2, r2 * r2);
    dm2.set_coeff(-2, r2 * r2);

    return CylinderData(cs, std::move(U0), std::move(V0), std::move(delta_plus),
                        std::move(delta_minus), std::move(dp2), std::move(dm2));
}

TwistedLoop loop_power(const TwistedLoop& base, int exponent) {
    if (exponent == 0) return TwistedLoop::identity(base.degree(), base.twisted());
    TwistedLoop b = (exponent > 0) ? base : base.inverse();
    unsigned e = static_cast<unsigned>(exponent > 0 ? exponent : -exponent);
    TwistedLoop acc = TwistedLoop::identity(base.degree(), base.twisted());
    while (e > 0) {
        if (e & 1u) acc = acc * b;
        e >>= 1u;
        if (e > 0) b = b * b;
    }
    return acc;
}

TwistedLoop vacuum_frame(const CylinderData& cyl, int m, int n, const VacuumFrameOptions& opts) {
    if (std::abs(m) > opts.max_index || std::abs(n) > opts.max_index)
        throw ValidationError("vacuum frame index exceeds the window limit");
    const TwistedLoop f = loop_power(cyl.U0, m) * loop_power(cyl.V0, n);
    const int guard = (9 * f.degree()) / 10;
    if (f.tail_norm(guard) > opts.tail_tol)
        throw NumericError("vacuum frame truncation tail exceeds tolerance; "
                           "increase the degree or shrink the window");
    return f;
}

LaurentSeries delta_mixed_power(const CylinderData& cyl, int a, int b, int degree) {
    const double r1 = cyl.constants.r1;
    const double r2 = cyl.constants.r2;
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(4 * degree + 4));
    std::vector<Complex> vals(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) /
                          static_cast<double>(grid);
        const double s = std::sin(th);
        const double c = std::cos(th);
        const double dplus = std::sqrt(1.0 + 4.0 * r1 * r1 * s * s);
        const double dminus = std::sqrt(1.0 + 4.0 * r2 * r2 * c * c);
        vals[j] = std::pow(dplus, a) * std::pow(dminus, b);
    }
    LaurentSeries out = LaurentSeries::from_samples(vals, degree);
    out.project_parity(Parity::even);
    return out;
}

} // namespace cmcdress
