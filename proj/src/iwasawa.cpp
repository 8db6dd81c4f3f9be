#include "cmcdress/iwasawa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "cmcdress/errors.hpp"
#include "cmcdress/fft.hpp"

namespace cmcdress {

namespace {

// Bandwidth of the coefficient list above the numeric floor.
int coefficient_bandwidth(const TwistedLoop& g) {
    double cmax = 0.0;
    for (int n = -g.degree(); n <= g.degree(); ++n)
        cmax = std::max(cmax, g.coeff(n).norm_inf());
    if (cmax == 0.0) return 0;
    const double floor = 1e-14 * cmax;
    int band = 0;
    for (int n = 1; n <= g.degree(); ++n)
        if (std::max(g.coeff(n).norm_inf(), g.coeff(-n).norm_inf()) > floor) band = n;
    return band;
}

// Initial plus factor of M = star(g) g from the Cholesky factor of a finite
// Toeplitz section: the last block row of L converges to the coefficients of
// the spectral factor.
TwistedLoop toeplitz_factor(const TwistedLoop& m, int out_degree, int block_rows) {
    const int k = block_rows;
    Eigen::MatrixXcd t(2 * k, 2 * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const Mat2 blk = m.coeff(i - j).transpose();
            t(2 * i, 2 * j) = blk.a;
            t(2 * i, 2 * j + 1) = blk.b;
            t(2 * i + 1, 2 * j) = blk.c;
            t(2 * i + 1, 2 * j + 1) = blk.d;
        }
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(t);
    if (llt.info() != Eigen::Success)
        throw NumericError("Toeplitz section is not positive definite; "
                           "the loop is too close to singular on the circle");
    const Eigen::MatrixXcd l = llt.matrixL();
    TwistedLoop w(out_degree, m.twisted(), m.sample_radius());
    const int jmax = std::min(out_degree, k - 1);
    const int r = 2 * (k - 1);
    for (int j = 0; j <= jmax; ++j) {
        const int c = 2 * (k - 1 - j);
        const Mat2 blk{l(r, c), l(r, c + 1), l(r + 1, c), l(r + 1, c + 1)};
        w.set_coeff(j, blk.transpose());
    }
    return w;
}

double residual_norm(const TwistedLoop& w, const TwistedLoop& m, double scale) {
    const TwistedLoop r = multiply_to_degree(w.star(), w, m.degree()) - m;
    return r.norm_inf() / scale;
}

} // namespace

TwistedLoop plus_inverse(const TwistedLoop& w) {
    const int d = w.degree();
    const Mat2 w0 = w.coeff(0);
    if (std::abs(w0.det()) < 1e-250)
        throw NumericError("plus loop is singular at lambda = 0");
    std::vector<Mat2> x(static_cast<std::size_t>(d) + 1);
    x[0] = w0.inverse();
    for (int n = 1; n <= d; ++n) {
        Mat2 acc = Mat2::zero();
        for (int k = 1; k <= n; ++k)
            acc = acc + w.coeff(k) * x[static_cast<std::size_t>(n - k)];
        x[static_cast<std::size_t>(n)] = (x[0] * acc) * Complex(-1.0);
    }
    TwistedLoop out(d, w.twisted(), w.sample_radius());
    for (int n = 0; n <= d; ++n) out.set_coeff(n, x[static_cast<std::size_t>(n)]);
    return out;
}

double min_singular_on_circle(const TwistedLoop& g) {
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(2 * g.degree() + 2));
    const std::vector<Mat2> vals = g.samples(grid);
    double mn = 1e300;
    for (const auto& m : vals) {
        const Mat2 h = m.adjoint() * m;
        const double p = std::real(h.a);
        const double s = std::real(h.d);
        const double q = std::abs(h.b);
        const double disc = std::sqrt(std::max(0.0, (p - s) * (p - s) + 4.0 * q * q));
        const double emin = 0.5 * (p + s - disc);
        mn = std::min(mn, std::sqrt(std::max(0.0, emin)));
    }
    return mn;
}

BNormalization normalize_to_B(const TwistedLoop& g) {
    // Value at 0 is the degree-0 coefficient plus any numerically negligible
    // negative tail; for plus loops these agree.
    const Mat2 w0 = g.coeff(0);
    const double r = std::sqrt(std::norm(w0.a) + std::norm(w0.c));
    const Complex dt = w0.det();
    if (r == 0.0 || std::abs(dt) == 0.0)
        throw NumericError("loop value at lambda = 0 is singular; cannot normalize");
    const Complex phase = std::polar(1.0, std::arg(dt));
    const Mat2 q{w0.a / r, -std::conj(w0.c) * phase / r,
                 w0.c / r, std::conj(w0.a) * phase / r};
    const Mat2 rot = q.adjoint();
    return {constant_times(rot, g), rot};
}

IwasawaFactors iwasawa(const TwistedLoop& g, const IwasawaOptions& options) {
    const double sigma = min_singular_on_circle(g);
    if (sigma < options.min_singular)
        throw NumericError("loop is numerically singular on the circle (min singular value " +
                           std::to_string(sigma) + ")");

    const int n = g.degree();
    const TwistedLoop m = multiply_to_degree(g.star(), g, 2 * n);
    const double scale = std::max(1.0, m.norm_inf());

    int rows = options.toeplitz_rows;
    if (rows <= 0) rows = std::min(2 * n + 1, 2 * coefficient_bandwidth(m) + 16);
    rows = std::max(rows, 4);

    TwistedLoop w = toeplitz_factor(m, n, rows);
    if (w.twisted()) w.project_parity();

    double res = residual_norm(w, m, scale);
    int iterations = 0;
    while (res > options.newton_tol && iterations < options.max_newton) {
        const TwistedLoop x = plus_inverse(w);
        const TwistedLoop r = multiply_to_degree(w.star(), w, 2 * n) - m;
        const TwistedLoop t = multiply_to_degree(x.star(), r, 3 * n);
        const TwistedLoop gcorr = multiply_to_degree(t, x, n);
        TwistedLoop e(n, w.twisted(), w.sample_radius());
        e.set_coeff(0, gcorr.coeff(0) * Complex(-0.5));
        for (int j = 1; j <= n; ++j) e.set_coeff(j, gcorr.coeff(j) * Complex(-1.0));
        e.set_coeff(0, e.coeff(0) + Mat2::identity());
        w = multiply_to_degree(e, w, n);
        ++iterations;
        res = residual_norm(w, m, scale);
    }
    if (res > options.newton_tol) {
        char detail[32];
        std::snprintf(detail, sizeof(detail), "%.3g", res);
        throw NumericError(std::string("factorization did not converge within the iteration "
                                       "limit (last residual ") +
                           detail + ")");
    }

    BNormalization norm = normalize_to_B(w);
    TwistedLoop unitary = multiply_to_degree(g, plus_inverse(norm.loop), n);
    if (unitary.twisted()) unitary.project_parity();
    return {std::move(unitary), std::move(norm.loop), res, iterations};
}

} // namespace cmcdress
