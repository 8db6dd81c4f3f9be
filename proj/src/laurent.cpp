#include "cmcdress/laurent.hpp"

#include <algorithm>
#include <cmath>

#include "cmcdress/fft.hpp"

namespace cmcdress {

LaurentSeries::LaurentSeries(int degree, double sample_radius)
    : degree_(degree), sample_radius_(sample_radius),
      c_(static_cast<std::size_t>(2 * degree + 1), Complex(0.0)) {
    if (degree < 0) throw ValidationError("LaurentSeries degree must be nonnegative");
    if (sample_radius <= 0.0) throw ValidationError("sample radius must be positive");
}

LaurentSeries LaurentSeries::constant(Complex value, int degree) {
    LaurentSeries s(degree);
    s.set_coeff(0, value);
    return s;
}

LaurentSeries LaurentSeries::monomial(int power, Complex value, int degree) {
    if (std::abs(power) > degree)
        throw ValidationError("monomial power exceeds truncation degree");
    LaurentSeries s(degree);
    s.set_coeff(power, value);
    return s;
}

LaurentSeries LaurentSeries::from_samples(const std::vector<Complex>& values, int degree,
                                          double sample_radius) {
    const std::size_t grid = values.size();
    if (!fft::is_pow2(grid)) throw ValidationError("sample count must be a power of two");
    if (grid < static_cast<std::size_t>(2 * degree + 1))
        throw ValidationError("sample count too small for requested degree");
    std::vector<Complex> work = values;
    fft::forward(work);
    const double scale = 1.0 / static_cast<double>(grid);
    LaurentSeries s(degree, sample_radius);
    for (int n = -degree; n <= degree; ++n) {
        const std::size_t idx = static_cast<std::size_t>((n % static_cast<int>(grid) +
                                                          static_cast<int>(grid)) %
                                                         static_cast<int>(grid));
        s.set_coeff(n, work[idx] * scale);
    }
    return s;
}

void LaurentSeries::set_coeff(int n, Complex v) {
    if (n < -degree_ || n > degree_)
        throw ValidationError("coefficient index outside truncation window");
    c_[static_cast<std::size_t>(n + degree_)] = v;
}

std::vector<Complex> LaurentSeries::samples(std::size_t grid) const {
    if (!fft::is_pow2(grid)) throw ValidationError("sample count must be a power of two");
    if (grid < static_cast<std::size_t>(2 * degree_ + 1))
        throw ValidationError("sample count too small for series degree");
    std::vector<Complex> work(grid, Complex(0.0));
    for (int n = -degree_; n <= degree_; ++n) {
        const std::size_t idx = static_cast<std::size_t>((n % static_cast<int>(grid) +
                                                          static_cast<int>(grid)) %
                                                         static_cast<int>(grid));
        work[idx] += coeff(n);
    }
    fft::inverse(work);
    const double scale = static_cast<double>(grid);
    for (auto& v : work) v *= scale;
    return work;
}

Complex LaurentSeries::evaluate(Complex lambda) const {
    if (lambda == Complex(0.0)) throw ValidationError("cannot evaluate at lambda = 0");
    Complex plus(0.0);
    for (int n = degree_; n >= 1; --n) plus = (plus + coeff(n)) * lambda;
    Complex minus(0.0);
    const Complex inv = 1.0 / lambda;
    for (int n = degree_; n >= 1; --n) minus = (minus + coeff(-n)) * inv;
    return plus + minus + coeff(0);
}

LaurentSeries LaurentSeries::truncated(int degree) const {
    LaurentSeries s(degree, sample_radius_);
    const int keep = std::min(degree, degree_);
    for (int n = -keep; n <= keep; ++n) s.set_coeff(n, coeff(n));
    return s;
}

LaurentSeries LaurentSeries::star() const {
    LaurentSeries s(degree_, sample_radius_);
    for (int n = -degree_; n <= degree_; ++n) s.set_coeff(n, std::conj(coeff(-n)));
    return s;
}

LaurentSeries LaurentSeries::derivative() const {
    LaurentSeries s(degree_, sample_radius_);
    for (int n = -degree_; n <= degree_; ++n) {
        if (n == degree_) continue;
        s.set_coeff(n, static_cast<double>(n + 1) * coeff(n + 1));
    }
    // The lambda^{-degree-1} term of the derivative falls outside the window and
    // is dropped; callers needing it promote the degree first.
    return s;
}

Complex LaurentSeries::theta_derivative_at_one() const {
    Complex acc(0.0);
    for (int n = -degree_; n <= degree_; ++n)
        acc += Complex(0.0, static_cast<double>(n)) * coeff(n);
    return acc;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    const int d = std::max(degree_, o.degree_);
    LaurentSeries s(d, sample_radius_);
    for (int n = -d; n <= d; ++n) s.set_coeff(n, coeff(n) + o.coeff(n));
    return s;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
    const int d = std::max(degree_, o.degree_);
    LaurentSeries s(d, sample_radius_);
    for (int n = -d; n <= d; ++n) s.set_coeff(n, coeff(n) - o.coeff(n));
    return s;
}

LaurentSeries LaurentSeries::operator*(Complex s) const {
    LaurentSeries out(degree_, sample_radius_);
    for (int n = -degree_; n <= degree_; ++n) out.set_coeff(n, coeff(n) * s);
    return out;
}

double LaurentSeries::norm_inf() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

double LaurentSeries::tail_norm(int from_degree) const {
    double m = 0.0;
    for (int n = from_degree; n <= degree_; ++n)
        m = std::max(m, std::max(std::abs(coeff(n)), std::abs(coeff(-n))));
    return m;
}

double LaurentSeries::project_parity(Parity p) {
    double removed = 0.0;
    for (int n = -degree_; n <= degree_; ++n) {
        const bool keep = (p == Parity::even) ? (n % 2 == 0) : (n % 2 != 0);
        if (!keep) {
            removed = std::max(removed, std::abs(coeff(n)));
            set_coeff(n, Complex(0.0));
        }
    }
    return removed;
}

double LaurentSeries::parity_defect(Parity p) const {
    double defect = 0.0;
    for (int n = -degree_; n <= degree_; ++n) {
        const bool keep = (p == Parity::even) ? (n % 2 == 0) : (n % 2 != 0);
        if (!keep) defect = std::max(defect, std::abs(coeff(n)));
    }
    return defect;
}

double LaurentSeries::analyticity_radius() const {
    std::vector<double> mag(static_cast<std::size_t>(degree_) + 1, 0.0);
    for (int n = 0; n <= degree_; ++n)
        mag[static_cast<std::size_t>(n)] = std::max(std::abs(coeff(n)), std::abs(coeff(-n)));
    return decay_radius(mag);
}

LaurentSeries multiply_to_degree(const LaurentSeries& a, const LaurentSeries& b, int out_degree) {
    if (a.sample_radius() != b.sample_radius())
        throw ValidationError("cannot multiply series with different sample radii");
    const int span = std::max(a.degree() + b.degree() + out_degree + 1,
                              2 * std::max(a.degree(), b.degree()) + 1);
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(span));
    std::vector<Complex> va = a.samples(grid);
    const std::vector<Complex> vb = b.samples(grid);
    for (std::size_t j = 0; j < grid; ++j) va[j] *= vb[j];
    return LaurentSeries::from_samples(va, out_degree, a.sample_radius());
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    return multiply_to_degree(a, b, std::max(a.degree(), b.degree()));
}

double decay_radius(const std::vector<double>& magnitudes) {
    const int d = static_cast<int>(magnitudes.size()) - 1;
    double cmax = 0.0;
    for (double v : magnitudes) cmax = std::max(cmax, v);
    if (cmax == 0.0) return 0.0;
    const double floor = 1e-14 * cmax;
    // Fit only above the numeric floor; coefficients past that point are FFT
    // noise, not decay information.
    int last = -1;
    for (int n = 0; n <= d; ++n)
        if (magnitudes[static_cast<std::size_t>(n)] > floor) last = n;
    if (last < 6) return 0.0;  // too short a run to fit: entire at working precision
    const int lo = std::max(2, last / 2);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int n = lo; n <= last; ++n) {
        const double v = magnitudes[static_cast<std::size_t>(n)];
        if (v <= 0.0) continue;
        const double x = static_cast<double>(n);
        const double y = std::log(v);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count < 3) return 0.0;
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    const double slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
    const double rho = std::exp(slope);
    return std::clamp(rho, 0.0, 1.0);
}

} // namespace cmcdress
