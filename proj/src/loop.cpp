#include "cmcdress/loop.hpp"

#include <algorithm>
#include <cmath>

#include "cmcdress/fft.hpp"

namespace cmcdress {

TwistedLoop::TwistedLoop(int degree, bool twisted, double sample_radius)
    : e11_(degree, sample_radius), e12_(degree, sample_radius),
      e21_(degree, sample_radius), e22_(degree, sample_radius), twisted_(twisted) {}

TwistedLoop TwistedLoop::identity(int degree, bool twisted) {
    TwistedLoop g(degree, twisted);
    g.e11_.set_coeff(0, 1.0);
    g.e22_.set_coeff(0, 1.0);
    return g;
}

TwistedLoop TwistedLoop::constant(const Mat2& value, int degree, bool twisted) {
    TwistedLoop g(degree, twisted);
    g.set_coeff(0, value);
    return g;
}

TwistedLoop TwistedLoop::from_samples(const std::vector<Mat2>& values, int degree, bool twisted,
                                      double sample_radius) {
    const std::size_t grid = values.size();
    std::vector<Complex> v(grid);
    TwistedLoop g(degree, twisted, sample_radius);
    const auto pick = [&](int i, int j) -> LaurentSeries& {
        return g.entry(i, j);
    };
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (std::size_t s = 0; s < grid; ++s) {
                const Mat2& m = values[s];
                v[s] = (i == 0) ? (j == 0 ? m.a : m.b) : (j == 0 ? m.c : m.d);
            }
            pick(i, j) = LaurentSeries::from_samples(v, degree, sample_radius);
        }
    }
    return g;
}

const LaurentSeries& TwistedLoop::entry(int i, int j) const {
    if (i == 0 && j == 0) return e11_;
    if (i == 0 && j == 1) return e12_;
    if (i == 1 && j == 0) return e21_;
    if (i == 1 && j == 1) return e22_;
    throw ValidationError("entry index out of range");
}

LaurentSeries& TwistedLoop::entry(int i, int j) {
    return const_cast<LaurentSeries&>(static_cast<const TwistedLoop&>(*this).entry(i, j));
}

Mat2 TwistedLoop::coeff(int n) const {
    return {e11_.coeff(n), e12_.coeff(n), e21_.coeff(n), e22_.coeff(n)};
}

void TwistedLoop::set_coeff(int n, const Mat2& m) {
    e11_.set_coeff(n, m.a);
    e12_.set_coeff(n, m.b);
    e21_.set_coeff(n, m.c);
    e22_.set_coeff(n, m.d);
}

std::vector<Mat2> TwistedLoop::samples(std::size_t grid) const {
    const std::vector<Complex> a = e11_.samples(grid);
    const std::vector<Complex> b = e12_.samples(grid);
    const std::vector<Complex> c = e21_.samples(grid);
    const std::vector<Complex> d = e22_.samples(grid);
    std::vector<Mat2> out(grid);
    for (std::size_t j = 0; j < grid; ++j) out[j] = {a[j], b[j], c[j], d[j]};
    return out;
}

Mat2 TwistedLoop::evaluate(Complex lambda) const {
    return {e11_.evaluate(lambda), e12_.evaluate(lambda),
            e21_.evaluate(lambda), e22_.evaluate(lambda)};
}

TwistedLoop::Evaluation TwistedLoop::evaluate_checked(Complex lambda) const {
    const double r = analyticity_radius();
    const double mod = std::abs(lambda);
    bool trusted = true;
    if (r > 0.0) trusted = (mod >= r && mod <= 1.0 / r);
    return {evaluate(lambda), trusted};
}

Mat2 TwistedLoop::theta_derivative_at_one() const {
    return {e11_.theta_derivative_at_one(), e12_.theta_derivative_at_one(),
            e21_.theta_derivative_at_one(), e22_.theta_derivative_at_one()};
}

TwistedLoop TwistedLoop::truncated(int degree) const {
    TwistedLoop g(degree, twisted_, sample_radius());
    g.e11_ = e11_.truncated(degree);
    g.e12_ = e12_.truncated(degree);
    g.e21_ = e21_.truncated(degree);
    g.e22_ = e22_.truncated(degree);
    return g;
}

TwistedLoop TwistedLoop::star() const {
    TwistedLoop g(degree(), twisted_, sample_radius());
    g.e11_ = e11_.star();
    g.e12_ = e21_.star();
    g.e21_ = e12_.star();
    g.e22_ = e22_.star();
    return g;
}

TwistedLoop TwistedLoop::inverse() const {
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(4 * degree() + 2));
    std::vector<Mat2> v = samples(grid);
    double dmin = 1e300;
    for (auto& m : v) dmin = std::min(dmin, std::abs(m.det()));
    if (dmin < 1e-6)
        throw NumericError("loop is numerically singular on the circle (min |det| = " +
                           std::to_string(dmin) + ")");
    for (auto& m : v) m = m.inverse();
    return from_samples(v, degree(), twisted_, sample_radius());
}

LaurentSeries TwistedLoop::det() const {
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(4 * degree() + 2));
    const std::vector<Mat2> v = samples(grid);
    std::vector<Complex> d(grid);
    for (std::size_t j = 0; j < grid; ++j) d[j] = v[j].det();
    return LaurentSeries::from_samples(d, degree(), sample_radius());
}

TwistedLoop TwistedLoop::operator+(const TwistedLoop& o) const {
    TwistedLoop g(std::max(degree(), o.degree()), twisted_ && o.twisted_, sample_radius());
    g.e11_ = e11_ + o.e11_;
    g.e12_ = e12_ + o.e12_;
    g.e21_ = e21_ + o.e21_;
    g.e22_ = e22_ + o.e22_;
    return g;
}

TwistedLoop TwistedLoop::operator-(const TwistedLoop& o) const {
    TwistedLoop g(std::max(degree(), o.degree()), twisted_ && o.twisted_, sample_radius());
    g.e11_ = e11_ - o.e11_;
    g.e12_ = e12_ - o.e12_;
    g.e21_ = e21_ - o.e21_;
    g.e22_ = e22_ - o.e22_;
    return g;
}

TwistedLoop multiply_to_degree(const TwistedLoop& a, const TwistedLoop& b, int out_degree) {
    if (a.sample_radius() != b.sample_radius())
        throw ValidationError("cannot multiply loops with different sample radii");
    const int span = std::max(a.degree() + b.degree() + out_degree + 1,
                              2 * std::max(a.degree(), b.degree()) + 1);
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(span));
    const std::vector<Mat2> va = a.samples(grid);
    const std::vector<Mat2> vb = b.samples(grid);
    std::vector<Mat2> prod(grid);
    for (std::size_t j = 0; j < grid; ++j) prod[j] = va[j] * vb[j];
    return TwistedLoop::from_samples(prod, out_degree, a.twisted() && b.twisted(),
                                     a.sample_radius());
}

TwistedLoop TwistedLoop::operator*(const TwistedLoop& o) const {
    return multiply_to_degree(*this, o, std::max(degree(), o.degree()));
}

TwistedLoop TwistedLoop::scaled(Complex s) const {
    TwistedLoop g(degree(), twisted_, sample_radius());
    g.e11_ = e11_ * s;
    g.e12_ = e12_ * s;
    g.e21_ = e21_ * s;
    g.e22_ = e22_ * s;
    return g;
}

TwistedLoop TwistedLoop::scalar_multiplied(const LaurentSeries& s) const {
    TwistedLoop g(degree(), twisted_, sample_radius());
    g.e11_ = multiply_to_degree(e11_, s, degree());
    g.e12_ = multiply_to_degree(e12_, s, degree());
    g.e21_ = multiply_to_degree(e21_, s, degree());
    g.e22_ = multiply_to_degree(e22_, s, degree());
    return g;
}

double TwistedLoop::norm_inf() const {
    return std::max(std::max(e11_.norm_inf(), e12_.norm_inf()),
                    std::max(e21_.norm_inf(), e22_.norm_inf()));
}

double TwistedLoop::tail_norm(int from_degree) const {
    return std::max(std::max(e11_.tail_norm(from_degree), e12_.tail_norm(from_degree)),
                    std::max(e21_.tail_norm(from_degree), e22_.tail_norm(from_degree)));
}

double TwistedLoop::parity_defect() const {
    if (!twisted_) return 0.0;
    return std::max(std::max(e11_.parity_defect(Parity::even), e22_.parity_defect(Parity::even)),
                    std::max(e12_.parity_defect(Parity::odd), e21_.parity_defect(Parity::odd)));
}

double TwistedLoop::project_parity() {
    if (!twisted_) return 0.0;
    const double r1 = e11_.project_parity(Parity::even);
    const double r2 = e22_.project_parity(Parity::even);
    const double r3 = e12_.project_parity(Parity::odd);
    const double r4 = e21_.project_parity(Parity::odd);
    return std::max(std::max(r1, r2), std::max(r3, r4));
}

double TwistedLoop::unitarity_defect_on_circle(std::size_t grid) const {
    if (grid == 0) grid = fft::next_pow2(static_cast<std::size_t>(2 * degree() + 2));
    const std::vector<Mat2> v = samples(grid);
    double defect = 0.0;
    for (const auto& m : v) defect = std::max(defect, unitarity_defect(m));
    return defect;
}

double TwistedLoop::analyticity_radius() const {
    std::vector<double> mag(static_cast<std::size_t>(degree()) + 1, 0.0);
    for (int n = 0; n <= degree(); ++n) {
        const double m = std::max(coeff(n).norm_inf(), coeff(-n).norm_inf());
        mag[static_cast<std::size_t>(n)] = m;
    }
    return decay_radius(mag);
}

bool TwistedLoop::is_plus(double tol) const {
    double mass = 0.0;
    for (int n = 1; n <= degree(); ++n) mass = std::max(mass, coeff(-n).norm_inf());
    return mass <= tol;
}

TwistedLoop constant_times(const Mat2& m, const TwistedLoop& g) {
    const bool diag = (std::abs(m.b) == 0.0 && std::abs(m.c) == 0.0);
    TwistedLoop out(g.degree(), g.twisted() && diag, g.sample_radius());
    for (int n = -g.degree(); n <= g.degree(); ++n) out.set_coeff(n, m * g.coeff(n));
    return out;
}

TwistedLoop times_constant(const TwistedLoop& g, const Mat2& m) {
    const bool diag = (std::abs(m.b) == 0.0 && std::abs(m.c) == 0.0);
    TwistedLoop out(g.degree(), g.twisted() && diag, g.sample_radius());
    for (int n = -g.degree(); n <= g.degree(); ++n) out.set_coeff(n, g.coeff(n) * m);
    return out;
}

} // namespace cmcdress
