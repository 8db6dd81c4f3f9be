#include "cmcdress/random_loops.hpp"

#include <cmath>
#include <numbers>

#include "cmcdress/fft.hpp"

namespace cmcdress {

double GaussianStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double scale = 1.0 / 9007199254740992.0;  // 2^-53
    double u1 = static_cast<double>(eng_() >> 11) * scale;
    const double u2 = static_cast<double>(eng_() >> 11) * scale;
    if (u1 <= 0.0) u1 = scale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Complex GaussianStream::next_complex() {
    const double re = next();
    const double im = next();
    return {re, im};
}

namespace {

TwistedLoop exp_of_generator(const TwistedLoop& x) {
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(4 * x.degree() + 4));
    std::vector<Mat2> v = x.samples(grid);
    for (auto& m : v) m = exp_traceless(m);
    TwistedLoop g = TwistedLoop::from_samples(v, x.degree(), x.twisted(), x.sample_radius());
    g.project_parity();
    return g;
}

} // namespace

TwistedLoop random_plus_loop(std::uint64_t seed, int degree, double decay, double amplitude) {
    if (!(decay > 0.0 && decay < 1.0)) throw ValidationError("decay must lie in (0, 1)");
    GaussianStream gs(seed);
    TwistedLoop x(degree, true);
    for (int n = 0; n <= degree; ++n) {
        const double scale = amplitude * std::pow(decay, n);
        Mat2 m{gs.next_complex() * scale, gs.next_complex() * scale,
               gs.next_complex() * scale, gs.next_complex() * scale};
        if (n % 2 == 0) {
            m.b = m.c = 0.0;
            if (n == 0) m.a = m.a.real();
            m.d = -m.a;
        } else {
            m.a = m.d = 0.0;
        }
        x.set_coeff(n, m);
    }
    return exp_of_generator(x);
}

TwistedLoop random_unitary_loop(std::uint64_t seed, int degree, double decay, double amplitude) {
    if (!(decay > 0.0 && decay < 1.0)) throw ValidationError("decay must lie in (0, 1)");
    GaussianStream gs(seed);
    TwistedLoop x(degree, true);
    for (int n = 0; n <= degree; ++n) {
        const double scale = amplitude * std::pow(decay, n);
        Mat2 m{gs.next_complex() * scale, gs.next_complex() * scale,
               gs.next_complex() * scale, gs.next_complex() * scale};
        if (n % 2 == 0) {
            m.b = m.c = 0.0;
            if (n == 0) m.a = Complex(0.0, m.a.imag());
            m.d = -m.a;
        } else {
            m.a = m.d = 0.0;
        }
        x.set_coeff(n, m);
        if (n > 0) x.set_coeff(-n, (m.adjoint()) * Complex(-1.0));
    }
    return exp_of_generator(x);
}

} // namespace cmcdress
