#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cmcdress/errors.hpp"

namespace cmcdress {

using Complex = std::complex<double>;

enum class Parity { even, odd };

// Truncated Laurent series sum_{|n| <= degree} c_n lambda^n sampled on the
// circle |lambda| = sample_radius (the library works on the unit circle).
class LaurentSeries {
public:
    explicit LaurentSeries(int degree, double sample_radius = 1.0);

    static LaurentSeries constant(Complex value, int degree);
    static LaurentSeries monomial(int power, Complex value, int degree);
    // Coefficients from G equispaced circle samples, G a power of two.
    static LaurentSeries from_samples(const std::vector<Complex>& values, int degree,
                                      double sample_radius = 1.0);

    int degree() const { return degree_; }
    double sample_radius() const { return sample_radius_; }

    Complex coeff(int n) const {
        return (n < -degree_ || n > degree_) ? Complex(0.0) : c_[static_cast<std::size_t>(n + degree_)];
    }
    void set_coeff(int n, Complex v);

    // Values on the G-point circle grid, lambda_j = e^{2 pi i j / G}.
    std::vector<Complex> samples(std::size_t grid) const;
    Complex evaluate(Complex lambda) const;

    LaurentSeries truncated(int degree) const;
    LaurentSeries star() const;          // f*(lambda) = conj(f(1/conj(lambda)))
    LaurentSeries derivative() const;    // d/dlambda
    // i * sum n c_n: d/dtheta of f(e^{i theta}) at theta = 0.
    Complex theta_derivative_at_one() const;

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(Complex s) const;

    double norm_inf() const;
    double tail_norm(int from_degree) const;

    // Projects onto the even or odd part; returns the removed mass (inf norm).
    double project_parity(Parity p);
    double parity_defect(Parity p) const;

    // Decay-fit estimate of the inner convergence radius of the annulus of
    // analyticity (0 means the coefficients hit the numerical floor, i.e. the
    // function is entire on C* at working precision).
    double analyticity_radius() const;

private:
    int degree_;
    double sample_radius_;
    std::vector<Complex> c_;
};

// Pointwise product through an alias-free circle grid, truncated to out_degree.
LaurentSeries multiply_to_degree(const LaurentSeries& a, const LaurentSeries& b, int out_degree);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

// Decay fit used by analyticity_radius; magnitudes indexed by degree 0..D.
double decay_radius(const std::vector<double>& magnitudes);

} // namespace cmcdress
