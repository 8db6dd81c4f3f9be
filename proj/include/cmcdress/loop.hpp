#pragma once

#include <cstddef>
#include <vector>

#include "cmcdress/laurent.hpp"
#include "cmcdress/mat2.hpp"

namespace cmcdress {

// 2x2 matrix Laurent loop. When twisted, diagonal entries are even in lambda
// and off-diagonal entries odd, i.e. g(-lambda) = sigma3 g(lambda) sigma3.
class TwistedLoop {
public:
    TwistedLoop(int degree, bool twisted, double sample_radius = 1.0);

    static TwistedLoop identity(int degree, bool twisted = true);
    static TwistedLoop constant(const Mat2& value, int degree, bool twisted);
    static TwistedLoop from_samples(const std::vector<Mat2>& values, int degree, bool twisted,
                                    double sample_radius = 1.0);

    int degree() const { return e11_.degree(); }
    bool twisted() const { return twisted_; }
    double sample_radius() const { return e11_.sample_radius(); }

    const LaurentSeries& entry(int i, int j) const;
    LaurentSeries& entry(int i, int j);

    Mat2 coeff(int n) const;
    void set_coeff(int n, const Mat2& m);

    std::vector<Mat2> samples(std::size_t grid) const;
    Mat2 evaluate(Complex lambda) const;
    // Same value plus a trust flag: false when |lambda| leaves the annulus in
    // which the fitted coefficient decay supports the evaluation.
    struct Evaluation {
        Mat2 value;
        bool trusted;
    };
    Evaluation evaluate_checked(Complex lambda) const;

    // d/dtheta of g(e^{i theta}) at theta = 0.
    Mat2 theta_derivative_at_one() const;

    TwistedLoop truncated(int degree) const;
    TwistedLoop star() const;
    TwistedLoop inverse() const;  // pointwise on the circle; rejects near-singular loops
    LaurentSeries det() const;

    TwistedLoop operator+(const TwistedLoop& o) const;
    TwistedLoop operator-(const TwistedLoop& o) const;
    TwistedLoop operator*(const TwistedLoop& o) const;
    TwistedLoop scaled(Complex s) const;

    // Multiplies by a scalar series (same sample radius), degree preserved.
    TwistedLoop scalar_multiplied(const LaurentSeries& s) const;

    double norm_inf() const;
    double tail_norm(int from_degree) const;
    double parity_defect() const;
    double project_parity();  // returns the removed mass

    // Max unitarity defect of g(lambda) over the circle grid.
    double unitarity_defect_on_circle(std::size_t grid = 0) const;

    // Inner radius of the annulus of analyticity estimated from coefficient
    // decay (0 means entire on C* at working precision).
    double analyticity_radius() const;

    bool is_plus(double tol = 1e-9) const;  // negative-degree mass below tol

private:
    LaurentSeries e11_, e12_, e21_, e22_;
    bool twisted_;
};

TwistedLoop multiply_to_degree(const TwistedLoop& a, const TwistedLoop& b, int out_degree);

// Products with a constant matrix. The result keeps the twisted flag only
// when the constant is diagonal.
TwistedLoop constant_times(const Mat2& m, const TwistedLoop& g);
TwistedLoop times_constant(const TwistedLoop& g, const Mat2& m);

} // namespace cmcdress
