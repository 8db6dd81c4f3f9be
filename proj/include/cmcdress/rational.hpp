#pragma once

#include <complex>
#include <vector>

namespace cmcdress {

using Complex = std::complex<double>;

// Polynomial with ascending coefficients, c[i] the coefficient of x^i.
struct Poly {
    std::vector<Complex> c;

    Poly() = default;
    explicit Poly(std::vector<Complex> coeffs) : c(std::move(coeffs)) {}
    static Poly one() { return Poly({Complex(1.0)}); }
    static Poly from_roots(const std::vector<Complex>& roots, Complex scale = 1.0);

    int degree() const;  // -1 for the zero polynomial
    bool is_zero() const { return degree() < 0; }
    Complex evaluate(Complex x) const;
    Poly derivative() const;
    Poly trimmed(double rel_tol = 1e-13) const;  // drops trailing near-zero coefficients

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(Complex s) const;
    double norm_inf() const;
};

// Roots with multiplicity via the companion matrix; constants have none.
std::vector<Complex> poly_roots(const Poly& p);

struct RootCluster {
    Complex location;  // cluster mean
    int multiplicity;
};
std::vector<RootCluster> cluster_roots(std::vector<Complex> roots, double rel_tol = 1e-8);

// Clusters the roots of p with multiplicities confirmed by a winding count of
// p'/p, which survives the eigenvalue splatter of multiple roots.
std::vector<RootCluster> polynomial_root_clusters(const Poly& p, double cluster_tol = 1e-8);

enum class Variable { lambda, nu };

struct RationalFunction {
    Poly num;
    Poly den{Poly::one()};
    Variable var{Variable::lambda};

    Complex evaluate(Complex x) const;
    bool is_zero() const { return num.is_zero(); }
    // Cancels numerator and denominator roots that coincide within the
    // clustering tolerance.
    RationalFunction reduced(double cluster_tol = 1e-8) const;
};

// Zeros (order > 0) and poles (order < 0) away from x = 0.
struct DivisorEntry {
    Complex location;
    int order;
};
std::vector<DivisorEntry> divisor(const RationalFunction& f, double cluster_tol = 1e-8);

// Order of f at x = 0: positive for zeros, negative for poles.
int order_at_origin(const RationalFunction& f, double rel_tol = 1e-12);

// f(nu) -> f(lambda^2) by exact coefficient interleave.
RationalFunction substitute_square(const RationalFunction& f_nu);

// Least-squares fit of unit-circle samples by l(x)/q(x) with l a Laurent
// polynomial of degree |n| <= num_degree and q a polynomial of degree
// den_degree. Poles are the fitted denominator roots.
struct PadeFit {
    double residual{0.0};  // worst relative sample mismatch
    std::vector<Complex> poles;
};
PadeFit pade_fit(const std::vector<Complex>& samples, int num_degree, int den_degree);

} // namespace cmcdress
