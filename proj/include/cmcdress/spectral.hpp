#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cmcdress/cylinder.hpp"
#include "cmcdress/rational.hpp"

namespace cmcdress {

// Conjugated generator S = h A h^{-1} of a plus loop h: trace zero, S^2 = I,
// entry a odd, entries b and c even; d = -a is implied.
struct SMatrix {
    LaurentSeries a{0}, b{0}, c{0};
    double residual{0.0};  // worst parity, trace and involution defect
};
SMatrix s_matrix(const TwistedLoop& seed, double tol = 1e-8);

// Odd polynomial sum_j coeffs[j] lambda^{2j+1} as a plus Laurent series.
LaurentSeries odd_polynomial(const std::vector<Complex>& coeffs, int degree);

// p_hat = (1 + e_k r1 (1/l - l))^|k| (1 + i e_l r2 (1/l + l))^|l| e^{f_plus}
// with its even and odd parts; alpha^2 - beta^2 must rebuild the delta product.
struct PhatTriple {
    LaurentSeries phat{0}, alpha_hat{0}, beta_hat{0};
    double identity_residual{0.0};
};
PhatTriple make_phat(int k, int l, const LatticeConstants& constants,
                     const LaurentSeries& f_plus);

struct SpectralData {
    RationalFunction a2, b2, c2;  // even rational functions of lambda
    LaurentSeries f_plus{0};
    int k{0}, l{0};
    LatticeConstants constants;
    PhatTriple functions;  // derived from (k, l, constants, f_plus)
};
// Validates the even-shift restriction and derives the p_hat triple.
SpectralData make_spectral_data(const RationalFunction& a2, const RationalFunction& b2,
                                const RationalFunction& c2, const LaurentSeries& f_plus, int k,
                                int l, const LatticeConstants& constants);

struct ConditionReport {
    std::string name;
    bool pass{false};
    double margin{0.0};
    std::string detail;
};

struct NecessaryReport {
    std::vector<ConditionReport> conditions;
    double a2_min{0.0}, a2_max{0.0};  // range of a2 over the unit circle
    bool all_pass{false};
};
// Sample-based test of the periodic-metric conditions on a2, b2, c2.
NecessaryReport check_necessary(const RationalFunction& a2, const RationalFunction& b2,
                                const RationalFunction& c2, double tol = 1e-8);

struct SufficientReport {
    std::vector<ConditionReport> conditions;
    bool all_pass{false};
};
SufficientReport check_sufficient(const SpectralData& data, double tol = 1e-8);

// chi = (alpha_hat I + beta_hat S) / (delta_plus^|k| delta_minus^|l|).
TwistedLoop build_chi_spectral(const SpectralData& data, const TwistedLoop& seed);

struct HyperellipticCurve {
    std::vector<Complex> branch_points;  // pairs (b, tau(b)) with |b| < 1
    int genus{0};
    Poly mu2;  // nu times the product of (nu - branch point)
};
// Branch points are the odd-order zeros and poles of a2(nu) away from 0.
HyperellipticCurve curve_from_a2(const RationalFunction& a2_nu, double cluster_tol = 1e-8);

struct DivisorRow {
    Complex location;
    int order_a2{0};
    int order_mu2{0};
    int order_f2{0};  // order of a2 / mu2
};
struct CurveCheckReport {
    std::vector<DivisorRow> divisor;
    bool meromorphic{false};     // every order of a2 / mu2 is even
    bool finite_at_zero{false};  // the square root of a2 / mu2 has no pole at 0
};
CurveCheckReport verify_a_on_curve(const RationalFunction& a2_nu,
                                   const HyperellipticCurve& curve);

// (1 / 2 pi i) of the contour integral of f over the circle, adaptive
// trapezoid with node doubling.
Complex winding_integral(Complex center, double radius,
                         const std::function<Complex(Complex)>& f);

struct ResidueEntry {
    std::string name;
    Complex location;
    double expected{0.0};
    Complex computed{0.0};
};
struct ResidueTable {
    std::vector<ResidueEntry> entries;
    Complex sum{0.0};
    double worst_error{0.0};
};
// Residues of omega = d log(alpha + beta) at the eight singular points.
ResidueTable omega_residues(const SpectralData& data);

struct CycleIntegral {
    Complex center{0.0};
    double radius{0.0};
    Complex value{0.0};
};
// Integrates omega around each branch pair with two-sheet tracking of mu;
// the values vanish for periodicity data.
std::vector<CycleIntegral> a_cycle_integrals(const SpectralData& data,
                                             const HyperellipticCurve& curve);

// Requires period-matrix machinery this library does not carry.
[[noreturn]] void b_cycle_condition(const SpectralData& data, const HyperellipticCurve& curve);

} // namespace cmcdress
