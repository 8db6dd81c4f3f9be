#include "doctest.h"

#include <cmath>
#include <complex>

#include "cmcdress/cylinder.hpp"
#include "cmcdress/errors.hpp"
#include "cmcdress/iwasawa.hpp"
#include "cmcdress/random_loops.hpp"

using namespace cmcdress;

namespace {

double loop_distance(const TwistedLoop& a, const TwistedLoop& b) {
    return (a - b).norm_inf();
}

} // namespace

TEST_CASE("factorization recovers a constructed unitary-plus pair") {
    const int n = 48;
    auto f = random_unitary_loop(101, n);
    auto p = random_plus_loop(202, n);
    auto g = f * p;

    auto fac = iwasawa(g);
    CHECK(fac.residual < 1e-11);
    CHECK(fac.newton_iterations <= 10);
    CHECK(loop_distance(fac.plus, p) < 1e-10);
    CHECK(loop_distance(fac.unitary, f) < 1e-10);
    CHECK(fac.unitary.unitarity_defect_on_circle() < 1e-10);
    CHECK(fac.plus.is_plus());
    Mat2 p0 = fac.plus.coeff(0);
    CHECK(std::abs(p0.c) < 1e-12);
    CHECK(std::real(p0.a) > 0.0);
    CHECK(std::abs(std::imag(p0.a)) < 1e-12);
}

TEST_CASE("factors multiply back to the input") {
    auto g = random_unitary_loop(7, 40) * random_plus_loop(8, 40, 0.45, 0.5);
    auto fac = iwasawa(g);
    CHECK(loop_distance(multiply_to_degree(fac.unitary, fac.plus, g.degree()), g) < 1e-10);
}

TEST_CASE("plus factor ignores a unitary left multiplier") {
    auto x = random_unitary_loop(31, 40) * random_plus_loop(32, 40);
    auto f = random_unitary_loop(33, 40);
    auto a = iwasawa(x);
    auto b = iwasawa(f * x);
    CHECK(loop_distance(a.plus, b.plus) < 1e-9);
    CHECK(loop_distance(b.unitary, multiply_to_degree(f, a.unitary, 40)) < 1e-8);
}

TEST_CASE("unitary input factors as itself times identity") {
    auto f = random_unitary_loop(55, 48);
    auto fac = iwasawa(f);
    CHECK(loop_distance(fac.plus, TwistedLoop::identity(48)) < 1e-10);
    CHECK(loop_distance(fac.unitary, f) < 1e-10);
}

TEST_CASE("normalized plus input factors as identity times itself") {
    auto p = random_plus_loop(56, 48);
    auto fac = iwasawa(p);
    CHECK(loop_distance(fac.unitary, TwistedLoop::identity(48)) < 1e-10);
    CHECK(loop_distance(fac.plus, p) < 1e-10);
}

TEST_CASE("vacuum generators factor trivially") {
    auto cyl = make_cylinder(0.5, 0.5, 64);
    auto fac = iwasawa(cyl.U0);
    CHECK(loop_distance(fac.unitary, cyl.U0) < 1e-9);
    CHECK(loop_distance(fac.plus, TwistedLoop::identity(64)) < 1e-9);
}

TEST_CASE("loops singular on the circle are rejected") {
    TwistedLoop g = TwistedLoop::identity(8);
    g.set_coeff(2, Mat2::diag(-1.0, 0.0));  // e11 = 1 - lambda^2 vanishes at 1
    CHECK_THROWS_AS(iwasawa(g), NumericError);
    CHECK(min_singular_on_circle(TwistedLoop::identity(8)) == doctest::Approx(1.0));
}

TEST_CASE("normalization rotates the value at zero into the triangular group") {
    auto p = random_plus_loop(77, 24);
    // Untwisted rotation of a plus loop keeps it plus but moves (0) out of B.
    const double c = std::cos(0.7);
    const double s = std::sin(0.7);
    Mat2 rot{Complex(c, 0.0), Complex(s, 0.1), Complex(-s, 0.1), Complex(c, 0.0)};
    rot = rot * (1.0 / std::sqrt(std::abs(rot.det())));
    auto moved = constant_times(rot, p);
    auto norm = normalize_to_B(moved);
    Mat2 w0 = norm.loop.coeff(0);
    CHECK(std::abs(w0.c) < 1e-13);
    CHECK(std::real(w0.a) > 0.0);
    CHECK(std::abs(std::imag(w0.a)) < 1e-13);
    CHECK(std::real(w0.d) > 0.0);
    CHECK(std::abs(std::imag(w0.d)) < 1e-13);
    CHECK(loop_distance(constant_times(norm.rotation, moved), norm.loop) == 0.0);
}

TEST_CASE("plus inverse matches the circle inverse") {
    auto p = random_plus_loop(9, 32);
    auto x = plus_inverse(p);
    CHECK(x.is_plus());
    CHECK(loop_distance(multiply_to_degree(p, x, 32), TwistedLoop::identity(32)) < 1e-11);
}

TEST_CASE("forced small Toeplitz sections still converge through refinement") {
    auto g = random_unitary_loop(61, 40) * random_plus_loop(62, 40);
    IwasawaOptions opts;
    opts.toeplitz_rows = 12;
    auto fac = iwasawa(g, opts);
    CHECK(fac.residual < 1e-11);
    auto ref = iwasawa(g);
    CHECK(loop_distance(fac.plus, ref.plus) < 1e-9);
}

TEST_CASE("a batch of random pairs factors accurately") {
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_unitary_loop(1000 + trial, 64);
        auto p = random_plus_loop(2000 + trial, 64);
        auto fac = iwasawa(f * p);
        CHECK(loop_distance(fac.plus, p) < 1e-9);
        CHECK(loop_distance(fac.unitary, f) < 1e-9);
    }
}
