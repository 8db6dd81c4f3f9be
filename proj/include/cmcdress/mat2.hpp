#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace cmcdress {

using Complex = std::complex<double>;

// Row-major complex 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    Complex a{0.0}, b{0.0}, c{0.0}, d{0.0};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diag(Complex x, Complex y) { return {x, 0.0, 0.0, y}; }

    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator*(Complex s) const { return {a * s, b * s, c * s, d * s}; }

    Complex det() const { return a * d - b * c; }
    Complex trace() const { return a + d; }
    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 conj() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }
    Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
    Mat2 inverse() const {
        const Complex dt = det();
        const Complex s = 1.0 / dt;
        return {d * s, -b * s, -c * s, a * s};
    }

    double norm_inf() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

inline Mat2 operator*(Complex s, const Mat2& m) { return m * s; }

inline double unitarity_defect(const Mat2& m) {
    return (m * m.adjoint() - Mat2::identity()).norm_inf();
}

// exp(A) for traceless A via cosh(mu) I + sinh(mu)/mu A with mu^2 = -det A.
Mat2 exp_traceless(const Mat2& x);

inline const Mat2 kSigma1{0.0, 1.0, 1.0, 0.0};
inline const Mat2 kSigma2{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0};
inline const Mat2 kSigma3{1.0, 0.0, 0.0, -1.0};
// Off-diagonal exchange matrix, the generator the discrete cylinder is built from.
inline const Mat2 kOffDiag{0.0, 1.0, 1.0, 0.0};

struct Vec3 {
    double x{0.0}, y{0.0}, z{0.0};

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Spinor model of R^3: r maps to -(i/2)(x sigma1 + y sigma2 + z sigma3).
Mat2 spinor_of_point(const Vec3& r);

// Inverse of spinor_of_point. The skew part of the input is used; a large
// deviation from the traceless anti-Hermitian form indicates bad input and is
// reported through the optional defect output.
Vec3 point_of_spinor(const Mat2& m, double* defect = nullptr);

} // namespace cmcdress
