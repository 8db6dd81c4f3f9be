#include "cmcdress/mat2.hpp"

namespace cmcdress {

Mat2 exp_traceless(const Mat2& x) {
    const Complex mu2 = -x.det();
    const Complex mu = std::sqrt(mu2);
    Complex ch, sh;
    if (std::abs(mu) < 1e-6) {
        ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0;
        sh = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
    } else {
        ch = std::cosh(mu);
        sh = std::sinh(mu) / mu;
    }
    return Mat2::identity() * ch + x * sh;
}

Mat2 spinor_of_point(const Vec3& r) {
    const Complex half_i(0.0, -0.5);
    return half_i * (kSigma1 * Complex(r.x) + kSigma2 * Complex(r.y) + kSigma3 * Complex(r.z));
}

Vec3 point_of_spinor(const Mat2& m, double* defect) {
    // Traceless anti-Hermitian part of m.
    const Mat2 skew = (m - m.adjoint()) * Complex(0.5);
    const Complex half_tr = skew.trace() * 0.5;
    const Mat2 clean{skew.a - half_tr, skew.b, skew.c, skew.d - half_tr};
    if (defect != nullptr) *defect = (m - clean).norm_inf();
    const Complex i2(0.0, 2.0);
    const Complex u = i2 * clean.b;  // x - i y
    const Complex v = i2 * clean.c;  // x + i y
    Vec3 r;
    r.x = 0.5 * (u + v).real();
    r.y = 0.5 * (v - u).imag();
    r.z = (i2 * clean.a).real();
    return r;
}

} // namespace cmcdress
