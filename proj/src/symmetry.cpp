#include "cmcdress/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmcdress/errors.hpp"

namespace cmcdress {

namespace {

const Complex kI(0.0, 1.0);

bool in_u_range(const Window& w, int m, int n) {
    return m >= w.m0 && m < w.m1 && n >= w.n0 && n <= w.n1;
}

bool in_v_range(const Window& w, int m, int n) {
    return m >= w.m0 && m <= w.m1 && n >= w.n0 && n < w.n1;
}

double wrap_phase(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    return phi;
}

} // namespace

const char* to_string(SymmetryStage stage) {
    switch (stage) {
        case SymmetryStage::metric: return "metric";
        case SymmetryStage::phase: return "phase";
        case SymmetryStage::frame: return "frame";
    }
    return "unknown";
}

SymmetryResult detect_symmetry(const DressedLattice& lattice, const LaxField& lax, int k, int l,
                               const SymmetryOptions& options) {
    if (k == 0 && l == 0) throw ValidationError("shift (0, 0) carries no symmetry to test");
    const Window& win = lattice.window();
    const int testable =
        std::max(0, win.width() - std::abs(k)) * std::max(0, win.height() - std::abs(l));
    if (testable < options.min_sites)
        throw ValidationError("window too small: " + std::to_string(testable) +
                              " testable sites for the shift, need " +
                              std::to_string(options.min_sites));
    if (!win.contains(0, 0) || !win.contains(k, l))
        throw ValidationError("window must contain the origin and the shift site");

    SymmetryResult result;
    result.certificate.k = k;
    result.certificate.l = l;

    for (int n = win.n0; n <= win.n1; ++n) {
        for (int m = win.m0; m <= win.m1; ++m) {
            if (in_u_range(win, m, n) && in_u_range(win, m + k, n + l)) {
                const Complex p0 = lax.u_edge(m, n).metric;
                const Complex p1 = lax.u_edge(m + k, n + l).metric;
                result.metric_residual = std::max(
                    result.metric_residual, std::abs(p1 - p0) / std::max(1.0, std::abs(p0)));
            }
            if (in_v_range(win, m, n) && in_v_range(win, m + k, n + l)) {
                const Complex q0 = lax.v_edge(m, n).metric;
                const Complex q1 = lax.v_edge(m + k, n + l).metric;
                result.metric_residual = std::max(
                    result.metric_residual, std::abs(q1 - q0) / std::max(1.0, std::abs(q0)));
            }
        }
    }
    if (result.metric_residual > options.accept_tol) {
        result.failed_stage = SymmetryStage::metric;
        result.reason = "metric stage: p and q are not invariant under the shift";
        return result;
    }

    Complex mean(0.0, 0.0);
    std::vector<Complex> ratios;
    auto collect = [&](const Complex& a0, const Complex& a1, int m, int n) {
        if (std::abs(a0) < options.alpha_floor || std::abs(a1) < options.alpha_floor) return;
        Complex rho = a1 / a0;
        rho /= std::abs(rho);
        if ((m + n) % 2 != 0) rho = std::conj(rho);
        ratios.push_back(rho);
        mean += rho;
    };
    for (int n = win.n0; n <= win.n1; ++n) {
        for (int m = win.m0; m <= win.m1; ++m) {
            if (in_u_range(win, m, n) && in_u_range(win, m + k, n + l))
                collect(lax.u_edge(m, n).potential, lax.u_edge(m + k, n + l).potential, m, n);
            if (in_v_range(win, m, n) && in_v_range(win, m + k, n + l))
                collect(lax.v_edge(m, n).potential, lax.v_edge(m + k, n + l).potential, m, n);
        }
    }
    if (ratios.empty())
        throw NumericError("phase indeterminate: all potentials are below the floor");
    mean /= static_cast<double>(ratios.size());
    if (std::abs(mean) < 0.5) {
        result.failed_stage = SymmetryStage::phase;
        result.reason = "phase stage: potential ratios are incoherent";
        result.phase_residual = 1.0 - std::abs(mean);
        return result;
    }
    // phases within tolerance of the wrap are reported as 0, not 2 pi - eps
    double phi = wrap_phase(std::arg(mean));
    if (2.0 * std::numbers::pi - phi < options.accept_tol) phi = 0.0;
    const Complex unit = std::exp(kI * phi);
    for (const Complex& rho : ratios)
        result.phase_residual = std::max(result.phase_residual, std::abs(rho - unit));
    if (result.phase_residual > options.accept_tol) {
        result.failed_stage = SymmetryStage::phase;
        result.reason = "phase stage: potential ratios scatter around the fitted phase";
        return result;
    }
    result.certificate.phase = phi;

    const Mat2 kmat = Mat2::diag(std::exp(kI * (phi / 2.0)), std::exp(-kI * (phi / 2.0)));
    const Mat2 kinv = Mat2::diag(std::exp(-kI * (phi / 2.0)), std::exp(kI * (phi / 2.0)));
    const TwistedLoop chi = times_constant(lattice.frame(k, l), kmat);
    const int degree = lattice.degree();
    for (int n = win.n0; n <= win.n1; ++n) {
        for (int m = win.m0; m <= win.m1; ++m) {
            if (!win.contains(m + k, n + l)) continue;
            const Mat2& kpow = (m + n) % 2 == 0 ? kinv : kmat;
            const TwistedLoop mapped =
                times_constant(multiply_to_degree(chi, lattice.frame(m, n), degree), kpow);
            result.frame_residual = std::max(
                result.frame_residual, (lattice.frame(m + k, n + l) - mapped).norm_inf());
        }
    }
    result.certificate.max_residual = result.frame_residual;
    if (result.frame_residual > options.accept_tol) {
        result.failed_stage = SymmetryStage::frame;
        result.reason = "frame stage: the transformation law fails";
        return result;
    }

    result.certificate.chi = chi;
    result.certificate.holomorphy_estimate = chi.analyticity_radius();
    result.accepted = true;
    return result;
}

EuclideanMotion euclidean_motion(const SymmetryCertificate& certificate) {
    const Mat2 at_one = certificate.chi.evaluate(1.0);
    if (unitarity_defect(at_one) > 1e-6)
        throw NumericError("chi(1) is not unitary; the certificate carries no motion");
    EuclideanMotion motion;
    motion.rotation = at_one;
    motion.translation =
        point_of_spinor(certificate.chi.theta_derivative_at_one() * at_one.inverse());
    return motion;
}

Vec3 apply_motion(const EuclideanMotion& motion, const Vec3& x) {
    const Mat2 rotated = motion.rotation * spinor_of_point(x) * motion.rotation.inverse();
    return point_of_spinor(rotated) + motion.translation;
}

EuclideanMotion compose(const EuclideanMotion& second, const EuclideanMotion& first) {
    EuclideanMotion motion;
    motion.rotation = second.rotation * first.rotation;
    const Mat2 carried =
        second.rotation * spinor_of_point(first.translation) * second.rotation.inverse();
    motion.translation = point_of_spinor(carried) + second.translation;
    return motion;
}

bool is_period(const SymmetryCertificate& certificate, double tol) {
    const Mat2 at_one = certificate.chi.evaluate(1.0);
    const Mat2 eye = Mat2::identity();
    const double value_gap =
        std::min((at_one - eye).norm_inf(), (at_one + eye).norm_inf());
    const double derivative_gap = certificate.chi.theta_derivative_at_one().norm_inf();
    return value_gap < tol && derivative_gap < tol;
}

} // namespace cmcdress
