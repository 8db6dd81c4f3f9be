#include "cmcdress/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cmcdress/errors.hpp"

namespace cmcdress {

namespace {

Window enlarged_to_origin(const Window& w) {
    return {std::min(w.m0, 0), std::max(w.m1, 0), std::min(w.n0, 0), std::max(w.n1, 0)};
}

double relative(double err, double scale) { return err / std::max(1.0, scale); }

} // namespace

DressedLattice::DressedLattice(CylinderData cylinder, Window window)
    : cyl_(std::move(cylinder)), win_(window) {
    if (win_.m1 < win_.m0 || win_.n1 < win_.n0)
        throw ValidationError("lattice window is empty");
    const std::size_t count =
        static_cast<std::size_t>(win_.width()) * static_cast<std::size_t>(win_.height());
    frames_.assign(count, TwistedLoop(0, true));
    plus_.assign(count, TwistedLoop(0, true));
}

std::size_t DressedLattice::index(int m, int n) const {
    if (!win_.contains(m, n))
        throw ValidationError("site (" + std::to_string(m) + ", " + std::to_string(n) +
                              ") outside the lattice window");
    return static_cast<std::size_t>(n - win_.n0) * static_cast<std::size_t>(win_.width()) +
           static_cast<std::size_t>(m - win_.m0);
}

const TwistedLoop& DressedLattice::frame(int m, int n) const { return frames_[index(m, n)]; }
const TwistedLoop& DressedLattice::plus(int m, int n) const { return plus_[index(m, n)]; }

void DressedLattice::set_site(int m, int n, TwistedLoop frame, TwistedLoop plus) {
    const std::size_t i = index(m, n);
    frames_[i] = std::move(frame);
    plus_[i] = std::move(plus);
}

DressedLattice DressedLattice::restricted(const Window& window) const {
    DressedLattice out(cyl_, window);
    for (int n = window.n0; n <= window.n1; ++n)
        for (int m = window.m0; m <= window.m1; ++m)
            out.set_site(m, n, frame(m, n), plus(m, n));
    return out;
}

DressStep dress_step(const TwistedLoop& frame, const TwistedLoop& plus,
                     const TwistedLoop& generator, const IwasawaOptions& options) {
    const int d = frame.degree();
    auto fac = iwasawa(multiply_to_degree(plus, generator, d), options);
    return {multiply_to_degree(frame, fac.unitary, d), std::move(fac.plus), fac.residual};
}

DressedLattice build_lattice(const CylinderData& cylinder, const TwistedLoop& seed,
                             const Window& window, const LatticeBuildOptions& options) {
    const int d = cylinder.U0.degree();
    if (!seed.is_plus(1e-8))
        throw ValidationError("dressing seed must be a plus loop");
    TwistedLoop h = seed.degree() == d ? seed : seed.truncated(d);
    const BNormalization norm = normalize_to_B(h);

    const Window full = enlarged_to_origin(window);
    DressedLattice lat(cylinder, full);
    lat.set_site(0, 0, TwistedLoop::identity(d), norm.loop);

    const TwistedLoop u_fwd = cylinder.U0;
    const TwistedLoop u_bwd = cylinder.U0.star();
    const TwistedLoop v_fwd = cylinder.V0;
    const TwistedLoop v_bwd = cylinder.V0.star();

    const auto walk_u = [&](int n) {
        for (int m = 1; m <= full.m1; ++m) {
            auto s = dress_step(lat.frame(m - 1, n), lat.plus(m - 1, n), u_fwd,
                                options.factorization);
            lat.set_site(m, n, std::move(s.frame), std::move(s.plus));
        }
        for (int m = -1; m >= full.m0; --m) {
            auto s = dress_step(lat.frame(m + 1, n), lat.plus(m + 1, n), u_bwd,
                                options.factorization);
            lat.set_site(m, n, std::move(s.frame), std::move(s.plus));
        }
    };
    const auto walk_v = [&](int m) {
        for (int n = 1; n <= full.n1; ++n) {
            auto s = dress_step(lat.frame(m, n - 1), lat.plus(m, n - 1), v_fwd,
                                options.factorization);
            lat.set_site(m, n, std::move(s.frame), std::move(s.plus));
        }
        for (int n = -1; n >= full.n0; --n) {
            auto s = dress_step(lat.frame(m, n + 1), lat.plus(m, n + 1), v_bwd,
                                options.factorization);
            lat.set_site(m, n, std::move(s.frame), std::move(s.plus));
        }
    };

    if (options.column_first) {
        walk_v(0);
        for (int n = full.n0; n <= full.n1; ++n) walk_u(n);
    } else {
        walk_u(0);
        for (int m = full.m0; m <= full.m1; ++m) walk_v(m);
    }

    if (full.m0 != window.m0 || full.m1 != window.m1 || full.n0 != window.n0 ||
        full.n1 != window.n1)
        return lat.restricted(window);
    return lat;
}

DressStep factor_site(const CylinderData& cylinder, const TwistedLoop& seed, int m, int n,
                      const IwasawaOptions& options) {
    const int d = cylinder.U0.degree();
    TwistedLoop h = seed.degree() == d ? seed : seed.truncated(d);
    auto fac = iwasawa(multiply_to_degree(h, vacuum_frame(cylinder, m, n), d), options);
    return {std::move(fac.unitary), std::move(fac.plus), fac.residual};
}

namespace {

struct BandMatrices {
    Mat2 lo, mid, hi;  // coefficients at -1, 0, +1
    double tail;
};

BandMatrices banded_transition(const DressedLattice& lat, const TwistedLoop& from,
                               const TwistedLoop& to, const LaurentSeries& delta) {
    // Transitions act on the right, F_next = F T, so T = F^{-1} F_next; frames
    // are unitary, making the inverse a star.
    const int d = lat.degree();
    const TwistedLoop trans = multiply_to_degree(from.star(), to, d);
    const TwistedLoop banded = trans.scalar_multiplied(delta);
    return {banded.coeff(-1), banded.coeff(0), banded.coeff(1), banded.tail_norm(2)};
}

} // namespace

EdgeCoefficients extract_u_edge(const DressedLattice& lattice, int m, int n,
                                double structure_tol) {
    const double r1 = lattice.cylinder().constants.r1;
    const BandMatrices b = banded_transition(lattice, lattice.frame(m, n),
                                             lattice.frame(m + 1, n),
                                             lattice.cylinder().delta_plus);
    const Complex p = b.lo.b / r1;
    const Complex alpha = b.mid.a;
    if (std::abs(p) < 1e-12)
        throw NumericError("u edge metric coefficient vanished");
    double res = b.tail;
    res = std::max(res, std::abs(b.lo.c - r1 / p));
    res = std::max(res, std::abs(b.hi.b + r1 / p));
    res = std::max(res, std::abs(b.hi.c + r1 * p));
    res = std::max(res, std::abs(b.mid.d - std::conj(alpha)));
    res = std::max(res, std::max(std::abs(b.lo.a), std::abs(b.lo.d)));
    res = std::max(res, std::max(std::abs(b.hi.a), std::abs(b.hi.d)));
    res = std::max(res, std::max(std::abs(b.mid.b), std::abs(b.mid.c)));
    if (res > structure_tol)
        throw ValidationError("u edge at (" + std::to_string(m) + ", " + std::to_string(n) +
                              ") does not fit the band template (residual " +
                              std::to_string(res) + "); frames are not an extended frame");
    return {p, alpha, res};
}

EdgeCoefficients extract_v_edge(const DressedLattice& lattice, int m, int n,
                                double structure_tol) {
    const double r2 = lattice.cylinder().constants.r2;
    const Complex ir2(0.0, r2);
    const BandMatrices b = banded_transition(lattice, lattice.frame(m, n),
                                             lattice.frame(m, n + 1),
                                             lattice.cylinder().delta_minus);
    const Complex q = b.lo.b / ir2;
    const Complex beta = b.mid.a;
    if (std::abs(q) < 1e-12)
        throw NumericError("v edge metric coefficient vanished");
    double res = b.tail;
    res = std::max(res, std::abs(b.lo.c - ir2 / q));
    res = std::max(res, std::abs(b.hi.b - ir2 / q));
    res = std::max(res, std::abs(b.hi.c - ir2 * q));
    res = std::max(res, std::abs(b.mid.d - std::conj(beta)));
    res = std::max(res, std::max(std::abs(b.lo.a), std::abs(b.lo.d)));
    res = std::max(res, std::max(std::abs(b.hi.a), std::abs(b.hi.d)));
    res = std::max(res, std::max(std::abs(b.mid.b), std::abs(b.mid.c)));
    if (res > structure_tol)
        throw ValidationError("v edge at (" + std::to_string(m) + ", " + std::to_string(n) +
                              ") does not fit the band template (residual " +
                              std::to_string(res) + "); frames are not an extended frame");
    return {q, beta, res};
}

const EdgeCoefficients& LaxField::u_edge(int m, int n) const {
    if (m < window.m0 || m >= window.m1 || n < window.n0 || n > window.n1)
        throw ValidationError("u edge index outside the lattice window");
    return u[static_cast<std::size_t>(n - window.n0) *
                 static_cast<std::size_t>(window.width() - 1) +
             static_cast<std::size_t>(m - window.m0)];
}

const EdgeCoefficients& LaxField::v_edge(int m, int n) const {
    if (m < window.m0 || m > window.m1 || n < window.n0 || n >= window.n1)
        throw ValidationError("v edge index outside the lattice window");
    return v[static_cast<std::size_t>(n - window.n0) *
                 static_cast<std::size_t>(window.width()) +
             static_cast<std::size_t>(m - window.m0)];
}

LaxField extract_lax(const DressedLattice& lattice, double structure_tol) {
    const Window& w = lattice.window();
    if (w.width() < 2 || w.height() < 2)
        throw ValidationError("lattice window too small to carry edges");
    LaxField lax;
    lax.window = w;
    lax.r1 = lattice.cylinder().constants.r1;
    lax.r2 = lattice.cylinder().constants.r2;
    lax.u.reserve(static_cast<std::size_t>(w.width() - 1) * static_cast<std::size_t>(w.height()));
    lax.v.reserve(static_cast<std::size_t>(w.width()) * static_cast<std::size_t>(w.height() - 1));
    for (int n = w.n0; n <= w.n1; ++n)
        for (int m = w.m0; m < w.m1; ++m)
            lax.u.push_back(extract_u_edge(lattice, m, n, structure_tol));
    for (int n = w.n0; n < w.n1; ++n)
        for (int m = w.m0; m <= w.m1; ++m)
            lax.v.push_back(extract_v_edge(lattice, m, n, structure_tol));
    return lax;
}

namespace {

// Laurent polynomials supported on [-1, 1] and [-2, 2], enough for the
// zero-curvature product check.
struct Band3 {
    Mat2 lo, mid, hi;
};

Band3 u_band(Complex p, Complex alpha, double r1) {
    return {Mat2{0.0, r1 * p, r1 / p, 0.0},
            Mat2::diag(alpha, std::conj(alpha)),
            Mat2{0.0, -r1 / p, -r1 * p, 0.0}};
}

Band3 v_band(Complex q, Complex beta, double r2) {
    const Complex ir2(0.0, r2);
    return {Mat2{0.0, ir2 * q, ir2 / q, 0.0},
            Mat2::diag(beta, std::conj(beta)),
            Mat2{0.0, ir2 / q, ir2 * q, 0.0}};
}

std::array<Mat2, 5> band_product(const Band3& a, const Band3& b) {
    std::array<Mat2, 5> out{};
    const Mat2 am[3] = {a.lo, a.mid, a.hi};
    const Mat2 bm[3] = {b.lo, b.mid, b.hi};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(i + j)] =
            out[static_cast<std::size_t>(i + j)] + am[i] * bm[j];
    return out;
}

} // namespace

double IntegrabilityReport::worst() const {
    return std::max({zero_curvature, closing, alpha_update, beta_update, sinh_gordon,
                     band_template, metric_compat, metric_reality, unitarity});
}

IntegrabilityReport verify_integrability(const DressedLattice& lattice) {
    // A generous structure bound here: template damage is reported as a
    // residual instead of aborting the diagnostic.
    const LaxField lax = extract_lax(lattice, 1e9);
    const Window& w = lax.window;
    const double r1 = lax.r1;
    const double r2 = lax.r2;
    IntegrabilityReport rep;

    for (const auto& e : lax.u) {
        rep.band_template = std::max(rep.band_template, e.residual);
        double reality = relative(std::abs(std::imag(e.metric)), std::abs(e.metric));
        if (std::real(e.metric) <= 0.0) reality = 1.0;
        rep.metric_reality = std::max(rep.metric_reality, reality);
        const Complex p = e.metric;
        const double compat = std::abs(std::norm(e.potential) +
                                       r1 * r1 * std::real((p - 1.0 / p) * (p - 1.0 / p)) - 1.0);
        rep.metric_compat = std::max(rep.metric_compat, compat);
    }
    for (const auto& e : lax.v) {
        rep.band_template = std::max(rep.band_template, e.residual);
        double reality = relative(std::abs(std::imag(e.metric)), std::abs(e.metric));
        if (std::real(e.metric) <= 0.0) reality = 1.0;
        rep.metric_reality = std::max(rep.metric_reality, reality);
        const Complex q = e.metric;
        const double compat = std::abs(std::norm(e.potential) +
                                       r2 * r2 * std::real((q - 1.0 / q) * (q - 1.0 / q)) - 1.0);
        rep.metric_compat = std::max(rep.metric_compat, compat);
    }

    for (int n = w.n0; n < w.n1; ++n) {
        for (int m = w.m0; m < w.m1; ++m) {
            const Complex p = lax.u_edge(m, n).metric;
            const Complex pu = lax.u_edge(m, n + 1).metric;
            const Complex q = lax.v_edge(m, n).metric;
            const Complex qu = lax.v_edge(m + 1, n).metric;
            const Complex a = lax.u_edge(m, n).potential;
            const Complex au = lax.u_edge(m, n + 1).potential;
            const Complex b = lax.v_edge(m, n).potential;
            const Complex bu = lax.v_edge(m + 1, n).potential;

            rep.closing = std::max(rep.closing,
                                   relative(std::abs(p * pu - q * qu), std::abs(p * pu)));

            const Complex mix = q / p + p / q;
            const Complex mixu = qu / p + p / qu;
            const Complex lhs_a = mix * au;
            const Complex rhs_a = Complex(0.0, 1.0) * (r1 / r2) * (p / pu - pu / p) * std::conj(b) +
                                  mixu * std::conj(a);
            rep.alpha_update = std::max(rep.alpha_update,
                                        relative(std::abs(lhs_a - rhs_a), std::abs(lhs_a)));

            const Complex lhs_b = mix * bu;
            const Complex rhs_b = Complex(0.0, 1.0) * (r2 / r1) * (qu / q - q / qu) * std::conj(a) +
                                  mixu * std::conj(b);
            rep.beta_update = std::max(rep.beta_update,
                                       relative(std::abs(lhs_b - rhs_b), std::abs(lhs_b)));

            const Complex lhs_sg = au * b - bu * a;
            const Complex rhs_sg = Complex(0.0, r1 * r2) *
                                   (pu * q + qu * p - 1.0 / (pu * q) - 1.0 / (qu * p));
            rep.sinh_gordon = std::max(rep.sinh_gordon,
                                       relative(std::abs(lhs_sg - rhs_sg),
                                                std::max(std::abs(lhs_sg), std::abs(rhs_sg))));

            const auto right = band_product(u_band(p, a, r1), v_band(qu, bu, r2));
            const auto up = band_product(v_band(q, b, r2), u_band(pu, au, r1));
            double zcc = 0.0;
            for (std::size_t i = 0; i < right.size(); ++i)
                zcc = std::max(zcc, (right[i] - up[i]).norm_inf());
            rep.zero_curvature = std::max(rep.zero_curvature, relative(zcc, 1.0));
        }
    }

    for (int n = w.n0; n <= w.n1; ++n)
        for (int m = w.m0; m <= w.m1; ++m)
            rep.unitarity = std::max(rep.unitarity,
                                     lattice.frame(m, n).unitarity_defect_on_circle());
    return rep;
}

double OmegaField::at(int m, int n) const {
    if (m < window.m0 || m > window.m1 || n < window.n0 || n > window.n1)
        throw ValidationError("site outside the omega field window");
    return omega[static_cast<std::size_t>(n - window.n0) *
                     static_cast<std::size_t>(window.width()) +
                 static_cast<std::size_t>(m - window.m0)];
}

OmegaField reconstruct_omega(const LaxField& lax, double omega_origin) {
    const Window& w = lax.window;
    OmegaField field;
    field.window = w;
    field.omega.assign(static_cast<std::size_t>(w.width()) * static_cast<std::size_t>(w.height()),
                       0.0);
    const int rm = w.contains(0, 0) ? 0 : w.m0;
    const int rn = w.contains(0, 0) ? 0 : w.n0;
    const auto at = [&](int m, int n) -> double& {
        return field.omega[static_cast<std::size_t>(n - w.n0) *
                               static_cast<std::size_t>(w.width()) +
                           static_cast<std::size_t>(m - w.m0)];
    };
    double imag_mass = 0.0;
    const auto edge_log = [&](const EdgeCoefficients& e) {
        const Complex l = std::log(e.metric);
        imag_mass = std::max(imag_mass, std::abs(std::imag(l)));
        return std::real(l);
    };

    at(rm, rn) = omega_origin;
    for (int n = rn + 1; n <= w.n1; ++n)
        at(rm, n) = -2.0 * edge_log(lax.v_edge(rm, n - 1)) - at(rm, n - 1);
    for (int n = rn - 1; n >= w.n0; --n)
        at(rm, n) = -2.0 * edge_log(lax.v_edge(rm, n)) - at(rm, n + 1);
    for (int n = w.n0; n <= w.n1; ++n) {
        for (int m = rm + 1; m <= w.m1; ++m)
            at(m, n) = -2.0 * edge_log(lax.u_edge(m - 1, n)) - at(m - 1, n);
        for (int m = rm - 1; m >= w.m0; --m)
            at(m, n) = -2.0 * edge_log(lax.u_edge(m, n)) - at(m + 1, n);
    }

    for (int n = w.n0; n <= w.n1; ++n)
        for (int m = w.m0; m < w.m1; ++m)
            field.residual = std::max(field.residual,
                                      std::abs(edge_log(lax.u_edge(m, n)) +
                                               0.5 * (at(m, n) + at(m + 1, n))));
    for (int n = w.n0; n < w.n1; ++n)
        for (int m = w.m0; m <= w.m1; ++m)
            field.residual = std::max(field.residual,
                                      std::abs(edge_log(lax.v_edge(m, n)) +
                                               0.5 * (at(m, n) + at(m, n + 1))));
    field.residual = std::max(field.residual, imag_mass);
    return field;
}

} // namespace cmcdress
