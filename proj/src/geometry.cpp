#include "cmcdress/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "cmcdress/errors.hpp"

namespace cmcdress {

namespace {

const Complex kI(0.0, 1.0);

Mat2 conjugated(const Mat2& g, const Mat2& x) { return g * x * g.inverse(); }

void print_float(std::ostream& out, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << buf;
}

} // namespace

Mat2 sym_spinor(const TwistedLoop& frame) {
    const Mat2 at_one = frame.evaluate(1.0);
    const Mat2 inv = at_one.inverse();
    return frame.theta_derivative_at_one() * inv + 0.5 * kI * at_one * kSigma3 * inv;
}

Vec3 sym_point(const TwistedLoop& frame, double* defect) {
    return point_of_spinor(sym_spinor(frame), defect);
}

const Vec3& DiscreteSurface::at(int m, int n) const {
    if (!window.contains(m, n)) throw ValidationError("surface point outside the window");
    return points[static_cast<std::size_t>(n - window.n0) * window.width() + (m - window.m0)];
}

DiscreteSurface build_surface(const DressedLattice& lattice) {
    DiscreteSurface surface;
    surface.window = lattice.window();
    surface.r1 = lattice.cylinder().constants.r1;
    surface.r2 = lattice.cylinder().constants.r2;
    surface.points.reserve(static_cast<std::size_t>(surface.window.width()) *
                           surface.window.height());
    for (int n = surface.window.n0; n <= surface.window.n1; ++n) {
        for (int m = surface.window.m0; m <= surface.window.m1; ++m) {
            double defect = 0.0;
            surface.points.push_back(sym_point(lattice.frame(m, n), &defect));
            surface.spinor_defect = std::max(surface.spinor_defect, defect);
        }
    }
    return surface;
}

Vec3 u_edge_vector(const DressedLattice& lattice, int m, int n) {
    const EdgeCoefficients edge = extract_u_edge(lattice, m, n);
    const double r1 = lattice.cylinder().constants.r1;
    const Complex p = edge.metric;
    const Complex alpha = edge.potential;
    const Complex diag = r1 * r1 * (p - 1.0 / p);
    const Mat2 core{diag, r1 * alpha, r1 * std::conj(alpha), -diag};
    const Mat2 spin = (-2.0 * kI * p) * conjugated(lattice.frame(m, n).evaluate(1.0), core);
    return point_of_spinor(spin);
}

Vec3 v_edge_vector(const DressedLattice& lattice, int m, int n) {
    const EdgeCoefficients edge = extract_v_edge(lattice, m, n);
    const double r2 = lattice.cylinder().constants.r2;
    const Complex q = edge.metric;
    const Complex beta = edge.potential;
    const Complex diag = r2 * r2 * (q + 1.0 / q);
    const Mat2 core{diag, kI * r2 * beta, -kI * r2 * std::conj(beta), -diag};
    const Complex scale = -2.0 * kI * q / (1.0 + 4.0 * r2 * r2);
    const Mat2 spin = scale * conjugated(lattice.frame(m, n).evaluate(1.0), core);
    return point_of_spinor(spin);
}

double u_edge_length(double r1, double p) { return 4.0 * r1 * p; }

double v_edge_length(double r2, double q) {
    return 4.0 * r2 * q / std::sqrt(1.0 + 4.0 * r2 * r2);
}

double EdgeCheckReport::worst() const {
    return std::max(std::max(u_vector, v_vector), std::max(u_length, v_length));
}

EdgeCheckReport verify_edges(const DressedLattice& lattice, const DiscreteSurface& surface) {
    const Window& win = lattice.window();
    const double r1 = lattice.cylinder().constants.r1;
    const double r2 = lattice.cylinder().constants.r2;
    EdgeCheckReport report;
    for (int n = win.n0; n <= win.n1; ++n) {
        for (int m = win.m0; m <= win.m1; ++m) {
            if (m < win.m1) {
                const Vec3 measured = surface.at(m + 1, n) - surface.at(m, n);
                const Vec3 closed = u_edge_vector(lattice, m, n);
                const double scale = std::max(1.0, closed.norm());
                report.u_vector =
                    std::max(report.u_vector, (measured - closed).norm() / scale);
                const double len =
                    u_edge_length(r1, extract_u_edge(lattice, m, n).metric.real());
                report.u_length =
                    std::max(report.u_length, std::abs(measured.norm() - len) / len);
            }
            if (n < win.n1) {
                const Vec3 measured = surface.at(m, n + 1) - surface.at(m, n);
                const Vec3 closed = v_edge_vector(lattice, m, n);
                const double scale = std::max(1.0, closed.norm());
                report.v_vector =
                    std::max(report.v_vector, (measured - closed).norm() / scale);
                const double len =
                    v_edge_length(r2, extract_v_edge(lattice, m, n).metric.real());
                report.v_length =
                    std::max(report.v_length, std::abs(measured.norm() - len) / len);
            }
        }
    }
    return report;
}

void export_obj(const DiscreteSurface& surface, std::ostream& out) {
    const int width = surface.window.width();
    const int height = surface.window.height();
    for (const Vec3& p : surface.points) {
        out << "v ";
        print_float(out, p.x);
        out << ' ';
        print_float(out, p.y);
        out << ' ';
        print_float(out, p.z);
        out << '\n';
    }
    for (int row = 0; row + 1 < height; ++row) {
        for (int col = 0; col + 1 < width; ++col) {
            const int base = row * width + col + 1;
            out << "f " << base << ' ' << base + 1 << ' ' << base + width + 1 << ' '
                << base + width << '\n';
        }
    }
    if (!out) throw IoError("failed to write OBJ stream");
}

void export_metric_csv(const LaxField& lax, std::ostream& out) {
    out << "m,n,len_u,len_v\n";
    for (int n = lax.window.n0; n < lax.window.n1; ++n) {
        for (int m = lax.window.m0; m < lax.window.m1; ++m) {
            out << m << ',' << n << ',';
            print_float(out, u_edge_length(lax.r1, lax.u_edge(m, n).metric.real()));
            out << ',';
            print_float(out, v_edge_length(lax.r2, lax.v_edge(m, n).metric.real()));
            out << '\n';
        }
    }
    if (!out) throw IoError("failed to write CSV stream");
}

} // namespace cmcdress
