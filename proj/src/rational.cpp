#include "cmcdress/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cmcdress/errors.hpp"

namespace cmcdress {

Poly Poly::from_roots(const std::vector<Complex>& roots, Complex scale) {
    Poly p({scale});
    for (const Complex& r : roots) p = p * Poly({-r, Complex(1.0)});
    return p;
}

int Poly::degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[static_cast<std::size_t>(i)] != Complex(0.0)) return i;
    return -1;
}

Complex Poly::evaluate(Complex x) const {
    Complex value(0.0);
    for (std::size_t i = c.size(); i-- > 0;) value = value * x + c[i];
    return value;
}

Poly Poly::derivative() const {
    if (c.size() <= 1) return Poly();
    Poly d;
    d.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

Poly Poly::trimmed(double rel_tol) const {
    const double floor = rel_tol * norm_inf();
    Poly t = *this;
    while (!t.c.empty() && std::abs(t.c.back()) <= floor) t.c.pop_back();
    return t;
}

Poly Poly::operator+(const Poly& o) const {
    Poly s;
    s.c.resize(std::max(c.size(), o.c.size()));
    for (std::size_t i = 0; i < s.c.size(); ++i) {
        if (i < c.size()) s.c[i] += c[i];
        if (i < o.c.size()) s.c[i] += o.c[i];
    }
    return s;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Complex(-1.0); }

Poly Poly::operator*(const Poly& o) const {
    if (c.empty() || o.c.empty()) return Poly();
    Poly p;
    p.c.assign(c.size() + o.c.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < o.c.size(); ++j) p.c[i + j] += c[i] * o.c[j];
    return p;
}

Poly Poly::operator*(Complex s) const {
    Poly p = *this;
    for (Complex& x : p.c) x *= s;
    return p;
}

double Poly::norm_inf() const {
    double m = 0.0;
    for (const Complex& x : c) m = std::max(m, std::abs(x));
    return m;
}

std::vector<Complex> poly_roots(const Poly& p) {
    const Poly t = p.trimmed();
    if (t.is_zero()) throw ValidationError("the zero polynomial has no root set");
    const int n = t.degree();
    if (n == 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    const Complex lead = t.c[static_cast<std::size_t>(n)];
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -t.c[static_cast<std::size_t>(i)] / lead;
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericError("companion eigensolver failed");
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return roots;
}

std::vector<RootCluster> cluster_roots(std::vector<Complex> roots, double rel_tol) {
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<RootCluster> clusters;
    for (const Complex& r : roots) {
        bool placed = false;
        for (RootCluster& cl : clusters) {
            if (std::abs(r - cl.location) <= rel_tol * std::max(1.0, std::abs(cl.location))) {
                cl.location = (cl.location * static_cast<double>(cl.multiplicity) + r) /
                              static_cast<double>(cl.multiplicity + 1);
                ++cl.multiplicity;
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({r, 1});
    }
    return clusters;
}

namespace {

struct RootProbe {
    bool ok{false};
    double count{0.0};
    Complex first_moment{0.0};
};

// (1/2 pi i) of the contour integrals of p'/p and x p'/p: the number of
// enclosed roots and their sum.
RootProbe probe_roots(const Poly& p, const Poly& dp, Complex center, double radius) {
    const std::size_t nodes = 1024;
    RootProbe probe;
    Complex n0(0.0), n1(0.0);
    for (std::size_t j = 0; j < nodes; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                             static_cast<double>(nodes);
        const Complex e = std::polar(1.0, theta);
        const Complex x = center + radius * e;
        const Complex pv = p.evaluate(x);
        if (!(std::abs(pv) > 0.0)) return probe;
        const Complex w = dp.evaluate(x) / pv;
        n0 += w * e;
        n1 += w * x * e;
    }
    const double f = radius / static_cast<double>(nodes);
    probe.ok = true;
    probe.count = (n0 * f).real();
    probe.first_moment = n1 * f;
    return probe;
}

} // namespace

std::vector<RootCluster> polynomial_root_clusters(const Poly& p, double cluster_tol) {
    const Poly t = p.trimmed();
    if (t.degree() <= 0) return {};
    const std::vector<Complex> roots = poly_roots(t);
    // multiple roots splatter by roughly eps^(1/multiplicity), far beyond the
    // nominal tolerance, so gather them with a coarser radius first
    std::vector<RootCluster> clusters = cluster_roots(roots, std::max(cluster_tol, 1e-5));
    if (clusters.size() == roots.size()) return clusters;

    const Poly dp = t.derivative();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        RootCluster& cl = clusters[i];
        if (cl.multiplicity < 2) continue;
        const double scale = std::max(1.0, std::abs(cl.location));
        double cap = scale * 1e6;
        for (std::size_t j = 0; j < clusters.size(); ++j) {
            if (j == i) continue;
            cap = std::min(cap, std::abs(clusters[j].location - cl.location));
        }
        const double radius = std::min(1e-4 * scale, cap / 3.0);
        if (!(radius > 0.0)) continue;
        const RootProbe probe = probe_roots(t, dp, cl.location, radius);
        if (probe.ok && std::abs(probe.count - cl.multiplicity) < 0.1)
            cl.location = probe.first_moment / static_cast<double>(cl.multiplicity);
    }
    return clusters;
}

Complex RationalFunction::evaluate(Complex x) const {
    const Complex d = den.evaluate(x);
    if (d == Complex(0.0)) throw NumericError("rational function evaluated at a pole");
    return num.evaluate(x) / d;
}

RationalFunction RationalFunction::reduced(double cluster_tol) const {
    if (den.trimmed().is_zero()) throw ValidationError("rational function with zero denominator");
    if (num.trimmed().is_zero()) return {Poly(), Poly::one(), var};
    auto num_roots = poly_roots(num);
    auto den_roots = poly_roots(den);
    std::vector<bool> den_used(den_roots.size(), false);
    std::vector<Complex> num_kept;
    for (const Complex& r : num_roots) {
        bool cancelled = false;
        for (std::size_t j = 0; j < den_roots.size(); ++j) {
            if (den_used[j]) continue;
            if (std::abs(r - den_roots[j]) <= cluster_tol * std::max(1.0, std::abs(r))) {
                den_used[j] = true;
                cancelled = true;
                break;
            }
        }
        if (!cancelled) num_kept.push_back(r);
    }
    std::vector<Complex> den_kept;
    for (std::size_t j = 0; j < den_roots.size(); ++j)
        if (!den_used[j]) den_kept.push_back(den_roots[j]);
    const Complex num_lead = num.trimmed().c.back();
    const Complex den_lead = den.trimmed().c.back();
    RationalFunction r;
    r.num = Poly::from_roots(num_kept, num_lead);
    r.den = Poly::from_roots(den_kept, den_lead);
    r.var = var;
    return r;
}

std::vector<DivisorEntry> divisor(const RationalFunction& f, double cluster_tol) {
    const RationalFunction r = f.reduced(cluster_tol);
    std::vector<DivisorEntry> entries;
    auto add = [&](const std::vector<RootCluster>& clusters, int sign) {
        for (const RootCluster& cl : clusters) {
            if (std::abs(cl.location) <= cluster_tol) continue;  // origin handled separately
            bool merged = false;
            for (DivisorEntry& e : entries) {
                if (std::abs(e.location - cl.location) <=
                    cluster_tol * std::max(1.0, std::abs(e.location))) {
                    e.order += sign * cl.multiplicity;
                    merged = true;
                    break;
                }
            }
            if (!merged) entries.push_back({cl.location, sign * cl.multiplicity});
        }
    };
    if (!r.num.is_zero()) add(polynomial_root_clusters(r.num, cluster_tol), +1);
    add(polynomial_root_clusters(r.den, cluster_tol), -1);
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [](const DivisorEntry& e) { return e.order == 0; }),
                  entries.end());
    std::sort(entries.begin(), entries.end(), [](const DivisorEntry& a, const DivisorEntry& b) {
        return std::abs(a.location) < std::abs(b.location);
    });
    return entries;
}

namespace {

int leading_index(const Poly& p, double rel_tol) {
    const double floor = rel_tol * p.norm_inf();
    for (std::size_t i = 0; i < p.c.size(); ++i)
        if (std::abs(p.c[i]) > floor) return static_cast<int>(i);
    return -1;
}

} // namespace

int order_at_origin(const RationalFunction& f, double rel_tol) {
    const int num_order = leading_index(f.num, rel_tol);
    const int den_order = leading_index(f.den, rel_tol);
    if (den_order < 0) throw ValidationError("rational function with zero denominator");
    if (num_order < 0) throw ValidationError("the zero function has no order at the origin");
    return num_order - den_order;
}

RationalFunction substitute_square(const RationalFunction& f_nu) {
    if (f_nu.var != Variable::nu)
        throw ValidationError("substitute_square expects a function of nu");
    auto interleave = [](const Poly& p) {
        Poly q;
        q.c.assign(p.c.empty() ? 0 : 2 * p.c.size() - 1, Complex(0.0));
        for (std::size_t i = 0; i < p.c.size(); ++i) q.c[2 * i] = p.c[i];
        return q;
    };
    return {interleave(f_nu.num), interleave(f_nu.den), Variable::lambda};
}

PadeFit pade_fit(const std::vector<Complex>& samples, int num_degree, int den_degree) {
    const int G = static_cast<int>(samples.size());
    const int num_cols = 2 * num_degree + 1;
    const int den_cols = den_degree + 1;
    if (G < num_cols + den_cols) throw ValidationError("too few samples for the requested fit");
    // rows: f_j q(x_j) - l(x_j) = 0; unknowns: den coefficients then laurent coefficients
    Eigen::MatrixXcd system(G, num_cols + den_cols);
    for (int j = 0; j < G; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / G;
        const Complex x = std::polar(1.0, theta);
        Complex power(1.0);
        for (int d = 0; d < den_cols; ++d) {
            system(j, d) = samples[static_cast<std::size_t>(j)] * power;
            power *= x;
        }
        for (int n = -num_degree; n <= num_degree; ++n)
            system(j, den_cols + n + num_degree) = -std::pow(x, n);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system, Eigen::ComputeThinV);
    const Eigen::VectorXcd solution = svd.matrixV().col(num_cols + den_cols - 1);

    Poly den;
    den.c.assign(static_cast<std::size_t>(den_cols), Complex(0.0));
    for (int d = 0; d < den_cols; ++d) den.c[static_cast<std::size_t>(d)] = solution(d);

    PadeFit fit;
    double worst = 0.0, scale = 0.0;
    for (int j = 0; j < G; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / G;
        const Complex x = std::polar(1.0, theta);
        Complex l(0.0);
        for (int n = -num_degree; n <= num_degree; ++n)
            l += solution(den_cols + n + num_degree) * std::pow(x, n);
        const Complex q = den.evaluate(x);
        const Complex predicted = std::abs(q) > 1e-14 ? l / q : Complex(0.0);
        worst = std::max(worst, std::abs(samples[static_cast<std::size_t>(j)] - predicted));
        scale = std::max(scale, std::abs(samples[static_cast<std::size_t>(j)]));
    }
    fit.residual = worst / std::max(scale, 1e-30);
    const Poly trimmed = den.trimmed(1e-10);
    if (trimmed.degree() > 0)
        for (const Complex& r : poly_roots(trimmed)) fit.poles.push_back(r);
    return fit;
}

} // namespace cmcdress
