#include "cmcdress/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "cmcdress/errors.hpp"
#include "cmcdress/fft.hpp"
#include "cmcdress/iwasawa.hpp"

namespace cmcdress {

namespace {

const Complex kI(0.0, 1.0);

Complex circle_node(std::size_t j, std::size_t grid) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
    return std::polar(1.0, theta);
}

Complex ipow(Complex base, int exponent) {
    Complex out(1.0);
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

Complex delta_plus_sq_at(double r1, Complex lam) {
    const Complex l2 = lam * lam;
    return Complex(1.0 + 2.0 * r1 * r1) - r1 * r1 * (l2 + 1.0 / l2);
}

Complex delta_minus_sq_at(double r2, Complex lam) {
    const Complex l2 = lam * lam;
    return Complex(1.0 + 2.0 * r2 * r2) + r2 * r2 * (l2 + 1.0 / l2);
}

std::string format_complex(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

double minus_mass(const LaurentSeries& f) {
    double mass = 0.0;
    for (int n = -f.degree(); n < 0; ++n) mass += std::abs(f.coeff(n));
    return mass;
}

struct CircleValues {
    std::vector<Complex> v;
    double scale{1.0};     // max(1, sup |f|)
    bool circle_pole{false};
};

CircleValues sample_rational(const RationalFunction& f, std::size_t grid) {
    CircleValues out;
    out.v.resize(grid);
    const double den_floor = 1e-12 * std::max(1.0, f.den.norm_inf());
    for (std::size_t j = 0; j < grid; ++j) {
        const Complex lam = circle_node(j, grid);
        const Complex den = f.den.evaluate(lam);
        if (std::abs(den) < den_floor) {
            out.circle_pole = true;
            out.v[j] = Complex(0.0);
            continue;
        }
        out.v[j] = f.num.evaluate(lam) / den;
        out.scale = std::max(out.scale, std::abs(out.v[j]));
    }
    return out;
}

// d log(alpha + beta) / d lambda through the closed product form of p_hat.
Complex omega_at(const SpectralData& data, const LaurentSeries& f_plus_prime, Complex lam) {
    const double r1 = data.constants.r1;
    const double r2 = data.constants.r2;
    const Complex l2 = lam * lam;
    Complex w = f_plus_prime.evaluate(lam);
    if (data.k != 0) {
        const double ek = data.k > 0 ? 1.0 : -1.0;
        const Complex u = 1.0 / lam - lam;
        const Complex du = -1.0 / l2 - 1.0;
        w += static_cast<double>(std::abs(data.k)) * ek * r1 * du / (1.0 + ek * r1 * u);
        const Complex dsq = delta_plus_sq_at(r1, lam);
        const Complex ddsq = -r1 * r1 * (2.0 * lam - 2.0 / (l2 * lam));
        w -= 0.5 * static_cast<double>(std::abs(data.k)) * ddsq / dsq;
    }
    if (data.l != 0) {
        const double el = data.l > 0 ? 1.0 : -1.0;
        const Complex s = 1.0 / lam + lam;
        const Complex ds = -1.0 / l2 + 1.0;
        w += static_cast<double>(std::abs(data.l)) * kI * el * r2 * ds / (1.0 + kI * el * r2 * s);
        const Complex dsq = delta_minus_sq_at(r2, lam);
        const Complex ddsq = r2 * r2 * (2.0 * lam - 2.0 / (l2 * lam));
        w -= 0.5 * static_cast<double>(std::abs(data.l)) * ddsq / dsq;
    }
    return w;
}

ConditionReport make_condition(std::string name, bool pass, double margin, std::string detail) {
    ConditionReport c;
    c.name = std::move(name);
    c.pass = pass;
    c.margin = margin;
    c.detail = std::move(detail);
    return c;
}

std::string pole_scan_detail(const LaurentSeries& f, int num_degree) {
    const std::size_t grid =
        std::max<std::size_t>(256, fft::next_pow2(static_cast<std::size_t>(2 * f.degree() + 2)));
    const std::vector<Complex> samples = f.samples(grid);
    // smallest denominator degree that fits keeps the pole list free of
    // spurious cancelling factors
    for (int den_degree = 1; den_degree <= 8; ++den_degree) {
        const PadeFit fit = pade_fit(samples, num_degree, den_degree);
        if (fit.residual > 1e-6 || fit.poles.empty()) continue;
        std::string out = "poles near";
        const std::size_t shown = std::min<std::size_t>(fit.poles.size(), 4);
        for (std::size_t i = 0; i < shown; ++i) out += " " + format_complex(fit.poles[i]);
        return out;
    }
    return "tail does not decay and no low-degree rational fit matches";
}

} // namespace

SMatrix s_matrix(const TwistedLoop& seed, double tol) {
    if (!seed.twisted()) throw ValidationError("dressing seed must be twisted");
    if (!seed.is_plus(1e-8)) throw ValidationError("dressing seed must be a plus loop");
    const TwistedLoop inv = plus_inverse(seed);
    const int out_degree = seed.degree() + inv.degree();
    const std::size_t grid =
        fft::next_pow2(static_cast<std::size_t>(seed.degree() + inv.degree() + out_degree + 1));
    const std::vector<Mat2> vh = seed.samples(grid);
    const std::vector<Mat2> vi = inv.samples(grid);
    std::vector<Mat2> prod(grid);
    for (std::size_t j = 0; j < grid; ++j) prod[j] = vh[j] * kOffDiag * vi[j];
    const TwistedLoop s = TwistedLoop::from_samples(prod, out_degree, false, seed.sample_radius());

    SMatrix out;
    out.a = s.entry(0, 0);
    out.b = s.entry(0, 1);
    out.c = s.entry(1, 0);
    const double scale = std::max(1.0, s.norm_inf());
    double defect = (out.a + s.entry(1, 1)).norm_inf();
    defect = std::max(defect, out.a.parity_defect(Parity::odd));
    defect = std::max(defect, out.b.parity_defect(Parity::even));
    defect = std::max(defect, out.c.parity_defect(Parity::even));
    std::vector<Complex> va = out.a.samples(grid);
    std::vector<Complex> vb = out.b.samples(grid);
    std::vector<Complex> vc = out.c.samples(grid);
    double involution = 0.0;
    for (std::size_t j = 0; j < grid; ++j)
        involution = std::max(involution, std::abs(va[j] * va[j] + vb[j] * vc[j] - 1.0));
    defect = std::max(defect, involution / std::max(1.0, scale * scale));
    out.residual = defect / scale;
    if (out.residual > tol)
        throw NumericError("conjugated generator failed its structure checks");
    out.a.project_parity(Parity::odd);
    out.b.project_parity(Parity::even);
    out.c.project_parity(Parity::even);
    return out;
}

LaurentSeries odd_polynomial(const std::vector<Complex>& coeffs, int degree) {
    const int top = coeffs.empty() ? 0 : 2 * static_cast<int>(coeffs.size()) - 1;
    if (top > degree)
        throw ValidationError("odd polynomial does not fit the requested degree");
    LaurentSeries f(degree);
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        f.set_coeff(2 * static_cast<int>(j) + 1, coeffs[j]);
    return f;
}

PhatTriple make_phat(int k, int l, const LatticeConstants& constants,
                     const LaurentSeries& f_plus) {
    if (k == 0 && l == 0) throw ValidationError("shift must be nonzero");
    const double f_scale = std::max(1.0, f_plus.norm_inf());
    if (f_plus.parity_defect(Parity::odd) > 1e-12 * f_scale)
        throw ValidationError("f_plus must be odd");
    if (minus_mass(f_plus) > 1e-12 * f_scale)
        throw ValidationError("f_plus must have no negative powers");

    const int ak = std::abs(k);
    const int al = std::abs(l);
    const int degree = ak + al + 96;
    const std::size_t grid = fft::next_pow2(static_cast<std::size_t>(2 * degree + 2));
    const double ek = k > 0 ? 1.0 : -1.0;
    const double el = l > 0 ? 1.0 : -1.0;
    std::vector<Complex> values(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const Complex lam = circle_node(j, grid);
        const Complex u = 1.0 / lam - lam;
        const Complex s = 1.0 / lam + lam;
        values[j] = ipow(1.0 + ek * constants.r1 * u, ak) *
                    ipow(1.0 + kI * el * constants.r2 * s, al) *
                    std::exp(f_plus.evaluate(lam));
    }
    PhatTriple out;
    out.phat = LaurentSeries::from_samples(values, degree);
    out.alpha_hat = out.phat;
    out.alpha_hat.project_parity(Parity::even);
    out.beta_hat = out.phat;
    out.beta_hat.project_parity(Parity::odd);

    const std::vector<Complex> va = out.alpha_hat.samples(grid);
    const std::vector<Complex> vb = out.beta_hat.samples(grid);
    double num = 0.0;
    double den = 1.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const Complex lam = circle_node(j, grid);
        const Complex target = ipow(delta_plus_sq_at(constants.r1, lam), ak) *
                               ipow(delta_minus_sq_at(constants.r2, lam), al);
        num = std::max(num, std::abs(va[j] * va[j] - vb[j] * vb[j] - target));
        den = std::max(den, std::abs(target));
    }
    out.identity_residual = num / den;
    return out;
}

SpectralData make_spectral_data(const RationalFunction& a2, const RationalFunction& b2,
                                const RationalFunction& c2, const LaurentSeries& f_plus, int k,
                                int l, const LatticeConstants& constants) {
    if (k % 2 != 0 || l % 2 != 0) throw ValidationError("shift components must be even");
    if (k == 0 && l == 0) throw ValidationError("shift must be nonzero");
    if (a2.var != Variable::lambda || b2.var != Variable::lambda || c2.var != Variable::lambda)
        throw ValidationError("a2, b2, c2 must be functions of lambda");
    if (!(constants.lambda_plus > 1.0) || !(constants.lambda_minus > 1.0))
        throw ValidationError("constants are missing the derived singularity locations");
    SpectralData data;
    data.a2 = a2;
    data.b2 = b2;
    data.c2 = c2;
    data.f_plus = f_plus;
    data.k = k;
    data.l = l;
    data.constants = constants;
    data.functions = make_phat(k, l, constants, f_plus);
    return data;
}

NecessaryReport check_necessary(const RationalFunction& a2, const RationalFunction& b2,
                                const RationalFunction& c2, double tol) {
    if (a2.var != Variable::lambda || b2.var != Variable::lambda || c2.var != Variable::lambda)
        throw ValidationError("conditions are stated for functions of lambda");
    const std::size_t grid = 512;
    const CircleValues sa = sample_rational(a2, grid);
    const CircleValues sb = sample_rational(b2, grid);
    const CircleValues sc = sample_rational(c2, grid);

    NecessaryReport report;
    report.conditions.push_back(
        make_condition("a-rational", true, 0.0, "stored as polynomial quotients"));

    double even_defect = 0.0;
    for (const CircleValues* s : {&sa, &sb, &sc})
        for (std::size_t j = 0; j < grid / 2; ++j)
            even_defect =
                std::max(even_defect, std::abs(s->v[j + grid / 2] - s->v[j]) / s->scale);
    report.conditions.push_back(make_condition("b-even", even_defect <= tol, even_defect,
                                               "max |f(-lambda) - f(lambda)| over samples"));

    double product_defect = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const Complex lhs = (1.0 - sa.v[j]) * (1.0 - sa.v[j]);
        const Complex rhs = sb.v[j] * sc.v[j];
        product_defect =
            std::max(product_defect, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    report.conditions.push_back(make_condition("c-product", product_defect <= tol, product_defect,
                                               "(1 - a2)^2 against b2 c2"));

    double imag_defect = 0.0;
    double re_min = 0.0;
    double re_max = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        imag_defect = std::max(imag_defect, std::abs(sa.v[j].imag()));
        const double re = sa.v[j].real();
        if (j == 0) {
            re_min = re;
            re_max = re;
        } else {
            re_min = std::min(re_min, re);
            re_max = std::max(re_max, re);
        }
    }
    report.a2_min = re_min;
    report.a2_max = re_max;
    const bool range_ok = !sa.circle_pole && imag_defect <= tol && re_min >= -tol &&
                          re_max <= 1.0 + tol;
    const double range_margin = std::min(re_min, 1.0 - re_max);
    report.conditions.push_back(make_condition(
        "d-range", range_ok, range_margin,
        sa.circle_pole ? "a2 has a pole on the unit circle" : "a2 real with values in [0, 1]"));

    double conj_defect = 0.0;
    for (std::size_t j = 0; j < grid; ++j)
        conj_defect = std::max(conj_defect, std::abs(sc.v[j] - std::conj(sb.v[j])) /
                                                std::max(1.0, std::abs(sb.v[j])));
    report.conditions.push_back(make_condition("e-conjugate", conj_defect <= tol, conj_defect,
                                               "c2 against the circle conjugate of b2"));

    if (a2.is_zero()) {
        report.conditions.push_back(
            make_condition("zero-order", true, 0.0, "a2 vanishes identically"));
    } else {
        const int order = order_at_origin(a2);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "order %d at lambda = 0", order);
        report.conditions.push_back(make_condition(
            "zero-order", order > 0 && order % 4 == 2, static_cast<double>(order), buf));
    }

    report.all_pass = true;
    for (const ConditionReport& c : report.conditions) report.all_pass = report.all_pass && c.pass;
    return report;
}

SufficientReport check_sufficient(const SpectralData& data, double tol) {
    const int bound = 2 * (std::abs(data.k) + std::abs(data.l)) + 4;
    const LaurentSeries& alpha = data.functions.alpha_hat;
    const LaurentSeries& beta = data.functions.beta_hat;
    const LaurentSeries beta2 = multiply_to_degree(beta, beta, 2 * beta.degree());

    SufficientReport report;
    const double alpha_tail = alpha.tail_norm(bound + 1) / std::max(1.0, alpha.norm_inf());
    report.conditions.push_back(make_condition(
        "a-alpha-polynomial", alpha_tail <= tol, alpha_tail,
        alpha_tail <= tol ? "Laurent tail below tolerance" : pole_scan_detail(alpha, bound)));
    const double beta2_tail = beta2.tail_norm(bound + 1) / std::max(1.0, beta2.norm_inf());
    report.conditions.push_back(make_condition(
        "a-beta2-polynomial", beta2_tail <= tol, beta2_tail,
        beta2_tail <= tol ? "Laurent tail below tolerance" : pole_scan_detail(beta2, bound)));

    const double alpha_star =
        (alpha.star() - alpha).norm_inf() / std::max(1.0, alpha.norm_inf());
    const double beta2_star =
        (beta2.star() - beta2).norm_inf() / std::max(1.0, beta2.norm_inf());
    const double reality = std::max(alpha_star, beta2_star);
    report.conditions.push_back(make_condition("b-reality", reality <= tol, reality,
                                               "star defect of alpha and beta squared"));

    const std::size_t grid = 512;
    const std::vector<Complex> vb2 = beta2.samples(grid);
    double re_max = vb2[0].real();
    for (const Complex& v : vb2) re_max = std::max(re_max, v.real());
    report.conditions.push_back(make_condition("c-beta2-nonpositive", re_max <= tol, -re_max,
                                               "max real part of beta squared on the circle"));

    const struct {
        const char* name;
        const RationalFunction* f;
    } products[] = {{"d-beta2-a2", &data.a2}, {"d-beta2-b2", &data.b2}, {"d-beta2-c2", &data.c2}};
    for (const auto& entry : products) {
        if (entry.f->is_zero()) {
            report.conditions.push_back(
                make_condition(entry.name, true, 0.0, "product vanishes identically"));
            continue;
        }
        const int num_degree = std::max(entry.f->num.degree(), 0);
        const int out_bound = bound + num_degree;
        const std::size_t pgrid = fft::next_pow2(
            static_cast<std::size_t>(2 * (2 * beta.degree() + num_degree) + 2));
        const CircleValues fv = sample_rational(*entry.f, pgrid);
        if (fv.circle_pole) {
            report.conditions.push_back(
                make_condition(entry.name, false, 1.0, "factor has a pole on the unit circle"));
            continue;
        }
        const std::vector<Complex> bv = beta2.samples(pgrid);
        std::vector<Complex> prod(pgrid);
        for (std::size_t j = 0; j < pgrid; ++j) prod[j] = bv[j] * fv.v[j];
        const LaurentSeries series =
            LaurentSeries::from_samples(prod, static_cast<int>(pgrid) / 2 - 1);
        const double ptail = series.tail_norm(out_bound + 1) / std::max(1.0, series.norm_inf());
        report.conditions.push_back(make_condition(entry.name, ptail <= tol, ptail,
                                                   "Laurent tail of the product"));
    }

    {
        ConditionReport square = make_condition("f-square-disk", true, 0.0, "");
        const RationalFunction reduced = data.b2.reduced();
        const double radius = data.constants.r_min + 1e-9;
        if (reduced.num.is_zero()) {
            square.pass = false;
            square.detail = "b2 vanishes identically";
        } else {
            int disk_zeros = 0;
            if (reduced.num.degree() > 0) {
                for (const RootCluster& cl : polynomial_root_clusters(reduced.num)) {
                    if (std::abs(cl.location) > radius) continue;
                    disk_zeros += cl.multiplicity;
                    if (cl.multiplicity % 4 != 0) {
                        square.pass = false;
                        square.detail = "zero of order " + std::to_string(cl.multiplicity) +
                                        " near " + format_complex(cl.location);
                    }
                }
            }
            if (reduced.den.degree() > 0) {
                for (const RootCluster& cl : polynomial_root_clusters(reduced.den)) {
                    if (std::abs(cl.location) > radius) continue;
                    square.pass = false;
                    square.detail = "pole near " + format_complex(cl.location);
                }
            }
            if (square.pass)
                square.detail = std::to_string(disk_zeros) + " zeros counted in the disk";
        }
        report.conditions.push_back(square);
    }

    report.all_pass = true;
    for (const ConditionReport& c : report.conditions) report.all_pass = report.all_pass && c.pass;
    return report;
}

TwistedLoop build_chi_spectral(const SpectralData& data, const TwistedLoop& seed) {
    const SMatrix s = s_matrix(seed);
    const LaurentSeries& alpha = data.functions.alpha_hat;
    const LaurentSeries& beta = data.functions.beta_hat;
    const int ak = std::abs(data.k);
    const int al = std::abs(data.l);
    const int degree = std::max(data.constants.degree, ak + al + 32);
    const std::size_t grid = fft::next_pow2(
        static_cast<std::size_t>(alpha.degree() + s.b.degree() + degree + 1));

    const std::vector<Complex> va = alpha.samples(grid);
    const std::vector<Complex> vb = beta.samples(grid);
    const std::vector<Complex> sa = s.a.samples(grid);
    const std::vector<Complex> sb = s.b.samples(grid);
    const std::vector<Complex> sc = s.c.samples(grid);
    std::vector<Mat2> values(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const Complex lam = circle_node(j, grid);
        const Complex div = ipow(delta_plus_sq_at(data.constants.r1, lam), ak / 2) *
                            ipow(delta_minus_sq_at(data.constants.r2, lam), al / 2);
        if (std::abs(div) < 1e-12)
            throw NumericError("delta product vanishes on the unit circle");
        values[j] = Mat2{va[j] + vb[j] * sa[j], vb[j] * sb[j], vb[j] * sc[j],
                         va[j] - vb[j] * sa[j]} *
                    (1.0 / div);
    }
    TwistedLoop chi = TwistedLoop::from_samples(values, degree, true, 1.0);
    const double parity = chi.parity_defect() / std::max(1.0, chi.norm_inf());
    chi.project_parity();

    const double unitarity = chi.unitarity_defect_on_circle();
    LaurentSeries det = chi.det();
    det.set_coeff(0, det.coeff(0) - 1.0);
    const double det_defect = det.norm_inf();
    if (std::max({parity, unitarity, det_defect}) > 1e-6)
        throw NumericError("spectral symmetry loop failed its consistency checks");
    return chi;
}

HyperellipticCurve curve_from_a2(const RationalFunction& a2_nu, double cluster_tol) {
    if (a2_nu.var != Variable::nu) throw ValidationError("expected a function of nu");
    if (a2_nu.is_zero()) throw ValidationError("a2 must not vanish identically");

    std::vector<Complex> inside;
    std::vector<Complex> outside;
    bool any_odd = false;
    for (const DivisorEntry& e : divisor(a2_nu, cluster_tol)) {
        if (e.order % 2 == 0) continue;
        any_odd = true;
        if (std::abs(std::abs(e.location) - 1.0) <= std::max(cluster_tol, 1e-9))
            throw NumericError("odd-order point on the unit circle at " +
                               format_complex(e.location));
        (std::abs(e.location) < 1.0 ? inside : outside).push_back(e.location);
    }

    if (any_odd) {
        const std::size_t grid = 256;
        double imag_defect = 0.0;
        double scale = 1.0;
        for (std::size_t j = 0; j < grid; ++j) {
            const Complex nu = circle_node(j, grid);
            const Complex den = a2_nu.den.evaluate(nu);
            if (std::abs(den) < 1e-12 * std::max(1.0, a2_nu.den.norm_inf())) continue;
            const Complex v = a2_nu.num.evaluate(nu) / den;
            imag_defect = std::max(imag_defect, std::abs(v.imag()));
            scale = std::max(scale, std::abs(v));
        }
        if (imag_defect > 1e-8 * scale)
            throw ValidationError("a2 is not real on the unit circle");
    }
    if (inside.size() != outside.size())
        throw NumericError("odd-order points do not pair under reflection");
    const auto lex = [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(inside.begin(), inside.end(), lex);

    HyperellipticCurve curve;
    for (const Complex& b : inside) {
        const Complex mirror = 1.0 / std::conj(b);
        std::size_t best = outside.size();
        double best_dist = 0.0;
        for (std::size_t i = 0; i < outside.size(); ++i) {
            const double dist = std::abs(outside[i] - mirror);
            if (best == outside.size() || dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        if (best == outside.size() || best_dist > 1e-6 * std::max(1.0, std::abs(mirror)))
            throw NumericError("no reflected partner for branch point " + format_complex(b));
        curve.branch_points.push_back(b);
        curve.branch_points.push_back(outside[best]);
        outside.erase(outside.begin() + static_cast<std::ptrdiff_t>(best));
    }
    curve.genus = static_cast<int>(curve.branch_points.size() / 2);
    std::vector<Complex> roots = curve.branch_points;
    roots.insert(roots.begin(), Complex(0.0));
    curve.mu2 = Poly::from_roots(roots);
    return curve;
}

CurveCheckReport verify_a_on_curve(const RationalFunction& a2_nu,
                                   const HyperellipticCurve& curve) {
    if (a2_nu.var != Variable::nu) throw ValidationError("expected a function of nu");

    std::vector<DivisorRow> rows;
    rows.push_back(DivisorRow{Complex(0.0), order_at_origin(a2_nu), 1, 0});
    const auto row_for = [&rows](Complex location) -> DivisorRow& {
        for (DivisorRow& r : rows)
            if (std::abs(r.location - location) <= 1e-6 * std::max(1.0, std::abs(location)))
                return r;
        rows.push_back(DivisorRow{location, 0, 0, 0});
        return rows.back();
    };
    for (const DivisorEntry& e : divisor(a2_nu)) row_for(e.location).order_a2 = e.order;
    for (const Complex& b : curve.branch_points) row_for(b).order_mu2 += 1;

    CurveCheckReport report;
    for (DivisorRow& r : rows) {
        r.order_f2 = r.order_a2 - r.order_mu2;
        if (r.order_f2 % 2 != 0)
            throw NumericError("a2 / mu2 has odd order at " + format_complex(r.location) +
                               "; a does not define a function on the curve");
    }
    std::sort(rows.begin(), rows.end(), [](const DivisorRow& x, const DivisorRow& y) {
        return std::abs(x.location) < std::abs(y.location);
    });
    report.divisor = rows;
    report.meromorphic = true;
    report.finite_at_zero = rows.front().order_f2 >= 0;
    return report;
}

Complex winding_integral(Complex center, double radius,
                         const std::function<Complex(Complex)>& f) {
    if (!(radius > 0.0)) throw ValidationError("contour radius must be positive");
    Complex previous(0.0);
    for (std::size_t nodes = 512; nodes <= 8192; nodes *= 2) {
        Complex acc(0.0);
        for (std::size_t j = 0; j < nodes; ++j) {
            const Complex e = circle_node(j, nodes);
            const Complex v = f(center + radius * e);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericError("contour passes through a singular point");
            acc += v * e;
        }
        acc *= radius / static_cast<double>(nodes);
        if (nodes > 512 && std::abs(acc - previous) < 1e-10) return acc;
        previous = acc;
    }
    throw NumericError("contour integral did not stabilize");
}

ResidueTable omega_residues(const SpectralData& data) {
    const double lp = data.constants.lambda_plus;
    const double lm = data.constants.lambda_minus;
    const double half_k = 0.5 * static_cast<double>(data.k);
    const double half_l = 0.5 * static_cast<double>(data.l);
    const struct {
        const char* name;
        Complex location;
        double expected;
    } points[] = {
        {"lambda_plus", Complex(lp), half_k},
        {"-lambda_plus", Complex(-lp), -half_k},
        {"i lambda_minus", Complex(0.0, lm), half_l},
        {"-i lambda_minus", Complex(0.0, -lm), -half_l},
        {"1/lambda_plus", Complex(1.0 / lp), -half_k},
        {"-1/lambda_plus", Complex(-1.0 / lp), half_k},
        {"i/lambda_minus", Complex(0.0, 1.0 / lm), -half_l},
        {"-i/lambda_minus", Complex(0.0, -1.0 / lm), half_l},
    };

    const LaurentSeries f_plus_prime = data.f_plus.derivative();
    const auto omega = [&data, &f_plus_prime](Complex lam) {
        return omega_at(data, f_plus_prime, lam);
    };

    ResidueTable table;
    for (const auto& p : points) {
        double distance = std::abs(p.location);
        for (const auto& q : points) {
            if (&q == &p) continue;
            distance = std::min(distance, std::abs(p.location - q.location));
        }
        double radius = 0.5 * distance;
        Complex value(0.0);
        for (int attempt = 0;; ++attempt) {
            try {
                value = winding_integral(p.location, radius, omega);
                break;
            } catch (const NumericError&) {
                if (attempt >= 3)
                    throw NumericError(std::string("residue contour at ") + p.name +
                                       " could not avoid singular points");
                radius *= 0.5;
            }
        }
        table.entries.push_back(ResidueEntry{p.name, p.location, p.expected, value});
        table.sum += value;
        table.worst_error = std::max(table.worst_error, std::abs(value - p.expected));
    }
    return table;
}

std::vector<CycleIntegral> a_cycle_integrals(const SpectralData& data,
                                             const HyperellipticCurve& curve) {
    std::vector<CycleIntegral> out;
    if (curve.genus == 0) return out;

    const double lp = data.constants.lambda_plus;
    const double lm = data.constants.lambda_minus;
    std::vector<Complex> singular = curve.branch_points;
    singular.push_back(Complex(0.0));
    singular.push_back(Complex(lp * lp));
    singular.push_back(Complex(1.0 / (lp * lp)));
    singular.push_back(Complex(-lm * lm));
    singular.push_back(Complex(-1.0 / (lm * lm)));

    const LaurentSeries f_plus_prime = data.f_plus.derivative();
    for (int pair = 0; pair < curve.genus; ++pair) {
        const Complex b1 = curve.branch_points[2 * static_cast<std::size_t>(pair)];
        const Complex b2 = curve.branch_points[2 * static_cast<std::size_t>(pair) + 1];
        const Complex center = 0.5 * (b1 + b2);
        const double r_inner = std::max(std::abs(b1 - center), std::abs(b2 - center));
        double r_outer = std::abs(center);
        for (const Complex& s : singular) {
            if (std::abs(s - b1) < 1e-12 || std::abs(s - b2) < 1e-12) continue;
            r_outer = std::min(r_outer, std::abs(s - center));
        }
        if (r_outer <= 1.1 * r_inner)
            throw NumericError("cannot separate branch pair " + format_complex(b1) + ", " +
                               format_complex(b2) + " from the remaining singular points");
        const double radius = 0.5 * (r_inner + r_outer);

        const auto diagnostics = [&](const char* what) {
            return std::string(what) + " on the contour centered at " + format_complex(center) +
                   " with radius " + std::to_string(radius);
        };
        const auto track = [&diagnostics](Complex squared, Complex previous) {
            Complex root = std::sqrt(squared);
            if (std::abs(root - previous) > std::abs(root + previous)) root = -root;
            if ((root * std::conj(previous)).real() < 0.0)
                throw NumericError(diagnostics("sheet tracking became ambiguous"));
            return root;
        };

        Complex value(0.0);
        Complex previous_value(0.0);
        bool converged = false;
        for (std::size_t nodes = 512; nodes <= 8192 && !converged; nodes *= 2) {
            const Complex start_nu = center + radius;
            Complex lam = std::sqrt(start_nu);
            Complex mu = std::sqrt(curve.mu2.evaluate(start_nu));
            const Complex lam_start = lam;
            const Complex mu_start = mu;
            Complex acc(0.0);
            for (std::size_t j = 0; j < nodes; ++j) {
                const Complex e = circle_node(j, nodes);
                const Complex nu = center + radius * e;
                lam = track(nu, lam);
                mu = track(curve.mu2.evaluate(nu), mu);
                const Complex w =
                    omega_at(data, f_plus_prime, lam) + omega_at(data, f_plus_prime, -lam);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                    throw NumericError(diagnostics("singular integrand"));
                acc += w / (2.0 * lam) * e;
            }
            lam = track(start_nu, lam);
            mu = track(curve.mu2.evaluate(start_nu), mu);
            if (std::abs(lam - lam_start) > 1e-6 * std::max(1.0, std::abs(lam_start)))
                throw NumericError(diagnostics("square-root continuation failed to close"));
            if (std::abs(mu - mu_start) > 1e-6 * std::max(1.0, std::abs(mu_start)))
                throw NumericError(diagnostics("sheet tracking of mu failed to close"));
            acc *= radius / static_cast<double>(nodes);
            if (nodes > 512 && std::abs(acc - previous_value) < 1e-9) {
                value = acc;
                converged = true;
            }
            previous_value = acc;
        }
        if (!converged)
            throw NumericError("a-cycle integral did not stabilize for the pair at " +
                               format_complex(center));
        out.push_back(CycleIntegral{center, radius, value});
    }
    return out;
}

void b_cycle_condition(const SpectralData&, const HyperellipticCurve&) {
    throw UnsupportedError(
        "b-cycle closing conditions need the normalized period differentials, which this "
        "library does not construct");
}

} // namespace cmcdress
