#include "cmcdress/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmcdress/config.hpp"
#include "cmcdress/errors.hpp"
#include "cmcdress/geometry.hpp"
#include "cmcdress/random_loops.hpp"
#include "cmcdress/report.hpp"
#include "cmcdress/spectral.hpp"
#include "cmcdress/symmetry.hpp"
#include "cmcdress/version.hpp"

namespace cmcdress {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kReportFormat = "cmcdress-report-1";

json loop_to_json(const TwistedLoop& loop) {
    json entries = json::array();
    const int degree = loop.degree();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            json coeffs = json::array();
            const LaurentSeries& s = loop.entry(i, j);
            for (int n = -degree; n <= degree; ++n) {
                const Complex c = s.coeff(n);
                coeffs.push_back(c.real());
                coeffs.push_back(c.imag());
            }
            entries.push_back(std::move(coeffs));
        }
    }
    return entries;
}

TwistedLoop loop_from_json(const json& entries, int degree) {
    const std::size_t expected = 2 * (2 * static_cast<std::size_t>(degree) + 1);
    if (!entries.is_array() || entries.size() != 4)
        throw IoError("loop record needs four coefficient arrays");
    TwistedLoop loop(degree, true);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const json& coeffs = entries[static_cast<std::size_t>(2 * i + j)];
            if (!coeffs.is_array() || coeffs.size() != expected)
                throw IoError("loop entry has the wrong coefficient count");
            std::size_t at = 0;
            for (int n = -degree; n <= degree; ++n) {
                const double re = coeffs[at++].get<double>();
                const double im = coeffs[at++].get<double>();
                loop.entry(i, j).set_coeff(n, Complex(re, im));
            }
        }
    }
    return loop;
}

json parse_json_file(const std::string& path, const char* expected_format) {
    const std::string text = read_text_file(path);
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError("'" + path + "' is not valid JSON: " + e.what());
    }
    if (!root.is_object() || root.value("format", std::string()) != expected_format)
        throw IoError("'" + path + "' is not a " + std::string(expected_format) + " file");
    return root;
}

enum class SeedKind { identity, rng, file };

struct RunSettings {
    double r1{0.0}, r2{0.0};
    int truncation{0};
    Window window;
    SeedKind seed_kind{SeedKind::identity};
    std::uint64_t rng_seed{1};
    double seed_decay{0.5};
    double seed_amplitude{0.4};
    std::string seed_file;
    double tol_accept{1e-6};
    double tol_structure{0.1};
    IwasawaOptions factorization;
    std::string out_obj, out_csv, out_report, out_lattice;
};

RunSettings read_run_settings(const Config& config) {
    RunSettings s;
    s.r1 = config.get_double("r1");
    if (!(s.r1 > 0.0)) config.fail_key("r1", "r1 must be positive");
    s.r2 = config.get_double("r2");
    if (!(s.r2 > 0.0)) config.fail_key("r2", "r2 must be positive");
    s.truncation = config.get_int("N");
    if (s.truncation < 8) config.fail_key("N", "N must be at least 8");
    s.window = Window{config.get_int("window.m0"), config.get_int("window.m1"),
                      config.get_int("window.n0"), config.get_int("window.n1")};
    if (s.window.m1 < s.window.m0 || s.window.n1 < s.window.n0)
        config.fail_key("window.m0", "window is empty");
    if (!s.window.contains(0, 0)) config.fail_key("window.m0", "window must contain (0, 0)");

    const std::string kind = config.get_string("seed.kind", "identity");
    if (kind == "identity") {
        s.seed_kind = SeedKind::identity;
    } else if (kind == "rng") {
        s.seed_kind = SeedKind::rng;
    } else if (kind == "file") {
        s.seed_kind = SeedKind::file;
    } else {
        config.fail_key("seed.kind", "seed.kind must be identity, rng, or file");
    }
    s.rng_seed = config.get_u64("seed.rng", 1);
    s.seed_decay = config.get_double("seed.decay", 0.5);
    if (!(s.seed_decay > 0.0 && s.seed_decay < 1.0))
        config.fail_key("seed.decay", "seed.decay must lie in (0, 1)");
    s.seed_amplitude = config.get_double("seed.amplitude", 0.4);
    if (!(s.seed_amplitude > 0.0))
        config.fail_key("seed.amplitude", "seed.amplitude must be positive");
    if (s.seed_kind == SeedKind::file) s.seed_file = config.get_string("seed.file");

    s.tol_accept = config.get_double("tol.accept", 1e-6);
    if (!(s.tol_accept > 0.0)) config.fail_key("tol.accept", "tol.accept must be positive");
    s.tol_structure = config.get_double("tol.structure", 0.1);
    if (!(s.tol_structure > 0.0))
        config.fail_key("tol.structure", "tol.structure must be positive");
    // Dressing walks bottom out above the library's per-factorization target;
    // two extra decades keep ordinary windows converging without measurable
    // loss against the 1e-6 acceptance scale.
    s.factorization.newton_tol = config.get_double("tol.newton", 1e-9);
    if (!(s.factorization.newton_tol > 0.0))
        config.fail_key("tol.newton", "tol.newton must be positive");

    s.out_obj = config.get_string("out.obj", "surface.obj");
    s.out_csv = config.get_string("out.csv", "metric.csv");
    s.out_report = config.get_string("out.report", "report.txt");
    s.out_lattice = config.get_string("out.lattice", "lattice.json");
    return s;
}

TwistedLoop make_seed(const RunSettings& s) {
    switch (s.seed_kind) {
        case SeedKind::identity: return TwistedLoop::identity(s.truncation);
        case SeedKind::rng:
            return random_plus_loop(s.rng_seed, s.truncation, s.seed_decay, s.seed_amplitude);
        case SeedKind::file: return load_seed_loop(s.seed_file, s.truncation);
    }
    throw ValidationError("unknown seed kind");
}

std::string window_text(const Window& w) {
    return "[" + std::to_string(w.m0) + ", " + std::to_string(w.m1) + "] x [" +
           std::to_string(w.n0) + ", " + std::to_string(w.n1) + "]";
}

std::string mat2_text(const Mat2& m) {
    return "[[" + format_complex(m.a) + ", " + format_complex(m.b) + "], [" +
           format_complex(m.c) + ", " + format_complex(m.d) + "]]";
}

std::string vec3_text(const Vec3& v) {
    return "(" + format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z) + ")";
}

std::string complex_list_text(const std::vector<Complex>& values) {
    if (values.empty()) return "0";
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) text += ", ";
        text += format_complex(values[i]);
    }
    return text;
}

void add_trailer(Report& report, const Config& config, const char* command) {
    report.trailer("format", kReportFormat);
    report.trailer("version", kVersion);
    report.trailer("config_hash", config.hash_hex());
    report.trailer("command", command);
    report.trailer("status", "ok");
}

void add_seed_section(Report& report, const RunSettings& s) {
    report.section("seed");
    switch (s.seed_kind) {
        case SeedKind::identity: report.kv("kind", "identity"); break;
        case SeedKind::rng:
            report.kv("kind", "rng");
            report.kv("rng", std::to_string(s.rng_seed));
            report.kv("decay", s.seed_decay);
            report.kv("amplitude", s.seed_amplitude);
            break;
        case SeedKind::file:
            report.kv("kind", "file");
            report.kv("file", s.seed_file);
            break;
    }
}

void add_conditions(Report& report, const std::vector<ConditionReport>& conditions) {
    for (const auto& c : conditions) {
        std::string value = c.pass ? "pass" : "fail";
        value += " (margin " + format_double(c.margin) + ")";
        if (!c.detail.empty()) value += " " + c.detail;
        report.kv(c.name, value);
    }
}

int run_build(const Config& config, const fs::path& out_dir, bool quiet, std::ostream& out,
              bool dressed) {
    RunSettings s = read_run_settings(config);
    if (!dressed) s.seed_kind = SeedKind::identity;

    const CylinderData cyl = make_cylinder(s.r1, s.r2, s.truncation);
    LatticeBuildOptions options;
    options.factorization = s.factorization;
    const DressedLattice lattice = build_lattice(cyl, make_seed(s), s.window, options);
    const LaxField lax = extract_lax(lattice, s.tol_structure);
    const IntegrabilityReport integ = verify_integrability(lattice);
    const DiscreteSurface surface = build_surface(lattice);
    const EdgeCheckReport edges = verify_edges(lattice, surface);

    Report report(dressed ? "cmcdress dress report" : "cmcdress cylinder report");
    report.section("constants");
    report.kv("r1", s.r1);
    report.kv("r2", s.r2);
    report.kv("N", s.truncation);
    report.kv("lambda_plus", cyl.constants.lambda_plus);
    report.kv("lambda_minus", cyl.constants.lambda_minus);
    report.kv("r_min", cyl.constants.r_min);
    report.section("window");
    report.kv("range", window_text(s.window));
    report.kv("sites", s.window.width() * s.window.height());
    add_seed_section(report, s);
    report.section("integrability");
    report.kv("zero_curvature", integ.zero_curvature);
    report.kv("closing", integ.closing);
    report.kv("alpha_update", integ.alpha_update);
    report.kv("beta_update", integ.beta_update);
    report.kv("sinh_gordon", integ.sinh_gordon);
    report.kv("band_template", integ.band_template);
    report.kv("metric_compat", integ.metric_compat);
    report.kv("metric_reality", integ.metric_reality);
    report.kv("unitarity", integ.unitarity);
    report.kv("worst", integ.worst());
    report.section("edges");
    report.kv("u_vector", edges.u_vector);
    report.kv("v_vector", edges.v_vector);
    report.kv("u_length", edges.u_length);
    report.kv("v_length", edges.v_length);
    report.kv("worst", edges.worst());
    report.section("surface");
    report.kv("points", static_cast<int>(surface.points.size()));
    report.kv("spinor_defect", surface.spinor_defect);
    report.section("outputs");
    report.kv("obj", s.out_obj);
    report.kv("csv", s.out_csv);
    report.kv("lattice", s.out_lattice);
    add_trailer(report, config, dressed ? "dress" : "cylinder");

    {
        std::ostringstream obj;
        export_obj(surface, obj);
        write_text_file((out_dir / s.out_obj).string(), obj.str());
    }
    {
        std::ostringstream csv;
        export_metric_csv(lax, csv);
        write_text_file((out_dir / s.out_csv).string(), csv.str());
    }
    save_lattice(lattice, (out_dir / s.out_lattice).string());
    write_text_file((out_dir / s.out_report).string(), report.render());

    if (!quiet) {
        out << "wrote " << (out_dir / s.out_obj).string() << '\n';
        out << "wrote " << (out_dir / s.out_csv).string() << '\n';
        out << "wrote " << (out_dir / s.out_lattice).string() << '\n';
        out << "wrote " << (out_dir / s.out_report).string() << '\n';
        out << "worst integrability residual = " << format_double(integ.worst()) << '\n';
    }
    return 0;
}

int run_verify(const Config& config, const std::string& lattice_arg, const fs::path& out_dir,
               bool quiet, std::ostream& out) {
    const std::string path = lattice_arg.empty() ? config.get_string("lattice", "") : lattice_arg;
    if (path.empty()) {
        throw ValidationError(
            "a lattice file is required: pass it as an argument or set the 'lattice' config key");
    }
    const auto shifts = config.get_shift_list("shifts");
    if (shifts.empty()) config.fail_key("shifts", "shifts must list at least one k:l pair");
    for (const auto& [k, l] : shifts) {
        if (k == 0 && l == 0)
            throw ValidationError("shift 0:0 is the identity shift and certifies nothing");
    }

    const DressedLattice lattice = load_lattice(path);
    const LaxField lax = extract_lax(lattice, config.get_double("tol.structure", 0.1));
    SymmetryOptions options;
    options.accept_tol = config.get_double("tol.accept", 1e-6);

    Report report("cmcdress verify report");
    report.section("lattice");
    report.kv("file", fs::path(path).filename().string());
    report.kv("r1", lattice.cylinder().constants.r1);
    report.kv("r2", lattice.cylinder().constants.r2);
    report.kv("degree", lattice.degree());
    report.kv("window", window_text(lattice.window()));

    int accepted_count = 0;
    for (const auto& [k, l] : shifts) {
        const SymmetryResult result = detect_symmetry(lattice, lax, k, l, options);
        report.section("shift " + std::to_string(k) + ":" + std::to_string(l));
        report.kv("accepted", result.accepted ? "yes" : "no");
        report.kv("metric_residual", result.metric_residual);
        report.kv("phase_residual", result.phase_residual);
        report.kv("frame_residual", result.frame_residual);
        if (!result.accepted) {
            report.kv("failed_stage", to_string(result.failed_stage));
            report.kv("reason", result.reason);
            continue;
        }
        ++accepted_count;
        const SymmetryCertificate& cert = result.certificate;
        report.kv("phase", cert.phase);
        report.kv("max_residual", cert.max_residual);
        report.kv("holomorphy_estimate", cert.holomorphy_estimate);
        const EuclideanMotion motion = euclidean_motion(cert);
        report.kv("rotation", mat2_text(motion.rotation));
        report.kv("translation", vec3_text(motion.translation));
        report.kv("period", is_period(cert, options.accept_tol) ? "yes" : "no");
    }
    report.section("summary");
    report.kv("shifts", static_cast<int>(shifts.size()));
    report.kv("accepted", accepted_count);
    report.kv("rejected", static_cast<int>(shifts.size()) - accepted_count);
    add_trailer(report, config, "verify");

    const std::string report_name = config.get_string("out.report", "report.txt");
    write_text_file((out_dir / report_name).string(), report.render());
    if (!quiet) {
        out << "wrote " << (out_dir / report_name).string() << '\n';
        out << "accepted " << accepted_count << " of " << shifts.size() << " shifts\n";
    }
    return 0;
}

int run_export(const Config& config, const std::string& lattice_arg, const fs::path& out_dir,
               bool quiet, std::ostream& out) {
    const std::string path = lattice_arg.empty() ? config.get_string("lattice", "") : lattice_arg;
    if (path.empty()) {
        throw ValidationError(
            "a lattice file is required: pass it as an argument or set the 'lattice' config key");
    }
    const DressedLattice lattice = load_lattice(path);
    const LaxField lax = extract_lax(lattice, config.get_double("tol.structure", 0.1));
    const DiscreteSurface surface = build_surface(lattice);

    const std::string out_obj = config.get_string("out.obj", "surface.obj");
    const std::string out_csv = config.get_string("out.csv", "metric.csv");
    const std::string out_report = config.get_string("out.report", "report.txt");

    Report report("cmcdress export report");
    report.section("lattice");
    report.kv("file", fs::path(path).filename().string());
    report.kv("r1", lattice.cylinder().constants.r1);
    report.kv("r2", lattice.cylinder().constants.r2);
    report.kv("degree", lattice.degree());
    report.kv("window", window_text(lattice.window()));
    report.section("surface");
    report.kv("points", static_cast<int>(surface.points.size()));
    report.kv("spinor_defect", surface.spinor_defect);
    report.section("outputs");
    report.kv("obj", out_obj);
    report.kv("csv", out_csv);
    add_trailer(report, config, "export");

    {
        std::ostringstream obj;
        export_obj(surface, obj);
        write_text_file((out_dir / out_obj).string(), obj.str());
    }
    {
        std::ostringstream csv;
        export_metric_csv(lax, csv);
        write_text_file((out_dir / out_csv).string(), csv.str());
    }
    write_text_file((out_dir / out_report).string(), report.render());
    if (!quiet) {
        out << "wrote " << (out_dir / out_obj).string() << '\n';
        out << "wrote " << (out_dir / out_csv).string() << '\n';
        out << "wrote " << (out_dir / out_report).string() << '\n';
    }
    return 0;
}

int run_spectral(const Config& config, const fs::path& out_dir, bool quiet, std::ostream& out) {
    const double r1 = config.get_double("r1");
    if (!(r1 > 0.0)) config.fail_key("r1", "r1 must be positive");
    const double r2 = config.get_double("r2");
    if (!(r2 > 0.0)) config.fail_key("r2", "r2 must be positive");
    const int truncation = config.get_int("N", 48);
    if (truncation < 8) config.fail_key("N", "N must be at least 8");
    const int k = config.get_int("spectral.k");
    const int l = config.get_int("spectral.l");
    const double tol = config.get_double("tol.spectral", 1e-8);
    if (!(tol > 0.0)) config.fail_key("tol.spectral", "tol.spectral must be positive");

    const auto fplus_coeffs = config.get_complex_list("spectral.fplus", {});
    const auto a2_num = config.get_complex_list("spectral.a2.num", {Complex(0.0)});
    const auto a2_den = config.get_complex_list("spectral.a2.den", {Complex(1.0)});
    const auto b2_num = config.get_complex_list("spectral.b2.num", {Complex(1.0)});
    const auto b2_den = config.get_complex_list("spectral.b2.den", {Complex(1.0)});
    const auto c2_num = config.get_complex_list("spectral.c2.num", {Complex(1.0)});
    const auto c2_den = config.get_complex_list("spectral.c2.den", {Complex(1.0)});

    auto rational_nu = [&](const std::vector<Complex>& num, const std::vector<Complex>& den,
                           const std::string& den_key) {
        const Poly den_poly{den};
        if (den_poly.trimmed().is_zero())
            config.fail_key(den_key, den_key + " must not be the zero polynomial");
        return RationalFunction{Poly{num}, den_poly, Variable::nu};
    };
    const RationalFunction a2_nu = rational_nu(a2_num, a2_den, "spectral.a2.den");
    const RationalFunction b2_nu = rational_nu(b2_num, b2_den, "spectral.b2.den");
    const RationalFunction c2_nu = rational_nu(c2_num, c2_den, "spectral.c2.den");

    const LatticeConstants constants = make_constants(r1, r2, truncation);
    const int fplus_degree =
        fplus_coeffs.empty() ? 1 : 2 * static_cast<int>(fplus_coeffs.size()) - 1;
    const LaurentSeries f_plus = odd_polynomial(fplus_coeffs, fplus_degree);
    const RationalFunction a2_lambda = substitute_square(a2_nu);
    const RationalFunction b2_lambda = substitute_square(b2_nu);
    const RationalFunction c2_lambda = substitute_square(c2_nu);

    const SpectralData data =
        make_spectral_data(a2_lambda, b2_lambda, c2_lambda, f_plus, k, l, constants);
    const NecessaryReport necessary = check_necessary(a2_lambda, b2_lambda, c2_lambda, tol);
    const SufficientReport sufficient = check_sufficient(data, tol);
    const ResidueTable residues = omega_residues(data);

    Report report("cmcdress spectral report");
    report.section("data");
    report.kv("k", k);
    report.kv("l", l);
    report.kv("r1", r1);
    report.kv("r2", r2);
    report.kv("N", truncation);
    report.kv("lambda_plus", constants.lambda_plus);
    report.kv("lambda_minus", constants.lambda_minus);
    report.kv("r_min", constants.r_min);
    report.kv("fplus", complex_list_text(fplus_coeffs));
    report.kv("a2.num", complex_list_text(a2_num));
    report.kv("a2.den", complex_list_text(a2_den));
    report.kv("b2.num", complex_list_text(b2_num));
    report.kv("b2.den", complex_list_text(b2_den));
    report.kv("c2.num", complex_list_text(c2_num));
    report.kv("c2.den", complex_list_text(c2_den));
    report.section("phat");
    report.kv("identity_residual", data.functions.identity_residual);
    report.section("necessary");
    add_conditions(report, necessary.conditions);
    report.kv("a2_range",
              "[" + format_double(necessary.a2_min) + ", " + format_double(necessary.a2_max) + "]");
    report.kv_flag("all", necessary.all_pass);
    report.section("sufficient");
    add_conditions(report, sufficient.conditions);
    report.kv_flag("all", sufficient.all_pass);
    report.section("residues");
    for (const auto& entry : residues.entries) {
        report.kv(entry.name, format_complex(entry.computed) + " (expected " +
                                  format_double(entry.expected) + ")");
    }
    report.kv("sum", residues.sum);
    report.kv("worst_error", residues.worst_error);

    const bool have_curve = !a2_nu.is_zero();
    double cycle_max = 0.0;
    bool cycles_present = false;
    HyperellipticCurve curve;
    report.section("curve");
    if (!have_curve) {
        report.line("skipped: a2 vanishes identically and the curve degenerates");
    } else {
        curve = curve_from_a2(a2_nu);
        report.kv("genus", curve.genus);
        if (curve.genus == 0) report.line("no branch points: the curve is rational");
        for (int g = 0; g < curve.genus; ++g) {
            const Complex inside = curve.branch_points[static_cast<std::size_t>(2 * g)];
            const Complex outside = curve.branch_points[static_cast<std::size_t>(2 * g + 1)];
            report.kv("pair_" + std::to_string(g + 1),
                      format_complex(inside) + " <-> " + format_complex(outside));
        }
        const CurveCheckReport check = verify_a_on_curve(a2_nu, curve);
        report.section("divisor");
        for (const auto& row : check.divisor) {
            report.line(format_complex(row.location) + ": a2 order " +
                        std::to_string(row.order_a2) + ", mu2 order " +
                        std::to_string(row.order_mu2) + ", a2/mu2 order " +
                        std::to_string(row.order_f2));
        }
        report.kv("meromorphic", check.meromorphic ? "yes" : "no");
        report.kv("finite_at_zero", check.finite_at_zero ? "yes" : "no");
        const std::vector<CycleIntegral> cycles = a_cycle_integrals(data, curve);
        report.section("cycles");
        if (cycles.empty()) {
            report.line("no a-cycles at genus 0");
        } else {
            cycles_present = true;
            for (std::size_t i = 0; i < cycles.size(); ++i) {
                report.kv("cycle_" + std::to_string(i + 1),
                          "center " + format_complex(cycles[i].center) + ", radius " +
                              format_double(cycles[i].radius) + ", integral " +
                              format_complex(cycles[i].value));
                cycle_max = std::max(cycle_max, std::abs(cycles[i].value));
            }
        }
    }

    report.section("summary");
    report.kv_flag("necessary", necessary.all_pass);
    report.kv_flag("sufficient", sufficient.all_pass);
    report.kv("residue_sum_error", std::abs(residues.sum));
    report.kv("residue_worst_error", residues.worst_error);
    report.kv("cycle_max", cycles_present ? format_double(cycle_max) : std::string("none"));
    if (have_curve) {
        try {
            b_cycle_condition(data, curve);
        } catch (const UnsupportedError& e) {
            report.kv("b_cycle", std::string("unsupported: ") + e.what());
        }
    } else {
        report.kv("b_cycle", "skipped");
    }
    add_trailer(report, config, "spectral");

    const std::string report_name = config.get_string("out.report", "report.txt");
    write_text_file((out_dir / report_name).string(), report.render());
    if (!quiet) {
        out << "wrote " << (out_dir / report_name).string() << '\n';
        out << "necessary " << (necessary.all_pass ? "pass" : "fail") << ", sufficient "
            << (sufficient.all_pass ? "pass" : "fail") << '\n';
    }
    return 0;
}

} // namespace

void save_lattice(const DressedLattice& lattice, const std::string& path) {
    const Window& w = lattice.window();
    json root;
    root["format"] = "cmcdress-lattice";
    root["version"] = kVersion;
    root["r1"] = lattice.cylinder().constants.r1;
    root["r2"] = lattice.cylinder().constants.r2;
    root["degree"] = lattice.degree();
    root["window"] = {{"m0", w.m0}, {"m1", w.m1}, {"n0", w.n0}, {"n1", w.n1}};
    json sites = json::array();
    for (int n = w.n0; n <= w.n1; ++n) {
        for (int m = w.m0; m <= w.m1; ++m) {
            json site;
            site["m"] = m;
            site["n"] = n;
            site["frame"] = loop_to_json(lattice.frame(m, n));
            site["plus"] = loop_to_json(lattice.plus(m, n));
            sites.push_back(std::move(site));
        }
    }
    root["sites"] = std::move(sites);
    write_text_file(path, root.dump() + "\n");
}

DressedLattice load_lattice(const std::string& path) {
    const json root = parse_json_file(path, "cmcdress-lattice");
    try {
        const double r1 = root.at("r1").get<double>();
        const double r2 = root.at("r2").get<double>();
        const int degree = root.at("degree").get<int>();
        const json& jw = root.at("window");
        const Window w{jw.at("m0").get<int>(), jw.at("m1").get<int>(), jw.at("n0").get<int>(),
                       jw.at("n1").get<int>()};
        if (!(r1 > 0.0) || !(r2 > 0.0) || degree < 1 || w.m1 < w.m0 || w.n1 < w.n0)
            throw IoError("'" + path + "' carries inconsistent lattice parameters");
        DressedLattice lattice(make_cylinder(r1, r2, degree), w);
        const json& sites = root.at("sites");
        const std::size_t count =
            static_cast<std::size_t>(w.width()) * static_cast<std::size_t>(w.height());
        if (!sites.is_array() || sites.size() != count)
            throw IoError("'" + path + "' does not cover its lattice window");
        std::vector<bool> seen(count, false);
        for (const json& site : sites) {
            const int m = site.at("m").get<int>();
            const int n = site.at("n").get<int>();
            if (!w.contains(m, n))
                throw IoError("'" + path + "' lists a site outside its window");
            const std::size_t at =
                static_cast<std::size_t>(n - w.n0) * static_cast<std::size_t>(w.width()) +
                static_cast<std::size_t>(m - w.m0);
            if (seen[at]) throw IoError("'" + path + "' lists a site twice");
            seen[at] = true;
            lattice.set_site(m, n, loop_from_json(site.at("frame"), degree),
                             loop_from_json(site.at("plus"), degree));
        }
        return lattice;
    } catch (const json::exception& e) {
        throw IoError("'" + path + "' is missing lattice fields: " + e.what());
    }
}

void save_seed_loop(const TwistedLoop& loop, const std::string& path) {
    json root;
    root["format"] = "cmcdress-seed";
    root["version"] = kVersion;
    root["degree"] = loop.degree();
    root["entries"] = loop_to_json(loop);
    write_text_file(path, root.dump() + "\n");
}

TwistedLoop load_seed_loop(const std::string& path, int degree) {
    const json root = parse_json_file(path, "cmcdress-seed");
    int file_degree = 0;
    TwistedLoop raw(0, true);
    try {
        file_degree = root.at("degree").get<int>();
        if (file_degree < 0) throw IoError("'" + path + "' carries a negative degree");
        raw = loop_from_json(root.at("entries"), file_degree);
    } catch (const json::exception& e) {
        throw IoError("'" + path + "' is missing seed fields: " + e.what());
    }
    if (file_degree > degree) {
        throw ValidationError("seed loop degree " + std::to_string(file_degree) +
                              " exceeds the configured truncation N = " + std::to_string(degree));
    }
    TwistedLoop loop(degree, true);
    for (int n = -file_degree; n <= file_degree; ++n) loop.set_coeff(n, raw.coeff(n));
    const double scale = std::max(1.0, loop.norm_inf());
    if (loop.parity_defect() > 1e-8 * scale || !loop.is_plus(1e-8 * scale))
        throw ValidationError("seed loop must be a twisted plus loop");
    return loop;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"discrete constant mean curvature surfaces from loop-group dressing",
                 "cmcdress"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string lattice_path;
    std::uint64_t seed_override = 0;
    bool quiet = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory (default: current)");
        cmd->add_option("--seed", seed_override, "override the rng seed (implies seed.kind = rng)");
        cmd->add_flag("--quiet", quiet, "suppress console summaries");
    };

    CLI::App* cylinder = app.add_subcommand("cylinder", "build the vacuum cylinder surface");
    add_common(cylinder);
    CLI::App* dress = app.add_subcommand("dress", "dress the cylinder with a seed loop");
    add_common(dress);
    CLI::App* verify = app.add_subcommand("verify", "test lattice shifts for symmetry");
    add_common(verify);
    verify->add_option("lattice", lattice_path, "serialized lattice file");
    CLI::App* spectral = app.add_subcommand("spectral", "analyze spectral data and its curve");
    add_common(spectral);
    CLI::App* exporter =
        app.add_subcommand("export", "re-export surface and metric from a lattice file");
    add_common(exporter);
    exporter->add_option("lattice", lattice_path, "serialized lattice file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        Config config;
        if (!config_path.empty()) config = Config::load(config_path);
        if (dress->parsed() && dress->count("--seed") > 0) {
            config.set("seed.kind", "rng");
            config.set("seed.rng", std::to_string(seed_override));
        }
        const fs::path out_path(out_dir);
        std::error_code ec;
        fs::create_directories(out_path, ec);
        if (ec)
            throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

        if (cylinder->parsed()) return run_build(config, out_path, quiet, out, false);
        if (dress->parsed()) return run_build(config, out_path, quiet, out, true);
        if (verify->parsed()) return run_verify(config, lattice_path, out_path, quiet, out);
        if (spectral->parsed()) return run_spectral(config, out_path, quiet, out);
        if (exporter->parsed()) return run_export(config, lattice_path, out_path, quiet, out);
        throw ValidationError("no command selected");
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace cmcdress
