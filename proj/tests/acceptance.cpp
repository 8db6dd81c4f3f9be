#include "doctest.h"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cmcdress/cli.hpp"
#include "cmcdress/cylinder.hpp"
#include "cmcdress/geometry.hpp"
#include "cmcdress/iwasawa.hpp"
#include "cmcdress/lattice.hpp"
#include "cmcdress/random_loops.hpp"
#include "cmcdress/rational.hpp"
#include "cmcdress/report.hpp"
#include "cmcdress/spectral.hpp"
#include "cmcdress/symmetry.hpp"

using namespace cmcdress;

namespace {

// Prints one verdict line per criterion; an exception that skips the end of
// the block leaves completed unset and the line reports FAIL.
struct CriterionLine {
    int number;
    const char* name;
    bool ok = true;
    bool completed = false;
    ~CriterionLine() {
        std::printf("criterion %d (%s): %s\n", number, name,
                    ok && completed ? "PASS" : "FAIL");
        std::fflush(stdout);
    }
};

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double loop_distance(const TwistedLoop& a, const TwistedLoop& b) {
    return (a - b).norm_inf();
}

double phase_from_zero(double phase) {
    return std::min(phase, 2.0 * std::numbers::pi - phase);
}

double motion_distance(const EuclideanMotion& a, const EuclideanMotion& b) {
    const Vec3 probes[] = {{0.0, 0.0, -1.0}, {1.0, 0.0, 0.0}, {0.3, -0.2, 0.7}};
    double worst = 0.0;
    for (const Vec3& x : probes)
        worst = std::max(worst, (apply_motion(a, x) - apply_motion(b, x)).norm());
    return worst;
}

RationalFunction constant_lambda(double value) {
    return {Poly(std::vector<Complex>{Complex(value)}), Poly(std::vector<Complex>{Complex(1.0)}),
            Variable::lambda};
}

} // namespace

#define CRITERION_CHECK(crit, ...)                                      \
    do {                                                                \
        const bool criterion_check_ok = static_cast<bool>(__VA_ARGS__); \
        (crit).ok &= criterion_check_ok;                                \
        CHECK_MESSAGE(criterion_check_ok, #__VA_ARGS__);                \
    } while (0)

TEST_CASE("random unitary-plus pairs are recovered by the factorization") {
    CriterionLine crit{1, "factorization oracle"};
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const TwistedLoop f = random_unitary_loop(1000 + trial, 128);
        const TwistedLoop p = random_plus_loop(2000 + trial, 128);
        const IwasawaFactors fac = iwasawa(f * p);
        worst = std::max({worst, loop_distance(fac.plus, p), loop_distance(fac.unitary, f)});
    }
    CRITERION_CHECK(crit, worst < 1e-8);
    CRITERION_CHECK(crit, elapsed_seconds(start) < 60.0);
    crit.completed = true;
}

TEST_CASE("the identity seed reproduces the vacuum frames and edge vectors") {
    CriterionLine crit{2, "vacuum fidelity"};
    const int degree = 96;
    const CylinderData cyl = make_cylinder(0.5, 0.5, degree);
    const DressedLattice lattice =
        build_lattice(cyl, TwistedLoop::identity(degree), Window{0, 31, 0, 31});

    double frame_dev = 0.0;
    for (int n = 0; n <= 31; ++n)
        for (int m = 0; m <= 31; ++m)
            frame_dev = std::max(frame_dev,
                                 loop_distance(lattice.frame(m, n), vacuum_frame(cyl, m, n)));
    CRITERION_CHECK(crit, frame_dev < 1e-10);

    const DiscreteSurface surface = build_surface(lattice);
    const Vec3 reference = surface.at(1, 0) - surface.at(0, 0);
    double edge_dev = 0.0;
    for (int n = 0; n <= 31; ++n)
        for (int m = 0; m < 31; ++m) {
            const Vec3 edge = surface.at(m + 1, n) - surface.at(m, n);
            edge_dev = std::max(edge_dev, (edge - reference).norm());
        }
    CRITERION_CHECK(crit, edge_dev < 1e-9);
    crit.completed = true;
}

TEST_CASE("dressed lattices stay integrable and match the metric edge law") {
    const auto start = std::chrono::steady_clock::now();
    const double radii[] = {0.3, 0.5, 1.0};
    const int degree = 128;
    LatticeBuildOptions options;
    options.factorization.newton_tol = 1e-9;

    std::vector<DressedLattice> lattices;
    for (int trial = 0; trial < 20; ++trial) {
        const double r1 = radii[trial % 3];
        const double r2 = radii[(trial / 3) % 3];
        const CylinderData cyl = make_cylinder(r1, r2, degree);
        lattices.push_back(build_lattice(cyl, random_plus_loop(7000 + trial, degree, 0.5, 0.3),
                                         Window{0, 15, 0, 15}, options));
    }

    {
        CriterionLine crit{3, "integrable structure"};
        double worst = 0.0;
        for (const DressedLattice& lattice : lattices) {
            const IntegrabilityReport report = verify_integrability(lattice);
            worst = std::max(worst, report.worst());
        }
        CRITERION_CHECK(crit, worst < 1e-7);
        CRITERION_CHECK(crit, elapsed_seconds(start) < 300.0);
        crit.completed = true;
    }

    {
        CriterionLine crit{4, "geometry cross-check"};
        double length_dev = 0.0;
        double report_dev = 0.0;
        for (const DressedLattice& lattice : lattices) {
            const LaxField lax = extract_lax(lattice);
            const DiscreteSurface surface = build_surface(lattice);
            const Window& win = lattice.window();
            const double r1 = lattice.cylinder().constants.r1;
            for (int n = win.n0; n <= win.n1; ++n)
                for (int m = win.m0; m < win.m1; ++m) {
                    const double p = lax.u_edge(m, n).metric.real();
                    const double predicted = 2.0 * std::sqrt(4.0 * r1 * r1 * p * p);
                    const double measured = (surface.at(m + 1, n) - surface.at(m, n)).norm();
                    length_dev = std::max(length_dev,
                                          std::abs(measured - predicted) / predicted);
                }
            report_dev = std::max(report_dev, verify_edges(lattice, surface).worst());
        }
        CRITERION_CHECK(crit, length_dev < 1e-7);
        CRITERION_CHECK(crit, report_dev < 1e-7);
        crit.completed = true;
    }
}

TEST_CASE("lattice shifts are certified on the vacuum and rejected when dressed") {
    CriterionLine crit{5, "symmetry detection"};
    const int degree = 64;
    const CylinderData cyl = make_cylinder(0.5, 0.5, degree);
    const Window window{-4, 7, -4, 7};

    const DressedLattice vacuum = build_lattice(cyl, TwistedLoop::identity(degree), window);
    const LaxField vacuum_lax = extract_lax(vacuum);

    std::map<std::pair<int, int>, EuclideanMotion> motions;
    double worst_phase = 0.0;
    double worst_residual = 0.0;
    bool all_accepted = true;
    for (int k = -3; k <= 3; ++k)
        for (int l = -3; l <= 3; ++l) {
            if (k == 0 && l == 0) continue;
            const SymmetryResult result = detect_symmetry(vacuum, vacuum_lax, k, l);
            all_accepted = all_accepted && result.accepted;
            if (!result.accepted) continue;
            worst_phase = std::max(worst_phase, phase_from_zero(result.certificate.phase));
            worst_residual = std::max(worst_residual, result.certificate.max_residual);
            motions.emplace(std::make_pair(k, l), euclidean_motion(result.certificate));
        }
    CRITERION_CHECK(crit, all_accepted);
    CRITERION_CHECK(crit, worst_phase < 1e-9);
    CRITERION_CHECK(crit, worst_residual < 1e-9);

    const std::pair<int, int> sums[][3] = {
        {{1, 0}, {0, 1}, {1, 1}},   {{2, 1}, {1, 2}, {3, 3}},   {{1, 1}, {1, 1}, {2, 2}},
        {{-1, 2}, {2, -1}, {1, 1}}, {{3, 0}, {0, 3}, {3, 3}},   {{-2, -3}, {1, 1}, {-1, -2}},
    };
    double compose_dev = 0.0;
    for (const auto& row : sums) {
        const EuclideanMotion composed = compose(motions.at(row[1]), motions.at(row[0]));
        compose_dev = std::max(compose_dev, motion_distance(composed, motions.at(row[2])));
    }
    CRITERION_CHECK(crit, compose_dev < 1e-7);

    LatticeBuildOptions options;
    options.factorization.newton_tol = 1e-9;
    const DressedLattice dressed =
        build_lattice(cyl, random_plus_loop(4242, degree, 0.5, 0.3), window, options);
    const LaxField dressed_lax = extract_lax(dressed);
    bool all_rejected = true;
    bool all_metric = true;
    for (int k = -3; k <= 3; ++k)
        for (int l = -3; l <= 3; ++l) {
            if (k == 0 && l == 0) continue;
            const SymmetryResult result = detect_symmetry(dressed, dressed_lax, k, l);
            all_rejected = all_rejected && !result.accepted;
            all_metric = all_metric && result.failed_stage == SymmetryStage::metric;
        }
    CRITERION_CHECK(crit, all_rejected);
    CRITERION_CHECK(crit, all_metric);
    crit.completed = true;
}

TEST_CASE("the log-derivative form carries the shift as contour residues") {
    CriterionLine crit{6, "spectral residues"};
    const LatticeConstants constants = make_constants(0.5, 0.5, 48);
    CRITERION_CHECK(crit, std::abs(constants.lambda_plus - (1.0 + std::sqrt(2.0))) < 1e-12);

    const SpectralData data =
        make_spectral_data(constant_lambda(0.0), constant_lambda(1.0), constant_lambda(1.0),
                           LaurentSeries(0), 2, 0, constants);
    const ResidueTable table = omega_residues(data);
    CRITERION_CHECK(crit, table.entries.size() == 8);

    const std::map<std::string, double> expected = {
        {"lambda_plus", 1.0},      {"-lambda_plus", -1.0},   {"i lambda_minus", 0.0},
        {"-i lambda_minus", 0.0},  {"1/lambda_plus", -1.0},  {"-1/lambda_plus", 1.0},
        {"i/lambda_minus", 0.0},   {"-i/lambda_minus", 0.0},
    };
    bool names_match = table.entries.size() == expected.size();
    for (const ResidueEntry& entry : table.entries) {
        const auto it = expected.find(entry.name);
        names_match = names_match && it != expected.end() && entry.expected == it->second;
    }
    CRITERION_CHECK(crit, names_match);
    CRITERION_CHECK(crit, table.worst_error < 1e-6);
    CRITERION_CHECK(crit, std::abs(table.sum) < 1e-6);
    crit.completed = true;
}

TEST_CASE("a rational metric datum reproduces its genus-one curve and range") {
    CriterionLine crit{7, "curve extraction"};
    const RationalFunction a2_nu{Poly(std::vector<Complex>{Complex(-1.0), Complex(2.5),
                                                           Complex(-1.0)}),
                                 Poly(std::vector<Complex>{Complex(0.0), Complex(5.0)}),
                                 Variable::nu};

    const HyperellipticCurve curve = curve_from_a2(a2_nu);
    CRITERION_CHECK(crit, curve.genus == 1);
    CRITERION_CHECK(crit, curve.branch_points.size() == 2);
    const Complex inside = curve.branch_points[0];
    const Complex outside = curve.branch_points[1];
    CRITERION_CHECK(crit, std::abs(inside - Complex(0.5)) < 1e-9);
    CRITERION_CHECK(crit, std::abs(outside - Complex(2.0)) < 1e-9);
    CRITERION_CHECK(crit, std::abs(outside - 1.0 / std::conj(inside)) < 1e-9);

    const NecessaryReport report = check_necessary(substitute_square(a2_nu),
                                                   constant_lambda(1.0), constant_lambda(1.0));
    bool range_pass = false;
    double range_margin = 0.0;
    for (const ConditionReport& condition : report.conditions)
        if (condition.name == "d-range") {
            range_pass = condition.pass;
            range_margin = condition.margin;
        }
    CRITERION_CHECK(crit, range_pass);
    CRITERION_CHECK(crit, std::abs(report.a2_min - 0.1) < 1e-9);
    CRITERION_CHECK(crit, std::abs(report.a2_max - 0.9) < 1e-9);
    CRITERION_CHECK(crit, std::abs(range_margin - 0.1) < 1e-9);
    crit.completed = true;
}

TEST_CASE("the even and odd parts of p-hat rebuild the delta product") {
    CriterionLine crit{8, "shift function identity"};
    const LatticeConstants constants = make_constants(0.5, 0.5, 64);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> amplitude(-0.25, 0.25);
    std::uniform_int_distribution<int> half_shift(-2, 2);
    std::uniform_int_distribution<int> term_count(1, 4);

    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        int k = 2 * half_shift(rng);
        int l = 2 * half_shift(rng);
        if (k == 0 && l == 0) k = 2;
        std::vector<Complex> coeffs(static_cast<std::size_t>(term_count(rng)));
        for (Complex& c : coeffs) c = Complex(amplitude(rng), amplitude(rng));
        const LaurentSeries f_plus =
            odd_polynomial(coeffs, 2 * static_cast<int>(coeffs.size()) - 1);
        const PhatTriple triple = make_phat(k, l, constants, f_plus);
        worst = std::max(worst, triple.identity_residual);
    }
    CRITERION_CHECK(crit, worst < 1e-9);
    crit.completed = true;
}

TEST_CASE("identical configurations produce byte-identical outputs") {
    CriterionLine crit{9, "determinism"};
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "cmcdress_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    const fs::path config = root / "dress.cfg";
    write_text_file(config.string(),
                    "r1 = 0.5\n"
                    "r2 = 0.5\n"
                    "N = 48\n"
                    "window.m0 = 0\n"
                    "window.m1 = 5\n"
                    "window.n0 = 0\n"
                    "window.n1 = 5\n"
                    "seed.kind = rng\n"
                    "seed.rng = 2024\n"
                    "seed.decay = 0.45\n"
                    "seed.amplitude = 0.35\n");

    std::string obj[2];
    std::string report[2];
    bool runs_ok = true;
    for (int run = 0; run < 2; ++run) {
        const fs::path out = root / ("run" + std::to_string(run));
        const char* argv[] = {"cmcdress", "dress", "--config", nullptr, "--out", nullptr,
                              "--quiet"};
        const std::string config_path = config.string();
        const std::string out_path = out.string();
        argv[3] = config_path.c_str();
        argv[5] = out_path.c_str();
        std::ostringstream console;
        std::ostringstream errors;
        runs_ok = runs_ok && run_cli(7, argv, console, errors) == 0;
        obj[run] = read_text_file((out / "surface.obj").string());
        report[run] = read_text_file((out / "report.txt").string());
    }
    CRITERION_CHECK(crit, runs_ok);
    CRITERION_CHECK(crit, !obj[0].empty());
    CRITERION_CHECK(crit, obj[0] == obj[1]);
    CRITERION_CHECK(crit, !report[0].empty());
    CRITERION_CHECK(crit, report[0] == report[1]);
    crit.completed = true;
}
