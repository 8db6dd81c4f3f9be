#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cmcdress/cli.hpp"
#include "cmcdress/config.hpp"
#include "cmcdress/errors.hpp"
#include "cmcdress/random_loops.hpp"
#include "cmcdress/report.hpp"

using namespace cmcdress;

namespace {

namespace fs = std::filesystem;

fs::path test_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "cmcdress_test_cli";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path case_dir(const std::string& name) {
    const fs::path p = test_root() / name;
    fs::create_directories(p);
    return p;
}

int invoke(const std::vector<std::string>& args, std::string* console = nullptr,
           std::string* errors = nullptr) {
    std::vector<const char*> argv;
    argv.push_back("cmcdress");
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (console) *console = out.str();
    if (errors) *errors = err.str();
    return code;
}

// All "key = value" doubles for the key, section by section.
std::vector<double> report_values(const std::string& text, const std::string& key) {
    std::vector<double> values;
    const std::string needle = "\n" + key + " = ";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        pos += needle.size();
        values.push_back(std::strtod(text.c_str() + pos, nullptr));
    }
    return values;
}

double report_value(const std::string& text, const std::string& key) {
    const auto values = report_values(text, key);
    REQUIRE(values.size() == 1);
    return values.front();
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
    int count = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) ++count;
    }
    return count;
}

std::string base_config(int n, const std::string& extra = "") {
    std::string text = "r1 = 0.5\nr2 = 0.5\nN = 48\n";
    text += "window.m0 = 0\nwindow.m1 = " + std::to_string(n - 1) + "\n";
    text += "window.n0 = 0\nwindow.n1 = " + std::to_string(n - 1) + "\n";
    return text + extra;
}

double loop_max_diff(const TwistedLoop& a, const TwistedLoop& b) { return (a - b).norm_inf(); }

} // namespace

TEST_CASE("complex values parse in every written form") {
    CHECK(parse_complex("0.5") == Complex(0.5, 0.0));
    CHECK(parse_complex("-2") == Complex(-2.0, 0.0));
    CHECK(parse_complex("2i") == Complex(0.0, 2.0));
    CHECK(parse_complex("i") == Complex(0.0, 1.0));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("0.3-0.25i") == Complex(0.3, -0.25));
    CHECK(parse_complex("1e-3+2.5e-2i") == Complex(1e-3, 2.5e-2));
    CHECK(parse_complex(" 1 + 2 i ") == Complex(1.0, 2.0));
    CHECK_THROWS_AS(parse_complex("0.5+"), ValidationError);
    CHECK_THROWS_AS(parse_complex("abc"), ValidationError);
    CHECK_THROWS_AS(parse_complex(""), ValidationError);
}

TEST_CASE("config text parses with line-referenced diagnostics") {
    const Config config = Config::parse(
        "# surface run\n"
        "r1 = 0.5\n"
        "\n"
        "N = 64\n"
        "shifts = 1:0, 2:-3\n"
        "spectral.fplus = 0.1, 0.2-0.3i\n");
    CHECK(config.get_double("r1") == 0.5);
    CHECK(config.get_int("N") == 64);
    CHECK(config.get_double("r2", 0.25) == 0.25);
    const auto shifts = config.get_shift_list("shifts");
    REQUIRE(shifts.size() == 2);
    CHECK(shifts[0] == std::pair<int, int>{1, 0});
    CHECK(shifts[1] == std::pair<int, int>{2, -3});
    const auto coeffs = config.get_complex_list("spectral.fplus", {});
    REQUIRE(coeffs.size() == 2);
    CHECK(coeffs[1] == Complex(0.2, -0.3));

    SUBCASE("unknown keys are rejected with their line") {
        try {
            Config::parse("r1 = 0.5\nr11 = 0.5\n");
            FAIL("unknown key accepted");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
            CHECK(std::string(e.what()).find("r11") != std::string::npos);
        }
    }
    SUBCASE("duplicate keys are rejected") {
        CHECK_THROWS_AS(Config::parse("r1 = 0.5\nr1 = 0.6\n"), ValidationError);
    }
    SUBCASE("bad values carry their line") {
        const Config broken = Config::parse("r1 = 0.5\nN = sixty\n");
        try {
            broken.get_int("N");
            FAIL("bad integer accepted");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("missing '=' is rejected") {
        CHECK_THROWS_AS(Config::parse("r1 0.5\n"), ValidationError);
    }
    SUBCASE("missing required keys are named") {
        try {
            config.get_double("r2");
            FAIL("missing key accepted");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("r2") != std::string::npos);
        }
    }
    SUBCASE("malformed shift pairs are rejected") {
        const Config broken = Config::parse("shifts = 1:0, 2-3\n");
        CHECK_THROWS_AS(broken.get_shift_list("shifts"), ValidationError);
    }
}

TEST_CASE("config hash tracks content and overrides") {
    const Config a = Config::parse("r1 = 0.5\nr2 = 0.5\n");
    const Config b = Config::parse("r2 = 0.5\nr1 = 0.5\n");
    const Config c = Config::parse("r1 = 0.5\nr2 = 0.6\n");
    CHECK(a.hash_hex() == b.hash_hex());
    CHECK(a.hash_hex() != c.hash_hex());
    CHECK(a.hash_hex().size() == 16);
    Config d = Config::parse("r1 = 0.5\nr2 = 0.5\n");
    d.set("seed.rng", "7");
    CHECK(d.hash_hex() != a.hash_hex());
}

TEST_CASE("reports render sections and a machine-readable trailer") {
    Report report("sample report");
    report.section("alpha");
    report.kv("value", 0.125);
    report.kv("flag", "yes");
    report.section("beta");
    report.line("free text");
    report.trailer("version", "0.1.0");
    report.trailer("status", "ok");
    const std::string text = report.render();
    CHECK(text.find("sample report\n=============\n") == 0);
    CHECK(text.find("[alpha]\nvalue = 0.125\nflag = yes\n") != std::string::npos);
    CHECK(text.find("[beta]\nfree text\n") != std::string::npos);
    CHECK(text.find("[trailer]\nversion = 0.1.0\nstatus = ok\n") != std::string::npos);
    CHECK(format_double(-0.0) == "0");
}

TEST_CASE("lattice snapshots round-trip through JSON") {
    const auto cyl = make_cylinder(0.5, 0.7, 48);
    const auto seed = random_plus_loop(11, 48, 0.4, 0.3);
    const auto lattice = build_lattice(cyl, seed, Window{-1, 2, -1, 1});
    const fs::path dir = case_dir("roundtrip");
    const std::string path = (dir / "lattice.json").string();
    save_lattice(lattice, path);
    const DressedLattice loaded = load_lattice(path);
    CHECK(loaded.degree() == lattice.degree());
    CHECK(loaded.window().m0 == -1);
    CHECK(loaded.window().m1 == 2);
    for (int n = -1; n <= 1; ++n) {
        for (int m = -1; m <= 2; ++m) {
            CHECK(loop_max_diff(loaded.frame(m, n), lattice.frame(m, n)) == 0.0);
            CHECK(loop_max_diff(loaded.plus(m, n), lattice.plus(m, n)) == 0.0);
        }
    }

    SUBCASE("corrupt snapshots surface as I/O errors") {
        const std::string bad = (dir / "bad.json").string();
        write_text_file(bad, "{\"format\": \"cmcdress-lattice\"");
        CHECK_THROWS_AS(load_lattice(bad), IoError);
        write_text_file(bad, "{\"format\": \"something-else\"}");
        CHECK_THROWS_AS(load_lattice(bad), IoError);
        CHECK_THROWS_AS(load_lattice((dir / "absent.json").string()), IoError);
    }
}

TEST_CASE("seed loops round-trip and are validated on load") {
    const auto seed = random_plus_loop(5, 12, 0.5, 0.4);
    const fs::path dir = case_dir("seedfile");
    const std::string path = (dir / "seed.json").string();
    save_seed_loop(seed, path);
    const TwistedLoop loaded = load_seed_loop(path, 24);
    CHECK(loaded.degree() == 24);
    CHECK(loaded.truncated(12).norm_inf() == seed.norm_inf());
    CHECK(loop_max_diff(loaded.truncated(12), seed) == 0.0);
    CHECK_THROWS_AS(load_seed_loop(path, 8), ValidationError);

    const std::string rough = (dir / "unitary.json").string();
    save_seed_loop(random_unitary_loop(5, 12), rough);
    CHECK_THROWS_AS(load_seed_loop(rough, 24), ValidationError);
}

TEST_CASE("cylinder command writes mesh, metric, and a clean report") {
    const fs::path dir = case_dir("cylinder");
    const std::string cfg = (dir / "run.cfg").string();
    write_text_file(cfg, base_config(10));

    std::string console;
    const int code = invoke({"cylinder", "--config", cfg, "--out", (dir / "out").string()},
                            &console);
    REQUIRE(code == 0);
    CHECK(console.find("wrote") != std::string::npos);

    const std::string obj = read_text_file((dir / "out" / "surface.obj").string());
    CHECK(count_lines_starting(obj, "v ") == 100);
    CHECK(count_lines_starting(obj, "f ") == 81);

    const std::string report = read_text_file((dir / "out" / "report.txt").string());
    CHECK(report_value(report, "sinh_gordon") < 1e-10);
    CHECK(report_value(report, "zero_curvature") < 1e-10);
    CHECK(report_value(report, "closing") < 1e-10);
    CHECK(report.find("config_hash = ") != std::string::npos);
    CHECK(report.find("version = 0.1.0") != std::string::npos);
    CHECK(report.find("command = cylinder") != std::string::npos);

    // cylinder invariance: every metric row repeats the same u and v lengths
    const std::string csv = read_text_file((dir / "out" / "metric.csv").string());
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "m,n,len_u,len_v");
    double len_u = 0.0, len_v = 0.0;
    bool first = true;
    int data_rows = 0;
    while (std::getline(rows, line)) {
        const std::size_t c2 = line.find(',', line.find(',') + 1);
        char* rest = nullptr;
        const double u = std::strtod(line.c_str() + c2 + 1, &rest);
        const double v = std::strtod(rest + 1, nullptr);
        if (first) {
            len_u = u;
            len_v = v;
            first = false;
        }
        CHECK(std::abs(u - len_u) < 1e-9);
        CHECK(std::abs(v - len_v) < 1e-9);
        ++data_rows;
    }
    CHECK(data_rows == 81);

    SUBCASE("identity-seed dress reproduces the cylinder mesh byte for byte") {
        const int dress_code =
            invoke({"dress", "--config", cfg, "--out", (dir / "dressed").string(), "--quiet"});
        REQUIRE(dress_code == 0);
        CHECK(read_text_file((dir / "dressed" / "surface.obj").string()) == obj);
    }
}

TEST_CASE("dress command is deterministic and carries rng provenance") {
    const fs::path dir = case_dir("dress");
    const std::string cfg = (dir / "run.cfg").string();
    write_text_file(cfg, base_config(6, "seed.kind = rng\nseed.rng = 2024\nseed.decay = 0.45\n"
                                        "seed.amplitude = 0.35\n"));

    std::string console;
    REQUIRE(invoke({"dress", "--config", cfg, "--out", (dir / "a").string()}, &console) == 0);
    REQUIRE(invoke({"dress", "--config", cfg, "--out", (dir / "b").string(), "--quiet"}) == 0);

    const std::string report_a = read_text_file((dir / "a" / "report.txt").string());
    CHECK(report_a.find("kind = rng") != std::string::npos);
    CHECK(report_a.find("rng = 2024") != std::string::npos);
    CHECK(report_value(report_a, "unitarity") < 1e-9);
    const auto worsts = report_values(report_a, "worst");
    REQUIRE(worsts.size() == 2);
    CHECK(worsts[0] < 1e-9);

    CHECK(read_text_file((dir / "a" / "report.txt").string()) ==
          read_text_file((dir / "b" / "report.txt").string()));
    CHECK(read_text_file((dir / "a" / "surface.obj").string()) ==
          read_text_file((dir / "b" / "surface.obj").string()));
    CHECK(read_text_file((dir / "a" / "lattice.json").string()) ==
          read_text_file((dir / "b" / "lattice.json").string()));

    SUBCASE("the --seed flag selects an rng seed without config keys") {
        const std::string plain = (dir / "plain.cfg").string();
        write_text_file(plain, base_config(4));
        std::string seeded_console;
        REQUIRE(invoke({"dress", "--config", plain, "--out", (dir / "s7").string(), "--seed",
                        "7"},
                       &seeded_console) == 0);
        const std::string report = read_text_file((dir / "s7" / "report.txt").string());
        CHECK(report.find("kind = rng") != std::string::npos);
        CHECK(report.find("rng = 7") != std::string::npos);
        REQUIRE(invoke({"dress", "--config", plain, "--out", (dir / "s8").string(), "--seed",
                        "8", "--quiet"}) == 0);
        CHECK(read_text_file((dir / "s7" / "surface.obj").string()) !=
              read_text_file((dir / "s8" / "surface.obj").string()));
    }

    SUBCASE("export rebuilds the mesh from the lattice snapshot") {
        const std::string exp_cfg = (dir / "exp.cfg").string();
        write_text_file(exp_cfg, "out.obj = again.obj\n");
        REQUIRE(invoke({"export", (dir / "a" / "lattice.json").string(), "--config", exp_cfg,
                        "--out", (dir / "exp").string(), "--quiet"}) == 0);
        CHECK(read_text_file((dir / "exp" / "again.obj").string()) ==
              read_text_file((dir / "a" / "surface.obj").string()));
    }

    SUBCASE("a seed file drives the dress run") {
        const std::string seed_path = (dir / "seed.json").string();
        save_seed_loop(random_plus_loop(33, 16, 0.4, 0.3), seed_path);
        const std::string file_cfg = (dir / "file.cfg").string();
        write_text_file(file_cfg,
                        base_config(4, "seed.kind = file\nseed.file = " + seed_path + "\n"));
        REQUIRE(invoke({"dress", "--config", file_cfg, "--out", (dir / "f").string(),
                        "--quiet"}) == 0);
        const std::string report = read_text_file((dir / "f" / "report.txt").string());
        CHECK(report.find("kind = file") != std::string::npos);
        CHECK(report_value(report, "unitarity") < 1e-9);
    }
}

TEST_CASE("verify command certifies vacuum shifts and rejects dressed ones") {
    const fs::path dir = case_dir("verify");
    const std::string cfg = (dir / "vac.cfg").string();
    write_text_file(cfg, base_config(8));
    REQUIRE(invoke({"cylinder", "--config", cfg, "--out", (dir / "vac").string(), "--quiet"}) ==
            0);

    const std::string ver_cfg = (dir / "ver.cfg").string();
    write_text_file(ver_cfg, "lattice = " + (dir / "vac" / "lattice.json").string() +
                                 "\nshifts = 1:0, 0:1, 2:3\n");
    std::string console;
    REQUIRE(invoke({"verify", "--config", ver_cfg, "--out", (dir / "rep").string()}, &console) ==
            0);
    CHECK(console.find("accepted 3 of 3") != std::string::npos);
    const std::string report = read_text_file((dir / "rep" / "report.txt").string());
    CHECK(count_lines_starting(report, "accepted = yes") == 3);
    for (const double phase : report_values(report, "phase")) CHECK(std::abs(phase) < 1e-9);
    CHECK(report.find("command = verify") != std::string::npos);

    SUBCASE("a dressed lattice fails the metric stage") {
        const std::string dress_cfg = (dir / "drs.cfg").string();
        write_text_file(dress_cfg, base_config(6, "seed.kind = rng\nseed.rng = 91\n"));
        REQUIRE(invoke({"dress", "--config", dress_cfg, "--out", (dir / "drs").string(),
                        "--quiet"}) == 0);
        const std::string rej_cfg = (dir / "rej.cfg").string();
        write_text_file(rej_cfg, "lattice = " + (dir / "drs" / "lattice.json").string() +
                                     "\nshifts = 1:1\n");
        REQUIRE(invoke({"verify", "--config", rej_cfg, "--out", (dir / "rej").string(),
                        "--quiet"}) == 0);
        const std::string rejected = read_text_file((dir / "rej" / "report.txt").string());
        CHECK(rejected.find("accepted = no") != std::string::npos);
        CHECK(rejected.find("failed_stage = metric") != std::string::npos);
    }

    SUBCASE("the identity shift is a usage error") {
        const std::string zero_cfg = (dir / "zero.cfg").string();
        write_text_file(zero_cfg, "lattice = " + (dir / "vac" / "lattice.json").string() +
                                      "\nshifts = 0:0\n");
        std::string errors;
        CHECK(invoke({"verify", "--config", zero_cfg}, nullptr, &errors) == 1);
        CHECK(errors.find("identity shift") != std::string::npos);
    }

    SUBCASE("a missing lattice file is an I/O error") {
        const std::string gone_cfg = (dir / "gone.cfg").string();
        write_text_file(gone_cfg, "lattice = " + (dir / "nowhere.json").string() +
                                      "\nshifts = 1:0\n");
        std::string errors;
        CHECK(invoke({"verify", "--config", gone_cfg}, nullptr, &errors) == 3);
        CHECK(errors.find("i/o error") != std::string::npos);
    }
}

TEST_CASE("spectral command reports residues, conditions, and the curve") {
    const fs::path dir = case_dir("spectral");
    const std::string cyl_cfg = (dir / "cyl.cfg").string();
    write_text_file(cyl_cfg, "r1 = 0.5\nr2 = 0.5\nN = 48\nspectral.k = 2\nspectral.l = 0\n");
    REQUIRE(invoke({"spectral", "--config", cyl_cfg, "--out", (dir / "cyl").string(),
                    "--quiet"}) == 0);
    const std::string cyl_report = read_text_file((dir / "cyl" / "report.txt").string());
    CHECK(cyl_report.find("necessary = pass") != std::string::npos);
    CHECK(cyl_report.find("sufficient = pass") != std::string::npos);
    CHECK(cyl_report.find("lambda_plus = 1-") != std::string::npos);  // residue +1
    CHECK(cyl_report.find("(expected 1)") != std::string::npos);
    CHECK(cyl_report.find("(expected -1)") != std::string::npos);
    CHECK(report_value(cyl_report, "residue_worst_error") < 1e-6);
    CHECK(report_value(cyl_report, "residue_sum_error") < 1e-6);
    CHECK(cyl_report.find("skipped: a2 vanishes identically") != std::string::npos);
    CHECK(cyl_report.find("b_cycle = skipped") != std::string::npos);

    SUBCASE("the genus-1 curve lists its branch pair and flat a-cycle") {
        const std::string g1_cfg = (dir / "g1.cfg").string();
        write_text_file(g1_cfg,
                        "r1 = 0.5\nr2 = 0.5\nN = 48\nspectral.k = 2\nspectral.l = 0\n"
                        "spectral.a2.num = -1, 2.5, -1\nspectral.a2.den = 0, 5\n");
        REQUIRE(invoke({"spectral", "--config", g1_cfg, "--out", (dir / "g1").string(),
                        "--quiet"}) == 0);
        const std::string report = read_text_file((dir / "g1" / "report.txt").string());
        CHECK(report.find("genus = 1") != std::string::npos);
        CHECK(report.find("pair_1 = 0.5+0i <-> 2+0i") != std::string::npos);
        CHECK(report_value(report, "cycle_max") < 1e-6);
        CHECK(report.find("b_cycle = unsupported") != std::string::npos);
        CHECK(report.find("a2_range = [0.") != std::string::npos);
    }

    SUBCASE("an odd shift is rejected") {
        const std::string odd_cfg = (dir / "odd.cfg").string();
        write_text_file(odd_cfg, "r1 = 0.5\nr2 = 0.5\nspectral.k = 3\nspectral.l = 0\n");
        std::string errors;
        CHECK(invoke({"spectral", "--config", odd_cfg}, nullptr, &errors) == 1);
        CHECK(errors.find("even") != std::string::npos);
    }

    SUBCASE("malformed polynomial lists name the offending element") {
        const std::string bad_cfg = (dir / "bad.cfg").string();
        write_text_file(bad_cfg, "r1 = 0.5\nr2 = 0.5\nspectral.k = 2\nspectral.l = 0\n"
                                 "spectral.a2.num = 0.5+, 1\n");
        std::string errors;
        CHECK(invoke({"spectral", "--config", bad_cfg}, nullptr, &errors) == 1);
        CHECK(errors.find("element 1") != std::string::npos);
        CHECK(errors.find("line 5") != std::string::npos);
    }
}

TEST_CASE("usage and configuration mistakes map to exit code 1") {
    const fs::path dir = case_dir("errors");
    std::string errors;

    SUBCASE("no subcommand") { CHECK(invoke({}, nullptr, &errors) == 1); }
    SUBCASE("help exits cleanly") {
        std::string console;
        CHECK(invoke({"--help"}, &console, &errors) == 0);
        CHECK(console.find("cylinder") != std::string::npos);
    }
    SUBCASE("missing config flag") {
        CHECK(invoke({"cylinder"}, nullptr, &errors) == 1);
    }
    SUBCASE("unknown config key") {
        const std::string cfg = (dir / "bad.cfg").string();
        write_text_file(cfg, "r1 = 0.5\nbogus = 1\n");
        CHECK(invoke({"cylinder", "--config", cfg}, nullptr, &errors) == 1);
        CHECK(errors.find("line 2") != std::string::npos);
    }
    SUBCASE("window must contain the origin") {
        const std::string cfg = (dir / "win.cfg").string();
        write_text_file(cfg, "r1 = 0.5\nr2 = 0.5\nN = 48\nwindow.m0 = 1\nwindow.m1 = 3\n"
                             "window.n0 = 0\nwindow.n1 = 3\n");
        CHECK(invoke({"cylinder", "--config", cfg}, nullptr, &errors) == 1);
        CHECK(errors.find("(0, 0)") != std::string::npos);
    }
    SUBCASE("missing config file is an I/O error") {
        CHECK(invoke({"cylinder", "--config", (dir / "absent.cfg").string()}, nullptr,
                     &errors) == 3);
    }
    SUBCASE("quiet suppresses the console summary") {
        const std::string cfg = (dir / "ok.cfg").string();
        write_text_file(cfg, base_config(2));
        std::string console;
        CHECK(invoke({"cylinder", "--config", cfg, "--out", (dir / "q").string(), "--quiet"},
                     &console) == 0);
        CHECK(console.empty());
    }
}
