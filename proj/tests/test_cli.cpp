// Drives the installed binary end to end: determinism and round-trip
// contracts on the CSV surface, and the exit-code map. Scenarios are kept
// tiny (few grid points, short t) so the whole file stays fast.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

// Scratch directory per test case; removed on destruction. run() shell-quotes
// nothing: paths under the scratch dir contain no spaces by construction.
struct CliRunner {
    fs::path dir;

    CliRunner() {
        std::string tmpl = (fs::temp_directory_path() / "oscbath_cli_XXXXXX").string();
        REQUIRE(mkdtemp(tmpl.data()) != nullptr);
        dir = tmpl;
    }
    ~CliRunner() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }

    fs::path path(const std::string& name) const { return dir / name; }

    int run(const std::string& args) const {
        const std::string cmd = std::string("\"") + OSCBATH_CLI_PATH + "\" " + args + " > " +
                                (dir / "stdout.txt").string() + " 2> " +
                                (dir / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        REQUIRE(status != -1);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const std::string& name) const {
        std::ifstream in(dir / name, std::ios::binary);
        REQUIRE(in.good());
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    }

    std::string captured_stderr() const { return slurp("stderr.txt"); }
};

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

constexpr const char* kHeader = "t,n0,term_memory,term_thermal,term_vacuum";

} // namespace

TEST_CASE("identical runs produce bit-identical CSV") {
    CliRunner cli;
    const std::string scenario = "simulate --t-end 10 --steps 5 --output ";
    REQUIRE(cli.run(scenario + cli.path("a.csv").string()) == 0);
    REQUIRE(cli.run(scenario + cli.path("b.csv").string()) == 0);
    const std::string a = cli.slurp("a.csv");
    CHECK(a == cli.slurp("b.csv"));
    CHECK(a.find('\r') == std::string::npos);
    CHECK(a.back() == '\n');
    const auto rows = lines_of(a);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == kHeader);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(fields_of(rows[i]).size() == 5);
}

TEST_CASE("the emitted config reproduces the run byte for byte") {
    CliRunner cli;
    REQUIRE(cli.run("simulate --approach bare --g 0.05 --beta 1.5 --t-end 8 --steps 4 --output " +
                    cli.path("a.csv").string()) == 0);
    REQUIRE(cli.run("simulate --config " + cli.path("a.csv.config").string() + " --output " +
                    cli.path("b.csv").string()) == 0);
    CHECK(cli.slurp("a.csv") == cli.slurp("b.csv"));
}

TEST_CASE("flags override config file values") {
    CliRunner cli;
    {
        std::ofstream cfg(cli.path("run.config"));
        cfg << "# scenario with coupling on\n";
        cfg << "approach = bare\n";
        cfg << "g = 0.05\n";
        cfg << "steps = 3\n";
        cfg << "t_end = 5\n";
    }
    REQUIRE(cli.run("simulate --config " + cli.path("run.config").string() + " --g 0 --output " +
                    cli.path("flat.csv").string()) == 0);
    const auto rows = lines_of(cli.slurp("flat.csv"));
    REQUIRE(rows.size() == 4);
    // g = 0 decouples the particle, so the flag winning shows as a constant
    // column at the initial occupation.
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(fields_of(rows[i])[1] == "1");
}

TEST_CASE("config errors exit 2") {
    CliRunner cli;
    const std::string out = " --output " + cli.path("x.csv").string();
    CHECK(cli.run("simulate --omega-bar -1 --steps 2 --t-end 2" + out) == 2);
    CHECK(cli.run("simulate --R 5 --steps 2 --t-end 2" + out) == 2);
    CHECK(cli.run("simulate --mode cavity --steps 2 --t-end 2" + out) == 2);
    CHECK(cli.run("simulate --steps 1" + out) == 2);
    CHECK(cli.run("simulate --t-start 5 --t-end 5" + out) == 2);
    CHECK(cli.run("simulate --log-grid --t-start 0 --t-end 5" + out) == 2);
    CHECK(cli.run("simulate --config " + cli.path("missing.config").string() + out) == 2);
    CHECK(cli.run("frobnicate") == 2);

    std::ofstream(cli.path("bad.config")) << "omega bar = 1\n";
    CHECK(cli.run("simulate --config " + cli.path("bad.config").string() + out) == 2);
    std::ofstream(cli.path("junk.config")) << "g = fast\n";
    CHECK(cli.run("simulate --config " + cli.path("junk.config").string() + out) == 2);
}

TEST_CASE("compare rejects mismatched grids") {
    CliRunner cli;
    std::ofstream(cli.path("a.config")) << "steps = 5\n";
    std::ofstream(cli.path("b.config")) << "steps = 7\n";
    CHECK(cli.run("compare --config-a " + cli.path("a.config").string() + " --config-b " +
                  cli.path("b.config").string() + " --output " + cli.path("d.csv").string()) == 2);
    CHECK(cli.captured_stderr().find("matching time grids") != std::string::npos);
}

TEST_CASE("quadrature failure exits 3 and names the failing time") {
    CliRunner cli;
    CHECK(cli.run("simulate --abs-tol 1e-300 --rel-tol 1e-300 --t-start 3 --t-end 5 --steps 2 "
                  "--output " +
                  cli.path("x.csv").string()) == 3);
    CHECK(cli.captured_stderr().find("at t = 3") != std::string::npos);
    CHECK(!fs::exists(cli.path("x.csv")));
}

TEST_CASE("runaway spectrum exits 4, negative frequency exits 2") {
    CliRunner cli;
    const std::string out = " --output " + cli.path("s.csv").string();
    CHECK(cli.run("spectrum --omega-bar 0 --R 10 --N 4" + out) == 4);
    CHECK(cli.run("spectrum --omega-bar -2 --R 10 --N 4" + out) == 2);
    CHECK(cli.run("spectrum --N 4" + out) == 2);
}

TEST_CASE("spectrum emits one interlaced mode table") {
    CliRunner cli;
    REQUIRE(cli.run("spectrum --R 10 --N 6 --output " + cli.path("s.csv").string()) == 0);
    const auto rows = lines_of(cli.slurp("s.csv"));
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == "r,Omega_r,t0_r");
    double previous = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto fields = fields_of(rows[i]);
        REQUIRE(fields.size() == 3);
        CHECK(fields[0] == std::to_string(i - 1));
        const double omega = std::stod(fields[1]);
        CHECK(omega > previous);
        previous = omega;
        CHECK(std::stod(fields[2]) > 0.0);
    }
}

TEST_CASE("verify fast passes and an injected fault is caught") {
    CliRunner cli;
    CHECK(cli.run("verify") == 0);
    CHECK(cli.run("verify --inject-fault") == 1);
    const auto report = cli.slurp("stdout.txt");
    CHECK(report.find("criterion 8 FAIL") != std::string::npos);
    CHECK(report.find("tampered") != std::string::npos);
}

TEST_CASE("decoupled scenarios are flat and approach-independent") {
    CliRunner cli;
    REQUIRE(cli.run("simulate --approach bare --g 0 --t-end 10 --steps 4 --output " +
                    cli.path("flat.csv").string()) == 0);
    for (const auto& row : lines_of(cli.slurp("flat.csv"))) {
        if (row == kHeader) continue;
        CHECK(fields_of(row)[1] == "1");
    }
    REQUIRE(cli.run("compare --g 0 --t-end 10 --steps 4 --output " +
                    cli.path("d.csv").string()) == 0);
    const auto rows = lines_of(cli.slurp("d.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "t,abs_diff");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(fields_of(rows[i])[1] == "0");
}

TEST_CASE("cavity mode runs both formalisms") {
    CliRunner cli;
    for (const std::string approach : {"bare", "dressed"}) {
        const fs::path out = cli.path(approach + ".csv");
        REQUIRE(cli.run("simulate --mode cavity --R 15 --N 16 --approach " + approach +
                        " --t-end 5 --steps 3 --output " + out.string()) == 0);
        const auto rows = lines_of(cli.slurp(approach + ".csv"));
        REQUIRE(rows.size() == 4);
        CHECK(rows[0] == kHeader);
    }
    // The cavity sidecar must round-trip too, including R/c/N.
    REQUIRE(cli.run("simulate --config " + cli.path("bare.csv.config").string() + " --output " +
                    cli.path("bare2.csv").string()) == 0);
    CHECK(cli.slurp("bare.csv") == cli.slurp("bare2.csv"));
}
