#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "todamlj/chain.hpp"

#ifndef CLI_BIN
#error "CLI_BIN must point at the command-line binary"
#endif

namespace {

namespace fs = std::filesystem;

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

Csv parse_csv(const fs::path& p) {
    Csv csv;
    std::istringstream in(slurp(p));
    std::string line;
    REQUIRE(std::getline(in, line));
    std::istringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) csv.header.push_back(field);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        while (std::getline(ls, field, ',')) row.push_back(std::strtod(field.c_str(), nullptr));
        csv.rows.push_back(row);
    }
    return csv;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

struct WorkDir {
    fs::path old = fs::current_path();
    WorkDir() {
        fs::remove_all("cli_test_out");
        fs::create_directories("cli_test_out");
        fs::current_path("cli_test_out");
    }
    ~WorkDir() { fs::current_path(old); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("coeffs: values, grid contract, determinism") {
    WorkDir wd;
    REQUIRE(run_cli("coeffs --m 6 --j 4 --nmax-ratio 32 --out c1.csv") == 0);
    const Csv c = parse_csv("c1.csv");
    CHECK(c.header == std::vector<std::string>{"n", "m", "n_over_m", "j", "delta"});
    CHECK(c.rows.size() == 31);  // n = 12..192 step 6
    CHECK(c.rows.front()[0] == 12);
    CHECK(c.rows.back()[0] == 192);
    CHECK(c.rows.front()[4] == doctest::Approx(-0.1587).epsilon(5e-3));

    REQUIRE(run_cli("coeffs --m 6 --j 4 --nmax-ratio 32 --out c2.csv") == 0);
    CHECK(slurp("c1.csv") == slurp("c2.csv"));

    REQUIRE(run_cli("coeffs --m 6 --format json --out c.json") == 0);
    const auto j = nlohmann::json::parse(slurp("c.json"));
    CHECK(j["kind"] == "coefficient-table");
    CHECK(j["rows"].size() == 31u * 4u);
}

TEST_CASE("usage errors exit with code 2") {
    WorkDir wd;
    CHECK(run_cli("coeffs --no-such-flag") == 2);
    CHECK(run_cli("potential-table --potential toda --n 12") == 2);
    CHECK(run_cli("potential-table --potential nosuch") == 2);
    CHECK(run_cli("lyapunov --potential toda --scheme rk4 --tmax 1 --N 4 --samples 1") == 2);
}

TEST_CASE("potential-table: comparison columns and convergence") {
    WorkDir wd;
    REQUIRE(run_cli("potential-table --potential mlj-normalized --n 12 --m 6 --lambda -2 "
                    "--xmin -1 --xmax 2 --points 201 --compare toda --out v12.csv") == 0);
    REQUIRE(run_cli("potential-table --potential mlj-normalized --n 192 --m 6 --lambda -2 "
                    "--xmin -1 --xmax 2 --points 201 --compare toda --out v192.csv") == 0);
    REQUIRE(run_cli("potential-table --potential taylor --order 3 --lambda -2 "
                    "--xmin -1 --xmax 2 --points 201 --compare toda --out t3.csv") == 0);
    const Csv v12 = parse_csv("v12.csv"), v192 = parse_csv("v192.csv"), t3 = parse_csv("t3.csv");
    CHECK(v12.header == std::vector<std::string>{"x", "V", "toda", "diff"});

    auto max_abs_diff = [](const Csv& c) {
        double m = 0.0;
        for (const auto& r : c.rows) m = std::max(m, std::fabs(r[3]));
        return m;
    };
    CHECK(max_abs_diff(v192) < max_abs_diff(v12));  // convergence with n

    // the x = 0 row of a normalized potential is exactly zero
    for (const auto& r : v12.rows)
        if (r[0] == 0.0) CHECK(r[1] == 0.0);

    // at x = 2 the cubic truncation is a worse stand-in than the 12-6 form
    const auto at = [](const Csv& c, double x) {
        for (const auto& r : c.rows)
            if (std::fabs(r[0] - x) < 1e-12) return std::fabs(r[3]);
        REQUIRE(false);
        return 0.0;
    };
    CHECK(at(t3, 2.0) > at(v12, 2.0));
}

TEST_CASE("poincare: outputs, manifest replay reproduces bytes") {
    WorkDir wd;
    REQUIRE(run_cli("poincare --potential toda --lambda -2 --energy 1 --orbits 2 "
                    "--crossings 25 --seed 7 --out sec.csv") == 0);
    const Csv sec = parse_csv("sec.csv");
    CHECK(sec.header == std::vector<std::string>{"orbit", "y", "py", "t_cross"});
    CHECK(sec.rows.size() == 50);
    CHECK(fs::exists("sec.csv.json"));
    CHECK(fs::exists("sec.csv.manifest.json"));

    const std::string bytes = slurp("sec.csv");
    REQUIRE(run_cli("replay sec.csv.manifest.json") == 0);
    CHECK(slurp("sec.csv") == bytes);

    CHECK(run_cli("poincare --potential toda --energy -5 --orbits 1 --crossings 5") == 3);
}

TEST_CASE("lyapunov: csv schema, per-member columns, partial runs exit 4") {
    WorkDir wd;
    REQUIRE(run_cli("lyapunov --potential toda --N 8 --eps 0.1 --tmax 50 --samples 3 "
                    "--seed 3 --per-member --out chi.csv") == 0);
    const Csv chi = parse_csv("chi.csv");
    REQUIRE(chi.header.size() == 7);  // t, mean, min, max + 3 member columns
    CHECK(chi.header[0] == "t");
    CHECK(chi.header[4] == "chi_000");
    for (const auto& r : chi.rows) {
        CHECK(r[2] <= r[1]);
        CHECK(r[1] <= r[3]);
    }
    const auto j = nlohmann::json::parse(slurp("chi.csv.json"));
    CHECK(j["complete"] == true);
    CHECK(j["N"] == 8);

    // members that hit the repulsive pole abort; the run is flagged partial
    CHECK(run_cli("lyapunov --potential mlj-normalized --n 12 --m 6 --N 8 --eps 50 "
                  "--dt 0.05 --tmax 20 --samples 2 --seed 1 --out bad.csv") == 4);
    const auto jb = nlohmann::json::parse(slurp("bad.csv.json"));
    CHECK(jb["complete"] == false);
}

TEST_CASE("sample: snapshot round-trips through the library") {
    WorkDir wd;
    REQUIRE(run_cli("sample --N 6 --eps 0.25 --boundary periodic --seed 11 --out st.json") == 0);
    const auto j = nlohmann::json::parse(slurp("st.json"));
    CHECK(j["N"] == 6);
    CHECK(j["boundary"] == "periodic");
    CHECK(j["eps"] == 0.25);
    const todamlj::ChainState s = todamlj::state_from_json(j);
    const todamlj::ChainState expect =
        todamlj::sample_state(6, 0.25, todamlj::Boundary::PeriodicRing, 11);
    CHECK(s.positions == expect.positions);
    CHECK(s.momenta == expect.momenta);
}

TEST_CASE("output directory env override") {
    WorkDir wd;
    fs::create_directories("elsewhere");
    REQUIRE(run_cli("coeffs --m 6 --j 4") == 0);
    CHECK(fs::exists("coeffs.csv"));
    setenv("TODAMLJ_OUTDIR", "elsewhere", 1);
    const int rc = run_cli("coeffs --m 6 --j 4");
    unsetenv("TODAMLJ_OUTDIR");
    REQUIRE(rc == 0);
    CHECK(fs::exists("elsewhere/coeffs.csv"));
    CHECK(slurp("coeffs.csv") == slurp("elsewhere/coeffs.csv"));
}

TEST_SUITE_END();
