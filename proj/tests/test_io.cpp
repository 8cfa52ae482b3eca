#include <doctest.h>

#include <cstdlib>

#include "todamlj/io.hpp"
#include "todamlj/rng.hpp"

using namespace todamlj;

TEST_SUITE_BEGIN("io");

TEST_CASE("g17 formatting round-trips doubles exactly") {
    Rng rng(8128);
    for (int i = 0; i < 200; ++i) {
        double x = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        const std::string s = format_g17(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_g17(0.0) == "0");
}

TEST_CASE("delta table csv schema") {
    const std::vector<int> js = {4};
    const auto rows = delta_table(6, js, 3);
    const std::string csv = csv_delta_table(rows);
    CHECK(csv.substr(0, csv.find('\n')) == "n,m,n_over_m,j,delta");
    CHECK(csv.find("12,6,2,4,") != std::string::npos);
}

TEST_CASE("lyapunov csv carries per-member columns only when asked") {
    LyapunovSeries s;
    s.n_samples = 2;
    s.times = {1.0, 2.0};
    s.chi_mean = {0.5, 0.25};
    s.chi_min = {0.4, 0.2};
    s.chi_max = {0.6, 0.3};
    s.chi_samples = {{0.4, 0.2}, {0.6, 0.3}};
    const std::string base = csv_lyapunov(s, false);
    CHECK(base.substr(0, base.find('\n')) == "t,chi_mean,chi_min,chi_max");
    const std::string members = csv_lyapunov(s, true);
    CHECK(members.find("chi_000") != std::string::npos);
    CHECK(members.find("chi_001") != std::string::npos);
}

TEST_CASE("manifest json round trip") {
    RunManifest m;
    m.command = "coeffs";
    m.argv = {"coeffs", "--m", "6"};
    m.parameters["m"] = 6;
    m.seed = 42;
    m.outputs = {"coeffs.csv"};
    const auto j = m.to_json();
    const RunManifest r = RunManifest::from_json(j);
    CHECK(r.command == m.command);
    CHECK(r.argv == m.argv);
    CHECK(r.seed == 42);
    CHECK(r.artifact_version == kArtifactVersion);
    CHECK(r.outputs == m.outputs);
}

TEST_SUITE_END();
