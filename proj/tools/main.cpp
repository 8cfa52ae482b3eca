// Command-line front end: coefficient tables, potential tables, Poincare
// sections of the three-particle ring, and finite-time Lyapunov indicators,
// with reproducible seeded runs and a manifest written next to every output.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "todamlj/analysis.hpp"
#include "todamlj/io.hpp"
#include "todamlj/normal_form.hpp"

using namespace todamlj;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitPartial = 4;

std::string out_dir() {
    if (const char* env = std::getenv("TODAMLJ_OUTDIR")) return env;
    return ".";
}

std::string default_path(const std::string& name) {
    return (std::filesystem::path(out_dir()) / name).string();
}

// Flags selecting one member of the potential family.  Every flag that the
// chosen family does not use is rejected at parse time.
struct PotentialFlags {
    std::string family;
    double lambda = -2.0;
    int n = 12, m = 6;
    double eps0 = 1.0, a = 1.0;
    int order = 4;
    double alpha = -1.0, beta = 2.0, gamma = 0.0;
    double delta = 0.5;

    CLI::Option* family_opt = nullptr;
    std::map<std::string, CLI::Option*> opts;

    void add_to(CLI::App* cmd, bool normalized_only) {
        family_opt = cmd->add_option("--potential", family,
                                     normalized_only
                                         ? "potential family: toda|mlj-normalized|taylor|fpu|ratio-limit"
                                         : "potential family: toda|mlj|mlj-normalized|taylor|fpu|ratio-limit")
                         ->required();
        opts["lambda"] = cmd->add_option("--lambda", lambda, "third derivative at the minimum");
        opts["n"] = cmd->add_option("--n", n, "repulsive exponent");
        opts["m"] = cmd->add_option("--m", m, "attractive exponent");
        opts["eps0"] = cmd->add_option("--eps0", eps0, "well depth (molecular mlj)");
        opts["a"] = cmd->add_option("--a", a, "equilibrium distance (molecular mlj)");
        opts["order"] = cmd->add_option("--order", order, "truncation order (taylor)");
        opts["alpha"] = cmd->add_option("--alpha", alpha, "cubic coefficient (fpu)");
        opts["beta"] = cmd->add_option("--beta", beta, "quartic coefficient (fpu)");
        opts["gamma"] = cmd->add_option("--gamma", gamma, "quintic coefficient (fpu)");
        opts["delta"] = cmd->add_option("--delta", delta, "exponent ratio (ratio-limit)");
    }

    void reject_unused(const std::vector<std::string>& allowed) const {
        for (const auto& [name, opt] : opts) {
            if (opt->count() == 0) continue;
            if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
                throw CLI::ValidationError("--" + name + " does not apply to potential family '" +
                                           family + "'");
        }
    }

    std::unique_ptr<Potential> build(bool normalized_only) const {
        if (family == "toda") {
            reject_unused({"lambda"});
            return std::make_unique<TodaPotential>(lambda);
        }
        if (family == "mlj" && !normalized_only) {
            reject_unused({"n", "m", "eps0", "a"});
            return std::make_unique<MljPotential>(n, m, eps0, a);
        }
        if (family == "mlj-normalized") {
            reject_unused({"n", "m", "lambda"});
            return std::make_unique<NormalizedMljPotential>(n, m, lambda);
        }
        if (family == "taylor") {
            reject_unused({"order", "lambda"});
            return std::make_unique<TaylorTodaPotential>(order, lambda);
        }
        if (family == "fpu") {
            reject_unused({"alpha", "beta", "gamma"});
            return std::make_unique<FpuPotential>(alpha, beta, gamma);
        }
        if (family == "ratio-limit") {
            reject_unused({"delta", "lambda"});
            return std::make_unique<RatioLimitPotential>(delta, lambda);
        }
        throw CLI::ValidationError("unknown potential family '" + family + "'");
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["family"] = family;
        if (family == "toda" || family == "mlj-normalized" || family == "taylor" ||
            family == "ratio-limit")
            j["lambda"] = lambda;
        if (family == "mlj" || family == "mlj-normalized") {
            j["n"] = n;
            j["m"] = m;
        }
        if (family == "mlj") {
            j["eps0"] = eps0;
            j["a"] = a;
        }
        if (family == "taylor") j["order"] = order;
        if (family == "fpu") {
            j["alpha"] = alpha;
            j["beta"] = beta;
            j["gamma"] = gamma;
        }
        if (family == "ratio-limit") j["delta"] = delta;
        return j;
    }
};

void write_manifest(const std::string& command, const std::vector<std::string>& argv,
                    const nlohmann::ordered_json& parameters, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
    RunManifest m;
    m.command = command;
    m.argv = argv;
    m.parameters = parameters;
    m.seed = seed;
    m.outputs = outputs;
    write_file(outputs.front() + ".manifest.json", m.to_json().dump(2) + "\n");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "verlet") return Scheme::Verlet;
    if (s == "yoshida4") return Scheme::Yoshida4;
    throw CLI::ValidationError("unknown scheme '" + s + "' (verlet|yoshida4)");
}

int run(const std::vector<std::string>& args);

// ------------------------------- subcommands --------------------------------

struct CoeffsCmd {
    int m = 6;
    std::vector<int> j_list = {4, 5, 6, 7};
    int nmax_ratio = 32;
    std::string format = "csv";
    std::string out;

    int execute(const std::vector<std::string>& argv) {
        const auto rows = delta_table(m, j_list, nmax_ratio);
        if (out.empty()) out = default_path(format == "json" ? "coeffs.json" : "coeffs.csv");
        std::string payload;
        if (format == "csv") {
            payload = csv_delta_table(rows);
        } else if (format == "json") {
            nlohmann::ordered_json j;
            j["kind"] = "coefficient-table";
            j["artifact_version"] = kArtifactVersion;
            j["m"] = m;
            j["j"] = j_list;
            j["nmax_ratio"] = nmax_ratio;
            auto arr = nlohmann::ordered_json::array();
            for (const auto& r : rows)
                arr.push_back({{"n", r.n}, {"n_over_m", r.ratio}, {"j", r.j}, {"delta", r.delta}});
            j["rows"] = std::move(arr);
            payload = j.dump(2) + "\n";
        } else {
            throw CLI::ValidationError("unknown --format '" + format + "' (csv|json)");
        }
        write_file(out, payload);
        nlohmann::ordered_json params;
        params["m"] = m;
        params["j"] = j_list;
        params["nmax_ratio"] = nmax_ratio;
        params["format"] = format;
        write_manifest("coeffs", argv, params, 0, {out});
        return kExitOk;
    }
};

struct PotentialTableCmd {
    PotentialFlags pot;
    double xmin = -1.0, xmax = 2.0;
    int points = 201;
    std::string compare;  // "toda" appends the reference and the difference
    std::string out;

    int execute(const std::vector<std::string>& argv) {
        if (!compare.empty() && compare != "toda")
            throw CLI::ValidationError("--compare accepts only 'toda'");
        if (points < 2) throw CLI::ValidationError("--points must be at least 2");
        const auto p = pot.build(false);
        std::optional<TodaPotential> toda;
        if (!compare.empty()) toda.emplace(pot.lambda);

        std::vector<PotentialTableRow> rows;
        int failed = 0;
        for (int i = 0; i < points; ++i) {
            PotentialTableRow r{};
            r.x = xmin + (xmax - xmin) * i / (points - 1);
            try {
                r.v = p->value(r.x);
                r.ok = true;
            } catch (const DomainError&) {
                r.v = std::nan("");
                r.ok = false;
                ++failed;
            }
            if (toda) {
                r.toda = toda->value(r.x);
                r.diff = r.v - r.toda;
            }
            rows.push_back(r);
        }
        if (out.empty()) out = default_path("potential_table.csv");
        write_file(out, csv_potential_table(rows, toda.has_value()));
        if (failed > 0)
            std::cerr << "potential-table: " << failed << " of " << points
                      << " grid points outside the domain (marked nan)\n";
        nlohmann::ordered_json params;
        params["potential"] = pot.to_json();
        params["xmin"] = xmin;
        params["xmax"] = xmax;
        params["points"] = points;
        params["compare"] = compare;
        write_manifest("potential-table", argv, params, 0, {out});
        return failed == points ? kExitInfeasible : kExitOk;
    }
};

struct PoincareCmd {
    PotentialFlags pot;
    double energy = 1.0;
    int orbits = 40, crossings = 400;
    std::uint64_t seed = 1;
    double dt = 0.0;
    int threads = 1;
    std::string out;

    int execute(const std::vector<std::string>& argv) {
        const auto p = pot.build(true);
        PoincareConfig cfg;
        cfg.dt = dt;
        cfg.threads = threads;
        const SectionRun run = poincare_section(*p, energy, orbits, crossings, seed, cfg);
        if (out.empty()) out = default_path("poincare.csv");
        const std::string json_path = out + ".json";
        write_file(out, csv_section(run));
        write_file(json_path, section_json(run, p->describe()).dump(2) + "\n");

        nlohmann::ordered_json params;
        params["potential"] = pot.to_json();
        params["energy"] = energy;
        params["orbits"] = orbits;
        params["crossings"] = crossings;
        params["seed"] = seed;
        params["dt"] = run.dt;
        params["threads"] = threads;
        write_manifest("poincare", argv, params, seed, {out, json_path});

        int incomplete = 0;
        for (const auto& o : run.orbits)
            if (static_cast<int>(o.points.size()) < crossings) ++incomplete;
        if (incomplete > 0) {
            std::cerr << "poincare: " << incomplete
                      << " orbit(s) ended early (escape or step budget); output is partial\n";
            return kExitPartial;
        }
        return kExitOk;
    }
};

struct LyapunovCmd {
    PotentialFlags pot;
    int n = 32;
    double eps = 0.1;
    double tmax = 1e5;
    int samples = 24;
    std::uint64_t seed = 1;
    double dt = 0.02;
    std::string scheme = "yoshida4";
    int renorm = 10;
    std::string boundary = "fixed";
    int threads = 1;
    bool per_member = false;
    std::string out;

    int execute(const std::vector<std::string>& argv) {
        const auto p = pot.build(true);
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.scheme = parse_scheme(scheme);
        cfg.renorm_interval = renorm;
        Boundary bc;
        if (boundary == "fixed")
            bc = Boundary::FixedEnds;
        else if (boundary == "periodic")
            bc = Boundary::PeriodicRing;
        else
            throw CLI::ValidationError("--boundary accepts fixed|periodic");

        const auto series = lyapunov_series(*p, n, eps, tmax, samples, seed, cfg, bc, threads);
        if (out.empty()) out = default_path("lyapunov.csv");
        const std::string json_path = out + ".json";
        write_file(out, csv_lyapunov(series, per_member));
        write_file(json_path, lyapunov_json(series, p->describe(), n, eps, cfg).dump(2) + "\n");

        nlohmann::ordered_json params;
        params["potential"] = pot.to_json();
        params["N"] = n;
        params["eps"] = eps;
        params["tmax"] = tmax;
        params["samples"] = samples;
        params["seed"] = seed;
        params["dt"] = dt;
        params["scheme"] = scheme;
        params["renorm"] = renorm;
        params["boundary"] = boundary;
        params["threads"] = threads;
        params["per_member"] = per_member;
        write_manifest("lyapunov", argv, params, seed, {out, json_path});

        if (!series.complete) {
            std::cerr << "lyapunov: incomplete run, aborted members:\n";
            for (const auto& msg : series.aborted) std::cerr << "  " << msg << "\n";
            return kExitPartial;
        }
        return kExitOk;
    }
};

struct SampleCmd {
    int n = 32;
    double eps = 0.1;
    std::string boundary = "fixed";
    std::uint64_t seed = 1;
    std::string out;

    int execute(const std::vector<std::string>& argv) {
        Boundary bc;
        if (boundary == "fixed")
            bc = Boundary::FixedEnds;
        else if (boundary == "periodic")
            bc = Boundary::PeriodicRing;
        else
            throw CLI::ValidationError("--boundary accepts fixed|periodic");
        const ChainState s = sample_state(n, eps, bc, seed);
        if (out.empty()) out = default_path("state.json");
        write_file(out, state_to_json(s, seed, eps).dump(2) + "\n");
        nlohmann::ordered_json params;
        params["N"] = n;
        params["eps"] = eps;
        params["boundary"] = boundary;
        params["seed"] = seed;
        write_manifest("sample", argv, params, seed, {out});
        return kExitOk;
    }
};

int run(const std::vector<std::string>& args) {
    CLI::App app{"Chain-potential normal forms, sections and chaos indicators"};
    app.require_subcommand(1);

    CoeffsCmd coeffs;
    auto* c = app.add_subcommand("coeffs", "normalized-coefficient table (delta_j vs n/m)");
    c->add_option("--m", coeffs.m, "attractive exponent")->capture_default_str();
    c->add_option("--j", coeffs.j_list, "orders j >= 4")->delimiter(',')->capture_default_str();
    c->add_option("--nmax-ratio", coeffs.nmax_ratio, "largest n/m")->capture_default_str();
    c->add_option("--format", coeffs.format, "csv|json")->capture_default_str();
    c->add_option("--out", coeffs.out, "output file");

    PotentialTableCmd table;
    auto* t = app.add_subcommand("potential-table", "grid evaluation of one potential");
    table.pot.add_to(t, false);
    t->add_option("--xmin", table.xmin)->capture_default_str();
    t->add_option("--xmax", table.xmax)->capture_default_str();
    t->add_option("--points", table.points)->capture_default_str();
    t->add_option("--compare", table.compare, "append a reference column: toda");
    t->add_option("--out", table.out, "output file");

    PoincareCmd poincare;
    auto* s = app.add_subcommand("poincare", "section of the three-particle ring");
    poincare.pot.add_to(s, true);
    s->add_option("--energy", poincare.energy)->capture_default_str();
    s->add_option("--orbits", poincare.orbits)->capture_default_str();
    s->add_option("--crossings", poincare.crossings)->capture_default_str();
    s->add_option("--seed", poincare.seed)->capture_default_str();
    s->add_option("--dt", poincare.dt, "0 = automatic")->capture_default_str();
    s->add_option("--threads", poincare.threads)->capture_default_str();
    s->add_option("--out", poincare.out, "output CSV (JSON written next to it)");

    LyapunovCmd lyap;
    auto* l = app.add_subcommand("lyapunov", "ensemble finite-time Lyapunov indicator");
    lyap.pot.add_to(l, true);
    l->add_option("--N", lyap.n)->capture_default_str();
    l->add_option("--eps", lyap.eps, "specific energy E/N")->capture_default_str();
    l->add_option("--tmax", lyap.tmax)->capture_default_str();
    l->add_option("--samples", lyap.samples)->capture_default_str();
    l->add_option("--seed", lyap.seed)->capture_default_str();
    l->add_option("--dt", lyap.dt)->capture_default_str();
    l->add_option("--scheme", lyap.scheme, "verlet|yoshida4")->capture_default_str();
    l->add_option("--renorm", lyap.renorm, "renormalization stride")->capture_default_str();
    l->add_option("--boundary", lyap.boundary, "fixed|periodic")->capture_default_str();
    l->add_option("--threads", lyap.threads)->capture_default_str();
    l->add_flag("--per-member", lyap.per_member, "emit one chi column per member");
    l->add_option("--out", lyap.out, "output CSV (JSON written next to it)");

    SampleCmd sample;
    auto* sm = app.add_subcommand("sample", "seeded initial state snapshot (JSON)");
    sm->add_option("--N", sample.n)->capture_default_str();
    sm->add_option("--eps", sample.eps)->capture_default_str();
    sm->add_option("--boundary", sample.boundary, "fixed|periodic")->capture_default_str();
    sm->add_option("--seed", sample.seed)->capture_default_str();
    sm->add_option("--out", sample.out, "output file");

    std::string manifest_path;
    auto* r = app.add_subcommand("replay", "re-run a recorded manifest");
    r->add_option("manifest", manifest_path, "path to a .manifest.json")->required();

    try {
        // CLI11 parses argv-style reversed vectors
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return kExitOk;
        }
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (c->parsed()) return coeffs.execute(args);
        if (t->parsed()) return table.execute(args);
        if (s->parsed()) return poincare.execute(args);
        if (l->parsed()) return lyap.execute(args);
        if (sm->parsed()) return sample.execute(args);
        if (r->parsed()) {
            const auto m = RunManifest::from_json(nlohmann::json::parse(read_file(manifest_path)));
            return run(m.argv);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}
