#include "todamlj/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace todamlj {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_delta_table(const std::vector<DeltaRow>& rows) {
    std::ostringstream os;
    os << "n,m,n_over_m,j,delta\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.n / r.ratio << ',' << r.ratio << ',' << r.j << ','
           << format_g17(r.delta) << '\n';
    return os.str();
}

std::string csv_potential_table(const std::vector<PotentialTableRow>& rows, bool compare) {
    std::ostringstream os;
    os << (compare ? "x,V,toda,diff\n" : "x,V\n");
    for (const auto& r : rows) {
        os << format_g17(r.x) << ',' << format_g17(r.v);
        if (compare) os << ',' << format_g17(r.toda) << ',' << format_g17(r.diff);
        os << '\n';
    }
    return os.str();
}

std::string csv_section(const SectionRun& run) {
    std::ostringstream os;
    os << "orbit,y,py,t_cross\n";
    for (std::size_t i = 0; i < run.orbits.size(); ++i)
        for (const auto& p : run.orbits[i].points)
            os << i << ',' << format_g17(p.y) << ',' << format_g17(p.py) << ','
               << format_g17(p.t_cross) << '\n';
    return os.str();
}

std::string csv_lyapunov(const LyapunovSeries& s, bool per_member) {
    std::ostringstream os;
    os << "t,chi_mean,chi_min,chi_max";
    if (per_member) {
        char name[16];
        for (int m = 0; m < s.n_samples; ++m) {
            std::snprintf(name, sizeof name, ",chi_%03d", m);
            os << name;
        }
    }
    os << '\n';
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        os << format_g17(s.times[i]) << ',' << format_g17(s.chi_mean[i]) << ','
           << format_g17(s.chi_min[i]) << ',' << format_g17(s.chi_max[i]);
        if (per_member)
            for (int m = 0; m < s.n_samples; ++m) os << ',' << format_g17(s.chi_samples[m][i]);
        os << '\n';
    }
    return os.str();
}

namespace {

const char* scheme_name(Scheme s) { return s == Scheme::Verlet ? "verlet" : "yoshida4"; }

}  // namespace

nlohmann::ordered_json section_json(const SectionRun& run, const std::string& potential_desc) {
    nlohmann::ordered_json j;
    j["kind"] = "poincare-section";
    j["artifact_version"] = kArtifactVersion;
    j["potential"] = potential_desc;
    j["energy"] = run.energy;
    j["seed"] = run.seed;
    j["dt"] = run.dt;
    j["scheme"] = scheme_name(run.scheme);
    j["resampled"] = run.resampled;
    auto orbits = nlohmann::ordered_json::array();
    for (const auto& o : run.orbits) {
        nlohmann::ordered_json jo;
        jo["y0"] = o.y0;
        jo["py0"] = o.py0;
        jo["escaped"] = o.escaped;
        jo["n_crossings"] = o.points.size();
        auto pts = nlohmann::ordered_json::array();
        for (const auto& p : o.points) pts.push_back({p.y, p.py, p.t_cross});
        jo["points"] = std::move(pts);
        orbits.push_back(std::move(jo));
    }
    j["orbits"] = std::move(orbits);
    return j;
}

nlohmann::ordered_json lyapunov_json(const LyapunovSeries& s, const std::string& potential_desc,
                                     int n, double eps, const IntegratorConfig& cfg) {
    nlohmann::ordered_json j;
    j["kind"] = "lyapunov-series";
    j["artifact_version"] = kArtifactVersion;
    j["potential"] = potential_desc;
    j["N"] = n;
    j["eps"] = eps;
    j["dt"] = cfg.dt;
    j["scheme"] = scheme_name(cfg.scheme);
    j["renorm_interval"] = cfg.renorm_interval;
    j["seed"] = s.seed;
    j["n_samples"] = s.n_samples;
    j["complete"] = s.complete;
    if (!s.aborted.empty()) j["aborted"] = s.aborted;
    j["t"] = s.times;
    j["chi_mean"] = s.chi_mean;
    j["chi_min"] = s.chi_min;
    j["chi_max"] = s.chi_max;
    j["chi_samples"] = s.chi_samples;
    return j;
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["argv"] = argv;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["artifact_version"] = artifact_version;
    j["outputs"] = outputs;
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.parameters = j.at("parameters");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << contents;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace todamlj
