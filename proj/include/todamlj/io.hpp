#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "todamlj/analysis.hpp"
#include "todamlj/normal_form.hpp"

namespace todamlj {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Full round-trip decimal formatting (17 significant digits).
std::string format_g17(double x);

// CSV emitters.  All numeric fields use format_g17 so downstream plotting
// never re-quantizes.
std::string csv_delta_table(const std::vector<DeltaRow>& rows);

struct PotentialTableRow {
    double x;
    double v;          // NaN marks a domain failure
    bool ok;
    double toda, diff; // filled when compare is set
};
std::string csv_potential_table(const std::vector<PotentialTableRow>& rows, bool compare);

std::string csv_section(const SectionRun& run);                       // orbit,y,py,t_cross
std::string csv_lyapunov(const LyapunovSeries& s, bool per_member);   // t,chi_mean,chi_min,chi_max[,chi_NNN...]

// JSON documents with full run metadata.
nlohmann::ordered_json section_json(const SectionRun& run, const std::string& potential_desc);
nlohmann::ordered_json lyapunov_json(const LyapunovSeries& s, const std::string& potential_desc,
                                     int n, double eps, const IntegratorConfig& cfg);

/// Record of one CLI invocation; replaying the stored argv on the same build
/// reproduces the outputs bit-exactly.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    nlohmann::ordered_json parameters;
    std::uint64_t seed = 0;
    std::string artifact_version = kArtifactVersion;
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace todamlj
