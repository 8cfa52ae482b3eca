#include "todamlj/chain.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "todamlj/rng.hpp"

namespace todamlj {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Lattice site index of stored particle i (walls occupy sites 0 and N+1 when
// the ends are fixed).
inline double site(const ChainState& s, int i) {
    return s.boundary == Boundary::FixedEnds ? i + 1 : i;
}

}  // namespace

int bond_count(const ChainState& s) {
    return s.boundary == Boundary::FixedEnds ? s.n() + 1 : s.n();
}

double bond_stretch(const ChainState& s, int b) {
    const int n = s.n();
    const bool molecular = s.frame.kind == FrameKind::Molecular;
    double left, right;
    if (s.boundary == Boundary::FixedEnds) {
        // bond b connects site b to site b+1; stored particle i sits at site i+1
        left = (b == 0) ? 0.0 : s.positions[b - 1];
        right = (b == n) ? (molecular ? (n + 1) * s.frame.a : 0.0) : s.positions[b];
    } else {
        left = s.positions[b];
        right = s.positions[(b + 1) % n];
        if (molecular && b == n - 1) right += n * s.frame.a;  // period L = N a
        return right - left;
    }
    return right - left;
}

double energy(const ChainState& s, const Potential& pot) {
    require(!s.positions.empty() && s.positions.size() == s.momenta.size(),
            "energy: positions/momenta must be nonempty and of equal size");
    const double inv_mass = s.frame.kind == FrameKind::Molecular ? 1.0 / s.frame.mass : 1.0;
    double kin = 0.0;
    for (double p : s.momenta) kin += p * p;
    kin *= 0.5 * inv_mass;

    double potential = 0.0;
    const int nb = bond_count(s);
    for (int b = 0; b < nb; ++b) {
        const double xi = bond_stretch(s, b);
        try {
            potential += pot.value(xi);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (bond " + std::to_string(b) + ")",
                              e.offending_x(), b);
        }
    }
    return kin + potential;
}

void forces(const ChainState& s, const Potential& pot, std::span<double> out) {
    const int n = s.n();
    require(static_cast<int>(out.size()) == n, "forces: output span has wrong size");
    const int nb = bond_count(s);
    std::vector<double> d1(nb);
    for (int b = 0; b < nb; ++b) {
        try {
            d1[b] = pot.d1(bond_stretch(s, b));
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (bond " + std::to_string(b) + ")",
                              e.offending_x(), b);
        }
    }
    // force_i = d1(bond right of i) - d1(bond left of i); with fixed ends
    // particle i has bonds (i, i+1), on a ring (i-1 mod n, i)
    const bool ring = s.boundary == Boundary::PeriodicRing;
    for (int i = 0; i < n; ++i) {
        const int bl = ring ? (i + n - 1) % n : i;
        const int br = ring ? i : i + 1;
        out[i] = d1[br] - d1[bl];
    }
}

std::vector<double> forces(const ChainState& s, const Potential& pot) {
    std::vector<double> f(s.positions.size());
    forces(s, pot, f);
    return f;
}

//------------------------------- CanonicalMap --------------------------------

double CanonicalMap::time_scale() const { return std::sqrt(mass / phi2a); }

double CanonicalMap::valence1() const { return a * a * std::sqrt(mass * phi2a); }

double CanonicalMap::hamiltonian_scale() const { return a * a * phi2a * w * w; }

CanonicalMap CanonicalMap::for_mlj(const MljPotential& p, double lambda, double mass) {
    require(mass > 0.0, "CanonicalMap: mass must be positive");
    require(lambda != 0.0, "CanonicalMap: lambda must be nonzero");
    CanonicalMap map;
    map.a = p.a();
    map.mass = mass;
    map.phi2a = p.deriv_at_min(2);
    const double phi3a = p.deriv_at_min(3);
    map.w = lambda * map.phi2a / (map.a * phi3a);
    map.lambda = lambda;
    map.phi_min = p.deriv_at_min(0);
    return map;
}

ChainState to_normalized(const ChainState& s, const CanonicalMap& map) {
    require(s.frame.kind == FrameKind::Molecular, "to_normalized: state must be molecular");
    ChainState out;
    out.boundary = s.boundary;
    out.frame = Frame::normalized();
    const int n = s.n();
    out.positions.resize(n);
    out.momenta.resize(n);
    const double pscale = map.a * std::sqrt(map.mass * map.phi2a) * map.w;
    for (int i = 0; i < n; ++i) {
        out.positions[i] = (s.positions[i] / map.a - site(s, i)) / map.w;
        out.momenta[i] = s.momenta[i] / pscale;
    }
    return out;
}

ChainState to_molecular(const ChainState& s, const CanonicalMap& map) {
    require(s.frame.kind == FrameKind::Normalized, "to_molecular: state must be normalized");
    ChainState out;
    out.boundary = s.boundary;
    out.frame = Frame::molecular(map.mass, map.a, -map.phi_min);
    const int n = s.n();
    out.positions.resize(n);
    out.momenta.resize(n);
    const double pscale = map.a * std::sqrt(map.mass * map.phi2a) * map.w;
    for (int i = 0; i < n; ++i) {
        out.positions[i] = map.a * (site(s, i) + map.w * s.positions[i]);
        out.momenta[i] = pscale * s.momenta[i];
    }
    return out;
}

//-------------------------------- EnergySpec ----------------------------------

EnergySpec EnergySpec::total(double e) {
    require(e >= 0.0, "EnergySpec: total energy must be >= 0");
    return {Kind::Total, e};
}

EnergySpec EnergySpec::specific(double eps) {
    require(eps >= 0.0, "EnergySpec: specific energy must be >= 0");
    return {Kind::Specific, eps};
}

//-------------------------------- sample_state --------------------------------

ChainState sample_state(int n, double eps, Boundary boundary, std::uint64_t seed) {
    require(n >= 2, "sample_state: need n >= 2");
    require(eps > 0.0, "sample_state: eps must be positive");

    ChainState s;
    s.boundary = boundary;
    s.frame = Frame::normalized();
    s.positions.assign(n, 0.0);
    s.momenta.resize(n);

    Rng rng(seed);
    for (int i = 0; i < n; ++i) s.momenta[i] = rng.normal();

    if (boundary == Boundary::PeriodicRing) {
        const double mean = std::accumulate(s.momenta.begin(), s.momenta.end(), 0.0) / n;
        for (double& p : s.momenta) p -= mean;
    }

    double kin2 = 0.0;  // twice the kinetic energy
    for (double p : s.momenta) kin2 += p * p;
    require(kin2 > 0.0, "sample_state: degenerate momentum draw");
    const double scale = std::sqrt(2.0 * eps * n / kin2);
    for (double& p : s.momenta) p *= scale;
    return s;
}

//------------------------------- JSON snapshot --------------------------------

nlohmann::ordered_json state_to_json(const ChainState& s,
                                     std::optional<std::uint64_t> seed,
                                     std::optional<double> eps) {
    nlohmann::ordered_json j;
    j["N"] = s.n();
    j["boundary"] = s.boundary == Boundary::FixedEnds ? "fixed" : "periodic";
    if (s.frame.kind == FrameKind::Normalized) {
        j["frame"] = "normalized";
    } else {
        j["frame"] = {{"kind", "molecular"},
                      {"mass", s.frame.mass},
                      {"a", s.frame.a},
                      {"eps0", s.frame.eps0}};
    }
    j["positions"] = s.positions;
    j["momenta"] = s.momenta;
    if (seed) j["seed"] = *seed;
    if (eps) j["eps"] = *eps;
    return j;
}

ChainState state_from_json(const nlohmann::json& j) {
    ChainState s;
    const std::string boundary = j.at("boundary").get<std::string>();
    if (boundary == "fixed")
        s.boundary = Boundary::FixedEnds;
    else if (boundary == "periodic")
        s.boundary = Boundary::PeriodicRing;
    else
        throw std::invalid_argument("state_from_json: unknown boundary '" + boundary + "'");

    const auto& frame = j.at("frame");
    if (frame.is_string() && frame.get<std::string>() == "normalized") {
        s.frame = Frame::normalized();
    } else if (frame.is_object() && frame.at("kind") == "molecular") {
        s.frame = Frame::molecular(frame.at("mass").get<double>(), frame.at("a").get<double>(),
                                   frame.at("eps0").get<double>());
    } else {
        throw std::invalid_argument("state_from_json: unknown frame");
    }

    s.positions = j.at("positions").get<std::vector<double>>();
    s.momenta = j.at("momenta").get<std::vector<double>>();
    if (s.positions.size() != s.momenta.size() ||
        s.positions.size() != j.at("N").get<std::size_t>())
        throw std::invalid_argument("state_from_json: inconsistent sizes");
    return s;
}

}  // namespace todamlj
