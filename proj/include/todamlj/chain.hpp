#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "todamlj/potentials.hpp"

namespace todamlj {

enum class Boundary { FixedEnds, PeriodicRing };

enum class FrameKind { Molecular, Normalized };

/// Coordinate frame of a chain state.  Molecular states carry absolute
/// particle positions and the physical constants (mass, equilibrium spacing a,
/// well depth eps0); normalized states carry displacement/momentum pairs of
/// the rescaled Hamiltonian with unit mass.
struct Frame {
    FrameKind kind = FrameKind::Normalized;
    double mass = 1.0, a = 1.0, eps0 = 1.0;

    static Frame normalized() { return {}; }
    static Frame molecular(double mass, double a, double eps0) {
        return {FrameKind::Molecular, mass, a, eps0};
    }
};

/** State of an N-particle chain.

    Vectors hold the free particles only.  With fixed ends the walls are
    virtual particles pinned at their lattice sites (zero displacement, zero
    momentum), so a state of N free particles has N+1 bonds; a periodic ring
    of N particles has N bonds.  In the molecular frame the fixed walls sit at
    x=0 and x=(N+1)a and a ring closes with period L=Na.
*/
struct ChainState {
    std::vector<double> positions;
    std::vector<double> momenta;
    Boundary boundary = Boundary::FixedEnds;
    Frame frame = Frame::normalized();

    int n() const { return static_cast<int>(positions.size()); }
};

int bond_count(const ChainState& s);

/// Displacement argument of bond b (0-based, left to right): the quantity the
/// pair potential is evaluated at.  Molecular: interparticle distance;
/// normalized: difference of neighbour displacements.
double bond_stretch(const ChainState& s, int b);

/// Total energy, kinetic plus sum of the pair potential over all bonds.
/// Throws DomainError naming the bond if a bond leaves the potential domain.
double energy(const ChainState& s, const Potential& pot);

/// Time derivative of the momenta (minus the potential-part gradient):
/// force_i = d1(right bond) - d1(left bond).  In the normalized frame
/// d^2 zeta_i/dt^2 = force_i; in the molecular frame p_i' = force_i.
void forces(const ChainState& s, const Potential& pot, std::span<double> out);
std::vector<double> forces(const ChainState& s, const Potential& pot);

/** The two-step rescaling connecting the molecular chain to its normalized
    form:
        x_i = a (site_i + w zeta_i),   p_i = a sqrt(mass phi2a) w eta_i,
    with w = lambda phi2a / (a phi3a), carried out together with the time
    rescaling t = sqrt(mass/phi2a) tau.  Composition of two canonical maps
    with valences a^2 sqrt(mass phi2a) and w^2; energies are related by
        H(x,p) = a^2 phi2a w^2 Hnorm(zeta,eta) + n_bonds * phi_min.
*/
struct CanonicalMap {
    double a;        // equilibrium spacing
    double mass;     // particle mass
    double phi2a;    // second derivative of the molecular potential at a
    double w;        // lambda * phi2a / (a * phi3a)
    double lambda;   // target third derivative of the normal form
    double phi_min;  // molecular potential value at a (the well bottom)

    double time_scale() const;                    // sqrt(mass/phi2a)
    double valence1() const;                      // a^2 sqrt(mass*phi2a)
    double valence2() const { return w * w; }
    double hamiltonian_scale() const;             // a^2 * phi2a * w^2
    double energy_offset(int n_bonds) const { return n_bonds * phi_min; }

    static CanonicalMap for_mlj(const MljPotential& p, double lambda, double mass);
};

/// Frame conversions; reject states already in the target frame.
ChainState to_normalized(const ChainState& s, const CanonicalMap& map);
ChainState to_molecular(const ChainState& s, const CanonicalMap& map);

/// Energy prescription: either a total E or a specific energy eps = E/N.
struct EnergySpec {
    enum class Kind { Total, Specific } kind;
    double value;

    static EnergySpec total(double e);
    static EnergySpec specific(double eps);
    double specific_for(int n) const { return kind == Kind::Specific ? value : value / n; }
};

/** Random initial data at exactly the requested specific energy.

    Positions at equilibrium; momenta i.i.d. standard normal from the seeded
    stream, mean-projected for a ring (baricenter at rest), then rescaled so
    that energy/N = eps to machine precision.  Deterministic in
    (n, eps, boundary, seed).
*/
ChainState sample_state(int n, double eps, Boundary boundary, std::uint64_t seed);

/// JSON snapshot {N, boundary, frame, positions[], momenta[], seed?, eps?}.
nlohmann::ordered_json state_to_json(const ChainState& s,
                                     std::optional<std::uint64_t> seed = std::nullopt,
                                     std::optional<double> eps = std::nullopt);
ChainState state_from_json(const nlohmann::json& j);

}  // namespace todamlj
