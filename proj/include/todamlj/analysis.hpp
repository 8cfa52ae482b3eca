#pragma once

#include <cstdint>
#include <vector>

#include "todamlj/dynamics.hpp"

namespace todamlj {

/** Center-of-mass-free coordinates of the three-particle ring.

    X = (z0 + z1 - 2 z2)/sqrt(6), Y = (z0 - z1)/sqrt(2), momenta by the same
    orthogonal matrix.  Any rotation of this basis gives a diffeomorphic
    section; this one is fixed as the artifact convention.  The reduction is
    canonical: on the zero-total-momentum manifold the reduced Hamiltonian
    (PX^2+PY^2)/2 + U(X,Y) equals the full three-particle energy.
*/
struct ReducedRingCoords {
    double X, Y, PX, PY;
};

/// Requires a normalized 3-particle ring with total momentum zero.
ReducedRingCoords reduce_ring3(const ChainState& s);

/// Zero-baricenter representative with the given reduced coordinates.
ChainState ring3_from_reduced(const ReducedRingCoords& r);

/// Potential part of the reduced Hamiltonian at (X, Y).
double ring3_reduced_potential(const Potential& pot, double X, double Y);

/// Full reduced Hamiltonian (PX^2+PY^2)/2 + U(X,Y).
double ring3_reduced_energy(const Potential& pot, const ReducedRingCoords& r);

/// One section crossing: X=0 upward (PX>0), refined to |X| <= 1e-10.
/// px and x_abs record the crossing state for membership/energy checks; the
/// CSV output carries only (orbit, y, py, t_cross).
struct SectionPoint {
    double y, py;
    double t_cross;
    double px = 0.0;     // momentum conjugate to the section coordinate, > 0
    double x_abs = 0.0;  // |X| after refinement
};

struct SectionOrbit {
    double y0, py0;                    // initial condition on the section
    std::vector<SectionPoint> points;  // t_cross strictly increasing
    bool escaped = false;              // left the accessible region (unbounded potential)
};

struct PoincareConfig {
    double dt = 0.0;             // <= 0: choose 0.006/sqrt(max(1,E)) automatically
    Scheme scheme = Scheme::Yoshida4;
    double crossing_tol = 1e-10;
    double max_time_per_orbit = 1e6;
    int threads = 1;
};

struct SectionRun {
    std::vector<SectionOrbit> orbits;
    double energy = 0.0;
    std::uint64_t seed = 0;
    int resampled = 0;           // initial conditions rejected as inaccessible
    double dt = 0.0;
    Scheme scheme = Scheme::Yoshida4;
};

/** Poincare section of the three-particle ring at total energy E.

    Initial conditions are sampled on the section (X=0, PX>0 closed by the
    energy) with (Y,PY) uniform over a bounding box of the accessible region,
    rejection-resampled from the seeded stream; each orbit is integrated until
    it has the requested number of upward crossings.  Crossings are located by
    a Hermite-interpolation guess followed by Newton/bisection micro-steps
    from the bracketing state, to |X| <= crossing_tol.

    Orbits use independent substreams, so results do not depend on the number
    of threads.  Throws std::invalid_argument if E <= 0.
*/
SectionRun poincare_section(const Potential& pot, double E, int n_orbits,
                            int crossings_per_orbit, std::uint64_t seed,
                            const PoincareConfig& cfg = {});

/** Regularity statistic of one orbit's section points.

    For every point, the RMS perpendicular residual of the principal-component
    line fitted through its knn nearest neighbours; the per-orbit medians and
    upper quantiles of those residuals, together with the point-set diameter.
    Points of an orbit confined to an invariant curve give residuals orders of
    magnitude below the diameter; area-filling orbits do not.
*/
struct OrbitRegularity {
    double diameter = 0.0;
    // branch-aware residuals: each neighbourhood may split into two collinear
    // clusters, so thin invariant curves near periodic orbits score low
    double residual_median = 0.0;
    double residual_p90 = 0.0;
    double residual_max = 0.0;
    // plain single-line residuals of the same neighbourhoods; an orbit that
    // fills an area keeps these at a finite fraction of its diameter
    double scatter_p90 = 0.0;
    double scatter_max = 0.0;
    int n_points = 0;
    bool escaped = false;

    /// The regularity gate: median local residual below `frac` of the diameter
    /// and no escape.  Orbits collapsed to a point count as regular.
    bool regular(double frac = 1e-3) const;
};

OrbitRegularity orbit_regularity(const SectionOrbit& orbit, int knn = 8);

/** Ensemble-averaged finite-time growth-rate indicator chi(t).

    chi(t, z, u) = log(|DF^t u| / |u|) / t for a trajectory from z and tangent
    vector u; chi_mean is the arithmetic mean over the sample members,
    recorded on a geometric time grid (~50 points per decade starting at
    10 dt).  Members that abort (domain error, non-finite state) leave the
    run flagged incomplete.
*/
struct LyapunovSeries {
    std::vector<double> times;
    std::vector<double> chi_mean, chi_min, chi_max;
    std::vector<std::vector<double>> chi_samples;  // [member][time index]
    int n_samples = 0;
    std::uint64_t seed = 0;
    bool complete = true;
    std::vector<std::string> aborted;  // diagnostics of aborted members
};

/// chi_mean at the recorded time closest to t.
double chi_at(const LyapunovSeries& s, double t);

LyapunovSeries lyapunov_series(const Potential& pot, int n, double eps, double t_max,
                               int n_samples, std::uint64_t seed,
                               const IntegratorConfig& cfg,
                               Boundary boundary = Boundary::FixedEnds,
                               int threads = 1);

}  // namespace todamlj
