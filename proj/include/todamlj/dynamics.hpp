#pragma once

#include <functional>
#include <span>
#include <vector>

#include "todamlj/chain.hpp"

namespace todamlj {

enum class Scheme { Verlet, Yoshida4 };

struct IntegratorConfig {
    double dt = 0.02;
    Scheme scheme = Scheme::Yoshida4;
    int renorm_interval = 10;  // tangent renormalization cadence, in steps
};

/// Phase-space displacement evolved by the linearized flow.
struct TangentVector {
    std::vector<double> dpos, dmom;

    double norm() const;
    void scale(double f);
};

/** Symplectic stepper for chain states, with optional tangent-map transport.

    Verlet is the kick-drift-kick leapfrog; the fourth-order scheme is the
    standard triple-jump composition of Verlet steps.  The tangent vector is
    advanced by the exact linearization of the chosen scheme: each kick uses
    the tridiagonal (cyclic for rings) Hessian action with d2 evaluated along
    the trajectory, so a combined state+tangent step costs one extra d2 pass
    per stage and stays O(N).

    Time bookkeeping is integer: t = step * dt, no accumulated floating time.
*/
class Integrator {
public:
    Integrator(const Potential& pot, const IntegratorConfig& cfg);

    void step(ChainState& s) { advance(s, nullptr, cfg_.dt); }
    void step(ChainState& s, TangentVector& u) { advance(s, &u, cfg_.dt); }

    /// One step of arbitrary size (used for section-crossing refinement).
    void step_custom(ChainState& s, double dt) { advance(s, nullptr, dt); }

    const IntegratorConfig& config() const { return cfg_; }

private:
    void advance(ChainState& s, TangentVector* u, double dt);
    void verlet(ChainState& s, TangentVector* u, double dt);
    void kick(ChainState& s, TangentVector* u, double dt);

    const Potential* pot_;
    IntegratorConfig cfg_;
    std::vector<double> f_, df_;  // scratch: forces and their linearization
};

/// Callback invoked at step 0 and every `stride` steps thereafter.
struct Observer {
    long long stride = 1;
    std::function<void(long long step, double t, const ChainState&)> fn;
};

/** Integrate for t_final (rounded to a whole number of steps, so the final
    time matches t_final within one dt).  Domain errors raised mid-run are
    rethrown with the step count attached.  The trajectory does not depend on
    the observer configuration.
*/
ChainState evolve(ChainState s, const Potential& pot, const IntegratorConfig& cfg,
                  double t_final, std::span<const Observer> observers = {});

}  // namespace todamlj
