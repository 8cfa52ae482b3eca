#include "todamlj/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace todamlj {

namespace {

// Difference of tangent displacements across bond b (walls contribute zero).
inline double tangent_stretch(const std::vector<double>& d, Boundary boundary, int b) {
    const int n = static_cast<int>(d.size());
    if (boundary == Boundary::FixedEnds) {
        const double left = (b == 0) ? 0.0 : d[b - 1];
        const double right = (b == n) ? 0.0 : d[b];
        return right - left;
    }
    return d[(b + 1) % n] - d[b];
}

}  // namespace

double TangentVector::norm() const {
    double s = 0.0;
    for (double v : dpos) s += v * v;
    for (double v : dmom) s += v * v;
    return std::sqrt(s);
}

void TangentVector::scale(double f) {
    for (double& v : dpos) v *= f;
    for (double& v : dmom) v *= f;
}

Integrator::Integrator(const Potential& pot, const IntegratorConfig& cfg)
    : pot_(&pot), cfg_(cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("Integrator: dt must be positive");
    if (cfg.renorm_interval < 1)
        throw std::invalid_argument("Integrator: renorm_interval must be >= 1");
}

void Integrator::kick(ChainState& s, TangentVector* u, double dt) {
    const int n = s.n();
    const int nb = bond_count(s);
    f_.resize(nb);
    if (u) df_.resize(nb);

    for (int b = 0; b < nb; ++b) {
        const double xi = bond_stretch(s, b);
        try {
            if (u) {
                double phi1, phi2;
                pot_->d1d2(xi, phi1, phi2);
                f_[b] = phi1;
                df_[b] = phi2 * tangent_stretch(u->dpos, s.boundary, b);
            } else {
                f_[b] = pot_->d1(xi);
            }
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (bond " + std::to_string(b) + ")",
                              e.offending_x(), b);
        }
    }
    // momentum change of particle i: dt * (d1(right bond) - d1(left bond));
    // with fixed ends particle i has bonds (i, i+1), on a ring (i-1 mod n, i)
    const bool ring = s.boundary == Boundary::PeriodicRing;
    for (int i = 0; i < n; ++i) {
        const int bl = ring ? (i + n - 1) % n : i;
        const int br = ring ? i : i + 1;
        s.momenta[i] += dt * (f_[br] - f_[bl]);
        if (u) u->dmom[i] += dt * (df_[br] - df_[bl]);
    }
}

void Integrator::verlet(ChainState& s, TangentVector* u, double dt) {
    const int n = s.n();
    const double inv_mass =
        s.frame.kind == FrameKind::Molecular ? 1.0 / s.frame.mass : 1.0;
    kick(s, u, 0.5 * dt);
    for (int i = 0; i < n; ++i) s.positions[i] += dt * inv_mass * s.momenta[i];
    if (u)
        for (int i = 0; i < n; ++i) u->dpos[i] += dt * inv_mass * u->dmom[i];
    kick(s, u, 0.5 * dt);
}

void Integrator::advance(ChainState& s, TangentVector* u, double dt) {
    if (u && (u->dpos.size() != s.positions.size() || u->dmom.size() != s.momenta.size()))
        throw std::invalid_argument("Integrator: tangent vector size mismatch");
    switch (cfg_.scheme) {
        case Scheme::Verlet:
            verlet(s, u, dt);
            break;
        case Scheme::Yoshida4: {
            // triple-jump composition: w1, w0, w1 with w1 = 1/(2-2^{1/3})
            const double cbrt2 = std::cbrt(2.0);
            const double w1 = 1.0 / (2.0 - cbrt2);
            const double w0 = -cbrt2 * w1;
            verlet(s, u, w1 * dt);
            verlet(s, u, w0 * dt);
            verlet(s, u, w1 * dt);
            break;
        }
    }
}

ChainState evolve(ChainState s, const Potential& pot, const IntegratorConfig& cfg,
                  double t_final, std::span<const Observer> observers) {
    if (!(t_final > 0.0)) throw std::invalid_argument("evolve: t_final must be positive");
    Integrator integ(pot, cfg);
    const long long n_steps = std::llround(t_final / cfg.dt);

    auto notify = [&](long long step) {
        for (const auto& obs : observers)
            if (obs.fn && step % obs.stride == 0) obs.fn(step, step * cfg.dt, s);
    };

    notify(0);
    for (long long step = 1; step <= n_steps; ++step) {
        try {
            integ.step(s);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (step " + std::to_string(step) + ")",
                              e.offending_x(), e.bond(), step);
        }
        notify(step);
    }
    return s;
}

}  // namespace todamlj
