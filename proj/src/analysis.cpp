#include "todamlj/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "todamlj/rng.hpp"

namespace todamlj {

namespace {

const double kInvSqrt6 = 1.0 / std::sqrt(6.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kSqrt32 = std::sqrt(1.5);

void run_parallel(int n_tasks, int threads, const std::function<void(int)>& task) {
    if (threads <= 1 || n_tasks <= 1) {
        for (int i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) task(i);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    const int k = std::min(threads, n_tasks);
    pool.reserve(k);
    for (int i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

//------------------------------- ring reduction -------------------------------

ReducedRingCoords reduce_ring3(const ChainState& s) {
    if (s.n() != 3 || s.boundary != Boundary::PeriodicRing ||
        s.frame.kind != FrameKind::Normalized)
        throw std::invalid_argument("reduce_ring3: need a normalized 3-particle ring");
    const double psum = s.momenta[0] + s.momenta[1] + s.momenta[2];
    double pscale = 1.0;
    for (double p : s.momenta) pscale = std::max(pscale, std::fabs(p));
    if (std::fabs(psum) > 1e-9 * pscale)
        throw std::invalid_argument("reduce_ring3: total momentum is not zero");
    return {
        (s.positions[0] + s.positions[1] - 2.0 * s.positions[2]) * kInvSqrt6,
        (s.positions[0] - s.positions[1]) * kInvSqrt2,
        (s.momenta[0] + s.momenta[1] - 2.0 * s.momenta[2]) * kInvSqrt6,
        (s.momenta[0] - s.momenta[1]) * kInvSqrt2,
    };
}

ChainState ring3_from_reduced(const ReducedRingCoords& r) {
    ChainState s;
    s.boundary = Boundary::PeriodicRing;
    s.frame = Frame::normalized();
    s.positions = {r.X * kInvSqrt6 + r.Y * kInvSqrt2, r.X * kInvSqrt6 - r.Y * kInvSqrt2,
                   -2.0 * r.X * kInvSqrt6};
    s.momenta = {r.PX * kInvSqrt6 + r.PY * kInvSqrt2, r.PX * kInvSqrt6 - r.PY * kInvSqrt2,
                 -2.0 * r.PX * kInvSqrt6};
    return s;
}

double ring3_reduced_potential(const Potential& pot, double X, double Y) {
    // the three bond stretches expressed in the reduced coordinates
    const double b0 = -2.0 * kInvSqrt2 * Y;
    const double b1 = -kSqrt32 * X + kInvSqrt2 * Y;
    const double b2 = kSqrt32 * X + kInvSqrt2 * Y;
    return pot.value(b0) + pot.value(b1) + pot.value(b2);
}

double ring3_reduced_energy(const Potential& pot, const ReducedRingCoords& r) {
    return 0.5 * (r.PX * r.PX + r.PY * r.PY) + ring3_reduced_potential(pot, r.X, r.Y);
}

//------------------------------ Poincare section ------------------------------

namespace {

// U(0, Y), with domain violations treated as an infinite wall.
double section_potential(const Potential& pot, double y) {
    try {
        const double u = ring3_reduced_potential(pot, 0.0, y);
        return std::isfinite(u) ? u : std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Nearest boundary of the accessible section interval on one side of Y=0:
// the first root of U(0,Y)=E, or the first local maximum of U below E (an
// open escape channel, possible for the unbounded truncated potentials).
double section_boundary(const Potential& pot, double E, double direction) {
    const double h = 1e-3;
    double prev_y = 0.0, prev_u = section_potential(pot, 0.0);
    for (double step = h;; step = std::min(step * 1.05, 0.05)) {
        const double y = prev_y + direction * step;
        if (std::fabs(y) > 1e4)
            throw std::invalid_argument("poincare_section: accessible region search diverged");
        const double u = section_potential(pot, y);
        if (u > E) {
            // bracketed a root of U = E
            double lo = prev_y, hi = y;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                (section_potential(pot, mid) > E ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        if (u < prev_u && std::fabs(prev_y) > h) return prev_y;  // passed a local maximum
        prev_y = y;
        prev_u = u;
    }
}

struct SectionFrame {
    double X, Y, PX, PY;
};

SectionFrame frame_of(const ChainState& s) {
    return {(s.positions[0] + s.positions[1] - 2.0 * s.positions[2]) * kInvSqrt6,
            (s.positions[0] - s.positions[1]) * kInvSqrt2,
            (s.momenta[0] + s.momenta[1] - 2.0 * s.momenta[2]) * kInvSqrt6,
            (s.momenta[0] - s.momenta[1]) * kInvSqrt2};
}

// Root of the cubic Hermite interpolant of X(t) on [0, dt].
double hermite_crossing_guess(double x0, double v0, double x1, double v1, double dt) {
    const double a = x0, b = v0;
    const double c = (3.0 * (x1 - x0) - dt * (2.0 * v0 + v1)) / (dt * dt);
    const double d = (2.0 * (x0 - x1) + dt * (v0 + v1)) / (dt * dt * dt);
    double t = x0 / (x0 - x1) * dt;  // secant start
    for (int it = 0; it < 8; ++it) {
        const double f = a + t * (b + t * (c + t * d));
        const double fp = b + t * (2.0 * c + 3.0 * t * d);
        if (fp == 0.0) break;
        t -= f / fp;
        t = std::clamp(t, 0.0, dt);
    }
    return t;
}

}  // namespace

SectionRun poincare_section(const Potential& pot, double E, int n_orbits,
                            int crossings_per_orbit, std::uint64_t seed,
                            const PoincareConfig& cfg) {
    if (!(E > 0.0)) throw std::invalid_argument("poincare_section: energy must be positive");
    if (n_orbits < 1 || crossings_per_orbit < 1)
        throw std::invalid_argument("poincare_section: counts must be positive");

    const double dt = cfg.dt > 0.0 ? cfg.dt : 0.006 / std::sqrt(std::max(1.0, E));
    IntegratorConfig icfg;
    icfg.dt = dt;
    icfg.scheme = cfg.scheme;

    const double y_lo = section_boundary(pot, E, -1.0);
    const double y_hi = section_boundary(pot, E, +1.0);
    if (!(y_lo < y_hi))
        throw std::invalid_argument("poincare_section: energy not reachable on the section");
    double u_min = 0.0;
    for (int i = 0; i <= 200; ++i)
        u_min = std::min(u_min, section_potential(pot, y_lo + (y_hi - y_lo) * i / 200.0));
    const double p_max = std::sqrt(2.0 * (E - u_min));
    const double escape_radius = 8.0 * std::max({std::fabs(y_lo), y_hi, p_max, 1.0});

    SectionRun run;
    run.energy = E;
    run.seed = seed;
    run.dt = dt;
    run.scheme = cfg.scheme;
    run.orbits.resize(n_orbits);
    std::vector<int> resampled(n_orbits, 0);

    run_parallel(n_orbits, cfg.threads, [&](int orbit_idx) {
        Rng rng(substream_seed(seed, orbit_idx));
        SectionOrbit& orbit = run.orbits[orbit_idx];

        // sample an accessible initial condition on the section
        double y = 0.0, py = 0.0, px = 0.0;
        for (;;) {
            y = rng.uniform(y_lo, y_hi);
            py = rng.uniform(-p_max, p_max);
            const double px2 = 2.0 * (E - section_potential(pot, y)) - py * py;
            if (px2 > 1e-12 * std::max(E, 1.0)) {
                px = std::sqrt(px2);
                break;
            }
            ++resampled[orbit_idx];
        }
        orbit.y0 = y;
        orbit.py0 = py;

        ChainState s = ring3_from_reduced({0.0, y, px, py});
        Integrator integ(pot, icfg);
        const long long max_steps = static_cast<long long>(cfg.max_time_per_orbit / dt);

        ChainState prev_state = s;
        SectionFrame prev = frame_of(s);
        double last_t_cross = 0.0;
        for (long long step = 1; step <= max_steps; ++step) {
            try {
                integ.step(s);
            } catch (const DomainError&) {
                orbit.escaped = true;  // bond driven onto the repulsive pole
                break;
            }
            const SectionFrame cur = frame_of(s);
            if (!std::isfinite(cur.X) || !std::isfinite(cur.PX) ||
                std::fabs(cur.X) > escape_radius || std::fabs(cur.Y) > escape_radius) {
                orbit.escaped = true;
                break;
            }
            if (prev.X < 0.0 && cur.X >= 0.0) {
                // refine the upward crossing: Hermite-interpolation guess, then
                // Newton/bisection micro-steps restarted from the bracket state
                double lo = 0.0, hi = dt;
                double delta =
                    std::clamp(hermite_crossing_guess(prev.X, prev.PX, cur.X, cur.PX, dt), 0.0, dt);
                SectionFrame ref = cur;
                bool located = false;
                for (int it = 0; it < 40; ++it) {
                    ChainState trial = prev_state;
                    if (delta > 0.0) integ.step_custom(trial, delta);
                    ref = frame_of(trial);
                    if (std::fabs(ref.X) <= cfg.crossing_tol) {
                        located = true;
                        break;
                    }
                    (ref.X < 0.0 ? lo : hi) = delta;
                    double next = delta - ref.X / ref.PX;  // Newton; PX > 0 near the crossing
                    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                    delta = next;
                }
                if (located && ref.PX > 0.0) {
                    const double t_cross = (step - 1) * dt + delta;
                    if (t_cross > last_t_cross) {
                        orbit.points.push_back(
                            {ref.Y, ref.PY, t_cross, ref.PX, std::fabs(ref.X)});
                        last_t_cross = t_cross;
                    }
                }
                if (static_cast<int>(orbit.points.size()) >= crossings_per_orbit) break;
            }
            prev = cur;
            prev_state = s;
        }
    });

    for (int r : resampled) run.resampled += r;
    return run;
}

//------------------------------ orbit regularity ------------------------------

namespace {

// RMS perpendicular spread of a 2D point cloud about its principal line
// (square root of the smaller covariance eigenvalue).
double pca_line_residual(const std::vector<double>& y, const std::vector<double>& p,
                         const std::vector<int>& sel) {
    const int k = static_cast<int>(sel.size());
    double my = 0.0, mp = 0.0;
    for (int t : sel) {
        my += y[t];
        mp += p[t];
    }
    my /= k;
    mp /= k;
    double syy = 0.0, spp = 0.0, syp = 0.0;
    for (int t : sel) {
        const double dy = y[t] - my, dp = p[t] - mp;
        syy += dy * dy;
        spp += dp * dp;
        syp += dy * dp;
    }
    syy /= k;
    spp /= k;
    syp /= k;
    const double tr = syy + spp;
    const double det = syy * spp - syp * syp;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return std::sqrt(std::max(0.0, tr / 2.0 - disc));
}

// Principal direction (unit vector) of the cloud.
void pca_axis(const std::vector<double>& y, const std::vector<double>& p,
              const std::vector<int>& sel, double& uy, double& up) {
    const int k = static_cast<int>(sel.size());
    double my = 0.0, mp = 0.0;
    for (int t : sel) {
        my += y[t];
        mp += p[t];
    }
    my /= k;
    mp /= k;
    double syy = 0.0, spp = 0.0, syp = 0.0;
    for (int t : sel) {
        const double dy = y[t] - my, dp = p[t] - mp;
        syy += dy * dy;
        spp += dp * dp;
        syp += dy * dp;
    }
    const double tr = syy + spp;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - (syy * spp - syp * syp)));
    const double l1 = tr / 2.0 + disc;
    // eigenvector of the larger eigenvalue
    if (std::fabs(syp) > 1e-300) {
        uy = l1 - spp;
        up = syp;
    } else if (syy >= spp) {
        uy = 1.0;
        up = 0.0;
    } else {
        uy = 0.0;
        up = 1.0;
    }
    const double norm = std::hypot(uy, up);
    uy /= norm;
    up /= norm;
}

// Local one-dimensionality residual of a neighbourhood.  A single principal
// line is tried first; if the neighbourhood straddles two nearby branches of
// a thin invariant curve (common close to periodic orbits), the single-line
// residual saturates at the branch separation, so the cloud is also split at
// the largest gap of the normal coordinate and fitted with one line per side.
// The residual is the smaller of the two descriptions.
double local_curve_residual(const std::vector<double>& y, const std::vector<double>& p,
                            const std::vector<int>& sel, double& unsplit) {
    const double whole = pca_line_residual(y, p, sel);
    unsplit = whole;
    const int k = static_cast<int>(sel.size());
    if (k < 6) return whole;

    double uy, up;
    pca_axis(y, p, sel, uy, up);
    // coordinates normal to the principal direction
    std::vector<std::pair<double, int>> normal(k);
    for (int t = 0; t < k; ++t)
        normal[t] = {-up * y[sel[t]] + uy * p[sel[t]], sel[t]};
    std::sort(normal.begin(), normal.end());
    int cut = -1;
    double best_gap = 0.0;
    for (int t = 2; t + 3 <= k; ++t) {  // at least 3 points on each side
        const double gap = normal[t + 1].first - normal[t].first;
        if (gap > best_gap) {
            best_gap = gap;
            cut = t;
        }
    }
    if (cut < 0) return whole;
    std::vector<int> a, b;
    for (int t = 0; t <= cut; ++t) a.push_back(normal[t].second);
    for (int t = cut + 1; t < k; ++t) b.push_back(normal[t].second);
    const double split = std::max(pca_line_residual(y, p, a), pca_line_residual(y, p, b));
    return std::min(whole, split);
}

}  // namespace

OrbitRegularity orbit_regularity(const SectionOrbit& orbit, int knn) {
    OrbitRegularity reg;
    reg.escaped = orbit.escaped;
    const int n = static_cast<int>(orbit.points.size());
    reg.n_points = n;
    if (n < 2) return reg;

    std::vector<double> ys(n), ps(n);
    for (int i = 0; i < n; ++i) {
        ys[i] = orbit.points[i].y;
        ps[i] = orbit.points[i].py;
    }

    double diam2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d2 = (ys[i] - ys[j]) * (ys[i] - ys[j]) + (ps[i] - ps[j]) * (ps[i] - ps[j]);
            diam2 = std::max(diam2, d2);
        }
    reg.diameter = std::sqrt(diam2);
    if (n < knn + 2 || reg.diameter == 0.0) return reg;

    std::vector<double> residuals(n), scatters(n);
    std::vector<double> dist2(n);
    std::vector<int> idx(n);
    std::vector<int> sel;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            dist2[j] = (ys[i] - ys[j]) * (ys[i] - ys[j]) + (ps[i] - ps[j]) * (ps[i] - ps[j]);
        std::iota(idx.begin(), idx.end(), 0);
        std::nth_element(idx.begin(), idx.begin() + knn, idx.end(),
                         [&](int a, int b) { return dist2[a] < dist2[b]; });
        sel.assign(idx.begin(), idx.begin() + knn + 1);  // the point itself included
        residuals[i] = local_curve_residual(ys, ps, sel, scatters[i]);
    }

    std::sort(residuals.begin(), residuals.end());
    std::sort(scatters.begin(), scatters.end());
    reg.residual_median = residuals[n / 2];
    reg.residual_p90 = residuals[static_cast<int>(0.9 * (n - 1))];
    reg.residual_max = residuals.back();
    reg.scatter_p90 = scatters[static_cast<int>(0.9 * (n - 1))];
    reg.scatter_max = scatters.back();
    return reg;
}

bool OrbitRegularity::regular(double frac) const {
    if (escaped) return false;
    if (diameter <= 1e-12) return true;  // collapsed to a fixed point of the map
    return residual_median <= frac * diameter;
}

//------------------------------ Lyapunov series -------------------------------

double chi_at(const LyapunovSeries& s, double t) {
    if (s.times.empty()) throw std::invalid_argument("chi_at: empty series");
    const auto it = std::lower_bound(s.times.begin(), s.times.end(), t);
    std::size_t i = it - s.times.begin();
    if (i == s.times.size()) return s.chi_mean.back();
    if (i > 0 && t - s.times[i - 1] < s.times[i] - t) --i;
    return s.chi_mean[i];
}

LyapunovSeries lyapunov_series(const Potential& pot, int n, double eps, double t_max,
                               int n_samples, std::uint64_t seed,
                               const IntegratorConfig& cfg, Boundary boundary, int threads) {
    if (!(t_max > 0.0)) throw std::invalid_argument("lyapunov_series: t_max must be positive");
    if (n_samples < 1) throw std::invalid_argument("lyapunov_series: need n_samples >= 1");

    const long long n_steps = std::llround(t_max / cfg.dt);
    if (n_steps < 1) throw std::invalid_argument("lyapunov_series: t_max below one step");

    // geometric record grid, ~50 points per decade from 10*dt, deduplicated,
    // always ending exactly at the final step
    std::vector<long long> record_steps;
    const double ratio = std::pow(10.0, 1.0 / 50.0);
    for (double t = 10.0 * cfg.dt; t < t_max * (1.0 - 1e-12); t *= ratio) {
        const long long step = std::max<long long>(1, std::llround(t / cfg.dt));
        if (step >= n_steps) break;
        if (record_steps.empty() || step > record_steps.back()) record_steps.push_back(step);
    }
    record_steps.push_back(n_steps);
    const std::size_t n_rec = record_steps.size();

    LyapunovSeries out;
    out.n_samples = n_samples;
    out.seed = seed;
    out.times.resize(n_rec);
    for (std::size_t i = 0; i < n_rec; ++i) out.times[i] = record_steps[i] * cfg.dt;
    out.chi_samples.assign(n_samples, std::vector<double>(n_rec,
                           std::numeric_limits<double>::quiet_NaN()));
    std::vector<std::string> abort_msg(n_samples);

    run_parallel(n_samples, threads, [&](int member) {
        try {
            ChainState s = sample_state(n, eps, boundary, substream_seed(seed, 2 * member));
            Rng trng(substream_seed(seed, 2 * member + 1));
            TangentVector u;
            u.dpos.resize(n);
            u.dmom.resize(n);
            for (int i = 0; i < n; ++i) {
                u.dpos[i] = trng.normal();
                u.dmom[i] = trng.normal();
            }
            u.scale(1.0 / u.norm());

            Integrator integ(pot, cfg);
            double log_acc = 0.0;
            std::size_t rec = 0;
            for (long long step = 1; step <= n_steps; ++step) {
                integ.step(s, u);
                if (step % cfg.renorm_interval == 0) {
                    const double g = u.norm();
                    if (!std::isfinite(g) || g == 0.0)
                        throw std::runtime_error("tangent norm degenerate at step " +
                                                 std::to_string(step));
                    log_acc += std::log(g);
                    u.scale(1.0 / g);
                }
                if (rec < n_rec && step == record_steps[rec]) {
                    const double chi = (log_acc + std::log(u.norm())) / (step * cfg.dt);
                    if (!std::isfinite(chi))
                        throw std::runtime_error("non-finite indicator at step " +
                                                 std::to_string(step));
                    out.chi_samples[member][rec] = chi;
                    ++rec;
                }
            }
        } catch (const std::exception& e) {
            abort_msg[member] = std::string("member ") + std::to_string(member) + ": " + e.what();
        }
    });

    for (int member = 0; member < n_samples; ++member)
        if (!abort_msg[member].empty()) {
            out.complete = false;
            out.aborted.push_back(abort_msg[member]);
        }

    out.chi_mean.assign(n_rec, 0.0);
    out.chi_min.assign(n_rec, std::numeric_limits<double>::infinity());
    out.chi_max.assign(n_rec, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n_rec; ++i) {
        int count = 0;
        for (int member = 0; member < n_samples; ++member) {
            const double v = out.chi_samples[member][i];
            if (!std::isfinite(v)) continue;
            out.chi_mean[i] += v;
            out.chi_min[i] = std::min(out.chi_min[i], v);
            out.chi_max[i] = std::max(out.chi_max[i], v);
            ++count;
        }
        if (count > 0) out.chi_mean[i] /= count;
    }
    return out;
}

}  // namespace todamlj
