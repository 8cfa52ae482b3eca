#pragma once

#include <memory>
#include <string>

#include "todamlj/errors.hpp"

namespace todamlj {

enum class PotentialKind { Toda, Mlj, NormalizedMlj, TaylorToda, Fpu, RatioLimit };

/** Common interface of the pair potentials.

    Every potential provides closed-form value and first three derivatives
    (needed by forces, tangent dynamics and normalization checks) plus exact
    derivatives of arbitrary order at its minimum (needed by the coefficient
    machinery).  No finite differences anywhere.  Objects are immutable after
    construction and safe to share between threads.
*/
class Potential {
public:
    virtual ~Potential() = default;

    virtual double value(double x) const = 0;
    virtual double d1(double x) const = 0;
    virtual double d2(double x) const = 0;
    virtual double d3(double x) const = 0;

    /// Value and second derivative in one call; hot loops of the tangent
    /// dynamics use this to share the transcendental evaluation.
    virtual void d1d2(double x, double& f1, double& f2) const {
        f1 = d1(x);
        f2 = d2(x);
    }

    /// Exact j-th derivative at the minimum; j=0 is the value at the minimum.
    virtual double deriv_at_min(int j) const = 0;

    /// Location of the minimum (0 for the normalized families, a for MLJ).
    virtual double min_location() const { return 0.0; }

    virtual bool in_domain(double x) const = 0;

    virtual PotentialKind kind() const = 0;

    /// Short parameter descriptor, e.g. "toda(lambda=-2)"; used in run metadata.
    virtual std::string describe() const = 0;
};

/** The exponential chain potential (e^{lambda x} - lambda x - 1)/lambda^2.

    Satisfies the normalization value(0)=0, d1(0)=0, d2(0)=1, d3(0)=lambda;
    all higher normalized Taylor coefficients equal 1.  Negative lambda puts
    the steep wall on the left, as in molecular potentials.
*/
class TodaPotential final : public Potential {
public:
    explicit TodaPotential(double lambda);

    double value(double x) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    double d3(double x) const override;
    void d1d2(double x, double& f1, double& f2) const override;
    double deriv_at_min(int j) const override;
    bool in_domain(double) const override { return true; }
    PotentialKind kind() const override { return PotentialKind::Toda; }
    std::string describe() const override;

    double lambda() const { return lambda_; }

private:
    double lambda_;
};

/** Mie-Lennard-Jones two-power molecular pair potential
    eps0/(n-m) * [ m (a/r)^n - n (a/r)^m ],  r > 0, n > m >= 1.

    a is the equilibrium distance (d1(a)=0), -eps0 the well depth.  The
    repulsive exponent n models hard-core repulsion in the large-n limit.
*/
class MljPotential final : public Potential {
public:
    MljPotential(int n, int m, double eps0, double a);

    double value(double r) const override;
    double d1(double r) const override;
    double d2(double r) const override;
    double d3(double r) const override;
    void d1d2(double r, double& f1, double& f2) const override;
    double deriv_at_min(int j) const override;
    double min_location() const override { return a_; }
    bool in_domain(double r) const override { return r > 0.0; }
    PotentialKind kind() const override { return PotentialKind::Mlj; }
    std::string describe() const override;

    int n() const { return n_; }
    int m() const { return m_; }
    double eps0() const { return eps0_; }
    double a() const { return a_; }

private:
    void check_domain(double r) const;
    int n_, m_;
    double eps0_, a_;
};

/** Normal form of the MLJ potential: minimum at 0, d2(0)=1, d3(0)=lambda.

    Closed form, with s = n+m+3 and u = 1 - lambda*x/s:
        [ u^{-n} - (n/m) u^{-m} + n/m - 1 ] / [ lambda^2 n (n-m) / s^2 ].
    Defined for u > 0 only; evaluating at or beyond the pole x = s/lambda is a
    domain error.  Near x=0 the closed form is a difference of near-equal
    quantities, so a short Taylor series (coefficients from the exact
    normalized-coefficient formula) is substituted for |lambda*x| < 1e-4.
*/
class NormalizedMljPotential final : public Potential {
public:
    NormalizedMljPotential(int n, int m, double lambda);

    double value(double x) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    double d3(double x) const override;
    void d1d2(double x, double& f1, double& f2) const override;
    double deriv_at_min(int j) const override;
    bool in_domain(double x) const override { return 1.0 - lambda_ * x / s_ > 0.0; }
    PotentialKind kind() const override { return PotentialKind::NormalizedMlj; }
    std::string describe() const override;

    int n() const { return n_; }
    int m() const { return m_; }
    double lambda() const { return lambda_; }
    /// Location of the repulsive pole, s/lambda.
    double pole() const { return s_ / lambda_; }

private:
    void check_domain(double x) const;
    int n_, m_;
    double lambda_;
    double s_;              // n + m + 3
    double denom_;          // lambda^2 n (n-m) / s^2
    double ratio_;          // n/m
    double k4_, k5_, k6_;   // exact normalized coefficients, for the small-x series
};

/** Taylor truncation of the exponential chain potential at order j:
    x^2/2 + lambda x^3/6 + sum_{i=4..j} lambda^{i-2} x^i / i!.
    Order 2 is the harmonic potential.
*/
class TaylorTodaPotential final : public Potential {
public:
    TaylorTodaPotential(int order, double lambda);

    double value(double x) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    double d3(double x) const override;
    double deriv_at_min(int j) const override;
    bool in_domain(double) const override { return true; }
    PotentialKind kind() const override { return PotentialKind::TaylorToda; }
    std::string describe() const override;

    int order() const { return order_; }
    double lambda() const { return lambda_; }

private:
    int order_;
    double lambda_;
};

/// Polynomial chain potential x^2/2 + alpha x^3/3 + beta x^4/4 + gamma x^5/5.
class FpuPotential final : public Potential {
public:
    FpuPotential(double alpha, double beta, double gamma = 0.0);

    double value(double x) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    double d3(double x) const override;
    double deriv_at_min(int j) const override;
    bool in_domain(double) const override { return true; }
    PotentialKind kind() const override { return PotentialKind::Fpu; }
    std::string describe() const override;

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }

private:
    double alpha_, beta_, gamma_;
};

/** Limit of the normalized MLJ potential for n -> infinity at fixed ratio
    delta = m/n in (0,1):

        (1+delta)^2 / (lambda^2 delta (1-delta)) *
        [ delta e^{lambda x/(1+delta)} - e^{delta lambda x/(1+delta)} + 1 - delta ].

    At delta=1/2 this is the Morse potential in normal form,
    9/(2 lambda^2) (e^{lambda x/3} - 1)^2; for delta -> 0 it tends to the
    exponential chain potential.
*/
class RatioLimitPotential final : public Potential {
public:
    RatioLimitPotential(double delta, double lambda);

    double value(double x) const override;
    double d1(double x) const override;
    double d2(double x) const override;
    double d3(double x) const override;
    double deriv_at_min(int j) const override;
    bool in_domain(double) const override { return true; }
    PotentialKind kind() const override { return PotentialKind::RatioLimit; }
    std::string describe() const override;

    double delta() const { return delta_; }
    double lambda() const { return lambda_; }
    /// Normalized Taylor coefficient of order j>=2 of this family,
    /// (1-delta^{j-1}) / ((1-delta)(1+delta)^{j-2}).
    double k_coeff(int j) const;

private:
    double delta_, lambda_;
    double pref_;     // (1+delta)^2 / (lambda^2 delta (1-delta))
    double c_;        // lambda/(1+delta), exponent of the first term
    double k4_, k5_, k6_;
};

/// Morse potential in normal form, 9/(2 lambda^2) (e^{lambda x/3} - 1)^2;
/// the fixed-ratio limit at delta=1/2.
double morse_limit_eval(double lambda, double x);

}  // namespace todamlj
