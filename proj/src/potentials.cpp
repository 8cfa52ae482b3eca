#include "todamlj/potentials.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "todamlj/normal_form.hpp"
#include "todamlj/util.hpp"

namespace todamlj {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// Horner sum of the normalized series x^2/2 + l x^3/6 + k4 l^2 x^4/24 + ...
// truncated after the x^6 term; used by the closed-form potentials where the
// exact expression cancels catastrophically near the origin.
double series_value(double x, double l, double k4, double k5, double k6) {
    const double lx = l * x;
    return x * x * (0.5 + lx * (1.0 / 6.0 + lx * (k4 / 24.0 + lx * (k5 / 120.0 + lx * k6 / 720.0))));
}

double series_d1(double x, double l, double k4, double k5, double k6) {
    const double lx = l * x;
    return x * (1.0 + lx * (0.5 + lx * (k4 / 6.0 + lx * (k5 / 24.0 + lx * k6 / 120.0))));
}

constexpr double kSeriesWindow = 1e-4;  // switch to the series for |lambda*x| below this

double factorial_term(int i) {
    double f = 1.0;
    for (int k = 2; k <= i; ++k) f *= k;
    return f;
}

}  // namespace

//------------------------------- TodaPotential -------------------------------

TodaPotential::TodaPotential(double lambda) : lambda_(lambda) {
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("TodaPotential: lambda must be finite and nonzero");
}

double TodaPotential::value(double x) const {
    const double lx = lambda_ * x;
    if (std::fabs(lx) < kSeriesWindow)
        return series_value(x, lambda_, 1.0, 1.0, 1.0);
    return (std::expm1(lx) - lx) / (lambda_ * lambda_);
}

double TodaPotential::d1(double x) const { return std::expm1(lambda_ * x) / lambda_; }

double TodaPotential::d2(double x) const { return std::exp(lambda_ * x); }

double TodaPotential::d3(double x) const { return lambda_ * std::exp(lambda_ * x); }

void TodaPotential::d1d2(double x, double& f1, double& f2) const {
    f2 = std::exp(lambda_ * x);
    f1 = (f2 - 1.0) / lambda_;
}

double TodaPotential::deriv_at_min(int j) const {
    if (j < 0) throw std::invalid_argument("deriv_at_min: negative order");
    if (j < 2) return 0.0;
    return ipow(lambda_, j - 2);
}

std::string TodaPotential::describe() const { return "toda(lambda=" + fmt(lambda_) + ")"; }

//-------------------------------- MljPotential --------------------------------

MljPotential::MljPotential(int n, int m, double eps0, double a)
    : n_(n), m_(m), eps0_(eps0), a_(a) {
    if (m < 1 || n <= m) throw std::invalid_argument("MljPotential: need n > m >= 1");
    if (!(eps0 > 0.0)) throw std::invalid_argument("MljPotential: eps0 must be positive");
    if (!(a > 0.0)) throw std::invalid_argument("MljPotential: a must be positive");
}

void MljPotential::check_domain(double r) const {
    if (!(r > 0.0))
        throw DomainError("MljPotential: r=" + fmt(r) + " outside domain r>0", r);
}

double MljPotential::value(double r) const {
    check_domain(r);
    const double q = a_ / r;
    const double qm = ipow(q, m_);
    const double qn = ipow(q, n_ - m_) * qm;
    return eps0_ / (n_ - m_) * (m_ * qn - n_ * qm);
}

double MljPotential::d1(double r) const {
    check_domain(r);
    const double q = a_ / r;
    const double qm = ipow(q, m_);
    const double qn = ipow(q, n_ - m_) * qm;
    return eps0_ * n_ * m_ / ((n_ - m_) * r) * (qm - qn);
}

double MljPotential::d2(double r) const {
    check_domain(r);
    const double q = a_ / r;
    const double qm = ipow(q, m_);
    const double qn = ipow(q, n_ - m_) * qm;
    return eps0_ * n_ * m_ / ((n_ - m_) * r * r) * ((n_ + 1) * qn - (m_ + 1) * qm);
}

double MljPotential::d3(double r) const {
    check_domain(r);
    const double q = a_ / r;
    const double qm = ipow(q, m_);
    const double qn = ipow(q, n_ - m_) * qm;
    return -eps0_ * n_ * m_ / ((n_ - m_) * r * r * r) *
           (double(n_ + 1) * (n_ + 2) * qn - double(m_ + 1) * (m_ + 2) * qm);
}

void MljPotential::d1d2(double r, double& f1, double& f2) const {
    check_domain(r);
    const double q = a_ / r;
    const double qm = ipow(q, m_);
    const double qn = ipow(q, n_ - m_) * qm;
    const double pref = eps0_ * n_ * m_ / ((n_ - m_) * r);
    f1 = pref * (qm - qn);
    f2 = pref / r * ((n_ + 1) * qn - (m_ + 1) * qm);
}

double MljPotential::deriv_at_min(int j) const {
    if (j < 0) throw std::invalid_argument("deriv_at_min: negative order");
    if (j == 0) return -eps0_;
    if (j == 1) return 0.0;
    const double num = rising(n_ + 1, j - 1) - rising(m_ + 1, j - 1);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * eps0_ * n_ * m_ * num / ((n_ - m_) * ipow(a_, j));
}

std::string MljPotential::describe() const {
    return "mlj(n=" + std::to_string(n_) + ",m=" + std::to_string(m_) +
           ",eps0=" + fmt(eps0_) + ",a=" + fmt(a_) + ")";
}

//--------------------------- NormalizedMljPotential ---------------------------

NormalizedMljPotential::NormalizedMljPotential(int n, int m, double lambda)
    : n_(n), m_(m), lambda_(lambda) {
    if (m < 1 || n <= m) throw std::invalid_argument("NormalizedMljPotential: need n > m >= 1");
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("NormalizedMljPotential: lambda must be finite and nonzero");
    s_ = n + m + 3;
    denom_ = lambda * lambda * n * (n - m) / (s_ * s_);
    ratio_ = double(n) / m;
    k4_ = k_coeff_mlj(n, m, 4);
    k5_ = k_coeff_mlj(n, m, 5);
    k6_ = k_coeff_mlj(n, m, 6);
}

void NormalizedMljPotential::check_domain(double x) const {
    if (!in_domain(x))
        throw DomainError("NormalizedMljPotential: x=" + fmt(x) +
                              " at or beyond the repulsive pole " + fmt(pole()),
                          x);
}

double NormalizedMljPotential::value(double x) const {
    check_domain(x);
    if (std::fabs(lambda_ * x) < kSeriesWindow)
        return series_value(x, lambda_, k4_, k5_, k6_);
    const double iu = 1.0 / (1.0 - lambda_ * x / s_);
    const double pm = ipow(iu, m_);
    const double pn = ipow(iu, n_ - m_) * pm;
    return (pn - ratio_ * pm + (ratio_ - 1.0)) / denom_;
}

double NormalizedMljPotential::d1(double x) const {
    check_domain(x);
    if (std::fabs(lambda_ * x) < kSeriesWindow)
        return series_d1(x, lambda_, k4_, k5_, k6_);
    const double iu = 1.0 / (1.0 - lambda_ * x / s_);
    const double pm1 = ipow(iu, m_ + 1);
    const double pn1 = ipow(iu, n_ - m_) * pm1;
    return lambda_ * n_ / s_ * (pn1 - pm1) / denom_;
}

double NormalizedMljPotential::d2(double x) const {
    check_domain(x);
    const double iu = 1.0 / (1.0 - lambda_ * x / s_);
    const double pm2 = ipow(iu, m_ + 2);
    const double pn2 = ipow(iu, n_ - m_) * pm2;
    return sq(lambda_ / s_) * n_ * ((n_ + 1) * pn2 - (m_ + 1) * pm2) / denom_;
}

double NormalizedMljPotential::d3(double x) const {
    check_domain(x);
    const double iu = 1.0 / (1.0 - lambda_ * x / s_);
    const double pm3 = ipow(iu, m_ + 3);
    const double pn3 = ipow(iu, n_ - m_) * pm3;
    return ipow(lambda_ / s_, 3) * n_ *
           (double(n_ + 1) * (n_ + 2) * pn3 - double(m_ + 1) * (m_ + 2) * pm3) / denom_;
}

void NormalizedMljPotential::d1d2(double x, double& f1, double& f2) const {
    check_domain(x);
    const double iu = 1.0 / (1.0 - lambda_ * x / s_);
    const double pm1 = ipow(iu, m_ + 1);
    const double pn1 = ipow(iu, n_ - m_) * pm1;
    f1 = (std::fabs(lambda_ * x) < kSeriesWindow)
             ? series_d1(x, lambda_, k4_, k5_, k6_)
             : lambda_ * n_ / s_ * (pn1 - pm1) / denom_;
    f2 = sq(lambda_ / s_) * n_ * ((n_ + 1) * pn1 * iu - (m_ + 1) * pm1 * iu) / denom_;
}

double NormalizedMljPotential::deriv_at_min(int j) const {
    if (j < 0) throw std::invalid_argument("deriv_at_min: negative order");
    if (j < 2) return 0.0;
    if (j == 2) return 1.0;
    if (j == 3) return lambda_;
    return ipow(lambda_, j - 2) * k_coeff_mlj(n_, m_, j);
}

std::string NormalizedMljPotential::describe() const {
    return "mlj-normalized(n=" + std::to_string(n_) + ",m=" + std::to_string(m_) +
           ",lambda=" + fmt(lambda_) + ")";
}

//---------------------------- TaylorTodaPotential ----------------------------

TaylorTodaPotential::TaylorTodaPotential(int order, double lambda)
    : order_(order), lambda_(lambda) {
    if (order < 2) throw std::invalid_argument("TaylorTodaPotential: order must be >= 2");
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("TaylorTodaPotential: lambda must be finite and nonzero");
}

double TaylorTodaPotential::value(double x) const {
    // sum_{i=2..order} lambda^{i-2} x^i / i!  via Horner in (lambda x)
    double acc = 1.0 / factorial_term(order_);
    for (int i = order_ - 1; i >= 2; --i) acc = 1.0 / factorial_term(i) + lambda_ * x * acc;
    return x * x * acc;
}

double TaylorTodaPotential::d1(double x) const {
    // sum_{i=2..order} lambda^{i-2} x^{i-1} / (i-1)!
    double acc = 1.0 / factorial_term(order_ - 1);
    for (int i = order_ - 1; i >= 2; --i) acc = 1.0 / factorial_term(i - 1) + lambda_ * x * acc;
    return x * acc;
}

double TaylorTodaPotential::d2(double x) const {
    double acc = 1.0 / factorial_term(order_ - 2);
    for (int i = order_ - 1; i >= 2; --i) acc = 1.0 / factorial_term(i - 2) + lambda_ * x * acc;
    return acc;
}

double TaylorTodaPotential::d3(double x) const {
    if (order_ < 3) return 0.0;
    double acc = lambda_ / factorial_term(order_ - 3);
    for (int i = order_ - 1; i >= 3; --i) acc = lambda_ / factorial_term(i - 3) + lambda_ * x * acc;
    return acc;
}

double TaylorTodaPotential::deriv_at_min(int j) const {
    if (j < 0) throw std::invalid_argument("deriv_at_min: negative order");
    if (j < 2 || j > order_) return 0.0;
    return ipow(lambda_, j - 2);
}

std::string TaylorTodaPotential::describe() const {
    return "taylor(order=" + std::to_string(order_) + ",lambda=" + fmt(lambda_) + ")";
}

//------------------------------- FpuPotential --------------------------------

FpuPotential::FpuPotential(double alpha, double beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma))
        throw std::invalid_argument("FpuPotential: coefficients must be finite");
}

double FpuPotential::value(double x) const {
    return x * x * (0.5 + x * (alpha_ / 3.0 + x * (beta_ / 4.0 + x * gamma_ / 5.0)));
}

double FpuPotential::d1(double x) const {
    return x * (1.0 + x * (alpha_ + x * (beta_ + x * gamma_)));
}

double FpuPotential::d2(double x) const {
    return 1.0 + x * (2.0 * alpha_ + x * (3.0 * beta_ + x * 4.0 * gamma_));
}

double FpuPotential::d3(double x) const {
    return 2.0 * alpha_ + x * (6.0 * beta_ + x * 12.0 * gamma_);
}

double FpuPotential::deriv_at_min(int j) const {
    switch (j) {
        case 0: case 1: return 0.0;
        case 2: return 1.0;
        case 3: return 2.0 * alpha_;
        case 4: return 6.0 * beta_;
        case 5: return 24.0 * gamma_;
        default:
            if (j < 0) throw std::invalid_argument("deriv_at_min: negative order");
            return 0.0;
    }
}

std::string FpuPotential::describe() const {
    return "fpu(alpha=" + fmt(alpha_) + ",beta=" + fmt(beta_) + ",gamma=" + fmt(gamma_) + ")";
}

//---------------------------- RatioLimitPotential ----------------------------

RatioLimitPotential::RatioLimitPotential(double delta, double lambda)
    : delta_(delta), lambda_(lambda) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("RatioLimitPotential: delta must be in (0,1)");
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("RatioLimitPotential: lambda must be finite and nonzero");
    pref_ = sq(1.0 + delta) / (lambda * lambda * delta * (1.0 - delta));
    c_ = lambda / (1.0 + delta);
    k4_ = k_coeff(4);
    k5_ = k_coeff(5);
    k6_ = k_coeff(6);
}

double RatioLimitPotential::k_coeff(int j) const {
    if (j < 2) throw std::invalid_argument("k_coeff: order must be >= 2");
    return (1.0 - ipow(delta_, j - 1)) / ((1.0 - delta_) * ipow(1.0 + delta_, j - 2));
}

double RatioLimitPotential::value(double x) const {
    if (std::fabs(lambda_ * x) < kSeriesWindow)
        return series_value(x, lambda_, k4_, k5_, k6_);
    return pref_ * (delta_ * std::exp(c_ * x) - std::exp(delta_ * c_ * x) + 1.0 - delta_);
}

double RatioLimitPotential::d1(double x) const {
    if (std::fabs(lambda_ * x) < kSeriesWindow)
        return series_d1(x, lambda_, k4_, k5_, k6_);
    return pref_ * delta_ * c_ * (std::exp(c_ * x) - std::exp(delta_ * c_ * x));
}

double RatioLimitPotential::d2(double x) const {
    return pref_ * delta_ * c_ * c_ *
           (std::exp(c_ * x) - delta_ * std::exp(delta_ * c_ * x));
}

double RatioLimitPotential::d3(double x) const {
    return pref_ * delta_ * c_ * c_ * c_ *
           (std::exp(c_ * x) - delta_ * delta_ * std::exp(delta_ * c_ * x));
}

double RatioLimitPotential::deriv_at_min(int j) const {
    if (j < 0) throw std::invalid_argument("deriv_at_min: negative order");
    if (j < 2) return 0.0;
    return ipow(lambda_, j - 2) * k_coeff(j);
}

std::string RatioLimitPotential::describe() const {
    return "ratio-limit(delta=" + fmt(delta_) + ",lambda=" + fmt(lambda_) + ")";
}

//------------------------------------------------------------------------------

double morse_limit_eval(double lambda, double x) {
    const double e = std::expm1(lambda * x / 3.0);
    return 4.5 / (lambda * lambda) * e * e;
}

}  // namespace todamlj
