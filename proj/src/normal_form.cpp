#include "todamlj/normal_form.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "todamlj/util.hpp"

namespace todamlj {

namespace {

using int128 = __int128;

// Checked multiply; the rising products reach ~1e23 for n ~ 2000, j = 8,
// far inside the 128-bit range, but guard anyway for out-of-range requests.
int128 mul_checked(int128 a, int128 b) {
    if (a > 0) {
        const int128 kMax = static_cast<int128>((~__uint128_t(0)) >> 1);
        if (b > kMax / a) throw std::overflow_error("k_coeff_mlj: 128-bit overflow");
    }
    return a * b;
}

// (a+1)(a+2)...(a+k) exactly.
int128 rising_exact(long a, int k) {
    int128 r = 1;
    for (int i = 1; i <= k; ++i) r = mul_checked(r, int128(a + i));
    return r;
}

long double to_ld(int128 v) {
    bool neg = v < 0;
    if (neg) v = -v;
    // split into two 64-bit halves to convert exactly
    const auto hi = static_cast<unsigned long long>(v >> 64);
    const auto lo = static_cast<unsigned long long>(v & ~0ULL);
    long double r = static_cast<long double>(hi) * 18446744073709551616.0L + lo;
    return neg ? -r : r;
}

void check_nmj(int n, int m, int j) {
    if (m < 1 || n <= m)
        throw std::invalid_argument("k_coeff_mlj: need n > m >= 1, got n=" +
                                    std::to_string(n) + " m=" + std::to_string(m));
    if (j < 4) throw std::invalid_argument("k_coeff_mlj: need j >= 4");
}

}  // namespace

double CoefficientSequence::k_at(int j) const {
    if (j < 4 || j > j_max()) throw std::out_of_range("CoefficientSequence: j out of range");
    return k[j - 4];
}

NormalizeResult normalize_generic(std::span<const double> derivs_from_2,
                                  double f_at_a, double a, double lambda) {
    if (derivs_from_2.size() < 2)
        throw std::invalid_argument("normalize_generic: need at least f''(a) and f'''(a)");
    const double f2 = derivs_from_2[0];
    const double f3 = derivs_from_2[1];
    if (!(f2 > 0.0))
        throw std::invalid_argument("normalize_generic: class condition f''(a) > 0 violated");
    if (f3 == 0.0 || !std::isfinite(f3))
        throw std::invalid_argument("normalize_generic: class condition f'''(a) != 0 violated");
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw std::invalid_argument("normalize_generic: lambda must be nonzero");

    NormalizeResult res;
    res.map.A = f3 * f3 / (lambda * lambda * f2 * f2 * f2);
    res.map.B = -res.map.A * f_at_a;
    res.map.C = lambda * f2 / f3;
    res.map.D = a;
    res.map.lambda = lambda;

    res.coeffs.lambda = lambda;
    res.coeffs.k.reserve(derivs_from_2.size() >= 2 ? derivs_from_2.size() - 2 : 0);
    for (std::size_t i = 2; i < derivs_from_2.size(); ++i) {
        const int j = static_cast<int>(i) + 2;
        const double fj = derivs_from_2[i];
        res.coeffs.k.push_back(std::pow(f2, j - 3) / std::pow(f3, j - 2) * fj);
    }
    return res;
}

double k_coeff_mlj(int n, int m, int j) {
    check_nmj(n, m, j);
    const int128 num = rising_exact(n, j - 1) - rising_exact(m, j - 1);
    int128 den = n - m;
    for (int i = 0; i < j - 2; ++i) den = mul_checked(den, int128(n + m + 3));
    return static_cast<double>(to_ld(num) / to_ld(den));
}

double delta_mlj(int n, int m, int j) {
    check_nmj(n, m, j);
    int128 den = n - m;
    for (int i = 0; i < j - 2; ++i) den = mul_checked(den, int128(n + m + 3));
    const int128 num = rising_exact(n, j - 1) - rising_exact(m, j - 1) - den;
    return static_cast<double>(to_ld(num) / to_ld(den));
}

std::vector<DeltaRow> delta_table(int m, std::span<const int> j_list, int n_over_m_max) {
    if (m < 1) throw std::invalid_argument("delta_table: m must be >= 1");
    if (n_over_m_max < 2) throw std::invalid_argument("delta_table: n/m range must reach 2");
    for (int j : j_list)
        if (j < 4) throw std::invalid_argument("delta_table: every j must be >= 4");

    std::vector<DeltaRow> rows;
    rows.reserve(static_cast<std::size_t>(n_over_m_max - 1) * j_list.size());
    for (int q = 2; q <= n_over_m_max; ++q)
        for (int j : j_list) rows.push_back({m * q, q, j, delta_mlj(m * q, m, j)});
    return rows;
}

double fpu_delta4(double alpha, double beta) {
    if (alpha == 0.0 || !std::isfinite(alpha))
        throw std::invalid_argument("fpu_delta4: alpha must be nonzero");
    return 3.0 * beta / (2.0 * alpha * alpha) - 1.0;
}

}  // namespace todamlj
