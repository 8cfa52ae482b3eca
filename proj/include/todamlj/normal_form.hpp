#pragma once

#include <span>
#include <vector>

#include "todamlj/potentials.hpp"

namespace todamlj {

/** Affine change of representative f~(xi) = A f(C xi + D) + B, A > 0, C != 0.

    Chosen so that f~ has its minimum at the origin with value 0, second
    derivative 1 and third derivative lambda.
*/
struct AffineNormalization {
    double A, B, C, D;
    double lambda;

    /// Apply the map to a source potential at the point xi.
    double apply(const Potential& f, double xi) const { return A * f.value(C * xi + D) + B; }
};

/** Normalized Taylor coefficients k_j, j >= 4, of an equivalence class.
    The exponential chain potential has k_j = 1 for every j.
*/
struct CoefficientSequence {
    double lambda = 0.0;
    std::vector<double> k;  // k[0] is k_4

    int j_max() const { return 3 + static_cast<int>(k.size()); }
    double k_at(int j) const;  // j in [4, j_max]
};

struct NormalizeResult {
    AffineNormalization map;
    CoefficientSequence coeffs;
};

/** Normalize a potential with a generic minimum at a from its derivatives.

    `derivs_from_2` holds [f''(a), f'''(a), ..., f^{(jmax)}(a)]; requires
    f''(a) > 0, f'''(a) != 0 and lambda != 0, otherwise throws
    std::invalid_argument naming the failing condition.  Returns the affine
    map with
        C = lambda f''(a)/f'''(a),  D = a,
        A = [f'''(a)]^2 / (lambda^2 [f''(a)]^3),  B = -A f(a),
    and the coefficients k_j = [f''(a)]^{j-3} f^{(j)}(a) / [f'''(a)]^{j-2}.

    Derivatives are taken as data, not computed here: callers pick their own
    source (analytic formulas for the potentials in this library).
*/
NormalizeResult normalize_generic(std::span<const double> derivs_from_2,
                                  double f_at_a, double a, double lambda);

/** Normalized coefficient of the MLJ family in closed form,

        k_{nm,j} = [ (n+1)...(n+j-1) - (m+1)...(m+j-1) ]
                   / [ (n-m) (n+m+3)^{j-2} ],

    evaluated in exact integer arithmetic (128-bit) and converted to double at
    the end, so the difference of rising products is computed without
    cancellation.  Requires n > m >= 1, j >= 4.
*/
double k_coeff_mlj(int n, int m, int j);

/// k_coeff_mlj(n,m,j) - 1, with the subtraction done in exact arithmetic.
double delta_mlj(int n, int m, int j);

struct DeltaRow {
    int n;
    int ratio;   // n/m
    int j;
    double delta;
};

/// Rows (n = m*2 .. m*n_over_m_max, j in j_list) of delta_mlj, integer n only.
std::vector<DeltaRow> delta_table(int m, std::span<const int> j_list, int n_over_m_max);

/// Distance-to-exponential diagnostic of the quartic polynomial chain
/// potential: 3*beta/(2*alpha^2) - 1.  alpha = 0 is rejected.
double fpu_delta4(double alpha, double beta);

}  // namespace todamlj
