#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testutil {

// Central finite difference of first order.
inline double fd1(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// |a-b| relative to max(1, |a|, |b|).
inline double mixed_err(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Dense Gaussian elimination with partial pivoting; used by the polynomial
// fits in the reduction tests.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (A[piv][col] == 0.0) throw std::runtime_error("solve_linear: singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

// Least-squares polynomial fit via normal equations.
inline std::vector<double> lstsq(const std::vector<std::vector<double>>& rows,
                                 const std::vector<double>& rhs) {
    const int n = static_cast<int>(rows[0].size());
    std::vector<std::vector<double>> ata(n, std::vector<double>(n, 0.0));
    std::vector<double> atb(n, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int i = 0; i < n; ++i) {
            atb[i] += rows[r][i] * rhs[r];
            for (int j = 0; j < n; ++j) ata[i][j] += rows[r][i] * rows[r][j];
        }
    }
    return solve_linear(ata, atb);
}

}  // namespace testutil
