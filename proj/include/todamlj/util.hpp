#pragma once

#include <cmath>
#include <cstdint>

namespace todamlj {

inline double sq(double x) { return x * x; }

/// x^k for non-negative integer k by binary exponentiation.
inline double ipow(double x, unsigned k) {
    double r = 1.0, b = x;
    while (k) {
        if (k & 1u) r *= b;
        b *= b;
        k >>= 1u;
    }
    return r;
}

/// Rising factorial a(a+1)...(a+k-1) as a double; k=0 gives 1.
inline double rising(double a, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r *= a + i;
    return r;
}

}  // namespace todamlj
