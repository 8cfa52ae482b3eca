#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "test_util.hpp"
#include "todamlj/potentials.hpp"
#include "todamlj/rng.hpp"

using namespace todamlj;

namespace {

// High-precision evaluation of the normalized MLJ closed form, used as an
// independent oracle for the double implementation.
long double vnm_longdouble(int n, int m, long double l, long double xi) {
    const long double s = n + m + 3;
    const long double u = 1.0L - l * xi / s;
    const long double num =
        powl(u, -n) - (long double)n / m * powl(u, -m) + (long double)n / m - 1.0L;
    return num / (l * l * n * (n - m) / (s * s));
}

}  // namespace

TEST_SUITE_BEGIN("potentials");

TEST_CASE("toda basics") {
    TodaPotential toda(-2.0);
    CHECK(toda.value(0.0) == 0.0);
    CHECK(toda.d1(0.0) == 0.0);
    CHECK(toda.d2(0.0) == 1.0);
    CHECK(toda.d3(0.0) == -2.0);
    // frozen: (e^{-2} + 1)/4 evaluated in extended precision
    CHECK(toda.value(1.0) == doctest::Approx(0.28383382080915317).epsilon(1e-15));
    // nonnegative with the only zero at the origin, including the series window
    for (double x : {-3.0, -1.0, -1e-3, -1e-6, 1e-7, 1e-5, 0.5, 2.0, 10.0}) {
        CHECK(toda.value(x) > 0.0);
    }
    CHECK_THROWS_AS(TodaPotential(0.0), std::invalid_argument);
}

TEST_CASE("toda deriv_at_min gives the exponential coefficients") {
    TodaPotential toda(-2.0);
    CHECK(toda.deriv_at_min(0) == 0.0);
    CHECK(toda.deriv_at_min(1) == 0.0);
    for (int j = 2; j <= 10; ++j)
        CHECK(toda.deriv_at_min(j) == doctest::Approx(std::pow(-2.0, j - 2)).epsilon(1e-15));
}

TEST_CASE("mlj well and tails") {
    MljPotential mlj(12, 6, 1.0, 1.0);
    CHECK(mlj.value(1.0) == -1.0);
    CHECK(mlj.d1(1.0) == 0.0);
    CHECK(mlj.value(1e-2) > 1e20);
    CHECK(std::fabs(mlj.value(1e3)) < 1e-17);
    CHECK(mlj.d2(1.0) == doctest::Approx(72.0).epsilon(1e-14));          // eps0 n m / a^2
    CHECK(mlj.d3(1.0) == doctest::Approx(-72.0 * 21.0).epsilon(1e-14));  // -eps0 n m (n+m+3)/a^3

    MljPotential scaled(12, 6, 1.7, 2.3);
    CHECK(scaled.value(2.3) == doctest::Approx(-1.7).epsilon(1e-15));
    CHECK(std::fabs(scaled.d1(2.3)) < 1e-15);

    SUBCASE("domain error carries the offending point") {
        try {
            mlj.value(-0.5);
            FAIL("expected DomainError");
        } catch (const DomainError& e) {
            CHECK(e.offending_x() == -0.5);
        }
    }
    CHECK_THROWS_AS(MljPotential(6, 12, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MljPotential(12, 6, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("normalized mlj normal-form conditions and pole") {
    NormalizedMljPotential v(12, 6, -2.0);
    CHECK(v.value(0.0) == 0.0);
    CHECK(v.d1(0.0) == 0.0);
    CHECK(v.d2(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.d3(0.0) == doctest::Approx(-2.0).epsilon(1e-10));
    // cross-check d3 against central differences of d2
    CHECK(testutil::fd1([&](double x) { return v.d2(x); }, 0.0, 1e-4) ==
          doctest::Approx(-2.0).epsilon(1e-6));

    CHECK(v.pole() == doctest::Approx(-10.5));
    CHECK_THROWS_AS(v.value(-10.5), DomainError);
    CHECK_THROWS_AS(v.d1(-11.0), DomainError);
    CHECK(v.in_domain(-10.4));
    CHECK(!v.in_domain(-10.6));
}

TEST_CASE("normalized mlj matches an extended-precision oracle near the origin") {
    NormalizedMljPotential v(12, 6, -2.0);
    for (double x = 1e-9; x < 1.0; x *= 3.7) {
        for (double sign : {-1.0, 1.0}) {
            const double got = v.value(sign * x);
            const double want = static_cast<double>(vnm_longdouble(12, 6, -2.0L, sign * x));
            if (x >= 1e-2)
                CHECK(std::fabs(got - want) <= 1e-12 * std::fabs(want));
            else
                // below the cancellation scale both routes are absolutely,
                // not relatively, accurate
                CHECK(std::fabs(got - want) <= 1e-14);
        }
    }
}

TEST_CASE("taylor toda truncations") {
    TaylorTodaPotential harmonic(2, -2.0);
    CHECK(harmonic.value(0.7) == doctest::Approx(0.245).epsilon(1e-15));
    CHECK(harmonic.d2(0.7) == 1.0);
    CHECK(harmonic.d3(0.7) == 0.0);

    TaylorTodaPotential t5(5, -2.0);
    const double x = 0.37;
    double expect = x * x / 2.0;
    double pw = x * x;
    for (int i = 3; i <= 5; ++i) {
        pw *= x;
        double fact = 1.0;
        for (int k = 2; k <= i; ++k) fact *= k;
        expect += std::pow(-2.0, i - 2) * pw / fact;
    }
    CHECK(t5.value(x) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(t5.deriv_at_min(5) == doctest::Approx(-8.0));
    CHECK(t5.deriv_at_min(6) == 0.0);
    CHECK_THROWS_AS(TaylorTodaPotential(1, -2.0), std::invalid_argument);
}

TEST_CASE("fpu polynomial") {
    FpuPotential fpu(-1.0, 2.0, 0.5);
    const double x = -0.83;
    CHECK(fpu.value(x) ==
          doctest::Approx(x * x / 2 - x * x * x / 3 + 2 * x * x * x * x / 4 +
                          0.5 * x * x * x * x * x / 5)
              .epsilon(1e-14));
    CHECK(fpu.deriv_at_min(3) == -2.0);
    CHECK(fpu.deriv_at_min(4) == 12.0);
    CHECK(fpu.deriv_at_min(5) == 12.0);
}

TEST_CASE("ratio limit: morse at delta=1/2, toda as delta->0") {
    RatioLimitPotential half(0.5, -2.0);
    // frozen: 9/(2 lambda^2) (e^{lambda/3} - 1)^2 at lambda=-2, x=1
    CHECK(morse_limit_eval(-2.0, 0.0) == 0.0);
    CHECK(morse_limit_eval(-2.0, 1.0) == doctest::Approx(0.26635826255686056).epsilon(1e-14));
    for (int i = 0; i <= 60; ++i) {
        const double x = -1.0 + 3.0 * i / 60.0;
        CHECK(std::fabs(half.value(x) - morse_limit_eval(-2.0, x)) <= 1e-12);
    }

    TodaPotential toda(-2.0);
    double prev_c = 0.0;
    bool first = true;
    for (double delta : {0.1, 0.05, 0.025}) {
        RatioLimitPotential r(delta, -2.0);
        double sup = 0.0;
        for (int i = 0; i <= 120; ++i) {
            const double x = -1.0 + 3.0 * i / 120.0;
            sup = std::max(sup, std::fabs(r.value(x) - toda.value(x)));
        }
        const double c = sup / delta;
        if (!first) CHECK(c <= 1.2 * prev_c);  // sup bounded by C*delta
        prev_c = first ? c : std::max(prev_c, c);
        first = false;
    }
}

TEST_CASE("normal-form conditions across the normalized family") {
    const double lambda = -2.0;
    std::vector<std::unique_ptr<Potential>> family;
    family.push_back(std::make_unique<TodaPotential>(lambda));
    family.push_back(std::make_unique<NormalizedMljPotential>(12, 6, lambda));
    family.push_back(std::make_unique<NormalizedMljPotential>(96, 7, lambda));
    family.push_back(std::make_unique<TaylorTodaPotential>(3, lambda));
    family.push_back(std::make_unique<TaylorTodaPotential>(8, lambda));
    family.push_back(std::make_unique<RatioLimitPotential>(0.3, lambda));
    for (const auto& p : family) {
        CAPTURE(p->describe());
        CHECK(std::fabs(p->value(0.0)) <= 1e-12);
        CHECK(std::fabs(p->d1(0.0)) <= 1e-12);
        CHECK(std::fabs(p->d2(0.0) - 1.0) <= 1e-12);
        CHECK(std::fabs(p->d3(0.0) - lambda) <= 1e-10);
    }
}

TEST_CASE("analytic derivatives agree with finite differences") {
    std::vector<std::unique_ptr<Potential>> pots;
    pots.push_back(std::make_unique<TodaPotential>(-2.0));
    pots.push_back(std::make_unique<MljPotential>(12, 6, 1.0, 1.0));
    pots.push_back(std::make_unique<MljPotential>(9, 7, 1.7, 2.3));
    pots.push_back(std::make_unique<NormalizedMljPotential>(12, 6, -2.0));
    pots.push_back(std::make_unique<NormalizedMljPotential>(48, 6, -2.0));
    pots.push_back(std::make_unique<TaylorTodaPotential>(6, -2.0));
    pots.push_back(std::make_unique<FpuPotential>(-1.0, 2.0, 0.0));
    pots.push_back(std::make_unique<RatioLimitPotential>(0.4, -2.0));

    Rng rng(20240817);
    for (const auto& p : pots) {
        CAPTURE(p->describe());
        const bool molecular = p->kind() == PotentialKind::Mlj;
        const double a = p->min_location();
        for (int trial = 0; trial < 20; ++trial) {
            const double x = molecular ? a * rng.uniform(0.8, 3.0) : rng.uniform(-1.2, 2.0);
            const double h = 1e-5 * std::max(1.0, std::fabs(x));
            const double e1 = testutil::mixed_err(
                p->d1(x), testutil::fd1([&](double t) { return p->value(t); }, x, h));
            const double e2 = testutil::mixed_err(
                p->d2(x), testutil::fd1([&](double t) { return p->d1(t); }, x, h));
            const double e3 = testutil::mixed_err(
                p->d3(x), testutil::fd1([&](double t) { return p->d2(t); }, x, h));
            CHECK(e1 <= 1e-6);
            CHECK(e2 <= 1e-6);
            CHECK(e3 <= 1e-6);
        }
    }
}

TEST_CASE("pointwise convergence of normalized mlj to toda") {
    TodaPotential toda(-2.0);
    const std::vector<int> ns = {12, 24, 48, 96, 192};
    std::vector<std::unique_ptr<NormalizedMljPotential>> vs;
    for (int n : ns) vs.push_back(std::make_unique<NormalizedMljPotential>(n, 6, -2.0));
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 3.0 * i / 200.0;
        const double t = toda.value(x);
        double prev = 1e300;
        for (std::size_t k = 0; k < ns.size(); ++k) {
            const double diff = std::fabs(vs[k]->value(x) - t);
            CHECK(diff <= prev + 1e-14);          // decreases as n doubles
            CHECK(ns[k] * diff <= 10.0);          // n * |difference| stays bounded
            prev = diff;
        }
    }
}

TEST_SUITE_END();
