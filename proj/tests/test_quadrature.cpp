#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "betwise/quadrature.hpp"
#include "test_support.hpp"

using betwise::integrate;
using betwise::integrate_piecewise;

TEST_CASE("polynomial and exponential integrals") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    CHECK(integrate([](double) { return 1.0; }, 0.3, 0.3) == 0.0);
}

TEST_CASE("reversed limits flip the sign") {
    const double forward = integrate([](double x) { return x; }, 0.0, 1.0);
    const double backward = integrate([](double x) { return x; }, 1.0, 0.0);
    CHECK(forward == doctest::Approx(-backward).epsilon(1e-14));
}

TEST_CASE("integrable endpoint singularity") {
    // d/dx sqrt(x) -> integral of 1/(2 sqrt x) over [0,1] is 1
    CHECK(integrate([](double x) { return 0.5 / std::sqrt(x); }, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("agreement with the independent Simpson oracle") {
    auto f = [](double x) { return std::sin(3.0 * x) + x * x * x; };
    const double oracle = testsupport::simpson(f, 0.0, 1.0, 1e-12);
    CHECK(integrate(f, 0.0, 1.0) == doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("piecewise handles interior jumps") {
    // step function: 2 on [0, 0.25], 0.5 on (0.25, 1]
    auto f = [](double x) { return x <= 0.25 ? 2.0 : 0.5; };
    const double value = integrate_piecewise(f, {0.0, 0.25, 1.0}, 1e-12);
    CHECK(value == doctest::Approx(2.0 * 0.25 + 0.5 * 0.75).epsilon(1e-12));
}
